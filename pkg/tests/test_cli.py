"""
Tests for configuration, parsers, renderers, commands and the CLI.
"""

import json
import os
from fractions import Fraction

import numpy as np
import pytest

from pycda.chain.kernels import transition_matrix
from pycda.chain.solvers import invariant_distribution
from pycda.cli import build_parser, load_config, main
from pycda.commands import cmd_sweep, delta_percent
from pycda.core.base import ModelParams
from pycda.core.config import ExperimentConfig
from pycda.core.exceptions import ParameterError, SolverError
from pycda.parsers import ConfigParser, DistributionCsvParser, MatrixCsvParser
from pycda.renderers import CsvRenderer, JsonRenderer, error_payload, format_cell, get_renderer, version_tag


def read(path):
    with open(path, 'rb') as f:
        return f.read()


class TestExperimentConfig:
    """Tests for the layered configuration."""

    def test_defaults(self):
        """Test that an empty config validates with the documented defaults."""
        config = ExperimentConfig().validate()
        assert config.seed == 20150601
        assert config.effective_burn_in == 100_000
        assert config.grid[0] == (10, 5)

    def test_layers(self):
        """Test that flag values override file values unless they are None."""
        config = ExperimentConfig.from_sources({'N': 20, 'rho': 0.1}, {'N': 30, 'rho': None})
        assert config.N == 30
        assert config.rho == 0.1

    @pytest.mark.parametrize("overrides", [
        {'n': 0},
        {'events': 10, 'burn_in': 10},
        {'format': 'xml'},
        {'workers': 0},
        {'opening': 99},
        {'rho_grid': (0.1, -1.0)},
        {'step_unit': 'ticks'},
    ])
    def test_validation(self, overrides):
        """Test that invalid settings raise ParameterError."""
        with pytest.raises(ParameterError):
            ExperimentConfig.from_sources(overrides).validate()

    def test_unknown_key(self):
        """Test that unknown config keys are rejected."""
        with pytest.raises(ParameterError):
            ExperimentConfig().merged({'lambda': 1.0})


class TestConfigParser:
    """Tests for key = value files."""

    def test_parse(self):
        content = """
        # sweep settings
        N = 11
        rho = 0.05   # trailing comment
        events = 1e5
        grid = 10:5, 40:10
        rho_grid = 0.01, 0.5
        exact = yes
        bins = none
        step_unit = Trades
        """
        values = ConfigParser.from_string(content).load()
        assert values == {
            'N': 11, 'rho': 0.05, 'events': 100_000, 'grid': ((10, 5), (40, 10)),
            'rho_grid': (0.01, 0.5), 'exact': True, 'bins': None, 'step_unit': 'trades',
        }

    def test_unknown_key(self):
        """Test that an unknown key in a config file is rejected."""
        with pytest.raises(ParameterError):
            ConfigParser().parse("speed = 3")

    def test_bad_value(self):
        """Test that a value of the wrong type is rejected."""
        with pytest.raises(ParameterError):
            ConfigParser().parse("N = ten")

    def test_missing_file(self, tmp_path):
        """Test that a missing config file raises FileNotFoundError."""
        with pytest.raises(FileNotFoundError):
            ConfigParser.from_file(tmp_path / "missing.cfg")


class TestRenderers:
    """Tests for CSV and JSON output."""

    def test_format_cell(self):
        """Test that cells are formatted consistently by type."""
        assert format_cell(1 / 3) == '0.333333333333'
        assert format_cell(np.float64(0.02)) == '0.02'
        assert format_cell(np.int64(7)) == '7'
        assert format_cell(Fraction(2, 3)) == '2/3'
        assert format_cell(None) == ''
        assert format_cell(True) == 'true'

    def test_csv_layout(self, tmp_path):
        """Test that CSV output has comments, a header and empty cells for None."""
        path = CsvRenderer().render(
            {'comments': ['N=2'], 'columns': ['a', 'b'], 'rows': [[1, 0.5], [2, None]]},
            str(tmp_path / 'sub' / 't.csv'),
        )
        assert read(path) == b'# N=2\na,b\n1,0.5\n2,\n'

    def test_csv_rejects_ragged_rows(self, tmp_path):
        """Test that rows wider than the header are rejected."""
        with pytest.raises(ValueError):
            CsvRenderer().render({'columns': ['a'], 'rows': [[1, 2]]}, str(tmp_path / 't.csv'))

    def test_json_table_records(self, tmp_path):
        """Test that JSON tables are written as records."""
        path = JsonRenderer().render({'columns': ['a', 'b'], 'rows': [[1, np.float64(2.5)]]}, str(tmp_path / 't.json'))
        data = json.loads(read(path))
        assert data['records'] == [{'a': 1, 'b': 2.5}]

    def test_helpers(self):
        """Test that renderer lookup, version tags and error payloads work."""
        assert isinstance(get_renderer('json'), JsonRenderer)
        with pytest.raises(ParameterError):
            get_renderer('xml')
        assert version_tag('fallback')
        payload = error_payload(SolverError('singular'), 'fpt')
        assert payload == {'error': 'SolverError', 'message': 'singular', 'command': 'fpt'}


class TestChainCommand:
    """Tests for the chain subcommand."""

    def test_writes_matrix_and_distribution(self, tmp_path, capsys):
        """Test that the chain command writes a matrix and distribution that read back."""
        assert main(['chain', '--N', '10', '--n', '2', '-o', str(tmp_path)]) == 0
        P = MatrixCsvParser.from_file(tmp_path / 'transition_matrix.csv').load()
        np.testing.assert_allclose(P.as_float(), transition_matrix(ModelParams.from_rho(10, 2, 1.0)).as_float(),
                                   atol=1e-12)
        pi = DistributionCsvParser.from_file(tmp_path / 'invariant_distribution.csv').load()
        np.testing.assert_allclose(pi.probs, invariant_distribution(P).probs, atol=1e-11)
        record = json.loads(read(tmp_path / 'chain_run.json'))
        assert record['command'] == 'chain'
        assert record['payload']['residual'] <= 1e-12
        assert 'Wrote chain outputs' in capsys.readouterr().out

    def test_uniform_for_unit_jumps(self, tmp_path):
        """Test that unit jumps write a uniform distribution."""
        assert main(['chain', '--N', '50', '--n', '1', '-o', str(tmp_path)]) == 0
        lines = read(tmp_path / 'invariant_distribution.csv').decode().splitlines()
        assert len(lines) == 51
        assert all(line.split(',')[1] == '0.02' for line in lines[1:])

    def test_exact_matrix(self, tmp_path):
        """Test that --exact writes rational entries."""
        assert main(['chain', '--N', '10', '--n', '2', '--exact', '-o', str(tmp_path)]) == 0
        P = MatrixCsvParser.from_file(tmp_path / 'transition_matrix.csv').load()
        assert P.is_exact
        assert P[1, 1] == Fraction(2, 3)
        assert P[2, 2] == Fraction(5, 12)

    def test_invalid_cutoff_writes_nothing(self, tmp_path, capsys):
        """Test that an invalid cut-off exits with 2 and writes no files."""
        out = tmp_path / 'out'
        assert main(['chain', '--N', '10', '--n', '0', '-o', str(out)]) == 2
        error = json.loads(capsys.readouterr().err)
        assert error['error'] == 'ParameterError'
        assert error['command'] == 'chain'
        assert not out.exists()


class TestSimulateCommand:
    """Tests for the simulate subcommand."""

    def test_same_seed_same_bytes(self, tmp_path):
        """Test that the same seed writes byte-identical output."""
        args = ['simulate', '--N', '10', '--n', '2', '--rho', '0.01', '--events', '5000', '--seed', '3']
        assert main(args + ['-o', str(tmp_path / 'a')]) == 0
        assert main(args + ['-o', str(tmp_path / 'b')]) == 0
        first = read(tmp_path / 'a' / 'price_frequencies.csv')
        assert first == read(tmp_path / 'b' / 'price_frequencies.csv')
        assert first.startswith(b'price,empirical,low_traffic\n')
        record = json.loads(read(tmp_path / 'a' / 'simulate_run.json'))
        assert 0 <= record['payload']['total_variation'] <= 1

    def test_json_format(self, tmp_path):
        """Test that --format json writes a JSON table."""
        args = ['simulate', '--N', '10', '--n', '2', '--events', '2000', '-f', 'json', '-o', str(tmp_path)]
        assert main(args) == 0
        data = json.loads(read(tmp_path / 'price_frequencies.json'))
        assert len(data['records']) == 10

    def test_trade_unit(self, tmp_path):
        """Test that --step-unit trades is recorded in the run payload."""
        args = ['simulate', '--N', '10', '--n', '2', '--rho', '1e-3', '--events', '3000', '--step-unit', 'trades',
                '-o', str(tmp_path)]
        assert main(args) == 0
        payload = json.loads(read(tmp_path / 'simulate_run.json'))['payload']
        assert payload['step_unit'] == 'trades'
        assert (payload['steps'], payload['burn_in']) == (3000, 300)

    def test_rejects_unknown_step_unit(self, tmp_path, capsys):
        """Test that an unknown step unit exits with 2 before writing output."""
        args = ['simulate', '--events', '2000', '--step-unit', 'ticks', '-o', str(tmp_path)]
        assert main(args) == 2
        assert json.loads(capsys.readouterr().err)['error'] == 'ParameterError'
        assert not (tmp_path / 'price_frequencies.csv').exists()


class TestFptCommand:
    """Tests for the fpt subcommand."""

    def test_mixture_outputs(self, tmp_path):
        """Test that an odd grid with unit jumps writes every mixture output."""
        args = ['fpt', '--N', '5', '--n', '1', '--rho', '0.5', '--replicates', '60', '--ks-replicates', '50',
                '--curve-rhos', '0.2,0.5', '-o', str(tmp_path)]
        assert main(args) == 0
        for name in ('fpt_samples', 'log_fpt_histogram', 'ecdf_pair', 'ks_test', 'mean_log_curve', 'fpt_summary'):
            assert (tmp_path / f'{name}.csv').exists(), name
        record = json.loads(read(tmp_path / 'fpt_run.json'))
        payload = record['payload']
        assert payload['samples'] == 60
        assert payload['mixture_mean_t'] == pytest.approx(payload['low_traffic_mean_t'])
        assert record['seeds']['replicate']['master_seed'] == 20150601

    def test_no_mixture_for_even_grid(self, tmp_path):
        """Test that the mixture outputs are skipped for an even grid."""
        args = ['fpt', '--N', '6', '--n', '2', '--rho', '0.5', '--replicates', '20', '-o', str(tmp_path)]
        assert main(args) == 0
        assert not (tmp_path / 'ecdf_pair.csv').exists()
        assert (tmp_path / 'fpt_summary.csv').exists()


class TestSweepCommand:
    """Tests for the sweep subcommand."""

    def test_delta_percent(self):
        """Test that the relative difference is in percent of the simulated value."""
        assert delta_percent(273.17, 275.67) == pytest.approx(-0.907, abs=1e-3)

    def test_failing_cell_is_recorded(self, tmp_path):
        """Test that a failing sweep cell is recorded instead of aborting the sweep."""
        def cell(config, N, n, rho):
            if rho > 0.2:
                raise SolverError('no convergence')
            return [N, n, rho, 1.0, 0.1, 1.0, 0.0, 0]

        config = ExperimentConfig(grid=((5, 1),), rho_grid=(0.1, 0.5), output_path=str(tmp_path))
        record = cmd_sweep(config, cell=cell)
        assert record.payload == {'cells': 2, 'failures': 1}
        lines = read(tmp_path / 'sweep.csv').decode().splitlines()
        assert lines[0].endswith(',error')
        assert lines[2].endswith('no convergence')

    def test_cli_sweep(self, tmp_path):
        """Test that the sweep subcommand writes one row per cell."""
        args = ['sweep', '--grid', '5:1', '--rho-grid', '0.5', '--replicates', '30', '-o', str(tmp_path)]
        assert main(args) == 0
        lines = read(tmp_path / 'sweep.csv').decode().splitlines()
        assert len(lines) == 2
        assert lines[1].startswith('5,1,0.5,')


class TestCli:
    """Tests for argument handling."""

    def test_config_file_with_flag_override(self, tmp_path):
        """Test that command-line flags override the config file."""
        cfg = tmp_path / 'run.cfg'
        cfg.write_text('N = 21\nn = 3\nrho = 0.2\n', encoding='utf-8')
        args = build_parser().parse_args(['chain', '--config', str(cfg), '--n', '4'])
        config = load_config(args)
        assert (config.N, config.n, config.rho) == (21, 4, 0.2)

    def test_missing_config_file(self, tmp_path, capsys):
        """Test that a missing config file exits with 1 and a JSON error."""
        assert main(['chain', '--config', str(tmp_path / 'nope.cfg'), '-o', str(tmp_path)]) == 1
        error = json.loads(capsys.readouterr().err)
        assert error['error'] == 'FileNotFoundError'
        assert 'nope.cfg' in error['message']

    def test_bad_flag_value(self, capsys):
        """Test that a malformed flag value exits with 2."""
        assert main(['chain', '--N', 'ten']) == 2
        assert json.loads(capsys.readouterr().err)['error'] == 'ParameterError'

    def test_missing_command(self, capsys):
        """Test that a missing subcommand exits with 2."""
        assert main([]) == 2
        assert json.loads(capsys.readouterr().err)['command'] is None
