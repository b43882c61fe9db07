"""
Tests for pycda.
"""
