"""Criterion number -> (passed, one line of detail), filled by test_acceptance.py."""

RESULTS = {}
