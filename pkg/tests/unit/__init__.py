"""
Per-module unit and property tests
"""
