"""
Tests for the lambda-rlm package
"""
