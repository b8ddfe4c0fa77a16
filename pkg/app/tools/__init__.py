"""
File IO for instances, traces, reports and CSV tables
"""
