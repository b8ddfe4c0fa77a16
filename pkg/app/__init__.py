"""
λ-RLM: typed functional runtime for long-context reasoning
"""

__version__ = "1.0.0"
