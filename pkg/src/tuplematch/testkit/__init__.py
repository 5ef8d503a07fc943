"""Synthetic data, worked-example fixtures and the brute-force oracle."""

from .generator import GeneratorParams, generate, write_instance
from .oracle import oracle_match, oracle_tuples

__all__ = ["GeneratorParams", "generate", "write_instance", "oracle_match", "oracle_tuples"]
