"""Benchmark harness: guess-and-check encodings, reproducible instance
generators, and independent brute-force oracles for small instances."""

from .encodings import encoding
from .generators import InstanceSpec, SplitMix64, generate
from .oracles import oracle

__all__ = ["encoding", "generate", "oracle", "InstanceSpec", "SplitMix64"]
