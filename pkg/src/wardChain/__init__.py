"""
wardChain - outlier testing of districting plans.

Builds the ward dual graph of a map, runs a reversible single-ward-flip
Markov chain over valid districtings, labels every state by its
efficiency gap and reports how much of an outlier the seed plan is.
"""

__version__ = "1.0.0"
