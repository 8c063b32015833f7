"""Integration tests for wardChain."""
