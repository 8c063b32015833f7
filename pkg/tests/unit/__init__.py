"""Unit tests for wardChain."""
