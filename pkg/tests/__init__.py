"""Test suite for wardChain."""
