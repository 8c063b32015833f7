"""Ambient stack: configuration, errors, logging."""
