"""Bundled model documents."""
