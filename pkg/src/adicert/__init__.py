"""Adic completion, localization Ext and completeness certificates over Euclidean domains."""

__version__ = "0.1.0"
