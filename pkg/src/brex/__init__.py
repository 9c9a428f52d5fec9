"""Bootstrapping relation extraction (BREE / BRET / BREJ) over a pre-tagged corpus."""

__version__ = "0.1.0"
