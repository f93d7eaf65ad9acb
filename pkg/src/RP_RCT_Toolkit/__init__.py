"""Robust, differentially private randomized controlled trials."""

__version__ = "0.1.0"
