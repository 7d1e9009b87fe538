# tilehull analysis package
"""Cohomology and return-module rank checks for substitution tilings."""

__version__ = "0.1.0"
