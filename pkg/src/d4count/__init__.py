"""Counting D4, C4 and V4 quartic fields through quadratic towers."""

__version__ = "0.1.0"
