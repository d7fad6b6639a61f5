"""Finite-N laboratory for cube averages, Host-Kra seminorms and Wiener-Wintner bounds."""

__version__ = "0.1.0"
