"""Chaotic-map cryptography laboratory.

A cat-map + logistic-map cipher with a 40-hex-digit key, plus the tools
used to take it apart: cat-map periods, Lyapunov exponents, ciphertext
statistics, and a brute-force period attack.
"""

__version__ = "0.1.0"
