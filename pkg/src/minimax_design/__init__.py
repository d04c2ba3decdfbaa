"""Minimax and minimax-projection experimental designs on bounded regions."""

__version__ = "0.1.0"
