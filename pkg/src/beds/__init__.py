"""Level-loaded elective surgery scheduling toolkit."""

__version__ = "0.1.0"
