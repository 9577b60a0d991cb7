"""Decision-scaled scenario approach for rare-event chance constraints."""

__version__ = "0.1.0"
