"""Figure reproduction scripts for collide CSV outputs."""

__version__ = "0.1.0"
