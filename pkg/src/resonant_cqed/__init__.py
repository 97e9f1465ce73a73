"""State-vector simulation of resonant two-atom cavity QED quantum algorithms."""

__version__ = "0.1.0"
