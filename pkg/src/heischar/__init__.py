"""heischar: exact symbol calculus for the extended Heisenberg algebra,
regularized traces, periodic cyclic chains, and the torus-model index pairing."""

__version__ = "0.1.0"
