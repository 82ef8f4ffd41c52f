"""Run configuration shared by the CLI and the verification suites."""

from __future__ import annotations

import os
from dataclasses import dataclass, asdict, field

from .character import CharConfig
from .trace import TraceConfig


@dataclass
class RunConfig:
    cutoff: int = 12
    u_window: int = 2
    quad_order: int = 16
    quad_panels: int = 1
    trace_K: int = 320
    trace_P: int = 6
    tol: float = 1e-4
    seed: int = 0

    def __post_init__(self):
        for name in ("cutoff", "u_window", "quad_order", "quad_panels",
                     "trace_K", "trace_P"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.tol <= 0:
            raise ValueError("tol must be positive")

    @staticmethod
    def from_dict(data: dict) -> "RunConfig":
        unknown = set(data) - set(RunConfig.__dataclass_fields__)
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return RunConfig(**data)

    def to_dict(self) -> dict:
        return asdict(self)

    def trace_config(self) -> TraceConfig:
        return TraceConfig(K=self.trace_K, P=self.trace_P, tol=self.tol)

    def char_config(self) -> CharConfig:
        return CharConfig(cutoff=self.cutoff, u_window=self.u_window,
                          tch_order=self.quad_order, tch_panels=self.quad_panels,
                          trace=self.trace_config())


def thread_cap() -> int:
    """Parallelism cap; the pure modules stay single-threaded below it."""
    try:
        return max(1, int(os.environ.get("HEIS_CHAR_THREADS", "1")))
    except ValueError:
        return 1
