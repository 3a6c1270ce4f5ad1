"""Numerical tolerances shared by every module.

A single profile object keeps the thresholds in one place so that tests and
the CLI can pin or override them explicitly.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass


@dataclass(frozen=True)
class ToleranceProfile:
    # Jacobi stopping rule: off-diagonal Frobenius norm <= jacobi_rel * ||A||_F
    jacobi_rel: float = 1e-13
    jacobi_max_sweeps: int = 100
    # projection validity
    idempotency: float = 1e-9
    trace: float = 1e-9
    diagonal: float = 1e-12
    clustering: float = 1e-8
    frame: float = 1e-10
    # certificate slacks and bound checks
    certificate: float = 1e-9
    equality: float = 1e-7
    violation: float = 1e-7
    # argmax tie detection in exhaustive searches
    tie: float = 1e-9
    # alternating ascent stopping rule
    ascent: float = 1e-12

    def replace(self, **overrides: float) -> "ToleranceProfile":
        return dataclasses.replace(self, **overrides)

    @classmethod
    def from_pairs(cls, pairs: list[str]) -> "ToleranceProfile":
        """Build a profile from ``name=value`` strings (CLI overrides)."""
        fields = {f.name: f.type for f in dataclasses.fields(cls)}
        overrides: dict[str, float] = {}
        for pair in pairs:
            name, sep, value = pair.partition("=")
            name = name.strip()
            if not sep or name not in fields:
                raise ValueError(f"unknown tolerance override {pair!r}")
            overrides[name] = int(value) if name == "jacobi_max_sweeps" else float(value)
        return cls(**overrides)


DEFAULT = ToleranceProfile()
