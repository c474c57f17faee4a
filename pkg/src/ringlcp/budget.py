"""Enumeration budgets.

All exhaustive searches in the package are bounded by one of these limits.
``RINGLCP_BUDGET`` overrides the x-scan budget (the maximum ``|R^n|`` that
module predicates will enumerate).
"""

from __future__ import annotations

import os
from dataclasses import dataclass, replace

RING_CAP = 2**20
SCAN_BUDGET = 10**6
DISTANCE_CAP = 10**7
SAMPLE_COUNT = 10**5
PERMUTATION_N_CAP = 8
MONOMIAL_N_CAP = 6
FIELD_ORDER_CAP = 2**20


@dataclass(frozen=True)
class Budget:
    ring_cap: int = RING_CAP
    scan: int = SCAN_BUDGET
    distance: int = DISTANCE_CAP
    samples: int = SAMPLE_COUNT
    permutation_n: int = PERMUTATION_N_CAP
    monomial_n: int = MONOMIAL_N_CAP

    def __post_init__(self) -> None:
        for name in ("ring_cap", "scan", "distance", "samples", "permutation_n", "monomial_n"):
            if getattr(self, name) <= 0:
                raise ValueError(f"budget {name} must be positive")

    def with_(self, **kw) -> Budget:
        return replace(self, **kw)


def default_budget() -> Budget:
    env = os.environ.get("RINGLCP_BUDGET")
    if env:
        try:
            scan = int(float(env))
        except ValueError:
            raise ValueError(f"RINGLCP_BUDGET must be an integer, got {env!r}") from None
        return Budget(scan=scan)
    return Budget()
