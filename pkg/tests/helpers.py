"""Bridges between package objects and the brute-force oracle representation."""

from __future__ import annotations

import numpy as np

from ringlcp.rmodule import Submodule

from oracles import MatrixRing


def to_set(M: Submodule, R: MatrixRing) -> frozenset:
    d, n = M.algebra.d, M.n
    out = set()
    for chunk in M.elements():
        for row in chunk.reshape(-1, n, d):
            out.add(tuple(R.index[tuple(int(t) for t in blk)] for blk in row))
    return frozenset(out)


def to_module(S, R: MatrixRing, alg, n: int, side: str = "right") -> Submodule:
    rows = np.array([[c for a in v for c in R.coords[a]] for v in S], dtype=np.int64).reshape(-1, n * alg.d)
    return Submodule(alg, n, side, rows)


def coords(R: MatrixRing, v) -> np.ndarray:
    return np.array([c for a in v for c in R.coords[a]], dtype=np.int64)
