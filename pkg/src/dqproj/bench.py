"""Batch projection runs, error statistics, and CDF series.

Per item the harness reports the unit-norm error ``|  ||qs||^2 - 1 |``,
the orthogonality error ``| qs . qd |`` and the full 8-component
distance from the input. Two methods are available: the exact
projection, and a naive feasible baseline (radial normalization of the
standard part plus orthogonalized dual part) used as a comparison
point. The baseline is always feasible but generally not the nearest
point, so the projection dominates it per item.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .projection import (NonFinite, ProjectionCase, project_vectors,
                         unit_orthogonal_to)

__all__ = ["ItemResult", "BatchStats", "CdfSeries", "METHODS",
           "baseline_project", "run_batch", "compute_cdf"]

METHODS = ("algorithm", "baseline")


@dataclass(frozen=True)
class ItemResult:
    qs: np.ndarray
    qd: np.ndarray
    case: str
    e_r: float
    e_o: float
    dist_2r: float
    mu: float
    lam: float
    ok: bool = True


@dataclass(frozen=True)
class BatchStats:
    n: int
    method: str
    mean_er: float
    max_er: float
    mean_eo: float
    max_eo: float
    mean_dist2r: float
    max_dist2r: float
    wall_time: float
    flagged: int = 0


@dataclass(frozen=True)
class CdfSeries:
    """Empirical CDF: sorted values with cumulative fractions i/n."""

    sorted_values: np.ndarray
    cumulative_fraction: np.ndarray


def baseline_project(std, dual) -> tuple[np.ndarray, np.ndarray]:
    """Naive feasible baseline: qs is the radially normalized standard
    part (orthogonal completion when it vanishes), qd the component of
    the dual part orthogonal to qs."""
    std = np.asarray(std, dtype=float)
    dual = np.asarray(dual, dtype=float)
    ns = float(np.linalg.norm(std))
    if ns <= 1e-13 * (1.0 + float(np.max(np.abs(np.concatenate([std, dual]))))):
        qs = unit_orthogonal_to(dual)
    else:
        qs = std / ns
    qd = dual - float(qs @ dual) * qs
    return qs, qd


def _rows_iter(inputs):
    if isinstance(inputs, np.ndarray):
        if inputs.ndim != 2 or inputs.shape[1] != 8:
            raise ValueError(f"expected an (n, 8) array, got {inputs.shape}")
        return [(row[:4], row[4:]) for row in inputs]
    return [(np.asarray(s, dtype=float), np.asarray(d, dtype=float))
            for s, d in inputs]


def run_batch(inputs, method: str = "algorithm") -> tuple[list[ItemResult], BatchStats]:
    """Project every input and aggregate error statistics.

    `inputs` is an (n, 8) array or an iterable of (std, dual) pairs.
    Output order matches input order. A non-finite row is flagged and
    excluded from the aggregates instead of failing the batch.
    """
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")
    pairs = _rows_iter(inputs)
    if not pairs:
        raise ValueError("empty input batch")

    results: list[ItemResult] = []
    t0 = time.perf_counter()
    for std, dual in pairs:
        try:
            results.append(_run_item(std, dual, method))
        except NonFinite:
            nan4 = np.full(4, np.nan)
            results.append(ItemResult(nan4, nan4, "NonFinite", math.nan,
                                      math.nan, math.nan, math.nan, math.nan,
                                      ok=False))
    wall = time.perf_counter() - t0

    good = [r for r in results if r.ok]
    if not good:
        raise ValueError("all rows in the batch were flagged non-finite")
    er = np.array([r.e_r for r in good])
    eo = np.array([r.e_o for r in good])
    dist = np.array([r.dist_2r for r in good])
    stats = BatchStats(
        n=len(results), method=method,
        mean_er=float(er.mean()), max_er=float(er.max()),
        mean_eo=float(eo.mean()), max_eo=float(eo.max()),
        mean_dist2r=float(dist.mean()), max_dist2r=float(dist.max()),
        wall_time=wall, flagged=len(results) - len(good),
    )
    return results, stats


def _run_item(std, dual, method: str) -> ItemResult:
    if method == "algorithm":
        res = project_vectors(std, dual)
        return ItemResult(res.q.std.to_array(), res.q.dual.to_array(),
                          res.case.value, res.e_r, res.e_o, res.dist_2r,
                          res.best.mu, res.best.lam)
    if not (np.all(np.isfinite(std)) and np.all(np.isfinite(dual))):
        raise NonFinite("non-finite row")
    qs, qd = baseline_project(std, dual)
    ds = qs - std
    dd = qd - dual
    case = ProjectionCase.STD_ZERO.value if np.linalg.norm(std) == 0 else "Baseline"
    return ItemResult(
        qs, qd, case,
        e_r=abs(float(qs @ qs) - 1.0),
        e_o=abs(float(qs @ qd)),
        dist_2r=math.sqrt(float(ds @ ds) + float(dd @ dd)),
        mu=float(qs @ dual),
        lam=(float(qs @ std) - 1.0) / 2.0,
    )


def compute_cdf(values) -> CdfSeries:
    """Empirical CDF of the values; permutation invariant, final
    fraction exactly 1."""
    v = np.sort(np.asarray(values, dtype=float))
    if v.size == 0:
        raise ValueError("cannot build a CDF from no values")
    frac = np.arange(1, v.size + 1) / v.size
    return CdfSeries(v, frac)
