"""Real-root extraction for low-degree polynomials.

Coefficients are ascending: ``coeffs[k]`` multiplies ``x**k``. The
solvers target the cubic and quartic systems produced by the projection
case analysis, where coefficient magnitudes can span many orders (e.g.
a quartic mixing ``n**4`` and squared inner products), so everything is
solved on the max-normalized polynomial.

Pipeline: companion-matrix eigenvalues seed the root set, a coarse
sign-change sweep over the Cauchy bound guards against missed real
roots, every root is polished with damped Newton steps, and clusters
closer than ``1e-9 * (1 + |r|)`` merge into one root with a
multiplicity hint.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["RealRoots", "DegenerateLeading", "cubic_real_roots", "quartic_real_roots"]

# Residual acceptance on the max-normalized polynomial, relative to the
# evaluation magnitude at the root.
RESIDUAL_EPS = 1e-10
# Leading coefficient below this fraction of the largest one means the
# polynomial is effectively of lower degree.
LEADING_EPS = 1e-14
MERGE_EPS = 1e-9
# Eigenvalues are treated as real-root seeds when their imaginary part
# is this small relative to the root magnitude.
IMAG_EPS = 1e-6


class DegenerateLeading(ValueError):
    """Leading coefficient is negligible; solve a lower-degree polynomial."""


@dataclass(frozen=True)
class RealRoots:
    """Sorted distinct real roots with multiplicity hints."""

    roots: np.ndarray
    multiplicities: np.ndarray

    def __len__(self) -> int:
        return len(self.roots)


def cubic_real_roots(coeffs) -> RealRoots:
    """All real roots of a cubic, ascending and deduplicated."""
    return _real_roots(coeffs, 3)


def quartic_real_roots(coeffs) -> RealRoots:
    """All real roots of a quartic, ascending and deduplicated."""
    return _real_roots(coeffs, 4)


def _peval(desc: tuple[float, ...], x: float) -> float:
    """Horner evaluation of descending coefficients (scalar fast path)."""
    r = 0.0
    for c in desc:
        r = r * x + c
    return r


def _real_roots(coeffs, degree: int) -> RealRoots:
    c = np.asarray(coeffs, dtype=float)
    if c.shape != (degree + 1,):
        raise ValueError(f"expected {degree + 1} coefficients, got shape {c.shape}")
    if not np.all(np.isfinite(c)):
        raise ValueError("non-finite polynomial coefficients")
    cmax = float(np.max(np.abs(c)))
    if cmax == 0.0:
        raise ValueError("zero polynomial")
    c = c / cmax
    if abs(c[-1]) < LEADING_EPS:
        raise DegenerateLeading(
            f"leading coefficient {c[-1]!r} of degree-{degree} polynomial is "
            "negligible after scaling; solve the reduced-degree polynomial")

    desc = tuple(float(v) for v in c[::-1])
    dp = tuple(float(v * (degree - i)) for i, v in enumerate(desc[:-1]))

    eigs = np.roots(desc)
    seeds = [float(z.real) for z in eigs
             if abs(z.imag) <= IMAG_EPS * (1.0 + abs(z.real))]

    # Safeguard sweep: a sign change with no eigen-seed inside the
    # bracket means the eigensolver misplaced a real root; bisect it.
    bound = 1.0 + max(abs(v) for v in desc[1:]) / abs(desc[0])
    grid = np.linspace(-bound, bound, 64)
    vals = np.polyval(np.asarray(desc), grid)
    signs = np.sign(vals)
    for i in np.nonzero(signs[:-1] * signs[1:] < 0)[0]:
        lo, hi = float(grid[i]), float(grid[i + 1])
        pad = 1e-9 * (1.0 + max(abs(lo), abs(hi)))
        if any(lo - pad <= s <= hi + pad for s in seeds):
            continue
        seeds.append(_bisect(desc, lo, hi))

    polished = [_newton_polish(desc, dp, x) for x in seeds]

    roots, mults = _merge(polished)
    keep = []
    abs_desc = tuple(abs(v) for v in desc)
    for r, m in zip(roots, mults):
        scale = max(1.0, _peval(abs_desc, abs(r)))
        if abs(_peval(desc, r)) <= RESIDUAL_EPS * scale:
            keep.append((r, m))
    if not keep:
        return RealRoots(np.empty(0), np.empty(0, dtype=int))
    rs = np.array([r for r, _ in keep])
    ms = np.array([m for _, m in keep], dtype=int)
    return RealRoots(rs, ms)


def _newton_polish(desc: tuple[float, ...], dp: tuple[float, ...], x: float,
                   steps: int = 12) -> float:
    best, best_res = x, abs(_peval(desc, x))
    for it in range(steps):
        f = _peval(desc, x)
        g = _peval(dp, x)
        if g == 0.0:
            break
        step = f / g
        # Damping: back off until the residual does not grow.
        t = 1.0
        for _ in range(20):
            if abs(_peval(desc, x - t * step)) <= abs(f):
                break
            t *= 0.5
        else:
            break
        x = x - t * step
        res = abs(_peval(desc, x))
        if res < best_res:
            best, best_res = x, res
        if res == 0.0:
            break
        # Converged in x (always take at least two polish steps).
        if it >= 1 and abs(t * step) <= 4e-16 * (1.0 + abs(x)):
            break
    return best


def _bisect(desc: tuple[float, ...], lo: float, hi: float,
            iters: int = 80) -> float:
    flo = _peval(desc, lo)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        fm = _peval(desc, mid)
        if fm == 0.0:
            return mid
        if (flo < 0) != (fm < 0):
            hi = mid
        else:
            lo, flo = mid, fm
    return 0.5 * (lo + hi)


def _merge(points: list[float]) -> tuple[list[float], list[int]]:
    if not points:
        return [], []
    pts = sorted(points)
    groups: list[list[float]] = [[pts[0]]]
    for x in pts[1:]:
        ref = groups[-1][-1]
        if abs(x - ref) <= MERGE_EPS * (1.0 + abs(ref)):
            groups[-1].append(x)
        else:
            groups.append([x])
    roots = [float(np.mean(g)) for g in groups]
    mults = [len(g) for g in groups]
    return roots, mults
