"""Seeded synthetic input batches for the projection benchmark.

Standard parts are columns of a dense 4 x n matrix built as U D V^T
with orthonormal U (4 x r), orthonormal V (n x r), and D diagonal with
entries uniform in [1, kappa], so the unmasked columns have a
controlled singular-value spread. Dual parts embed translations drawn
uniformly from a centered cube as pure quaternions. A fixed fraction of
columns in each part is zeroed, with the two masks drawn independently.

All randomness comes from one numpy PCG64 generator seeded from the
config. Draw order is fixed and documented: (1) normals for U, (2)
normals for V, (3) uniforms for D, (4) standard-part mask, (5)
translations, (6) dual-part mask. Identical configs therefore yield
bit-identical batches.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["SyntheticConfig", "SyntheticBatch", "gen_standard_parts",
           "gen_dual_parts", "make_batch"]


@dataclass(frozen=True)
class SyntheticConfig:
    n: int
    kappa: float
    r: int = 4
    zero_fraction: float = 0.10
    translation_bound: float = 5.0
    seed: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if not 1 <= self.r <= 4:
            raise ValueError("r must be in 1..4")
        if not self.kappa > 1.0:
            raise ValueError("kappa must be > 1")
        if not 0.0 <= self.zero_fraction < 1.0:
            raise ValueError("zero_fraction must be in [0, 1)")
        if not self.translation_bound > 0.0:
            raise ValueError("translation_bound must be positive")


@dataclass(frozen=True)
class SyntheticBatch:
    """Columns of the two 4 x n input matrices plus the zeroed index sets."""

    std_cols: np.ndarray
    dual_cols: np.ndarray
    zero_mask_std: np.ndarray
    zero_mask_dual: np.ndarray

    @property
    def n(self) -> int:
        return self.std_cols.shape[1]

    def rows(self) -> np.ndarray:
        """Batch as an (n, 8) array, one dual quaternion per row."""
        return np.hstack([self.std_cols.T, self.dual_cols.T])


def _orthonormal_columns(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    q, _ = np.linalg.qr(rng.standard_normal((rows, cols)))
    return q


def _zero_mask(rng: np.random.Generator, n: int, fraction: float) -> np.ndarray:
    m = int(fraction * n)
    return np.sort(rng.choice(n, size=m, replace=False))


def gen_standard_parts(cfg: SyntheticConfig,
                       rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Standard-part columns (4, n) and the zeroed column indices."""
    u = _orthonormal_columns(rng, 4, cfg.r)
    v = _orthonormal_columns(rng, cfg.n, cfg.r)
    d = 1.0 + (cfg.kappa - 1.0) * rng.random(cfg.r)
    cols = u @ np.diag(d) @ v.T
    mask = _zero_mask(rng, cfg.n, cfg.zero_fraction)
    cols[:, mask] = 0.0
    return cols, mask


def gen_dual_parts(cfg: SyntheticConfig,
                   rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Dual-part columns (4, n) and the zeroed column indices.

    Each unmasked column is a pure quaternion (first component zero)
    holding a translation uniform in the centered cube.
    """
    b = cfg.translation_bound
    t = rng.uniform(-b, b, size=(cfg.n, 3))
    cols = np.zeros((4, cfg.n))
    cols[1:, :] = t.T
    mask = _zero_mask(rng, cfg.n, cfg.zero_fraction)
    cols[:, mask] = 0.0
    return cols, mask


def make_batch(cfg: SyntheticConfig) -> SyntheticBatch:
    """Generate a full batch from the config's seed (see module docstring
    for the draw order)."""
    rng = np.random.default_rng(cfg.seed)
    std_cols, mask_s = gen_standard_parts(cfg, rng)
    dual_cols, mask_d = gen_dual_parts(cfg, rng)
    return SyntheticBatch(std_cols, dual_cols, mask_s, mask_d)
