"""Centralized tolerances, seeds and sampling of evaluation points."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

DEFAULT_SEED = 20240001


@dataclass(frozen=True)
class Tolerances:
    newton: float = 1e-12          # solver stopping criterion (inf-norm)
    residual: float = 1e-9         # eigen-residual acceptance
    identity: float = 1e-12        # operator identities, relative
    decomposition: float = 1e-10   # nine-component identity, relative
    match: float = 1e-8            # root deduplication
    collision_rel: float = 1e-8    # scale factor of the collision guard
    cleanup: float = 1e-15         # formal-sum coefficient cleanup, relative
    dense_cap: int = 4096          # largest matrix handed to dense eigensolvers


TOL = Tolerances()


def collision_tolerance(z: Sequence[complex], tol: Tolerances = TOL) -> float:
    zmax = max((abs(x) for x in z), default=0.0)
    return tol.collision_rel * max(1.0, zmax)


def spread(z: Sequence[complex]) -> float:
    z = np.asarray(z, dtype=complex)
    if z.size < 2:
        return 1.0
    return float(max(np.max(np.abs(z[:, None] - z[None, :])), 1e-3))


def sample_points(z: Sequence[complex], count: int, seed: int = DEFAULT_SEED,
                  avoid: Sequence[complex] = (), real: bool = False) -> list[complex]:
    """Pseudo-random evaluation points in a disk around the marked points.

    Every point keeps at least ``0.1 * spread(z)`` from each marked point and
    each entry of ``avoid`` (Bethe roots, label entries).
    """
    rng = np.random.default_rng(seed)
    z = list(z)
    s = spread(z)
    center = complex(np.mean(z)) if z else 0j
    keep_out = list(z) + list(avoid)
    out: list[complex] = []
    while len(out) < count:
        r = 2 * s * np.sqrt(rng.uniform())
        phi = rng.uniform(0, 2 * np.pi)
        u = center + (r * np.sign(np.cos(phi)) if real else r * np.exp(1j * phi))
        if all(abs(u - x) >= 0.1 * s for x in keep_out + out):
            out.append(complex(u))
    return out
