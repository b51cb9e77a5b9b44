"""Bethe Ansatz equations, a damped Newton solver and the eigenvalue formulas.

Both algebras share one form. With root families ``w_a`` (one for sl2, two
for sl3) and Cartan matrix ``A``, the equation attached to a root ``x`` in
family ``a`` reads::

    lambda_a(x) - sum_{(b, y) != (a, x)} A_ab / (x - y) = 0

which is (B-sl2) for ``A = [[2]]`` and the pair (B1), (B2) for
``A = [[2, -1], [-1, 2]]``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

import numpy as np

from .config import DEFAULT_SEED, TOL, spread
from .gaudin import CollisionError, MarkedPoints
from .liealg import SL2

log = logging.getLogger(__name__)

CARTAN = {1: np.array([[2.0]]), 2: np.array([[2.0, -1.0], [-1.0, 2.0]])}


class SingularJacobianError(ArithmeticError):
    pass


@dataclass(frozen=True)
class BetheConfig:
    """Root families: ``(w,)`` for sl2, ``(w1, w2)`` for sl3."""

    families: Tuple[Tuple[complex, ...], ...]

    @classmethod
    def sl2(cls, w: Sequence[complex]) -> "BetheConfig":
        return cls((tuple(complex(x) for x in w),))

    @classmethod
    def sl3(cls, w1: Sequence[complex], w2: Sequence[complex]) -> "BetheConfig":
        return cls((tuple(complex(x) for x in w1), tuple(complex(x) for x in w2)))

    @property
    def w(self) -> Tuple[complex, ...]:
        return self.families[0]

    @property
    def w1(self) -> Tuple[complex, ...]:
        return self.families[0]

    @property
    def w2(self) -> Tuple[complex, ...]:
        return self.families[1]

    @property
    def counts(self) -> Tuple[int, ...]:
        return tuple(len(f) for f in self.families)

    def flat(self) -> np.ndarray:
        return np.array([x for f in self.families for x in f], dtype=complex)

    def with_flat(self, x: np.ndarray) -> "BetheConfig":
        out, i = [], 0
        for n in self.counts:
            out.append(tuple(complex(v) for v in x[i:i + n]))
            i += n
        return BetheConfig(tuple(out))

    def canonical(self) -> "BetheConfig":
        key = lambda x: (round(x.real, 9), round(x.imag, 9))
        return BetheConfig(tuple(tuple(sorted(f, key=key)) for f in self.families))

    def matches(self, other: "BetheConfig", tol: float = TOL.match) -> bool:
        """Equality up to permutations within each family."""
        if self.counts != other.counts:
            return False
        for f, g in zip(self.families, other.families):
            left = list(g)
            for x in f:
                d = [abs(x - y) for y in left]
                if not d or min(d) > tol * max(1.0, abs(x)):
                    return False
                left.pop(int(np.argmin(d)))
        return True


def _entries(cfg: BetheConfig):
    return [(a, x) for a, fam in enumerate(cfg.families) for x in fam]


def validate_config(cfg: BetheConfig, space: MarkedPoints):
    if len(cfg.families) != space.rank:
        raise ValueError(f"{space.algebra} needs {space.rank} root families, got {len(cfg.families)}")
    ent = _entries(cfg)
    for i, (a, x) in enumerate(ent):
        space.check_point(x, "Bethe root")
        for b, y in ent[:i]:
            if abs(x - y) <= space.eps:
                raise CollisionError(f"Bethe roots {y} (family {b + 1}) and {x} (family {a + 1}) coincide")


def residual(cfg: BetheConfig, space: MarkedPoints) -> np.ndarray:
    validate_config(cfg, space)
    A = CARTAN[space.rank]
    ent = _entries(cfg)
    out = np.empty(len(ent), dtype=complex)
    for i, (a, x) in enumerate(ent):
        val = space.lambda_fn(a + 1, x)
        for j, (b, y) in enumerate(ent):
            if j != i:
                val -= A[a, b] / (x - y)
        out[i] = val
    return out


def jacobian(cfg: BetheConfig, space: MarkedPoints) -> np.ndarray:
    validate_config(cfg, space)
    A = CARTAN[space.rank]
    ent = _entries(cfg)
    n = len(ent)
    J = np.zeros((n, n), dtype=complex)
    for i, (a, x) in enumerate(ent):
        J[i, i] = space.lambda_fn(a + 1, x, 1)
        for j, (b, y) in enumerate(ent):
            if j == i:
                continue
            d = A[a, b] / (x - y) ** 2
            J[i, i] += d
            J[i, j] -= d
    return J


def residual_sl2(cfg: BetheConfig, space: MarkedPoints) -> np.ndarray:
    return residual(cfg, space)


def residual_sl3(cfg: BetheConfig, space: MarkedPoints) -> np.ndarray:
    return residual(cfg, space)


jacobian_sl2 = jacobian
jacobian_sl3 = jacobian


@dataclass
class SolveReport:
    converged: bool
    config: BetheConfig
    residual: float
    iterations: int
    distinct: int = 1
    message: str = ""


def escape_radius(space: MarkedPoints) -> float:
    """Roots beyond this distance from the marked points count as escaped to infinity."""
    return 1e3 * (spread(space.z) + float(np.max(np.abs(space.z), initial=0.0)))


def _free_mask(cfg: BetheConfig, free: Sequence[int] | None) -> np.ndarray:
    if free is None:
        return np.ones(sum(cfg.counts), dtype=bool)
    return np.array([a in free for a, _ in _entries(cfg)], dtype=bool)


def _scaled(cfg: BetheConfig, space: MarkedPoints, mask: np.ndarray):
    """Residual and Jacobian with equation ``i`` multiplied by ``prod_j (x_i - z_j)``.

    Same finite roots, but the scaled residual does not decay at infinity, so
    it is a usable merit function for the line search. Only the rows and
    columns selected by ``mask`` are kept.
    """
    F = residual(cfg, space)
    J = jacobian(cfg, space)
    x = cfg.flat()
    diff = x[:, None] - space.z[None, :]
    P = np.prod(diff, axis=1)
    # P'/P = sum_j 1/(x - z_j)
    dP = P * np.sum(1.0 / diff, axis=1)
    G = P * F
    JG = P[:, None] * J + np.diag(dP * F)
    return F[mask], G[mask], JG[np.ix_(mask, mask)]


def newton_solve(start: BetheConfig, space: MarkedPoints, max_iter: int = 100,
                 tol: float = TOL.newton, free: Sequence[int] | None = None) -> SolveReport:
    """Damped Newton on the complex Bethe equations.

    Steps come from the polynomially scaled system (see :func:`_scaled`); a
    step is halved, at most 20 times, while it fails to lower the scaled
    residual or lands on a collision. Convergence is judged on the unscaled
    residual inf-norm. Runs whose roots drift past :func:`escape_radius` are
    reported as not converged.

    ``free`` lists the 0-based families to solve for; the others stay fixed
    and their equations are ignored.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    validate_config(start, space)
    cfg = start
    mask = _free_mask(cfg, free)
    F, G, J = _scaled(cfg, space, mask)
    norm = float(np.max(np.abs(F), initial=0.0))
    merit = float(np.max(np.abs(G), initial=0.0))
    far = escape_radius(space)
    center = complex(np.mean(space.z)) if space.n_sites else 0j
    for it in range(max_iter + 1):
        if mask.any() and np.max(np.abs(cfg.flat()[mask] - center)) > far:
            return SolveReport(False, cfg, norm, it, message="roots escaped to infinity")
        if norm <= tol:
            return SolveReport(True, cfg, norm, it)
        if it == max_iter:
            break
        try:
            if np.linalg.cond(J) > 1e14:
                raise np.linalg.LinAlgError
            step = np.linalg.solve(J, G)
        except np.linalg.LinAlgError:
            raise SingularJacobianError(f"singular Jacobian at iteration {it}") from None
        x0 = cfg.flat()
        t = 1.0
        accepted = None
        for _ in range(21):
            x = x0.copy()
            x[mask] -= t * step
            trial = cfg.with_flat(x)
            try:
                Ft, Gt, Jt = _scaled(trial, space, mask)
            except CollisionError:
                t /= 2
                continue
            mt = float(np.max(np.abs(Gt), initial=0.0))
            accepted = (trial, Ft, Gt, Jt, mt)
            if mt < merit:
                break
            t /= 2
        if accepted is None:
            return SolveReport(False, cfg, norm, it, message="line search hit collisions")
        cfg, F, G, J, merit = accepted
        norm = float(np.max(np.abs(F), initial=0.0))
    return SolveReport(False, cfg, norm, max_iter, message="no convergence")


def _random_roots(rng, center: complex, radius: float, n: int) -> Tuple[complex, ...]:
    r = radius * np.sqrt(rng.uniform(size=n))
    phi = rng.uniform(0, 2 * np.pi, size=n)
    return tuple(complex(x) for x in center + r * np.exp(1j * phi))


def multistart_solve(space: MarkedPoints, counts: Sequence[int], seed: int = DEFAULT_SEED,
                     attempts: int = 64, max_iter: int = 100, tol: float = TOL.newton,
                     match_tol: float = TOL.match, fixed: BetheConfig | None = None) -> List[SolveReport]:
    """Newton from random starts in a disk of radius ``2 * spread(z)``; distinct solutions only.

    With ``fixed`` given, only families whose count in ``fixed`` is zero are
    drawn and solved; the remaining families are copied from ``fixed``.
    """
    if len(counts) != space.rank:
        raise ValueError(f"{space.algebra} needs {space.rank} root counts, got {len(counts)}")
    if min(counts, default=0) < 0:
        raise ValueError("root counts must be nonnegative")
    rng = np.random.default_rng(seed)
    center = complex(np.mean(space.z)) if space.n_sites else 0j
    radius = 2 * spread(space.z)
    free = None
    if fixed is not None:
        free = [a for a, fam in enumerate(fixed.families) if not fam]
    found: List[SolveReport] = []
    for attempt in range(attempts):
        fams = []
        for a, n in enumerate(counts):
            if free is not None and a not in free:
                fams.append(fixed.families[a])
            else:
                fams.append(_random_roots(rng, center, radius, n))
        start = BetheConfig(tuple(fams))
        try:
            rep = newton_solve(start, space, max_iter, tol, free=free)
        except (CollisionError, SingularJacobianError) as exc:
            log.debug("start %d rejected: %s", attempt, exc)
            continue
        if not rep.converged:
            log.debug("start %d: %s", attempt, rep.message)
            continue
        if any(rep.config.matches(f.config, match_tol) for f in found):
            continue
        found.append(rep)
        if not sum(counts):
            break
    for rep in found:
        rep.distinct = len(found)
    found.sort(key=lambda r: [(round(x.real, 8), round(x.imag, 8)) for x in r.config.canonical().flat()])
    return found


def eigenvalue(u: complex, cfg: BetheConfig, space: MarkedPoints) -> complex:
    """Closed-form eigenvalue of ``T(u)``/``I(u)`` on the Bethe vector of ``cfg``."""
    validate_config(cfg, space)
    space.check_point(u)
    A = CARTAN[space.rank]
    ent = _entries(cfg)
    val = space.vacuum_tau(u)
    for i, (a, x) in enumerate(ent):
        if abs(u - x) <= space.eps:
            raise CollisionError(f"evaluation point {u} collides with Bethe root {x}")
        coef = space.lambda_fn(a + 1, u)
        for j, (b, y) in enumerate(ent):
            if j != i:
                coef -= A[a, b] / (x - y)
        val -= coef / (u - x)
    return complex(val)


def eigenvalue_sl2(u: complex, cfg: BetheConfig, space: MarkedPoints) -> complex:
    """``tau(u) - sum_r lambda(u)/(u - w_r) + sum_{r != s} 2/((u - w_r)(w_r - w_s))``."""
    if space.algebra != SL2:
        raise ValueError("eigenvalue_sl2 needs an sl2 system")
    return eigenvalue(u, cfg, space)


def eigenvalue_sl3(u: complex, cfg: BetheConfig, space: MarkedPoints) -> complex:
    if space.algebra == SL2:
        raise ValueError("eigenvalue_sl3 needs an sl3 system")
    return eigenvalue(u, cfg, space)
