"""Tensor-product spaces with marked points and the rational Gaudin operators.

:class:`MarkedPoints` carries only site weights and marked points ``z_i``,
which is all the Bethe equations and eigenvalue formulas need.
:class:`TensorSpace` adds the module matrices: generators embedded at one
site, currents ``X(u) = sum_i x^(i) / (u - z_i)``, the quadratic generating
operator (``T(u)`` for sl2, ``I(u)`` for sl3) and the Hamiltonians, both as
dense matrices and as matrix-free actions on vectors.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, List, Sequence, Tuple

import numpy as np

from .config import TOL, Tolerances, collision_tolerance
from .liealg import SL2, SL3, algebra, casimir_terms
from .repmod import ModuleRep, build_module


class CollisionError(ValueError):
    """An evaluation point or root coincides with a marked point or another root."""


@dataclass(frozen=True)
class Site:
    weight: Tuple[int, ...]
    z: complex


@dataclass(eq=False)
class MarkedPoints:
    """Site weights and marked points; enough to evaluate the vacuum data."""

    algebra: str
    sites: Tuple[Site, ...]
    tol: Tolerances = field(default=TOL, repr=False, kw_only=True)

    def __post_init__(self):
        algebra(self.algebra)
        self.z = np.array([s.z for s in self.sites], dtype=complex)
        self.eps = collision_tolerance(self.z, self.tol)
        rank = self.rank
        for s in self.sites:
            if len(s.weight) != rank or min(s.weight) < 0:
                raise ValueError(f"invalid {self.algebra} weight {s.weight}")
        for i in range(len(self.z)):
            for j in range(i):
                if abs(self.z[i] - self.z[j]) <= self.eps:
                    raise CollisionError(f"marked points z[{j}] and z[{i}] coincide")
        self._weights = np.array([s.weight for s in self.sites], dtype=float).reshape(-1, rank)

    @property
    def rank(self) -> int:
        return 1 if self.algebra == SL2 else 2

    @property
    def n_sites(self) -> int:
        return len(self.sites)

    def highest_weights(self) -> np.ndarray:
        """Array of shape (n_sites, rank): Cartan eigenvalues of each site's top vector."""
        return self._weights

    def check_point(self, u: complex, what: str = "evaluation point"):
        d = np.abs(self.z - u)
        if d.size and d.min() <= self.eps:
            raise CollisionError(f"{what} {u} collides with marked point z[{int(d.argmin())}]")

    def poles(self, u: complex) -> np.ndarray:
        self.check_point(u)
        return 1.0 / (u - self.z)

    def lambda_fn(self, a: int, u: complex, deriv: int = 0) -> complex:
        """``lambda_a(u) = sum_i lambda_a^(i)/(u - z_i)`` or its first derivative.

        sl2 uses ``a = 1``; sl3 accepts 1, 2 and 3 with ``lambda_3 = lambda_1 + lambda_2``.
        """
        lam = self._weights
        if a == 3 and self.rank == 2:
            coeff = lam[:, 0] + lam[:, 1]
        elif 1 <= a <= self.rank:
            coeff = lam[:, a - 1]
        else:
            raise ValueError(f"no lambda_{a} for {self.algebra}")
        w = self.poles(u)
        if deriv == 0:
            return complex(np.sum(coeff * w))
        if deriv == 1:
            return complex(-np.sum(coeff * w * w))
        raise ValueError("only deriv 0 or 1 is supported")

    def vacuum_tau(self, u: complex) -> complex:
        if self.algebra == SL2:
            lam = self.lambda_fn(1, u)
            return 0.25 * lam * lam - 0.5 * self.lambda_fn(1, u, 1)
        l1, l2 = self.lambda_fn(1, u), self.lambda_fn(2, u)
        return (l1 * l1 + l1 * l2 + l2 * l2) / 3 - self.lambda_fn(1, u, 1) - self.lambda_fn(2, u, 1)

    def describe(self) -> str:
        parts = [f"{s.weight}@{s.z}" for s in self.sites]
        return f"{self.algebra}[{', '.join(parts)}]"


@dataclass(eq=False)
class TensorSpace(MarkedPoints):
    modules: Tuple[ModuleRep, ...] = field(default=(), repr=False, kw_only=True)

    def __post_init__(self):
        super().__post_init__()
        if len(self.modules) != len(self.sites):
            raise ValueError("need one module per site")
        self.dims = tuple(m.dim for m in self.modules)
        self.dim = int(np.prod(self.dims)) if self.dims else 1

    # --- basis bookkeeping -------------------------------------------------

    def multi_index(self, flat: int) -> Tuple[int, ...]:
        return tuple(int(i) for i in np.unravel_index(flat, self.dims))

    def flat_index(self, multi: Sequence[int]) -> int:
        return int(np.ravel_multi_index(tuple(multi), self.dims))

    def vacuum(self) -> np.ndarray:
        v = np.zeros(self.dim, dtype=complex)
        v[self.flat_index([m.hw_index for m in self.modules])] = 1.0
        return v

    def _check_site(self, i: int):
        if not 0 <= i < self.n_sites:
            raise IndexError(f"site index {i} out of range for {self.n_sites} sites")

    # --- single-site operators ---------------------------------------------

    def site_operator(self, x: str, i: int) -> np.ndarray:
        """Dense ``1 (x) ... (x) x (x) ... (x) 1``."""
        self._check_site(i)
        left = int(np.prod(self.dims[:i]))
        right = int(np.prod(self.dims[i + 1:]))
        return np.kron(np.kron(np.eye(left), self.modules[i].numeric(x)), np.eye(right))

    def apply_site(self, x: str, i: int, vec: np.ndarray) -> np.ndarray:
        self._check_site(i)
        t = vec.reshape(self.dims)
        t = np.tensordot(self.modules[i].numeric(x), t, axes=([1], [i]))
        return np.moveaxis(t, 0, i).reshape(self.dim)

    def site_casimir(self, i: int) -> np.ndarray:
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for c, a, b in casimir_terms(self.algebra):
            out += float(c) * self.site_operator(a, i) @ self.site_operator(b, i)
        return out

    # --- currents ----------------------------------------------------------

    def current(self, x: str, u: complex) -> np.ndarray:
        w = self.poles(u)
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for i in range(self.n_sites):
            out += w[i] * self.site_operator(x, i)
        return out

    def apply_current(self, x: str, u: complex, vec: np.ndarray) -> np.ndarray:
        w = self.poles(u)
        out = np.zeros(self.dim, dtype=complex)
        for i in range(self.n_sites):
            out += w[i] * self.apply_site(x, i, vec)
        return out

    # --- generating operator T(u) / I(u) -------------------------------------

    def generating(self, u: complex) -> np.ndarray:
        """``T(u)`` (sl2) or ``I(u)`` (sl3): one half of the Casimir evaluated on currents."""
        cur = {g: self.current(g, u) for g in algebra(self.algebra).generators}
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for c, a, b in casimir_terms(self.algebra):
            out += 0.5 * float(c) * cur[a] @ cur[b]
        return out

    def apply_generating(self, u: complex, vec: np.ndarray) -> np.ndarray:
        out = np.zeros(self.dim, dtype=complex)
        for c, a, b in casimir_terms(self.algebra):
            out += 0.5 * float(c) * self.apply_current(a, u, self.apply_current(b, u, vec))
        return out

    def gaudin_T(self, u: complex) -> np.ndarray:
        if self.algebra != SL2:
            raise ValueError("T(u) is defined for sl2; use gaudin_I for sl3")
        return self.generating(u)

    def gaudin_I(self, u: complex) -> np.ndarray:
        if self.algebra != SL3:
            raise ValueError("I(u) is defined for sl3; use gaudin_T for sl2")
        return self.generating(u)

    # --- Hamiltonians --------------------------------------------------------

    def coupling(self, i: int, j: int) -> np.ndarray:
        """Polarized Casimir tensor between two distinct sites."""
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for c, a, b in casimir_terms(self.algebra):
            out += float(c) * self.site_operator(a, i) @ self.site_operator(b, j)
        return out

    def hamiltonian(self, i: int) -> np.ndarray:
        """``H_i = sum_{j != i} Omega_ij / (z_i - z_j)``."""
        self._check_site(i)
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for j in range(self.n_sites):
            if j != i:
                out += self.coupling(i, j) / (self.z[i] - self.z[j])
        return out

    def hamiltonians(self) -> List[np.ndarray]:
        return [self.hamiltonian(i) for i in range(self.n_sites)]

    def residue_form(self, u: complex, hams: Sequence[np.ndarray] | None = None) -> np.ndarray:
        """``sum_i H_i/(u - z_i) + 1/2 sum_i C^(i)/(u - z_i)^2``."""
        w = self.poles(u)
        hams = self.hamiltonians() if hams is None else hams
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for i in range(self.n_sites):
            out += w[i] * hams[i] + 0.5 * w[i] ** 2 * self.site_casimir(i)
        return out


def _weights(alg: str, weights: Iterable) -> List[Tuple[int, ...]]:
    out = []
    for w in weights:
        w = (w,) if isinstance(w, (int, np.integer)) else tuple(w)
        out.append(tuple(int(x) for x in w))
    return out


def marked_points(alg: str, weights: Iterable, z: Iterable[complex], tol: Tolerances = TOL) -> MarkedPoints:
    weights, z = _weights(alg, weights), [complex(x) for x in z]
    if len(weights) != len(z):
        raise ValueError("need one marked point per site")
    return MarkedPoints(alg, tuple(Site(w, x) for w, x in zip(weights, z)), tol=tol)


def make_space(alg: str, weights: Iterable, z: Iterable[complex], tol: Tolerances = TOL) -> TensorSpace:
    weights, z = _weights(alg, weights), [complex(x) for x in z]
    if len(weights) != len(z):
        raise ValueError("need one marked point per site")
    sites = tuple(Site(w, x) for w, x in zip(weights, z))
    base = MarkedPoints(alg, sites, tol=tol)  # validates before any module is built
    modules = tuple(build_module(alg, w) for w in weights)
    return TensorSpace(alg, base.sites, tol=tol, modules=modules)


def vacuum_tau_sl2(u: complex, space: MarkedPoints) -> complex:
    return space.vacuum_tau(u)


def vacuum_tau_sl3(u: complex, space: TensorSpace) -> complex:
    """Closed-form vacuum eigenvalue, cross-checked against ``I(u)|0>``."""
    tau = space.vacuum_tau(u)
    vac = space.vacuum()
    direct = space.apply_generating(u, vac)
    if np.linalg.norm(direct - tau * vac) > 1e-10 * max(1.0, abs(tau)):
        raise RuntimeError(f"vacuum eigenvalue closed form disagrees with I(u)|0> at u={u}")
    return tau
