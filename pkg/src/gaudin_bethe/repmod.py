"""Finite-dimensional highest-weight modules with exact rational matrices.

sl(2) modules use the standard lowering basis. sl(3) modules V(p, q) are
realized as the cyclic span of the top vector of
``fund^{(x)p} (x) dual^{(x)q}`` under f1, f2; the dual leg acts by
``x -> -x^T``. All entries are ``Fraction`` so commutation checks are
equality checks.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Tuple

import numpy as np

from .liealg import SL2, SL3, AlgebraError, _sl3_to_gl3, algebra, casimir_terms


class InconsistentModuleError(RuntimeError):
    """A constructed module violates a defining identity."""


def weyl_dimension(p: int, q: int) -> int:
    return (p + 1) * (q + 1) * (p + q + 2) // 2


def module_dimension(alg: str, weight: Tuple[int, ...]) -> int:
    if alg == SL2:
        return weight[0] + 1
    return weyl_dimension(*weight)


def exact_zeros(n: int, m: int | None = None) -> np.ndarray:
    m = n if m is None else m
    out = np.empty((n, m), dtype=object)
    out.fill(Fraction(0))
    return out


def exact_identity(n: int) -> np.ndarray:
    out = exact_zeros(n)
    for i in range(n):
        out[i, i] = Fraction(1)
    return out


@dataclass(eq=False)
class ModuleRep:
    algebra: str
    weight: Tuple[int, ...]
    dim: int
    matrices: Dict[str, np.ndarray] = field(repr=False)
    hw_index: int = 0
    # lowering words (tuples of 1/2) that produced each basis vector; sl3 only
    words: List[Tuple[int, ...]] = field(default_factory=list, repr=False)

    def __post_init__(self):
        self._numeric: Dict[str, np.ndarray] = {}

    def matrix(self, name: str) -> np.ndarray:
        """Exact matrix of a generator (object array of Fractions)."""
        try:
            return self.matrices[name]
        except KeyError:
            raise AlgebraError(f"{name!r} is not a generator of {self.algebra}") from None

    def numeric(self, name: str) -> np.ndarray:
        if name not in self._numeric:
            self._numeric[name] = np.array(self.matrix(name), dtype=complex)
        return self._numeric[name]

    def highest_weight_vector(self) -> np.ndarray:
        v = np.zeros(self.dim, dtype=complex)
        v[self.hw_index] = 1.0
        return v

    def casimir_matrix(self) -> np.ndarray:
        out = exact_zeros(self.dim)
        for c, a, b in casimir_terms(self.algebra):
            out = out + c * self.matrix(a).dot(self.matrix(b))
        return out

    def weights(self) -> List[Tuple[Fraction, ...]]:
        """Cartan eigenvalues of each basis vector (the basis is a weight basis)."""
        cartan = algebra(self.algebra).cartan
        return [tuple(self.matrix(h)[j, j] for h in cartan) for j in range(self.dim)]

    def dump(self) -> str:
        """Plain-text dump: one block per generator, row-major, entries as a/b."""
        lines = [f"# {self.algebra} weight={','.join(map(str, self.weight))} dim={self.dim}"]
        for name in algebra(self.algebra).generators:
            lines.append(f"[{name}]")
            for row in self.matrix(name):
                lines.append(" ".join(_fmt_fraction(x) for x in row))
        return "\n".join(lines) + "\n"


def _fmt_fraction(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_dump(text: str) -> Dict[str, np.ndarray]:
    """Inverse of :meth:`ModuleRep.dump` (matrices only)."""
    out: Dict[str, np.ndarray] = {}
    current: List[List[Fraction]] | None = None
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("["):
            current = []
            out[line[1:-1]] = current  # type: ignore[assignment]
        else:
            current.append([Fraction(tok) for tok in line.split()])
    return {k: np.array(v, dtype=object) for k, v in out.items()}


@lru_cache(maxsize=None)
def build_sl2_module(lam: int) -> ModuleRep:
    """V_lam with h v_j = (lam - 2j) v_j, f v_j = v_{j+1}, e v_j = j(lam - j + 1) v_{j-1}."""
    if lam < 0:
        raise ValueError(f"sl2 highest weight must be >= 0, got {lam}")
    n = lam + 1
    e, f, h = exact_zeros(n), exact_zeros(n), exact_zeros(n)
    for j in range(n):
        h[j, j] = Fraction(lam - 2 * j)
        if j + 1 < n:
            f[j + 1, j] = Fraction(1)
        if j > 0:
            e[j - 1, j] = Fraction(j * (lam - j + 1))
    return ModuleRep(SL2, (lam,), n, {"e": e, "f": f, "h": h})


# sparse vectors in the ambient tensor power: {leg tuple: Fraction}
Sparse = Dict[Tuple[int, ...], Fraction]


def _act(gen: str, vec: Sparse, n_fund: int) -> Sparse:
    out: Sparse = {}
    elems = _sl3_to_gl3(gen)
    for key, c in vec.items():
        for leg, j in enumerate(key):
            for (a, b), coef in elems.items():
                if leg < n_fund:
                    # e_ab: basis b -> a
                    if j != b:
                        continue
                    new, val = a, coef
                else:
                    # -(e_ab)^T: basis a -> b with sign
                    if j != a:
                        continue
                    new, val = b, -coef
                nk = key[:leg] + (new,) + key[leg + 1:]
                out[nk] = out.get(nk, 0) + c * val
    return {k: Fraction(v) for k, v in out.items() if v != 0}


class _Echelon:
    """Incremental exact row reduction that remembers how rows were formed."""

    def __init__(self):
        self.rows: List[Tuple[Tuple[int, ...], Sparse, Dict[int, Fraction]]] = []
        self.count = 0

    def reduce(self, v: Sparse):
        v = dict(v)
        coeffs: Dict[int, Fraction] = {}
        for i, (piv, row, _) in enumerate(self.rows):
            c = v.get(piv)
            if not c:
                continue
            c = c / row[piv]
            coeffs[i] = c
            for k, x in row.items():
                nv = v.get(k, 0) - c * x
                if nv:
                    v[k] = nv
                else:
                    v.pop(k, None)
        return v, coeffs

    def add(self, v: Sparse) -> bool:
        rem, coeffs = self.reduce(v)
        if not rem:
            return False
        # remainder = v - sum coeffs_i row_i, and row_i = sum combo_i[j] b_j
        combo: Dict[int, Fraction] = {self.count: Fraction(1)}
        for i, c in coeffs.items():
            for j, t in self.rows[i][2].items():
                combo[j] = combo.get(j, 0) - c * t
        self.rows.append((min(rem), rem, combo))
        self.count += 1
        return True

    def coordinates(self, v: Sparse) -> List[Fraction]:
        rem, coeffs = self.reduce(v)
        if rem:
            raise InconsistentModuleError("vector left the cyclic module")
        out = [Fraction(0)] * self.count
        for i, c in coeffs.items():
            for j, t in self.rows[i][2].items():
                out[j] += c * t
        return out


@lru_cache(maxsize=None)
def build_sl3_module(p: int, q: int) -> ModuleRep:
    """V(p, q): cyclic span of the top vector in fund^p (x) dual^q."""
    if p < 0 or q < 0:
        raise ValueError(f"sl3 highest weight must be >= 0, got ({p}, {q})")
    top: Sparse = {(0,) * p + (2,) * q: Fraction(1)}
    basis: List[Sparse] = []
    words: List[Tuple[int, ...]] = []
    ech = _Echelon()
    queue = deque([((), top)])
    ech.add(top)
    basis.append(top)
    words.append(())
    while queue:
        word, vec = queue.popleft()
        for g in (1, 2):
            w = _act(f"f{g}", vec, p)
            if w and ech.add(w):
                basis.append(w)
                words.append(word + (g,))
                queue.append((word + (g,), w))
    dim = len(basis)
    if dim != weyl_dimension(p, q):
        raise InconsistentModuleError(f"V({p},{q}) has dimension {dim}, expected {weyl_dimension(p, q)}")
    mats: Dict[str, np.ndarray] = {}
    for name in algebra(SL3).generators:
        m = exact_zeros(dim)
        for j, b in enumerate(basis):
            for i, c in enumerate(ech.coordinates(_act(name, b, p))):
                m[i, j] = c
        mats[name] = m
    return ModuleRep(SL3, (p, q), dim, mats, 0, words)


def build_module(alg: str, weight: Iterable[int]) -> ModuleRep:
    weight = tuple(int(x) for x in weight)
    if alg == SL2:
        if len(weight) != 1:
            raise ValueError(f"sl2 weight must have one entry, got {weight}")
        return build_sl2_module(weight[0])
    if alg == SL3:
        if len(weight) != 2:
            raise ValueError(f"sl3 weight must have two entries, got {weight}")
        return build_sl3_module(*weight)
    raise AlgebraError(f"unknown algebra {alg!r}")


def casimir_scalar(m: ModuleRep) -> Fraction:
    c = m.casimir_matrix()
    val = c[0, 0]
    if not np.all(c == val * exact_identity(m.dim)):
        raise InconsistentModuleError(f"Casimir is not scalar on {m.algebra} {m.weight}")
    return Fraction(val)


def expected_casimir(alg: str, weight: Tuple[int, ...]) -> Fraction:
    if alg == SL2:
        (lam,) = weight
        return lam + Fraction(lam * lam, 2)
    p, q = weight
    return 2 * (p + q) + Fraction(2, 3) * (p * p + p * q + q * q)


def commutation_defects(m: ModuleRep) -> List[Tuple[str, str]]:
    """Generator pairs whose matrix bracket differs from the table (exactly)."""
    spec = algebra(m.algebra)
    bad = []
    for a in spec.generators:
        for b in spec.generators:
            lhs = m.matrix(a).dot(m.matrix(b)) - m.matrix(b).dot(m.matrix(a))
            rhs = exact_zeros(m.dim)
            for g, c in spec.bracket(a, b).items():
                rhs = rhs + c * m.matrix(g)
            if not np.all(lhs == rhs):
                bad.append((a, b))
    return bad
