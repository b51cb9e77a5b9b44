"""Exact bracket tables and quadratic Casimir data for sl(2) and sl(3).

The sl(3) basis is realized inside gl(3) by elementary matrices::

    e1 = e12, e2 = e23, e3 = e13, f1 = e21, f2 = e32, f3 = e31,
    h1 = e11 - e22, h2 = e22 - e33

so that e3 = [e1, e2] and f3 = [f2, f1]. Every coefficient is an ``int`` or
a ``Fraction``; nothing in this module touches floating point.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Dict, List, Tuple

SL2 = "sl2"
SL3 = "sl3"
ALGEBRAS = (SL2, SL3)

LinComb = Dict[str, int]


class AlgebraError(ValueError):
    """Raised for unknown algebras or generators, or mixed-algebra input."""


SL3_ELEMENTARY = {
    "e1": (0, 1),
    "e2": (1, 2),
    "e3": (0, 2),
    "f1": (1, 0),
    "f2": (2, 1),
    "f3": (2, 0),
}


def gl3_bracket(a: Tuple[int, int], b: Tuple[int, int]) -> Dict[Tuple[int, int], int]:
    """[e_ij, e_kl] = delta_jk e_il - delta_li e_kj, as a sparse dict."""
    (i, j), (k, l) = a, b
    out: Dict[Tuple[int, int], int] = {}
    if j == k:
        out[(i, l)] = out.get((i, l), 0) + 1
    if l == i:
        out[(k, j)] = out.get((k, j), 0) - 1
    return {key: v for key, v in out.items() if v}


def _sl3_to_gl3(name: str) -> Dict[Tuple[int, int], int]:
    if name in SL3_ELEMENTARY:
        return {SL3_ELEMENTARY[name]: 1}
    if name == "h1":
        return {(0, 0): 1, (1, 1): -1}
    if name == "h2":
        return {(1, 1): 1, (2, 2): -1}
    raise AlgebraError(f"unknown sl3 generator {name!r}")


def _gl3_to_sl3(x: Dict[Tuple[int, int], int]) -> LinComb:
    back = {v: k for k, v in SL3_ELEMENTARY.items()}
    out: LinComb = {}
    diag = [0, 0, 0]
    for (i, j), c in x.items():
        if i == j:
            diag[i] += c
        else:
            out[back[(i, j)]] = out.get(back[(i, j)], 0) + c
    if sum(diag) != 0:
        raise AlgebraError("element is not traceless")
    # a11 e11 + a22 e22 + a33 e33 = a11 h1 + (a11 + a22) h2
    c1, c2 = diag[0], diag[0] + diag[1]
    if c1:
        out["h1"] = c1
    if c2:
        out["h2"] = c2
    return {k: v for k, v in out.items() if v}


def _sl3_bracket(a: str, b: str) -> LinComb:
    out: Dict[Tuple[int, int], int] = {}
    for ea, ca in _sl3_to_gl3(a).items():
        for eb, cb in _sl3_to_gl3(b).items():
            for key, v in gl3_bracket(ea, eb).items():
                out[key] = out.get(key, 0) + ca * cb * v
    return _gl3_to_sl3({k: v for k, v in out.items() if v})


_SL2_TABLE: Dict[Tuple[str, str], LinComb] = {
    ("h", "e"): {"e": 2},
    ("h", "f"): {"f": -2},
    ("e", "f"): {"h": 1},
}


@dataclass(frozen=True)
class AlgebraSpec:
    name: str
    generators: Tuple[str, ...]
    raising: Tuple[str, ...]
    lowering: Tuple[str, ...]
    cartan: Tuple[str, ...]
    table: Dict[Tuple[str, str], LinComb] = field(repr=False)
    casimir: Tuple[Tuple[Fraction, str, str], ...] = field(repr=False)

    def bracket(self, a: str, b: str) -> LinComb:
        if a not in self.generators or b not in self.generators:
            raise AlgebraError(f"{a!r}, {b!r} are not both generators of {self.name}")
        return dict(self.table[(a, b)])


def _build_sl2() -> AlgebraSpec:
    gens = ("e", "f", "h")
    table: Dict[Tuple[str, str], LinComb] = {}
    for a, b in product(gens, gens):
        if (a, b) in _SL2_TABLE:
            table[(a, b)] = dict(_SL2_TABLE[(a, b)])
        elif (b, a) in _SL2_TABLE:
            table[(a, b)] = {k: -v for k, v in _SL2_TABLE[(b, a)].items()}
        else:
            table[(a, b)] = {}
    casimir = ((Fraction(1), "e", "f"), (Fraction(1), "f", "e"), (Fraction(1, 2), "h", "h"))
    return AlgebraSpec(SL2, gens, ("e",), ("f",), ("h",), table, casimir)


def _build_sl3() -> AlgebraSpec:
    gens = ("e1", "e2", "e3", "f1", "f2", "f3", "h1", "h2")
    table = {(a, b): _sl3_bracket(a, b) for a, b in product(gens, gens)}
    third = Fraction(1, 3)
    casimir = tuple((Fraction(1), x, y) for x, y in (
        ("e1", "f1"), ("e2", "f2"), ("e3", "f3"),
        ("f1", "e1"), ("f2", "e2"), ("f3", "e3"),
    )) + (
        # 2/3 (h1^2 + h1 h2 + h2^2), with h1 h2 split symmetrically
        (2 * third, "h1", "h1"),
        (third, "h1", "h2"),
        (third, "h2", "h1"),
        (2 * third, "h2", "h2"),
    )
    return AlgebraSpec(SL3, gens, ("e1", "e2", "e3"), ("f1", "f2", "f3"), ("h1", "h2"), table, casimir)


_ALGEBRAS = {SL2: _build_sl2(), SL3: _build_sl3()}


def algebra(name: str) -> AlgebraSpec:
    try:
        return _ALGEBRAS[name]
    except KeyError:
        raise AlgebraError(f"unknown algebra {name!r}; expected one of {ALGEBRAS}") from None


def algebra_of(generator: str) -> str:
    for name, spec in _ALGEBRAS.items():
        if generator in spec.generators:
            return name
    raise AlgebraError(f"unknown generator {generator!r}")


def commutator(a: str, b: str, alg: str | None = None) -> LinComb:
    """Exact bracket [a, b] as ``{generator: int}``.

    The algebra is inferred from the generator names unless given.
    """
    if alg is None:
        alg = algebra_of(a)
        if algebra_of(b) != alg:
            raise AlgebraError(f"mixed-algebra bracket [{a}, {b}]")
    return algebra(alg).bracket(a, b)


def casimir_terms(alg: str) -> List[Tuple[Fraction, str, str]]:
    """Quadratic Casimir as (coefficient, left, right) terms.

    The h-block is stored polarized, so ``sum(c * a (x) b)`` is a symmetric
    tensor and can be used directly as the two-site coupling.
    """
    return list(algebra(alg).casimir)


def combine(terms: LinComb, scale: int = 1, into: LinComb | None = None) -> LinComb:
    out = {} if into is None else into
    for k, v in terms.items():
        out[k] = out.get(k, 0) + scale * v
        if out[k] == 0:
            del out[k]
    return out


def nested_bracket(alg: str, a: str, comb: LinComb) -> LinComb:
    """[a, sum c_b b] for a linear combination on the right."""
    out: LinComb = {}
    for b, c in comb.items():
        combine(commutator(a, b, alg), c, out)
    return out


def jacobi_defect(alg: str, a: str, b: str, c: str) -> LinComb:
    out: LinComb = {}
    combine(nested_bracket(alg, a, commutator(b, c, alg)), 1, out)
    combine(nested_bracket(alg, b, commutator(c, a, alg)), 1, out)
    combine(nested_bracket(alg, c, commutator(a, b, alg)), 1, out)
    return out
