"""Formal kets ``|w1, w2, w3> = F1(w1) F2(w2) F3(w3)|0>`` and the operator P.

A :class:`KetLabel` stores three canonically sorted root lists; a
:class:`FormalKetSum` is a finite linear combination of labels. Entries may be
complex floats or exact ``Fraction`` values (exact mode), and coefficients
follow whatever arithmetic the entries use.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from math import factorial
from numbers import Number
from typing import Dict, Iterable, Iterator, List, Sequence, Tuple

import numpy as np

from .config import TOL


class LabelError(ValueError):
    """Invalid label: coinciding entries or a vanishing denominator."""


def _sort_key(x) -> Tuple:
    if isinstance(x, complex):
        return (x.real, x.imag)
    return (x, 0)


def _canon(entries: Iterable) -> Tuple:
    return tuple(sorted(entries, key=_sort_key))


def _fmt(x) -> str:
    if isinstance(x, Fraction):
        return str(x)
    x = complex(x)
    if x.imag == 0:
        return f"{x.real:.12g}"
    return f"({x.real:.12g}{x.imag:+.12g}j)"


@dataclass(frozen=True)
class KetLabel:
    w1: Tuple = ()
    w2: Tuple = ()
    w3: Tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "w1", _canon(self.w1))
        object.__setattr__(self, "w2", _canon(self.w2))
        object.__setattr__(self, "w3", _canon(self.w3))

    @property
    def shape(self) -> Tuple[int, int, int]:
        return len(self.w1), len(self.w2), len(self.w3)

    def family(self, a: int) -> Tuple:
        return (self.w1, self.w2, self.w3)[a - 1]

    def edit(self, remove: Dict[int, Sequence[int]] | None = None,
             add: Dict[int, Sequence] | None = None) -> "KetLabel":
        """Drop entries by index and append new ones, family by family (1, 2, 3)."""
        remove = remove or {}
        add = add or {}
        fams = []
        for a in (1, 2, 3):
            drop = set(remove.get(a, ()))
            kept = [x for i, x in enumerate(self.family(a)) if i not in drop]
            fams.append(kept + list(add.get(a, ())))
        return KetLabel(*fams)

    def isclose(self, other: "KetLabel", rtol: float = 1e-12) -> bool:
        if self.shape != other.shape:
            return False
        a = list(self.w1 + self.w2 + self.w3)
        b = list(other.w1 + other.w2 + other.w3)
        scale = max([1.0] + [abs(complex(x)) for x in a])
        return all(abs(complex(x) - complex(y)) <= rtol * scale for x, y in zip(a, b))

    def validate(self, eps: float = 0.0):
        """Distinct entries within each family and between w1 and w2."""
        for fam in (self.w1, self.w2, self.w3):
            for i in range(len(fam)):
                for j in range(i):
                    if abs(fam[i] - fam[j]) <= eps:
                        raise LabelError(f"coinciding entries {fam[j]} and {fam[i]} in {self}")
        for a in self.w1:
            for b in self.w2:
                if abs(a - b) <= eps:
                    raise LabelError(f"w1 entry {a} coincides with w2 entry {b}")

    def __str__(self) -> str:
        fam = lambda xs: "{" + ", ".join(_fmt(x) for x in xs) + "}"
        return f"|{fam(self.w1)},{fam(self.w2)},{fam(self.w3)}>"


def _is_zero(c) -> bool:
    return c == 0


class FormalKetSum:
    """Linear combination of :class:`KetLabel` values.

    Labels are dictionary keys; entries moved between families keep their
    exact value, so labels arising from one base label match exactly.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Dict[KetLabel, Number] | Iterable[Tuple[KetLabel, Number]] | None = None):
        self._terms: Dict[KetLabel, Number] = {}
        if terms is None:
            return
        items = terms.items() if isinstance(terms, dict) else terms
        for label, c in items:
            self.add(label, c)

    @classmethod
    def single(cls, label: KetLabel, coeff: Number = 1) -> "FormalKetSum":
        return cls([(label, coeff)])

    def add(self, label: KetLabel, coeff: Number):
        """In-place accumulate; only builders call this before the sum is shared."""
        new = self._terms.get(label, 0) + coeff
        if _is_zero(new):
            self._terms.pop(label, None)
        else:
            self._terms[label] = new

    def __iter__(self) -> Iterator[Tuple[KetLabel, Number]]:
        return iter(self._terms.items())

    def __len__(self) -> int:
        return len(self._terms)

    def __getitem__(self, label: KetLabel):
        return self._terms.get(label, 0)

    def labels(self) -> List[KetLabel]:
        return list(self._terms)

    def __add__(self, other: "FormalKetSum") -> "FormalKetSum":
        out = FormalKetSum(self._terms)
        for label, c in other:
            out.add(label, c)
        return out

    def __sub__(self, other: "FormalKetSum") -> "FormalKetSum":
        return self + other * -1

    def __mul__(self, scalar: Number) -> "FormalKetSum":
        return FormalKetSum([(label, c * scalar) for label, c in self._terms.items()])

    __rmul__ = __mul__

    def __neg__(self) -> "FormalKetSum":
        return self * -1

    def max_abs(self) -> float:
        return max((abs(complex(c)) for c in self._terms.values()), default=0.0)

    def cleaned(self, rtol: float = TOL.cleanup) -> "FormalKetSum":
        """Drop coefficients below ``rtol`` times the largest one."""
        cut = rtol * self.max_abs()
        return FormalKetSum([(l, c) for l, c in self._terms.items() if abs(complex(c)) > cut])

    def isclose(self, other: "FormalKetSum", rtol: float = 1e-12) -> bool:
        diff = self - other
        scale = max(self.max_abs(), other.max_abs(), 1e-300)
        return diff.max_abs() <= rtol * scale

    def pretty(self) -> str:
        """Deterministic one-term-per-line rendering, sorted by shape then entries."""
        def key(item):
            label, _ = item
            return (tuple(-n for n in label.shape),
                    [_sort_key(complex(x)) for x in label.w1 + label.w2 + label.w3])
        lines = []
        for label, c in sorted(self._terms.items(), key=key):
            lines.append(f"{_fmt(c)} · {label}")
        return "\n".join(lines)

    def __repr__(self) -> str:
        return f"FormalKetSum({len(self)} terms)"


# --- the operator P ---------------------------------------------------------


def apply_P(s: FormalKetSum) -> FormalKetSum:
    """``P|w1,w2,w3> = sum_{r,s} |w1 - w1r, w2 - w2s, w3 + w1r> / (w2s - w1r)``."""
    out = FormalKetSum()
    for label, c in s:
        for r, a in enumerate(label.w1):
            for j, b in enumerate(label.w2):
                den = b - a
                if den == 0:
                    raise LabelError(f"P denominator vanishes for {label}")
                out.add(label.edit({1: [r], 2: [j]}, {3: [a]}), c / den)
    return out


def apply_P_power(s: FormalKetSum, n: int) -> FormalKetSum:
    for _ in range(n):
        s = apply_P(s)
    return s


def p_power_closed(w1: Sequence, w2: Sequence, n: int) -> FormalKetSum:
    """Closed form of ``P^n |w1, w2, 0>`` over ordered index tuples R_n, S_n."""
    w1, w2 = list(w1), list(w2)
    out = FormalKetSum()
    if n < 0 or n > min(len(w1), len(w2)):
        return out
    base = KetLabel(w1, w2, ())
    for R in permutations(range(len(base.w1)), n):
        for S in permutations(range(len(base.w2)), n):
            den = Fraction(1) if _exact(base) else 1.0
            for r, s in zip(R, S):
                den = den * (base.w2[s] - base.w1[r])
            out.add(base.edit({1: R, 2: S}, {3: [base.w1[r] for r in R]}), 1 / den)
    return out


def p_series(w1: Sequence, w2: Sequence) -> FormalKetSum:
    """``sum_n P^n / n! |w1, w2, 0>``; the sum stops at ``min(k, l)``."""
    label = KetLabel(w1, w2, ())
    label.validate()
    term = FormalKetSum.single(label, Fraction(1) if _exact(label) else 1.0)
    out = FormalKetSum(dict(term))
    for n in range(1, min(len(label.w1), len(label.w2)) + 1):
        term = apply_P(term)
        out = out + term * (Fraction(1, factorial(n)) if _exact(label) else 1.0 / factorial(n))
    return out


def _exact(label: KetLabel) -> bool:
    entries = label.w1 + label.w2 + label.w3
    return bool(entries) and all(isinstance(x, (int, Fraction)) for x in entries)


# --- evaluation into a tensor space ----------------------------------------------


def evaluate_label(label: KetLabel, space, order: Tuple[int, ...] = (1, 2, 3)) -> np.ndarray:
    """``F1(w1) F2(w2) F3(w3)|0>`` as a vector; ``order`` permutes the blocks."""
    vec = space.vacuum()
    for a in reversed(order):
        for x in reversed(label.family(a)):
            x = complex(x)
            space.check_point(x, "label entry")
            vec = space.apply_current(f"f{a}", x, vec)
    return vec


def evaluate(s: FormalKetSum, space, order: Tuple[int, ...] = (1, 2, 3)) -> np.ndarray:
    out = np.zeros(space.dim, dtype=complex)
    for label, c in s:
        out += complex(c) * evaluate_label(label, space, order)
    return out
