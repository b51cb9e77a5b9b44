"""The nine pieces of ``I(u)|w1, w2, w3>``.

``I(u)`` acting on a formal ket splits by whether the result carries ``u`` in
the first, second, third or no family (I1, I2, I3, I0), and within that by
how the shape (k, l, m) changes: superscript 0 keeps it, ``m`` lowers m by
one, ``p`` raises it by one.
"""

from __future__ import annotations

from typing import Callable, Dict

from .ketcalc import FormalKetSum, KetLabel, LabelError

COMPONENTS = ("I1_0", "I1_m", "I2_0", "I2_m", "I2_p", "I3_0", "I3_p", "I0_0", "I0_p")


class _Ctx:
    """Vacuum data of a tensor space, memoized per evaluation point."""

    def __init__(self, space):
        self.space = space
        self._cache: Dict = {}

    def lam(self, a: int, x) -> complex:
        key = (a, x)
        if key not in self._cache:
            self._cache[key] = self.space.lambda_fn(a, complex(x))
        return self._cache[key]

    def tau(self, u) -> complex:
        return self.space.vacuum_tau(complex(u))


def _inv(x):
    if x == 0:
        raise LabelError("vanishing denominator in an action formula")
    return 1 / x


def i1_0(ctx: _Ctx, u, L: KetLabel) -> FormalKetSum:
    W1, W2, W3 = L.w1, L.w2, L.w3
    out = FormalKetSum()
    for r, a in enumerate(W1):
        coef = ctx.lam(1, a)
        coef -= sum(2 * _inv(a - b) for j, b in enumerate(W1) if j != r)
        coef += sum(_inv(a - b) for b in W2)
        coef -= sum(_inv(a - c) for c in W3)
        out.add(L.edit({1: [r]}, {1: [u]}), coef * _inv(u - a))
        for s, b in enumerate(W2):
            out.add(L.edit({1: [r], 2: [s]}, {1: [u], 2: [a]}), -_inv((u - a) * (a - b)))
        for t, c in enumerate(W3):
            out.add(L.edit({1: [r], 3: [t]}, {1: [u], 3: [a]}), -_inv((u - c) * (c - a)))
    return out


def i1_m(ctx: _Ctx, u, L: KetLabel) -> FormalKetSum:
    out = FormalKetSum()
    for t, c in enumerate(L.w3):
        out.add(L.edit({3: [t]}, {1: [u], 2: [c]}), -_inv(u - c))
    return out


def i2_0(ctx: _Ctx, u, L: KetLabel) -> FormalKetSum:
    W1, W2, W3 = L.w1, L.w2, L.w3
    out = FormalKetSum()
    for s, b in enumerate(W2):
        coef = ctx.lam(2, b)
        coef += sum(_inv(u - a) for a in W1)
        coef -= sum(2 * _inv(b - d) for j, d in enumerate(W2) if j != s)
        coef -= sum(_inv(u - c) for c in W3)
        out.add(L.edit({2: [s]}, {2: [u]}), coef * _inv(u - b))
    return out


def i2_m(ctx: _Ctx, u, L: KetLabel) -> FormalKetSum:
    out = FormalKetSum()
    for t, c in enumerate(L.w3):
        out.add(L.edit({3: [t]}, {1: [c], 2: [u]}), _inv(u - c))
    return out


def i2_p(ctx: _Ctx, u, L: KetLabel) -> FormalKetSum:
    W1, W2 = L.w1, L.w2
    out = FormalKetSum()
    for r, a in enumerate(W1):
        for s, b in enumerate(W2):
            for s2, b2 in enumerate(W2):
                if s2 == s:
                    continue
                out.add(L.edit({1: [r], 2: [s, s2]}, {2: [u], 3: [a]}),
                        -_inv((u - a) * (u - b) * (u - b2)))
    return out


def i3_0(ctx: _Ctx, u, L: KetLabel) -> FormalKetSum:
    W1, W2, W3 = L.w1, L.w2, L.w3
    out = FormalKetSum()
    for t, c in enumerate(W3):
        coef = ctx.lam(3, c)
        coef -= sum(_inv(c - a) for a in W1)
        coef -= sum(_inv(c - b) for b in W2)
        coef -= sum(2 * _inv(c - d) for j, d in enumerate(W3) if j != t)
        out.add(L.edit({3: [t]}, {3: [u]}), coef * _inv(u - c))
        for r, a in enumerate(W1):
            out.add(L.edit({1: [r], 3: [t]}, {1: [c], 3: [u]}), -_inv((u - a) * (a - c)))
        for s, b in enumerate(W2):
            out.add(L.edit({2: [s], 3: [t]}, {2: [c], 3: [u]}), _inv((u - c) * (c - b)))
    return out


def i3_p(ctx: _Ctx, u, L: KetLabel) -> FormalKetSum:
    W1, W2 = L.w1, L.w2
    out = FormalKetSum()
    for r, a in enumerate(W1):
        for s, b in enumerate(W2):
            lab = L.edit({1: [r], 2: [s]}, {3: [u]})
            out.add(lab, (ctx.lam(2, a) - ctx.lam(2, b)) * _inv((u - a) * (a - b)))
            for s2, b2 in enumerate(W2):
                if s2 == s:
                    continue
                out.add(lab, -2 * _inv((u - a) * (a - b2) * (b2 - b)))
                out.add(L.edit({1: [r], 2: [s, s2]}, {2: [a], 3: [u]}),
                        _inv((u - a) * (a - b) * (a - b2)))
    return out


def i0_0(ctx: _Ctx, u, L: KetLabel) -> FormalKetSum:
    W1, W2, W3 = L.w1, L.w2, L.w3
    diag = ctx.tau(u)
    for r, a in enumerate(W1):
        coef = ctx.lam(1, u)
        coef -= sum(2 * _inv(a - d) for j, d in enumerate(W1) if j != r)
        coef += sum(_inv(a - b) for b in W2)
        coef -= sum(_inv(a - c) for c in W3)
        diag -= coef * _inv(u - a)
    for s, b in enumerate(W2):
        coef = ctx.lam(2, u)
        coef += sum(_inv(b - a) for a in W1)
        coef -= sum(2 * _inv(b - d) for j, d in enumerate(W2) if j != s)
        coef -= sum(_inv(b - c) for c in W3)
        diag -= coef * _inv(u - b)
    for t, c in enumerate(W3):
        coef = ctx.lam(3, u)
        coef -= sum(_inv(c - a) for a in W1)
        coef -= sum(_inv(c - b) for b in W2)
        coef -= sum(2 * _inv(c - d) for j, d in enumerate(W3) if j != t)
        diag -= coef * _inv(u - c)
    out = FormalKetSum.single(L, diag)
    for r, a in enumerate(W1):
        for t, c in enumerate(W3):
            out.add(L.edit({1: [r], 3: [t]}, {1: [c], 3: [a]}), _inv((u - a) * (u - c)))
    return out


def i0_p(ctx: _Ctx, u, L: KetLabel) -> FormalKetSum:
    W1, W2 = L.w1, L.w2
    out = FormalKetSum()
    for r, a in enumerate(W1):
        for s, b in enumerate(W2):
            lab = L.edit({1: [r], 2: [s]}, {3: [a]})
            out.add(lab, -(ctx.lam(2, u) - ctx.lam(2, b)) * _inv((u - a) * (u - b)))
            for s2, b2 in enumerate(W2):
                if s2 == s:
                    continue
                out.add(lab, 2 * _inv((u - a) * (u - b2) * (b2 - b)))
    return out


FORMULAS: Dict[str, Callable] = {
    "I1_0": i1_0, "I1_m": i1_m,
    "I2_0": i2_0, "I2_m": i2_m, "I2_p": i2_p,
    "I3_0": i3_0, "I3_p": i3_p,
    "I0_0": i0_0, "I0_p": i0_p,
}


def apply_I_component(name: str, u, s: FormalKetSum | KetLabel, space) -> FormalKetSum:
    if isinstance(s, KetLabel):
        s = FormalKetSum.single(s)
    ctx = _Ctx(space)
    fn = FORMULAS[name]
    out = FormalKetSum()
    for label, c in s:
        out = out + fn(ctx, u, label) * c
    return out


def apply_I_formal(u, s: FormalKetSum | KetLabel, space, names=COMPONENTS) -> FormalKetSum:
    out = FormalKetSum()
    for name in names:
        out = out + apply_I_component(name, u, s, space)
    return out
