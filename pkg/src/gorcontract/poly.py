"""Sparse polynomials with integer coefficients.

Only what the local-ring catalogue needs: sums, products, powers,
substitution and a deterministic text form such as ``u^2 - s1^2 - s2^3``.
"""
from __future__ import annotations

import re

_VAR = re.compile(r"^([a-z]+)(\d*)$")


def var_rank(name: str):
    """Sort key for variables: ``s1 < s2 < ... < u < u2 < ...``, then others."""
    m = _VAR.match(name)
    if not m:
        return (9, name, 0)
    stem, num = m.group(1), int(m.group(2) or 1)
    order = {"s": 0, "u": 1}.get(stem, 2)
    return (order, stem, num)


def _mono_mul(a: tuple, b: tuple) -> tuple:
    exps = dict(a)
    for v, e in b:
        exps[v] = exps.get(v, 0) + e
    return tuple(sorted(((v, e) for v, e in exps.items() if e), key=lambda t: var_rank(t[0])))


class Poly:
    __slots__ = ("terms",)

    def __init__(self, terms=None):
        # monomial (tuple of (var, exp)) -> int, insertion order kept
        clean = {}
        for mono, c in (terms or {}).items():
            if c:
                clean[mono] = clean.get(mono, 0) + c
        self.terms = {k: v for k, v in clean.items() if v}

    @classmethod
    def var(cls, name: str) -> "Poly":
        return cls({((name, 1),): 1})

    @classmethod
    def const(cls, c: int) -> "Poly":
        return cls({(): c})

    @staticmethod
    def _lift(x) -> "Poly":
        if isinstance(x, Poly):
            return x
        if isinstance(x, int):
            return Poly.const(x)
        raise TypeError(f"cannot use {x!r} as a polynomial")

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for mono, c in other.terms.items():
            out[mono] = out.get(mono, 0) + c
        return Poly(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        out = Poly.const(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, int):
            other = Poly.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def variables(self) -> set[str]:
        return {v for mono in self.terms for v, _ in mono}

    def subs(self, mapping: dict) -> "Poly":
        """Substitute polynomials (or ints) for variables."""
        out = Poly()
        for mono, c in self.terms.items():
            term = Poly.const(c)
            for v, e in mono:
                term = term * (self._lift(mapping[v]) ** e if v in mapping else Poly.var(v) ** e)
            out = out + term
        return out

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for i, (mono, c) in enumerate(self.terms.items()):
            body = "*".join(v if e == 1 else f"{v}^{e}" for v, e in mono)
            mag = abs(c)
            if not body:
                text = str(mag)
            elif mag == 1:
                text = body
            else:
                text = f"{mag}*{body}"
            if i == 0:
                parts.append(text if c > 0 else f"-{text}")
            else:
                parts.append(("+ " if c > 0 else "- ") + text)
        return " ".join(parts)

    def __repr__(self):
        return f"Poly({self})"


def monomial(**exps) -> Poly:
    mono = tuple(sorted(((v, e) for v, e in exps.items() if e), key=lambda t: var_rank(t[0])))
    return Poly({mono: 1})
