"""Cross-check model and shared hypothesis strategies.

BladeModel is a from-scratch implementation of the graded product and the
one-sided partials: odd words become bitmask blades over a registry that
orders variables by first appearance (deliberately not the engine's
canonical order), and every sign comes from explicit inversion counting.
Agreement between the model and the engine is therefore evidence that the
engine's merge-sign bookkeeping is right, not just self-consistent.
"""

from __future__ import annotations

from collections import Counter
from fractions import Fraction

from hypothesis import strategies as st

from varschouten import (
    BKIND,
    DiffPolynomial,
    Geometry,
    JetVariable,
    QKIND,
    bvar,
    midx,
    monomial,
    qvar,
)


class BladeModel:
    def __init__(self):
        self.registry: dict[JetVariable, int] = {}

    def _bit(self, v: JetVariable) -> int:
        if v not in self.registry:
            self.registry[v] = len(self.registry)
        return self.registry[v]

    def word_sign_mask(self, word) -> tuple[int, int]:
        """Sign of sorting the word into registration order, and its mask."""
        idx = [self._bit(v) for v in word]
        mask = 0
        for i in idx:
            mask |= 1 << i
        sign = 1
        arr = list(idx)
        for i in range(len(arr)):
            for j in range(len(arr) - 1 - i):
                if arr[j] > arr[j + 1]:
                    arr[j], arr[j + 1] = arr[j + 1], arr[j]
                    sign = -sign
        return sign, mask

    def from_poly(self, f: DiffPolynomial) -> dict:
        out: dict = {}
        for m, c in f.terms.items():
            sign, mask = self.word_sign_mask(m.odd)
            key = (frozenset(m.base), frozenset(m.even), mask)
            val = out.get(key, Fraction(0)) + sign * c
            if val:
                out[key] = val
            elif key in out:
                del out[key]
        return out

    def mul(self, a: dict, b: dict) -> dict:
        out: dict = {}
        for (base1, even1, m1), c1 in a.items():
            for (base2, even2, m2), c2 in b.items():
                if m1 & m2:
                    continue
                swaps = 0
                m2_rest = m2
                while m2_rest:
                    low = m2_rest & -m2_rest
                    j = low.bit_length() - 1
                    swaps += bin(m1 >> (j + 1)).count("1")
                    m2_rest ^= low
                sign = -1 if swaps % 2 else 1
                base = frozenset((Counter(dict(base1)) + Counter(dict(base2))).items())
                even = frozenset((Counter(dict(even1)) + Counter(dict(even2))).items())
                key = (base, even, m1 | m2)
                val = out.get(key, Fraction(0)) + sign * c1 * c2
                if val:
                    out[key] = val
                elif key in out:
                    del out[key]
        return out

    def partial_odd(self, a: dict, v: JetVariable, side: str) -> dict:
        bit = self._bit(v)
        out: dict = {}
        for (base, even, mask), c in a.items():
            if not (mask >> bit) & 1:
                continue
            below = bin(mask & ((1 << bit) - 1)).count("1")
            total = bin(mask).count("1")
            exp = below if side == "left" else total - 1 - below
            sign = -1 if exp % 2 else 1
            key = (base, even, mask ^ (1 << bit))
            val = out.get(key, Fraction(0)) + sign * c
            if val:
                out[key] = val
            elif key in out:
                del out[key]
        return out


# ---------------------------------------------------------------- strategies

G11 = Geometry(1, 1, 2)
G22 = Geometry(2, 2, 2)

_COEFFS = st.fractions(
    min_value=Fraction(-4), max_value=Fraction(4), max_denominator=3
).filter(bool)


def _index_pool(g: Geometry, max_order: int):
    if g.n == 1:
        return [midx(*([1] * k)) for k in range(max_order + 1)]
    pool = [midx()]
    for k in range(1, max_order + 1):
        pool.append(midx(*([1] * k)))
        pool.append(midx(*([2] * k)))
    pool.append(midx(1, 2))
    return pool


def variables(g: Geometry, kind: int, max_order: int = 2):
    pool = [
        JetVariable(kind, fiber, ix)
        for fiber in range(1, g.m + 1)
        for ix in _index_pool(g, max_order)
    ]
    return st.sampled_from(pool)


@st.composite
def polynomials(draw, g: Geometry = G11, degree=None, max_terms: int = 3):
    """Small random density; fixed b-degree when degree is given."""
    out = DiffPolynomial.zero(g)
    for _ in range(draw(st.integers(1, max_terms))):
        deg = degree if degree is not None else draw(st.integers(0, 2))
        base = []
        if draw(st.booleans()):
            base.append((draw(st.integers(1, g.n)), draw(st.integers(1, 2))))
        even = draw(st.lists(variables(g, QKIND), max_size=2))
        odd = draw(
            st.lists(variables(g, BKIND), min_size=deg, max_size=deg, unique=True)
        )
        out = out + monomial(g, draw(_COEFFS), base=base, even=even, odd=odd)
    return out


def assert_models_agree(f: DiffPolynomial, model: BladeModel, expected: dict):
    assert model.from_poly(f) == expected
