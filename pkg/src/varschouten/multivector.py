"""Variational multivectors: homogeneous functionals of odd covectors.

A k-vector is (the class of) a density of b-degree k.  Covector arguments are
handled through numbered slot variables: inserting slot p into the rightmost
argument of a k-vector is

    iota_p(xi) = (1/k) * sum_{j=1..k} (-1)^(k-j) [j-th odd factor -> p]

and full evaluation on the ordered slot list (p^1, ..., p^k) is

    (1/k!) * sum_{s in S_k} sign(s) [i-th odd factor -> slots[s(i)]].

Both substitutions are positional on the canonical odd word; the replaced
factor keeps its fiber and multi-index and becomes even, so no extra signs
appear beyond the explicit ones.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations

from .algebra import (
    BKIND,
    PKIND,
    DiffPolynomial,
    DomainError,
    Geometry,
    JetVariable,
    Monomial,
    _sort_word,
)
from .variational import Functional, equivalent, is_exact, var_b


@dataclass(frozen=True, eq=False)
class Multivector:
    """One homogeneous component; the zero density is allowed at any degree."""

    functional: Functional
    degree: int

    def __post_init__(self):
        if self.degree < 0:
            raise DomainError("multivector degree cannot be negative")
        d = self.functional.density.homogeneous_degree()
        if d is not None and d != self.degree:
            raise DomainError(
                f"density has b-degree {d}, declared degree {self.degree}"
            )

    @property
    def density(self) -> DiffPolynomial:
        return self.functional.density

    @property
    def geometry(self) -> Geometry:
        return self.functional.geometry

    def __eq__(self, other) -> bool:
        if not isinstance(other, Multivector):
            return NotImplemented
        return self.degree == other.degree and equivalent(
            self.functional, other.functional
        )


def multivector(f: Functional | DiffPolynomial) -> Multivector:
    """Wrap a homogeneous density, inferring its degree (zero density refused)."""
    func = f if isinstance(f, Functional) else Functional(f)
    d = func.density.homogeneous_degree()
    if d is None:
        raise DomainError("cannot infer the degree of the zero density")
    return Multivector(func, d)


def decompose(f: Functional | DiffPolynomial) -> list[Multivector]:
    """Split by b-degree and drop the components that are total divergences."""
    func = f if isinstance(f, Functional) else Functional(f)
    out = []
    for deg, comp in func.density.b_components().items():
        if not is_exact(comp):
            out.append(Multivector(Functional(comp), deg))
    return out


def iota(f: DiffPolynomial, slot: int) -> DiffPolynomial:
    """Insertion at the density level; f must be b-homogeneous of degree >= 1."""
    k = f.homogeneous_degree()
    if k is None:
        return f
    if k < 1:
        raise DomainError("cannot insert a covector into a degree-0 density")
    out = DiffPolynomial.zero(f.geometry)
    for j in range(1, k + 1):
        piece = f.substitute_odd({j: slot})
        out = out + (piece if (k - j) % 2 == 0 else -piece)
    return out.scaled(Fraction(1, k))


def insert(xi: Multivector, slot: int) -> Multivector:
    """Fill the rightmost covector argument of xi with slot variables."""
    if xi.degree < 1:
        raise DomainError("cannot insert a covector into a 0-vector")
    if slot in xi.density.slots_used():
        raise DomainError(f"slot {slot} already used in the multivector")
    return Multivector(Functional(iota(xi.density, slot)), xi.degree - 1)


def evaluate(xi: Multivector, slots: list[int] | tuple[int, ...]) -> Functional:
    """Evaluate xi on the ordered covector slot list, one slot per argument."""
    k = xi.degree
    if len(slots) != k:
        raise DomainError(f"degree-{k} multivector takes {k} covector arguments")
    if len(set(slots)) != len(slots):
        raise DomainError("covector slots must be distinct")
    used = xi.density.slots_used()
    for slot in slots:
        if slot in used:
            raise DomainError(f"slot {slot} already used in the multivector")
    if k == 0:
        return xi.functional
    g = xi.geometry
    out = DiffPolynomial.zero(g)
    for perm in permutations(range(k)):
        sign = _perm_sign(perm)
        piece = xi.density.substitute_odd(
            {i + 1: slots[perm[i]] for i in range(k)}
        )
        out = out + (piece if sign > 0 else -piece)
    fact = 1
    for i in range(2, k + 1):
        fact *= i
    return Functional(out.scaled(Fraction(1, fact)))


def evaluate_by_insertion(xi: Multivector, slots) -> Functional:
    """Same value as evaluate(), computed by inserting the last slot first."""
    cur = xi
    for slot in reversed(list(slots)):
        cur = insert(cur, slot)
    if cur.degree != 0:
        raise DomainError("slot list did not exhaust the multivector arguments")
    return cur.functional


def _perm_sign(perm) -> int:
    sign = 1
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                sign = -sign
    return sign


def extract_operator(xi: Multivector) -> tuple[DiffPolynomial, ...]:
    """The m-tuple A^alpha = (1/k) delta^l xi / delta b_alpha.

    Pairing back, sum_alpha b_alpha * A^alpha is equivalent to xi's density.
    """
    if xi.degree < 1:
        raise DomainError("a 0-vector carries no operator")
    k = Fraction(1, xi.degree)
    g = xi.geometry
    return tuple(var_b(xi.density, a).scaled(k) for a in range(1, g.m + 1))


def from_slots(f: Functional | DiffPolynomial, slots) -> Multivector:
    """Invert evaluation: slot-j covector variables become the j-th odd letter.

    Each monomial must carry exactly one variable of every listed slot, to
    first power.  The odd word is built in slot order and canonicalized; this
    map commutes with total derivatives, so classes go to classes.
    """
    density = f.density if isinstance(f, Functional) else f
    g = density.geometry
    order = {slot: i for i, slot in enumerate(slots)}
    if len(order) != len(slots):
        raise DomainError("covector slots must be distinct")
    n = g.n
    out: dict[Monomial, Fraction] = {}
    for m, c in density.terms.items():
        letters: list[JetVariable | None] = [None] * len(slots)
        kept = []
        for v, e in m.even:
            if v.kind == PKIND and v.slot in order:
                if e != 1:
                    raise DomainError("slot variable appears squared; not an evaluation image")
                pos = order[v.slot]
                if letters[pos] is not None:
                    raise DomainError("slot appears twice in one monomial")
                letters[pos] = JetVariable(BKIND, v.fiber, v.index)
            else:
                kept.append((v, e))
        if any(x is None for x in letters):
            raise DomainError("monomial missing a covector slot; not an evaluation image")
        if m.odd:
            raise DomainError("density still contains odd factors; not fully evaluated")
        sign, sorted_word = _sort_word([x for x in letters if x is not None], n)
        if sign == 0:
            continue
        mono = Monomial(m.base, tuple(kept), sorted_word)
        coeff = c if sign > 0 else -c
        acc = out.get(mono)
        if acc is None:
            out[mono] = coeff
        else:
            acc = acc + coeff
            if acc:
                out[mono] = acc
            else:
                del out[mono]
    return Multivector(Functional(DiffPolynomial(g, out)), len(slots))
