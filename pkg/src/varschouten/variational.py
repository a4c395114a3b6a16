"""Variational derivatives, exactness of densities, and functionals.

The Euler operator used throughout is

    delta f / delta u^alpha = sum_sigma (-1)^|sigma| D_sigma ( d f / d u^alpha_sigma )

with the partial taken on the requested side for odd families.  It annihilates
total divergences; over R^n with polynomial coefficients the converse holds as
well (the homotopy of the variational complex preserves polynomiality, and a
pure base-variable polynomial is always a divergence), so a density is exact
iff every fiber Euler operator vanishes.  That is the equality test on
functionals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .algebra import (
    BKIND,
    LEFT,
    PKIND,
    QKIND,
    DiffPolynomial,
    DomainError,
    Geometry,
    GeometryMismatch,
    JetVariable,
    Monomial,
    MultiIndex,
    midx,
)


def var_derivative(
    f: DiffPolynomial, kind: int, fiber: int, slot: int = 0, side: str = LEFT
) -> DiffPolynomial:
    """Euler operator of one variable family, Horner-style.

    The sum over sigma is evaluated as nested polynomials in each D_i,
    so only max-order many total derivatives are applied per dimension and
    exact densities collapse early.
    """
    g = f.geometry
    bounds = [0] * g.n
    for v in f.jet_variables():
        if v.kind == kind and v.fiber == fiber and v.slot == slot:
            for d, c in v.index.counts:
                bounds[d - 1] = max(bounds[d - 1], c)

    def rec(dim: int, prefix: dict[int, int]) -> DiffPolynomial:
        if dim > g.n:
            ix = MultiIndex(tuple(sorted((d, c) for d, c in prefix.items() if c)))
            return f.partial(JetVariable(kind, fiber, ix, slot), side)
        top = bounds[dim - 1]
        prefix[dim] = top
        acc = rec(dim + 1, prefix)
        for k in range(top - 1, -1, -1):
            prefix[dim] = k
            acc = rec(dim + 1, prefix) - acc.total_derivative(dim)
        del prefix[dim]
        return acc

    return rec(1, {})


def var_q(f: DiffPolynomial, fiber: int) -> DiffPolynomial:
    """delta f / delta q^fiber; left and right coincide for even variables."""
    return var_derivative(f, QKIND, fiber)


def var_b(f: DiffPolynomial, fiber: int, side: str = LEFT) -> DiffPolynomial:
    return var_derivative(f, BKIND, fiber, side=side)


def var_p(f: DiffPolynomial, slot: int, fiber: int) -> DiffPolynomial:
    return var_derivative(f, PKIND, fiber, slot=slot)


def is_exact(f: DiffPolynomial) -> bool:
    """True iff f is a total divergence (plus a pure base-variable part)."""
    for kind, fiber, slot in sorted(f.families()):
        side = LEFT  # for odd families the right Euler operator is +-(left)
        if var_derivative(f, kind, fiber, slot, side):
            return False
    return True


@dataclass(frozen=True, eq=False)
class Functional:
    """A density modulo total divergences.  Equality is equivalence of classes."""

    density: DiffPolynomial

    @property
    def geometry(self) -> Geometry:
        return self.density.geometry

    def __eq__(self, other) -> bool:
        if not isinstance(other, Functional):
            return NotImplemented
        return equivalent(self, other)

    @property
    def is_zero(self) -> bool:
        return is_exact(self.density)

    def __add__(self, other: "Functional") -> "Functional":
        return Functional(self.density + other.density)

    def __sub__(self, other: "Functional") -> "Functional":
        return Functional(self.density - other.density)

    def __neg__(self) -> "Functional":
        return Functional(-self.density)

    def scaled(self, c) -> "Functional":
        return Functional(self.density.scaled(c))


def equivalent(a: Functional | DiffPolynomial, b: Functional | DiffPolynomial) -> bool:
    da = a.density if isinstance(a, Functional) else a
    db = b.density if isinstance(b, Functional) else b
    if da.geometry != db.geometry:
        raise GeometryMismatch("cannot compare functionals over different geometries")
    return is_exact(da - db)


def normalize_to_bA_form(f: Functional | DiffPolynomial) -> DiffPolynomial:
    """Integrate by parts until every monomial's minimal odd factor is underived.

    Each step rewrites one monomial c*M whose leading (minimal) odd factor w
    carries a derivative: with w = D_i(w'), subtract the total derivative of
    the monomial with w replaced by w'.  Since w is the strict minimum of the
    word, w' is fresh, and every surviving monomial's leading-factor order
    drops by one, so the loop terminates.
    """
    work = f.density if isinstance(f, Functional) else f
    g = work.geometry
    deg = work.homogeneous_degree()
    if deg is None:
        return work
    if deg < 1:
        raise DomainError("bA-form normalization needs b-degree at least 1")
    done: dict[Monomial, Fraction] = {}
    guard = work.max_order() + 2
    while work.terms:
        guard -= 1
        if guard < 0:
            raise DomainError("bA-form normalization failed to terminate")
        ready = {}
        pending = {}
        for m, c in work.terms.items():
            if m.odd[0].index.order == 0:
                ready[m] = c
            else:
                pending[m] = c
        for m, c in ready.items():
            acc = done.get(m)
            if acc is None:
                done[m] = c
            else:
                acc = acc + c
                if acc:
                    done[m] = acc
                else:
                    del done[m]
        if not pending:
            break
        shaved = DiffPolynomial.zero(g)
        for m, c in pending.items():
            w = m.odd[0]
            dim = w.index.counts[0][0]
            lowered = Monomial(
                m.base, m.even, (w._replace(index=w.index.minus(dim)),) + m.odd[1:]
            )
            shaved = shaved + DiffPolynomial(g, {lowered: c}).total_derivative(dim)
        work = DiffPolynomial(g, pending) - shaved
    return DiffPolynomial(g, done)
