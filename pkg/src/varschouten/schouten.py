"""The variational Schouten bracket, computed three independent ways.

Density formula (the odd Poisson bracket):

    [[xi, eta]] = int sum_alpha [ (rdelta xi / delta q^alpha) (ldelta eta / delta b_alpha)
                                - (rdelta xi / delta b_alpha) (ldelta eta / delta q^alpha) ]

Evolutionary-field route: Q^xi = d_q with sections -rdelta xi/delta b plus
d_b with sections +rdelta xi/delta q, and [[xi, eta]] = int Q^xi(eta).

Recursive route: the bracket is pinned down by its fully inserted values,

    [[xi,eta]](p) = l/(k+l-1) [[xi, eta(p)]] + (-1)^(l-1) k/(k+l-1) [[xi(p), eta]],

bottoming out at [[H, phi]] = int d_phi(H) and [[phi, H]] = -int d_phi(H).

SIGN CONVENTION (load-bearing): applying an evolutionary field multiplies the
transported section on the LEFT of the left partial derivative,

    d_phi(f) = sum_{alpha,sigma} D_sigma(phi^alpha) * (d^l f / d q^alpha_sigma),

and likewise for the b-directional part.  Right-multiplication would flip the
sign of every odd-section application and break the agreement between the
density formula and the field route.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .algebra import (
    BKIND,
    LEFT,
    QKIND,
    RIGHT,
    DiffPolynomial,
    DomainError,
    Geometry,
    JetVariable,
)
from .multivector import Multivector, from_slots, iota
from .variational import Functional, is_exact, var_b, var_q


@dataclass(frozen=True)
class EvolutionaryField:
    """Graded evolutionary vector field with one section per fiber component.

    parity 0 acts evenly, parity 1 oddly; nonzero q-sections must have
    b-degree of that parity and nonzero b-sections the complementary one.
    """

    q_sections: tuple[DiffPolynomial, ...]
    b_sections: tuple[DiffPolynomial, ...]
    parity: int

    def __post_init__(self):
        if self.parity not in (0, 1):
            raise DomainError("field parity must be 0 or 1")
        for sec in self.q_sections:
            for deg in {m.b_degree for m in sec.terms}:
                if deg % 2 != self.parity:
                    raise DomainError("q-section parity disagrees with field parity")
        for sec in self.b_sections:
            for deg in {m.b_degree for m in sec.terms}:
                if deg % 2 != (self.parity + 1) % 2:
                    raise DomainError("b-section parity disagrees with field parity")

    def apply(self, f: DiffPolynomial) -> DiffPolynomial:
        """Transported sections, multiplied on the left of the left partials."""
        g = f.geometry
        out = DiffPolynomial.zero(g)
        for kind, sections in ((QKIND, self.q_sections), (BKIND, self.b_sections)):
            for alpha in range(1, g.m + 1):
                sec = sections[alpha - 1]
                if sec.is_zero:
                    continue
                for ix in f.family_indices(kind, alpha):
                    part = f.partial(JetVariable(kind, alpha, ix), LEFT)
                    if part.is_zero:
                        continue
                    out = out + sec.total_derivative_multi(ix) * part
        return out


def evolutionary_field(
    g: Geometry,
    q_sections=None,
    b_sections=None,
    parity: int = 0,
) -> EvolutionaryField:
    zero = DiffPolynomial.zero(g)
    qs = tuple(q_sections) if q_sections else (zero,) * g.m
    bs = tuple(b_sections) if b_sections else (zero,) * g.m
    if len(qs) != g.m or len(bs) != g.m:
        raise DomainError(f"expected {g.m} sections per direction")
    return EvolutionaryField(qs, bs, parity)


def q_field(xi: Multivector) -> EvolutionaryField:
    """The field Q^xi with q-sections -rdelta xi/delta b and b-sections rdelta xi/delta q."""
    g = xi.geometry
    f = xi.density
    qs = tuple(-var_b(f, a, RIGHT) for a in range(1, g.m + 1))
    bs = tuple(var_q(f, a) for a in range(1, g.m + 1))
    return EvolutionaryField(qs, bs, (xi.degree - 1) % 2)


def graded_commutator(
    x: EvolutionaryField, y: EvolutionaryField, f: DiffPolynomial
) -> DiffPolynomial:
    """[X, Y](f) = X(Y(f)) - (-1)^(parity X * parity Y) Y(X(f))."""
    first = x.apply(y.apply(f))
    second = y.apply(x.apply(f))
    if (x.parity * y.parity) % 2:
        return first + second
    return first - second


@dataclass(frozen=True)
class BracketReport:
    """Outcome of a bracket computation.

    representative always holds the computed density; zero-class results are
    reported with zero=True and no degree, never as a degree-(k+l-1) object.
    inserted/slots are populated by the recursive route only.
    """

    representative: Functional
    method: str
    zero: bool
    degree: int | None
    result: Multivector | None
    inserted: Functional | None = None
    slots: tuple[int, ...] = ()


def schouten_density(f: DiffPolynomial, g: DiffPolynomial) -> DiffPolynomial:
    """The density formula; the factor order inside each product matters."""
    if f.geometry != g.geometry:
        raise DomainError("bracket arguments live over different geometries")
    geo = f.geometry
    out = DiffPolynomial.zero(geo)
    for alpha in range(1, geo.m + 1):
        out = out + var_q(f, alpha) * var_b(g, alpha, LEFT)
        out = out - var_b(f, alpha, RIGHT) * var_q(g, alpha)
    return out


def _report(density: DiffPolynomial, method: str, k: int, l: int, **extra) -> BracketReport:
    zero = is_exact(density)
    deg = None if zero else k + l - 1
    result = None if zero else Multivector(Functional(density), k + l - 1)
    return BracketReport(
        representative=Functional(density),
        method=method,
        zero=zero,
        degree=deg,
        result=result,
        **extra,
    )


def bracket_poisson(xi: Multivector, eta: Multivector) -> BracketReport:
    d = schouten_density(xi.density, eta.density)
    return _report(d, "poisson", xi.degree, eta.degree)


def bracket_via_q(xi: Multivector, eta: Multivector) -> BracketReport:
    d = q_field(xi).apply(eta.density)
    return _report(d, "qfield", xi.degree, eta.degree)


def _section_of(onevec: DiffPolynomial) -> tuple[DiffPolynomial, ...]:
    g = onevec.geometry
    return tuple(var_b(onevec, a, LEFT) for a in range(1, g.m + 1))


def _apply_q_sections(sections, f: DiffPolynomial) -> DiffPolynomial:
    g = f.geometry
    field = EvolutionaryField(
        tuple(sections), (DiffPolynomial.zero(g),) * g.m, _sections_parity(sections)
    )
    return field.apply(f)


def _sections_parity(sections) -> int:
    for sec in sections:
        for m in sec.terms:
            return m.b_degree % 2
    return 0


def bracket_base_case(h: Multivector, phi: Multivector) -> Multivector:
    """[[H, phi]] = int d_phi(H) for a 0-vector H and a 1-vector phi."""
    if h.degree != 0 or phi.degree != 1:
        raise DomainError("base case takes a 0-vector and a 1-vector, in that order")
    d = _apply_q_sections(_section_of(phi.density), h.density)
    return Multivector(Functional(d), 0)


def _recursive_density(
    f: DiffPolynomial, k: int, g: DiffPolynomial, l: int, slots: tuple[int, ...]
) -> DiffPolynomial:
    geo = f.geometry
    if k == 0 and l == 0:
        return DiffPolynomial.zero(geo)
    if k == 0 and l == 1:
        return _apply_q_sections(_section_of(g), f)
    if k == 1 and l == 0:
        return -_apply_q_sections(_section_of(f), g)
    total = k + l - 1
    p = slots[-1]
    rest = slots[:-1]
    out = DiffPolynomial.zero(geo)
    if l >= 1:
        out = out + _recursive_density(f, k, iota(g, p), l - 1, rest).scaled(
            Fraction(l, total)
        )
    if k >= 1:
        piece = _recursive_density(iota(f, p), k - 1, g, l, rest).scaled(
            Fraction(k, total)
        )
        out = out + (piece if (l - 1) % 2 == 0 else -piece)
    return out


def bracket_recursive(
    xi: Multivector, eta: Multivector, slots: tuple[int, ...] | None = None
) -> BracketReport:
    """Fully insert the bracket via the recursion, then rebuild the b-form.

    Slots default to the lowest free slot numbers; reconstruction reads the
    slot-j variable of each monomial as the j-th odd letter.
    """
    k, l = xi.degree, eta.degree
    geo = xi.geometry
    total = k + l - 1
    if total < 0:
        zero = DiffPolynomial.zero(geo)
        return _report(zero, "recursive", k, l, inserted=Functional(zero), slots=())
    if slots is None:
        used = xi.density.slots_used() | eta.density.slots_used()
        free = [j for j in range(1, geo.s + 1) if j not in used]
        if len(free) < total:
            raise DomainError(
                f"recursion needs {total} free covector slots, geometry offers {len(free)}"
            )
        slots = tuple(free[:total])
    else:
        if len(slots) != total:
            raise DomainError(f"recursion needs exactly {total} slots")
        if len(set(slots)) != total:
            raise DomainError("insertion slots must be distinct")
        used = xi.density.slots_used() | eta.density.slots_used()
        for j in slots:
            if not 1 <= j <= geo.s:
                raise DomainError(f"slot {j} outside 1..{geo.s}")
            if j in used:
                raise DomainError(f"slot {j} already occupied by an argument")
    inserted = _recursive_density(xi.density, k, eta.density, l, slots)
    if total == 0:
        return _report(inserted, "recursive", k, l, inserted=Functional(inserted), slots=())
    rebuilt = from_slots(inserted, slots)
    zero = is_exact(rebuilt.density)
    return BracketReport(
        representative=Functional(rebuilt.density),
        method="recursive",
        zero=zero,
        degree=None if zero else total,
        result=None if zero else rebuilt,
        inserted=Functional(inserted),
        slots=slots,
    )


def jacobi_defect(
    xi: Multivector, eta: Multivector, zeta: Multivector
) -> Functional:
    """The graded Jacobi combination; its class vanishes identically.

    With degrees (r, s, t):
        (-1)^((r-1)(t-1)) [[xi,[[eta,zeta]]]] + (-1)^((r-1)(s-1)) [[eta,[[zeta,xi]]]]
      + (-1)^((s-1)(t-1)) [[zeta,[[xi,eta]]]]
    """
    r, s, t = xi.degree, eta.degree, zeta.degree
    f, g, h = xi.density, eta.density, zeta.density
    d1 = schouten_density(f, schouten_density(g, h))
    d2 = schouten_density(g, schouten_density(h, f))
    d3 = schouten_density(h, schouten_density(f, g))
    if ((r - 1) * (t - 1)) % 2:
        d1 = -d1
    if ((r - 1) * (s - 1)) % 2:
        d2 = -d2
    if ((s - 1) * (t - 1)) % 2:
        d3 = -d3
    return Functional(d1 + d2 + d3)


def is_poisson(p: Multivector) -> tuple[bool, Multivector | None]:
    """Certify [[P, P]] = 0 for a bivector; on failure return the witness 3-vector."""
    if p.degree != 2:
        raise DomainError("Poisson certification applies to bivectors")
    w = schouten_density(p.density, p.density)
    if is_exact(w):
        return True, None
    return False, Multivector(Functional(w), 3)


def _default_probes(g: Geometry) -> list[DiffPolynomial]:
    """Probe densities of b-degree 0..2, jet order <= 3, over fiber 1."""
    from .algebra import bvar, monomial, qvar

    q0, qx, qxx = qvar(1), qvar(1, 1), qvar(1, 1, 1)
    b0, bx, bxx = bvar(1), bvar(1, 1), bvar(1, 1, 1)
    bxxx = bvar(1, 1, 1, 1)
    return [
        monomial(g, 1, even=[q0]),
        monomial(g, Fraction(1, 2), even=[q0, q0]),
        monomial(g, 1, even=[qxx]),
        monomial(g, 1, base=[(1, 1)], even=[qx]),
        monomial(g, 1, even=[q0], odd=[b0]),
        monomial(g, 1, even=[qx], odd=[b0]),
        monomial(g, 1, even=[q0], odd=[bx]),
        monomial(g, 1, odd=[bxxx]),
        monomial(g, 1, odd=[b0, bx]),
        monomial(g, 1, odd=[b0, bxx]),
        monomial(g, 1, even=[q0], odd=[b0, bx]),
    ]


def q_differential_check(p: Multivector, probes=None) -> bool:
    """For a certified Poisson bivector, int (Q^P)^2(f) must vanish on every probe."""
    ok, _ = is_poisson(p)
    if not ok:
        raise DomainError("the bivector is not Poisson; its field does not square to zero")
    field = q_field(p)
    if probes is None:
        probes = _default_probes(p.geometry)
    for f in probes:
        if not is_exact(field.apply(field.apply(f))):
            return False
    return True
