"""Verification batteries: seeded random certification of every identity.

Each battery returns a BatteryReport whose summary_line is the machine
format printed by the selftest subcommand: `name cases failures seed`.
A failure record carries the case index, the config seed, and the printed
inputs, which together replay the case exactly.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction

from .algebra import RIGHT, DiffPolynomial, bvar, monomial, pvar, qvar
from .multivector import Multivector, evaluate, iota, multivector
from .printing import format_polynomial
from .randgen import GeneratorConfig, random_density, random_multivector
from .schouten import (
    EvolutionaryField,
    bracket_poisson,
    bracket_recursive,
    bracket_via_q,
    graded_commutator,
    is_poisson,
    jacobi_defect,
    q_field,
    schouten_density,
)
from .variational import equivalent, is_exact, var_b, var_q


@dataclass(frozen=True)
class FailureRecord:
    battery: str
    case: int
    seed: int
    inputs: tuple[str, ...]
    detail: str


@dataclass(frozen=True)
class BatteryReport:
    name: str
    cases: int
    failures: tuple[FailureRecord, ...]
    seed: int
    wall_time: float

    @property
    def ok(self) -> bool:
        return not self.failures

    def summary_line(self) -> str:
        return f"{self.name} {self.cases} {len(self.failures)} {self.seed}"


def _printed(*polys: DiffPolynomial) -> tuple[str, ...]:
    return tuple(format_polynomial(p) for p in polys)


# degree pairs cycled by the pairwise batteries; every recursion depth
# k+l-1 <= 4 and every sign path k,l <= 3 appears
_DEGREE_PAIRS = [
    (1, 1), (0, 2), (1, 2), (2, 2), (0, 1), (2, 1),
    (1, 3), (0, 3), (3, 1), (2, 3), (3, 2),
]

_DEGREE_TRIPLES = [
    (1, 1, 1), (1, 1, 2), (2, 1, 1), (1, 2, 1), (1, 2, 2),
    (2, 2, 1), (2, 1, 2), (1, 1, 3), (3, 1, 1), (1, 3, 1),
]


def _admissible_pairs(cfg: GeneratorConfig):
    return [
        (k, l)
        for k, l in _DEGREE_PAIRS
        if k <= cfg.max_degree and l <= cfg.max_degree and k + l - 1 <= cfg.geometry.s
    ]


def battery_definitions_agree(cfg: GeneratorConfig, cases: int = 50) -> BatteryReport:
    """Density formula vs evolutionary field vs fully inserted recursion."""
    start = time.perf_counter()
    failures = []
    pairs = _admissible_pairs(cfg)
    for case in range(cases):
        k, l = pairs[case % len(pairs)]
        xi = random_multivector(cfg, k, salt=f"defs:{case}:xi")
        eta = random_multivector(cfg, l, salt=f"defs:{case}:eta")
        a = bracket_poisson(xi, eta)
        b = bracket_via_q(xi, eta)
        if not equivalent(a.representative, b.representative):
            failures.append(
                FailureRecord(
                    "definitions-agree", case, cfg.seed,
                    _printed(xi.density, eta.density),
                    "density formula and field route disagree",
                )
            )
            continue
        r = bracket_recursive(xi, eta)
        inserted = a.representative.density
        for slot in reversed(r.slots):
            inserted = iota(inserted, slot)
        if not equivalent(inserted, r.inserted.density):
            failures.append(
                FailureRecord(
                    "definitions-agree", case, cfg.seed,
                    _printed(xi.density, eta.density),
                    "recursion disagrees with inserted density formula",
                )
            )
    return BatteryReport(
        "definitions-agree", cases, tuple(failures), cfg.seed,
        time.perf_counter() - start,
    )


def battery_jacobi(cfg: GeneratorConfig, cases: int = 50) -> BatteryReport:
    start = time.perf_counter()
    failures = []
    triples = [
        t for t in _DEGREE_TRIPLES
        if max(t) <= cfg.max_degree and sum(t) <= 5
    ]
    for case in range(cases):
        r, s, t = triples[case % len(triples)]
        xi = random_multivector(cfg, r, salt=f"jac:{case}:xi")
        eta = random_multivector(cfg, s, salt=f"jac:{case}:eta")
        zeta = random_multivector(cfg, t, salt=f"jac:{case}:zeta")
        if not jacobi_defect(xi, eta, zeta).is_zero:
            failures.append(
                FailureRecord(
                    "jacobi", case, cfg.seed,
                    _printed(xi.density, eta.density, zeta.density),
                    "graded Jacobi defect has a nonzero class",
                )
            )
    return BatteryReport(
        "jacobi", cases, tuple(failures), cfg.seed, time.perf_counter() - start
    )


def _bracket_field(xi: Multivector, eta: Multivector) -> EvolutionaryField:
    """Q of the bracket, built from any representative; sections are
    variational derivatives, so the choice of representative drops out."""
    g = xi.geometry
    d = schouten_density(xi.density, eta.density)
    return EvolutionaryField(
        tuple(-var_b(d, a, RIGHT) for a in range(1, g.m + 1)),
        tuple(var_q(d, a) for a in range(1, g.m + 1)),
        (xi.degree + eta.degree) % 2,
    )


def battery_commutator(cfg: GeneratorConfig, cases: int = 50) -> BatteryReport:
    """int Q^[[xi,eta]](f) agrees with int [Q^xi, Q^eta](f) on random probes."""
    start = time.perf_counter()
    failures = []
    pairs = _admissible_pairs(cfg)
    for case in range(cases):
        k, l = pairs[case % len(pairs)]
        xi = random_multivector(cfg, k, salt=f"comm:{case}:xi")
        eta = random_multivector(cfg, l, salt=f"comm:{case}:eta")
        probe = random_density(
            cfg, case % 3, random.Random(f"{cfg.seed}:comm:{case}:probe")
        )
        lhs = _bracket_field(xi, eta).apply(probe)
        rhs = graded_commutator(q_field(xi), q_field(eta), probe)
        if not equivalent(lhs, rhs):
            failures.append(
                FailureRecord(
                    "commutator", case, cfg.seed,
                    _printed(xi.density, eta.density, probe),
                    "bracket field disagrees with the field commutator",
                )
            )
    return BatteryReport(
        "commutator", cases, tuple(failures), cfg.seed, time.perf_counter() - start
    )


def _remark1_holds(h: Multivector, xi: Multivector) -> bool:
    """[[H, xi]](p) is 2 xi(delta H, p) as classes, for a 0-vector H, 2-vector xi."""
    g = h.geometry
    lhs = iota(bracket_poisson(h, xi).representative.density, 1)
    grad = tuple(var_q(h.density, a) for a in range(1, g.m + 1))
    rhs = evaluate(xi, (2, 1)).density.substitute_slot(2, grad)
    return equivalent(lhs, rhs.scaled(2))


def _remark2_identity_holds(g) -> bool:
    """Recursion step for the 1-vectors <b,q> and <b,q_x>, with the inserted
    slot replaced by the genuine jet w = q_x.  The slot symbol is not an
    actual covector: substituting early produces the unwanted directional
    derivative through w, so this identity must break (left side is the
    exact q_x^2 + q*q_xx, right side the nonzero class 2*q*q_xx)."""
    xi = monomial(g, 1, even=[qvar(1)], odd=[bvar(1)])
    eta = monomial(g, 1, even=[qvar(1, 1)], odd=[bvar(1)])
    w = monomial(g, 1, even=[qvar(1, 1)])
    lhs = iota(schouten_density(xi, eta), 1).substitute_slot(1, (w,))
    xi_w = iota(xi, 1).substitute_slot(1, (w,))
    eta_w = iota(eta, 1).substitute_slot(1, (w,))
    rhs = schouten_density(xi, eta_w) + schouten_density(xi_w, eta)
    return equivalent(lhs, rhs)


def battery_remarks(cfg: GeneratorConfig, cases: int = 20) -> BatteryReport:
    """(a) the factor-2 pairing law on random cases; (b) the fixed
    actual-covector substitution, which must violate the recursion identity."""
    start = time.perf_counter()
    failures = []
    for case in range(cases):
        h = random_multivector(cfg, 0, salt=f"rem:{case}:h")
        xi = random_multivector(cfg, 2, salt=f"rem:{case}:xi")
        if not _remark1_holds(h, xi):
            failures.append(
                FailureRecord(
                    "remarks", case, cfg.seed,
                    _printed(h.density, xi.density),
                    "pairing factor law failed",
                )
            )
    if _remark2_identity_holds(cfg.geometry):
        failures.append(
            FailureRecord(
                "remarks", cases, cfg.seed, (),
                "covector substitution unexpectedly satisfied the identity",
            )
        )
    return BatteryReport(
        "remarks", cases + 1, tuple(failures), cfg.seed, time.perf_counter() - start
    )


def battery_golden_examples(cfg: GeneratorConfig | None = None) -> BatteryReport:
    """Fixed worked cases with frozen expected values; no randomness."""
    start = time.perf_counter()
    g = cfg.geometry if cfg is not None else GeneratorConfig().geometry
    seed = cfg.seed if cfg is not None else 0
    failures = []
    checks = []

    q0, qx, qxx = qvar(1), qvar(1, 1), qvar(1, 1, 1)
    b0, bx = bvar(1), bvar(1, 1)

    # commuting translation pair: bracket of the two flows vanishes
    v1 = monomial(g, 1, even=[qx], odd=[b0])
    v2 = monomial(g, 1, even=[q0, qx], odd=[b0])
    checks.append(("translation pair", is_exact(schouten_density(v1, v2))))

    # non-commuting pair: [x q, q_x] = q, bracket is -<b, q>
    w1 = monomial(g, 1, base=[(1, 1)], even=[q0], odd=[b0])
    w2 = monomial(g, 1, even=[qx], odd=[b0])
    expected = monomial(g, -1, even=[q0], odd=[b0])
    checks.append(
        ("vector field commutator", equivalent(schouten_density(w1, w2), expected))
    )

    # third-order pair: [[ int b*b_x, int x^3*q_xx*b ]] = 2 int x^3*b_xxx*b
    xi = multivector(monomial(g, 1, odd=[b0, bx]))
    eta = multivector(monomial(g, 1, base=[(1, 3)], even=[qxx], odd=[b0]))
    target = monomial(g, 2, base=[(1, 3)], odd=[bvar(1, 1, 1, 1), b0])
    checks.append(
        ("third-order bracket", equivalent(bracket_poisson(xi, eta).representative.density, target))
    )
    checks.append(
        ("third-order field route", bracket_via_q(xi, eta).representative.density == target)
    )

    # quadratic pair: [[ int b*b_x, int q_x*b*b_x ]] = 2 int b*b_x*b_xx
    eta2 = multivector(monomial(g, 1, even=[qx], odd=[b0, bx]))
    target2 = monomial(g, 2, odd=[b0, bx, bvar(1, 1, 1)])
    checks.append(
        ("quadratic bracket", bracket_poisson(xi, eta2).representative.density == target2)
    )

    # inserted form of the third-order bracket, both covector slots filled
    r = bracket_recursive(xi, eta, slots=(1, 2))
    p1xxx = DiffPolynomial.variable(g, pvar(1, 1, 1, 1, 1))
    p2xxx = DiffPolynomial.variable(g, pvar(2, 1, 1, 1, 1))
    p1 = DiffPolynomial.variable(g, pvar(1, 1))
    p2 = DiffPolynomial.variable(g, pvar(2, 1))
    cube = monomial(g, 1, base=[(1, 3)])
    ins_target = cube * (p1xxx * p2 - p2xxx * p1)
    checks.append(("inserted third-order bracket", r.inserted.density == ins_target))
    checks.append(
        ("reconstructed third-order bracket", equivalent(r.representative.density, target))
    )

    # pairing factor, fixed instance: H = int q^2/2, xi = int b*b_x
    h = multivector(monomial(g, Fraction(1, 2), even=[q0, q0]))
    checks.append(("pairing factor instance", _remark1_holds(h, xi)))

    # first KdV structure is Poisson
    ok1, _ = is_poisson(xi)
    checks.append(("first structure Poisson", ok1))

    for i, (name, ok) in enumerate(checks):
        if not ok:
            failures.append(
                FailureRecord("golden-examples", i, seed, (name,), "golden value mismatch")
            )
    return BatteryReport(
        "golden-examples", len(checks), tuple(failures), seed,
        time.perf_counter() - start,
    )


def run_all(cfg: GeneratorConfig, cases: int = 50) -> list[BatteryReport]:
    return [
        battery_definitions_agree(cfg, cases),
        battery_jacobi(cfg, cases),
        battery_commutator(cfg, cases),
        battery_remarks(cfg, max(1, cases // 2)),
        battery_golden_examples(cfg),
    ]
