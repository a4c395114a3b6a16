"""Command-line front end.

Exit codes: 0 success (and true verdicts), 1 false verdicts or battery
failures, 2 parse errors, 3 mathematical domain errors.  Output is plain
text by default, LaTeX with --latex; identical argv and seed produce
byte-identical output.
"""

from __future__ import annotations

import argparse
import sys

from .algebra import DomainError, EngineError, Geometry
from .batteries import run_all
from .multivector import evaluate, insert, multivector
from .parser import ParseError, parse_polynomial
from .printing import format_polynomial
from .randgen import GeneratorConfig
from .schouten import bracket_poisson, bracket_recursive, is_poisson, jacobi_defect, q_field
from .session import Session, load_session
from .variational import equivalent, is_exact, normalize_to_bA_form


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--geometry", metavar="n,m,s", help="base dim, fiber dim, covector slots")
    common.add_argument("--file", metavar="SESSION", help="session file with geometry and lets")
    common.add_argument("--latex", action="store_true", help="print polynomials as LaTeX")

    top = argparse.ArgumentParser(prog="varschouten", description=__doc__)
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bracket", parents=[common], help="Schouten bracket, density formula")
    p.add_argument("xi")
    p.add_argument("eta")

    p = sub.add_parser("bracket-recursive", parents=[common], help="Schouten bracket via insertion recursion")
    p.add_argument("xi")
    p.add_argument("eta")

    p = sub.add_parser("eval", parents=[common], help="evaluate a k-vector on k covector slots")
    p.add_argument("xi")
    p.add_argument("slots", nargs="*", help="slot numbers or session aliases")

    p = sub.add_parser("insert", parents=[common], help="fill the rightmost argument with a slot")
    p.add_argument("xi")
    p.add_argument("slot")

    p = sub.add_parser("normalize", parents=[common], help="rewrite so every term starts with an underived b")
    p.add_argument("density")

    p = sub.add_parser("equiv", parents=[common], help="do two densities define the same functional?")
    p.add_argument("lhs")
    p.add_argument("rhs")

    p = sub.add_parser("degree", parents=[common], help="b-degree and class triviality of a density")
    p.add_argument("density")

    p = sub.add_parser("jacobi", parents=[common], help="graded Jacobi defect of three multivectors")
    p.add_argument("xi")
    p.add_argument("eta")
    p.add_argument("zeta")

    p = sub.add_parser("poisson-check", parents=[common], help="certify [[P,P]] = 0 for a bivector")
    p.add_argument("bivector")

    p = sub.add_parser("qfield", parents=[common], help="sections of the evolutionary field of a multivector")
    p.add_argument("xi")

    p = sub.add_parser("selftest", parents=[common], help="run the verification batteries")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cases", type=int, default=25)
    return top


def _environment(args) -> Session:
    """Geometry and name bindings for this invocation."""
    session = None
    if args.file:
        with open(args.file, encoding="utf-8") as fh:
            session = load_session(fh.read())
    if args.geometry:
        parts = args.geometry.split(",")
        if len(parts) != 3:
            raise DomainError("--geometry takes n,m,s")
        try:
            g = Geometry(*(int(p) for p in parts))
        except ValueError:
            raise DomainError("--geometry takes three integers") from None
        if session is not None and session.geometry != g:
            raise DomainError("--geometry disagrees with the session file")
        if session is None:
            session = Session(g)
    if session is None:
        session = Session(Geometry(1, 1, 4))
    return session


def _parse(text: str, session: Session):
    return parse_polynomial(text, session.geometry, session.names)


def _slot(text: str, session: Session) -> int:
    if text in session.slots:
        return session.slots[text]
    if not text.isdigit():
        raise DomainError(f"slot {text!r} is neither a number nor a declared alias")
    return int(text)


def _show(f, args) -> str:
    return format_polynomial(f, latex=args.latex)


def _print_class(report, args):
    if report.zero:
        print("degree none")
        print("0")
        return
    print(f"degree {report.degree}")
    d = report.representative.density
    if report.degree >= 1:
        d = normalize_to_bA_form(d)
    print(_show(d, args))


def _cmd_bracket(args, session) -> int:
    xi = multivector(_parse(args.xi, session))
    eta = multivector(_parse(args.eta, session))
    _print_class(bracket_poisson(xi, eta), args)
    return 0


def _cmd_bracket_recursive(args, session) -> int:
    xi = multivector(_parse(args.xi, session))
    eta = multivector(_parse(args.eta, session))
    _print_class(bracket_recursive(xi, eta), args)
    return 0


def _cmd_eval(args, session) -> int:
    xi = multivector(_parse(args.xi, session))
    slots = tuple(_slot(s, session) for s in args.slots)
    print(_show(evaluate(xi, slots).density, args))
    return 0


def _cmd_insert(args, session) -> int:
    xi = multivector(_parse(args.xi, session))
    print(_show(insert(xi, _slot(args.slot, session)).density, args))
    return 0


def _cmd_normalize(args, session) -> int:
    print(_show(normalize_to_bA_form(_parse(args.density, session)), args))
    return 0


def _cmd_equiv(args, session) -> int:
    same = equivalent(_parse(args.lhs, session), _parse(args.rhs, session))
    print("equivalent" if same else "not equivalent")
    return 0 if same else 1


def _cmd_degree(args, session) -> int:
    f = _parse(args.density, session)
    m = multivector(f)
    print(f"degree {m.degree}")
    print(f"class {'zero' if is_exact(f) else 'nonzero'}")
    return 0


def _cmd_jacobi(args, session) -> int:
    xi = multivector(_parse(args.xi, session))
    eta = multivector(_parse(args.eta, session))
    zeta = multivector(_parse(args.zeta, session))
    defect = jacobi_defect(xi, eta, zeta)
    if defect.is_zero:
        print("zero class")
        return 0
    print("nonzero class")
    d = defect.density
    if d.homogeneous_degree() not in (None, 0):
        d = normalize_to_bA_form(d)
    print(_show(d, args))
    return 1


def _cmd_poisson_check(args, session) -> int:
    p = multivector(_parse(args.bivector, session))
    ok, witness = is_poisson(p)
    if ok:
        print("PASS")
        return 0
    print("FAIL")
    print(_show(normalize_to_bA_form(witness.density), args))
    return 1


def _cmd_qfield(args, session) -> int:
    field = q_field(multivector(_parse(args.xi, session)))
    print(f"parity {field.parity}")
    m = session.geometry.m
    for alpha in range(1, m + 1):
        label = "q" if m == 1 else f"q{alpha}"
        print(f"{label}: {_show(field.q_sections[alpha - 1], args)}")
    for alpha in range(1, m + 1):
        label = "b" if m == 1 else f"b{alpha}"
        print(f"{label}: {_show(field.b_sections[alpha - 1], args)}")
    return 0


def _cmd_selftest(args, session) -> int:
    cfg = GeneratorConfig(geometry=session.geometry, seed=args.seed)
    reports = run_all(cfg, cases=args.cases)
    failed = 0
    for report in reports:
        print(report.summary_line())
        failed += len(report.failures)
        for rec in report.failures:
            print(f"  case {rec.case}: {rec.detail}", file=sys.stderr)
            for text in rec.inputs:
                print(f"    {text}", file=sys.stderr)
    return 0 if failed == 0 else 1


_COMMANDS = {
    "bracket": _cmd_bracket,
    "bracket-recursive": _cmd_bracket_recursive,
    "eval": _cmd_eval,
    "insert": _cmd_insert,
    "normalize": _cmd_normalize,
    "equiv": _cmd_equiv,
    "degree": _cmd_degree,
    "jacobi": _cmd_jacobi,
    "poisson-check": _cmd_poisson_check,
    "qfield": _cmd_qfield,
    "selftest": _cmd_selftest,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        session = _environment(args)
        return _COMMANDS[args.command](args, session)
    except ParseError as pe:
        print(f"parse error: {pe}", file=sys.stderr)
        return 2
    except (DomainError, EngineError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


def run():
    sys.exit(main())


if __name__ == "__main__":
    run()
