"""Session files and the command-line front end.

CLI tests drive cli.main in-process and freeze the exact stdout bytes;
exit code conventions: 0 success/true, 1 false verdicts, 2 parse errors,
3 domain errors.
"""

import pytest

from varschouten import Geometry, ParseError, load_session
from varschouten.cli import main


# -- session files -----------------------------------------------------------


def test_session_happy_path():
    s = load_session(
        "geometry 1 1 4\n"
        "let xi = b*b_x\n"
        "let eta = b*x^3*q_xx  # worked example\n"
        "let both = xi + eta\n"
        "\n"
        "slot first = 1\n"
    )
    assert s.geometry == Geometry(1, 1, 4)
    assert sorted(s.names) == ["both", "eta", "xi"]
    assert s.names["both"] == s.names["xi"] + s.names["eta"]
    assert s.slots == {"first": 1}


@pytest.mark.parametrize(
    "text,message",
    [
        ("geometry 1 1 4\ngeometry 1 1 4", "line 2, col 1: geometry declared twice"),
        ("let xi = q", "line 1, col 1: geometry must be declared before other lines"),
        ("geometry 1 1", "line 1, col 1: expected: geometry <n> <m> <s>"),
        ("geometry 0 1 2", "line 1, col 1: bad geometry: geometry needs at least one base dimension"),
        ("geometry 1 1 4\nfrob xi = q", "line 2, col 1: unknown declaration 'frob'"),
        ("geometry 1 1 4\nlet q2 = q", "line 2, col 5: name 'q2' shadows a variable token"),
        ("geometry 1 1 4\nlet b_x = q", "line 2, col 5: name 'b_x' shadows a variable token"),
        ("geometry 1 1 4\nlet xi = q\nlet xi = b", "line 3, col 5: name 'xi' already declared"),
        ("geometry 1 1 4\nslot first = 9", "line 2, col 14: slot 9 out of range 1..4"),
        ("geometry 1 1 4\nslot first = x", "line 2, col 14: slot alias needs an integer slot number"),
        ("", "line 1, col 1: session file declares no geometry"),
        ("# nothing but comments\n  \n", "line 1, col 1: session file declares no geometry"),
    ],
)
def test_session_errors(text, message):
    with pytest.raises(ParseError) as info:
        load_session(text)
    assert str(info.value) == message


def test_session_reports_expression_errors_at_file_coordinates():
    with pytest.raises(ParseError) as info:
        load_session("geometry 1 1 4\nlet xi = q*")
    assert str(info.value) == "line 2, col 12: unexpected end of input"


def test_session_names_must_be_declared_before_use():
    with pytest.raises(ParseError) as info:
        load_session("geometry 1 1 4\nlet xi = eta\nlet eta = q")
    assert "unknown name 'eta'" in info.value.message
    assert info.value.line == 2


# -- command-line front end -----------------------------------------------------


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_bracket_command_golden(capsys):
    code, out, _ = run_cli(capsys, "bracket", "b*b_x", "b*x^3*q_xx")
    assert code == 0
    assert out == "degree 2\n12*x*b_x*b + 6*x^2*b_xx*b + 2*x^3*b_xxx*b\n"


def test_bracket_of_commuting_flows(capsys):
    code, out, _ = run_cli(capsys, "bracket", "q_x*b", "q*q_x*b")
    assert code == 0
    assert out == "degree none\n0\n"


def test_bracket_recursive_command(capsys):
    code, out, _ = run_cli(capsys, "bracket-recursive", "b*b_x", "b*x^3*q_xx")
    assert code == 0
    assert out == "degree 2\n2*x^3*b_xxx*b\n"


def test_latex_output(capsys):
    code, out, _ = run_cli(capsys, "bracket", "--latex", "b*b_x", "b*x^3*q_xx")
    assert code == 0
    assert out == "degree 2\n12\\,x\\,b_{x}\\,b + 6\\,x^{2}\\,b_{xx}\\,b + 2\\,x^{3}\\,b_{xxx}\\,b\n"


def test_eval_and_insert_commands(capsys):
    code, out, _ = run_cli(capsys, "eval", "b*b_x", "1", "2")
    assert (code, out) == (0, "1/2*p1*p2_x - 1/2*p1_x*p2\n")
    code, out, _ = run_cli(capsys, "insert", "b*b_x", "1")
    assert (code, out) == (0, "1/2*p1_x*b - 1/2*p1*b_x\n")


def test_normalize_and_degree_commands(capsys):
    code, out, _ = run_cli(capsys, "normalize", "b_x*b_xx")
    assert (code, out) == (0, "b_xxx*b\n")
    code, out, _ = run_cli(capsys, "degree", "b*b_x")
    assert (code, out) == (0, "degree 2\nclass nonzero\n")
    code, out, _ = run_cli(capsys, "degree", "q_x*b + q*b_x")
    assert (code, out) == (0, "degree 1\nclass zero\n")


def test_equiv_command_exit_codes(capsys):
    code, out, _ = run_cli(capsys, "equiv", "b*b_x", "b*b_x + q_x*b + q*b_x")
    assert (code, out) == (0, "equivalent\n")
    code, out, _ = run_cli(capsys, "equiv", "b*b_x", "b*b_x + 1/2*q")
    assert (code, out) == (1, "not equivalent\n")


def test_jacobi_command(capsys):
    code, out, _ = run_cli(capsys, "jacobi", "b*b_x", "b*b_x", "b*b_x")
    assert (code, out) == (0, "zero class\n")


def test_poisson_check_command(capsys):
    code, out, _ = run_cli(capsys, "poisson-check", "b*b_xxx + q*b*b_x")
    assert (code, out) == (0, "PASS\n")
    code, out, _ = run_cli(capsys, "poisson-check", "q_x*b*b_x")
    assert (code, out) == (1, "FAIL\n4*q_x*b*b_x*b_xx\n")


def test_qfield_command(capsys):
    code, out, _ = run_cli(capsys, "qfield", "b*b_x + q*b*b_x")
    assert code == 0
    assert out == "parity 1\nq: q_x*b + 2*b_x + 2*q*b_x\nb: b*b_x\n"


def test_selftest_command(capsys):
    code, out, err = run_cli(capsys, "selftest", "--seed", "5", "--cases", "2")
    assert code == 0
    assert out == (
        "definitions-agree 2 0 5\n"
        "jacobi 2 0 5\n"
        "commutator 2 0 5\n"
        "remarks 2 0 5\n"
        "golden-examples 9 0 5\n"
    )
    assert err == ""


def test_parse_error_exit_code(capsys):
    code, _, err = run_cli(capsys, "bracket", "b*b_xz", "b")
    assert code == 2
    assert err == "parse error: line 1, col 3: bad derivative suffix 'xz'; expected 'x' letters\n"


def test_domain_error_exit_code(capsys):
    code, _, err = run_cli(capsys, "eval", "b*b_x", "1", "1")
    assert code == 3
    assert err == "error: covector slots must be distinct\n"
    code, _, err = run_cli(capsys, "eval", "b*b_x", "1", "nope")
    assert code == 3
    assert "neither a number nor a declared alias" in err


def test_geometry_flag(capsys):
    code, out, _ = run_cli(capsys, "degree", "--geometry", "2,2,3", "b1*b2_x1")
    assert (code, out) == (0, "degree 2\nclass nonzero\n")
    code, _, err = run_cli(capsys, "degree", "--geometry", "2,2", "q1")
    assert code == 3
    assert "takes n,m,s" in err


def test_session_file_flag(tmp_path, capsys):
    session = tmp_path / "worked.session"
    session.write_text(
        "geometry 1 1 4\n"
        "let xi = b*b_x\n"
        "let eta = b*x^3*q_xx\n"
        "slot first = 1\n"
    )
    code, out, _ = run_cli(capsys, "bracket", "--file", str(session), "xi", "eta")
    assert (code, out) == (0, "degree 2\n12*x*b_x*b + 6*x^2*b_xx*b + 2*x^3*b_xxx*b\n")
    code, out, _ = run_cli(capsys, "insert", "--file", str(session), "xi", "first")
    assert (code, out) == (0, "1/2*p1_x*b - 1/2*p1*b_x\n")
    code, _, err = run_cli(capsys, "bracket", "--file", str(session), "--geometry", "2,2,3", "xi", "eta")
    assert code == 3
    assert err == "error: --geometry disagrees with the session file\n"
    code, _, err = run_cli(capsys, "bracket", "--file", str(tmp_path / "missing"), "xi", "eta")
    assert code == 3


def test_session_file_parse_error_is_exit_two(tmp_path, capsys):
    bad = tmp_path / "bad.session"
    bad.write_text("geometry 1 1 4\nlet xi = q*\n")
    code, _, err = run_cli(capsys, "degree", "--file", str(bad), "q*b")
    assert code == 2
    assert err == "parse error: line 2, col 12: unexpected end of input\n"
