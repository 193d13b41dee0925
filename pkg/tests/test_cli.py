import io
import json
import subprocess
import sys

import pytest
from hypothesis import given, settings, strategies as st

from lgduality.cli import RequestError, main, parse_request, read_config, run
from lgduality.grammar import ArityError, ParseError


def call(*argv, stdin=None):
    out = io.StringIO()
    code = main(list(argv), stdin=stdin, stdout=out)
    text = out.getvalue()
    return code, (json.loads(text) if text.lstrip().startswith("{") else text)


def test_parse_request_examples():
    req = parse_request(["residue", "--vars", "2", "--section", "[3*z1^2,3*z2^2]", "--g", "z1*z2"])
    assert req.command == "residue" and req.nvars == 2
    with pytest.raises(ArityError):
        parse_request(["milnor", "--section", "[z1]", "--vars", "2"])
    with pytest.raises(ParseError) as err:
        parse_request(["residue", "--vars", "2", "--section", "[z1,z2]", "--g", "z1 + + z2"])
    assert err.value.column == 6


def test_missing_argument():
    with pytest.raises(RequestError):
        parse_request(["residue", "--vars", "2", "--section", "[z1,z2]"])


def test_duality_check():
    code, out = call("duality-check", "--vars", "2", "--section", "[3*z1^2,3*z2^2]")
    assert code == 0
    assert out["payload"] == {"nondegenerate": True, "mu": 4, "determinant": "1/6561"}


def test_milnor():
    code, out = call("milnor", "--vars", "2", "--section", "[z1,z2]")
    assert out["payload"] == {"mu": 1, "basis": ["1"]}


def test_vres_unit():
    code, out = call("vres", "--vars", "1", "--section", "[z1]")
    assert code == 0
    assert abs(out["payload"]["value_re"] + 1) < 1e-10
    assert out["payload"]["expected"] == "-1"


def test_exact_values_are_strings():
    code, out = call("residue", "--vars", "2", "--section", "[3*z1^2,3*z2^2]", "--g", "z1*z2")
    assert out["payload"]["residue"] == "1/9"
    code, out = call("pairing-psi", "--vars", "1", "--f", "(1/2)*z1^2")
    assert out["payload"]["pairing"] == {"value": "-1", "unit_power": 1}
    code, out = call("pairing-matrix", "--vars", "1", "--f", "z1^3")
    assert out["payload"]["matrix"] == [["0", "1/3"], ["1/3", "0"]]
    assert out["payload"]["determinant"] == "-1/9"


def test_hessian_and_homology():
    code, out = call("hessian", "--vars", "2", "--f", "z1^3 + z2^4")
    assert out["payload"]["residue"] == "6" and out["payload"]["mu"] == 6
    code, out = call("homology", "--vars", "2", "--section", "[3*z1^2,3*z2^2]")
    assert out["payload"]["euler_characteristic"] == 4
    assert out["payload"]["vanishes_off_zero"]


def test_eta_command():
    code, out = call("eta", "--vars", "2", "--section", "[z1,z2]")
    assert code == 0
    assert out["payload"]["convention"] == "graded"
    assert out["payload"]["dbar_closed"]
    assert out["payload"]["tree"]["n"] == 2


@pytest.mark.parametrize("argv,code,err", [
    (["milnor", "--vars", "2", "--section", "[z1, z1*z2]"], 1, "NON_ISOLATED_ZERO"),
    (["homology", "--vars", "2", "--section", "[z1 + z1^2, z2]"], 1, "NOT_QUASI_HOMOGENEOUS"),
    (["vres", "--vars", "1", "--section", "[z1 - 1]"], 1, "SINGULAR_ON_SPHERE"),
    (["vres", "--vars", "1", "--section", "[z1]", "--g", "z1^12", "--resolution", "8", "--tol", "1e-12"],
     1, "RESOLUTION_TOO_COARSE"),
    (["milnor", "--vars", "2", "--section", "[z1]"], 2, "ARITY_ERROR"),
    (["residue", "--vars", "2", "--section", "[z1, z2]", "--g", "z1 + + z2"], 2, "PARSE_ERROR"),
])
def test_error_codes(argv, code, err):
    c, out = call(*argv)
    assert c == code
    assert out["status"] == "error" and out["payload"]["code"] == err


def test_parse_error_span():
    c, out = call("residue", "--vars", "2", "--section", "[z1, z2]", "--g", "z1 + + z2")
    assert out["payload"]["line"] == 1 and out["payload"]["column"] == 6
    assert out["payload"]["span"] == [5, 6]


def test_not_in_ideal_code(monkeypatch):
    import lgduality.cli as cli
    from lgduality.polyring import NotInIdeal

    def boom(req):
        raise NotInIdeal("1 is not in the ideal")

    monkeypatch.setitem(cli._HANDLERS, "milnor", boom)
    resp = run(parse_request(["milnor", "--vars", "1", "--section", "[z1]"]))
    assert resp.exit_code == 1 and resp.payload["code"] == "NOT_IN_IDEAL"


def test_config_and_override(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# defaults\nvars = 2\norder = lex\nsection = [z1, z2]\n")
    req = parse_request(["milnor", "--config", str(cfg)])
    assert req.nvars == 2 and req.order == "lex"
    req = parse_request(["milnor", "--config", str(cfg), "--order", "grlex"])
    assert req.order == "grlex"
    with pytest.raises(RequestError):
        read_config("bogus = 1")


def test_section_from_stdin():
    req = parse_request(["milnor", "--vars", "2", "--section", "-"], stdin=io.StringIO("[z1, z2^2]\n"))
    assert req.section == "[z1, z2^2]"


def test_pretty_output():
    code, text = call("pairing-matrix", "--vars", "2", "--section", "[3*z1^2,3*z2^2]", "--output", "pretty")
    assert code == 0 and "status : ok" in text and "1/9" in text


def test_check_laws_small():
    code, out = call("check-laws", "--vars", "1")
    assert code == 0 and out["payload"]["failed"] == 0 and out["payload"]["passed"] > 0


sections = st.sampled_from(["[z1, z2]", "[3*z1^2, 3*z2^2]", "[z1^2 - z2, z2^2]"])
polys = st.sampled_from(["z1", "z1*z2 + 1/2", "i*z2^2 - z1"])


@given(sections, polys, st.one_of(st.none(), polys), st.sampled_from(["grevlex", "lex", "weighted:2,3"]),
       st.floats(0.25, 4), st.one_of(st.none(), st.integers(8, 128)), st.sampled_from(["json", "pretty"]))
@settings(max_examples=40, deadline=None)
def test_request_round_trip(section, g, h, order, radius, resolution, output):
    argv = ["residue", "--vars", "2", "--section", section, "--g", g, "--order", order,
            "--radius", repr(radius), "--output", output]
    if h is not None:
        argv += ["--h", h]
    if resolution is not None:
        argv += ["--resolution", str(resolution)]
    req = parse_request(argv)
    assert parse_request(req.to_argv()) == req


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "lgduality", "milnor", "--vars", "1", "--section", "[z1^3]"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["payload"]["mu"] == 3
