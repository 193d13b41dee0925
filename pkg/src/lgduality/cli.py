"""Command-line front end.

    lgduality residue --vars 2 --section "[3*z1^2,3*z2^2]" --g "z1*z2"

Output is JSON by default; ``--output pretty`` prints an aligned table.
Exit status is 0 on success, 1 on a domain error and 2 on a parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, TextIO

from .grammar import ArityError, ParseError, parse_polynomial, parse_section
from .koszul import (
    NonIsolatedZero,
    NotQuasiHomogeneous,
    Section,
    euler_characteristic,
    koszul_homology_graded,
    milnor_algebra,
)
from .polyring import MonomialOrder, NotInIdeal, Polynomial, Ring
from .polyring.gaussian import format_gaussian

COMMANDS = (
    "milnor",
    "homology",
    "residue",
    "pairing-matrix",
    "duality-check",
    "pairing-psi",
    "hessian",
    "eta",
    "vres",
    "check-laws",
)

# which inputs each command needs: "section" or "f" (gradient), plus polynomials
_NEEDS = {
    "milnor": ("section",),
    "homology": ("section",),
    "residue": ("section", "g"),
    "pairing-matrix": ("section",),
    "duality-check": ("section",),
    "pairing-psi": ("section", "g", "h"),
    "hessian": ("f",),
    "eta": ("section", "g", "h"),
    "vres": ("section", "g", "h"),
    "check-laws": (),
}

_CONFIG_KEYS = {"vars", "order", "weights", "radius", "resolution", "tol", "output", "section", "f"}


class RequestError(ValueError):
    """Missing or inconsistent command arguments."""


@dataclass
class Request:
    command: str
    nvars: int
    section: Optional[str] = None
    f: Optional[str] = None
    g: Optional[str] = None
    h: Optional[str] = None
    order: str = "grevlex"
    weights: Optional[str] = None
    radius: float = 1.0
    resolution: Optional[int] = None
    tol: Optional[float] = None
    output: str = "json"

    def to_argv(self) -> List[str]:
        argv = [self.command, "--vars", str(self.nvars)]
        for name in ("section", "f", "g", "h", "weights"):
            v = getattr(self, name)
            if v is not None:
                argv += [f"--{name}", v]
        argv += ["--order", self.order, "--radius", repr(self.radius), "--output", self.output]
        if self.resolution is not None:
            argv += ["--resolution", str(self.resolution)]
        if self.tol is not None:
            argv += ["--tol", repr(self.tol)]
        return argv

    # parsed views ------------------------------------------------------

    def monomial_order(self) -> MonomialOrder:
        return MonomialOrder.parse(self.order)

    def ring(self) -> Ring:
        return Ring.standard(self.nvars)

    def poly(self, name: str) -> Polynomial:
        text = getattr(self, name)
        if text is None:
            return self.ring().one()
        return parse_polynomial(text, self.nvars, self.ring())

    def parsed_section(self) -> Section:
        w = None
        if self.weights is not None:
            w = tuple(int(x) for x in self.weights.split(","))
        if self.section is None and self.f is not None:
            return Section.gradient(self.poly("f"), w)
        return Section(tuple(parse_section(self.section, self.nvars)), w)


@dataclass
class Response:
    status: str
    payload: dict = field(default_factory=dict)
    diagnostics: List[str] = field(default_factory=list)
    exit_code: int = 0

    def to_json(self) -> dict:
        return {"status": self.status, "payload": self.payload, "diagnostics": self.diagnostics}


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lgduality", description="Residues, Milnor algebras and local duality.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--vars", type=int, dest="nvars")
    p.add_argument("--section")
    p.add_argument("--f", help="polynomial whose gradient is used as the section")
    p.add_argument("--g")
    p.add_argument("--h")
    p.add_argument("--order")
    p.add_argument("--weights")
    p.add_argument("--radius", type=float)
    p.add_argument("--resolution", type=int)
    p.add_argument("--tol", type=float)
    p.add_argument("--output", choices=("json", "pretty"))
    p.add_argument("--config", help="key=value file with defaults; flags override it")
    return p


def read_config(text: str) -> Dict[str, str]:
    out = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise RequestError(f"config line {lineno}: expected key=value")
        k, v = (x.strip() for x in line.split("=", 1))
        if k not in _CONFIG_KEYS:
            raise RequestError(f"config line {lineno}: unknown key {k!r}")
        out[k] = v
    return out


def parse_request(argv: Sequence[str], stdin: Optional[TextIO] = None) -> Request:
    """Build and validate a Request.  ``--section -`` reads the section from stdin."""
    ns = _build_parser().parse_args(list(argv))
    cfg: Dict[str, str] = {}
    if ns.config:
        with open(ns.config) as fh:
            cfg = read_config(fh.read())
    conv = {"vars": int, "radius": float, "resolution": int, "tol": float}
    merged = {}
    for key, attr in [("vars", "nvars"), ("section", "section"), ("f", "f"), ("order", "order"),
                      ("weights", "weights"), ("radius", "radius"), ("resolution", "resolution"),
                      ("tol", "tol"), ("output", "output")]:
        v = getattr(ns, attr)
        if v is None and key in cfg:
            v = conv.get(key, str)(cfg[key])
        if v is not None:
            merged[attr] = v
    if merged.get("section") == "-":
        merged["section"] = (stdin or sys.stdin).read().strip()
    for name in ("g", "h"):
        if getattr(ns, name) is not None:
            merged[name] = getattr(ns, name)
    if "nvars" not in merged:
        if ns.command == "check-laws":
            merged["nvars"] = 2
        else:
            raise RequestError("--vars is required")
    req = Request(command=ns.command, **merged)
    if req.nvars < 1:
        raise RequestError("--vars must be positive")
    # parse everything now so that syntax errors surface here
    req.monomial_order()
    for name in ("g", "h", "f"):
        if getattr(req, name) is not None:
            req.poly(name)
    if req.section is not None or req.f is not None:
        req.parsed_section()
    needs = _NEEDS[req.command]
    if "section" in needs and req.section is None and req.f is None:
        raise RequestError(f"{req.command} needs --section (or --f)")
    if "f" in needs and req.f is None:
        raise RequestError(f"{req.command} needs --f")
    if req.command == "residue" and req.g is None:
        raise RequestError("residue needs --g")
    return req


# command handlers ----------------------------------------------------------


def _milnor(req: Request) -> dict:
    A = milnor_algebra(req.parsed_section(), req.monomial_order())
    return {"mu": A.mu, "basis": A.basis_labels()}


def _homology(req: Request) -> dict:
    s = req.parsed_section()
    table = koszul_homology_graded(s)
    return {
        "weights": list(table.weights),
        "section_degrees": list(table.section_degrees),
        "degree_range": list(table.degree_range),
        "homology": table.to_records(),
        "vanishes_off_zero": table.vanishes_off_zero(),
        "euler_characteristic": euler_characteristic(table),
    }


def _residue(req: Request) -> dict:
    from .residue import residue_pair

    r = residue_pair(req.poly("g"), req.poly("h"), req.parsed_section(), order=req.monomial_order())
    return {"residue": format_gaussian(r.value)}


def _pairing_matrix(req: Request) -> dict:
    from .residue import residue_pairing_matrix

    P = residue_pairing_matrix(req.parsed_section(), req.monomial_order())
    d = P.to_json()
    d["symmetric"] = P.is_symmetric()
    return d


def _duality(req: Request) -> dict:
    from .residue import duality_check

    r = duality_check(req.parsed_section(), req.monomial_order())
    return {"nondegenerate": r["nondegenerate"], "mu": r["mu"], "determinant": format_gaussian(r["determinant"])}


def _pairing_psi(req: Request) -> dict:
    from .residue import pairing_psi

    r = pairing_psi(req.poly("g"), req.poly("h"), req.parsed_section(), order=req.monomial_order())
    return {"pairing": r.to_json(), "meaning": "value * (2*pi*i)^unit_power"}


def _hessian(req: Request) -> dict:
    from .residue import hessian, hessian_residue

    f = req.poly("f")
    A = milnor_algebra(Section.gradient(f), req.monomial_order())
    r = hessian_residue(f, order=req.monomial_order())
    return {"hessian": hessian(f).to_str(), "residue": format_gaussian(r.value), "mu": A.mu}


def _eta(req: Request) -> dict:
    from .dolbeault import eta_psi, export_eta

    s = req.parsed_section()
    g, h = req.poly("g"), req.poly("h")
    res = eta_psi(g, h, s)
    return {
        "eta": res.form.to_str(),
        "convention": res.convention,
        "pipeline_matches": res.matches,
        "dbar_closed": res.dbar_closed,
        "tree": export_eta(g, h, s),
    }


def _vres(req: Request) -> dict:
    from .vres import QuadratureSpec, compare_exact_residue

    s = req.parsed_section()
    n = s.n
    spec = QuadratureSpec(
        radius=req.radius,
        resolution=req.resolution or (256 if n == 1 else 64),
        target_tol=req.tol if req.tol is not None else (1e-8 if n == 1 else 1e-3),
    )
    c = compare_exact_residue(req.poly("g"), req.poly("h"), s, spec)
    num = c["numeric"]
    return {
        "value_re": num.value.real,
        "value_im": num.value.imag,
        "error_estimate": num.error_estimate,
        "radius": spec.radius,
        "resolution": spec.resolution,
        "expected": format_gaussian(c["exact"]),
        "difference": c["difference"],
        "match": c["pass"],
    }


def _check_laws(req: Request) -> dict:
    from .dolbeault import basis_samples, check_commutators, check_homotopy_lemma, eta_psi, smooth_frame
    from .laws import check_exterior_exhaustive, check_exterior_random
    from .report import Report

    n = req.nvars
    rep = Report()
    if n <= 2:
        rep.extend(check_exterior_exhaustive(n))
    else:
        rep.extend(check_exterior_random(n, samples=100))
    s = req.parsed_section() if req.section or req.f else Section(tuple(req.ring().gens()))
    frame = smooth_frame(s, f_rank=1)
    samples = basis_samples(frame)
    rep.extend(check_commutators(frame, samples))
    rep.extend(check_homotopy_lemma(frame, samples))
    if n <= 2:
        ring = s.ring
        eta = eta_psi(ring.one(), ring.one(), s)
        rep.notes["eta_convention"] = eta.convention
    out = rep.to_json()
    out["failures"] = out["failures"][:20]
    return out


_HANDLERS = {
    "milnor": _milnor,
    "homology": _homology,
    "residue": _residue,
    "pairing-matrix": _pairing_matrix,
    "duality-check": _duality,
    "pairing-psi": _pairing_psi,
    "hessian": _hessian,
    "eta": _eta,
    "vres": _vres,
    "check-laws": _check_laws,
}


def _error(code: str, message: str, exit_code: int, **extra) -> Response:
    payload = {"code": code, "message": message}
    payload.update(extra)
    return Response("error", payload, [message], exit_code)


def run(req: Request) -> Response:
    from .vres import ResolutionTooCoarse, SingularOnSphere

    try:
        payload = _HANDLERS[req.command](req)
    except NonIsolatedZero as e:
        return _error("NON_ISOLATED_ZERO", str(e), 1)
    except NotQuasiHomogeneous as e:
        return _error("NOT_QUASI_HOMOGENEOUS", str(e), 1)
    except SingularOnSphere as e:
        return _error("SINGULAR_ON_SPHERE", str(e), 1)
    except ResolutionTooCoarse as e:
        return _error("RESOLUTION_TOO_COARSE", str(e), 1, error_estimate=e.error_estimate)
    except NotInIdeal as e:
        return _error("NOT_IN_IDEAL", str(e), 1)
    return Response("ok", payload)


def _pretty(value, indent: int = 0) -> List[str]:
    pad = " " * indent
    if isinstance(value, dict):
        width = max((len(str(k)) for k in value), default=0)
        lines = []
        for k, v in value.items():
            if isinstance(v, (dict, list)) and v and not _flat_list(v):
                lines.append(f"{pad}{str(k):<{width}} :")
                lines += _pretty(v, indent + 2)
            else:
                lines.append(f"{pad}{str(k):<{width}} : {_scalar(v)}")
        return lines
    if isinstance(value, list):
        if value and all(isinstance(r, list) for r in value):
            cells = [[_scalar(x) for x in r] for r in value]
            w = max(len(c) for r in cells for c in r)
            return [pad + "  ".join(c.rjust(w) for c in r) for r in cells]
        if value and all(isinstance(r, dict) for r in value) and len({tuple(r) for r in value}) == 1:
            keys = list(value[0])
            cells = [keys] + [[_scalar(r[k]) for k in keys] for r in value]
            widths = [max(len(row[j]) for row in cells) for j in range(len(keys))]
            return [pad + "  ".join(c.rjust(w) for c, w in zip(row, widths)) for row in cells]
        lines = []
        for item in value:
            sub = _pretty(item, indent + 2)
            if sub:
                sub[0] = pad + "- " + sub[0].lstrip()
            lines += sub
        return lines
    return [pad + _scalar(value)]


def _flat_list(v) -> bool:
    return isinstance(v, list) and all(not isinstance(x, (dict, list)) for x in v)


def _scalar(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, list):
        return ", ".join(_scalar(x) for x in v)
    return str(v)


def render(resp: Response, output: str = "json") -> str:
    if output == "pretty":
        head = [f"status : {resp.status}"]
        return "\n".join(head + _pretty(resp.payload))
    return json.dumps(resp.to_json(), indent=2, sort_keys=False)


def main(argv: Optional[Sequence[str]] = None, stdin: Optional[TextIO] = None, stdout: Optional[TextIO] = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    stdout = stdout or sys.stdout
    output = "pretty" if "--output" in argv and "pretty" in argv else "json"
    try:
        req = parse_request(argv, stdin)
    except ParseError as e:
        resp = _error("PARSE_ERROR", str(e), 2, line=e.line, column=e.column, span=list(e.span), text=e.text)
    except ArityError as e:
        resp = _error("ARITY_ERROR", str(e), 2)
    except (RequestError, ValueError) as e:
        resp = _error("BAD_REQUEST", str(e), 2)
    else:
        output = req.output
        resp = run(req)
    print(render(resp, output), file=stdout)
    return resp.exit_code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
