"""Command-line frontend.

    orbimilnor analyze    [FILE] [-W POLY] [-V POLY ...] [--vars x,y]
    orbimilnor milnor     ...
    orbimilnor symmetry   ... [--group GENS]
    orbimilnor bmodel     ... [--group GENS]
    orbimilnor equiv      ...
    orbimilnor extend-iso ... [--group GENS] (--map FILE | --solve)
    orbimilnor selftest

Exit codes: 0 success, 1 a verification finding, 2 input error, 3 internal error.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
import traceback

from . import report as rp
from .errors import (
    BasisMismatchError,
    DegenerateSectorError,
    GroupError,
    HessianError,
    InfiniteDimensionalError,
    InputError,
    OrbimilnorError,
    ParseError,
    WeightError,
)
from .isomorphism import (
    FrobeniusMap,
    combine_isomorphisms,
    extend_isomorphism,
    identity_map,
    solve_scaling_iso,
    verify_frobenius_iso,
)
from .milnor import MilnorRing, verify_frobenius
from .orbifold import BModel, verify_bmodel_axioms
from .polynomial import Polynomial, mono_str, parse_polynomial
from .scalars import Field
from .structure import (
    classify,
    compute_weights,
    exponent_matrix,
    is_admissible,
    search_linear_equivalence,
    variable_components,
    webb_applicable,
)
from .symmetry import (
    is_well_behaved,
    max_symmetry_group,
    parse_group_elements,
    sl_subgroup,
    subgroup_generated,
)

INPUT_ERRORS = (InputError, WeightError, InfiniteDimensionalError, HessianError, GroupError,
                DegenerateSectorError, BasisMismatchError)


class _ArgParser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(f"usage: {message}")


# ---------------------------------------------------------------------------
# problem input
# ---------------------------------------------------------------------------


class Problem:
    def __init__(self):
        self.W = None
        self.V = []
        self.vars = None
        self.group = None
        self.map = None
        self.solve = False

    @property
    def texts(self):
        return ([self.W] if self.W is not None else []) + list(self.V)

    def polynomials(self):
        texts = self.texts
        if self.W is None:
            raise InputError("no polynomial W given (use a problem file or -W)")
        if self.vars is not None:
            return [parse_polynomial(t, self.vars) for t in texts]
        order = []
        for t in texts:
            for v in parse_polynomial(t).variables:
                if v not in order:
                    order.append(v)
        return [parse_polynomial(t, tuple(order)) for t in texts]

    def group_elements(self, n):
        return parse_group_elements(self.group or "", n)


def read_problem_file(path) -> Problem:
    prob = Problem()
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise InputError(f"cannot read problem file {path}: {exc.strerror}") from None
    base = os.path.dirname(path)
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition(":")
        if not sep:
            raise ParseError(f"{path}:{lineno}: expected 'key: value'")
        key, value = key.strip().lower(), value.strip()
        if key == "w":
            if prob.W is not None:
                raise ParseError(f"{path}:{lineno}: W given twice")
            prob.W = value
        elif key == "v":
            prob.V.append(value)
        elif key == "vars":
            prob.vars = _split_vars(value)
        elif key == "group":
            prob.group = value
        elif key == "map":
            prob.map = value if os.path.isabs(value) else os.path.join(base, value)
        elif key == "solve":
            prob.solve = value.lower() in ("1", "yes", "true", "on")
        else:
            raise ParseError(f"{path}:{lineno}: unknown key {key!r}")
    return prob


def _split_vars(text):
    names = tuple(v.strip() for v in text.split(",") if v.strip())
    if len(set(names)) != len(names):
        raise InputError(f"repeated variable in {text!r}")
    return names


def build_problem(args) -> Problem:
    prob = read_problem_file(args.file) if args.file else Problem()
    if args.W is not None:
        prob.W = args.W
    if args.V:
        prob.V = list(args.V)
    if args.vars is not None:
        prob.vars = _split_vars(args.vars)
    if args.group is not None:
        prob.group = args.group
    if args.map is not None:
        prob.map = args.map
    if args.solve:
        prob.solve = True
    return prob


def read_map_file(path, source: MilnorRing, target: MilnorRing) -> FrobeniusMap:
    """Lines ``monomial -> expression``; an optional ``field c: <modulus>`` line comes first."""
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise InputError(f"cannot read map file {path}: {exc.strerror}") from None
    field = None
    exts = None
    images = {}
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        where = f"{path}:{lineno}"
        if line.startswith("field"):
            head, sep, modulus = line[len("field"):].partition(":")
            symbol = head.strip()
            if not sep or not symbol.isidentifier():
                raise ParseError(f"{where}: expected 'field <symbol>: <modulus>'")
            if symbol in source.variables or symbol in target.variables:
                raise InputError(f"{where}: field symbol {symbol!r} clashes with a variable")
            m = parse_polynomial(modulus, (symbol,))
            coeffs = [m.coefficient((k,)) for k in range(m.total_degree() + 1)]
            field = Field(coeffs, symbol, strict=True)
            exts = {symbol: field}
            continue
        lhs, sep, rhs = line.partition("->")
        if not sep:
            raise ParseError(f"{where}: expected 'monomial -> expression'")
        try:
            mono = parse_polynomial(lhs, source.variables)
            img = parse_polynomial(rhs, target.variables, exts)
        except ParseError as exc:
            raise ParseError(f"{where}: {exc}") from None
        if len(mono.terms) != 1 or list(mono.terms.values())[0] != 1:
            raise InputError(f"{where}: left side must be a single monic monomial")
        (exp,) = mono.terms
        if exp not in source.index:
            raise InputError(f"{where}: {mono} is not a basis monomial of the source ring")
        if exp in images:
            raise InputError(f"{where}: {mono} mapped twice")
        images[exp] = target.coords_of(img)
    missing = [mono_str(e, source.variables) for e in source.basis if e not in images]
    if missing:
        raise InputError(f"map file {path} gives no image for {', '.join(missing)}")
    return FrobeniusMap(source, target, [images[e] for e in source.basis], "phi")


# ---------------------------------------------------------------------------
# report fragments
# ---------------------------------------------------------------------------


def group_json(G, elements=True):
    out = {"order": G.order, "generators": [g.to_str() for g in G.generators]}
    if elements:
        out["elements"] = [g.to_str() for g in G.elements]
    return out


def checks_json(rep):
    out = {"passed": rep.ok, "checks": {k: v for k, v in rep.checks.items()}}
    if rep.witnesses:
        out["witnesses"] = {k: _plain(v) for k, v in rep.witnesses.items()}
    return out


def _plain(v):
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if v is None or isinstance(v, (bool, int, str)):
        return v
    return str(v)


def analyze_one(W):
    out = {"polynomial": str(W), "variables": list(W.variables)}
    try:
        q = compute_weights(W, require_unique=False)
        out["weights"] = [rp.exact(x) for x in q.q]
        out["weights_unique"] = q.unique
    except WeightError as exc:
        out["weights"] = None
        out["weights_error"] = str(exc)
    adm = is_admissible(W)
    out["admissible"] = adm.ok
    if not adm.ok:
        out["reason"] = adm.reason
        return out
    out["exponent_matrix"] = exponent_matrix(W).tolist()
    q = compute_weights(W)
    out["c_hat"] = rp.exact(sum((1 - 2 * x for x in q.q), 0))
    dec = classify(W)
    out["invertible"] = dec.invertible
    out["blocks"] = [{"kind": b.kind, "variables": [W.variables[i] for i in b.variables],
                      "summand": str(b.summand)} for b in dec.blocks]
    G = max_symmetry_group(W)
    out["G_max"] = group_json(G, elements=False)
    out["SL"] = group_json(sl_subgroup(G), elements=False)
    web = webb_applicable(W)
    out["webb_applicable"] = web.applicable
    if web.witness is not None:
        out["webb_witness"] = mono_str(web.witness, W.variables)
    return out


def milnor_json(R: MilnorRing, with_table=True):
    out = {
        "polynomial": str(R.W),
        "weights": [rp.exact(x) for x in R.weights.q],
        "mu": R.mu,
        "c_hat": rp.exact(R.c_hat),
        "basis": [R.monomial_str(i) for i in range(R.mu)],
        "degrees": [rp.exact(d) for d in R.degrees],
        "hessian": str(R.hessian),
        "hessian_normal_form": {"coefficient": rp.exact(R.hessian_coefficient),
                                "monomial": mono_str(R.hessian_monomial, R.variables)},
        "pairing_matrix": rp.matrix(R.pairing_matrix),
    }
    if with_table:
        out["products"] = [[str(R.to_polynomial(R.basis_product(i, j))) for j in range(R.mu)]
                           for i in range(R.mu)]
    return out


def bmodel_json(B: BModel):
    sectors = []
    for g, sec in B.sectors.items():
        sectors.append({
            "element": g.to_str(),
            "fixed": [B.variables[i] for i in sec.locus],
            "restricted": str(sec.W) if sec.locus else "0",
            "invariants": [mono_str(B._embed(sec.ring.basis[i], sec.locus), B.variables)
                           for i in sec.invariant],
        })
    return {
        "polynomial": str(B.W),
        "group": group_json(B.G),
        "conventions": {"action": B.conventions.action, "restriction": B.conventions.restriction,
                        "mu_ratio": B.conventions.mu_ratio},
        "dim": B.dim,
        "sectors": sectors,
        "basis": [B.label(k) for k in range(B.dim)],
        "degrees": [rp.exact(d) for d in B.degrees],
        "pairing_matrix": rp.matrix(B.pairing_matrix),
        "products": [[B.describe_vector(B.star_basis(i, j)) for j in range(B.dim)] for i in range(B.dim)],
    }


def map_json(f: FrobeniusMap):
    out = {"source": str(f.source.W), "target": str(f.target.W), "images": f.to_lines()}
    if f.field is not None:
        out["field"] = {"symbol": f.field.symbol, "modulus": f.field.modulus_str()}
    return out


def certificate_json(cert):
    out = {"passed": cert.ok, "checks": dict(cert.checks)}
    if cert.witnesses:
        out["witnesses"] = {k: _plain(v) for k, v in cert.witnesses.items()}
    return out


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_analyze(prob):
    return {"polynomials": [analyze_one(W) for W in prob.polynomials()]}


def cmd_milnor(prob):
    out = []
    bad = False
    for W in prob.polynomials():
        R = MilnorRing(W)
        entry = milnor_json(R)
        rep = verify_frobenius(R)
        entry["axioms"] = checks_json(rep)
        bad |= not rep.ok
        out.append(entry)
    return {"polynomials": out}, bad


def cmd_symmetry(prob):
    out = []
    bad = False
    for W in prob.polynomials():
        G = max_symmetry_group(W)
        entry = {"polynomial": str(W), "G_max": group_json(G), "SL": group_json(sl_subgroup(G))}
        if prob.group is not None:
            H = subgroup_generated(W, prob.group_elements(W.nvars))
            sub = group_json(H)
            sub["in_SL"] = all(g.in_sl() for g in H.generators)
            wb = is_well_behaved(W, H)
            sub["well_behaved"] = {"verdict": wb.verdict,
                                   "blocks": [[W.variables[i] for i in b] for b in wb.blocks]}
            if not wb.verdict:
                g, block = wb.witness
                sub["well_behaved"]["reason"] = wb.reason
                sub["well_behaved"]["witness"] = {
                    "element": g.to_str() if g is not None else None,
                    "block": [W.variables[i] for i in block] if block else None}
            entry["group"] = sub
        out.append(entry)
    return {"polynomials": out}, bad


def cmd_bmodel(prob):
    out = []
    bad = False
    for W in prob.polynomials():
        G = subgroup_generated(W, prob.group_elements(W.nvars))
        B = BModel(W, G)
        entry = bmodel_json(B)
        rep = verify_bmodel_axioms(B)
        entry["axioms"] = checks_json(rep)
        entry["axioms"]["severity"] = rep.severity
        bad |= not rep.ok
        if G.order == 1:
            entry["milnor_ring"] = milnor_json(MilnorRing(W), with_table=False)
        out.append(entry)
    return {"polynomials": out}, bad


def _pair(prob):
    polys = prob.polynomials()
    if len(polys) < 2:
        raise InputError("this command needs W and at least one V")
    return polys


def cmd_equiv(prob):
    polys = _pair(prob)
    W = polys[0]
    results = []
    bad = False
    for V in polys[1:]:
        res = search_linear_equivalence(W, V)
        entry = {"source": str(W), "target": str(V), "found": res.found,
                 "unknowns": len(res.unknowns), "equations": len(res.equations), "note": res.note}
        if res.found:
            entry["substitution"] = res.witness.to_strs()
            fld = None
            for img in res.witness.images:
                for c in img.terms.values():
                    fld = getattr(c, "field", None) or fld
            if fld is not None:
                entry["field"] = {"symbol": fld.symbol, "modulus": fld.modulus_str()}
        else:
            entry["unit_ideal_certificate"] = res.unit_certificate
            bad = True
        results.append(entry)
    return {"comparisons": results}, bad


def _contiguous_blocks(W, V):
    # coarsest common splitting: components of the union of both supports
    union = Polynomial(W.variables, {e: 1 for e in list(W.terms) + list(V.terms)})
    comps = variable_components(union)
    if len(comps) < 2:
        return None
    flat = [i for c in comps for i in c]
    if flat != list(range(W.nvars)) or any(list(c) != list(range(c[0], c[-1] + 1)) for c in comps):
        return None
    return comps


def solve_pair(W, V):
    """A scaling isomorphism Q_W -> Q_V, block by block when both split the same way."""
    blocks = _contiguous_blocks(W, V)
    parts = []
    if blocks is None:
        sol = solve_scaling_iso(MilnorRing(W), MilnorRing(V))
        parts.append((list(W.variables), sol, sol.map))
        return parts, sol.map
    maps = []
    for b in blocks:
        Wb, Vb = W.restrict(b), V.restrict(b)
        if Wb == Vb:
            f = identity_map(MilnorRing(Wb))
            parts.append(([W.variables[i] for i in b], None, f))
        else:
            sol = solve_scaling_iso(MilnorRing(Wb), MilnorRing(Vb))
            f = sol.map
            parts.append(([W.variables[i] for i in b], sol, f))
        if f is None:
            return parts, None
        maps.append(f)
    f = maps[0]
    for g in maps[1:]:
        f = combine_isomorphisms(f, g)
    return parts, f


def _solution_json(variables, sol, f):
    out = {"variables": variables}
    if sol is None:
        out["method"] = "identity (equal summands)"
        return out
    out["method"] = "scaling"
    out["pairing_constraints"] = list(dict.fromkeys(c.describe(sol.source.variables)
                                                    for c in sol.pairing_constraints))
    out["oracles_agree"] = sol.oracles_agree
    if sol.found:
        out["constants"] = {v: rp.exact(x) for v, x in zip(sol.source.variables, sol.values)}
        out["certificate"] = certificate_json(sol.certificate)
    else:
        out["infeasible"] = list(sol.infeasible)
    return out


def cmd_extend(prob):
    polys = _pair(prob)
    if bool(prob.map) == bool(prob.solve):
        raise InputError("extend-iso needs exactly one of --map FILE or --solve")
    n = polys[0].nvars
    gens = prob.group_elements(n)
    results = []
    bad = False
    if prob.map:
        pairs = [(0, 1)]
    else:
        pairs = [(i, j) for i in range(len(polys)) for j in range(i + 1, len(polys))]
    for i, j in pairs:
        W, V = polys[i], polys[j]
        entry = {"source": str(W), "target": str(V)}
        if prob.map:
            f = read_map_file(prob.map, MilnorRing(W), MilnorRing(V))
            entry["phi_source"] = "map file"
        else:
            parts, f = solve_pair(W, V)
            entry["phi_source"] = "solved" if len(parts) == 1 else "solved per block and combined"
            entry["blocks"] = [_solution_json(*p) for p in parts]
        if f is None:
            entry["phi"] = None
            bad = True
            results.append(entry)
            continue
        entry["phi"] = map_json(f)
        cert = verify_frobenius_iso(f)
        entry["phi_certificate"] = certificate_json(cert)
        G = subgroup_generated(f.source.W, gens)
        entry["group"] = group_json(G, elements=False)
        ext = extend_isomorphism(f, G)
        entry["psi"] = map_json(ext.psi)
        entry["psi"]["dim"] = ext.source_model.dim
        entry["psi_certificate"] = certificate_json(ext.certificate)
        bad |= not (cert.ok and ext.certificate.ok)
        results.append(entry)
    return {"pairs": results}, bad


def cmd_selftest(prob, timing=True):
    from .acceptance import run_all

    results = run_all()
    crit = []
    for r in results:
        c = {"number": r.number, "title": r.title, "passed": r.passed, "details": list(r.details)}
        if r.budget:
            c["budget_seconds"] = r.budget
        if timing:
            c["seconds"] = round(r.elapsed, 3)
        crit.append(c)
    return {"criteria": crit, "all_passed": all(r.passed for r in results)}, not all(r.passed for r in results)


HANDLERS = {
    "analyze": cmd_analyze,
    "milnor": cmd_milnor,
    "symmetry": cmd_symmetry,
    "bmodel": cmd_bmodel,
    "equiv": cmd_equiv,
    "extend-iso": cmd_extend,
}


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def build_parser():
    parser = _ArgParser(prog="orbimilnor", description="Milnor rings and orbifolded B-models, exactly.")
    parser.add_argument("--version", action="store_true", help="print the version and exit")
    sub = parser.add_subparsers(dest="command")
    for name in list(HANDLERS) + ["selftest"]:
        p = sub.add_parser(name)
        p.add_argument("--json", action="store_true", help="emit the JSON report")
        p.add_argument("--no-timing", action="store_true", help="omit timing for byte-stable reports")
        if name == "selftest":
            continue
        p.add_argument("file", nargs="?", help="problem file")
        p.add_argument("-W", help="polynomial W")
        p.add_argument("-V", action="append", help="polynomial V (repeatable)")
        p.add_argument("--vars", help="variable order, e.g. x,y,z")
        p.add_argument("--group", help='group generators, e.g. "1/2,1/2;0,1/3"')
        p.add_argument("--map", help="map file for extend-iso")
        p.add_argument("--solve", action="store_true", help="solve for a scaling map")
    return parser


def _echo(args):
    keys = ("file", "W", "V", "vars", "group", "map", "solve")
    return {k: getattr(args, k) for k in keys if getattr(args, k, None) not in (None, False, [])}


def _emit(report, as_json, stream):
    stream.write(rp.to_json(report) if as_json else rp.to_text(report))


def _selftest_text(result, timing):
    lines = []
    for c in result["criteria"]:
        status = "PASS" if c["passed"] else "FAIL"
        t = ""
        if timing:
            budget = f" (budget {c['budget_seconds']:g} s)" if "budget_seconds" in c else ""
            t = f" [{c['seconds']:.2f} s{budget}]"
        lines.append(f"[{status}] criterion {c['number']}: {c['title']}{t}")
        lines.extend(f"    {d}" for d in c["details"])
    return "\n".join(lines) + "\n"


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    as_json = "--json" in argv
    timing = "--no-timing" not in argv
    command = None
    echo = {}
    t0 = time.perf_counter()
    try:
        args = build_parser().parse_args(argv)
        if args.version:
            from . import __version__

            print(__version__)
            return 0
        if args.command is None:
            raise InputError(f"a subcommand is required: {', '.join(list(HANDLERS) + ['selftest'])}")
        command = args.command
        echo = _echo(args)
        if command == "selftest":
            result, bad = cmd_selftest(None, timing)
        else:
            out = HANDLERS[command](build_problem(args))
            result, bad = out if isinstance(out, tuple) else (out, False)
        code = 1 if bad else 0
        report = rp.make_report(command, echo, result, "finding" if bad else "ok", code,
                                time.perf_counter() - t0 if timing else None)
        if command == "selftest" and not as_json:
            sys.stdout.write(_selftest_text(result, timing))
        else:
            _emit(report, as_json, sys.stdout)
        return code
    except OrbimilnorError as exc:
        code = 2 if isinstance(exc, INPUT_ERRORS) else 1
        err = {"code": exc.code, "message": str(exc),
               "details": {k: _plain(v) for k, v in exc.details.items() if v is not None}}
        status = "input-error" if code == 2 else "finding"
    except Exception as exc:  # anything else is a bug
        code = 3
        err = {"code": "internal-error", "message": f"{type(exc).__name__}: {exc}",
               "details": {"traceback": traceback.format_exc().splitlines()[-3:]}}
        status = "internal-error"
    report = rp.make_report(command or "orbimilnor", echo, None, status, code,
                            time.perf_counter() - t0 if timing else None, err)
    _emit(report, as_json, sys.stdout if as_json else sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
