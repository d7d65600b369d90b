"""Report assembly: exact JSON serialization and a plain-text rendering."""

from __future__ import annotations

import json
from fractions import Fraction

from . import __version__
from .scalars import Scalar, scalar_json, scalar_str

SCHEMA = 1


def exact(x):
    """JSON-safe exact form of a scalar (str for rationals, dict for extension elements)."""
    if isinstance(x, Scalar):
        return scalar_json(x)
    if isinstance(x, (Fraction, int)) and not isinstance(x, bool):
        return str(Fraction(x))
    return x


def matrix(rows):
    return [[exact(x) for x in row] for row in rows]


def make_report(command, args, result, status="ok", exit_code=0, elapsed=None, error=None):
    rep = {
        "schema": SCHEMA,
        "version": __version__,
        "command": {"name": command, "args": args},
        "status": status,
        "exit_code": exit_code,
    }
    if error is not None:
        rep["error"] = error
    if result is not None:
        rep["result"] = result
    if elapsed is not None:
        rep["timing"] = {"seconds": round(elapsed, 3)}
    return rep


def to_json(report) -> str:
    return json.dumps(report, indent=2, ensure_ascii=False) + "\n"


# -- text ------------------------------------------------------------------

def _cell(x):
    if isinstance(x, dict) and "coeffs" in x:
        return scalar_str(_rebuild(x))
    return str(x)


def _rebuild(d):
    # only for display: show the polynomial in the symbol, modulus appended
    terms = []
    for k, c in enumerate(d["coeffs"]):
        if Fraction(c) == 0:
            continue
        mono = "" if k == 0 else (d["symbol"] if k == 1 else f"{d['symbol']}^{k}")
        terms.append(c if not mono else (mono if c == "1" else f"{c}*{mono}"))
    return " + ".join(terms) or "0"


def _is_matrix(v):
    return (isinstance(v, list) and v and all(isinstance(r, list) for r in v)
            and all(not isinstance(c, (list, dict)) or (isinstance(c, dict) and "coeffs" in c)
                    for r in v for c in r))


def _table(rows, indent):
    cells = [[_cell(c) for c in r] for r in rows]
    width = max((len(c) for r in cells for c in r), default=0)
    return [" " * indent + "  ".join(c.rjust(width) for c in r) for r in cells]


def _render(value, indent, out, key=None):
    pad = " " * indent
    head = f"{pad}{key}:" if key is not None else None
    if isinstance(value, dict) and "coeffs" in value:
        out.append(f"{head} {_rebuild(value)}  [mod {value['modulus']}]" if head else pad + _rebuild(value))
    elif isinstance(value, dict):
        if head:
            out.append(head)
        for k, v in value.items():
            _render(v, indent + (2 if head else 0), out, k)
    elif _is_matrix(value):
        if head:
            out.append(head)
        out.extend(_table(value, indent + 2))
    elif isinstance(value, list):
        if all(not isinstance(v, (list, dict)) for v in value):
            cells = [_cell(v) for v in value]
            line = ("; " if any("," in c for c in cells) else ", ").join(cells)
            out.append(f"{head} [{line}]" if head else pad + line)
        else:
            if head:
                out.append(head)
            for v in value:
                if isinstance(v, dict):
                    out.append(pad + "  -")
                    _render(v, indent + 4, out)
                else:
                    _render(v, indent + 2, out)
    else:
        text = "null" if value is None else _cell(value)
        out.append(f"{head} {text}" if head else pad + text)


def to_text(report) -> str:
    out = [f"orbimilnor {report['version']} {report['command']['name']}: {report['status']}"]
    if "error" in report:
        err = report["error"]
        out.append(f"error [{err['code']}]: {err['message']}")
        for k, v in err.get("details", {}).items():
            out.append(f"  {k}: {v}")
    if "result" in report:
        _render(report["result"], 0, out)
    if "timing" in report:
        out.append(f"time: {report['timing']['seconds']} s")
    return "\n".join(out) + "\n"
