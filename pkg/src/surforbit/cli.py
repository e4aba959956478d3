"""Command-line front end (installed as ``orbitcalc``).

Exit status: 0 on success, 1 when a model has diagnostics or a computation
raises a module error, 2 on usage errors (bad flags, missing files).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from typing import Optional

from . import groupexpr as gx
from . import orbitcalc as oc
from . import polysym as ps
from . import reebmodel as rm
from . import seqcalc as sc
from .errors import ModelError, SurfOrbitError

GROUP_OPS = ("beta1", "center", "ab", "family", "order")


@dataclass
class Command:
    name: str
    fmt: str = "text"
    poly: Optional[str] = None
    model_path: Optional[str] = None
    X: Optional[list] = None        # None = use the model's X
    trace: bool = False
    expr: Optional[str] = None
    ops: list = field(default_factory=list)
    script: Optional[str] = None
    family: Optional[str] = None
    depth: int = 2
    param: int = 2
    report: bool = False
    enhanced: bool = False


def _parser():
    p = argparse.ArgumentParser(prog="orbitcalc", description=__doc__.splitlines()[0])
    fmt = argparse.ArgumentParser(add_help=False)
    g = fmt.add_mutually_exclusive_group()
    g.add_argument("--json", dest="fmt", action="store_const", const="json")
    g.add_argument("--text", dest="fmt", action="store_const", const="text")
    sub = p.add_subparsers(dest="cmd", required=True)

    c = sub.add_parser("classify-poly", parents=[fmt], help="classify a homogeneous polynomial")
    c.add_argument("poly")

    c = sub.add_parser("orbit", parents=[fmt], help="compute the Bieberbach sequence of a model")
    c.add_argument("--in", dest="model_path", required=True)
    c.add_argument("--X", nargs="+", metavar="boundary|empty|ID")
    c.add_argument("--trace", action="store_true")

    c = sub.add_parser("group", parents=[fmt], help="invariants of a group expression")
    c.add_argument("expr")
    for op in GROUP_OPS:
        c.add_argument(f"--{op}", action="store_true")

    c = sub.add_parser("seq", parents=[fmt], help="evaluate a sequence build script")
    c.add_argument("script")

    c = sub.add_parser("enumerate", parents=[fmt], help="list a group or sequence family")
    c.add_argument("--family", required=True,
                   choices=[f.value for f in gx.GroupFamily] + [f.value for f in sc.SeqFamily
                                                                if f is not sc.SeqFamily.gssZBP])
    c.add_argument("--depth", type=int, default=2)
    c.add_argument("--param", type=int, default=2)
    c.add_argument("--report", action="store_true")

    c = sub.add_parser("dot", parents=[fmt], help="DOT export of a model's graph")
    c.add_argument("--in", dest="model_path", required=True)
    c.add_argument("--enhanced", action="store_true")
    return p


def parse_args(argv) -> Command:
    p = _parser()
    a = p.parse_args(argv)
    cmd = Command(a.cmd, getattr(a, "fmt", None) or "text")
    if a.cmd == "classify-poly":
        cmd.poly = a.poly
    elif a.cmd in ("orbit", "dot"):
        if not os.path.isfile(a.model_path):
            p.error(f"no such file: {a.model_path}")
        cmd.model_path = a.model_path
        if a.cmd == "orbit":
            cmd.trace = a.trace
            if a.X is not None:
                if a.X == ["empty"]:
                    cmd.X = []
                elif a.X == ["boundary"]:
                    cmd.X = ["boundary"]
                else:
                    cmd.X = list(a.X)
        else:
            cmd.enhanced = a.enhanced
    elif a.cmd == "group":
        cmd.expr = a.expr
        cmd.ops = [op for op in GROUP_OPS if getattr(a, op)] or list(GROUP_OPS)
    elif a.cmd == "seq":
        cmd.script = a.script
    elif a.cmd == "enumerate":
        if a.depth < 0 or a.param < 1:
            p.error("--depth must be >= 0 and --param >= 1")
        cmd.family, cmd.depth, cmd.param, cmd.report = a.family, a.depth, a.param, a.report
    return cmd


# ------------------------------------------------------------------ commands

def _group_report(e, ops):
    e = gx.normalize(e)
    out = {"expr": gx.to_text(e)}
    for op in ops:
        try:
            if op == "beta1":
                out["beta1"] = gx.beta1(e)
            elif op == "center":
                out["center_rank"] = gx.center_rank(e)
            elif op == "ab":
                out["abelianization"] = gx.to_text(gx.abelianization(e))
            elif op == "family":
                out["families"] = [f.value for f in gx.GroupFamily if gx.in_family(e, f)]
            elif op == "order":
                o = gx.order(e)
                out["order"] = "infinite" if o == gx.INFINITE else o
        except SurfOrbitError as err:
            out[op] = f"n/a ({err.code})"
    return out


def _seq_report(s):
    out = sc.to_json(s)
    out["families"] = [f.value for f in sc.SeqFamily if sc.seq_in_family(s, f)]
    out["nearly_crystallographic"] = sc.is_nearly_crystallographic(s)
    out["nearly_bieberbach"] = sc.is_nearly_bieberbach(s)
    out["crystallographic"] = sc.is_crystallographic(s)
    return out


def _resolve_X(model, X):
    if X is None:
        return model.X
    if X == ["boundary"]:
        return tuple(model.boundary_vertices)
    return tuple(X)


def _run(cmd: Command):
    """Returns (payload, diagnostics)."""
    if cmd.name == "classify-poly":
        return ps.describe(cmd.poly), []
    if cmd.name == "group":
        return _group_report(gx.parse(cmd.expr), cmd.ops), []
    if cmd.name == "seq":
        return _seq_report(sc.parse_seq(cmd.script)), []
    if cmd.name == "enumerate":
        if cmd.family in [f.value for f in gx.GroupFamily]:
            items = list(gx.enumerate_family(cmd.family, cmd.depth, cmd.param))
            rows = [_group_report(e, ["beta1", "order"] if cmd.report else []) for e in items]
        else:
            items = sc.enumerate_seq_family(cmd.family, cmd.depth, cmd.param)
            rows = [(_seq_report(s) if cmd.report else {"seq": sc.to_text(s)}) for s in items]
        return {"family": cmd.family, "depth": cmd.depth, "param": cmd.param,
                "count": len(rows), "items": rows}, []
    model = rm.load_model(cmd.model_path)
    if cmd.name == "dot":
        diags = [d for d in rm.validate(model) if d.severity == "error"]
        if diags:
            return None, diags
        return rm.to_dot(model, cmd.enhanced), []
    X = _resolve_X(model, cmd.X)
    diags = rm.validate(model.with_X(X))
    errors = [d for d in diags if d.severity == "error"]
    if errors:
        return None, diags
    res = oc.compute(model, X)
    out = res.as_dict(trace=cmd.trace)
    out["X"] = list(X)
    out["pi0_delta_rank"] = rm.pi0_delta_rank(model, X)
    if diags:
        out["warnings"] = [d.as_dict() for d in diags]
    return out, []


def _emit_text(payload, out):
    if isinstance(payload, str):
        out.write(payload)
        return
    width = max((len(k) for k in payload), default=0)
    for k, v in payload.items():
        if k == "build":  # the script says the same thing
            continue
        if isinstance(v, list) and v and isinstance(v[0], dict):
            out.write(f"{k}:\n")
            for row in v:
                out.write("  " + "  ".join(f"{a}={b}" for a, b in row.items()) + "\n")
        elif isinstance(v, list):
            out.write(f"{k.ljust(width)}  " + ("\n" + " " * (width + 2)).join(map(str, v)) + "\n"
                      if v else f"{k.ljust(width)}  -\n")
        elif isinstance(v, dict):
            out.write(f"{k.ljust(width)}  " + ", ".join(f"{a}={b}" for a, b in v.items()) + "\n")
        else:
            out.write(f"{k.ljust(width)}  {v}\n")


def run(cmd: Command, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        payload, diags = _run(cmd)
    except ModelError as e:
        payload, diags = None, e.diagnostics
    except SurfOrbitError as e:
        err = {"error": e.code, "message": str(e)}
        stderr.write((json.dumps(err) if cmd.fmt == "json" else f"error {e.code}: {e}") + "\n")
        return 1
    except (OSError, json.JSONDecodeError) as e:
        stderr.write(f"error E_IO: {e}\n")
        return 1
    if diags:
        for d in diags:
            if cmd.fmt == "json":
                stderr.write(json.dumps(d.as_dict()) + "\n")
            else:
                stderr.write(f"{d.severity} {d.code} at {d.where}: {d.message}\n")
        return 1
    if cmd.fmt == "json":
        if isinstance(payload, str):
            payload = {"dot": payload}
        stdout.write(json.dumps(payload, indent=2, default=str) + "\n")
    else:
        _emit_text(payload, stdout)
    return 0


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    return run(parse_args(argv))


if __name__ == "__main__":
    raise SystemExit(main())
