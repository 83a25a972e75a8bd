"""Command-line entry point.

Every command writes JSON lines, one report row per line, with natural
numbers as decimal strings.  ``--pretty`` prints a table instead.  Exit
status: 0 on success, 1 if any row is a refusal, 2 on usage errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import busy_beaver as bb
from . import config
from . import codec
from .acceptance import FULL, QUICK, run_acceptance
from .errors import Refusal
from .factory import QuasiTrivialSpec, Registry, register_family, standard_registry
from .growth import (CROSSOVER, FIRST, build_counterexample_family, dominates_on_window,
                     f_omega, g0, g_at_index, lookup_function)
from .machine import TableError, parse_table, run, validate


def _plain(v):
    if isinstance(v, bool) or v is None or isinstance(v, str):
        return v
    if isinstance(v, int):
        return str(v)
    if isinstance(v, dict):
        return {k: _plain(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    return str(v)


def row(command: str, inputs: dict, result=None, refusal: str | None = None) -> dict:
    if refusal is not None:
        return {"command": command, "inputs": _plain(inputs),
                "result": {"refusal": refusal}, "provenance": "refused"}
    return {"command": command, "inputs": _plain(inputs), "result": _plain(result),
            "provenance": "computed"}


def _refused(command: str, inputs: dict, err: Refusal) -> dict:
    return row(command, inputs, refusal=f"{err.kind}: {err}")


# -- commands ---------------------------------------------------------------------

def cmd_codec(a) -> list[dict]:
    if a.action == "encode":
        w = codec.encode_pair(a.n, a.m)
        return [row("codec encode", {"n": a.n, "m": a.m}, {"code": w, "index": codec.index_of_word(w)})]
    if a.action == "decode":
        if a.word is not None:
            n, m = codec.decode_word(a.word)
            return [row("codec decode", {"word": a.word}, {"n": n, "m": m})]
        n, m = codec.decode_index(a.index)
        return [row("codec decode", {"index": a.index}, {"n": n, "m": m})]
    if a.action == "index":
        return [row("codec index", {"n": a.n, "m": a.m}, {"index": codec.ell_index(a.n, a.m)})]
    law = codec.linear_law(a.m, range(a.probe))
    return [row("codec law", {"m": a.m, "probe": a.probe}, {"a": law.a, "b": law.b})]


def _read_table(path: str):
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    return parse_table(text)


def cmd_machine(a) -> list[dict]:
    if a.action == "validate":
        text = sys.stdin.read() if a.table == "-" else Path(a.table).read_text()
        try:
            problems = validate(parse_table(text))
        except TableError as err:
            problems = [str(err)]
        return [row("machine validate", {"table": a.table},
                    {"valid": not problems, "problems": problems})]
    table = _read_table(a.table)
    out = run(table, a.input, a.budget)
    return [row("machine run", {"table": a.table, "input": a.input, "budget": a.budget}, {
        "status": out.status, "steps": out.steps_used, "output": out.output,
        "op_time": out.op_time,
    })]


def _registry(a) -> Registry:
    return Registry.load(a.registry) if getattr(a, "registry", None) else standard_registry()


def cmd_family(a) -> list[dict]:
    h, hp = lookup_function(a.h), lookup_function(a.hprime)
    inputs = {"h": a.h, "hprime": a.hprime}
    specs, rows = [], []
    for n in range(a.n_min, a.n_max + 1):
        try:
            specs.append(QuasiTrivialSpec(h, hp, n))
        except Refusal as err:
            rows.append(_refused("family build", {**inputs, "n": n}, err))
    reg = Registry()
    for cm in register_family(specs, reg):
        rows.append(row("family build", {**inputs, "n": cm.spec.n}, {
            "index": cm.ell_index, "k": cm.spec.k_n,
            "certificate": {"k": cm.certificate.degree, "c": cm.certificate.coefficient},
        }))
    rows.sort(key=lambda r: int(r["inputs"]["n"]))
    if a.save:
        reg.save(a.save)
    return rows


def cmd_gfun(a) -> list[dict]:
    if a.action == "g0":
        return [row("gfun g0", {"m": a.m, "mode": a.mode}, {"value": g0(a.m, a.mode)})]
    if a.action == "fomega":
        try:
            return [row("gfun fomega", {"n": a.n}, {"value": f_omega(a.n)})]
        except Refusal as err:
            return [_refused("gfun fomega", {"n": a.n}, err)]
    reg = _registry(a)
    inputs = {"index": a.index}
    try:
        value = g_at_index(a.index, reg, search_budget=a.budget, tier=a.tier)
    except Refusal as err:
        return [_refused("gfun g", inputs, err)]
    return [row("gfun g", inputs, {"value": value, "certified": reg.is_certified(a.index)})]


def cmd_dominate(a) -> list[dict]:
    f, g = lookup_function(a.f), lookup_function(a.g)
    inputs = {"f": a.f, "g": a.g, "lo": a.lo, "hi": a.hi}
    try:
        rep = dominates_on_window(f, g, range(a.lo, a.hi))
    except Refusal as err:
        return [_refused("dominate", inputs, err)]
    return [row("dominate", inputs, {"dominates": rep.dominates, "witness": rep.witness,
                                     "failures": len(rep.failures)})]


def cmd_bb(a) -> list[dict]:
    try:
        if a.action == "sigma":
            r = bb.sigma(a.n, a.cutoff, pruned=not a.unpruned, shards=a.shards, jobs=a.jobs)
            return [row("bb sigma", {"n": a.n, "cutoff": a.cutoff, "pruned": not a.unpruned},
                        r.to_json())]
        reg = _registry(a)
        if a.action == "bprime":
            r = bb.b_prime(a.index, reg, a.cutoff)
            return [row("bb bprime", {"index": a.index, "cutoff": a.cutoff},
                        {**r.to_json(), "states": bb.states_of_index(a.index)})]
        out = []
        for rep in bb.bprime_vs_g_report(a.index_list or reg.indices(), reg, a.cutoff):
            inputs = {"index": rep.index, "cutoff": a.cutoff}
            if rep.refusal:
                out.append(row("bb report", inputs, refusal=rep.refusal))
            else:
                out.append(row("bb report", inputs, {"g": rep.g, "b_prime": rep.b_prime,
                                                      "exact": rep.exact, "holds": rep.holds}))
        return out
    except Refusal as err:
        return [_refused(f"bb {a.action}", {"cutoff": a.cutoff}, err)]


def cmd_demo(a) -> list[dict]:
    h = lookup_function(a.h)
    _, rows = build_counterexample_family(h, range(a.n_max + 1))
    out = []
    for r in rows:
        inputs = {"h": a.h, "n": r.n}
        if r.refusal:
            out.append(row("demo nondomination", inputs, refusal=r.refusal))
            continue
        out.append(row("demo nondomination", inputs, {
            "index": r.index, "hprime": r.hprime, "g": r.g,
            "identity_holds": r.identity_holds, "exceeds_h": r.exceeds_h,
        }))
    return out


def cmd_acceptance(a) -> list[dict]:
    results = run_acceptance(a.profile, echo=lambda line: print(line, file=sys.stderr))
    return [row("acceptance", {"profile": a.profile, "criterion": r.number},
                {"name": r.name, "passed": r.passed, "detail": r.detail})
            for r in results]


# -- parser -------------------------------------------------------------------------

def _nat(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("expected a natural number")
    return v


GLOBAL_DEFAULTS = {"pretty": False, "budget": None, "cutoff": 50, "ceiling_bits": None}


def _global_options() -> argparse.ArgumentParser:
    """Options accepted before or after the subcommand."""
    g = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    g.add_argument("--pretty", action="store_true", help="print a table instead of JSON lines")
    g.add_argument("--budget", type=_nat, help="step budget / search budget")
    g.add_argument("--cutoff", type=_nat, help="busy beaver halting cutoff (default 50)")
    g.add_argument("--ceiling-bits", type=_nat, help="size ceiling for values, in bits")
    return g


class _Sub:
    """Subparser factory that attaches the global options to every leaf."""

    def __init__(self, action, parents):
        self.action, self.parents = action, parents

    def add_parser(self, name, **kw):
        return self.action.add_parser(name, parents=self.parents, **kw)


def build_parser() -> argparse.ArgumentParser:
    common = [_global_options()]
    p = argparse.ArgumentParser(prog="overtake", description=__doc__.splitlines()[0],
                                parents=common)
    sub = _Sub(p.add_subparsers(dest="command", required=True), common)

    c = _Sub(sub.action.add_parser("codec").add_subparsers(dest="action", required=True), common)
    for name in ("encode", "index"):
        s = c.add_parser(name)
        s.add_argument("--n", type=_nat, required=True)
        s.add_argument("--m", type=_nat, required=True)
    s = c.add_parser("decode")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--word")
    g.add_argument("--index", type=_nat)
    s = c.add_parser("law")
    s.add_argument("--m", type=_nat, required=True)
    s.add_argument("--probe", type=_nat, default=64)

    c = _Sub(sub.action.add_parser("machine").add_subparsers(dest="action", required=True), common)
    s = c.add_parser("run")
    s.add_argument("--table", required=True, help="table file, or - for stdin")
    s.add_argument("--input", default="")
    s = c.add_parser("validate")
    s.add_argument("--table", required=True)

    c = _Sub(sub.action.add_parser("family").add_subparsers(dest="action", required=True), common)
    s = c.add_parser("build")
    s.add_argument("--h", default="pow2_plus3")
    s.add_argument("--hprime", default="pow4_succ")
    s.add_argument("--n-min", type=_nat, default=0)
    s.add_argument("--n-max", type=_nat, default=4)
    s.add_argument("--save", help="write the registry JSON here")

    c = _Sub(sub.action.add_parser("gfun").add_subparsers(dest="action", required=True), common)
    s = c.add_parser("g0")
    s.add_argument("--m", type=_nat, required=True)
    s.add_argument("--mode", choices=(FIRST, CROSSOVER), default=FIRST)
    s = c.add_parser("g")
    s.add_argument("--index", type=_nat, required=True)
    s.add_argument("--tier", choices=("structural", "semantic", "compiled"))
    s.add_argument("--registry", help="registry JSON (default: built-in demo registry)")
    s = c.add_parser("fomega")
    s.add_argument("--n", type=_nat, required=True)

    s = sub.add_parser("dominate")
    s.add_argument("--f", required=True)
    s.add_argument("--g", required=True)
    s.add_argument("--lo", type=_nat, default=0)
    s.add_argument("--hi", type=_nat, default=64)

    c = _Sub(sub.action.add_parser("bb").add_subparsers(dest="action", required=True), common)
    s = c.add_parser("sigma")
    s.add_argument("--n", type=_nat, required=True)
    s.add_argument("--shards", type=_nat, default=1)
    s.add_argument("--jobs", type=_nat, default=1)
    s.add_argument("--unpruned", action="store_true")
    s = c.add_parser("bprime")
    s.add_argument("--index", type=_nat, required=True)
    s.add_argument("--registry")
    s = c.add_parser("report")
    s.add_argument("--index", type=_nat, action="append", dest="index_list")
    s.add_argument("--registry")

    c = _Sub(sub.action.add_parser("demo").add_subparsers(dest="action", required=True), common)
    s = c.add_parser("nondomination")
    s.add_argument("--h", default="succ")
    s.add_argument("--n-max", type=_nat, default=3)

    s = sub.add_parser("acceptance")
    s.add_argument("profile", choices=(QUICK, FULL), nargs="?", default=QUICK)
    return p


COMMANDS = {
    "codec": cmd_codec, "machine": cmd_machine, "family": cmd_family, "gfun": cmd_gfun,
    "dominate": cmd_dominate, "bb": cmd_bb, "demo": cmd_demo, "acceptance": cmd_acceptance,
}


def _flat(d: dict, prefix: str = "") -> dict:
    out = {}
    for k, v in d.items():
        if isinstance(v, dict):
            out.update(_flat(v, f"{prefix}{k}."))
        elif isinstance(v, str) and "\n" in v:
            out[prefix + k] = v.strip().replace("\n", " | ")
        else:
            out[prefix + k] = "" if v is None else str(v)
    return out


def pretty(rows: list[dict]) -> str:
    flat = [{"command": r["command"], **_flat(r["inputs"]), **_flat(r["result"])} for r in rows]
    cols = list(dict.fromkeys(k for f in flat for k in f))
    widths = {c: max(len(c), *(len(f.get(c, "")) for f in flat)) for c in cols}
    lines = ["  ".join(c.ljust(widths[c]) for c in cols)]
    lines.append("  ".join("-" * widths[c] for c in cols))
    lines += ["  ".join(f.get(c, "").ljust(widths[c]) for c in cols) for f in flat]
    return "\n".join(line.rstrip() for line in lines)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    a = parser.parse_args(argv)
    for k, v in GLOBAL_DEFAULTS.items():
        if not hasattr(a, k):
            setattr(a, k, v)
    if a.budget is None:
        a.budget = 100_000 if a.command == "machine" else None
    try:
        with config.overrides(ceiling_bits=a.ceiling_bits):
            rows = COMMANDS[a.command](a)
    except Refusal as err:
        rows = [_refused(" ".join(filter(None, [a.command, getattr(a, "action", None)])), {}, err)]
    except (KeyError, TableError, ValueError, OSError) as err:
        parser.print_usage(sys.stderr)
        print(f"overtake: error: {err}", file=sys.stderr)
        return 2
    if a.pretty:
        print(pretty(rows))
    else:
        for r in rows:
            print(json.dumps(r, sort_keys=True))
    refused = any(r["provenance"] == "refused" for r in rows)
    failed = a.command == "acceptance" and not all(r["result"]["passed"] for r in rows)
    return 1 if refused or failed else 0


if __name__ == "__main__":
    sys.exit(main())
