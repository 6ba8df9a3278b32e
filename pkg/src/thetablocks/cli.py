"""Command-line entry point.

Every subcommand prints one JSON document (``--format text`` gives a short
human summary, ``csv`` is available for tabular output).  Exit status is 0
on success, 1 when a verification fails and 2 on a usage error.
"""
from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

from . import acceptance, blocks, families, hecke, order, rootsys, search, span
from .blocks import ThetaQuotient, expand, format_block, parse_block
from .config import FIXTURE_ENV, Config, FixtureError, load_fixture

OK, MISMATCH, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _jsonable(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, ThetaQuotient):
        return format_block(obj)
    return obj


def _emit(payload: dict, fmt: str, out, text: str | None = None, rows: list[dict] | None = None):
    if fmt == "text" and text is not None:
        out.write(text.rstrip("\n") + "\n")
    elif fmt == "csv" and rows is not None:
        w = csv.DictWriter(out, fieldnames=list(rows[0]) if rows else [], lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: _jsonable(v) for k, v in r.items()})
    else:
        out.write(json.dumps(_jsonable(payload), sort_keys=True, indent=2) + "\n")


def _block(text: str) -> ThetaQuotient:
    try:
        return parse_block(text)
    except (ValueError, KeyError) as exc:
        raise UsageError(str(exc)) from None


def _ints(text: str) -> list[int]:
    try:
        return [int(v) for v in text.replace(" ", "").split(",") if v]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def _meta(tq: ThetaQuotient) -> dict:
    k, m, h = tq.meta()
    return {"block": format_block(tq), "weight": k, "index": m, "character": h,
            "class": tq.classify(), "q_order": tq.q_order(), "min_order": tq.min_order()}


def _meta_text(d: dict) -> str:
    label = {"cusp": "cusp", "holomorphic": "holomorphic non-cusp", "neither": "not holomorphic"}[d["class"]]
    return f"weight {d['weight']}, index {d['index']}, character {d['character']}, {label}"


# ------------------------------------------------------------- subcommands
def cmd_expand(a, cfg):
    tq = _block(a.block)
    s = expand(tq, a.prec if a.prec is not None else cfg.q_prec)
    return OK, {"block": format_block(tq), "series": s.to_json_obj()}, repr(s), None


def cmd_classify(a, cfg):
    d = _meta(_block(a.block))
    return OK, d, _meta_text(d), None


def cmd_order(a, cfg):
    tq = _block(a.block)
    if a.x is not None:
        x = Fraction(a.x)
        v = order.order_at(tq, x)
        return OK, {"x": x, "order": v}, f"ord({x}) = {v}", None
    prof = tq.profile()
    res = order.minimize(prof)
    pieces = [{"from": l, "to": r, "A": A, "B": B, "C": C} for l, r, (A, B, C) in prof.intervals()]
    d = {"block": format_block(tq), "min_order": res.min_value, "argmins": res.argmins, "pieces": pieces}
    return OK, d, f"min order {res.min_value} at x = {', '.join(map(str, res.argmins))}", pieces


def cmd_search(a, cfg):
    if a.pattern:
        try:
            c = search.evaluate(search.pattern(a.pattern), "pattern")
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    else:
        if a.n is None:
            raise UsageError("search needs --n or --pattern")
        budget = a.budget or cfg.search_budget
        c = search.random_search(a.n, budget, a.strategy, a.seed, max_entry=a.max_entry)
    d = {"a": list(c.a), "N": len(c.a), "s": c.s, "k": c.k, "a2": c.norm, "source": c.source}
    return OK, d, f"N={len(c.a)} k={c.k} a2={c.norm} a={list(c.a)}", None


def cmd_family(a, cfg):
    kind = a.kind
    if kind == "quark":
        spec = families.QuarkSpec(a.a, a.b)
        tq = spec.block()
        d = _meta(tq)
        d["rule_cusp"] = spec.is_cusp
        status = OK if spec.is_cusp == (d["class"] == "cusp") else MISMATCH
        if a.prec is not None:
            s = families.quark_expansion(spec, a.prec)
            d["series"] = s.to_json_obj()
            if not s.agrees(expand(tq, a.prec)):
                status = MISMATCH
    elif kind == "an":
        if not a.spectrum:
            raise UsageError("family an needs --spectrum")
        spec = families.AnSpec(_ints(a.spectrum))
        d = _meta(spec.block())
        d["supplement_cusp"] = families.cusp_supplement(spec)
        status = OK if d["supplement_cusp"] == (d["class"] == "cusp") else MISMATCH
        if a.prec is not None:
            s = families.an_expansion(spec, a.prec)
            d["series"] = s.to_json_obj()
            if not s.agrees(expand(spec.block(), a.prec)):
                status = MISMATCH
    elif kind in ("b2", "g2"):
        tq = (families.b2_block if kind == "b2" else families.g2_block)(a.a, a.b)
        d = _meta(tq)
        d["dual_bound"] = families.family_dual_bound(kind.upper(), a.a, a.b)
        status = OK
    else:
        raise UsageError(f"unknown family {kind!r}")
    return status, d, _meta_text(d), None


def cmd_rootfam(a, cfg):
    comps = rootsys.components(a.type)
    if not comps:
        raise UsageError("empty root system label")
    d: dict = {"type": a.type, "forms": rootsys.family_forms(a.type)}
    if len(comps) == 1:
        d["parameters"] = comps[0].parameters()
    if a.a:
        d.update(_meta(rootsys.theta_R_block(a.type, _ints(a.a))))
    return OK, d, json.dumps(_jsonable(d.get("parameters", d["forms"])), sort_keys=True), None


def cmd_macdonald(a, cfg):
    ok = rootsys.macdonald_verify(a.type, a.prec, a.mode, samples=a.samples, cap=cfg.weyl_cap)
    d = {"type": a.type, "mode": a.mode, "prec": a.prec, "result": "PASS" if ok else "FAIL",
         "stabilizer_order": rootsys.weyl_stabilizer_order(a.type) if a.mode == "full_weyl" else None}
    return (OK if ok else MISMATCH), d, d["result"], None


def cmd_lift(a, cfg):
    tq = _block(a.block)
    t, k = tq.index(), tq.weight()
    Q = a.q_prec_lift or cfg.q_prec
    phi = expand(tq, Q * max(a.p_prec - 1, 1))
    lift = hecke.additive_lift(phi, k, t, a.p_prec, Q)
    d = {"block": format_block(tq), "lift": lift.to_json_obj()}
    status = OK
    if a.verify_borcherds:
        ok = hecke.lift_equals_borcherds(tq, a.p_prec, Q)
        d["borcherds_agrees"] = ok
        status = OK if ok else MISMATCH
    text = f"lift of {format_block(tq)} through p^{t * (a.p_prec - 1)}"
    if a.verify_borcherds:
        text += ": " + ("equals" if d["borcherds_agrees"] else "differs from") + " the Borcherds product"
    return status, d, text, None


def cmd_relations(a, cfg):
    try:
        raw = json.loads(Path(a.blocks).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {a.blocks}: {exc}") from None
    if isinstance(raw, dict):
        names, texts = list(raw), list(raw.values())
    else:
        names, texts = [str(i) for i in range(len(raw))], list(raw)
    bl = [_block(t) for t in texts]
    try:
        basis = span.kernel(bl, a.prec)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    rels = [{n: c for n, c in zip(names, v) if c} for v in basis]
    text = "\n".join(" + ".join(f"{c}*{n}" for n, c in r.items()) + " = 0" for r in rels) or "no relations"
    return OK, {"blocks": dict(zip(names, texts)), "relations": rels}, text, None


def cmd_census(a, cfg):
    ms = range(a.start, a.upto + 1)
    got = span.census(ms, k=a.weight, h=a.character, lengths=(a.length,))
    rows = [{"m": m, "te": te, "tc": tc} for m, (te, tc) in got.items() if te or tc or a.all]
    text = "\n".join(f"{r['m']}: te={r['te']} tc={r['tc']}" for r in rows)
    return OK, {"weight": a.weight, "length": a.length, "rows": rows}, text, rows


TABLES = {"best-values": 2, "parameters": 7, "nearly-holomorphic": 8, "named-blocks": 10, "census": 12}


def cmd_tables(a, cfg):
    if a.name == "best-values":
        report = search.verify_table(load_fixture("best_values"))
        rows = [{k: r[k] for k in ("N", "pattern", "k", "a2", "ok")} for r in report]
    elif a.name == "parameters":
        rows = []
        for label in ("A4", "B4", "C4", "D4", "E6", "E7", "E8", "F4", "G2"):
            p = rootsys.root_system(label).parameters()
            rows.append({"type": label, **p, "l_mod_24": p["l"] % 24})
    elif a.name == "nearly-holomorphic":
        rows = [{"m": Fraction(t, 2), "count": blocks.count_gtb(Fraction(t, 2))} for t in range(1, 41)]
    elif a.name == "named-blocks":
        rows = [{"name": n, **_meta(families.named_block(n))} for n in families.NAMED_BLOCKS]
    else:
        table = {r["m"]: (r["te"], r["tc"]) for r in load_fixture("weight2_census")}
        got = span.census(acceptance.CENSUS_M)
        rows = [{"m": m, "te": got[m][0], "tc": got[m][1], "table": "{}/{}".format(*table[m]),
                 "ok": got[m] == table[m]} for m in acceptance.CENSUS_M]
    status = OK if all(r.get("ok", True) for r in rows) else MISMATCH
    text = "\n".join(json.dumps(_jsonable(r), sort_keys=True) for r in rows)
    return status, {"table": a.name, "rows": rows}, text, rows


def cmd_bounds(a, cfg):
    if a.n < 1:
        raise UsageError("--n must be positive")
    lo, hi = search.weight_bounds(a.n)
    return OK, {"N": a.n, "lower": lo, "upper": hi}, f"lower {lo:.5f}, upper {hi:.6g}", None


def _run_criterion(n: int) -> acceptance.CriterionResult:
    return acceptance.CRITERIA[n - 1]()


def cmd_check(a, cfg):
    nums = a.criterion or list(range(1, len(acceptance.CRITERIA) + 1))
    bad = [n for n in nums if not 1 <= n <= len(acceptance.CRITERIA)]
    if bad:
        raise UsageError(f"criteria are numbered 1..{len(acceptance.CRITERIA)}")
    if a.jobs > 1 and len(nums) > 1:
        with ProcessPoolExecutor(a.jobs) as pool:
            results = list(pool.map(_run_criterion, nums))
    else:
        results = [_run_criterion(n) for n in nums]
    rows = [{"criterion": r.number, "title": r.title, "ok": r.ok, "checks": r.checks, "failures": r.failures}
            for r in results]
    status = OK if all(r.ok for r in results) else MISMATCH
    return status, {"criteria": rows}, "\n".join(r.line() for r in results), rows


# ------------------------------------------------------------------ parser
def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="thetablocks", description=__doc__.splitlines()[0])
    p.add_argument("--format", choices=("json", "csv", "text"), default=None, help="output format")
    p.add_argument("--q-prec", type=int, default=None, help="default q-precision")
    p.add_argument("--fixtures", default=None, help="fixture directory (checksummed)")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("expand", help="q-expansion of a block")
    s.add_argument("--block", required=True)
    s.add_argument("--prec", type=Fraction, default=None)
    s.set_defaults(fn=cmd_expand)

    s = sub.add_parser("classify", help="weight, index, character and holomorphy class")
    s.add_argument("--block", required=True)
    s.set_defaults(fn=cmd_classify)

    s = sub.add_parser("order", help="order profile or order at a point")
    s.add_argument("--block", required=True)
    s.add_argument("--x", default=None)
    s.set_defaults(fn=cmd_order)

    s = sub.add_parser("search", help="low-weight search or evaluate a pattern")
    s.add_argument("--n", type=int)
    s.add_argument("--pattern")
    s.add_argument("--budget", type=int, default=None)
    s.add_argument("--strategy", choices=("exhaustive", "pattern", "random"), default="pattern")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--max-entry", type=int, default=None)
    s.set_defaults(fn=cmd_search)

    s = sub.add_parser("family", help="quark, A_n, B2 and G2 families")
    s.add_argument("kind", choices=("quark", "an", "b2", "g2"))
    s.add_argument("--a", type=int, default=1)
    s.add_argument("--b", type=int, default=1)
    s.add_argument("--spectrum")
    s.add_argument("--prec", type=Fraction, default=None)
    s.set_defaults(fn=cmd_family)

    s = sub.add_parser("rootfam", help="root-system family data")
    s.add_argument("--type", required=True)
    s.add_argument("--a", default=None, help="comma-separated positive parameters")
    s.set_defaults(fn=cmd_rootfam)

    s = sub.add_parser("macdonald", help="verify a Macdonald identity")
    s.add_argument("--type", required=True)
    s.add_argument("--prec", type=int, default=5)
    s.add_argument("--mode", choices=("full_weyl", "specialized"), default="full_weyl")
    s.add_argument("--samples", type=int, default=20)
    s.set_defaults(fn=cmd_macdonald)

    s = sub.add_parser("lift", help="additive (Maass-type) lift of a block")
    s.add_argument("--block", required=True)
    s.add_argument("--p-prec", type=int, default=3)
    s.add_argument("--q-prec", dest="q_prec_lift", type=int, default=None)
    s.add_argument("--verify-borcherds", action="store_true")
    s.set_defaults(fn=cmd_lift)

    s = sub.add_parser("relations", help="linear relations among blocks")
    s.add_argument("--blocks", required=True, help="JSON list (or name -> block map) of block strings")
    s.add_argument("--prec", type=Fraction, default=None)
    s.set_defaults(fn=cmd_relations)

    s = sub.add_parser("census", help="count holomorphic pure blocks by index")
    s.add_argument("--weight", type=Fraction, default=Fraction(2))
    s.add_argument("--character", type=int, default=0)
    s.add_argument("--upto", type=int, required=True)
    s.add_argument("--start", type=int, default=1)
    s.add_argument("--length", type=int, default=10)
    s.add_argument("--all", action="store_true", help="include indices with no blocks")
    s.set_defaults(fn=cmd_census)

    s = sub.add_parser("tables", help="reproduce a reference table")
    s.add_argument("--name", choices=sorted(TABLES), required=True)
    s.set_defaults(fn=cmd_tables)

    s = sub.add_parser("bounds", help="theoretical weight bounds for length N")
    s.add_argument("--n", type=int, required=True)
    s.set_defaults(fn=cmd_bounds)

    s = sub.add_parser("check", help="run acceptance criteria")
    s.add_argument("--criterion", type=int, action="append")
    s.add_argument("--jobs", type=int, default=1)
    s.set_defaults(fn=cmd_check)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    try:
        a = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        overrides: dict = {}
        if a.fixtures:
            # fixture loaders read the directory from the environment
            os.environ[FIXTURE_ENV] = a.fixtures
            overrides["fixture_dir"] = Path(a.fixtures)
        if a.format:
            overrides["output"] = a.format
        if a.q_prec is not None:
            overrides["q_prec"] = a.q_prec
        cfg = Config.from_env(**overrides)
        status, payload, text, rows = a.fn(a, cfg)
    except (UsageError, ValueError, KeyError, FixtureError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"thetablocks {a.command}: error: {msg}", file=sys.stderr)
        return USAGE
    fmt = a.format or ("text" if a.command == "check" else "json")
    _emit(payload, fmt, out, text, rows)
    return status


if __name__ == "__main__":
    sys.exit(main())
