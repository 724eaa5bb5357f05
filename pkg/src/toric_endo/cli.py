"""Command-line front end: ``toric-endo <command> ...``.

Exit status 0 on mathematical success, 1 on a failed check or invalid
certificate, 2 on input errors. JSON reports carry ``"schema": 1`` and are
byte-identical for identical inputs and seed.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from pathlib import Path

from . import chern, obstruction, split
from .builtin import resolve_fan
from .errors import InputError, ToricEndoError
from .lattice import LatticeEndo, check_wall_relation, find_walls, frobenius_power_analysis, wall_relation
from .sections import ToricDivisor, polytope_of

SCHEMA = 1
OK, FAILED, BAD_INPUT = 0, 1, 2


class Outcome:
    def __init__(self, result: dict, summary: str, status: int = OK):
        self.result = result
        self.summary = summary
        self.status = status


def _read_json(path: str):
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None


def _fan(ref: str | None):
    if ref is None:
        raise InputError("--fan is required")
    if ref.startswith("builtin:"):
        return resolve_fan(ref)
    return resolve_fan(_read_json(ref))


def _ints(text: str, what: str) -> list[int]:
    try:
        return [int(v) for v in text.replace(" ", "").split(",") if v]
    except ValueError:
        raise InputError(f"{what} must be a comma-separated list of integers, got {text!r}") from None


def _matrix(text: str) -> list[list[int]]:
    rows = [r for r in text.split(";") if r.strip()]
    return [_ints(r, "matrix row") for r in rows]


# -- commands ------------------------------------------------------------------


def cmd_fan_check(args) -> Outcome:
    fan = _fan(args.fan)
    walls = find_walls(fan)
    result = {"fan": fan.to_json(), "valid": True, "walls": len(walls), "max_cones": len(fan.max_cones)}
    return Outcome(result, f"fan ok: rank {fan.rank}, {len(fan.rays)} rays, {len(fan.max_cones)} cones, {len(walls)} walls")


def cmd_walls(args) -> Outcome:
    fan = _fan(args.fan)
    rows, lines, ok = [], [], True
    for w in find_walls(fan):
        rel = wall_relation(fan, w)
        good = check_wall_relation(fan, w, rel)
        ok &= good
        rows.append({"wall": w.to_json(), "a": list(rel.a), "round_trip": good})
        lines.append(f"tau={list(w.tau)} sigma={list(w.sigma)} sigma'={list(w.sigma_prime)} a={list(rel.a)}")
    return Outcome({"walls": rows}, "\n".join(lines), OK if ok else FAILED)


def cmd_sections(args) -> Outcome:
    fan = _fan(args.fan)
    coeffs = _ints(args.divisor, "--divisor")
    D = ToricDivisor(fan, tuple(coeffs))
    pts = polytope_of(D).lattice_points()
    result = {"divisor": D.to_json(), "h0": len(pts), "points": [list(p) for p in pts]}
    return Outcome(result, f"h0 = {len(pts)}")


def cmd_classify_split(args) -> Outcome:
    obj = _read_json(args.spec)
    if isinstance(obj, dict) and obj.get("kind") == "torsion":
        bundle = split.TorsionBundle(
            tuple(obj.get("classes", (0, 1))), obj.get("order", 2), obj.get("q", 1), obj.get("d", 2)
        )
        sections = None
        if "sections" in obj:
            sections = {(int(s["ell"]), tuple(s["lambda"])): s["coeff"] for s in obj["sections"]}
        rep = split.torsion_example(bundle, sections)
        summary = f"torsion: {', '.join(map(str, rep.polys))}; gluing {'pass' if rep.gluing.passed else 'FAIL'}; {rep.common_zero.status} via {rep.common_zero.method}"
        return Outcome(rep.to_json(), summary, OK if rep.passed else FAILED)
    data = split.BasedMapData.from_json(obj)
    rep = split.classify(data)
    cz = rep.common_zero
    summary = f"gluing {'pass' if rep.gluing.passed else 'FAIL'}; " + (
        f"{cz.status} via {cz.method}" if cz is not None else f"{len(rep.out_of_space)} section terms outside their space"
    )
    return Outcome(rep.to_json(), summary, OK if rep.passed else FAILED)


def cmd_hirzebruch(args) -> Outcome:
    template = split.hirzebruch_enumerate(args.n, args.degree)
    rng = random.Random(args.seed)
    reports = [split.random_hirzebruch(rng, args.n, args.degree).verify() for _ in range(args.instances)]
    degenerate = split.random_hirzebruch(rng, args.n, args.degree, zero_s0=True).verify()
    ok = all(r.accepted for r in reports) and not degenerate.accepted
    result = {
        "template": template.to_json(),
        "instances": [r.to_json() for r in reports],
        "accepted": sum(r.accepted for r in reports),
        "degenerate_s0": degenerate.to_json(),
    }
    dims = ", ".join(f"{s.name}:{s.dim}" for s in template.slots)
    summary = (
        f"F_{args.n}, d={args.degree}: dims ({dims}), sum {template.sum_dim}; "
        f"{result['accepted']}/{len(reports)} instances accepted; s_0 = 0 rejected: {'; '.join(degenerate.diagnostics)}"
    )
    return Outcome(result, summary, OK if ok else FAILED)


def cmd_p1n(args) -> Outcome:
    degrees = _ints(args.degrees, "--degrees")
    verdict = split.classify_p1n_tangent(len(degrees), degrees, args.relative_degree)
    summary = f"{verdict.status}: " + ("; ".join(verdict.form) if verdict.form else verdict.reason)
    return Outcome(verdict.to_json(), summary)


def cmd_certify(args) -> Outcome:
    fan = _fan(args.fan)
    rep = obstruction.certify_variety(fan, args.bundle, args.degree)
    lines = [f"{args.bundle} d={args.degree}: {rep.verdict}"]
    for w in rep.walls:
        lines.append(f"  a={list(w.a)} {w.status}" + (f" ({w.reason})" if w.reason else ""))
    return Outcome(rep.to_json(), "\n".join(lines), OK if rep.verdict == "valid" else FAILED)


def cmd_compat(args) -> Outcome:
    inst = obstruction.CompatInstance.from_json(_read_json(args.spec))
    rep = obstruction.verify_compat(inst)
    result = {"instance": inst.to_json(), "report": rep.to_json()}
    return Outcome(result, f"compatibility {'holds' if rep.passed else 'FAILS'}", OK if rep.passed else FAILED)


def cmd_chern(args) -> Outcome:
    r, dim = args.rank, args.dim
    if args.symbolic:
        lemma = {k: chern.lemma_coefficient(r, k) == chern.lemma_coefficient_by_expansion(r, k) for k in range(r + 1)}
        grid = []
        for d in range(1, 8):
            for q in range(1, 8):
                if d != q:
                    rep = chern.expand_pullback(r, d, q, dim=dim)
                    grid.append({"d": d, "q": q, "passed": rep.passed})
        appendix = {k: chern.appendix_identity_symbolic(k).is_zero() for k in range(r)}
        steps = [chern.inductive_step(r, k, 2, 3).consistent for k in range(r)]
        ok = all(lemma.values()) and all(g["passed"] for g in grid) and all(appendix.values()) and all(steps)
        result = {
            "rank": r,
            "dim": dim,
            "lemma_matches_expansion": {str(k): v for k, v in lemma.items()},
            "pullback_grid": grid,
            "appendix_identity_zero": {str(k): v for k, v in appendix.items()},
            "alpha": str(chern.solve_alpha(r, 2, 3)),
            "inductive_steps_consistent": steps,
            "passed": ok,
        }
        return Outcome(result, f"rank {r}: symbolic residuals {'zero' if ok else 'NONZERO'}", OK if ok else FAILED)
    if args.d is None or args.q is None:
        raise InputError("give --d and --q, or --symbolic")
    rep = chern.expand_pullback(r, args.d, args.q, dim=dim)
    lines = [f"L^{k}: {v}" for k, v in sorted(rep.residuals.items(), reverse=True)]
    return Outcome(rep.to_json(), "\n".join(lines + [f"passed: {rep.passed}"]), OK if rep.passed else FAILED)


def cmd_chern_pn(args) -> Outcome:
    v = chern.pn_tangent_obstruction(args.n)
    return Outcome(v.to_json(), f"P^{args.n}: {v.verdict}" + (f" (k={v.witness_k})" if v.witness_k else ""))


def cmd_frobenius(args) -> Outcome:
    phi = LatticeEndo(_matrix(args.matrix))
    fan = _fan(args.fan or f"builtin:p1^{phi.rank}")
    res = frobenius_power_analysis(phi, fan, args.max_power)
    if res.kind == "scalar":
        result = {"kind": "frobenius_power", "m": res.m, "d": res.d}
        summary = f"phi^{res.m} = [{res.d}]"
    elif res.kind == "product":
        result = {
            "kind": "product_decomposition",
            "m": res.m,
            "factors": [{"scalar": d, "rays": list(rays)} for d, rays in res.factors],
        }
        summary = f"phi^{res.m} splits with scalars {list(res.scalars)}"
    else:
        result = {"kind": "not_found", "max_power": res.max_power}
        summary = f"no Frobenius power up to {res.max_power}"
    return Outcome(result, summary, FAILED if res.kind == "not_found" else OK)


def cmd_reproduce(args) -> Outcome:
    root = Path(args.configs)
    files = sorted(root.glob("*.json"))
    if not files:
        raise InputError(f"no configs found in {root}")
    rows, ok = [], True
    for path in files:
        cfg = _read_json(str(path))
        argv = [str(root / a[1:]) if isinstance(a, str) and a.startswith("@") else str(a) for a in cfg["argv"]]
        start = time.perf_counter()
        out = run(argv)
        elapsed = time.perf_counter() - start
        expect = cfg.get("expect_exit", 0)
        good = out.status == expect
        ok &= good
        rows.append({"config": path.name, "exit": out.status, "expected": expect, "ok": good, "summary": out.summary})
        if args.timings:
            rows[-1]["seconds"] = round(elapsed, 3)
    lines = [f"{'ok ' if r['ok'] else 'BAD'} {r['config']}: exit {r['exit']} ({r['summary'].splitlines()[0]})" for r in rows]
    return Outcome({"runs": rows, "passed": ok}, "\n".join(lines), OK if ok else FAILED)


# -- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--out", metavar="PATH")
    common.add_argument("--seed", type=int, default=0)

    def fan_flag(p, required=True):
        p.add_argument("--fan", required=required, metavar="PATH|builtin:NAME")

    parser = argparse.ArgumentParser(prog="toric-endo", description="Endomorphisms of projectivized toric bundles.")
    sub = parser.add_subparsers(dest="command", required=True)

    fan = sub.add_parser("fan", help="fan utilities")
    fan_sub = fan.add_subparsers(dest="fan_command", required=True)
    p = fan_sub.add_parser("check", parents=[common], help="validate a fan")
    fan_flag(p)
    p.set_defaults(func=cmd_fan_check)

    p = sub.add_parser("walls", parents=[common], help="walls and their relations")
    fan_flag(p)
    p.set_defaults(func=cmd_walls)

    p = sub.add_parser("sections", parents=[common], help="lattice points of a divisor polytope")
    fan_flag(p)
    p.add_argument("--divisor", required=True, metavar="C1,C2,...", help="ray coefficients")
    p.set_defaults(func=cmd_sections)

    p = sub.add_parser("classify-split", parents=[common], help="gluing and common-zero checks for section data")
    p.add_argument("--spec", required=True, metavar="PATH")
    p.set_defaults(func=cmd_classify_split)

    p = sub.add_parser("hirzebruch", parents=[common], help="endomorphism family of F_n over P^1")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--instances", type=int, default=20)
    p.set_defaults(func=cmd_hirzebruch)

    p = sub.add_parser("p1n-classify", parents=[common], help="based maps of P(T) over (P^1)^n")
    p.add_argument("--degrees", required=True, metavar="D1,...,DN")
    p.add_argument("--relative-degree", type=int)
    p.set_defaults(func=cmd_p1n)

    p = sub.add_parser("certify", parents=[common], help="nonexistence certificates across walls")
    fan_flag(p)
    p.add_argument("--bundle", choices=("tangent", "cotangent"), required=True)
    p.add_argument("--degree", type=int, required=True)
    p.set_defaults(func=cmd_certify)

    compat = sub.add_parser("compat", help="compatibility equations on a wall")
    compat_sub = compat.add_subparsers(dest="compat_command", required=True)
    p = compat_sub.add_parser("verify", parents=[common])
    p.add_argument("--spec", required=True, metavar="PATH")
    p.set_defaults(func=cmd_compat)

    ch = sub.add_parser("chern", help="Chern class identities")
    ch_sub = ch.add_subparsers(dest="chern_command", required=True)
    p = ch_sub.add_parser("verify", parents=[common])
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--d", type=int)
    p.add_argument("--q", type=int)
    p.add_argument("--symbolic", action="store_true")
    p.set_defaults(func=cmd_chern)
    p = ch_sub.add_parser("pn-obstruction", parents=[common])
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_chern_pn)

    p = sub.add_parser("frobenius-analyze", parents=[common], help="Frobenius powers of a lattice map")
    p.add_argument("--matrix", required=True, metavar="'a,b;c,d'")
    fan_flag(p, required=False)
    p.add_argument("--max-power", type=int, default=64)
    p.set_defaults(func=cmd_frobenius)

    p = sub.add_parser("reproduce", parents=[common], help="run every checked-in example config")
    p.add_argument("--configs", default="configs", metavar="DIR")
    p.add_argument("--timings", action="store_true", help="include wall-clock times (not deterministic)")
    p.set_defaults(func=cmd_reproduce)
    return parser


def run(argv) -> Outcome:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ToricEndoError as exc:
        return Outcome({"error": type(exc).__name__, "message": str(exc)}, f"error: {exc}", BAD_INPUT)


def render(out: Outcome, fmt: str, command: str) -> str:
    if fmt == "text":
        return out.summary + "\n"
    doc = {"schema": SCHEMA, "command": command, "exit": out.status, "result": out.result}
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(argv)
    out = run(argv)
    command = " ".join(a for a in (args.command, getattr(args, "fan_command", None),
                                   getattr(args, "compat_command", None), getattr(args, "chern_command", None)) if a)
    text = render(out, args.format, command)
    if args.out:
        try:
            Path(args.out).write_text(text)
        except OSError as exc:
            print(f"error: {args.out}: {exc.strerror or exc}", file=sys.stderr)
            return BAD_INPUT
    else:
        sys.stdout.write(text)
    if out.status == BAD_INPUT:
        print(out.summary, file=sys.stderr)
    return out.status


if __name__ == "__main__":
    sys.exit(main())
