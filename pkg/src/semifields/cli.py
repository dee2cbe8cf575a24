"""Command-line front end: construct, verify, survey, and export instances.

Reports are JSON (one object, or JSON lines for census).  Element-valued flags
accept an integer (prime-field residue), a coefficient list like "[2,1]", or
generator-power notation "g^16" resolved against the deterministic generator.
Exit codes: 0 success, 1 theorem/measurement mismatch, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from . import census as cs
from . import families as fams
from . import fields as fd
from . import semifield as sf
from . import theory as th
from . import towers as tws
from .errors import SemifieldError
from .fields import Element, FieldCtx

FAMILIES = ("twisted", "A", "B", "C", "X")
USAGE_ERROR, MISMATCH, OK = 2, 1, 0


class UsageError(Exception):
    pass


def parse_element(ctx: FieldCtx, text: str) -> Element:
    text = text.strip()
    if text.startswith("["):
        try:
            vals = json.loads(text)
        except json.JSONDecodeError as exc:
            raise UsageError(f"bad coefficient list {text!r}: {exc}") from None
        if not isinstance(vals, list) or len(vals) > ctx.m:
            raise UsageError(f"coefficient list {text!r} does not fit degree {ctx.m}")
        vals = list(vals) + [0] * (ctx.m - len(vals))
        return tuple(int(v) % ctx.p for v in vals)
    if text == "g" or text.startswith("g^"):
        k = 1 if text == "g" else int(text[2:])
        return fd.pow_element(ctx, ctx.generator, k)
    try:
        c = int(text)
    except ValueError:
        raise UsageError(f"cannot parse element {text!r}") from None
    return fd.from_int(ctx, c)


def element_of_order(ctx: FieldCtx, k: int) -> Element:
    """Canonical element of multiplicative order k: the (q-1)/k-th generator power."""
    q1 = ctx.order - 1
    if k <= 0 or q1 % k:
        raise UsageError(f"no element of order {k} in a group of order {q1}")
    return fd.pow_element(ctx, ctx.generator, q1 // k)


def _resolve(ctx: FieldCtx, args, name: str) -> Element:
    text = getattr(args, name, None)
    order = getattr(args, f"{name}_order", None)
    if order is not None:
        if text is not None:
            raise UsageError(f"give --{name} or --{name}-order, not both")
        return element_of_order(ctx, order)
    if text is None:
        raise UsageError(f"family {args.family!r} needs --{name} (or --{name}-order)")
    return parse_element(ctx, text)


def build_instance(args):
    """Construct the requested family instance; returns (presemifield, params dict)."""
    p, m, s = args.p, args.m, args.s
    if args.family == "twisted":
        L = fd.build_field(p, m)
        l = _resolve(L, args, "l")
        return fams.make_twisted(L, l, s), {"p": p, "m": m, "s": s, "l": l}
    tw = tws.build_tower(p, m, s)
    L = tw.L
    if args.family == "A":
        l = _resolve(L, args, "l")
        mu = parse_element(tw.F, args.mu) if args.mu is not None else None
        if mu is None:
            raise UsageError("family 'A' needs --mu")
        return fams.make_A(tw, l, mu), {"p": p, "m": m, "s": s, "l": l, "mu": mu}
    if args.family == "B":
        l, n, N = (_resolve(L, args, k) for k in ("l", "n", "N"))
        return fams.make_B(tw, l, n, N), {"p": p, "m": m, "s": s, "l": l, "n": n, "N": N}
    if args.family == "C":
        l, R = (_resolve(L, args, k) for k in ("l", "R"))
        return fams.make_C(tw, l, R), {"p": p, "m": m, "s": s, "l": l, "R": R}
    if args.family == "X":
        v = parse_element(L, args.v) if args.v is not None else fd.zero(L)
        l, n, N = (_resolve(L, args, k) for k in ("l", "n", "N"))
        return fams.make_X(tw, v, l, n, N), {"p": p, "m": m, "s": s, "v": v,
                                             "l": l, "n": n, "N": N}
    raise UsageError(f"unknown family {args.family!r}")


def _params_json(params: dict) -> dict:
    return {k: (list(v) if isinstance(v, tuple) else v) for k, v in params.items()}


def _emit(args, payload: str) -> None:
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(payload)
            if not payload.endswith("\n"):
                fh.write("\n")
    else:
        sys.stdout.write(payload)
        if not payload.endswith("\n"):
            sys.stdout.write("\n")


def _report(args, command: str, results: dict, t0: float, agreement: dict | None = None) -> dict:
    agreement = agreement or {}
    status = MISMATCH if "mismatch" in agreement.values() else OK
    return {
        "command": command,
        "arguments": {k: v for k, v in vars(args).items()
                      if k not in ("func", "out", "command") and v is not None},
        "results": results,
        "agreement": agreement,
        "seconds": round(time.time() - t0, 3),
        "exit": status,
    }


def cmd_construct(args) -> int:
    t0 = time.time()
    P, params = build_instance(args)
    rep = _report(args, "construct", {
        "provenance": P.provenance,
        "order": P.order,
        "dim": P.dim,
        "certified": bool(P.certificate and P.certificate.ok),
    }, t0)
    _emit(args, json.dumps(rep, indent=2))
    return rep["exit"]


def cmd_verify(args) -> int:
    t0 = time.time()
    P, params = build_instance(args)
    cert = sf.verify_presemifield(P)
    agreement = {"certificate": "match" if cert.ok else "mismatch"}
    rep = _report(args, "verify", {
        "provenance": P.provenance,
        "certificate": cert.to_json(),
    }, t0, agreement)
    _emit(args, json.dumps(rep, indent=2))
    return rep["exit"]


def cmd_nuclei(args) -> int:
    t0 = time.time()
    P, params = build_instance(args)
    e = parse_element(P.ambient, args.e) if args.e is not None else fd.one(P.ambient)
    S = sf.to_semifield(P, e)
    lin = sf.nuclei_linear(S)
    results = {"provenance": P.provenance, "linear": lin.to_json()}
    agreement = {}
    if P.order <= sf.BRUTE_LIMIT:
        brute = sf.nuclei_bruteforce(S)
        results["bruteforce"] = brute.to_json()
        agreement["engines"] = "match" if lin.same_as(brute) else "mismatch"
    else:
        agreement["engines"] = "not-applicable"
    rep = _report(args, "nuclei", results, t0, agreement)
    _emit(args, json.dumps(rep, indent=2))
    return rep["exit"]


def cmd_ganley(args) -> int:
    t0 = time.time()
    P, params = build_instance(args)
    e = parse_element(P.ambient, args.e) if args.e is not None else fd.one(P.ambient)
    S = sf.to_semifield(P, e)
    w = sf.ganley_semifield(S)
    v = sf.ganley_presemifield(P)
    agreement = {"routes": "match" if (w is None) == (v is None) else "mismatch"}
    results = {
        "provenance": P.provenance,
        "commutative": w is not None,
        "witness": list(w) if w is not None else None,
        "presemifield_witness": list(v) if v is not None else None,
    }
    if args.family == "C":
        tw = P.tower
        crit = th.c_comm_criterion(tw, params["l"], params["R"])
        results["criterion"] = crit
        agreement["criterion"] = "match" if crit == (w is not None) else "mismatch"
    elif args.family == "B":
        tw = P.tower
        crit, wit = th.b_comm_criterion(tw, params["l"], params["n"], params["N"])
        results["criterion"] = crit
        agreement["criterion"] = "match" if crit == (w is not None) else "mismatch"
    rep = _report(args, "ganley", results, t0, agreement)
    _emit(args, json.dumps(rep, indent=2))
    return rep["exit"]


def cmd_predict(args) -> int:
    t0 = time.time()
    P, params = build_instance(args)
    pred = th.predict_nuclei(args.family, params)
    S = sf.to_semifield(P, fd.one(P.ambient))
    lin = sf.nuclei_linear(S)
    chk = th.check_prediction(pred, lin)
    agreement = {"prediction": "match" if chk["status"] == "match" else "mismatch"}
    rep = _report(args, "predict", {
        "provenance": P.provenance,
        "prediction": pred.to_json(),
        "measured": lin.to_json(),
        "issues": chk["issues"],
    }, t0, agreement)
    _emit(args, json.dumps(rep, indent=2))
    return rep["exit"]


def cmd_census(args) -> int:
    t0 = time.time()
    if args.family not in cs.SWEEPS:
        raise UsageError(f"census needs --family from {sorted(cs.SWEEPS)}")
    kwargs = {"keep_records": True}
    if args.family in ("B", "C", "X"):
        kwargs["reduce"] = args.reduce
    elif args.reduce:
        raise UsageError(f"--reduce is not defined for family {args.family!r}")
    summary = cs.SWEEPS[args.family](args.p, args.m, args.s, **kwargs)
    if args.format == "csv":
        lines = ["family,p,m,s,params,commutative,nl,nm,nr,center,theorem"]
        for rec in summary.records:
            lines.append(",".join([
                rec["family"], str(args.p), str(args.m), str(args.s),
                json.dumps(rec["params"]).replace(",", ";"),
                str(rec["commutative"]).lower(),
                *map(str, rec["nuclei_dims"]), str(rec["center_dim"]),
                rec["theorem"],
            ]))
        payload = "\n".join(lines)
    else:
        objs = [json.dumps(rec) for rec in summary.records]
        objs.append(json.dumps(summary.to_json()))
        payload = "\n".join(objs)
    _emit(args, payload)
    return MISMATCH if summary.mismatches else OK


def cmd_export(args) -> int:
    P, params = build_instance(args)
    table = fams.star_table(P)
    if args.format == "csv":
        payload = "\n".join(",".join(map(str, row)) for row in table.tolist())
    else:
        payload = json.dumps({"family": args.family, "params": _params_json(params),
                              "order": P.order, "table": table.tolist()})
    _emit(args, payload)
    return OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="semifields",
        description="Construct, verify, and survey finite presemifield instances.")
    sub = ap.add_subparsers(dest="command", required=True)
    specs = {
        "construct": cmd_construct, "verify": cmd_verify, "nuclei": cmd_nuclei,
        "ganley": cmd_ganley, "predict": cmd_predict, "census": cmd_census,
        "export": cmd_export,
    }
    for name, func in specs.items():
        p = sub.add_parser(name)
        p.add_argument("--p", type=int, required=True)
        p.add_argument("--m", type=int, required=True)
        p.add_argument("--s", type=int, default=1)
        p.add_argument("--family", choices=FAMILIES, required=True)
        for flag in ("l", "n", "N", "R", "v", "mu", "e"):
            p.add_argument(f"--{flag}")
        p.add_argument("--l-order", type=int, dest="l_order")
        p.add_argument("--R-order", type=int, dest="R_order")
        p.add_argument("--reduce", action="store_true")
        p.add_argument("--threads", type=int, default=1,
                       help="reserved; evaluation is serial and deterministic")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--out", default=None)
        p.set_defaults(func=func)
    return ap


def run(argv: list[str]) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return USAGE_ERROR if exc.code not in (0, None) else OK
    if args.threads < 1:
        print("error: --threads must be >= 1", file=sys.stderr)
        return USAGE_ERROR
    if args.format == "csv" and args.command not in ("census", "export"):
        print("error: csv output is defined for census and export only", file=sys.stderr)
        return USAGE_ERROR
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except SemifieldError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return USAGE_ERROR


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
