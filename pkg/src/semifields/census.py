"""Exhaustive parameter sweeps with dual-engine classification.

Every sweep cross-checks at least two independent routes: the validity
predicate against brute-force zero-divisor search, the commutativity criteria
against the Ganley witness scan, the linear-algebra nuclei against the
brute-force nuclei, and the closed-form predictions against measurement.
Mismatches are collected, never silently dropped.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from . import families as fams
from . import fields as fd
from . import semifield as sf
from . import theory as th
from . import towers as tws
from .errors import InvalidMu, SemifieldError
from .fields import FieldCtx
from .towers import Tower


@dataclass
class SweepSummary:
    family: str
    p: int
    m: int
    s: int
    domain: int
    valid: int
    histogram: dict = field(default_factory=dict)
    mismatches: list = field(default_factory=list)
    records: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "type": "summary", "family": self.family,
            "p": self.p, "m": self.m, "s": self.s,
            "domain": self.domain, "valid": self.valid,
            "histogram": {" ".join(map(str, k)): v for k, v in sorted(self.histogram.items(), key=str)},
            "mismatches": self.mismatches,
        }


def _valid_l_indices(L: FieldCtx, s: int) -> list[int]:
    out = []
    for i in range(1, L.order):
        if not fd.in_power_subgroup(L, fd.neg(L, L.coeffs(i)), L.p**s - 1):
            out.append(i)
    return out


def _b_validity_mask(L: FieldCtx, s: int) -> np.ndarray:
    """mask[n_i, N_i]: the B validity polynomial is rootless."""
    q = L.order
    sL = s % L.m
    ts = np.arange(q, dtype=np.int64)
    tsig = np.asarray(L.frob_vec(sL, ts), dtype=np.int64)
    tsp1 = L.mul_vec(tsig, ts)
    mask = np.zeros((q, q), dtype=bool)
    ns = np.arange(1, q, dtype=np.int64)
    for N_i in range(1, q):
        invN = int(L._inv[N_i])
        vals = L.sub_vec(L.sub_vec(tsp1, tsig), L.scalar_mul_vec(invN, ts))
        targets = L._neg[L._inv[L.mul_vec(ns, np.int64(N_i))]]
        mask[1:, N_i] = ~np.isin(np.asarray(targets), np.asarray(vals))
    return mask


def _x_validity_cube(L: FieldCtx, s: int) -> np.ndarray:
    """cube[v_i, n_i, N_i]: the X validity polynomial is rootless."""
    q = L.order
    sL = s % L.m
    ts = np.arange(q, dtype=np.int64)
    tsig = np.asarray(L.frob_vec(sL, ts), dtype=np.int64)
    tsp1 = np.asarray(L.mul_vec(tsig, ts), dtype=np.int64)
    cube = np.zeros((q, q, q), dtype=bool)
    ns = np.arange(1, q, dtype=np.int64)
    for N_i in range(1, q):
        invN = int(L._inv[N_i])
        targets = np.asarray(L._neg[L._inv[L.mul_vec(ns, np.int64(N_i))]])
        for v_i in range(q):
            vals = L.sub_vec(tsp1, L.scalar_mul_vec(v_i, L.add_vec(
                tsig, L.scalar_mul_vec(invN, ts))))
            cube[v_i, 1:, N_i] = ~np.isin(targets, np.asarray(vals))
    return cube


def x_validity_vs_bruteforce(p: int, m: int, s: int) -> dict:
    """Full-domain equivalence: validity predicate == zero-divisor absence.

    Domain: v over L, (l, n, N) over L*.  Zero divisors are searched over all
    factor pairs whose second output coordinate vanishes; the first coordinate
    is linear in v, so each candidate pair rules out at most one v (or all of
    them when it is v-independent).
    """
    tw = tws.build_tower(p, m, s)
    L = tw.L
    q = L.order
    sL = s % m

    idx = np.arange(q, dtype=np.int64)
    a, b, c, d = (g.ravel() for g in np.meshgrid(idx, idx, idx, idx, indexing="ij"))
    second = np.asarray(L.add_vec(L.mul_vec(a, d), L.mul_vec(b, c)))
    keep = (second == 0) & ((a != 0) | (b != 0)) & ((c != 0) | (d != 0))
    a, b, c, d = a[keep], b[keep], c[keep], d[keep]
    asig, bsig = L.frob_vec(sL, a), L.frob_vec(sL, b)
    csig, dsig = L.frob_vec(sL, c), L.frob_vec(sL, d)
    D1 = np.asarray(L.mul_vec(a, csig))
    D2 = np.asarray(L.mul_vec(b, dsig))
    D3 = np.asarray(L.mul_vec(asig, c))
    D4 = np.asarray(L.mul_vec(bsig, d))
    D5 = np.asarray(L.mul_vec(a, dsig))
    D6 = np.asarray(L.mul_vec(b, csig))
    D7 = np.asarray(L.mul_vec(asig, d))
    D8 = np.asarray(L.mul_vec(bsig, c))

    lmask = np.zeros(q, dtype=bool)
    lmask[_valid_l_indices(L, s)] = True
    cube = _x_validity_cube(L, s)

    mismatches = []
    domain = q * (q - 1) ** 3
    valid_total = 0
    for n_i in range(1, q):
        for N_i in range(1, q):
            nN = int(L.mul_vec(n_i, N_i))
            E1 = np.asarray(L.sub_vec(D1, L.scalar_mul_vec(nN, D2)))
            E2 = np.asarray(L.sub_vec(D3, L.scalar_mul_vec(nN, D4)))
            E3 = np.asarray(L.sub_vec(L.scalar_mul_vec(N_i, D5), D6))
            E4 = np.asarray(L.sub_vec(D7, L.scalar_mul_vec(N_i, D8)))
            polyfree = cube[:, n_i, N_i]
            for l_i in range(1, q):
                G1 = np.asarray(L.add_vec(E1, L.scalar_mul_vec(l_i, E2)))
                G2 = np.asarray(L.add_vec(E3, L.scalar_mul_vec(l_i, E4)))
                bad_v = np.zeros(q, dtype=bool)
                flat = (G2 == 0)
                if (flat & (G1 == 0)).any():
                    bad_v[:] = True
                else:
                    g2 = G2[~flat]
                    hits = L.mul_vec(L._neg[G1[~flat]],
                                     L._inv[L.scalar_mul_vec(n_i, g2)])
                    bad_v[np.asarray(hits)] = True
                predicate = polyfree & lmask[l_i]
                valid_total += int(predicate.sum())
                if (predicate != ~bad_v).any():
                    for v_i in np.nonzero(predicate != ~bad_v)[0]:
                        mismatches.append({"v": int(v_i), "l": l_i, "n": n_i, "N": N_i,
                                           "predicate": bool(predicate[v_i]),
                                           "zero_divisor": bool(bad_v[v_i])})
    return {"p": p, "m": m, "s": s, "domain": domain, "valid": valid_total,
            "mismatches": mismatches}


def _classify(family: str, params: dict, P) -> tuple[dict, list]:
    """Dual-route classification of one instance; returns (record, mismatch notes)."""
    S = sf.to_semifield(P, fd.one(P.ambient))
    rep = sf.nuclei_linear(S)
    notes = []
    agree = {}
    if P.order <= sf.BRUTE_LIMIT:
        rb = sf.nuclei_bruteforce(S)
        agree["nuclei_engines"] = "match" if rep.same_as(rb) else "mismatch"
    else:
        agree["nuclei_engines"] = "not-applicable"
    w = sf.ganley_semifield(S)
    wp = sf.ganley_presemifield(P)
    agree["ganley_routes"] = "match" if (w is None) == (wp is None) else "mismatch"
    commutative = w is not None

    pred = th.predict_nuclei(family, params)
    chk = th.check_prediction(pred, rep)
    agree["prediction"] = "match" if chk["status"] == "match" else "mismatch"
    if chk["issues"]:
        notes.extend(f"{family}{_short(params)}: {t}" for t in chk["issues"])

    if pred.commutative is not None:
        agree["criterion_vs_ganley"] = "match" if pred.commutative == commutative else "mismatch"
    else:
        agree["criterion_vs_ganley"] = "not-applicable"

    for k, v in agree.items():
        if v == "mismatch":
            notes.append(f"{family}{_short(params)}: {k} mismatch")
    dims = (rep.dims["left"], rep.dims["middle"], rep.dims["right"])
    record = {"type": "instance", "family": family,
              "params": {k: (list(v) if isinstance(v, tuple) else v) for k, v in params.items()},
              "commutative": commutative, "nuclei_dims": list(dims),
              "center_dim": rep.dims["center"], "theorem": pred.theorem,
              "agreement": agree}
    return record, notes


def _short(params: dict) -> str:
    bits = [f"{k}={v}" for k, v in params.items() if k not in ("p", "m", "s")]
    return "(p={p},m={m},s={s},{rest})".format(rest=",".join(bits), **params)


def _aggregate(summary: SweepSummary, record: dict, notes: list, keep_records: bool) -> None:
    summary.valid += 1
    key = (record["commutative"], tuple(record["nuclei_dims"]), record["theorem"])
    summary.histogram[key] = summary.histogram.get(key, 0) + 1
    summary.mismatches.extend(notes)
    if keep_records:
        summary.records.append(record)


def _canon_map(L: FieldCtx, exponent: int) -> np.ndarray:
    """canon[x] = smallest index in the coset x * (subgroup of exponent-th powers)."""
    q = L.order
    xs = np.arange(1, q, dtype=np.int64)
    sub = np.unique(np.asarray(L.pow_vec(xs, exponent)))
    canon = np.zeros(q, dtype=np.int64)
    for i in range(1, q):
        canon[i] = int(np.min(L.mul_vec(np.int64(i), sub)))
    return canon


def sweep_C(p: int, m: int, s: int, reduce: bool = False,
            keep_records: bool = False) -> SweepSummary:
    tw = tws.build_tower(p, m, s)
    L = tw.L
    q = L.order
    valid_l = _valid_l_indices(L, s)
    valid_R = [i for i in range(1, q)
               if not fd.in_power_subgroup(L, L.coeffs(i), p**s + 1)]
    summary = SweepSummary("C", p, m, s, domain=(q - 1) ** 2, valid=0)
    pairs = [(li, ri) for li in valid_l for ri in valid_R]
    if reduce:
        cl = _canon_map(L, p**s - 1)
        cr = _canon_map(L, p**s + 1)
        pairs = sorted({(int(cl[li]), int(cr[ri])) for li, ri in pairs})
    for li, ri in pairs:
        l, R = L.coeffs(li), L.coeffs(ri)
        P = fams.make_C(tw, l, R)
        rec, notes = _classify("C", {"p": p, "m": m, "s": s, "l": l, "R": R}, P)
        _aggregate(summary, rec, notes, keep_records)
    return summary


def sweep_B(p: int, m: int, s: int, reduce: bool = False,
            keep_records: bool = False) -> SweepSummary:
    tw = tws.build_tower(p, m, s)
    L = tw.L
    q = L.order
    valid_l = _valid_l_indices(L, s)
    mask = _b_validity_mask(L, s)
    summary = SweepSummary("B", p, m, s, domain=(q - 1) ** 3, valid=0)
    if reduce:
        cl = _canon_map(L, p**s - 1)
        valid_l = sorted({int(cl[li]) for li in valid_l})
    for li in valid_l:
        l = L.coeffs(li)
        for n_i, N_i in zip(*[g.tolist() for g in np.nonzero(mask)]):
            n, N = L.coeffs(n_i), L.coeffs(N_i)
            P = fams.make_B(tw, l, n, N)
            rec, notes = _classify("B", {"p": p, "m": m, "s": s, "l": l, "n": n, "N": N}, P)
            _aggregate(summary, rec, notes, keep_records)
    return summary


def sweep_X(p: int, m: int, s: int, reduce: bool = False,
            keep_records: bool = False) -> SweepSummary:
    """Instance-level X sweep; sized for small orders (the m=2 census)."""
    tw = tws.build_tower(p, m, s)
    L = tw.L
    q = L.order
    sL = s % m
    valid_l = set(_valid_l_indices(L, s))
    cube = _x_validity_cube(L, s)
    summary = SweepSummary("X", p, m, s, domain=q * (q - 1) ** 3, valid=0)
    tuples = [(v_i, l_i, n_i, N_i)
              for l_i in sorted(valid_l)
              for v_i, n_i, N_i in zip(*[g.tolist() for g in np.nonzero(cube)])]
    if reduce:
        units = np.arange(1, q, dtype=np.int64)
        cl = _canon_map(L, p**s - 1)
        seen = set()
        reduced = []
        for v_i, l_i, n_i, N_i in tuples:
            vs = np.asarray(L.mul_vec(np.int64(v_i), L._inv[units]))
            ns = np.asarray(L.mul_vec(np.int64(n_i), L.mul_vec(units, units)))
            Ns = np.asarray(L.mul_vec(np.int64(N_i), L.mul_vec(
                L.frob_vec(sL, units), L._inv[units])))
            key = (int(cl[l_i]),) + min(zip(vs.tolist(), ns.tolist(), Ns.tolist()))
            if key in seen:
                continue
            seen.add(key)
            reduced.append((v_i, l_i, n_i, N_i))
        tuples = reduced
    for v_i, l_i, n_i, N_i in tuples:
        v, l, n, N = (L.coeffs(i) for i in (v_i, l_i, n_i, N_i))
        P = fams.make_X(tw, v, l, n, N)
        rec, notes = _classify("X", {"p": p, "m": m, "s": s, "v": v, "l": l, "n": n, "N": N}, P)
        _aggregate(summary, rec, notes, keep_records)
    return summary


def sweep_A(p: int, m: int, s: int, mu_limit: int = 3,
            keep_records: bool = False) -> SweepSummary:
    tw = tws.build_tower(p, m, s)
    L, F = tw.L, tw.F
    valid_l = _valid_l_indices(L, s)
    mus = []
    for i in range(1, F.order):
        try:
            fams.make_A(tw, L.coeffs(valid_l[0]), F.coeffs(i))
        except InvalidMu:
            continue
        mus.append(i)
        if len(mus) >= mu_limit:
            break
    summary = SweepSummary("A", p, m, s, domain=(L.order - 1) * (F.order - 1), valid=0)
    for li in valid_l:
        for mi in mus:
            l, mu = L.coeffs(li), F.coeffs(mi)
            P = fams.make_A(tw, l, mu)
            rec, notes = _classify("A", {"p": p, "m": m, "s": s, "l": l, "mu": mu}, P)
            _aggregate(summary, rec, notes, keep_records)
    return summary


def sweep_twisted(p: int, m: int, s: int, keep_records: bool = False) -> SweepSummary:
    L = fd.build_field(p, m)
    summary = SweepSummary("twisted", p, m, s, domain=L.order - 1, valid=0)
    for li in _valid_l_indices(L, s):
        l = L.coeffs(li)
        P = fams.make_twisted(L, l, s)
        rec, notes = _classify("twisted", {"p": p, "m": m, "s": s, "l": l}, P)
        _aggregate(summary, rec, notes, keep_records)
    return summary


SWEEPS = {"B": sweep_B, "C": sweep_C, "X": sweep_X, "A": sweep_A, "twisted": sweep_twisted}


def theorem_equivalence_sweep(p: int, m: int, s: int) -> dict:
    """The full dual-route audit at one (p, m, s): returns mismatch lists per part."""
    xeq = x_validity_vs_bruteforce(p, m, s)
    out = {"x_validity": xeq["mismatches"]}
    counts = {"x_domain": xeq["domain"], "x_valid": xeq["valid"]}
    families = ["C", "B", "A", "twisted"]
    if m == 2:
        families.append("X")  # instance-level X classification only at desk size
    for fam_name in families:
        kwargs = {"mu_limit": 3} if fam_name == "A" else {}
        summ = SWEEPS[fam_name](p, m, s, **kwargs)
        out[fam_name] = summ.mismatches
        counts[fam_name] = summ.valid
    out["counts"] = counts
    return out
