"""Closed-form predictions checked against measured ground truth.

Number-theoretic facts about the twisting exponent, the two commutativity
criteria for the coordinate families, canonical commutative representatives, a
catalog of parametric commutative subfamilies, and per-branch nuclei
predictions.  Every closed form here is double-checked against a direct
computation somewhere: either inside the function (LemmaMismatch on
disagreement) or by the test suite via the semifield module's measurements.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import fields as fd
from . import towers as tws
from .errors import (
    CharTwoUnsupported,
    InvalidParams,
    LemmaMismatch,
    SigmaOutOfRange,
    UnsupportedBranch,
)
from .families import _poly_root_scan
from .fields import Element, FieldCtx
from .linalg import kernel_basis
from .towers import Tower


def _v2(k: int) -> int:
    return (k & -k).bit_length() - 1


def _power_subgroup_set(L: FieldCtx, exponent_map) -> np.ndarray:
    xs = np.arange(1, L.order, dtype=np.int64)
    return np.unique(np.asarray(exponent_map(xs), dtype=np.int64))


def number_facts(p: int, m: int, s: int) -> dict:
    """gcd/2-adic identities for the twist, each closed form re-derived by enumeration."""
    if p == 2:
        raise CharTwoUnsupported("these identities are stated for odd p")
    if not 1 <= s < m:
        raise SigmaOutOfRange(f"s={s} outside [1, {m})")
    d = math.gcd(s, m)
    v2s, v2m = _v2(s), _v2(m)

    gcd_plus_closed = 2 if v2s != v2m else p**d + 1
    gcd_plus = math.gcd(p**m + 1, p**s + 1)
    if gcd_plus_closed != gcd_plus:
        raise LemmaMismatch(f"gcd(p^m+1,p^s+1): closed {gcd_plus_closed} != direct {gcd_plus}")

    branch_equal = _v2(d) == v2m  # v2(d) = min(v2(s), v2(m))
    gcd_2s_m_closed = d if branch_equal else 2 * d
    if gcd_2s_m_closed != math.gcd(2 * s, m):
        raise LemmaMismatch("gcd(2s, m) closed form disagrees")
    gcd_cross_closed = 2 if branch_equal else p**d + 1
    gcd_cross = math.gcd(p**m - 1, p**s + 1)
    if gcd_cross_closed != gcd_cross:
        raise LemmaMismatch(f"gcd(p^m-1,p^s+1): closed {gcd_cross_closed} != direct {gcd_cross}")
    index_closed = 1 if branch_equal else 2

    L = fd.build_field(p, m)
    sL, s2L = s % m, (2 * s) % m
    sub_minus = _power_subgroup_set(L, lambda xs: L.mul_vec(L.frob_vec(sL, xs), L._inv[xs]))
    sub_plus = _power_subgroup_set(L, lambda xs: L.mul_vec(L.frob_vec(sL, xs), xs))
    sub_sq = _power_subgroup_set(L, lambda xs: L.mul_vec(L.frob_vec(s2L, xs), L._inv[xs]))
    inter = np.intersect1d(sub_minus, sub_plus)
    if not np.isin(sub_sq, inter).all():
        raise LemmaMismatch("sigma^2-powers are not inside the intersection subgroup")
    index_direct = inter.size // sub_sq.size
    if index_closed != index_direct:
        raise LemmaMismatch(f"intersection index: closed {index_closed} != direct {index_direct}")

    n = canonical_nonsquare(L)
    half = fd.pow_element(L, n, (p**s - 1) // 2)
    mask = np.zeros(L.order, dtype=bool)
    mask[sub_minus] = True
    neg_half_direct = bool(mask[L.idx(fd.neg(L, half))])
    half_direct = bool(mask[L.idx(half)])
    neg_half_closed = (s // d) % 2 == 1 and (m // d) % 2 == 1
    half_closed = (s // d) % 2 == 0
    if neg_half_direct != neg_half_closed or half_direct != half_closed:
        raise LemmaMismatch("half-power residue flags disagree with the parity form")

    return {
        "p": p, "m": m, "s": s, "d": d,
        "v2_s": v2s, "v2_m": v2m,
        "gcd_pm_plus_ps_plus": gcd_plus,
        "gcd_2s_m": gcd_2s_m_closed,
        "gcd_pm_minus_ps_plus": gcd_cross,
        "index_sigma2_in_intersection": index_closed,
        "neg_half_power_is_sigma_minus_power": neg_half_closed,
        "half_power_is_sigma_minus_power": half_closed,
    }


def canonical_nonsquare(L: FieldCtx) -> Element:
    """Lex-smallest non-square of L* (odd characteristic)."""
    for i in range(1, L.order):
        x = L.coeffs(i)
        if not fd.in_power_subgroup(L, x, 2):
            return x
    raise InvalidParams("no non-square found (is the characteristic odd?)")


# -- validity mirrors (cheap, no table construction) ---------------------------


def _require_c_valid(tw: Tower, l: Element, R: Element) -> None:
    L = tw.L
    if tw.p == 2:
        raise InvalidParams("odd characteristic required")
    if not 0 < tw.s < tw.m:
        raise InvalidParams(f"s={tw.s} outside (0, {tw.m})")
    if L.idx(l) == 0 or L.idx(R) == 0:
        raise InvalidParams("l and R must be nonzero")
    if fd.in_power_subgroup(L, fd.neg(L, l), tw.p**tw.s - 1):
        raise InvalidParams("-l is a (sigma-1)-power")
    if fd.in_power_subgroup(L, R, tw.p**tw.s + 1):
        raise InvalidParams("R is a (sigma+1)-power")


def _require_b_valid(tw: Tower, l: Element, n: Element, N: Element) -> None:
    L = tw.L
    if tw.p == 2:
        raise InvalidParams("odd characteristic required")
    if not 0 < tw.s < tw.m:
        raise InvalidParams(f"s={tw.s} outside (0, {tw.m})")
    if L.idx(l) == 0 or L.idx(n) == 0 or L.idx(N) == 0:
        raise InvalidParams("l, n, N must be nonzero")
    if fd.in_power_subgroup(L, fd.neg(L, l), tw.p**tw.s - 1):
        raise InvalidParams("-l is a (sigma-1)-power")
    c2 = int(L._neg[L.one_idx])
    c1 = int(L._neg[L._inv[L.idx(N)]])
    c0 = int(L._inv[L.mul_vec(L.idx(n), L.idx(N))])
    if _poly_root_scan(L, [c0, c1, c2], tw.s):
        raise InvalidParams("the validity polynomial has a root")


# -- commutativity criteria ----------------------------------------------------


def c_comm_criterion(tw: Tower, l: Element, R: Element) -> bool:
    """Subgroup-membership criterion deciding isotopy to a commutative presemifield."""
    _require_c_valid(tw, l, R)
    L, s = tw.L, tw.s
    lsp1 = fd.mul(L, fd.frobenius(L, l, s % tw.m), l)
    rsm1 = fd.mul(L, fd.frobenius(L, R, s % tw.m), fd.inv(L, R))
    return fd.in_power_subgroup(L, fd.mul(L, lsp1, rsm1), tw.p ** (2 * s) - 1)


def _b_comm_equations(tw: Tower, l_i: int, n_i: int, N_i: int, v0, v1):
    """Values (E1, E2) that must both vanish for the commutativity witness pair."""
    L = tw.L
    sL = tw.s % tw.m
    ln = int(L.mul_vec(l_i, n_i))
    nN = int(L.mul_vec(n_i, N_i))
    lnN = int(L.mul_vec(ln, N_i))
    v0s, v1s = L.frob_vec(sL, v0), L.frob_vec(sL, v1)
    f = L.add_vec(L.scalar_mul_vec(n_i, v0),
                  L.sub_vec(L.scalar_mul_vec(ln, v0s), L.scalar_mul_vec(lnN, v1s)))
    e1 = L.sub_vec(L.scalar_mul_vec(l_i, L.frob_vec(sL, f)),
                   L.add_vec(L.scalar_mul_vec(nN, v0),
                             L.sub_vec(L.scalar_mul_vec(lnN, v0s), L.scalar_mul_vec(nN, v1))))
    e2 = L.sub_vec(v0, L.add_vec(L.scalar_mul_vec(l_i, v0s),
                                 L.sub_vec(L.scalar_mul_vec(n_i, v1), L.scalar_mul_vec(lnN, v1s))))
    return np.asarray(e1), np.asarray(e2)


def b_comm_criterion(tw: Tower, l: Element, n: Element, N: Element) -> tuple[bool, tuple[Element, Element] | None]:
    """Existence of the witness pair (v0, v1) != 0; kernel solve, brute cross-check when small."""
    _require_b_valid(tw, l, n, N)
    L = tw.L
    l_i, n_i, N_i = L.idx(l), L.idx(n), L.idx(N)
    sL = tw.s % tw.m

    dim = L.m
    basis = np.asarray(L._weights, dtype=np.int64)
    zeros = np.zeros(dim, dtype=np.int64)
    cols = []
    for v0, v1 in ((basis, zeros), (zeros, basis)):
        e1, e2 = _b_comm_equations(tw, l_i, n_i, N_i, v0, v1)
        dig = L._dig.astype(np.int64)
        cols.append(np.concatenate([dig[e1], dig[e2]], axis=1))
    mat = np.concatenate(cols, axis=0).T % L.p  # rows: 2m equation coords, cols: 2m unknowns
    ker = kernel_basis(mat, L.p)

    witness = None
    if len(ker):
        vec = ker[0]
        v0 = tuple(int(c) for c in vec[:dim])
        v1 = tuple(int(c) for c in vec[dim:])
        e1, e2 = _b_comm_equations(tw, l_i, n_i, N_i,
                                   np.asarray(L.idx(v0)), np.asarray(L.idx(v1)))
        assert int(e1) == 0 and int(e2) == 0, "kernel vector fails the defining equations"
        witness = (v0, v1)
    found = witness is not None

    # closed-form sufficient cases must never contradict the solve
    nsig = fd.frobenius(L, n, sL)
    nsig1 = fd.mul(L, nsig, fd.inv(L, n))  # n^(sigma-1)
    short_i = fd.mul(L, N, N) == nsig1 and fd.in_power_subgroup(
        L, fd.mul(L, l, N), tw.p**tw.s - 1)
    short_ii = N == nsig1 and fd.in_power_subgroup(L, l, tw.p**tw.s - 1)
    if (short_i or short_ii) and not found:
        raise LemmaMismatch("closed-form commutative case but no witness pair found")

    if L.order <= 27:
        grid = np.arange(L.order, dtype=np.int64)
        v0g, v1g = np.meshgrid(grid, grid, indexing="ij")
        e1, e2 = _b_comm_equations(tw, l_i, n_i, N_i, v0g.ravel(), v1g.ravel())
        sols = (e1 == 0) & (e2 == 0)
        sols[0] = False  # (0,0) is always a solution of the homogeneous system
        if bool(sols.any()) != found:
            raise LemmaMismatch("kernel solve disagrees with exhaustive witness search")
    return found, witness


# -- canonical commutative representatives and the parametric catalog ----------


def classify_commutative_C(p: int, m: int, s: int) -> list[dict]:
    """The canonical commutative representative behind (p, m, s), folding s > m/2 down."""
    if p == 2:
        raise CharTwoUnsupported("odd characteristic only")
    if not 1 <= s < m:
        raise SigmaOutOfRange(f"s={s} outside [1, {m})")
    s0 = min(s, m - s)
    tw = tws.build_tower(p, m, s0)
    L = tw.L
    d = math.gcd(s0, m)
    if (m // d) % 2 == 1:
        # K_1 non-squares stay non-squares here; the smallest one is the representative R
        R = None
        for i in range(1, L.order):
            x = L.coeffs(i)
            if fd.frobenius(L, x, d) == x and not fd.in_power_subgroup(L, x, 2):
                R = x
                break
        rec = {"subfamily": "i", "l": fd.one(L), "R": R}
    else:
        rec = {"subfamily": "ii", "l": fd.inv(L, tw.N), "R": fd.mul(L, tw.n, tw.N)}
    rec.update({"p": p, "m": m, "s": s0, "folded": s0 != s, "d": d,
                "label": f"C[{p},{m},{s0}]"})
    return [rec]


def commutative_catalog(p: int, m: int, s: int) -> list[dict]:
    """Parametric commutative B-instances: four subfamilies plus guaranteed shortcuts.

    Records carry the evaluated side condition and validity-polynomial scan; entries
    flagged guaranteed=True satisfy a closed-form criterion that implies the scan.
    """
    if p == 2:
        raise CharTwoUnsupported("odd characteristic only")
    tw = tws.build_tower(p, m, s)
    L = tw.L
    d = math.gcd(s, m)
    md_even = (m // d) % 2 == 0
    sd_even = (s // d) % 2 == 0
    half = (p**s - 1) // 2
    inv_N0 = fd.inv(L, tw.N)  # N0 = canonical omega^(sigma-1)
    one = fd.one(L)

    def b_poly_ok(n: Element, N: Element) -> bool:
        c2 = int(L._neg[L.one_idx])
        c1 = int(L._neg[L._inv[L.idx(N)]])
        c0 = int(L._inv[L.mul_vec(L.idx(n), L.idx(N))])
        return not _poly_root_scan(L, [c0, c1, c2], s)

    def in_K1(x: Element) -> bool:
        return fd.frobenius(L, x, d) == x

    nonsquares = [L.coeffs(i) for i in range(1, L.order)
                  if not fd.in_power_subgroup(L, L.coeffs(i), 2)]
    out = []
    if md_even or sd_even:
        for n in nonsquares:
            N = fd.pow_element(L, n, half)
            out.append({"subfamily": 1, "l": inv_N0, "n": n, "N": N,
                        "side_ok": True, "poly_ok": b_poly_ok(n, N), "guaranteed": False})
    if not sd_even:
        l2 = fd.neg(L, inv_N0)
        for n in nonsquares:
            N = fd.neg(L, fd.pow_element(L, n, half))
            out.append({"subfamily": 2, "l": l2, "n": n, "N": N,
                        "side_ok": True, "poly_ok": b_poly_ok(n, N), "guaranteed": False})
        if not md_even:
            # alternative coordinates with the quadratic defect inside K_1: always valid
            k1_nonsquares = [x for x in nonsquares if in_K1(x)]
            seen = set()
            for w2 in k1_nonsquares:
                for v_i in range(1, L.order):
                    v = L.coeffs(v_i)
                    if not in_K1(v):
                        continue
                    disc = fd.sub(L, fd.mul(L, v, v), fd.inv(L, w2))
                    if L.idx(disc) == 0 or fd.in_power_subgroup(L, disc, 2):
                        continue
                    n = fd.mul(L, fd.mul(L, v, v), w2)
                    if n in seen:
                        continue
                    seen.add(n)
                    out.append({"subfamily": 2, "l": one, "n": n, "N": one,
                                "side_ok": True, "poly_ok": b_poly_ok(n, one),
                                "guaranteed": True})
    if not md_even:
        for v_i in range(1, L.order):
            v = L.coeffs(v_i)
            n = fd.mul(L, v, v)
            N = fd.mul(L, fd.frobenius(L, v, s % m), fd.inv(L, v))
            disc = fd.sub(L, n, one)
            guaranteed = (in_K1(v) and L.idx(disc) != 0
                          and not fd.in_power_subgroup(L, disc, 2))
            out.append({"subfamily": 3, "l": one, "n": n, "N": N,
                        "side_ok": True, "poly_ok": b_poly_ok(n, N), "guaranteed": guaranteed})
        for n_i in range(1, L.order):
            n = L.coeffs(n_i)
            N = fd.mul(L, fd.frobenius(L, n, s % m), fd.inv(L, n))
            if n == one:
                guaranteed = False
            else:
                disc = fd.sub(L, one, fd.inv(L, n))
                guaranteed = (in_K1(n) and L.idx(disc) != 0
                              and not fd.in_power_subgroup(L, disc, 2))
            out.append({"subfamily": 4, "l": one, "n": n, "N": N,
                        "side_ok": True, "poly_ok": b_poly_ok(n, N), "guaranteed": guaranteed})
    return out


# -- nuclei predictions --------------------------------------------------------


@dataclass(eq=False)
class WKernelSpec:
    """The twisting-kernel data deciding the middle nucleus on the generic branch."""

    alpha0: Element
    alpha1: Element
    alpha2: Element
    coeffs: tuple[Element, Element, Element, Element]
    matrix: np.ndarray
    kernel_dim_prime: int
    kernel_dim_K1: int


def w_kernel(tw: Tower, n: Element, N: Element) -> WKernelSpec:
    """Kernel of t -> (1+n a0) t + (1+n a1 + nN a0^s) t^s + (n a2 + nN a1^s) t^s2 + nN a2^s t^s3."""
    L = tw.L
    sL = tw.s % tw.m
    nsig = fd.frobenius(L, n, sL)
    n2N2 = fd.mul(L, fd.mul(L, n, n), fd.mul(L, N, N))
    nN = fd.mul(L, n, N)
    denom = fd.mul(L, n, fd.sub(L, fd.mul(L, nN, N), nsig))  # n(nN^2 - n^sigma)
    if L.idx(denom) == 0:
        raise InvalidParams("degenerate denominator: this branch needs N^2 != n^(sigma-1)")
    inv_den = fd.inv(L, denom)
    a0 = fd.mul(L, fd.sub(L, nsig, n2N2), inv_den)
    num1 = fd.sub(L, fd.add(L, nsig, n2N2),
                  fd.add(L, nN, fd.mul(L, fd.mul(L, nsig, n), N)))
    a1 = fd.mul(L, num1, inv_den)
    a2 = fd.mul(L, fd.mul(L, nN, fd.sub(L, nsig, fd.one(L))), inv_den)

    c_id = fd.add(L, fd.one(L), fd.mul(L, n, a0))
    c_s = fd.add(L, fd.one(L), fd.add(L, fd.mul(L, n, a1),
                                      fd.mul(L, nN, fd.frobenius(L, a0, sL))))
    c_s2 = fd.add(L, fd.mul(L, n, a2), fd.mul(L, nN, fd.frobenius(L, a1, sL)))
    c_s3 = fd.mul(L, nN, fd.frobenius(L, a2, sL))

    basis = np.asarray(L._weights, dtype=np.int64)
    img = np.zeros(basis.shape, dtype=np.int64)
    for c, k in ((c_id, 0), (c_s, sL), (c_s2, (2 * tw.s) % tw.m), (c_s3, (3 * tw.s) % tw.m)):
        img = L.add_vec(img, L.scalar_mul_vec(L.idx(c), L.frob_vec(k, basis)))
    mat = L._dig[np.asarray(img, dtype=np.int64)].astype(np.int64).T
    ker = kernel_basis(mat, L.p)
    d = math.gcd(tw.s, tw.m)
    kp = len(ker)
    assert kp % d == 0, "kernel must be a K_1-subspace"
    return WKernelSpec(a0, a1, a2, (c_id, c_s, c_s2, c_s3), mat, kp, kp // d)


@dataclass(eq=False)
class Prediction:
    family: str
    params: dict
    theorem: str
    nl_dim: int | None
    nr_dim: int | None
    nm_mode: str  # exact | interval | containment
    nm_dim: int | None = None
    nm_range: tuple[int, int] | None = None
    center_dim: int | None = None
    lower_bounds: dict = field(default_factory=dict)
    commutative: bool | None = None
    conditions: dict = field(default_factory=dict)
    nm_members: np.ndarray | None = None
    nm_contains: np.ndarray | None = None
    nucleus_members: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "params": {k: (list(v) if isinstance(v, tuple) else v) for k, v in self.params.items()},
            "theorem": self.theorem,
            "nl_dim": self.nl_dim,
            "nr_dim": self.nr_dim,
            "nm": {"mode": self.nm_mode, "dim": self.nm_dim, "range": self.nm_range},
            "center_dim": self.center_dim,
            "lower_bounds": dict(self.lower_bounds),
            "commutative": self.commutative,
            "conditions": dict(self.conditions),
        }


def subfield_members(ctx: FieldCtx, e: int) -> np.ndarray:
    """Indices of the order-p^e subfield: fixed points of the e-fold Frobenius."""
    assert ctx.m % e == 0
    xs = np.arange(ctx.order, dtype=np.int64)
    return np.sort(xs[np.asarray(ctx.frob_vec(e % ctx.m, xs)) == xs])


def _k1_span(tw: Tower, gens: list[int], d: int) -> np.ndarray:
    """All K_1-linear combinations of the given ambient elements (indices)."""
    F = tw.F
    k1 = subfield_members(F, d)
    members = np.array([0], dtype=np.int64)
    for g in gens:
        scaled = F.mul_vec(k1, np.full(k1.shape, g, dtype=np.int64))
        members = np.unique(F.add_vec(members[:, None], scaled[None, :]).ravel())
    return np.sort(members)


def predict_nuclei(family: str, params: dict) -> Prediction:
    """Branch-resolved nuclei prediction; exact where the theory is, guarded elsewhere."""
    p, m, s = params["p"], params["m"], params["s"]
    if family == "twisted":
        L = fd.build_field(p, m)
        d = math.gcd(s, m)
        d2 = math.gcd(2 * s, m)
        if (2 * s) % m == 0:
            return Prediction("twisted", params, "twist-square-trivial-field",
                              m, m, "exact", nm_dim=m, center_dim=m,
                              nucleus_members={"left": subfield_members(L, m)})
        pred = Prediction("twisted", params, "twist-fixed-fields", d, d, "exact",
                          nm_dim=d2, center_dim=d)
        pred.nucleus_members = {
            "left": subfield_members(L, d), "right": subfield_members(L, d),
            "middle": subfield_members(L, d2), "center": subfield_members(L, d),
        }
        return pred

    if family == "A":
        tw = tws.build_tower(p, m, s)
        d = math.gcd(s, m)
        e2 = math.gcd(math.gcd(2 * s, m + s), 2 * m)
        pred = Prediction("A", params, "scalar-subfield-containment", None, None,
                          "containment",
                          lower_bounds={"left": d, "right": d, "middle": e2, "center": d})
        pred.nucleus_members = {
            "left": subfield_members(tw.F, d), "right": subfield_members(tw.F, d),
            "middle": subfield_members(tw.F, e2), "center": subfield_members(tw.F, d),
        }
        return pred

    if family not in ("B", "C", "X"):
        raise UnsupportedBranch(f"no predictions for family {family!r}")
    if p == 2:
        raise UnsupportedBranch("no characteristic-2 predictions for the coordinate families")

    tw = tws.build_tower(p, m, s)
    L = tw.L
    d = math.gcd(s, m)
    d2 = math.gcd(2 * s, m)
    sL = s % m

    if family == "X":
        v = params["v"]
        if L.idx(v) == 0:
            return predict_nuclei("C", {**{k: params[k] for k in ("p", "m", "s", "l")},
                                        "R": fd.neg(L, fd.mul(L, params["n"], params["N"]))})
        # scale isotopy onto the v = 1 member preserves the nucleus dimensions,
        # but moves the middle nucleus around; only the scalar subfield claims
        # (left = right = center = K_1 verbatim) survive the change of coordinates
        n2 = fd.mul(L, params["n"], fd.mul(L, v, v))
        N2 = fd.mul(L, params["N"], fd.mul(L, fd.frobenius(L, v, sL), fd.inv(L, v)))
        inner = predict_nuclei("B", {"p": p, "m": m, "s": s, "l": params["l"], "n": n2, "N": N2})
        inner.family = "X"
        inner.params = params
        inner.theorem = "via-unit-scale-isotope: " + inner.theorem
        k1 = subfield_members(tw.F, d)
        inner.nm_members = None
        inner.nm_contains = k1
        inner.nucleus_members = {"left": k1, "right": k1, "center": k1}
        return inner

    k1_members = subfield_members(tw.F, d)
    base = dict(nl_dim=d, nr_dim=d, center_dim=d)

    if family == "C":
        l, R = params["l"], params["R"]
        commutative = c_comm_criterion(tw, l, R)
        if (2 * s) % m == 0:
            pred = Prediction("C", params, "square-twist-identity", **base,
                              nm_mode="exact", nm_dim=m, commutative=commutative)
            pred.nm_members = subfield_members(tw.F, m)
        else:
            orders = [p**d - 1, (p**m - 1) // math.gcd(p**s + 1, p**m - 1)]
            cond = fd.in_product_subgroup(L, R, orders)
            if cond:
                pred = Prediction("C", params, "middle-quadratic-over-twist-square", **base,
                                  nm_mode="exact", nm_dim=2 * d2, commutative=commutative,
                                  conditions={"R_in_K1_times_norms": True})
                pred.nm_contains = subfield_members(tw.F, d2)
            else:
                pred = Prediction("C", params, "middle-is-twist-square-field", **base,
                                  nm_mode="exact", nm_dim=d2, commutative=commutative,
                                  conditions={"R_in_K1_times_norms": False})
                pred.nm_members = subfield_members(tw.F, d2)
        pred.nucleus_members.update({"left": k1_members, "right": k1_members,
                                     "center": k1_members})
        return pred

    # family B
    l, n, N = params["l"], params["n"], params["N"]
    commutative, _ = b_comm_criterion(tw, l, n, N)
    nsig1 = fd.mul(L, fd.frobenius(L, n, sL), fd.inv(L, n))
    if N == nsig1:
        disc = fd.sub(L, fd.one(L), fd.inv(L, n))
        orders = [p**d - 1, (p**m - 1) // math.gcd(p**s + 1, p**m - 1)]
        cond = fd.in_product_subgroup(L, disc, orders)
        if cond:
            pred = Prediction("B", params, "middle-quadratic-over-twist-square", **base,
                              nm_mode="exact", nm_dim=2 * d2, commutative=commutative,
                              conditions={"unit_defect_in_K1_times_norms": True})
            pred.nm_contains = subfield_members(tw.F, d2)
        else:
            pred = Prediction("B", params, "middle-is-twist-square-field", **base,
                              nm_mode="exact", nm_dim=d2, commutative=commutative,
                              conditions={"unit_defect_in_K1_times_norms": False})
            pred.nm_members = subfield_members(tw.F, d2)
    elif (2 * s) % m == 0:
        nN_i = int(L.mul_vec(L.idx(n), L.idx(N)))
        second = int(L.sub_vec(L.frob_vec(sL, L.idx(n)), nN_i))
        gen2 = int(tw.from_ab[nN_i, second])
        pred = Prediction("B", params, "middle-quadratic-over-fixed-field", **base,
                          nm_mode="exact", nm_dim=2 * d, commutative=commutative)
        pred.nm_members = _k1_span(tw, [tw.F.one_idx, gen2], d)
    elif fd.mul(L, N, N) == nsig1:
        pred = Prediction("B", params, "half-power-degenerate-interval", **base,
                          nm_mode="interval", nm_range=(d, 3 * d), commutative=commutative)
        pred.nm_contains = k1_members
    else:
        spec = w_kernel(tw, n, N)
        assert spec.kernel_dim_K1 <= 3
        pred = Prediction("B", params, "twisting-kernel-dimension", **base,
                          nm_mode="exact", nm_dim=d + spec.kernel_dim_prime,
                          commutative=commutative,
                          conditions={"kernel_dim_K1": spec.kernel_dim_K1})
        pred.nm_contains = k1_members
    pred.nucleus_members.update({"left": k1_members, "right": k1_members,
                                 "center": k1_members})
    return pred


def check_prediction(pred: Prediction, report) -> dict:
    """Compare a Prediction against a measured NucleiReport; returns an agreement record."""
    issues = []
    dims = report.dims
    if pred.nl_dim is not None and dims["left"] != pred.nl_dim:
        issues.append(f"left dim {dims['left']} != {pred.nl_dim}")
    if pred.nr_dim is not None and dims["right"] != pred.nr_dim:
        issues.append(f"right dim {dims['right']} != {pred.nr_dim}")
    if pred.center_dim is not None and dims["center"] != pred.center_dim:
        issues.append(f"center dim {dims['center']} != {pred.center_dim}")
    if pred.nm_mode == "exact":
        if dims["middle"] != pred.nm_dim:
            issues.append(f"middle dim {dims['middle']} != {pred.nm_dim}")
    elif pred.nm_mode == "interval":
        lo, hi = pred.nm_range
        if not lo <= dims["middle"] <= hi:
            issues.append(f"middle dim {dims['middle']} outside [{lo}, {hi}]")
    else:
        for which, bound in pred.lower_bounds.items():
            if dims[which] < bound:
                issues.append(f"{which} dim {dims[which]} below bound {bound}")
    if pred.nm_members is not None and not np.array_equal(
            np.sort(pred.nm_members), report.members["middle"]):
        issues.append("middle nucleus member set differs from the predicted subfield")
    if pred.nm_contains is not None and not np.isin(
            pred.nm_contains, report.members["middle"]).all():
        issues.append("predicted middle subfield not contained in measurement")
    for which, members in pred.nucleus_members.items():
        measured = report.members[which]
        if pred.nm_mode == "containment":
            if not np.isin(members, measured).all():
                issues.append(f"{which}: predicted subfield not contained")
        elif not np.array_equal(np.sort(np.asarray(members)), measured):
            issues.append(f"{which}: member set mismatch")
    return {"status": "match" if not issues else "mismatch", "issues": issues}
