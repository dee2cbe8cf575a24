"""Certification and analysis of presemifield products.

verify_presemifield gives a no-zero-divisor certificate via left-multiplication
ranks.  to_semifield builds the identity isotope at a chosen e, from which the
three nuclei and the center are computed twice over: once by kernel linear
algebra on basis associators, once by exhaustive element tests.  The two Ganley
commutativity tests (for the semifield and for the raw presemifield) live here
as well.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import (
    OrderTooLarge,
    SingularLeftMultiplication,
    WrongFamily,
    ZeroArgument,
)
from .families import Presemifield, linear_idx_table, subspace_mask
from .fields import Element, FieldCtx
from .linalg import batched_left_rank_deficient, inverse, kernel_basis, rref


@dataclass(frozen=True)
class Certificate:
    ok: bool
    witness: tuple[Element, Element] | None = None
    method: str = "left-rank"

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "witness": None if self.witness is None else [list(self.witness[0]), list(self.witness[1])],
            "method": self.method,
        }


def _basis_image_matrices(ctx: FieldCtx, star, xs: np.ndarray) -> np.ndarray:
    """Stack of GF(p) matrices: mats[i][:, j] = coefficients of xs[i] * e_j."""
    basis = np.asarray(ctx._weights, dtype=np.int64)
    dim = ctx.m
    imgs = star(np.repeat(xs, dim), np.tile(basis, xs.size))
    digs = ctx._dig[np.asarray(imgs, dtype=np.int64)].astype(np.int64)
    return digs.reshape(xs.size, dim, dim).transpose(0, 2, 1)


def verify_presemifield(P: Presemifield) -> Certificate:
    """Certify x*y = 0 => x = 0 or y = 0 by checking every left multiplication is invertible."""
    ctx = P.ambient
    xs = np.arange(1, ctx.order, dtype=np.int64)
    mats = _basis_image_matrices(ctx, P.star_idx, xs)
    deficient = batched_left_rank_deficient(mats, ctx.p)
    if not deficient.any():
        return Certificate(True)
    i = int(np.nonzero(deficient)[0][0])
    x_idx = int(xs[i])
    ker = kernel_basis(mats[i] % ctx.p, ctx.p)
    yv = tuple(int(c) for c in ker[0])
    y_idx = int(ctx.idx(yv))
    assert y_idx != 0 and int(P.star_idx(np.asarray(x_idx), np.asarray(y_idx))) == 0
    return Certificate(False, (ctx.coeffs(x_idx), yv))


# -- identity isotope ----------------------------------------------------------


@dataclass(eq=False)
class Semifield:
    base: Presemifield
    identity: Element
    beta: np.ndarray
    gamma: np.ndarray
    beta_tab: np.ndarray
    gamma_tab: np.ndarray
    circ_idx: Callable
    table: np.ndarray | None

    @property
    def ambient(self) -> FieldCtx:
        return self.base.ambient

    def circ(self, x: Element, y: Element) -> Element:
        ctx = self.base.ambient
        return ctx.coeffs(int(self.circ_idx(np.asarray(ctx.idx(x)), np.asarray(ctx.idx(y)))))

    def to_json(self) -> dict:
        return {"base": self.base.to_json(), "identity": list(self.identity)}


def _mult_matrix(ctx: FieldCtx, star, e_idx: int, side: str) -> np.ndarray:
    basis = np.asarray(ctx._weights, dtype=np.int64)
    ei = np.full(basis.shape, e_idx, dtype=np.int64)
    imgs = star(ei, basis) if side == "left" else star(basis, ei)
    return ctx._dig[np.asarray(imgs, dtype=np.int64)].astype(np.int64).T


def to_semifield(P: Presemifield, e: Element) -> Semifield:
    """Identity isotope x∘y = beta(gamma(x)*y) with two-sided identity e."""
    ctx = P.ambient
    e_idx = ctx.idx(e)
    if e_idx == 0:
        raise ZeroArgument("identity candidate must be nonzero")
    if P.certificate is None:
        P.certificate = verify_presemifield(P)
    if not P.certificate.ok:
        raise SingularLeftMultiplication("product has zero divisors; no identity isotope exists")

    L_e = _mult_matrix(ctx, P.star_idx, e_idx, "left")    # x -> e*x
    R_e = _mult_matrix(ctx, P.star_idx, e_idx, "right")   # x -> x*e
    beta = inverse(L_e, ctx.p)
    gamma = inverse(R_e, ctx.p) @ L_e % ctx.p
    beta_tab = linear_idx_table(ctx, beta)
    gamma_tab = linear_idx_table(ctx, gamma)
    star = P.star_idx

    def circ_idx(xs, ys):
        return beta_tab[np.asarray(star(gamma_tab[xs], ys), dtype=np.int64)]

    table = None
    if P.table is not None:
        table = beta_tab[P.table[gamma_tab]].astype(np.int32)
        circ_idx = lambda xs, ys: table[xs, ys]  # noqa: E731

    everything = np.arange(ctx.order, dtype=np.int64)
    e_vec = np.full(everything.shape, e_idx, dtype=np.int64)
    assert (circ_idx(e_vec, everything) == everything).all()
    assert (circ_idx(everything, e_vec) == everything).all()
    return Semifield(P, ctx.coeffs(e_idx), beta, gamma, beta_tab, gamma_tab, circ_idx, table)


# -- nuclei --------------------------------------------------------------------


@dataclass(eq=False)
class NucleiReport:
    p: int
    dims: dict
    bases: dict
    members: dict
    subfield_flags: dict
    method: str

    def label(self, which: str) -> str:
        return f"GF({self.p}^{self.dims[which]})"

    def same_as(self, other: "NucleiReport") -> bool:
        return all(
            self.dims[k] == other.dims[k] and np.array_equal(self.members[k], other.members[k])
            for k in ("left", "middle", "right", "center")
        )

    def to_json(self) -> dict:
        return {
            "method": self.method,
            "dims": dict(self.dims),
            "labels": {k: self.label(k) for k in self.dims},
            "bases": {k: [list(b) for b in v] for k, v in self.bases.items()},
            "subfields": dict(self.subfield_flags),
        }


def _closure_flag(S: Semifield, members: np.ndarray) -> bool:
    xs = np.repeat(members, members.size)
    ys = np.tile(members, members.size)
    mask = np.zeros(S.ambient.order, dtype=bool)
    mask[members] = True
    return bool(mask[np.asarray(S.circ_idx(xs, ys), dtype=np.int64)].all())


def _report_from_members(S: Semifield, found: dict, method: str) -> NucleiReport:
    ctx = S.ambient
    e_idx = ctx.idx(S.identity)
    dims, bases, members, flags = {}, {}, {}, {}
    for name, idxs in found.items():
        idxs = np.unique(np.asarray(idxs, dtype=np.int64))
        vecs = ctx._dig[idxs].astype(np.int64)
        red, pivots = rref(vecs, ctx.p)
        basis = [tuple(int(c) for c in row) for row in red[: len(pivots)]]
        assert idxs.size == ctx.p ** len(pivots), f"{name} member set is not a subspace"
        assert e_idx in idxs, f"{name} must contain the identity"
        dims[name] = len(pivots)
        bases[name] = basis
        members[name] = idxs
        flags[name] = _closure_flag(S, idxs)
    inter = np.intersect1d(members["left"], np.intersect1d(members["middle"], members["right"]))
    assert np.isin(members["center"], inter).all(), "center must sit inside all three nuclei"
    return NucleiReport(ctx.p, dims, bases, members, flags, method)


def _assoc_diff_tensor(S: Semifield) -> np.ndarray:
    """digits of (e_u ∘ e_v) ∘ e_w - e_u ∘ (e_v ∘ e_w), indexed [u, v, w, coeff]."""
    ctx = S.ambient
    dim = ctx.m
    bi = np.asarray(ctx._weights, dtype=np.int64)
    uu, vv, ww = np.meshgrid(np.arange(dim), np.arange(dim), np.arange(dim), indexing="ij")
    xs, ys, zs = bi[uu.ravel()], bi[vv.ravel()], bi[ww.ravel()]
    left = S.circ_idx(np.asarray(S.circ_idx(xs, ys), dtype=np.int64), zs)
    right = S.circ_idx(xs, np.asarray(S.circ_idx(ys, zs), dtype=np.int64))
    dig = ctx._dig.astype(np.int64)
    diff = (dig[np.asarray(left, dtype=np.int64)] - dig[np.asarray(right, dtype=np.int64)]) % ctx.p
    return diff.reshape(dim, dim, dim, dim)


def nuclei_linear(S: Semifield) -> NucleiReport:
    """Each nucleus as the joint kernel of the basis-pair associator maps."""
    ctx = S.ambient
    dim = ctx.m
    diff = _assoc_diff_tensor(S)

    def solve(axes) -> np.ndarray:
        mat = diff.transpose(axes).reshape(-1, dim)
        ker = kernel_basis(mat, ctx.p)
        basis = [tuple(int(c) for c in row) for row in ker]
        return np.sort(np.nonzero(subspace_mask(ctx, basis))[0])

    found = {
        "left": solve((1, 2, 3, 0)),
        "middle": solve((0, 2, 3, 1)),
        "right": solve((0, 1, 3, 2)),
    }

    bi = np.asarray(ctx._weights, dtype=np.int64)
    dig = ctx._dig.astype(np.int64)
    ii, jj = np.meshgrid(np.arange(dim), np.arange(dim), indexing="ij")
    ab = S.circ_idx(bi[ii.ravel()], bi[jj.ravel()])
    ba = S.circ_idx(bi[jj.ravel()], bi[ii.ravel()])
    comm = (dig[np.asarray(ab, dtype=np.int64)] - dig[np.asarray(ba, dtype=np.int64)]) % ctx.p
    comm = comm.reshape(dim, dim, dim).transpose(1, 2, 0).reshape(-1, dim)
    rows = [diff.transpose(ax).reshape(-1, dim) for ax in ((1, 2, 3, 0), (0, 2, 3, 1), (0, 1, 3, 2))]
    ker = kernel_basis(np.concatenate(rows + [comm], axis=0), ctx.p)
    basis = [tuple(int(c) for c in row) for row in ker]
    found["center"] = np.sort(np.nonzero(subspace_mask(ctx, basis))[0])
    return _report_from_members(S, found, "linear")


BRUTE_LIMIT = 729


def _full_table(S: Semifield) -> np.ndarray:
    if S.table is not None:
        return S.table
    q = S.ambient.order
    xs, ys = np.meshgrid(np.arange(q), np.arange(q), indexing="ij")
    return np.asarray(S.circ_idx(xs.ravel(), ys.ravel()), dtype=np.int32).reshape(q, q)


def nuclei_bruteforce(S: Semifield) -> NucleiReport:
    """Independent oracle: test every element, with probe pairs then a full grid."""
    q = S.ambient.order
    if q > BRUTE_LIMIT:
        raise OrderTooLarge(f"brute-force nuclei capped at order {BRUTE_LIMIT}")
    tab = _full_table(S)
    probes = np.arange(1, min(17, q), dtype=np.int64)
    px = py = probes

    def survivors_left() -> np.ndarray:
        A = tab[tab[:, px][:, :, None], py[None, None, :]]
        B = tab[:, tab[np.ix_(px, py)]]
        return np.nonzero((A == B).all(axis=(1, 2)))[0]

    def survivors_middle() -> np.ndarray:
        A = tab[tab[px, :][:, :, None], py[None, None, :]]
        B = tab[px[:, None, None], tab[:, py][None, :, :]]
        return np.nonzero((A == B).all(axis=(0, 2)))[0]

    def survivors_right() -> np.ndarray:
        zs = np.arange(q)
        A = tab[tab[np.ix_(px, py)][:, :, None], zs[None, None, :]]
        B = tab[px[:, None, None], tab[np.ix_(py, zs)][None, :, :]]
        return np.nonzero((A == B).all(axis=(0, 1)))[0]

    def check_left(z: int) -> bool:
        return bool((tab[tab[z]] == tab[z, tab]).all())

    def check_middle(z: int) -> bool:
        return bool((tab[tab[:, z], :] == tab[:, tab[z, :]]).all())

    def check_right(z: int) -> bool:
        col = tab[:, z]
        return bool((col[tab] == tab[:, col]).all())

    found = {
        "left": np.array([z for z in survivors_left() if check_left(int(z))], dtype=np.int64),
        "middle": np.array([z for z in survivors_middle() if check_middle(int(z))], dtype=np.int64),
        "right": np.array([z for z in survivors_right() if check_right(int(z))], dtype=np.int64),
    }
    commuting = np.nonzero((tab == tab.T).all(axis=1))[0]
    inter = np.intersect1d(found["left"], np.intersect1d(found["middle"], found["right"]))
    found["center"] = np.intersect1d(inter, commuting)
    return _report_from_members(S, found, "bruteforce")


# -- commutativity tests -------------------------------------------------------


def _basis_pairs(dim: int):
    return [(i, j) for i in range(dim) for j in range(i + 1, dim)]


def ganley_semifield(S: Semifield) -> Element | None:
    """First w != 0 with (w∘x)∘y = (w∘y)∘x on all basis pairs, else None."""
    ctx = S.ambient
    bi = ctx._weights
    ws = np.arange(ctx.order, dtype=np.int64)
    alive = np.ones(ctx.order, dtype=bool)
    alive[0] = False
    for i, j in _basis_pairs(ctx.m):
        ei = np.full(ws.shape, bi[i], dtype=np.int64)
        ej = np.full(ws.shape, bi[j], dtype=np.int64)
        lhs = S.circ_idx(np.asarray(S.circ_idx(ws, ei), dtype=np.int64), ej)
        rhs = S.circ_idx(np.asarray(S.circ_idx(ws, ej), dtype=np.int64), ei)
        alive &= np.asarray(lhs) == np.asarray(rhs)
        if not alive.any():
            return None
    hits = np.nonzero(alive)[0]
    return ctx.coeffs(int(hits[0])) if hits.size else None


def presemifield_alpha(P: Presemifield) -> np.ndarray:
    """Index table of the map alpha with alpha(x)*1 = x."""
    ctx = P.ambient
    R1 = _mult_matrix(ctx, P.star_idx, ctx.one_idx, "right")
    return linear_idx_table(ctx, inverse(R1, ctx.p))


def ganley_presemifield(P: Presemifield) -> Element | None:
    """First v != 0 with alpha(v*x)*y = alpha(v*y)*x on all basis pairs, else None."""
    ctx = P.ambient
    alpha_tab = presemifield_alpha(P)
    bi = ctx._weights
    star = P.star_idx
    vs = np.arange(ctx.order, dtype=np.int64)
    alive = np.ones(ctx.order, dtype=bool)
    alive[0] = False
    for i, j in _basis_pairs(ctx.m):
        ei = np.full(vs.shape, bi[i], dtype=np.int64)
        ej = np.full(vs.shape, bi[j], dtype=np.int64)
        lhs = star(alpha_tab[np.asarray(star(vs, ei), dtype=np.int64)], ej)
        rhs = star(alpha_tab[np.asarray(star(vs, ej), dtype=np.int64)], ei)
        alive &= np.asarray(lhs) == np.asarray(rhs)
        if not alive.any():
            return None
    hits = np.nonzero(alive)[0]
    return ctx.coeffs(int(hits[0])) if hits.size else None


def classify_algebra(S: Semifield) -> dict:
    """Commutativity from basis pairs, associativity from basis triples."""
    ctx = S.ambient
    dim = ctx.m
    bi = np.asarray(ctx._weights, dtype=np.int64)
    ii, jj = np.meshgrid(np.arange(dim), np.arange(dim), indexing="ij")
    ab = np.asarray(S.circ_idx(bi[ii.ravel()], bi[jj.ravel()]))
    ba = np.asarray(S.circ_idx(bi[jj.ravel()], bi[ii.ravel()]))
    commutative = bool((ab == ba).all())
    associative = not _assoc_diff_tensor(S).any()
    return {"commutative": commutative, "associative": bool(associative)}


# -- closed-form middle nucleus membership for the coordinate families ---------


def middle_nucleus_mask(S: Semifield) -> np.ndarray:
    """Boolean grid over (c, d) in L^2 evaluating the two membership equations."""
    P = S.base
    if P.xparams is None or P.provenance.get("family") not in ("B", "C", "X"):
        raise WrongFamily("membership equations only apply to the coordinate families")
    tw = P.tower
    L = tw.L
    if P.ambient.idx(S.identity) != P.ambient.one_idx:
        raise WrongFamily("membership equations are stated for the identity isotope at e = 1")
    sL = tw.s % tw.m
    s2 = (2 * tw.s) % tw.m
    v_i, n_i, N_i = P.xparams["v"], P.xparams["n"], P.xparams["N"]
    nv = int(L.mul_vec(n_i, v_i)) if v_i else 0
    nN = int(L.mul_vec(n_i, N_i))
    nv_s = int(L.frob_vec(sL, nv))
    nN_s = int(L.frob_vec(sL, nN))

    cs = np.arange(L.order, dtype=np.int64)
    ds = np.arange(L.order, dtype=np.int64)
    c, d = np.meshgrid(cs, ds, indexing="ij")

    t = L.scalar_mul_vec(nv, L.add_vec(d, L.scalar_mul_vec(N_i, L.frob_vec(sL, d))))
    eq1 = L.sub_vec(c, L.frob_vec(s2, c)) == L.sub_vec(L.frob_vec(sL, t), t)

    cc = L.sub_vec(c, L.frob_vec(sL, c))
    lhs = L.add_vec(
        L.scalar_mul_vec(nv_s, L.frob_vec(sL, cc)),
        L.scalar_mul_vec(int(L.mul_vec(nv, N_i)), cc),
    )
    rhs = L.sub_vec(L.scalar_mul_vec(nN_s, L.frob_vec(s2, d)), L.scalar_mul_vec(nN, d))
    return np.asarray(eq1 & (lhs == rhs))


def middle_nucleus_membership(S: Semifield, c: Element, d: Element) -> bool:
    """Closed-form test for (c, d) in the middle nucleus of the e = 1 isotope."""
    tw = S.base.tower
    mask = middle_nucleus_mask(S)
    return bool(mask[tw.L.idx(c), tw.L.idx(d)])
