"""Presemifield constructions.

Covers the twisted-field ingredient, the two-term tower families (A, X and the
specializations B, C), the classical Dickson / Hughes-Kleinfeld / Knuth
examples, the generic compatibility + projection machinery, and the isotopy
reparametrizations between family members.

A Presemifield wraps a vectorised product on element indices of an ambient
field, plus a dense multiplication table when the order is below 2^12.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import fields as fd
from . import towers as tws
from .errors import (
    CharTwoUnsupported,
    ConditionViolated,
    DimensionMismatch,
    InvalidL,
    InvalidMu,
    InvalidTransformParams,
    KernelMismatch,
    NotDirectSum,
    PolynomialHasRoot,
    RInPowerSubgroup,
    SigmaOutOfRange,
    WrongFamily,
    ZeroArgument,
)
from .fields import Element, FieldCtx
from .linalg import inverse, rank
from .towers import Tower

TABLE_THRESHOLD = 4096  # dense product tables strictly below this order


# -- products as index-level callables ----------------------------------------


class ProductOp:
    """A biadditive product exposed both elementwise and on index arrays."""

    def __init__(self, ctx: FieldCtx, vec: Callable, label: str = ""):
        self.ctx = ctx
        self.vec = vec
        self.label = label

    def __call__(self, x: Element, y: Element) -> Element:
        return self.ctx.coeffs(int(self.vec(np.asarray(self.ctx.idx(x)), np.asarray(self.ctx.idx(y)))))


def field_mul_op(ctx: FieldCtx) -> ProductOp:
    return ProductOp(ctx, lambda xs, ys: ctx.mul_vec(xs, ys), "xy")


def dickson_knuth_op(tw: Tower, s_sigma: int, s_tau: int, mu: Element) -> ProductOp:
    """(a,b)(c,d) -> ac + b^sigma d^tau mu + (ad+bc) omega, mu in L: an L-neighbor of xy."""
    L, F = tw.L, tw.F
    mu_idx = L.idx(mu)

    def vec(xs, ys):
        a, b = tw.to_a[xs], tw.to_b[xs]
        c, d = tw.to_a[ys], tw.to_b[ys]
        first = L.add_vec(
            L.mul_vec(a, c),
            L.scalar_mul_vec(mu_idx, L.mul_vec(L.frob_vec(s_sigma, b), L.frob_vec(s_tau, d))),
        )
        second = L.add_vec(L.mul_vec(a, d), L.mul_vec(b, c))
        return tw.from_ab[first, second]

    return ProductOp(F, vec, "dickson-knuth neighbor")


# -- subspaces ----------------------------------------------------------------


def subspace_mask(ctx: FieldCtx, basis: list[Element]) -> np.ndarray:
    """Boolean membership mask over all element indices for span(basis)."""
    members = np.array([0], dtype=np.int64)
    for v in basis:
        shifts = []
        for c in range(ctx.p):
            cv = tuple(c * x % ctx.p for x in v)
            shifts.append(ctx.add_vec(members, np.full(members.shape, ctx.idx(cv), dtype=np.int64)))
        members = np.unique(np.concatenate(shifts))
    mask = np.zeros(ctx.order, dtype=bool)
    mask[members] = True
    return mask


def subspace_dim(ctx: FieldCtx, basis: list[Element]) -> int:
    if not basis:
        return 0
    return rank(np.array(basis, dtype=np.int64), ctx.p)


@dataclass(eq=False)
class CompatiblePair:
    """A system of products *_i with additive subgroups A_i over one ambient field."""

    ctx: FieldCtx
    ops: list[ProductOp]
    subgroups: list[list[Element]]


def compatibility_check(pair: CompatiblePair) -> bool:
    """Exhaustive: false iff some nonzero (x,y) has x *_i y in A_i for every i."""
    if len(pair.ops) != len(pair.subgroups):
        raise DimensionMismatch("need one subgroup per product")
    ctx = pair.ctx
    masks = [subspace_mask(ctx, basis) for basis in pair.subgroups]
    q = ctx.order
    ys = np.arange(1, q, dtype=np.int64)
    chunk = max(1, (1 << 22) // q)
    for lo in range(1, q, chunk):
        xs = np.arange(lo, min(lo + chunk, q), dtype=np.int64)
        X = np.repeat(xs, ys.size)
        Y = np.tile(ys, xs.size)
        trapped = np.ones(X.size, dtype=bool)
        for op, mask in zip(pair.ops, masks):
            trapped &= mask[op.vec(X, Y)]
            if not trapped.any():
                break
        if trapped.any():
            return False
    return True


def linear_idx_table(ctx: FieldCtx, mat: np.ndarray) -> np.ndarray:
    """Index-permutation table of a prime-field-linear map given as a matrix."""
    imgs = ctx._dig.astype(np.int64) @ np.asarray(mat, dtype=np.int64).T % ctx.p
    return ctx.idx_vec(imgs)


# -- the presemifield wrapper -------------------------------------------------


@dataclass(eq=False)
class Presemifield:
    tower: Tower | FieldCtx
    ambient: FieldCtx
    p: int
    dim: int
    order: int
    product: Callable[[Element, Element], Element]
    star_idx: Callable
    provenance: dict
    table: np.ndarray | None
    certificate: object = None
    xparams: dict | None = None

    def basis_indices(self) -> np.ndarray:
        return np.asarray(self.ambient._weights, dtype=np.int64)

    def to_json(self) -> dict:
        return {"provenance": self.provenance, "p": self.p, "dim": self.dim, "order": self.order}


def _finish(tower, ambient: FieldCtx, star_vec, provenance: dict, xparams=None) -> Presemifield:
    order = ambient.order
    table = None
    star = star_vec
    if order < TABLE_THRESHOLD:
        xs, ys = np.meshgrid(np.arange(order), np.arange(order), indexing="ij")
        table = np.asarray(star_vec(xs.ravel(), ys.ravel()), dtype=np.int32).reshape(order, order)
        star = lambda a, b: table[a, b]  # noqa: E731

    def product(x: Element, y: Element) -> Element:
        return ambient.coeffs(int(star(np.asarray(ambient.idx(x)), np.asarray(ambient.idx(y)))))

    P = Presemifield(tower, ambient, ambient.p, ambient.m, order, product, star,
                     provenance, table, None, xparams)
    from . import semifield as sf

    P.certificate = sf.verify_presemifield(P)
    assert P.certificate.ok, f"validated parameters produced a zero divisor: {P.certificate.witness}"
    return P


def star_table(P: Presemifield) -> np.ndarray:
    """Dense index table of the raw product (row x-index, column y-index)."""
    if P.table is not None:
        return P.table
    q = P.order
    xs, ys = np.meshgrid(np.arange(q), np.arange(q), indexing="ij")
    return np.asarray(P.star_idx(xs.ravel(), ys.ravel()), dtype=np.int32).reshape(q, q)


def presemifield_from_table(ambient: FieldCtx, table: np.ndarray, provenance: dict,
                            tower=None, certify: bool = True) -> Presemifield:
    """Wrap an explicit multiplication table (row x, column y, entries = indices)."""
    tab = np.asarray(table, dtype=np.int32)

    def star(xs, ys):
        return tab[xs, ys]

    def product(x: Element, y: Element) -> Element:
        return ambient.coeffs(int(tab[ambient.idx(x), ambient.idx(y)]))

    P = Presemifield(tower if tower is not None else ambient, ambient, ambient.p,
                     ambient.m, ambient.order, product, star, provenance, tab)
    if certify:
        from . import semifield as sf

        P.certificate = sf.verify_presemifield(P)
    return P


# -- projection construction and decomposition --------------------------------


def projection_product(pair: CompatiblePair, maps: list[np.ndarray]) -> Presemifield:
    """x∘y = sum_i f_i(x *_i y) for linear maps with ker(f_i) = A_i and independent images."""
    ctx = pair.ctx
    if len(maps) != len(pair.ops):
        raise DimensionMismatch("need one map per product")
    dim = ctx.m
    im_total = 0
    stacked = []
    for mat, basis in zip(maps, pair.subgroups):
        mat = np.asarray(mat, dtype=np.int64) % ctx.p
        r = rank(mat, ctx.p)
        ker_dim = dim - r
        if subspace_dim(ctx, basis) != ker_dim:
            raise KernelMismatch("kernel dimension does not match the subgroup")
        for b in basis:
            if (mat @ np.array(b, dtype=np.int64) % ctx.p).any():
                raise KernelMismatch("subgroup element not killed by its map")
        im_total += r
        stacked.append(mat)
    joined = np.concatenate(stacked, axis=1)
    if im_total != dim or rank(joined, ctx.p) != dim:
        raise NotDirectSum("images do not form a direct-sum decomposition of the space")

    tables = [linear_idx_table(ctx, mat) for mat in stacked]
    ops = list(pair.ops)

    def star(xs, ys):
        acc = tables[0][ops[0].vec(xs, ys)]
        for op, tab in zip(ops[1:], tables[1:]):
            acc = ctx.add_vec(acc, tab[op.vec(xs, ys)])
        return acc

    prov = {"family": "projection", "params": {"terms": len(ops)}}
    return _finish(ctx, ctx, star, prov)


def decompose(P: Presemifield, decomposition: list[list[Element]]) -> tuple[CompatiblePair, list[np.ndarray]]:
    """Split x*y along a direct-sum decomposition; projection_product rebuilds P exactly."""
    ctx = P.ambient
    dim = ctx.m
    dims = [subspace_dim(ctx, basis) for basis in decomposition]
    cols = []
    for basis in decomposition:
        cols.extend(np.array(b, dtype=np.int64) for b in basis)
    if sum(dims) != dim or len(cols) != dim:
        raise NotDirectSum("subspaces must be independent and span the whole space")
    B = np.stack(cols, axis=1) % ctx.p
    if rank(B, ctx.p) != dim:
        raise NotDirectSum("subspaces must be independent and span the whole space")
    Binv = inverse(B, ctx.p)

    maps = []
    ops = []
    subgroups = []
    offset = 0
    star = P.star_idx
    for i, basis in enumerate(decomposition):
        sel = np.zeros((dim, dim), dtype=np.int64)
        for j in range(offset, offset + dims[i]):
            sel[j, j] = 1
        f = B @ sel @ Binv % ctx.p
        maps.append(f)
        tab = linear_idx_table(ctx, f)
        ops.append(ProductOp(ctx, lambda xs, ys, t=tab: t[star(xs, ys)], f"f_{i}(x*y)"))
        others: list[Element] = []
        for k, other in enumerate(decomposition):
            if k != i:
                others.extend(other)
        subgroups.append(others)
        offset += dims[i]
    return CompatiblePair(ctx, ops, subgroups), maps


# -- family constructors ------------------------------------------------------


def _neg_l_check(L: FieldCtx, l: Element, s: int, err=InvalidL):
    if L.idx(l) == 0:
        return  # -0 is not in the multiplicative subgroup
    if fd.in_power_subgroup(L, fd.neg(L, l), L.p ** s - 1):
        raise err(f"-l is a (sigma-1)-power for s={s}")


def _poly_root_scan(L: FieldCtx, coeff_idx: list[int], sigma_s: int) -> bool:
    """True iff t^(sigma+1) + c2*t^sigma + c1*t + c0 has a root in L (exhaustive)."""
    c0, c1, c2 = coeff_idx
    ts = np.arange(L.order, dtype=np.int64)
    tsig = L.frob_vec(sigma_s % L.m, ts)
    vals = L.add_vec(L.mul_vec(tsig, ts), L.scalar_mul_vec(c2, tsig))
    vals = L.add_vec(vals, L.scalar_mul_vec(c1, ts))
    vals = L.add_vec(vals, np.full(ts.shape, c0, dtype=np.int64))
    return bool((vals == 0).any())


def make_twisted(L_ctx: FieldCtx, l: Element, s: int) -> Presemifield:
    """x∘y = x y^sigma + l x^sigma y on a single field, sigma = p^s."""
    if not 0 <= s < L_ctx.m:
        raise SigmaOutOfRange(f"s={s} outside [0, {L_ctx.m})")
    _neg_l_check(L_ctx, l, s)
    l_idx = L_ctx.idx(l)

    def star(xs, ys):
        lhs = L_ctx.mul_vec(xs, L_ctx.frob_vec(s, ys))
        rhs = L_ctx.scalar_mul_vec(l_idx, L_ctx.mul_vec(L_ctx.frob_vec(s, xs), ys))
        return L_ctx.add_vec(lhs, rhs)

    prov = {"family": "twisted", "params": {"l": list(l), "s": s}}
    return _finish(L_ctx, L_ctx, star, prov)


def make_A(tw: Tower, l: Element, mu: Element) -> Presemifield:
    """Two-term projection family on F: T(omega x y) + T(omega mu (conj(x) ∘ y)) omega."""
    L, F, s, m = tw.L, tw.F, tw.s, tw.m
    if not 1 <= s <= m:
        raise SigmaOutOfRange(f"s={s} outside [1, {m}]")
    if L.idx(l) == 0:
        raise InvalidL("l must be nonzero")
    _neg_l_check(L, l, s)
    mu_idx = F.idx(mu)
    if mu_idx == 0:
        raise InvalidMu("mu must be nonzero")
    sub_order = (F.order - 1) // math.gcd(tw.p ** s + 1, F.order - 1)
    if fd.in_product_subgroup(F, mu, [L.order - 1, sub_order]):
        raise InvalidMu("mu lies in L* times the (sigma+1)-powers of F*")

    lF_idx = int(tw.embed_idx[L.idx(l)])
    conj_s = (m + s) % (2 * m)

    def inner(xs, ys):
        # conj(x) ∘ y = conj(x) y^sigma + l conj(x)^sigma y
        t1 = F.mul_vec(tw.conj_idx[xs], F.frob_vec(s % (2 * m), ys))
        t2 = F.scalar_mul_vec(lF_idx, F.mul_vec(F.frob_vec(conj_s, xs), ys))
        return F.add_vec(t1, t2)

    if tw.p == 2:
        def star(xs, ys):
            w = F.scalar_mul_vec(mu_idx, inner(xs, ys))
            first = tw.embed_idx[tw.reltr_idx[w]]
            second = F.scalar_mul_vec(mu_idx, tw.embed_idx[tw.reltr_idx[F.mul_vec(xs, ys)]])
            return F.add_vec(first, second)
    else:
        om = tw.omega_idx

        def star(xs, ys):
            first = tw.reltr_idx[F.scalar_mul_vec(om, F.mul_vec(xs, ys))]
            w = F.scalar_mul_vec(om, F.scalar_mul_vec(mu_idx, inner(xs, ys)))
            return tw.from_ab[first, tw.reltr_idx[w]]

    prov = {
        "family": "A",
        "params": {"p": tw.p, "m": m, "s": s, "l": list(l), "mu": list(mu)},
        # sigma^2 = 1 on L collapses the twisted ingredient; necessary (not
        # sufficient) for the product to be isotopic to a field
        "flags": {"twist_square_trivial": (2 * s) % m == 0},
    }
    return _finish(tw, F, star, prov)


def _x_star(tw: Tower, v_idx: int, l_idx: int, n_idx: int, N_idx: int):
    """Vectorised coordinate product ((6.3)-form h, ad+bc)."""
    L = tw.L
    sL = tw.s % tw.m
    nN = int(L.mul_vec(n_idx, N_idx))
    nv = int(L.mul_vec(n_idx, v_idx)) if v_idx else 0

    def star(xs, ys):
        a, b = tw.to_a[xs], tw.to_b[xs]
        c, d = tw.to_a[ys], tw.to_b[ys]
        asig, bsig = L.frob_vec(sL, a), L.frob_vec(sL, b)
        csig, dsig = L.frob_vec(sL, c), L.frob_vec(sL, d)
        A1 = L.sub_vec(L.mul_vec(a, csig), L.scalar_mul_vec(nN, L.mul_vec(b, dsig)))
        A2 = L.sub_vec(L.mul_vec(asig, c), L.scalar_mul_vec(nN, L.mul_vec(bsig, d)))
        h = L.add_vec(A1, L.scalar_mul_vec(l_idx, A2))
        if nv:
            A3 = L.sub_vec(L.scalar_mul_vec(N_idx, L.mul_vec(a, dsig)), L.mul_vec(b, csig))
            A4 = L.sub_vec(L.mul_vec(asig, d), L.scalar_mul_vec(N_idx, L.mul_vec(bsig, c)))
            h = L.add_vec(h, L.scalar_mul_vec(nv, L.add_vec(A3, L.scalar_mul_vec(l_idx, A4))))
        second = L.add_vec(L.mul_vec(a, d), L.mul_vec(b, c))
        return tw.from_ab[h, second]

    return star


def _x_validate(tw: Tower, l: Element, n: Element, N: Element):
    if tw.p == 2:
        raise CharTwoUnsupported("this family is only defined for odd p")
    if not 0 < tw.s < tw.m:
        raise SigmaOutOfRange(f"s={tw.s} outside (0, {tw.m})")
    L = tw.L
    if L.idx(l) == 0:
        raise InvalidL("l must be nonzero")
    if L.idx(n) == 0 or L.idx(N) == 0:
        raise ZeroArgument("n and N must be nonzero")
    _neg_l_check(L, l, tw.s)


def make_X(tw: Tower, v: Element, l: Element, n: Element, N: Element) -> Presemifield:
    """General two-parameter-family product; valid iff the degree-(sigma+1) polynomial is rootless."""
    _x_validate(tw, l, n, N)
    L = tw.L
    v_idx, l_idx, n_idx, N_idx = (L.idx(z) for z in (v, l, n, N))
    # t^(sigma+1) - v t^sigma - (v/N) t + 1/(nN)
    c2 = int(L._neg[v_idx])
    c1 = int(L._neg[L.mul_vec(v_idx, L._inv[N_idx])]) if v_idx else 0
    c0 = int(L._inv[L.mul_vec(n_idx, N_idx)])
    if _poly_root_scan(L, [c0, c1, c2], tw.s):
        raise PolynomialHasRoot("the validity polynomial has a root in L")

    prov = {"family": "X", "params": {"p": tw.p, "m": tw.m, "s": tw.s,
                                      "v": list(v), "l": list(l), "n": list(n), "N": list(N)}}
    xp = {"v": v_idx, "l": l_idx, "n": n_idx, "N": N_idx}
    return _finish(tw, tw.F, _x_star(tw, v_idx, l_idx, n_idx, N_idx), prov, xp)


def make_B(tw: Tower, l: Element, n: Element, N: Element) -> Presemifield:
    """v = 1 specialization with the substituted validity polynomial."""
    _x_validate(tw, l, n, N)
    L = tw.L
    one = L.one_idx
    l_idx, n_idx, N_idx = (L.idx(z) for z in (l, n, N))
    invN = int(L._inv[N_idx])
    # x^(sigma+1) + (1 - 1/N) x + (1/n - 1)/N
    c1 = int(L.sub_vec(one, invN))
    c0 = int(L.mul_vec(int(L.sub_vec(int(L._inv[n_idx]), one)), invN))
    has_root = _poly_root_scan(L, [c0, c1, 0], tw.s)
    # cross-check against the unsubstituted form (t = x + 1)
    t_c2 = int(L._neg[one])
    t_c1 = int(L._neg[invN])
    t_c0 = int(L._inv[L.mul_vec(n_idx, N_idx)])
    assert has_root == _poly_root_scan(L, [t_c0, t_c1, t_c2], tw.s)
    if has_root:
        raise PolynomialHasRoot("the validity polynomial has a root in L")

    prov = {"family": "B", "params": {"p": tw.p, "m": tw.m, "s": tw.s,
                                      "l": list(l), "n": list(n), "N": list(N)}}
    xp = {"v": one, "l": l_idx, "n": n_idx, "N": N_idx}
    return _finish(tw, tw.F, _x_star(tw, one, l_idx, n_idx, N_idx), prov, xp)


def make_C(tw: Tower, l: Element, R: Element) -> Presemifield:
    """v = 0 specialization, parametrized by R = -nN which must avoid the (sigma+1)-powers."""
    L = tw.L
    if L.idx(R) == 0:
        raise ZeroArgument("R must be nonzero")
    # factor R = -nN with the tower's canonical non-square n
    n = tw.n
    N = fd.neg(L, fd.mul(L, R, fd.inv(L, n)))
    _x_validate(tw, l, n, N)
    in_subgroup = fd.in_power_subgroup(L, R, tw.p ** tw.s + 1)
    # cross-check the subgroup formulation against the v = 0 root scan
    c0 = int(L._inv[L.mul_vec(L.idx(n), L.idx(N))])
    assert in_subgroup == _poly_root_scan(L, [c0, 0, 0], tw.s)
    if in_subgroup:
        raise RInPowerSubgroup("R is a (sigma+1)-power in L")

    l_idx, n_idx, N_idx = (L.idx(z) for z in (l, n, N))
    prov = {"family": "C", "params": {"p": tw.p, "m": tw.m, "s": tw.s,
                                      "l": list(l), "R": list(R)}}
    xp = {"v": 0, "l": l_idx, "n": n_idx, "N": N_idx}
    return _finish(tw, tw.F, _x_star(tw, 0, l_idx, n_idx, N_idx), prov, xp)


def make_dickson(tw: Tower, s: int) -> Presemifield:
    """(a,b)(c,d) = (ac + n b^sigma d^sigma, ad + bc), the commutative classical example."""
    if tw.p == 2:
        raise CharTwoUnsupported("Dickson products need odd characteristic")
    if not 1 <= s < tw.m:
        raise ConditionViolated(f"sigma power s={s} must satisfy 1 <= s < m={tw.m}")
    L = tw.L
    n_idx = L.idx(tw.n)

    def star(xs, ys):
        a, b = tw.to_a[xs], tw.to_b[xs]
        c, d = tw.to_a[ys], tw.to_b[ys]
        first = L.add_vec(
            L.mul_vec(a, c),
            L.scalar_mul_vec(n_idx, L.mul_vec(L.frob_vec(s, b), L.frob_vec(s, d))),
        )
        second = L.add_vec(L.mul_vec(a, d), L.mul_vec(b, c))
        return tw.from_ab[first, second]

    prov = {"family": "dickson", "params": {"p": tw.p, "m": tw.m, "s": s}}
    return _finish(tw, tw.F, star, prov)


def make_hughes_kleinfeld(tw: Tower, l: Element) -> Presemifield:
    """(a,b)(c,d) = (ac + l b^q d, a^q d + bc) over L = GF(q^2), l outside GF(q)."""
    if tw.p == 2:
        raise CharTwoUnsupported("this example is built in odd characteristic")
    if tw.m % 2 != 0:
        raise ConditionViolated("needs m even so that L is a quadratic extension of GF(q)")
    L = tw.L
    k = tw.m // 2
    if fd.frobenius(L, l, k) == l:
        raise ConditionViolated("l must lie outside GF(q)")
    l_idx = L.idx(l)

    def star(xs, ys):
        a, b = tw.to_a[xs], tw.to_b[xs]
        c, d = tw.to_a[ys], tw.to_b[ys]
        first = L.add_vec(
            L.mul_vec(a, c),
            L.scalar_mul_vec(l_idx, L.mul_vec(L.frob_vec(k, b), d)),
        )
        second = L.add_vec(L.mul_vec(L.frob_vec(k, a), d), L.mul_vec(b, c))
        return tw.from_ab[first, second]

    prov = {"family": "hughes_kleinfeld", "params": {"p": tw.p, "m": tw.m, "l": list(l)}}
    return _finish(tw, tw.F, star, prov)


def make_knuth(L_ctx: FieldCtx, f: Element, g: Element, s: int) -> Presemifield:
    """(a+b lam)(c+d lam) = (ac + b^(1/sigma) d f) + (bc + a^sigma d + b d g) lam."""
    p, m = L_ctx.p, L_ctx.m
    if not 0 <= s < m:
        raise SigmaOutOfRange(f"s={s} outside [0, {m})")
    L = L_ctx
    f_idx, g_idx = L.idx(f), L.idx(g)
    # condition: t^(sigma+1) + t g - f != 0 for all t in L
    if _poly_root_scan(L, [int(L._neg[f_idx]), g_idx, 0], s):
        raise ConditionViolated("t^(sigma+1) + t g - f has a root in L")

    tw = tws.build_tower(p, m, s)
    F = tw.F
    # basis element lam: prefer a root of t^2 - g t - f (then N(lam) = -f, T(lam) = g)
    ts = np.arange(F.order, dtype=np.int64)
    vals = F.add_vec(
        F.mul_vec(ts, ts),
        F.add_vec(
            F.scalar_mul_vec(int(F._neg[tw.embed_idx[g_idx]]), ts),
            np.full(ts.shape, int(F._neg[tw.embed_idx[f_idx]]), dtype=np.int64),
        ),
    )
    roots = [int(r) for r in np.nonzero(vals == 0)[0] if tw.unembed_idx[r] < 0]
    if roots:
        lam = roots[0]
        lam_is_root = True
    else:
        lam = int(np.nonzero(tw.unembed_idx < 0)[0][0])
        lam_is_root = False

    # coordinate tables for the basis {1, lam}
    qL = L.order
    ga, gb = np.meshgrid(np.arange(qL), np.arange(qL), indexing="ij")
    from_ab = F.add_vec(tw.embed_idx[ga], F.scalar_mul_vec(lam, tw.embed_idx[gb]))
    flat = from_ab.ravel()
    assert np.unique(flat).size == F.order
    to_a = np.empty(F.order, dtype=np.int64)
    to_b = np.empty(F.order, dtype=np.int64)
    to_a[flat] = ga.ravel()
    to_b[flat] = gb.ravel()

    inv_s = (m - s) % m

    def star(xs, ys):
        a, b = to_a[xs], to_b[xs]
        c, d = to_a[ys], to_b[ys]
        first = L.add_vec(
            L.mul_vec(a, c),
            L.scalar_mul_vec(f_idx, L.mul_vec(L.frob_vec(inv_s, b), d)),
        )
        second = L.add_vec(
            L.mul_vec(b, c),
            L.add_vec(
                L.mul_vec(L.frob_vec(s, a), d),
                L.scalar_mul_vec(g_idx, L.mul_vec(b, d)),
            ),
        )
        return from_ab[first, second]

    prov = {
        "family": "knuth",
        "params": {"p": p, "m": m, "s": s, "f": list(f), "g": list(g)},
        "flags": {"lambda": list(F.coeffs(lam)), "lambda_is_root": lam_is_root},
    }
    P = _finish(tw, F, star, prov)
    P.xparams = {"lambda": lam, "to_a": to_a, "to_b": to_b, "from_ab": from_ab}
    return P


# -- isotopy reparametrizations -----------------------------------------------


def _elem(L: FieldCtx, params: dict, key: str) -> Element:
    if key not in params:
        raise InvalidTransformParams(f"missing transform parameter {key!r}")
    val = tuple(int(c) % L.p for c in params[key])
    if len(val) != L.m:
        raise InvalidTransformParams(f"{key!r} has wrong coefficient length")
    return val


def _nonzero(L: FieldCtx, x: Element, key: str) -> Element:
    if L.idx(x) == 0:
        raise InvalidTransformParams(f"transform parameter {key!r} must be nonzero")
    return x


def reparametrize(P: Presemifield, kind: str, params: dict) -> Presemifield:
    """Apply a known isotopy transform, returning the freshly validated instance."""
    fam = P.provenance.get("family")
    if fam == "X":
        tw: Tower = P.tower
        L = tw.L
        rec = P.provenance["params"]
        v, l, n, N = (tuple(rec[k]) for k in ("v", "l", "n", "N"))
        if kind == "scale":
            kb = _nonzero(L, _elem(L, params, "k_b"), "k_b")
            kc = _nonzero(L, _elem(L, params, "k_c"), "k_c")
            sL = tw.s % tw.m
            v2 = fd.mul(L, v, fd.inv(L, kb))
            kcs = fd.mul(L, fd.frobenius(L, kc, sL), fd.inv(L, kc))
            l2 = fd.mul(L, l, fd.inv(L, kcs))
            n2 = fd.mul(L, n, fd.mul(L, kb, kb))
            N2 = fd.mul(L, N, fd.mul(L, fd.frobenius(L, kb, sL), fd.inv(L, kb)))
            return make_X(tw, v2, l2, n2, N2)
        if kind == "flip":
            tw2 = tws.build_tower(tw.p, tw.m, tw.m - tw.s)
            v2 = fd.mul(L, v, fd.inv(L, N))
            l2 = fd.inv(L, l)
            n2 = fd.mul(L, n, fd.mul(L, N, N))
            N2 = fd.inv(L, N)
            return make_X(tw2, v2, l2, n2, N2)
        raise WrongFamily(f"unknown transform {kind!r} for family X")
    if fam == "B":
        tw = P.tower
        L = tw.L
        rec = P.provenance["params"]
        l, n, N = (tuple(rec[k]) for k in ("l", "n", "N"))
        if kind == "scale":
            x = _nonzero(L, _elem(L, params, "x"), "x")
            sL = tw.s % tw.m
            l2 = fd.mul(L, l, fd.mul(L, fd.frobenius(L, x, sL), fd.inv(L, x)))
            return make_B(tw, l2, n, N)
        if kind == "flip":
            tw2 = tws.build_tower(tw.p, tw.m, tw.m - tw.s)
            Nroot = fd.frobenius(L, N, (tw.m - tw.s) % tw.m)  # N^(1/sigma)
            return make_B(tw2, fd.inv(L, l), n, fd.inv(L, Nroot))
        raise WrongFamily(f"unknown transform {kind!r} for family B")
    if fam == "C":
        tw = P.tower
        L = tw.L
        rec = P.provenance["params"]
        l, R = tuple(rec["l"]), tuple(rec["R"])
        if kind == "scale":
            x = _nonzero(L, _elem(L, params, "x"), "x")
            y = _nonzero(L, _elem(L, params, "y"), "y")
            sL = tw.s % tw.m
            l2 = fd.mul(L, l, fd.mul(L, fd.frobenius(L, x, sL), fd.inv(L, x)))
            R2 = fd.mul(L, R, fd.mul(L, fd.frobenius(L, y, sL), y))
            return make_C(tw, l2, R2)
        if kind == "flip":
            tw2 = tws.build_tower(tw.p, tw.m, tw.m - tw.s)
            return make_C(tw2, fd.inv(L, l), R)
        raise WrongFamily(f"unknown transform {kind!r} for family C")
    if fam == "A":
        tw = P.tower
        L, F = tw.L, tw.F
        rec = P.provenance["params"]
        l, mu = tuple(rec["l"]), tuple(rec["mu"])
        if kind == "scale":
            alpha = params.get("alpha")
            if alpha is None:
                raise InvalidTransformParams("missing transform parameter 'alpha'")
            alpha = tuple(int(c) % F.p for c in alpha)
            if F.idx(alpha) == 0:
                raise InvalidTransformParams("'alpha' must be nonzero")
            k = _nonzero(L, _elem(L, params, "k"), "k") if "k" in params else fd.one(L)
            sL = tw.s % tw.m
            na = tws.unembed(tw, fd.mul(F, alpha, tws.conj(tw, alpha)))
            nas = fd.mul(L, fd.frobenius(L, na, sL), fd.inv(L, na))
            l2 = fd.mul(L, l, fd.inv(L, nas))
            ratio = fd.mul(F, fd.frobenius(F, alpha, tw.s % (2 * tw.m)),
                           fd.inv(F, tws.conj(tw, alpha)))
            mu2 = fd.mul(F, fd.mul(F, mu, ratio), tws.embed(tw, k))
            return make_A(tw, l2, mu2)
        raise WrongFamily(f"unknown transform {kind!r} for family A")
    raise WrongFamily(f"no transforms defined for family {fam!r}")
