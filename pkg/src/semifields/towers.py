"""Quadratic towers L = GF(p^m) inside F = GF(p^{2m}).

For odd p the tower fixes a canonical non-square n of L, a square root
omega of n in F (so F = L + L*omega), and N = omega^(sigma-1) with
sigma = p^s.  Conjugation is x -> x^(p^m), the relative trace is
T(x) = x + conj(x), and (a, b) coordinates mean a + b*omega.

Characteristic 2 has no such omega; coordinate ops raise CharTwoUnsupported
there, while embed / conj / rel_trace still work.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import fields as fd
from .errors import CharTwoUnsupported, EmbeddingFailure, SigmaOutOfRange
from .fields import Element, FieldCtx
from .linalg import kernel_basis


@dataclass(eq=False)
class Tower:
    p: int
    m: int
    s: int
    L: FieldCtx
    F: FieldCtx
    embed_idx: np.ndarray
    unembed_idx: np.ndarray
    conj_idx: np.ndarray
    reltr_idx: np.ndarray
    omega_idx: int
    n: Element | None
    N: Element | None
    to_a: np.ndarray | None
    to_b: np.ndarray | None
    from_ab: np.ndarray | None

    def sigma_vec(self, xs):
        """x^(p^s) on F-index arrays."""
        return self.F.frob_vec(self.s, xs)

    def sigma_L_vec(self, xs):
        """x^(p^s) on L-index arrays (s = m acts trivially)."""
        return self.L.frob_vec(self.s % self.m, xs)

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "m": self.m,
            "s": self.s,
            "modulus_L": list(self.L.spec.modulus),
            "modulus_F": list(self.F.spec.modulus),
            "omega": list(self.F.coeffs(self.omega_idx)),
            "n": list(self.n) if self.n is not None else None,
        }


def minimal_polynomial(ctx: FieldCtx, x: Element) -> tuple[int, ...]:
    """Monic minimal polynomial of x over GF(p), coefficients low-to-high."""
    p, m = ctx.p, ctx.m
    rows = []
    cur = fd.one(ctx)
    for _ in range(m + 1):
        rows.append(cur)
        cur = fd.mul(ctx, cur, x)
    for deg in range(1, m + 1):
        mat = np.array(rows[: deg + 1], dtype=np.int64)
        ker = kernel_basis(mat.T, p)
        for vec in ker:
            if vec[deg]:
                inv_lead = pow(int(vec[deg]), p - 2, p)
                return tuple(int(c) * inv_lead % p for c in vec)
    raise EmbeddingFailure("no minimal polynomial found (unreachable)")


def _roots_in(ctx: FieldCtx, poly: tuple[int, ...]) -> np.ndarray:
    """All roots (as indices, ascending) of a GF(p)-coefficient polynomial in ctx."""
    coeff_idx = [ctx.idx(fd.from_int(ctx, c)) for c in poly]
    vals = fd.eval_poly_vec(ctx, coeff_idx, np.arange(ctx.order))
    return np.nonzero(vals == 0)[0]


_CACHE: dict[tuple[int, int, int], Tower] = {}


def build_tower(p: int, m: int, s: int) -> Tower:
    """L = GF(p^m) embedded in F = GF(p^{2m}) with sigma = p^s, 0 <= s <= m."""
    if not 0 <= s <= m:
        raise SigmaOutOfRange(f"s={s} outside [0, {m}]")
    key = (p, m, s)
    if key in _CACHE:
        return _CACHE[key]
    L = fd.build_field(p, m)
    F = fd.build_field(p, 2 * m)
    qL, qF = L.order, F.order

    minpoly = minimal_polynomial(L, L.generator)
    roots = _roots_in(F, minpoly)
    if roots.size == 0:
        raise EmbeddingFailure("generator minimal polynomial has no root upstairs")
    r = int(roots[0])  # smallest element index = lex-smallest coefficients

    embed = np.zeros(qL, dtype=np.int64)
    ks = np.arange(qL - 1, dtype=np.int64)
    log_r = int(F.log_table[r])
    embed[L._exp[ks]] = F._exp[(ks * log_r) % (qF - 1)]
    embed[L.one_idx] = F.one_idx
    unembed = np.full(qF, -1, dtype=np.int64)
    unembed[embed] = np.arange(qL, dtype=np.int64)
    # the power map is automatically a ring isomorphism; spot-check addition anyway
    for i in (1, 2, qL - 1, qL // 2):
        j = (i * 7 + 1) % qL
        if embed[int(L.add_vec(i, j))] != int(F.add_vec(int(embed[i]), int(embed[j]))):
            raise EmbeddingFailure("embedding does not respect addition")

    conj = np.asarray(F._frob[m], dtype=np.int64)
    reltr_F = F.add_vec(np.arange(qF), conj)
    reltr = unembed[reltr_F]
    if (reltr < 0).any():
        raise EmbeddingFailure("relative trace left the base field")

    if p == 2:
        tw = Tower(p, m, s, L, F, embed, unembed, conj, reltr,
                   F.one_idx, None, None, None, None, None)
        _CACHE[key] = tw
        return tw

    # canonical non-square of L: smallest index with odd discrete log
    n_idx = next(i for i in range(1, qL) if int(L.log_table[i]) % 2 == 1)
    n = L.coeffs(n_idx)
    e = int(F.log_table[int(embed[n_idx])])
    assert e % 2 == 0  # every element of L is a square in F
    r1 = int(F._exp[e // 2])
    omega_idx = min(r1, int(F._neg[r1]))
    # omega is a square root of n not in L, with trace zero
    assert int(F.mul_vec(omega_idx, omega_idx)) == int(embed[n_idx])
    assert unembed[omega_idx] == -1
    assert reltr_F[omega_idx] == 0

    sig_omega = int(F.frob_vec(s, omega_idx))
    N_idx_F = int(F.mul_vec(sig_omega, int(F._inv[omega_idx])))
    N_idx = int(unembed[N_idx_F])
    if N_idx < 0:
        raise EmbeddingFailure("omega^(sigma-1) is not in the base field")
    N = L.coeffs(N_idx)
    assert N == fd.pow_element(L, n, (p ** s - 1) // 2)

    grid_a, grid_b = np.meshgrid(np.arange(qL), np.arange(qL), indexing="ij")
    from_ab = F.add_vec(embed[grid_a], F.scalar_mul_vec(omega_idx, embed[grid_b]))
    flat = from_ab.ravel()
    assert np.unique(flat).size == qF  # (a,b) -> a + b*omega is a bijection
    to_a = np.empty(qF, dtype=np.int64)
    to_b = np.empty(qF, dtype=np.int64)
    to_a[flat] = grid_a.ravel()
    to_b[flat] = grid_b.ravel()

    tw = Tower(p, m, s, L, F, embed, unembed, conj, reltr,
               omega_idx, n, N, to_a, to_b, from_ab)
    _CACHE[key] = tw
    return tw


def embed(tw: Tower, x: Element) -> Element:
    return tw.F.coeffs(int(tw.embed_idx[tw.L.idx(x)]))


def unembed(tw: Tower, x: Element) -> Element:
    i = int(tw.unembed_idx[tw.F.idx(x)])
    if i < 0:
        raise EmbeddingFailure("element is not in the base field")
    return tw.L.coeffs(i)


def conj(tw: Tower, x: Element) -> Element:
    return tw.F.coeffs(int(tw.conj_idx[tw.F.idx(x)]))


def rel_trace(tw: Tower, x: Element) -> Element:
    """T(x) = x + conj(x), returned as an element of L."""
    return tw.L.coeffs(int(tw.reltr_idx[tw.F.idx(x)]))


def to_coords(tw: Tower, x: Element) -> tuple[Element, Element]:
    """x = a + b*omega with a, b in L."""
    if tw.p == 2:
        raise CharTwoUnsupported("no omega-coordinates in characteristic 2")
    i = tw.F.idx(x)
    return tw.L.coeffs(int(tw.to_a[i])), tw.L.coeffs(int(tw.to_b[i]))


def from_coords(tw: Tower, a: Element, b: Element) -> Element:
    if tw.p == 2:
        raise CharTwoUnsupported("no omega-coordinates in characteristic 2")
    return tw.F.coeffs(int(tw.from_ab[tw.L.idx(a), tw.L.idx(b)]))


def omega(tw: Tower) -> Element:
    return tw.F.coeffs(tw.omega_idx)
