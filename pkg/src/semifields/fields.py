"""Finite fields GF(p^m) with table-backed arithmetic.

Elements are coefficient tuples ``(c0, ..., c_{m-1})`` for ``c0 + c1*t + ...``
against a fixed monic irreducible modulus.  The element *index* packs the
coefficients with c0 most significant, so index order coincides with
lexicographic coefficient order (c0 compared first).

For p^m <= 2**16 a context carries dense log/antilog, frobenius, negation and
inversion tables; vectorised kernels operate directly on index arrays.  Larger
fields (rarely needed here) fall back to scalar polynomial arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from itertools import product

import numpy as np

from .errors import (
    DegreeMismatch,
    DivisionByZero,
    IndexOutOfRange,
    NotADivisor,
    NotPrime,
    OrderNotDividing,
    ReducibleModulus,
    ZeroArgument,
)

Element = tuple[int, ...]

TABLE_LIMIT = 2 ** 16  # log/antilog tables built up to this order (inclusive)
ADD_TABLE_LIMIT = 2048  # dense addition table for odd p up to this order


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# -- scalar polynomial arithmetic (bootstrap + fallback) ----------------------


def _pmulmod(a: tuple[int, ...], b: tuple[int, ...], mod: tuple[int, ...], p: int) -> tuple[int, ...]:
    m = len(mod) - 1
    res = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                res[i + j] = (res[i + j] + ai * bj) % p
    for i in range(len(res) - 1, m - 1, -1):
        c = res[i]
        if c:
            res[i] = 0
            for j in range(m):
                res[i - m + j] = (res[i - m + j] - c * mod[j]) % p
    res = res[:m] + [0] * (m - len(res))
    return tuple(res[:m])


def _polpow_mod(base: tuple[int, ...], e: int, mod: tuple[int, ...], p: int) -> tuple[int, ...]:
    m = len(mod) - 1
    result = tuple([1] + [0] * (m - 1))
    acc = base
    while e:
        if e & 1:
            result = _pmulmod(result, acc, mod, p)
        acc = _pmulmod(acc, acc, mod, p)
        e >>= 1
    return result


def _poldeg(a: list[int]) -> int:
    for i in range(len(a) - 1, -1, -1):
        if a[i]:
            return i
    return -1


def _polgcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = list(a), list(b)
    while _poldeg(b) >= 0:
        da, db = _poldeg(a), _poldeg(b)
        if da < db:
            a, b = b, a
            continue
        lead = a[da] * pow(b[db], p - 2, p) % p
        for j in range(db + 1):
            a[da - db + j] = (a[da - db + j] - lead * b[j]) % p
        if _poldeg(a) < _poldeg(b):
            a, b = b, a
    return a


def _is_irreducible(p: int, f: tuple[int, ...]) -> bool:
    """Degree-m monic f: t^(p^m) == t mod f and gcd(t^(p^(m/r)) - t, f) = 1 for primes r | m."""
    m = len(f) - 1
    if m == 1:
        return True
    t = tuple([0, 1] + [0] * (m - 2))
    frob_powers = {}
    cur = t
    for i in range(1, m + 1):
        cur = _polpow_mod(cur, p, f, p)
        frob_powers[i] = cur
    if frob_powers[m] != t:
        return False
    for r in _prime_factors(m):
        diff = [(frob_powers[m // r][j] - t[j]) % p for j in range(m)]
        g = _polgcd(list(f), diff, p)
        if _poldeg(g) != 0:
            return False
    return True


def _lex_smallest_modulus(p: int, m: int) -> tuple[int, ...]:
    for low in product(range(p), repeat=m):
        f = tuple(low) + (1,)
        if _is_irreducible(p, f):
            return f
    raise ReducibleModulus("no irreducible polynomial found (unreachable)")


# -- field context ------------------------------------------------------------


@dataclass(eq=False)
class FieldSpec:
    p: int
    m: int
    modulus: tuple[int, ...]  # low-to-high, length m+1, monic

    def to_json(self) -> dict:
        return {"p": self.p, "m": self.m, "modulus": list(self.modulus)}


class FieldCtx:
    """Arithmetic context for one GF(p^m); built by build_field, treat as immutable."""

    def __init__(self, spec: FieldSpec):
        self.spec = spec
        p, m = spec.p, spec.m
        self.p = p
        self.m = m
        self.order = p ** m
        q = self.order
        self._weights = np.array([p ** (m - 1 - i) for i in range(m)], dtype=np.int64)
        self.zero_idx = 0
        self.one_idx = int(self._weights[0])  # 1 = (1,0,...,0), c0 most significant
        self.tables = q <= TABLE_LIMIT
        self.log_table: np.ndarray | None = None
        if self.tables:
            self._dig = np.empty((q, m), dtype=np.int16)
            ar = np.arange(q, dtype=np.int64)
            for i in range(m):
                self._dig[:, i] = (ar // self._weights[i]) % p
            self._neg = np.asarray(((p - self._dig) % p) @ self._weights, dtype=np.int64)
            self._add_tab = None
            if p == 2:
                pass  # addition is XOR on indices
            elif q <= ADD_TABLE_LIMIT:
                tab = (self._dig[:, None, :] + self._dig[None, :, :]) % p
                self._add_tab = np.asarray(tab.astype(np.int64) @ self._weights, dtype=np.int64)
        self.generator = self._find_generator()
        if self.tables:
            self._build_log_tables()

    # bootstrap scalar product straight off the modulus
    def _mul_poly(self, x: Element, y: Element) -> Element:
        return _pmulmod(x, y, self.spec.modulus, self.p)

    def _pow_poly(self, x: Element, e: int) -> Element:
        return _polpow_mod(x, e, self.spec.modulus, self.p)

    def _find_generator(self) -> Element:
        q = self.order
        one = self.coeffs(self.one_idx)
        primes = _prime_factors(q - 1)
        for i in range(1, q):
            x = self.coeffs(i)
            if all(self._pow_poly(x, (q - 1) // r) != one for r in primes):
                return x
        raise ReducibleModulus("no generator found: modulus is not irreducible")

    def _build_log_tables(self) -> None:
        p, m, q = self.p, self.m, self.order
        # powers of the generator via doubling on blocks of coefficient rows
        g = self.generator
        mg = np.zeros((m, m), dtype=np.int64)
        for j in range(m):
            basis = tuple(1 if i == j else 0 for i in range(m))
            mg[:, j] = self._mul_poly(g, basis)
        block = np.zeros((1, m), dtype=np.int64)
        block[0, 0] = 1  # the constant 1
        step = mg
        while block.shape[0] < q - 1:
            ext = block @ step.T % p
            block = np.vstack([block, ext])
            step = step @ step % p
        block = block[: q - 1]
        exp_idx = np.asarray(block @ self._weights, dtype=np.int64)
        log = np.empty(q, dtype=np.int64)
        log[exp_idx] = np.arange(q - 1, dtype=np.int64)
        log[0] = 2 * (q - 1)  # sentinel: any sum involving it hits the zero pad
        self.log_table = log
        pad = np.zeros(4 * (q - 1) + 1, dtype=np.int64)
        ks = np.arange(2 * (q - 1) - 1, dtype=np.int64)
        pad[ks] = exp_idx[ks % (q - 1)]
        self._exp_pad = pad
        self._exp = exp_idx
        inv = np.zeros(q, dtype=np.int64)
        nz = np.arange(1, q, dtype=np.int64)
        inv[nz] = exp_idx[(q - 1 - log[nz]) % (q - 1)]
        self._inv = inv
        frob = np.empty((m, q), dtype=np.int64)
        for s in range(m):
            frob[s, 0] = 0
            frob[s, nz] = exp_idx[(log[nz] * pow(p, s, q - 1)) % (q - 1)]
        self._frob = frob

    # -- vectorised index kernels --------------------------------------------

    def idx(self, x: Element) -> int:
        if len(x) != self.m:
            raise DegreeMismatch(f"element has {len(x)} coefficients, expected {self.m}")
        return int(sum((c % self.p) * w for c, w in zip(x, self._weights)))

    def coeffs(self, i: int) -> Element:
        if not 0 <= i < self.order:
            raise IndexOutOfRange(f"index {i} outside [0, {self.order})")
        out = []
        for w in self._weights:
            out.append(int(i // w) % self.p)
        return tuple(out)

    def idx_vec(self, coeff_rows: np.ndarray) -> np.ndarray:
        return np.asarray(coeff_rows, dtype=np.int64) % self.p @ self._weights

    def add_vec(self, xs, ys):
        if self.p == 2:
            return np.bitwise_xor(xs, ys)
        if self._add_tab is not None:
            return self._add_tab[xs, ys]
        return ((self._dig[xs] + self._dig[ys]) % self.p).astype(np.int64) @ self._weights

    def neg_vec(self, xs):
        return self._neg[xs]

    def sub_vec(self, xs, ys):
        return self.add_vec(xs, self._neg[ys])

    def mul_vec(self, xs, ys):
        return self._exp_pad[self.log_table[xs] + self.log_table[ys]]

    def inv_vec(self, xs):
        return self._inv[xs]

    def frob_vec(self, s: int, xs):
        return self._frob[s % self.m][xs]

    def pow_vec(self, xs, e: int):
        """x^e elementwise; zero maps to zero for e > 0, x^0 == 1 (table contexts only)."""
        if e == 0:
            return np.full(np.shape(xs), self.one_idx, dtype=np.int64)
        q1 = self.order - 1
        er = e % q1 if e >= q1 or e < 0 else e
        out = self._exp_pad[(self.log_table[xs] * er) % q1]
        return np.where(np.asarray(xs) == 0, 0, out)

    def scalar_mul_vec(self, c_idx: int, xs):
        if c_idx == 0:
            return np.zeros(np.shape(xs), dtype=np.int64)
        return self._exp_pad[self.log_table[c_idx] + self.log_table[xs]]


_CACHE: dict[tuple, FieldCtx] = {}


def build_field(p: int, m: int, modulus: tuple[int, ...] | None = None) -> FieldCtx:
    """Construct GF(p^m) with the lexicographically-smallest modulus unless one is given."""
    if not isinstance(p, int) or not _is_prime(p):
        raise NotPrime(f"p={p} is not prime")
    if not isinstance(m, int) or m < 1:
        raise DegreeMismatch(f"extension degree m={m} must be >= 1")
    key = (p, m, tuple(modulus) if modulus is not None else None)
    if key in _CACHE:
        return _CACHE[key]
    if modulus is None:
        mod = _lex_smallest_modulus(p, m)
    else:
        mod = tuple(int(c) % p for c in modulus)
        if len(mod) != m + 1 or mod[-1] != 1:
            raise DegreeMismatch(f"modulus must be monic of degree {m}")
        if not _is_irreducible(p, mod):
            raise ReducibleModulus(f"modulus {list(mod)} is reducible over GF({p})")
    ctx = FieldCtx(FieldSpec(p, m, mod))
    _CACHE[key] = ctx
    return ctx


# -- public scalar operations -------------------------------------------------


def element_index(ctx: FieldCtx, x: Element) -> int:
    return ctx.idx(x)


def element_from_index(ctx: FieldCtx, i: int) -> Element:
    return ctx.coeffs(i)


def zero(ctx: FieldCtx) -> Element:
    return tuple([0] * ctx.m)


def one(ctx: FieldCtx) -> Element:
    return tuple([1] + [0] * (ctx.m - 1))


def from_int(ctx: FieldCtx, c: int) -> Element:
    """Constant c mod p as a field element."""
    return tuple([c % ctx.p] + [0] * (ctx.m - 1))


def add(ctx: FieldCtx, x: Element, y: Element) -> Element:
    return tuple((a + b) % ctx.p for a, b in zip(x, y))


def neg(ctx: FieldCtx, x: Element) -> Element:
    return tuple((-a) % ctx.p for a in x)


def sub(ctx: FieldCtx, x: Element, y: Element) -> Element:
    return tuple((a - b) % ctx.p for a, b in zip(x, y))


def mul(ctx: FieldCtx, x: Element, y: Element) -> Element:
    if ctx.tables:
        return ctx.coeffs(int(ctx.mul_vec(ctx.idx(x), ctx.idx(y))))
    return ctx._mul_poly(x, y)


def pow_element(ctx: FieldCtx, x: Element, e: int) -> Element:
    """Square-and-multiply; negative exponents invert first."""
    if e < 0:
        return pow_element(ctx, inv(ctx, x), -e)
    if e == 0:
        return one(ctx)
    if ctx.tables:
        return ctx.coeffs(int(ctx.pow_vec(np.asarray(ctx.idx(x)), e)))
    return ctx._pow_poly(x, e)


def inv(ctx: FieldCtx, x: Element) -> Element:
    i = ctx.idx(x)
    if i == 0:
        raise DivisionByZero("0 has no multiplicative inverse")
    if ctx.tables:
        return ctx.coeffs(int(ctx._inv[i]))
    return ctx._pow_poly(x, ctx.order - 2)


def frobenius(ctx: FieldCtx, x: Element, s: int) -> Element:
    if not 0 <= s < ctx.m:
        raise IndexOutOfRange(f"frobenius power s={s} outside [0, {ctx.m})")
    if ctx.tables:
        return ctx.coeffs(int(ctx.frob_vec(s, ctx.idx(x))))
    return ctx._pow_poly(x, ctx.p ** s)


def trace_to(ctx: FieldCtx, x: Element, d: int) -> Element:
    """Relative trace onto GF(p^d): sum of x^(p^(d*i)), d | m."""
    if d < 1 or ctx.m % d != 0:
        raise NotADivisor(f"d={d} does not divide m={ctx.m}")
    acc = zero(ctx)
    for i in range(ctx.m // d):
        acc = add(ctx, acc, frobenius(ctx, x, d * i))
    return acc


def norm_to(ctx: FieldCtx, x: Element, d: int) -> Element:
    """Relative norm onto GF(p^d): product of x^(p^(d*i)), d | m."""
    if d < 1 or ctx.m % d != 0:
        raise NotADivisor(f"d={d} does not divide m={ctx.m}")
    acc = one(ctx)
    for i in range(ctx.m // d):
        acc = mul(ctx, acc, frobenius(ctx, x, (d * i) % ctx.m))
    return acc


def multiplicative_order(ctx: FieldCtx, x: Element) -> int:
    if ctx.idx(x) == 0:
        raise ZeroArgument("0 has no multiplicative order")
    n = ctx.order - 1
    for r in _prime_factors(n):
        while n % r == 0 and pow_element(ctx, x, n // r) == one(ctx):
            n //= r
    return n


def in_power_subgroup(ctx: FieldCtx, x: Element, k: int) -> bool:
    """Is x in {t^k : t in F*}?  Explicit power test, log-table cross-check."""
    i = ctx.idx(x)
    if i == 0:
        raise ZeroArgument("subgroup membership is for nonzero elements")
    q1 = ctx.order - 1
    g = math.gcd(k, q1)
    # polynomial-route exponentiation, deliberately independent of the log tables
    member = ctx._pow_poly(x, q1 // g) == one(ctx)
    if ctx.log_table is not None:
        assert member == (int(ctx.log_table[i]) % g == 0)
    return member


def in_product_subgroup(ctx: FieldCtx, x: Element, orders: list[int]) -> bool:
    """Is x in the product of the cyclic subgroups with the given orders?"""
    i = ctx.idx(x)
    if i == 0:
        raise ZeroArgument("subgroup membership is for nonzero elements")
    q1 = ctx.order - 1
    for d in orders:
        if d < 1 or q1 % d != 0:
            raise OrderNotDividing(f"order {d} does not divide {q1}")
    l = reduce(math.lcm, orders, 1)
    member = ctx._pow_poly(x, l) == one(ctx)
    if ctx.log_table is not None:
        assert member == (int(ctx.log_table[i]) % (q1 // l) == 0)
    return member


def eval_poly_vec(ctx: FieldCtx, coeff_idx: list[int], xs: np.ndarray) -> np.ndarray:
    """Horner evaluation of a polynomial (coefficient indices, low-to-high) at index array xs."""
    acc = np.full(np.shape(xs), coeff_idx[-1], dtype=np.int64)
    for c in reversed(coeff_idx[:-1]):
        acc = ctx.mul_vec(acc, xs)
        if c:
            acc = ctx.add_vec(acc, np.full(np.shape(xs), c, dtype=np.int64))
    return acc
