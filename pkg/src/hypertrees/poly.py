"""Exact sparse multivariate polynomials over the integers.

Monomials are packed into a single Python integer: the total degree sits in
the most significant 16-bit field, followed by one field per variable in
context order.  Integer comparison of packed keys is then exactly the
graded-lex order with earlier variables larger, and multiplying monomials is
integer addition.
"""

from __future__ import annotations

import heapq
import math
import re
from fractions import Fraction
from itertools import combinations

from .errors import BudgetExceeded, ContextMismatch, InputError

BITS = 16
MASK = (1 << BITS) - 1


class Context:
    """An ordered tuple of variable names shared by polynomials."""

    __slots__ = ("names", "_index", "_shifts", "_deg_unit")

    def __init__(self, names):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise InputError(f"duplicate variable names in {names}")
        self.names = names
        self._index = {v: i for i, v in enumerate(names)}
        m = len(names)
        self._shifts = tuple(BITS * (m - 1 - i) for i in range(m))
        self._deg_unit = 1 << (BITS * m)

    def __len__(self):
        return len(self.names)

    def __eq__(self, other):
        return isinstance(other, Context) and self.names == other.names

    def __hash__(self):
        return hash(self.names)

    def __repr__(self):
        return f"Context{self.names}"

    def index(self, name):
        try:
            return self._index[name]
        except KeyError:
            raise InputError(f"unknown variable {name!r}") from None

    def __contains__(self, name):
        return name in self._index

    def extend(self, *names):
        return Context(self.names + tuple(names))

    def pack(self, exps):
        if len(exps) != len(self.names):
            raise InputError("exponent vector has wrong arity")
        key = 0
        total = 0
        for e, s in zip(exps, self._shifts):
            if e < 0 or e > MASK:
                raise InputError(f"exponent {e} out of range")
            key |= e << s
            total += e
        if total > MASK:
            raise InputError("total degree out of range")
        return key | (total * self._deg_unit)

    def unpack(self, key):
        return tuple((key >> s) & MASK for s in self._shifts)

    def var_unit(self, i):
        return (1 << self._shifts[i]) + self._deg_unit

    def var(self, name):
        return Poly(self, {self.var_unit(self.index(name)): 1})

    def vars(self):
        return [self.var(v) for v in self.names]

    def const(self, c):
        c = int(c)
        return Poly(self, {0: c} if c else {})

    def zero(self):
        return Poly(self, {})

    def one(self):
        return Poly(self, {0: 1})


def key_degree(ctx, key):
    return key >> (BITS * len(ctx.names))


class Poly:
    """Immutable sparse polynomial with integer coefficients."""

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx, terms):
        self.ctx = ctx
        self.terms = terms

    @classmethod
    def from_terms(cls, ctx, items):
        """Build from (exponent tuple, coefficient) pairs."""
        out = {}
        for exps, c in items:
            k = ctx.pack(exps)
            v = out.get(k, 0) + int(c)
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return cls(ctx, out)

    def _check(self, other):
        if isinstance(other, int):
            return self.ctx.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        if other.ctx != self.ctx:
            raise ContextMismatch(f"{self.ctx} vs {other.ctx}")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for k, c in other.terms.items():
            v = out.get(k, 0) + c
            if v:
                out[k] = v
            else:
                del out[k]
        return Poly(self.ctx, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.ctx, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        if a and b:
            top = max(a) + max(b)
            if key_degree(self.ctx, top) > MASK:
                raise InputError("total degree out of range")
        out = {}
        get = out.get
        for kb, cb in b.items():
            for ka, ca in a.items():
                k = ka + kb
                out[k] = get(k, 0) + ca * cb
        return Poly(self.ctx, {k: c for k, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            raise InputError("negative power")
        result = self.ctx.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ctx.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.ctx == other.ctx and self.terms == other.terms

    def __hash__(self):
        return hash((self.ctx, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        return f"Poly({to_text(self)})"

    def items(self):
        """(exponent tuple, coefficient) pairs in descending graded-lex order."""
        for k in sorted(self.terms, reverse=True):
            yield self.ctx.unpack(k), self.terms[k]

    def total_degree(self):
        if not self.terms:
            return -1
        return key_degree(self.ctx, max(self.terms))

    def degree_in(self, name):
        i = self.ctx.index(name)
        s = self.ctx._shifts[i]
        return max(((k >> s) & MASK for k in self.terms), default=-1)

    def leading(self):
        if not self.terms:
            raise InputError("zero polynomial has no leading term")
        k = max(self.terms)
        return self.ctx.unpack(k), self.terms[k]

    def content(self):
        g = 0
        for c in self.terms.values():
            g = math.gcd(g, c)
        return g

    def support(self):
        """Names of variables that occur."""
        used = set()
        for k in self.terms:
            for i, e in enumerate(self.ctx.unpack(k)):
                if e:
                    used.add(i)
        return [self.ctx.names[i] for i in sorted(used)]

    def evaluate(self, values):
        """Evaluate at a mapping name -> number (int, Fraction, mpf, ...)."""
        vals = [values[v] for v in self.ctx.names]
        total = 0
        for exps, c in self.items():
            t = c
            for x, e in zip(vals, exps):
                if e:
                    t = t * x**e
            total = total + t
        return total

    def embed(self, ctx):
        """Re-express in a context containing all of this context's variables."""
        idx = [ctx.index(v) for v in self.ctx.names]
        out = {}
        for k, c in self.terms.items():
            exps = self.ctx.unpack(k)
            full = [0] * len(ctx)
            for i, e in zip(idx, exps):
                full[i] = e
            out[ctx.pack(full)] = c
        return Poly(ctx, out)


def to_text(p):
    if not p.terms:
        return "0"
    parts = []
    for exps, c in p.items():
        factors = []
        for name, e in zip(p.ctx.names, exps):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        mono = "*".join([str(abs(c))] + factors)
        if not parts:
            parts.append(("-" if c < 0 else "") + mono)
        else:
            parts.append(("- " if c < 0 else "+ ") + mono)
    return " ".join(parts)


_TERM = re.compile(r"([+-]?)\s*([^+-]+)")


def parse(text, ctx):
    """Parse the canonical text format (whitespace tolerant)."""
    s = text.replace(" ", "").replace("\t", "").replace("\n", "")
    if not s:
        raise InputError("empty polynomial text")
    out = ctx.zero()
    pos = 0
    for m in _TERM.finditer(s):
        if m.start() != pos:
            raise InputError(f"cannot parse near {s[pos:]!r}")
        pos = m.end()
        sign = -1 if m.group(1) == "-" else 1
        coef = sign
        exps = [0] * len(ctx)
        for factor in m.group(2).split("*"):
            if not factor:
                raise InputError(f"empty factor in {m.group(0)!r}")
            if factor.isdigit():
                coef *= int(factor)
                continue
            name, _, e = factor.partition("^")
            exps[ctx.index(name)] += int(e) if e else 1
        out = out + Poly.from_terms(ctx, [(exps, coef)])
    if pos != len(s):
        raise InputError(f"cannot parse near {s[pos:]!r}")
    return out


def derivative(p, name):
    i = p.ctx.index(name)
    s = p.ctx._shifts[i]
    unit = p.ctx.var_unit(i)
    out = {}
    for k, c in p.terms.items():
        e = (k >> s) & MASK
        if e:
            out[k - unit] = c * e
    return Poly(p.ctx, out)


def substitute(p, mapping, target=None):
    """Simultaneously replace variables by polynomials.

    All replacement polynomials live in one target context; variables of p
    that are not replaced must also exist there.
    """
    if target is None:
        if mapping:
            target = next(iter(mapping.values())).ctx
        else:
            target = p.ctx
    for name, q in mapping.items():
        p.ctx.index(name)
        if q.ctx != target:
            raise ContextMismatch("replacement polynomials must share one context")
    images = []
    for name in p.ctx.names:
        if name in mapping:
            images.append(mapping[name])
        else:
            images.append(target.var(name))
    cache = {}

    def power(i, e):
        key = (i, e)
        if key not in cache:
            cache[key] = images[i] ** e
        return cache[key]

    out = target.zero()
    acc = {}
    for k, c in p.terms.items():
        t = target.const(c)
        for i, e in enumerate(p.ctx.unpack(k)):
            if e:
                t = t * power(i, e)
        for kk, cc in t.terms.items():
            v = acc.get(kk, 0) + cc
            if v:
                acc[kk] = v
            else:
                acc.pop(kk, None)
    out = Poly(target, acc)
    return out


def canonicalize(p):
    """Divide by the content and make the leading coefficient positive."""
    if not p.terms:
        raise InputError("cannot canonicalize the zero polynomial")
    g = p.content()
    if p.terms[max(p.terms)] < 0:
        g = -g
    return Poly(p.ctx, {k: c // g for k, c in p.terms.items()})


def divide_exact(p, q):
    """Return p / q, raising InputError when q does not divide p over Z."""
    if q.ctx != p.ctx:
        raise ContextMismatch("division across contexts")
    if not q.terms:
        raise InputError("division by zero polynomial")
    lk = max(q.terms)
    lc = q.terms[lk]
    rem = dict(p.terms)
    heap = [-k for k in rem]
    heapq.heapify(heap)
    quot = {}
    ctx = p.ctx
    lexps = ctx.unpack(lk)
    while rem:
        k = -heapq.heappop(heap)
        c = rem.get(k)
        if c is None:
            continue
        exps = ctx.unpack(k)
        if any(a < b for a, b in zip(exps, lexps)) or c % lc:
            raise InputError("polynomial division is not exact")
        qk = k - lk
        qc = c // lc
        quot[qk] = qc
        for kk, cc in q.terms.items():
            t = kk + qk
            v = rem.get(t, 0) - cc * qc
            if v:
                if t not in rem:
                    heapq.heappush(heap, -t)
                rem[t] = v
            else:
                rem.pop(t, None)
    return Poly(ctx, quot)


# -- determinants ---------------------------------------------------------

def _check_square(rows):
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise InputError("determinant of a non-square matrix")
    ctxs = {e.ctx for r in rows for e in r}
    if len(ctxs) > 1:
        raise ContextMismatch("matrix entries use different contexts")
    return n


def determinant(rows, budget=None):
    """Laplace expansion along rows, memoised on column subsets."""
    n = _check_square(rows)
    if n == 0:
        raise InputError("empty matrix")
    ctx = rows[0][0].ctx
    memo = {0: ctx.one()}

    def minor(cols):
        # rows n - popcount(cols) .. n-1 against the column set `cols`
        if cols in memo:
            return memo[cols]
        r = n - bin(cols).count("1")
        total = ctx.zero()
        sign = 1
        for j in range(n):
            if cols >> j & 1:
                entry = rows[r][j]
                if entry.terms:
                    sub = minor(cols & ~(1 << j))
                    if sub.terms:
                        prod = entry * sub
                        total = total + prod if sign > 0 else total - prod
                sign = -sign
        if budget is not None and len(total) > budget:
            raise BudgetExceeded(f"determinant minor exceeds {budget} terms")
        memo[cols] = total
        return total

    return minor((1 << n) - 1)


def determinant_bareiss(rows):
    """Fraction-free elimination with exact polynomial divisions."""
    n = _check_square(rows)
    if n == 0:
        raise InputError("empty matrix")
    ctx = rows[0][0].ctx
    m = [list(r) for r in rows]
    sign = 1
    prev = ctx.one()
    for k in range(n - 1):
        if not m[k][k].terms:
            for i in range(k + 1, n):
                if m[i][k].terms:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return ctx.zero()
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[k][k] * m[i][j] - m[i][k] * m[k][j]
                m[i][j] = divide_exact(num, prev)
        prev = m[k][k]
    det = m[n - 1][n - 1]
    return det if sign > 0 else -det


# -- multiplicity along diagonals ------------------------------------------

def diagonal_multiplicity(p, subset):
    """Vanishing order of p along the locus where the variables in subset agree.

    Each variable v in subset is replaced by y + u_v with fresh symbols, and
    the minimum total u-degree of the result is returned.
    """
    if not p.terms:
        raise InputError("zero polynomial")
    subset = list(subset)
    if len(subset) < 2 or len(set(subset)) != len(subset):
        raise InputError("need at least two distinct variables")
    for v in subset:
        p.ctx.index(v)
    y = "_y"
    while y in p.ctx:
        y = "_" + y
    us = [f"{y}_u{i}" for i in range(len(subset))]
    big = p.ctx.extend(y, *us)
    yv = big.var(y)
    mapping = {v: yv + big.var(u) for v, u in zip(subset, us)}
    q = substitute(p, mapping, big)
    first = len(p.ctx) + 1
    best = None
    for k in q.terms:
        d = sum(big.unpack(k)[first:])
        if best is None or d < best:
            best = d
    return best


def interpolate(xs, ys):
    """Coefficients (lowest degree first) of the interpolating polynomial, exact."""
    xs = [Fraction(x) for x in xs]
    n = len(xs)
    coeffs = [Fraction(0)] * n
    for i in range(n):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j in range(n):
            if j == i:
                continue
            basis = [Fraction(0)] + basis
            for t in range(len(basis) - 1):
                basis[t] -= xs[j] * basis[t + 1]
            denom *= xs[i] - xs[j]
        scale = Fraction(ys[i]) / denom
        for t in range(n):
            coeffs[t] += scale * basis[t]
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def subsets_of(names, smallest=2):
    for r in range(smallest, len(names) + 1):
        yield from combinations(names, r)
