"""Dense univariate polynomials over F_{p^2}.

Coefficients are held as a pair of int64 numpy arrays (c0 part, c1 part),
constant term first.  Bulk multiplication goes through integer convolution:
schoolbook (`numpy.convolve`) below degree 64 and Karatsuba above, with a
reduction mod p after every convolution so values stay far inside int64 for
every p this artifact supports.  Root finding is Cantor-Zassenhaus style
equal-degree splitting, with the splitting randomness re-seeded
deterministically from (p, coefficients) so outputs are reproducible.
"""

from __future__ import annotations

import hashlib
import random

import numpy as np

from .field import FieldTower, Fp2, InputError

__all__ = ["Poly", "poly_roots"]

_KARATSUBA_CUTOFF = 64


def _padded_add(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if len(a) < len(b):
        a, b = b, a
    out = a.copy()
    out[: len(b)] += b
    return out


def _conv(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Integer convolution reduced mod p, Karatsuba above the cutoff."""
    n, m = len(a), len(b)
    if n == 0 or m == 0:
        return np.zeros(0, dtype=np.int64)
    if min(n, m) <= _KARATSUBA_CUTOFF:
        return np.convolve(a, b) % p
    # a = a0 + x^h a1, b = b0 + x^h b1; ab = z0 + x^h (z1 - z0 - z2) + x^2h z2.
    h = min(n, m) // 2
    a0, a1 = a[:h], a[h:]
    b0, b1 = b[:h], b[h:]
    z0 = _conv(a0, b0, p)
    z2 = _conv(a1, b1, p)
    z1 = _conv(_padded_add(a0, a1) % p, _padded_add(b0, b1) % p, p)
    out = np.zeros(n + m - 1, dtype=np.int64)
    out[: len(z0)] += z0
    out[h : h + len(z1)] += z1
    out[h : h + len(z0)] -= z0
    out[h : h + len(z2)] -= z2
    out[2 * h : 2 * h + len(z2)] += z2
    return out % p


class Poly:
    """Polynomial over F_{p^2}; immutable by convention (arrays never mutated)."""

    __slots__ = ("ctx", "c0", "c1")

    def __init__(self, ctx: FieldTower, c0: np.ndarray, c1: np.ndarray):
        self.ctx = ctx
        self.c0 = c0
        self.c1 = c1

    # -- construction ---------------------------------------------------------

    @classmethod
    def from_coeffs(cls, ctx: FieldTower, coeffs) -> "Poly":
        """Polynomial from a list of F_{p^2} tuples or plain ints, constant first."""
        c0, c1 = [], []
        for c in coeffs:
            if isinstance(c, int):
                c0.append(c % ctx.p)
                c1.append(0)
            else:
                c0.append(c[0] % ctx.p)
                c1.append(c[1] % ctx.p)
        poly = cls(ctx, np.array(c0, dtype=np.int64), np.array(c1, dtype=np.int64))
        return poly._normalized()

    @classmethod
    def zero(cls, ctx: FieldTower) -> "Poly":
        return cls(ctx, np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64))

    @classmethod
    def one(cls, ctx: FieldTower) -> "Poly":
        return cls.from_coeffs(ctx, [1])

    @classmethod
    def x(cls, ctx: FieldTower) -> "Poly":
        return cls.from_coeffs(ctx, [0, 1])

    @classmethod
    def from_roots(cls, ctx: FieldTower, roots) -> "Poly":
        """Monic polynomial prod (x - root)."""
        out = cls.one(ctx)
        for root in roots:
            out = out.mul(cls.from_coeffs(ctx, [ctx.neg(root), ctx.one]))
        return out

    def _normalized(self) -> "Poly":
        nz = np.nonzero((self.c0 != 0) | (self.c1 != 0))[0]
        if len(nz) == 0:
            return Poly.zero(self.ctx)
        end = nz[-1] + 1
        if end == len(self.c0):
            return self
        return Poly(self.ctx, self.c0[:end], self.c1[:end])

    # -- basic queries ----------------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree, with the zero polynomial at -1."""
        return len(self.c0) - 1

    def is_zero(self) -> bool:
        return len(self.c0) == 0

    def coeff(self, k: int) -> Fp2:
        if k < 0 or k > self.degree:
            return self.ctx.zero
        return (int(self.c0[k]), int(self.c1[k]))

    def coeffs(self) -> list[Fp2]:
        return [(int(a), int(b)) for a, b in zip(self.c0, self.c1)]

    def leading(self) -> Fp2:
        if self.is_zero():
            raise InputError("zero polynomial has no leading coefficient")
        return self.coeff(self.degree)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Poly)
            and self.ctx.p == other.ctx.p
            and np.array_equal(self.c0, other.c0)
            and np.array_equal(self.c1, other.c1)
        )

    def __hash__(self):
        return hash((self.ctx.p, self.c0.tobytes(), self.c1.tobytes()))

    def __repr__(self) -> str:
        return f"Poly({self.text()})"

    def text(self, var: str = "x") -> str:
        """Human-readable form with coefficients in the field text encoding."""
        if self.is_zero():
            return "0"
        ctx = self.ctx
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.coeff(k)
            if c == ctx.zero:
                continue
            enc = ctx.encode(c)
            needs_parens = "+" in enc
            if k == 0:
                terms.append(f"({enc})" if needs_parens else enc)
                continue
            xk = var if k == 1 else f"{var}^{k}"
            if c == ctx.one:
                terms.append(xk)
            elif needs_parens:
                terms.append(f"({enc})*{xk}")
            else:
                terms.append(f"{enc}*{xk}")
        return "+".join(terms)

    # -- arithmetic ----------------------------------------------------------

    def add(self, other: "Poly") -> "Poly":
        p = self.ctx.p
        return Poly(self.ctx, _padded_add(self.c0, other.c0) % p, _padded_add(self.c1, other.c1) % p)._normalized()

    def sub(self, other: "Poly") -> "Poly":
        return self.add(other.neg())

    def neg(self) -> "Poly":
        p = self.ctx.p
        return Poly(self.ctx, (-self.c0) % p, (-self.c1) % p)

    def scalar_mul(self, c: Fp2) -> "Poly":
        ctx = self.ctx
        p = ctx.p
        a, b = c[0] % p, c[1] % p
        if (a, b) == (0, 0):
            return Poly.zero(ctx)
        c0 = (self.c0 * a + self.c1 * b % p * ctx.r) % p
        c1 = (self.c0 * b + self.c1 * a) % p
        return Poly(ctx, c0, c1)._normalized()

    def mul(self, other: "Poly") -> "Poly":
        if self.is_zero() or other.is_zero():
            return Poly.zero(self.ctx)
        ctx = self.ctx
        p = ctx.p
        # Karatsuba over the extension: 3 integer convolutions.
        k1 = _conv(self.c0, other.c0, p)
        k2 = _conv(self.c1, other.c1, p)
        k3 = _conv(self.c0 + self.c1, other.c0 + other.c1, p)
        c0 = (k1 + ctx.r * k2) % p
        c1 = (k3 - k1 - k2) % p
        return Poly(ctx, c0, c1)._normalized()

    def square(self) -> "Poly":
        return self.mul(self)

    def shift(self, k: int) -> "Poly":
        """Multiplication by x^k."""
        if self.is_zero() or k == 0:
            return self
        pad = np.zeros(k, dtype=np.int64)
        return Poly(self.ctx, np.concatenate([pad, self.c0]), np.concatenate([pad, self.c1]))

    def pow(self, e: int) -> "Poly":
        if e < 0:
            raise InputError("negative exponent")
        out = Poly.one(self.ctx)
        base = self
        while e:
            if e & 1:
                out = out.mul(base)
            base = base.square()
            e >>= 1
        return out

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        ctx = self.ctx
        if self.degree < other.degree:
            return Poly.zero(ctx), self
        lead_inv = ctx.inv(other.leading())
        rem0 = self.c0.copy()
        rem1 = self.c1.copy()
        d = other.degree
        p, r = ctx.p, ctx.r
        q0 = np.zeros(len(rem0) - d, dtype=np.int64)
        q1 = np.zeros(len(rem0) - d, dtype=np.int64)
        b0, b1 = other.c0, other.c1
        for k in range(len(rem0) - d - 1, -1, -1):
            a0, a1 = int(rem0[k + d]), int(rem1[k + d])
            if a0 == 0 and a1 == 0:
                continue
            qa = (a0 * lead_inv[0] + r * a1 * lead_inv[1]) % p
            qb = (a0 * lead_inv[1] + a1 * lead_inv[0]) % p
            q0[k], q1[k] = qa, qb
            rem0[k : k + d + 1] = (rem0[k : k + d + 1] - qa * b0 - qb * b1 % p * r) % p
            rem1[k : k + d + 1] = (rem1[k : k + d + 1] - qa * b1 - qb * b0) % p
        quot = Poly(ctx, q0, q1)._normalized()
        rem = Poly(ctx, rem0[:d], rem1[:d])._normalized()
        return quot, rem

    def mod(self, other: "Poly") -> "Poly":
        return self.divmod(other)[1]

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        lead = self.leading()
        if lead == self.ctx.one:
            return self
        return self.scalar_mul(self.ctx.inv(lead))

    def gcd(self, other: "Poly") -> "Poly":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a.mod(b)
        return a.monic() if not a.is_zero() else a

    def derivative(self) -> "Poly":
        if self.degree < 1:
            return Poly.zero(self.ctx)
        k = np.arange(1, len(self.c0), dtype=np.int64)
        p = self.ctx.p
        return Poly(self.ctx, (self.c0[1:] * k) % p, (self.c1[1:] * k) % p)._normalized()

    def is_squarefree(self) -> bool:
        if self.is_zero():
            return False
        return self.gcd(self.derivative()).degree == 0

    def eval_at(self, x: Fp2) -> Fp2:
        ctx = self.ctx
        acc = ctx.zero
        for k in range(self.degree, -1, -1):
            acc = ctx.add(ctx.mul(acc, x), self.coeff(k))
        return acc

    def powmod(self, e: int, modulus: "Poly") -> "Poly":
        """self^e mod modulus by square and multiply."""
        out = Poly.one(self.ctx)
        base = self.mod(modulus)
        while e:
            if e & 1:
                out = out.mul(base).mod(modulus)
            base = base.square().mod(modulus)
            e >>= 1
        return out

    # -- root finding ----------------------------------------------------------

    def _seed(self) -> int:
        h = hashlib.sha256()
        h.update(str(self.ctx.p).encode())
        h.update(self.c0.tobytes())
        h.update(self.c1.tobytes())
        return int.from_bytes(h.digest()[:8], "big")

    def roots(self) -> list[Fp2]:
        """All roots in F_{p^2} with multiplicity, in canonical order.

        gcd with x^(p^2) - x isolates the rational part, then equal-degree
        splitting peels off the roots; the splitting polynomials come from an
        RNG seeded by (p, coefficients) so the output is reproducible.
        """
        if self.is_zero():
            raise InputError("zero polynomial has every element as a root")
        ctx = self.ctx
        if self.degree == 0:
            return []
        if self.derivative().is_zero():
            raise InputError("inseparable polynomial (degree >= p not supported here)")
        # Squarefree part carries the distinct roots; multiplicities recovered after.
        sqfree = self.divmod(self.gcd(self.derivative()))[0] if not self.is_squarefree() else self
        xp2 = Poly.x(ctx).powmod(ctx.p * ctx.p, sqfree)
        rational_part = xp2.sub(Poly.x(ctx)).gcd(sqfree)
        rng = random.Random(self._seed())
        distinct: list[Fp2] = []
        self._split_all_roots(rational_part, rng, distinct)
        out: list[Fp2] = []
        for root in sorted(distinct):
            factor = Poly.from_coeffs(ctx, [ctx.neg(root), ctx.one])
            rem = self
            while True:
                quot, r = rem.divmod(factor)
                if not r.is_zero():
                    break
                out.append(root)
                rem = quot
        return out

    def _split_all_roots(self, f: "Poly", rng: random.Random, out: list[Fp2]) -> None:
        ctx = self.ctx
        d = f.degree
        if d <= 0:
            return
        if d == 1:
            # x - root up to scalar
            f = f.monic()
            out.append(ctx.neg(f.coeff(0)))
            return
        if d == 2:
            f = f.monic()
            b, c = f.coeff(1), f.coeff(0)
            disc = ctx.sub(ctx.sqr(b), ctx.smul(4, c))
            rt = ctx.sqrt(disc)
            if rt is None:
                raise AssertionError("split-off factor must have rational roots")
            inv2 = ctx.inv(ctx.embed(2))
            out.append(ctx.mul(ctx.sub(rt[0], b), inv2))
            out.append(ctx.mul(ctx.sub(rt[1], b), inv2))
            return
        half = (ctx.p * ctx.p - 1) // 2
        while True:
            u = Poly.from_coeffs(
                ctx,
                [(rng.randrange(ctx.p), rng.randrange(ctx.p)) for _ in range(d)],
            )
            if u.degree < 1:
                continue
            w = u.powmod(half, f).sub(Poly.one(ctx))
            g = w.gcd(f)
            if 0 < g.degree < d:
                self._split_all_roots(g, rng, out)
                self._split_all_roots(f.divmod(g)[0], rng, out)
                return


def poly_roots(f: Poly, ctx: FieldTower | None = None) -> list[Fp2]:
    """Multiset of roots of f in F_{p^2}; see :meth:`Poly.roots`."""
    return f.roots()
