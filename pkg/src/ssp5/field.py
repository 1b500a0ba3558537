"""Exact arithmetic in F_p and its quadratic extension F_{p^2}.

F_{p^2} is realised as F_p[w]/(w^2 - r) where r is the least quadratic
non-residue of F_p, so the representation is determined by p alone.  An
element c0 + c1*w is a plain ``(c0, c1)`` tuple of ints with 0 <= c0, c1 < p;
tuples are hashable, compare lexicographically (which *is* the canonical
element order), and keep the hot enumeration loops cheap.  All operations are
methods on an immutable :class:`FieldTower` context; no global state.

The distinguished point at infinity of P^1 is the module constant ``INF``.
"""

from __future__ import annotations

from typing import Iterable, Optional

__all__ = [
    "Fp2",
    "FieldTower",
    "INF",
    "InputError",
    "build_field_tower",
    "is_prime",
]

# An F_{p^2} element is a pair (c0, c1); this alias is documentation only.
Fp2 = tuple


class InputError(ValueError):
    """Raised when an argument violates an operation's input contract."""


class _Infinity:
    """The point at infinity of P^1; sorts after every finite point."""

    __slots__ = ()

    def __repr__(self) -> str:
        return "inf"


INF = _Infinity()

# Deterministic Miller-Rabin witnesses, valid for all n < 3.3 * 10^24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin primality test (valid far beyond 64 bits)."""
    if n < 2:
        return False
    for q in _MR_BASES:
        if n == q:
            return True
        if n % q == 0:
            return False
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _tonelli(n: int, p: int) -> int:
    """A square root of the quadratic residue n mod p (n assumed a residue)."""
    n %= p
    if n == 0:
        return 0
    if p % 4 == 3:
        return pow(n, (p + 1) // 4, p)
    # Tonelli-Shanks for p = 1 mod 4.
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, rt = s, pow(z, q, p), pow(n, q, p), pow(n, (q + 1) // 2, p)
    while t != 1:
        i, tt = 0, t
        while tt != 1:
            tt = tt * tt % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t = t * c % p
        rt = rt * b % p
    return rt


class FieldTower:
    """The pair (F_p, F_{p^2}) with a fixed non-residue r and element order.

    Immutable after construction and safe to share between threads: every
    method is a pure function of its arguments.
    """

    __slots__ = ("p", "r", "zero", "one", "_legendre_exp", "_nonsquare")

    def __init__(self, p: int, r: int):
        self.p = p
        self.r = r
        self.zero = (0, 0)
        self.one = (1, 0)
        self._legendre_exp = (p - 1) // 2
        self._nonsquare: Optional[Fp2] = None

    def __repr__(self) -> str:
        return f"FieldTower(p={self.p}, r={self.r})"

    # -- construction of elements -------------------------------------------------

    def embed(self, n: int) -> Fp2:
        """The image of the integer n in F_{p^2} (through F_p)."""
        return (n % self.p, 0)

    def elem(self, c0: int, c1: int = 0) -> Fp2:
        return (c0 % self.p, c1 % self.p)

    def fraction(self, num: int, den: int) -> Fp2:
        """The rational number num/den reduced mod p (den coprime to p)."""
        p = self.p
        if den % p == 0:
            raise InputError(f"denominator {den} divisible by p={p}")
        return (num * pow(den, p - 2, p) % p, 0)

    # -- ring operations ----------------------------------------------------------

    def add(self, x: Fp2, y: Fp2) -> Fp2:
        p = self.p
        return ((x[0] + y[0]) % p, (x[1] + y[1]) % p)

    def sub(self, x: Fp2, y: Fp2) -> Fp2:
        p = self.p
        return ((x[0] - y[0]) % p, (x[1] - y[1]) % p)

    def neg(self, x: Fp2) -> Fp2:
        p = self.p
        return ((p - x[0]) % p, (p - x[1]) % p)

    def mul(self, x: Fp2, y: Fp2) -> Fp2:
        # (a + b w)(c + d w) = ac + r bd + (ad + bc) w
        p = self.p
        a, b = x
        c, d = y
        return ((a * c + self.r * b * d) % p, (a * d + b * c) % p)

    def sqr(self, x: Fp2) -> Fp2:
        p = self.p
        a, b = x
        return ((a * a + self.r * b * b) % p, 2 * a * b % p)

    def smul(self, n: int, x: Fp2) -> Fp2:
        p = self.p
        return (n * x[0] % p, n * x[1] % p)

    def inv(self, x: Fp2) -> Fp2:
        # 1/(a + b w) = (a - b w)/(a^2 - r b^2); the norm is in F_p*.
        a, b = x
        p = self.p
        n = (a * a - self.r * b * b) % p
        if n == 0:
            raise ZeroDivisionError("inversion of zero in F_{p^2}")
        ninv = pow(n, p - 2, p)
        return (a * ninv % p, (p - b) * ninv % p)

    def div(self, x: Fp2, y: Fp2) -> Fp2:
        return self.mul(x, self.inv(y))

    def batch_inv(self, xs: list[Fp2]) -> list[Fp2]:
        """Invert many nonzero elements with a single modular inversion."""
        if not xs:
            return []
        prefix = [xs[0]]
        for x in xs[1:]:
            prefix.append(self.mul(prefix[-1], x))
        acc = self.inv(prefix[-1])
        out = [self.zero] * len(xs)
        for i in range(len(xs) - 1, 0, -1):
            out[i] = self.mul(acc, prefix[i - 1])
            acc = self.mul(acc, xs[i])
        out[0] = acc
        return out

    def pow_elem(self, x: Fp2, e: int) -> Fp2:
        if e < 0:
            return self.pow_elem(self.inv(x), -e)
        out, base = self.one, x
        while e:
            if e & 1:
                out = self.mul(out, base)
            base = self.sqr(base)
            e >>= 1
        return out

    def frobenius(self, x: Fp2) -> Fp2:
        # w^p = r^((p-1)/2) w = -w, so (a + b w)^p = a - b w.
        a, b = x
        return (a, (self.p - b) % self.p)

    def norm(self, x: Fp2) -> int:
        """The norm x * x^p = a^2 - r b^2, an element of F_p."""
        a, b = x
        return (a * a - self.r * b * b) % self.p

    # -- squares and square roots ---------------------------------------------------

    def legendre_p(self, n: int) -> int:
        """Legendre symbol of n mod p as 0, 1 or -1."""
        t = pow(n % self.p, self._legendre_exp, self.p)
        return -1 if t == self.p - 1 else t

    def is_square(self, x: Fp2) -> bool:
        """True iff x is a square in F_{p^2} (0 counts as a square)."""
        # x^((p^2-1)/2) = Norm(x)^((p-1)/2), so one F_p exponentiation suffices.
        return self.legendre_p(self.norm(x)) >= 0

    def sqrt(self, x: Fp2) -> Optional[tuple[Fp2, Fp2]]:
        """Both square roots (s, -s) of x, s minimal in canonical order, or None."""
        p = self.p
        a, b = x
        if b == 0:
            if a == 0:
                return ((0, 0), (0, 0))
            if self.legendre_p(a) == 1:
                s = _tonelli(a, p)
                root = (s, 0)
            else:
                # a = r * (a/r) with a/r a residue, so sqrt(a) = sqrt(a/r) * w.
                a_over_r = a * pow(self.r, p - 2, p) % p
                if self.legendre_p(a_over_r) != 1:
                    return None
                root = (0, _tonelli(a_over_r, p))
        else:
            # Solve (u + v w)^2 = a + b w: u^2 + r v^2 = a and 2uv = b, hence
            # u^2 = (a +- t)/2 with t^2 = a^2 - r b^2 = Norm(x) in F_p.
            n = self.norm(x)
            if self.legendre_p(n) == -1:
                return None
            t = _tonelli(n, p)
            inv2 = (p + 1) // 2
            u2 = (a + t) * inv2 % p
            if self.legendre_p(u2) != 1:
                u2 = (a - t) * inv2 % p
                if self.legendre_p(u2) != 1:
                    return None
            u = _tonelli(u2, p)
            v = b * pow(2 * u, p - 2, p) % p
            root = (u, v)
        other = self.neg(root)
        return (root, other) if root <= other else (other, root)

    def nonsquare(self) -> Fp2:
        """The first non-square of F_{p^2} in canonical order (cached)."""
        if self._nonsquare is None:
            p = self.p
            for c0 in range(p):
                for c1 in range(p):
                    x = (c0, c1)
                    if x != (0, 0) and not self.is_square(x):
                        self._nonsquare = x
                        return x
            raise AssertionError("unreachable: F_{p^2}* has non-squares")
        return self._nonsquare

    # -- text encoding ------------------------------------------------------------

    def encode(self, x) -> str:
        """Element text encoding: `c0` when c1 = 0, else `c0+c1*w`; INF -> `inf`."""
        if x is INF:
            return "inf"
        c0, c1 = x
        return str(c0) if c1 == 0 else f"{c0}+{c1}*w"

    def decode(self, s: str):
        s = s.strip()
        if s == "inf":
            return INF
        if "+" in s:
            left, right = s.split("+", 1)
            right = right.strip()
            if not right.endswith("*w") and right != "w":
                raise InputError(f"cannot parse field element {s!r}")
            c1 = 1 if right == "w" else int(right[:-2])
            return self.elem(int(left), c1)
        if s.endswith("*w"):
            return self.elem(0, int(s[:-2]))
        if s == "w":
            return self.elem(0, 1)
        return self.elem(int(s))


def build_field_tower(p: int) -> FieldTower:
    """Context for F_p and F_{p^2}; requires p prime and p > 11.

    The non-residue r is the least one, so the construction is deterministic.
    """
    if not isinstance(p, int) or not is_prime(p):
        raise InputError(f"p={p} is not prime")
    if p <= 11:
        raise InputError(f"p={p} out of contract (need p > 11)")
    if p >= 1 << 20:
        # int64 convolutions in the poly layer need p^2 * length << 2^63.
        raise InputError(f"p={p} beyond the supported range (p < 2^20)")
    r = 2
    exp = (p - 1) // 2
    while pow(r, exp, p) != p - 1:
        r += 1
    return FieldTower(p, r)


# -- quadratic scratch extension -------------------------------------------------
#
# A few operations (automorphism lifts whose constant lives in a quadratic twist,
# the degenerate Richelot split) need values of the form u + v*s with s^2 = S a
# fixed element of F_{p^2}.  No field tower above F_{p^2} is ever constructed:
# these (u, v) pairs are scratch values that must collapse back to F_{p^2}
# (v = 0) whenever a rational answer is extracted.


class QuadScratch:
    """Arithmetic in F_{p^2}[s]/(s^2 - S) for a fixed S."""

    __slots__ = ("ctx", "S")

    def __init__(self, ctx: FieldTower, S: Fp2):
        self.ctx = ctx
        self.S = S

    def lift(self, x: Fp2):
        return (x, self.ctx.zero)

    @property
    def s(self):
        return (self.ctx.zero, self.ctx.one)

    def add(self, x, y):
        c = self.ctx
        return (c.add(x[0], y[0]), c.add(x[1], y[1]))

    def sub(self, x, y):
        c = self.ctx
        return (c.sub(x[0], y[0]), c.sub(x[1], y[1]))

    def neg(self, x):
        c = self.ctx
        return (c.neg(x[0]), c.neg(x[1]))

    def mul(self, x, y):
        c = self.ctx
        u = c.add(c.mul(x[0], y[0]), c.mul(self.S, c.mul(x[1], y[1])))
        v = c.add(c.mul(x[0], y[1]), c.mul(x[1], y[0]))
        return (u, v)

    def inv(self, x):
        c = self.ctx
        n = c.sub(c.sqr(x[0]), c.mul(self.S, c.sqr(x[1])))
        ninv = c.inv(n)
        return (c.mul(x[0], ninv), c.neg(c.mul(x[1], ninv)))

    def div(self, x, y):
        return self.mul(x, self.inv(y))

    def conj(self, x):
        return (x[0], self.ctx.neg(x[1]))

    def is_rational(self, x) -> bool:
        return x[1] == self.ctx.zero


def sorted_elems(xs: Iterable[Fp2]) -> list[Fp2]:
    """Elements in the canonical (lexicographic) order."""
    return sorted(xs)
