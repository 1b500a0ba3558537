"""Supersingular elliptic curve machinery.

The complete set S_p of supersingular j-invariants is produced by a BFS over
the 2-isogeny graph (neighbours = roots of the level-2 classical modular
polynomial), seeded from j = 1728 or j = 0 when a congruence provides one and
otherwise from a root of the Hasse polynomial.  The Hasse polynomial route is
kept alongside as seed and cross-check; supersingularity tests during the
enumeration algorithms are O(log) membership queries against S_p.
"""

from __future__ import annotations

from .field import INF, FieldTower, Fp2, InputError
from .poly import Poly

__all__ = [
    "SupersingularSet",
    "enumerate_supersingular_j",
    "expected_sp_size",
    "hasse_polynomial",
    "is_supersingular_j",
    "j_from_four_points",
    "j_from_legendre",
    "phi2_neighbors",
]

# Level-2 classical modular polynomial Phi_2(X, Y); standard integer constants,
# validated in-test by the symmetry Phi_2(X, Y) = Phi_2(Y, X) and by agreement
# of the resulting S_p with the Hasse-polynomial and Cartier-Manin oracles.
_PHI2_TERMS = (
    ((3, 0), 1),
    ((0, 3), 1),
    ((2, 2), -1),
    ((2, 1), 1488),
    ((1, 2), 1488),
    ((2, 0), -162000),
    ((0, 2), -162000),
    ((1, 1), 40773375),
    ((1, 0), 8748000000),
    ((0, 1), 8748000000),
    ((0, 0), -157464000000000),
)


def j_from_legendre(ctx: FieldTower, lam: Fp2) -> Fp2:
    """j = 2^8 (lam^2 - lam + 1)^3 / (lam^2 (lam - 1)^2)."""
    if lam == ctx.zero or lam == ctx.one:
        raise InputError("Legendre parameter must avoid 0 and 1")
    num = ctx.add(ctx.sub(ctx.sqr(lam), lam), ctx.one)
    num = ctx.mul(ctx.mul(num, num), num)
    den = ctx.mul(ctx.sqr(lam), ctx.sqr(ctx.sub(lam, ctx.one)))
    return ctx.smul(256, ctx.div(num, den))


def j_from_four_points(ctx: FieldTower, q1, q2, q3, q4) -> Fp2:
    """j-invariant of the double cover of P^1 branched over four points.

    The cross-ratio is taken through j_from_legendre; the S3 orbit of the
    cross-ratio collapses, so the result is independent of point order.
    """
    pts = (q1, q2, q3, q4)
    keys = {(_pt_key(pt)) for pt in pts}
    if len(keys) != 4:
        raise InputError("branch points must be pairwise distinct")
    # Cross-ratio as the image of q4 under (q1, q2, q3) -> (0, 1, inf).
    if q4 is INF:
        # Swap so the special point is inside the normalised triple.
        q1, q4 = q4, q1
    if q1 is INF:
        lam = _cross_inf(ctx, q2, q3, q4)
    elif q2 is INF:
        lam = ctx.div(ctx.sub(q4, q1), ctx.sub(q4, q3))
    elif q3 is INF:
        lam = ctx.div(ctx.sub(q4, q1), ctx.sub(q2, q1))
    else:
        lam = ctx.div(
            ctx.mul(ctx.sub(q4, q1), ctx.sub(q2, q3)),
            ctx.mul(ctx.sub(q4, q3), ctx.sub(q2, q1)),
        )
    return j_from_legendre(ctx, lam)


def _cross_inf(ctx: FieldTower, q2, q3, q4) -> Fp2:
    # (inf, q2, q3) -> (0, 1, inf): x -> (q2 - q3)/(x - q3); image of q4.
    return ctx.div(ctx.sub(q2, q3), ctx.sub(q4, q3))


def _pt_key(pt):
    return (1, 0, 0) if pt is INF else (0, pt[0], pt[1])


def hasse_polynomial(ctx: FieldTower) -> Poly:
    """sum_k C((p-1)/2, k)^2 z^k over F_p; roots = supersingular Legendre values."""
    p = ctx.p
    m = (p - 1) // 2
    coeffs = []
    c = 1
    for k in range(m + 1):
        coeffs.append(c * c % p)
        c = c * (m - k) % p * pow(k + 1, p - 2, p) % p
    return Poly.from_coeffs(ctx, coeffs)


def phi2_neighbors(ctx: FieldTower, j: Fp2) -> list[Fp2]:
    """Roots (with multiplicity) of the cubic Phi_2(X, j)."""
    coeffs = [ctx.zero] * 4
    for (ex, ey), c in _PHI2_TERMS:
        term = ctx.smul(c, ctx.pow_elem(j, ey))
        coeffs[ex] = ctx.add(coeffs[ex], term)
    return Poly.from_coeffs(ctx, coeffs).roots()


def expected_sp_size(p: int) -> int:
    """floor(p/12) + eps with eps = 0, 1, 1, 2 for p = 1, 5, 7, 11 mod 12."""
    eps = {1: 0, 5: 1, 7: 1, 11: 2}[p % 12]
    return p // 12 + eps


class SupersingularSet:
    """The set S_p, held sorted in the canonical element order."""

    __slots__ = ("p", "values", "_members")

    def __init__(self, p: int, values: tuple):
        self.p = p
        self.values = tuple(sorted(values))
        self._members = frozenset(values)

    def __contains__(self, j) -> bool:
        return j in self._members

    def __len__(self) -> int:
        return len(self.values)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SupersingularSet)
            and self.p == other.p
            and self.values == other.values
        )

    def __repr__(self) -> str:
        return f"SupersingularSet(p={self.p}, size={len(self.values)})"


def enumerate_supersingular_j(ctx: FieldTower) -> SupersingularSet:
    """S_p by BFS over the 2-isogeny graph; deterministic and cached by callers."""
    p = ctx.p
    if p % 4 == 3:
        seed = ctx.embed(1728)
    elif p % 3 == 2:
        seed = ctx.zero
    else:
        hp = hasse_polynomial(ctx)
        roots = hp.roots()
        if not roots:
            raise InputError("Hasse polynomial unexpectedly has no roots")
        seed = j_from_legendre(ctx, roots[0])
    seen = {seed}
    frontier = [seed]
    while frontier:
        nxt = []
        for j in frontier:
            for nb in phi2_neighbors(ctx, j):
                if nb not in seen:
                    seen.add(nb)
                    nxt.append(nb)
        frontier = nxt
    return SupersingularSet(p, tuple(sorted(seen)))


def is_supersingular_j(j: Fp2, S: SupersingularSet) -> bool:
    """Membership of j in S_p."""
    return j in S


# -- cache files -----------------------------------------------------------------


def save_sp_cache(path, S: SupersingularSet, ctx: FieldTower) -> None:
    import os
    import tempfile

    payload = [f"ssp5-cache v1 p={S.p} kind=Sp"]
    payload += [ctx.encode(j) for j in S.values]
    directory = os.path.dirname(str(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".Sp_tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write("\n".join(payload) + "\n")
        os.replace(tmp, str(path))
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def load_sp_cache(path, ctx: FieldTower) -> SupersingularSet:
    with open(str(path)) as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    header = lines[0].split()
    if header[:2] != ["ssp5-cache", "v1"] or "kind=Sp" not in header:
        raise InputError(f"not an S_p cache file: {path}")
    p = int(next(tok.split("=")[1] for tok in header if tok.startswith("p=")))
    if p != ctx.p:
        raise InputError(f"cache is for p={p}, context is p={ctx.p}")
    values = tuple(sorted(ctx.decode(ln) for ln in lines[1:]))
    return SupersingularSet(p, values)
