"""Exact polyhedral cone machinery over the integers.

A cone is given by rows ``c`` with ``c . x >= 0``.  Rays are kept as primitive
integer vectors (entries divided by their gcd), so everything stays exact with
Python's arbitrary-precision ints.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .entspace import LinearInequality, SetFunction, gcd_normalize

log = logging.getLogger(__name__)


class ConeError(ValueError):
    pass


class NotPointedError(ConeError):
    """The cone contains a line."""


def rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank over the rationals, by fraction-free elimination on integer rows."""
    work = [list(r) for r in rows if any(r)]
    if not work:
        return 0
    ncols = len(work[0])
    r = 0
    for col in range(ncols):
        piv = None
        for i in range(r, len(work)):
            if work[i][col]:
                piv = i
                break
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        p = work[r]
        pc = p[col]
        for i in range(r + 1, len(work)):
            row = work[i]
            x = row[col]
            if x:
                new = [pc * a - x * b for a, b in zip(row, p)]
                work[i] = list(gcd_normalize(new))
        r += 1
        if r == len(work):
            break
    return r


def _dot(c, x) -> int:
    return sum(a * b for a, b in zip(c, x) if a)


def _null_vectors(rows: Sequence[Sequence[int]], ncols: int) -> list[list[Fraction]]:
    """Basis of ``{x : rows @ x = 0}`` via reduced row echelon form."""
    m = [[Fraction(v) for v in r] for r in rows]
    pivots = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        pv = m[r][col]
        m[r] = [v / pv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col] != 0:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -m[i][fc]
        basis.append(v)
    return basis


def _primitive(v: Sequence[Fraction]) -> tuple[int, ...]:
    den = 1
    for x in v:
        den = den * Fraction(x).denominator // _gcd(den, Fraction(x).denominator)
    return gcd_normalize([int(Fraction(x) * den) for x in v])


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def extreme_rays_of(rows: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Extreme rays of ``{x : row . x >= 0 for every row}`` by double description.

    Rows are inserted in the given order.  The initial simplicial cone uses the
    first linearly independent rows; every later row splits the current rays
    into positive, zero and negative parts and combines adjacent pos/neg pairs.
    Adjacency is decided algebraically: the rows tight at both rays must have
    rank ``d - 2``.
    """
    rows = [tuple(int(v) for v in r) for r in rows]
    if not rows:
        raise ConeError("no inequalities given")
    d = len(rows[0])
    if any(len(r) != d for r in rows):
        raise ConeError("inequalities have different lengths")

    basis: list[int] = []
    for i, r in enumerate(rows):
        if not any(r):
            continue
        if rank([rows[j] for j in basis] + [r]) > len(basis):
            basis.append(i)
            if len(basis) == d:
                break
    if len(basis) < d:
        raise NotPointedError(f"inequalities have rank {len(basis)} < {d}; the cone contains a line")

    # Rays of the simplicial cone: columns of B^{-1}, i.e. for each basis row b_k,
    # the vector tight on all other basis rows and positive on b_k.
    rays: list[tuple[int, ...]] = []
    tight: list[frozenset[int]] = []
    for k, bk in enumerate(basis):
        others = [rows[j] for j in basis if j != bk]
        (v,) = _null_vectors(others, d)
        v = _primitive(v)
        if _dot(rows[bk], v) < 0:
            v = tuple(-x for x in v)
        rays.append(v)
        tight.append(frozenset(j for j in basis if j != bk))

    done = set(basis)
    for idx, row in enumerate(rows):
        if idx in done:
            continue
        done.add(idx)
        vals = [_dot(row, v) for v in rays]
        pos = [i for i, s in enumerate(vals) if s > 0]
        neg = [i for i, s in enumerate(vals) if s < 0]
        zer = [i for i, s in enumerate(vals) if s == 0]
        new_rays = [rays[i] for i in pos] + [rays[i] for i in zer]
        new_tight = [tight[i] for i in pos] + [tight[i] | {idx} for i in zer]
        rank_cache: dict[frozenset, int] = {}
        for p in pos:
            for q in neg:
                common = tight[p] & tight[q]
                if len(common) < d - 2:
                    continue
                rk = rank_cache.get(common)
                if rk is None:
                    rk = rank([rows[j] for j in common])
                    rank_cache[common] = rk
                if rk != d - 2:
                    continue
                w = [vals[p] * b - vals[q] * a for a, b in zip(rays[p], rays[q])]
                new_rays.append(gcd_normalize(w))
                new_tight.append(common | {idx})
        rays, tight = new_rays, new_tight
        log.debug("row %d: %d rays", idx, len(rays))

    uniq = sorted(set(rays))
    neg_set = set(uniq)
    for v in uniq:
        if tuple(-x for x in v) in neg_set:
            raise NotPointedError("found a ray together with its negative")
    return uniq


@dataclass(frozen=True)
class ExtremeRay:
    """Minimal integer point of a ray plus the facet indices tight at it."""

    rep: SetFunction
    tight: frozenset[int]

    @property
    def vector(self) -> tuple[int, ...]:
        return self.rep.as_ints()


@dataclass(frozen=True)
class FacePair:
    i: int
    j: int
    is_2face: bool


def tight_facets(ray, inequalities: Sequence[LinearInequality]) -> frozenset[int]:
    """Indices of inequalities holding with equality at ``ray``."""
    f = ray.rep if isinstance(ray, ExtremeRay) else ray
    return frozenset(ineq.index for ineq in inequalities if ineq.evaluate(f) == 0)


def _n_from_dim(d: int) -> int:
    n = d.bit_length()
    if (1 << n) - 1 != d:
        raise ConeError(f"{d} is not of the form 2**n - 1")
    return n


def double_description(inequalities: Sequence[LinearInequality]) -> list[ExtremeRay]:
    """Extreme rays of the cone cut out by ``inequalities``.

    Output is sorted by the ray's value vector and does not depend on the order
    the inequalities are given in.
    """
    ineqs = list(inequalities)
    if not ineqs:
        raise ConeError("no inequalities given")
    vecs = extreme_rays_of([q.coefficients for q in ineqs])
    n = _n_from_dim(len(ineqs[0].coefficients))
    out = []
    for v in vecs:
        rep = SetFunction(n, v, exact=True)
        out.append(ExtremeRay(rep, tight_facets(rep, ineqs)))
    return out


def verify_extreme(ray, inequalities: Sequence[LinearInequality]) -> bool:
    """Feasible and tight on a set of rows of rank ``d - 1``."""
    f = ray.rep if isinstance(ray, ExtremeRay) else ray
    if not f.exact:
        return False
    ineqs = list(inequalities)
    vals = [q.evaluate(f) for q in ineqs]
    if any(v < 0 for v in vals):
        return False
    if not any(f.values):
        return False
    d = len(f.values)
    return rank([q.coefficients for q, v in zip(ineqs, vals) if v == 0]) == d - 1


def enumerate_2faces(rays: Sequence[ExtremeRay], inequalities=None) -> list[FacePair]:
    """Decide for every pair ``i < j`` whether the two rays span a 2-face.

    The pair is a face iff no third ray is tight on every facet tight at both.
    When ``inequalities`` are given, each face found is also checked to have a
    tight set of rank ``d - 2``.
    """
    tights = [r.tight for r in rays]
    out = []
    for i in range(len(rays)):
        for j in range(i + 1, len(rays)):
            common = tights[i] & tights[j]
            face = not any(
                common <= tights[k] for k in range(len(rays)) if k != i and k != j
            )
            out.append(FacePair(i, j, face))
    if inequalities is not None:
        ineqs = {q.index: q for q in inequalities}
        d = len(rays[0].rep.values) if rays else 0
        for fp in out:
            if fp.is_2face:
                common = tights[fp.i] & tights[fp.j]
                if rank([ineqs[k].coefficients for k in common]) != d - 2:
                    raise ConeError(f"pair ({fp.i}, {fp.j}) has no 2-dimensional tight face")
    return out
