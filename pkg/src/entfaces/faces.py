"""Entropic points on the 2-dimensional faces of Gamma_4.

A point ``(a, b)`` with ``a, b >= 0`` on the face ``(E1, E2)`` is the
polymatroid ``a * r1 + b * r2`` where ``r1``, ``r2`` are the minimal integer
points of the two rays.  For the 27 characterized face types this module
decides whether such a point is entropic and, if it is, builds a joint
distribution of four variables with exactly that entropy vector.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .catalog import Catalog, CatalogError, FaceType, RayName, build_catalog, parse_face
from .dist import (
    JointDist,
    alphabet_for,
    cyclic_construction,
    dist_with_entropy,
    entropy_vector,
    permute_variables,
    product_combine,
    shannon,
    single_variable,
    skewed_cyclic,
)
from .entspace import DEFAULT_TOL, SetFunction, combine, elements_of, mask_of

ENTROPIC = "Entropic"
NOT_ENTROPIC = "NotEntropic"
UNCHARACTERIZED = "Uncharacterized"

PARTITION_CAP = 40
# Largest alphabet allowed for the big component in the non-lattice HalfOpen
# construction; its joint support grows like the square of this.
HALF_OPEN_MAX_COMPONENT = 512


class FaceError(ValueError):
    pass


class WitnessError(FaceError):
    pass


@dataclass(frozen=True)
class FacePoint:
    face: str | int
    a: float
    b: float

    def __post_init__(self):
        if self.a < 0 or self.b < 0:
            raise FaceError(f"face coordinates must be nonnegative, got ({self.a}, {self.b})")


@dataclass(frozen=True)
class Verdict:
    status: str
    detail: dict = field(default_factory=dict)

    @property
    def entropic(self) -> bool:
        return self.status == ENTROPIC


# -- helpers ----------------------------------------------------------------

def log_match(x: float, tol: float = DEFAULT_TOL) -> int | None:
    """The integer ``k >= 1`` with ``|x - log2 k| <= tol``, if there is one."""
    if x < -tol:
        return None
    k = max(1, round(2.0 ** x))
    return k if abs(x - math.log2(k)) <= tol else None


def ceil_pow2(x: float, tol: float = DEFAULT_TOL) -> int:
    """``ceil(2**x)``, snapping ``x`` onto ``log2 k`` when within ``tol``."""
    k = log_match(x, tol)
    return k if k is not None else math.ceil(2.0 ** x)


def partitions(k: int) -> Iterator[tuple[int, ...]]:
    """Number partitions of ``k`` as nonincreasing tuples, largest parts first."""
    if k < 1:
        raise ValueError("k must be positive")

    def rec(rest, cap):
        if rest == 0:
            yield ()
            return
        for part in range(min(rest, cap), 0, -1):
            for tail in rec(rest - part, part):
                yield (part,) + tail

    yield from rec(k, k)


def partition_entropy(alpha: Sequence[int]) -> float:
    k = sum(alpha)
    return shannon(x / k for x in alpha)


@functools.lru_cache(maxsize=None)
def _partition_table(k: int) -> tuple[tuple[float, tuple[int, ...]], ...]:
    return tuple((partition_entropy(al), al) for al in partitions(k))


def _catalog() -> Catalog:
    return build_catalog(4)


@functools.lru_cache(maxsize=4096)
def _resolve(face) -> tuple[FaceType, tuple[int, ...], bool]:
    cat = _catalog()
    if isinstance(face, FaceType):
        return face, (1, 2, 3, 4), False
    if isinstance(face, int) or (isinstance(face, str) and face.strip().isdigit()):
        return cat.face_type(int(face)), (1, 2, 3, 4), False
    try:
        return cat.resolve_face(str(face))
    except CatalogError as exc:
        raise FaceError(str(exc)) from None


def face_rank_functions(face) -> tuple[SetFunction, SetFunction]:
    """Rank functions ``(r1, r2)`` of the face as named (or of the representative)."""
    cat = _catalog()
    if isinstance(face, str) and not face.strip().isdigit():
        try:
            a, b = parse_face(face)
            return cat.rank_function(a), cat.rank_function(b)
        except CatalogError as exc:
            raise FaceError(str(exc)) from None
    ft, _, _ = _resolve(face)
    return cat.rank_function(ft.first), cat.rank_function(ft.second)


def face_point_vector(fp: FacePoint) -> SetFunction:
    """``a * r1 + b * r2`` as a real set function."""
    r1, r2 = face_rank_functions(fp.face)
    return combine(float(fp.a), r1, float(fp.b), r2)


# -- membership ---------------------------------------------------------------

def _predicate(theorem: int, a: float, b: float, tol: float,
               partition_cap: int) -> Verdict:
    if theorem == 1:
        return Verdict(ENTROPIC)
    if theorem == 2:
        k = ceil_pow2(a, tol)
        ok = a + b >= math.log2(k) - tol
        return Verdict(ENTROPIC if ok else NOT_ENTROPIC, {"k": k})
    if theorem in (3, 4):
        k = log_match(a, tol)
        return Verdict(ENTROPIC, {"k": k}) if k else Verdict(NOT_ENTROPIC)
    if theorem == 5:
        k1, k2 = log_match(a, tol), log_match(b, tol)
        if k1 and k2:
            return Verdict(ENTROPIC, {"k1": k1, "k2": k2})
        return Verdict(NOT_ENTROPIC)
    if theorem == 6:
        k = log_match(a + b, tol)
        if k is None:
            return Verdict(NOT_ENTROPIC)
        if k > partition_cap:
            raise FaceError(f"k={k} exceeds the partition enumeration cap {partition_cap}")
        h, alpha = min(_partition_table(k), key=lambda e: abs(a - e[0]))
        if abs(a - h) <= tol:
            return Verdict(ENTROPIC, {"k": k, "partition": list(alpha)})
        return Verdict(NOT_ENTROPIC, {"k": k})
    if theorem == 7:
        if b > tol:
            return Verdict(ENTROPIC)
        k = log_match(a, tol)
        return Verdict(ENTROPIC, {"k": k}) if k else Verdict(NOT_ENTROPIC)
    raise FaceError(f"no predicate for theorem {theorem}")


def membership(fp: FacePoint, tol: float = DEFAULT_TOL,
               partition_cap: int = PARTITION_CAP) -> Verdict:
    """Is ``a * r1 + b * r2`` entropic?  Uncharacterized face types say so."""
    if fp.a < 0 or fp.b < 0:
        raise FaceError("face coordinates must be nonnegative")
    ft, _, swapped = _resolve(fp.face)
    if not ft.characterized:
        return Verdict(UNCHARACTERIZED)
    a, b = (fp.b, fp.a) if swapped else (fp.a, fp.b)
    return _predicate(ft.theorem, a, b, tol, partition_cap)


# -- witnesses ----------------------------------------------------------------

def _rank1_support(r: SetFunction) -> int:
    if max(r.values) != 1:
        raise WitnessError("expected a rank-1 matroid")
    return mask_of(i for i in range(1, r.n + 1) if r[1 << (i - 1)] == 1)


def _rank1_block(h: float, support: int, n: int = 4) -> JointDist:
    h = max(h, 0.0)
    return single_variable(n, dist_with_entropy(h, alphabet_for(h)), support)


def _triangle(name: RayName) -> tuple[tuple[int, int, int], dict[int, int]]:
    """Three elements carrying a U23 and the copy rule for the fourth.

    ``U23^abc`` -> ((a, b, c), {}); ``W2^pq`` (p < q parallel) -> the triangle on
    everything but ``q``, with ``q`` a copy of ``p``.
    """
    if name.family == "U23":
        return tuple(elements_of(name.support)), {}
    if name.family == "W2":
        p, q = elements_of(name.support)
        tri = tuple(e for e in range(1, 5) if e != q)
        return tri, {q: p}
    raise WitnessError(f"{name} does not contain a U23 triangle")


def _cyclic_block(k: int, name: RayName) -> JointDist:
    tri, copies = _triangle(name)
    return cyclic_construction(k, tri, 4, copies)


def _matus_witness(ft: FaceType, a: float, b: float, tol: float) -> JointDist:
    """Boundary point from ``skewed_cyclic`` plus rank-1 padding on r2."""
    cat = _catalog()
    r2 = cat.rank_function(ft.second)
    k = ceil_pow2(a, tol)
    logk = math.log2(k)
    if a + b < logk - tol:
        raise WitnessError(f"a + b = {a + b} is below log2({k})")
    tri, copies = _triangle(ft.first)
    loops = [e for e in tri if r2[1 << (e - 1)] == 0]
    if len(loops) != 1:
        raise WitnessError(f"{ft.label}: expected one loop of r2 on the triangle")
    low = loops[0]
    high1, high2 = (e for e in tri if e != low)
    p = dist_with_entropy(min(a, logk), k)
    base = skewed_cyclic(k, p, (low, high1, high2), 4, copies)
    pad = a + b - logk
    if pad <= 0:
        return base
    return product_combine(base, _rank1_block(pad, _rank1_support(r2)))


def _partition_witness(ft: FaceType, k: int, alpha: Sequence[int]) -> JointDist:
    """Uniform triangle on the support of r2; the r2-loop is a coarsening of its
    parallel partner according to ``alpha``."""
    if sum(alpha) != k or any(x < 1 for x in alpha):
        raise WitnessError(f"{alpha} is not a partition of {k}")
    tri = elements_of(ft.second.support)
    (loop,) = [e for e in range(1, 5) if e not in tri]
    (partner,) = [e for e in elements_of(ft.first.support) if e != loop]
    c, d = (e for e in tri if e != partner)
    cells = []
    for cell, size in enumerate(alpha):
        cells += [cell] * size
    pairs = []
    w = 1.0 / (k * k)
    for x in range(k):
        for y in range(k):
            val = {partner: x, c: y, d: (x + y) % k, loop: cells[x]}
            pairs.append((w, tuple(val[i] for i in range(1, 5))))
    return JointDist.from_outcomes(pairs)


def _components_witness(tri: Sequence[int], other: int,
                        comps: Sequence[tuple[float, int]]) -> JointDist:
    """Disjoint cyclic triangles: component ``j`` has mass ``p_j`` and size ``n_j``;
    the fourth variable is the component index."""
    pairs = []
    for j, (pj, nj) in enumerate(comps):
        if pj <= 0:
            continue
        w = pj / (nj * nj)
        for u in range(nj):
            for v in range(nj):
                val = {tri[0]: (j, u), tri[1]: (j, v), tri[2]: (j, (u + v) % nj), other: j}
                pairs.append((w, tuple(val[i] for i in range(1, 5))))
    return JointDist.from_outcomes(pairs, tol=1e-9)


def half_open_parameters(a: float, b: float, max_component: int = HALF_OPEN_MAX_COMPONENT,
                         max_components: int | None = None) -> tuple[int, int, int, float, list[float]]:
    """Parameters ``(c, l, t, p_t, q)`` of the non-lattice HalfOpen construction.

    ``c = floor(2**a)``; components ``1 .. t-1`` have size ``c`` and component
    ``t`` size ``c + l``; ``p_t = (a - log c) / (log(c + l) - log c)`` and the
    other masses are ``(1 - p_t) * q`` with ``q`` chosen so the component
    distribution has entropy ``b``.  ``t`` runs upward from 2 and ``l`` through
    1, 2, 4, ... and finally ``max_component - c``; the first feasible pair wins.
    """
    c = math.floor(2.0 ** a)
    logc = math.log2(c)
    if max_components is None:
        max_components = 2 + 2 * alphabet_for(b + 1)
    ls = []
    l = 1
    while c + l <= max_component:
        ls.append(l)
        l *= 2
    if max_component - c > 0 and max_component - c not in ls:
        ls.append(max_component - c)
    for t in range(2, max_components + 1):
        for l in ls:
            pt = (a - logc) / (math.log2(c + l) - logc)
            if not 0 < pt < 1:
                continue
            rest = (b - shannon([pt, 1 - pt])) / (1 - pt)
            if rest < -1e-15:
                continue
            rest = max(rest, 0.0)
            if t == 2:
                if rest > 1e-13:
                    continue
                q = [1.0]
            else:
                if rest > math.log2(t - 1):
                    continue
                q = dist_with_entropy(rest, t - 1)
            return c, l, t, pt, q
    raise WitnessError(
        f"no HalfOpen parameters for (a, b) = ({a}, {b}) with t in 2..{max_components} "
        f"and l in {ls[:1] + ls[-1:]}; b is too small for components of size <= {max_component}")


def _half_open_witness(ft: FaceType, a: float, b: float, tol: float,
                       max_component: int) -> JointDist:
    tri = elements_of(ft.first.support)
    (other,) = [e for e in range(1, 5) if e not in tri]
    k = log_match(a, tol)
    if b <= tol:
        if k is None:
            raise WitnessError(f"a = {a} is not log2 of an integer and b = 0")
        return _cyclic_block(k, ft.first)
    if k is not None:
        p = dist_with_entropy(b, alphabet_for(b))
        return _components_witness(tri, other, [(pj, k) for pj in p])
    c, l, t, pt, q = half_open_parameters(a, b, max_component)
    comps = [((1 - pt) * qj, c) for qj in q] + [(pt, c + l)]
    return _components_witness(tri, other, comps)


def _canonical_witness(ft: FaceType, a: float, b: float, params: dict, tol: float,
                       max_component: int) -> JointDist:
    cat = _catalog()
    r1 = cat.rank_function(ft.first)
    r2 = cat.rank_function(ft.second)
    thm = ft.theorem
    if thm == 1:
        return product_combine(_rank1_block(a, _rank1_support(r1)),
                               _rank1_block(b, _rank1_support(r2)))
    if thm == 2:
        return _matus_witness(ft, a, b, tol)
    if thm in (3, 4):
        k = params.get("k") or log_match(a, tol)
        if not k:
            raise WitnessError(f"a = {a} is not log2 of an integer")
        return product_combine(_cyclic_block(k, ft.first), _rank1_block(b, _rank1_support(r2)))
    if thm == 5:
        k1 = params.get("k1") or log_match(a, tol)
        k2 = params.get("k2") or log_match(b, tol)
        if not (k1 and k2):
            raise WitnessError(f"({a}, {b}) is not a pair of integer logarithms")
        return product_combine(_cyclic_block(k1, ft.first), _cyclic_block(k2, ft.second))
    if thm == 6:
        if "partition" in params:
            alpha = tuple(params["partition"])
            k = params.get("k") or sum(alpha)
        else:
            v = _predicate(6, a, b, tol, params.get("partition_cap", PARTITION_CAP))
            if not v.entropic:
                raise WitnessError(f"({a}, {b}) is not entropic on {ft.label}")
            k, alpha = v.detail["k"], tuple(v.detail["partition"])
        return _partition_witness(ft, k, alpha)
    if thm == 7:
        return _half_open_witness(ft, a, b, tol, max_component)
    raise WitnessError(f"no construction for theorem {thm}")


def point_from_params(face, params: dict, b: float | None = None) -> FacePoint:
    """Face point pinned by exact parameters: ``k`` (with ``b``), ``k1``/``k2``,
    or ``k`` and ``partition``."""
    ft, _, swapped = _resolve(face)
    if "partition" in params:
        alpha = list(params["partition"])
        k = params.get("k", sum(alpha))
        if sum(alpha) != k:
            raise FaceError(f"{alpha} does not sum to {k}")
        a = partition_entropy(alpha)
        bb = math.log2(k) - a
        bb = max(bb, 0.0)
    elif "k1" in params:
        a, bb = math.log2(params["k1"]), math.log2(params["k2"])
    elif "k" in params:
        a = math.log2(params["k"])
        bb = 0.0 if b is None else b
    else:
        raise FaceError("params need k, k1/k2 or partition")
    if swapped:
        a, bb = bb, a
    return FacePoint(face, a, bb)


def witness(fp: FacePoint, params: dict | None = None, tol: float = DEFAULT_TOL,
            max_component: int = HALF_OPEN_MAX_COMPONENT) -> JointDist:
    """Joint distribution whose entropy vector is ``face_point_vector(fp)``.

    ``params`` may pin ``k``, ``k1``/``k2`` or ``partition`` so no tolerance
    matching is needed.  The result is checked against the target before it is
    returned; a mismatch above ``tol`` raises ``WitnessError``.
    """
    params = dict(params or {})
    ft, perm, swapped = _resolve(fp.face)
    if not ft.characterized:
        raise WitnessError(f"{ft.label} is not characterized")
    if not params:
        v = membership(fp, tol=tol)
        if not v.entropic:
            raise WitnessError(f"({fp.a}, {fp.b}) is not entropic on {fp.face}")
    a, b = (fp.b, fp.a) if swapped else (fp.a, fp.b)
    d = _canonical_witness(ft, a, b, params, tol, max_component)
    d = permute_variables(d, perm)
    err = entropy_vector(d).max_abs_diff(face_point_vector(fp))
    if err > tol:
        raise WitnessError(f"witness misses the target by {err:.3g} bits (tolerance {tol})")
    return d


def witness_error(fp: FacePoint, d: JointDist) -> float:
    return entropy_vector(d).max_abs_diff(face_point_vector(fp))


LATTICE_MAX = 5
PARTITION_MAX = 6


def validation_set() -> list[tuple[FacePoint, dict]]:
    """Standard entropic sample points ``(fp, params)`` for every characterized type.

    Lattice points use ``k, k1, k2 <= 5``; the Matus faces add boundary points
    ``a + b = log2 ceil(2**a)`` and interior points above them; the Partition
    face uses every partition of ``k <= 6``; the HalfOpen face mixes lattice and
    non-lattice ``a`` with positive ``b``.
    """
    logs = [math.log2(k) for k in range(1, LATTICE_MAX + 1)]
    out: list[tuple[FacePoint, dict]] = []
    for ft in _catalog().face_types:
        if not ft.characterized:
            continue
        face, thm = ft.label, ft.theorem
        if thm == 1:
            pts = [(a, b) for a in logs for b in logs] + [(0.5, 1.7), (0.3, 2.2), (1.9, 0.0)]
            out += [(FacePoint(face, a, b), {}) for a, b in pts]
        elif thm == 2:
            out += [(FacePoint(face, a, b), {}) for a in logs for b in logs]
            for a in (0.3, 1.0, 1.5, math.log2(3), 1.9, 2.2, 2.5):
                edge = math.log2(ceil_pow2(a)) - a
                for extra in (0.0, 0.1, 0.7):
                    out.append((FacePoint(face, a, edge + extra), {}))
        elif thm in (3, 4):
            for k in range(1, LATTICE_MAX + 1):
                for b in logs + [0.37, 1.2, 2.9]:
                    out.append((FacePoint(face, math.log2(k), b), {"k": k}))
        elif thm == 5:
            for k1 in range(1, LATTICE_MAX + 1):
                for k2 in range(1, LATTICE_MAX + 1):
                    params = {"k1": k1, "k2": k2}
                    out.append((point_from_params(face, params), params))
        elif thm == 6:
            for k in range(1, PARTITION_MAX + 1):
                for alpha in partitions(k):
                    params = {"k": k, "partition": list(alpha)}
                    out.append((point_from_params(face, params), params))
        elif thm == 7:
            for a in logs:
                for b in (0.0, 0.3, 1.0, 1.7):
                    out.append((FacePoint(face, a, b), {}))
            for a in (0.4, 1.3, 1.9, 2.5):
                for b in (0.6, 1.0, 2.2):
                    out.append((FacePoint(face, a, b), {}))
    return out


# -- region sampling ----------------------------------------------------------

def _axis(top: float, step: float, snap: bool) -> list[float]:
    n = int(math.floor(top / step + 1e-9))
    vals = [i * step for i in range(n + 1)]
    if snap:
        k = 2
        while math.log2(k) <= top + 1e-12:
            vals.append(math.log2(k))
            k += 1
    return sorted(set(round(v, 15) for v in vals))


def region_sample(face, grid: tuple[float, float, float], tol: float = DEFAULT_TOL,
                  snap: bool = True) -> list[tuple[float, float, Verdict]]:
    """Membership on a grid ``(a_max, b_max, step)``, row by row in ``b``.

    With ``snap`` the axes also contain every ``log2 k`` inside the range, so
    the measure-zero entropic sets (lines, lattice points) show up.
    """
    a_max, b_max, step = grid
    if step <= 0:
        raise FaceError("grid step must be positive")
    out = []
    for b in _axis(b_max, step, snap):
        for a in _axis(a_max, step, snap):
            out.append((a, b, membership(FacePoint(face, a, b), tol=tol)))
    return out
