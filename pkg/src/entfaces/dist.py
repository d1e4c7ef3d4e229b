"""Finite joint distributions and their entropy vectors (bits)."""

from __future__ import annotations

import json
import math
from typing import Hashable, Iterable, Mapping, Sequence

import numpy as np

from .entspace import DEFAULT_TOL, SetFunction, elements_of, mask_of

NORM_TOL = 1e-12
ENTROPY_TOL = 1e-12


class DistError(ValueError):
    pass


def shannon(probs: Iterable[float]) -> float:
    """Entropy in bits; zero masses contribute nothing."""
    p = np.asarray(list(probs), dtype=float)
    p = p[p > 0]
    if p.size <= 1:
        return 0.0  # a single cell is certain even if rounding left it below 1
    return float(-(p * np.log2(p)).sum())


class JointDist:
    """Joint pmf of ``n`` variables; symbols of variable ``i`` are ``0 .. alphabet_sizes[i] - 1``.

    Only outcomes of positive mass are stored, in sorted order.
    """

    __slots__ = ("_n", "_alphabets", "_outcomes", "_probs")

    def __init__(self, n: int, alphabet_sizes: Sequence[int], pmf: Mapping[tuple, float],
                 tol: float = NORM_TOL):
        if n < 1:
            raise DistError("need at least one variable")
        sizes = tuple(int(k) for k in alphabet_sizes)
        if len(sizes) != n or any(k < 1 for k in sizes):
            raise DistError(f"need {n} alphabet sizes >= 1, got {alphabet_sizes!r}")
        merged: dict[tuple, float] = {}
        for x, p in pmf.items():
            x = tuple(int(v) for v in x)
            if len(x) != n or any(not 0 <= v < k for v, k in zip(x, sizes)):
                raise DistError(f"outcome {x} does not fit alphabets {sizes}")
            p = float(p)
            if p < 0 or math.isnan(p):
                raise DistError(f"negative mass {p} at {x}")
            if p > 0:
                merged[x] = merged.get(x, 0.0) + p
        total = math.fsum(merged.values())
        if abs(total - 1.0) > tol:
            raise DistError(f"masses sum to {total!r}, not 1")
        keys = sorted(merged)
        self._n = n
        self._alphabets = sizes
        self._outcomes = np.array(keys, dtype=np.int64).reshape(len(keys), n)
        self._probs = np.array([merged[k] for k in keys], dtype=float)
        self._outcomes.setflags(write=False)
        self._probs.setflags(write=False)

    @classmethod
    def from_outcomes(cls, pairs: Iterable[tuple[float, Sequence[Hashable]]],
                      tol: float = NORM_TOL) -> "JointDist":
        """Build from ``(mass, (x1, ..., xn))`` with arbitrary hashable symbols.

        Each variable's symbols are relabelled ``0, 1, ...`` in sorted order of
        their ``repr``, so the result is deterministic.
        """
        pairs = [(float(p), tuple(x)) for p, x in pairs if p > 0]
        if not pairs:
            raise DistError("no outcome with positive mass")
        n = len(pairs[0][1])
        codes = []
        for i in range(n):
            syms = sorted({x[i] for _, x in pairs}, key=repr)
            codes.append({s: c for c, s in enumerate(syms)})
        pmf: dict[tuple, float] = {}
        for p, x in pairs:
            key = tuple(codes[i][x[i]] for i in range(n))
            pmf[key] = pmf.get(key, 0.0) + p
        return cls(n, [len(c) for c in codes], pmf, tol=tol)

    @classmethod
    def point_mass(cls, n: int) -> "JointDist":
        return cls(n, [1] * n, {(0,) * n: 1.0})

    @property
    def n(self) -> int:
        return self._n

    @property
    def alphabet_sizes(self) -> tuple[int, ...]:
        return self._alphabets

    @property
    def pmf(self) -> dict[tuple[int, ...], float]:
        return {tuple(int(v) for v in x): float(p) for x, p in zip(self._outcomes, self._probs)}

    @property
    def support_size(self) -> int:
        return len(self._probs)

    def __repr__(self):
        return f"JointDist(n={self._n}, alphabets={self._alphabets}, support={self.support_size})"

    def __eq__(self, other):
        if not isinstance(other, JointDist):
            return NotImplemented
        return (self._n == other._n and self._alphabets == other._alphabets
                and np.array_equal(self._outcomes, other._outcomes)
                and np.array_equal(self._probs, other._probs))

    def marginal_probs(self, cols: Sequence[int]) -> np.ndarray:
        """Masses of the marginal on 0-based columns ``cols`` (order arbitrary)."""
        if not cols:
            return np.array([1.0])
        sub = self._outcomes[:, list(cols)]
        _, inv = np.unique(sub, axis=0, return_inverse=True)
        return np.bincount(inv.reshape(-1), weights=self._probs)

    def entropy(self, subset) -> float:
        m = subset if isinstance(subset, int) else mask_of(subset)
        return shannon(self.marginal_probs([e - 1 for e in elements_of(m)]))

    # serialization

    def to_json_obj(self) -> dict:
        return {"n": self._n, "alphabets": list(self._alphabets),
                "pmf": [{"x": list(x), "p": p} for x, p in self.pmf.items()]}

    @classmethod
    def from_json_obj(cls, obj: Mapping, tol: float = DEFAULT_TOL) -> "JointDist":
        pmf: dict[tuple, float] = {}
        for item in obj["pmf"]:
            x = tuple(int(v) for v in item["x"])
            pmf[x] = pmf.get(x, 0.0) + float(item["p"])
        return cls(int(obj["n"]), obj["alphabets"], pmf, tol=tol)

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_json_obj(), **kw)

    @classmethod
    def from_json(cls, text: str, tol: float = DEFAULT_TOL) -> "JointDist":
        return cls.from_json_obj(json.loads(text), tol=tol)


def entropy_vector(d: JointDist) -> SetFunction:
    """``A -> H(X_A)`` in bits for every nonempty ``A``."""
    vals = [d.entropy(m) for m in range(1, 1 << d.n)]
    return SetFunction(d.n, vals, exact=False)


def marginalize(d: JointDist, s) -> JointDist:
    """Marginal on ``s``; variables keep their relative order."""
    m = s if isinstance(s, int) else mask_of(s)
    if m == 0:
        raise DistError("cannot marginalize onto the empty set")
    if m >> d.n:
        raise DistError(f"subset {s!r} outside the {d.n} variables")
    cols = [e - 1 for e in elements_of(m)]
    pmf: dict[tuple, float] = {}
    for x, p in d.pmf.items():
        key = tuple(x[c] for c in cols)
        pmf[key] = pmf.get(key, 0.0) + p
    return JointDist(len(cols), [d.alphabet_sizes[c] for c in cols], pmf, tol=1e-9)


def permute_variables(d: JointDist, perm: Sequence[int]) -> JointDist:
    """New variable ``i`` is old variable ``perm[i - 1]``.

    If ``d`` has entropy vector ``f`` the result has ``apply_permutation(f, perm)``.
    """
    if sorted(perm) != list(range(1, d.n + 1)):
        raise DistError(f"{perm!r} is not a permutation of 1..{d.n}")
    cols = [p - 1 for p in perm]
    pmf = {tuple(x[c] for c in cols): p for x, p in d.pmf.items()}
    return JointDist(d.n, [d.alphabet_sizes[c] for c in cols], pmf, tol=1e-9)


def product_combine(d1: JointDist, d2: JointDist) -> JointDist:
    """Independent pairing ``X_i = (X'_i, X''_i)``; entropy vectors add."""
    if d1.n != d2.n:
        raise DistError(f"variable count mismatch: {d1.n} vs {d2.n}")
    k2 = d2.alphabet_sizes
    sizes = [a * b for a, b in zip(d1.alphabet_sizes, k2)]
    pmf = {}
    items2 = list(d2.pmf.items())
    for x, p in d1.pmf.items():
        for y, q in items2:
            pmf[tuple(a * kb + b for a, b, kb in zip(x, y, k2))] = p * q
    return JointDist(d1.n, sizes, pmf, tol=1e-9)


def _mixture(t: float, m: int) -> list[float]:
    u = t / m
    return [1.0 - t + u] + [u] * (m - 1)


def dist_with_entropy(target: float, m: int, tol: float = ENTROPY_TOL) -> list[float]:
    """pmf on ``m`` symbols with entropy ``target`` bits.

    Searches the family ``(1 - t) * delta_0 + t * uniform(m)``, whose entropy
    increases strictly from 0 to ``log2(m)`` as ``t`` goes from 0 to 1.
    """
    if m < 1:
        raise DistError("alphabet size must be >= 1")
    top = math.log2(m)
    if target < 0 or target > top + tol:
        raise DistError(f"target entropy {target} outside [0, log2({m})]")
    if target <= 0:
        return _mixture(0.0, m)
    if target >= top - tol:
        return [1.0 / m] * m
    lo, hi = 0.0, 1.0
    h_lo, h_hi = 0.0, top
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        h = shannon(_mixture(mid, m))
        if not h_lo <= h <= h_hi:
            raise DistError("entropy is not monotone along the mixture family")
        if abs(h - target) <= tol:
            return _mixture(mid, m)
        if h < target:
            lo, h_lo = mid, h
        else:
            hi, h_hi = mid, h
        if hi - lo < 1e-17:
            break
    mid = 0.5 * (lo + hi)
    p = _mixture(mid, m)
    if abs(shannon(p) - target) > tol:
        raise DistError(f"bisection stalled at |H - target| = {abs(shannon(p) - target):.3g}")
    return p


def alphabet_for(target: float) -> int:
    """Smallest alphabet whose maximum entropy reaches ``target``."""
    if target <= 0:
        return 1
    m = max(2, math.ceil(2.0 ** target))
    while math.log2(m) < target:
        m += 1
    return m


def single_variable(n: int, pmf: Sequence[float], support) -> JointDist:
    """One variable with the given pmf copied onto every element of ``support``;
    the rest are constant.  Its entropy vector is ``H(pmf)`` times the rank-1
    matroid on ``support``."""
    m = support if isinstance(support, int) else mask_of(support)
    pairs = []
    for s, p in enumerate(pmf):
        pairs.append((p, tuple(s if m >> i & 1 else 0 for i in range(n))))
    return JointDist(n, [len(pmf) if m >> i & 1 else 1 for i in range(n)],
                     {x: p for p, x in pairs if p > 0}, tol=1e-9)


def _check_roles(roles, n):
    roles = tuple(int(r) for r in roles)
    if len(roles) != 3 or len(set(roles)) != 3:
        raise DistError(f"need three distinct role indices, got {roles}")
    if any(not 1 <= r <= n for r in roles):
        raise DistError(f"role indices must lie in 1..{n}")
    return roles


def cyclic_construction(k: int, roles: Sequence[int], n: int,
                        copies: Mapping[int, int] | None = None) -> JointDist:
    """``A, B`` uniform on Z_k at ``roles[0], roles[1]``; ``A + B mod k`` at ``roles[2]``.

    Other variables are constant unless ``copies`` maps them to a role variable
    they duplicate.  The entropy vector is ``log2(k)`` times the rank of U_{2,3}
    on the roles (extended by the copies).
    """
    if k < 1:
        raise DistError("k must be >= 1")
    roles = _check_roles(roles, n)
    copies = dict(copies or {})
    pairs = []
    w = 1.0 / (k * k)
    for a in range(k):
        for b in range(k):
            val = {roles[0]: a, roles[1]: b, roles[2]: (a + b) % k}
            x = tuple(val.get(i, val.get(copies.get(i), 0)) for i in range(1, n + 1))
            pairs.append((w, x))
    return JointDist.from_outcomes(pairs)


def skewed_cyclic(k: int, p: Sequence[float], roles: Sequence[int], n: int,
                  copies: Mapping[int, int] | None = None) -> JointDist:
    """``X_low ~ p``, ``U`` uniform on Z_k, ``X_high2 = U``, ``X_high1 = X_low + U mod k``.

    ``roles = (low, high1, high2)``.  Entropies: ``h(low) = H(p)``,
    ``h(high1) = h(high2) = log2 k`` and every pair or triple ``log2 k + H(p)``.
    """
    roles = _check_roles(roles, n)
    p = [float(x) for x in p]
    if len(p) != k or any(x < 0 for x in p) or abs(math.fsum(p) - 1) > 1e-9:
        raise DistError(f"need a pmf on Z_{k}")
    low, h1, h2 = roles
    copies = dict(copies or {})
    pairs = []
    for a, pa in enumerate(p):
        if pa <= 0:
            continue
        for u in range(k):
            val = {low: a, h1: (a + u) % k, h2: u}
            x = tuple(val.get(i, val.get(copies.get(i), 0)) for i in range(1, n + 1))
            pairs.append((pa / k, x))
    return JointDist.from_outcomes(pairs)


def random_joint_dist(rng: np.random.Generator, n: int, max_alphabet: int = 3,
                      sparsity: float = 0.3) -> JointDist:
    """Random pmf with some zero cells; used by the property tests and CLI demos."""
    sizes = [int(rng.integers(1, max_alphabet + 1)) for _ in range(n)]
    cells = list(np.ndindex(*sizes))
    w = rng.dirichlet(np.full(len(cells), 0.5))
    keep = rng.random(len(cells)) >= sparsity
    keep[int(rng.integers(len(cells)))] = True
    w = np.where(keep, w, 0.0)
    w = w / w.sum()
    return JointDist(n, sizes, {c: float(p) for c, p in zip(cells, w) if p > 0}, tol=1e-9)
