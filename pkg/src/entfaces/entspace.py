"""Set functions on a small ground set N_n = {1, ..., n}.

Subsets are bitmasks with bit ``i - 1`` standing for element ``i``.  The empty
set is mask 0; its value is pinned to zero and never stored, so a set function
on ``n`` elements is a vector of ``2**n - 1`` coordinates indexed by
``mask - 1``.

Two scalar backends share one class: exact (``fractions.Fraction``) for cone
work and real (``float``, entropies in bits) for distributions.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Sequence

MAX_N = 5
DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class GroundSet:
    n: int

    def __post_init__(self):
        if not isinstance(self.n, int) or not 1 <= self.n <= MAX_N:
            raise ValueError(f"ground set size must be an integer in 1..{MAX_N}, got {self.n!r}")

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    @property
    def dim(self) -> int:
        return (1 << self.n) - 1

    def subsets(self) -> range:
        """Nonempty subset masks in increasing order."""
        return range(1, 1 << self.n)

    def elements(self) -> tuple[int, ...]:
        return tuple(range(1, self.n + 1))


def _ground(g) -> GroundSet:
    return g if isinstance(g, GroundSet) else GroundSet(int(g))


def mask_of(elems: Iterable[int]) -> int:
    m = 0
    for e in elems:
        if e < 1:
            raise ValueError(f"elements are 1-based, got {e}")
        m |= 1 << (e - 1)
    return m


def elements_of(mask: int) -> tuple[int, ...]:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def subset_label(mask: int) -> str:
    """``0b1011`` -> ``"124"``; the empty set is ``""``."""
    return "".join(str(e) for e in elements_of(mask))


def _as_mask(a) -> int:
    if isinstance(a, int):
        return a
    if isinstance(a, str):
        return mask_of(int(c) for c in a)
    return mask_of(a)


class SetFunction:
    """Immutable vector of values on the nonempty subsets of N_n.

    ``f[A]`` accepts a mask, an iterable of elements, or a digit string such as
    ``"124"``.  ``f[0]`` is always zero.
    """

    __slots__ = ("_n", "_values", "_exact")

    def __init__(self, n, values: Sequence, exact: bool | None = None):
        g = _ground(n)
        vals = tuple(values)
        if len(vals) != g.dim:
            raise ValueError(f"expected {g.dim} values for n={g.n}, got {len(vals)}")
        if exact is None:
            exact = all(isinstance(v, (int, Fraction)) for v in vals)
        if exact:
            vals = tuple(Fraction(v) for v in vals)
        else:
            vals = tuple(float(v) for v in vals)
        self._n = g.n
        self._values = vals
        self._exact = exact

    @classmethod
    def from_function(cls, n, fn, exact: bool | None = None) -> "SetFunction":
        g = _ground(n)
        return cls(g, [fn(m) for m in g.subsets()], exact=exact)

    @classmethod
    def from_mapping(cls, n, mapping: Mapping[int, object], exact: bool | None = None) -> "SetFunction":
        g = _ground(n)
        return cls(g, [mapping.get(m, 0) for m in g.subsets()], exact=exact)

    @classmethod
    def zero(cls, n, exact: bool = True) -> "SetFunction":
        g = _ground(n)
        return cls(g, [0] * g.dim, exact=exact)

    @property
    def n(self) -> int:
        return self._n

    @property
    def ground(self) -> GroundSet:
        return GroundSet(self._n)

    @property
    def exact(self) -> bool:
        return self._exact

    @property
    def values(self) -> tuple:
        """Coordinates ordered by subset mask 1 .. 2**n - 1."""
        return self._values

    def __getitem__(self, a):
        m = _as_mask(a)
        if m == 0:
            return Fraction(0) if self._exact else 0.0
        if m >> self._n:
            raise KeyError(f"subset {a!r} is not inside N_{self._n}")
        return self._values[m - 1]

    def __iter__(self):
        return iter(self._values)

    def __len__(self):
        return len(self._values)

    def items(self):
        return zip(range(1, 1 << self._n), self._values)

    def __eq__(self, other):
        if not isinstance(other, SetFunction):
            return NotImplemented
        return self._n == other._n and self._values == other._values

    def __hash__(self):
        return hash((self._n, self._values))

    def __repr__(self):
        body = ", ".join(f"{subset_label(m)}:{v}" for m, v in self.items())
        return f"SetFunction(n={self._n}, {{{body}}})"

    def __add__(self, other):
        return combine(1, self, 1, other)

    def __sub__(self, other):
        return combine(1, self, -1, other)

    def __mul__(self, c):
        return combine(c, self, 0, self)

    __rmul__ = __mul__

    def to_real(self) -> "SetFunction":
        return SetFunction(self._n, [float(v) for v in self._values], exact=False)

    def is_integer(self) -> bool:
        return self._exact and all(v.denominator == 1 for v in self._values)

    def as_ints(self) -> tuple[int, ...]:
        if not self.is_integer():
            raise ValueError("set function is not integer valued")
        return tuple(int(v) for v in self._values)

    def max_abs_diff(self, other: "SetFunction") -> float:
        if self._n != other._n:
            raise ValueError("ground set mismatch")
        return max((abs(float(x) - float(y)) for x, y in zip(self._values, other._values)), default=0.0)

    def allclose(self, other: "SetFunction", tol: float = DEFAULT_TOL) -> bool:
        return self.max_abs_diff(other) <= tol

    # serialization

    def to_json_obj(self) -> dict:
        if self._exact:
            vals = {str(m): str(v) for m, v in self.items()}
        else:
            vals = {str(m): v for m, v in self.items()}
        return {"n": self._n, "values": vals}

    @classmethod
    def from_json_obj(cls, obj: Mapping) -> "SetFunction":
        n = int(obj["n"])
        raw = obj["values"]
        kinds = {isinstance(v, str) for v in raw.values()}
        if len(kinds) > 1:
            raise ValueError("mixed exact and real values in one set function")
        exact = kinds == {True} or not raw
        mapping = {}
        for k, v in raw.items():
            m = int(k)
            if not 1 <= m < (1 << n):
                raise ValueError(f"subset key {k} outside N_{n}")
            mapping[m] = Fraction(v) if exact else float(v)
        return cls.from_mapping(n, mapping, exact=exact)

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())

    @classmethod
    def from_json(cls, text: str) -> "SetFunction":
        return cls.from_json_obj(json.loads(text))


def _value(f: SetFunction, m: int):
    return 0 if m == 0 else f.values[m - 1]


def is_polymatroid(f: SetFunction, tol: float = DEFAULT_TOL) -> bool:
    """Nonnegativity, monotonicity and submodularity over all pairs of subsets.

    Exact functions are compared exactly; ``tol`` only applies to real ones.
    """
    eps = 0 if f.exact else tol
    full = (1 << f.n) - 1
    vals = [0] + list(f.values)
    for a in range(1, full + 1):
        if vals[a] < -eps:
            return False
    for a in range(full + 1):
        for b in range(full + 1):
            if a & b == a and vals[a] > vals[b] + eps:
                return False
            if vals[a] + vals[b] < vals[a & b] + vals[a | b] - eps:
                return False
    return True


@dataclass(frozen=True)
class LinearInequality:
    """``sum(coefficients[m - 1] * f(m)) >= 0``, indexed by its canonical position."""

    coefficients: tuple[int, ...]
    index: int
    kind: str = ""

    def __post_init__(self):
        if not any(self.coefficients):
            raise ValueError("inequality has no nonzero coefficient")

    def coefficient(self, mask: int) -> int:
        return 0 if mask == 0 else self.coefficients[mask - 1]

    def as_dict(self) -> dict[int, int]:
        return {m: c for m, c in enumerate(self.coefficients, start=1) if c}

    def evaluate(self, f: SetFunction):
        return sum(c * v for c, v in zip(self.coefficients, f.values) if c)


def elemental_inequalities(n) -> list[LinearInequality]:
    """Elemental Shannon inequalities in canonical order.

    First ``h(N) - h(N - i) >= 0`` for ascending ``i``, then
    ``h(Ki) + h(Kj) - h(K) - h(Kij) >= 0`` sorted by ``(i, j, K)``.
    There are ``n + C(n, 2) * 2**(n - 2)`` of them.
    """
    g = _ground(n)
    d = g.dim
    full = g.full
    rows: list[tuple[tuple[int, ...], str]] = []

    def vec(terms):
        c = [0] * d
        for m, s in terms:
            if m:
                c[m - 1] += s
        return tuple(c)

    for i in g.elements():
        rest = full & ~(1 << (i - 1))
        rows.append((vec([(full, 1), (rest, -1)]), f"H({i}|rest)"))
    for i, j in combinations(g.elements(), 2):
        bi, bj = 1 << (i - 1), 1 << (j - 1)
        others = full & ~(bi | bj)
        k = 0
        while True:
            rows.append(
                (vec([(k | bi, 1), (k | bj, 1), (k, -1), (k | bi | bj, -1)]),
                 f"I({i};{j}|{subset_label(k)})")
            )
            if k == others:
                break
            k = (k - others) & others  # next submask in increasing order
    return [LinearInequality(c, idx, kind) for idx, (c, kind) in enumerate(rows)]


def restrict(f: SetFunction, s) -> SetFunction:
    """Restriction to ``s``, relabelled 1..|s| in increasing order of the old labels."""
    sm = _as_mask(s)
    if sm == 0:
        raise ValueError("cannot restrict to the empty set")
    if sm >> f.n:
        raise ValueError(f"subset {s!r} is not inside N_{f.n}")
    old = elements_of(sm)
    k = len(old)

    def lift(m):
        return mask_of(old[e - 1] for e in elements_of(m))

    return SetFunction(k, [f[lift(m)] for m in range(1, 1 << k)], exact=f.exact)


def _check_perm(perm: Sequence[int], n: int) -> tuple[int, ...]:
    p = tuple(int(x) for x in perm)
    if sorted(p) != list(range(1, n + 1)):
        raise ValueError(f"{perm!r} is not a permutation of 1..{n}")
    return p


def permute_mask(mask: int, perm: Sequence[int]) -> int:
    """Image of a subset under ``i -> perm[i - 1]``."""
    out = 0
    for e in elements_of(mask):
        out |= 1 << (perm[e - 1] - 1)
    return out


def apply_permutation(f: SetFunction, perm: Sequence[int]) -> SetFunction:
    """``g(A) = f(perm(A))``; ``perm[i - 1]`` is the image of element ``i``."""
    p = _check_perm(perm, f.n)
    return SetFunction(f.n, [f[permute_mask(m, p)] for m in range(1, 1 << f.n)], exact=f.exact)


def compose(p: Sequence[int], q: Sequence[int]) -> tuple[int, ...]:
    """``p o q``: first ``q``, then ``p``."""
    return tuple(p[q[i] - 1] for i in range(len(q)))


def invert(p: Sequence[int]) -> tuple[int, ...]:
    inv = [0] * len(p)
    for i, x in enumerate(p, start=1):
        inv[x - 1] = i
    return tuple(inv)


def combine(c1, f1: SetFunction, c2, f2: SetFunction) -> SetFunction:
    """Pointwise ``c1 * f1 + c2 * f2``."""
    if f1.n != f2.n:
        raise ValueError(f"ground set mismatch: n={f1.n} vs n={f2.n}")
    exact = (f1.exact and f2.exact and isinstance(c1, (int, Fraction))
             and isinstance(c2, (int, Fraction)))
    if exact:
        vals = [c1 * x + c2 * y for x, y in zip(f1.values, f2.values)]
    else:
        a, b = float(c1), float(c2)
        vals = [a * float(x) + b * float(y) for x, y in zip(f1.values, f2.values)]
    return SetFunction(f1.n, vals, exact=exact)


def uniform_rank(n, k: int, support) -> SetFunction:
    """Rank function ``min(k, |A & support|)``."""
    sm = _as_mask(support)
    return SetFunction.from_function(n, lambda m: min(k, bin(m & sm).count("1")), exact=True)


def gcd_normalize(vec: Sequence[int]) -> tuple[int, ...]:
    g = 0
    for v in vec:
        g = math.gcd(g, int(v))
    if g == 0:
        return tuple(int(v) for v in vec)
    return tuple(int(v) // g for v in vec)
