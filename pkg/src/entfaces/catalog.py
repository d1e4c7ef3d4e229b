"""Names for the extreme rays of Gamma_n and the face-type table of Gamma_4.

Ray names follow the usual matroid notation written in ASCII: ``U23^123`` is
the rank-2 uniform matroid on {1,2,3} with element 4 a loop, ``W2^34`` the
order-2 wheel with 3 and 4 parallel, ``Uhat25^1`` / ``Uhat35^1`` / ``V8^12``
the three non-matroid families.  On fewer than four elements the family gets a
``_n`` suffix (``U12_3^12``).
"""

from __future__ import annotations

import functools
import re
from dataclasses import dataclass, field
from itertools import permutations
from typing import Sequence

from .cone import ExtremeRay, FacePair, double_description, enumerate_2faces
from .entspace import (
    LinearInequality,
    SetFunction,
    apply_permutation,
    elemental_inequalities,
    mask_of,
    subset_label,
    uniform_rank,
)

# (k, m) of the uniform families
UNIFORM = {"U11": (1, 1), "U12": (1, 2), "U13": (1, 3), "U14": (1, 4),
           "U23": (2, 3), "U24": (2, 4), "U34": (3, 4)}
NON_MATROID = ("Uhat25", "Uhat35", "V8")

# Row/column order of the face table for n = 4.
FAMILY_ORDER = ("U11", "U12", "U13", "U14", "U23", "W2", "U24", "U34",
                "Uhat25", "Uhat35", "V8")

# Support size carried in the name; 0 means the family is symmetric.
_SUPPORT_SIZE = {"U11": 1, "U12": 2, "U13": 3, "U14": 0, "U23": 3, "W2": 2,
                 "U24": 0, "U34": 0, "Uhat25": 1, "Uhat35": 1, "V8": 2}


class CatalogError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class RayName:
    family: str
    support: int = 0  # bitmask; 0 for symmetric families
    n: int = 4

    def __post_init__(self):
        base = self.base_family
        if base not in _SUPPORT_SIZE:
            raise CatalogError(f"unknown ray family {self.family!r}")
        size = _SUPPORT_SIZE[base]
        if self.n != 4 and base in UNIFORM:
            size = 0 if UNIFORM[base][1] == self.n else UNIFORM[base][1]
        if bin(self.support).count("1") != size:
            raise CatalogError(f"{self.family} needs a support of size {size}")
        if self.support >> self.n:
            raise CatalogError(f"support outside N_{self.n}")

    @property
    def base_family(self) -> str:
        return self.family.split("_")[0]

    def __str__(self):
        return self.family + (f"^{subset_label(self.support)}" if self.support else "")

    @classmethod
    def parse(cls, text: str, n: int = 4) -> "RayName":
        m = re.fullmatch(r"\s*([A-Za-z0-9]+(?:_\d)?)(?:\^(\d+))?\s*", text)
        if not m:
            raise CatalogError(f"cannot parse ray name {text!r}")
        fam = m.group(1)
        if "_" in fam:
            n = int(fam.split("_")[1])
        sup = mask_of(int(c) for c in m.group(2)) if m.group(2) else 0
        return cls(fam, sup, n)


def _family_for(base: str, n: int) -> str:
    return base if n == 4 else f"{base}_{n}"


def named_rank_function(name: RayName) -> SetFunction:
    """Rank function of a named matroid ray (uniform families and W2)."""
    base = name.base_family
    n = name.n
    full = (1 << n) - 1
    if base in UNIFORM:
        k, m = UNIFORM[base]
        sup = name.support or full
        if bin(sup).count("1") != m:
            raise CatalogError(f"{name} has the wrong support size")
        return uniform_rank(n, k, sup)
    if base == "W2":
        if n != 4:
            raise CatalogError("W2 is only defined on four elements")
        par = name.support

        def r(m):
            classes = (1 if m & par else 0) + bin(m & ~par & full).count("1")
            return min(2, classes)

        return SetFunction.from_function(n, r, exact=True)
    raise CatalogError(f"{name.family} is not a matroid family; its rank function comes from the cone")


def matroid_names(n: int) -> list[RayName]:
    """Every named matroid ray of Gamma_n that this catalog knows about."""
    full = (1 << n) - 1
    out = []
    for base, (k, m) in UNIFORM.items():
        if m > n:
            continue
        if m == n:
            out.append(RayName(_family_for(base, n), 0, n))
            continue
        for sup in range(1, full + 1):
            if bin(sup).count("1") == m:
                out.append(RayName(_family_for(base, n), sup, n))
    if n == 4:
        for sup in range(1, full + 1):
            if bin(sup).count("1") == 2:
                out.append(RayName("W2", sup, 4))
    return out


def all_permutations(n: int) -> list[tuple[int, ...]]:
    return list(permutations(range(1, n + 1)))


def ray_action(rays: Sequence[ExtremeRay]) -> dict[tuple[int, ...], tuple[int, ...]]:
    """For every permutation, the index each ray is sent to."""
    n = rays[0].rep.n
    index = {r.rep: i for i, r in enumerate(rays)}
    act = {}
    for p in all_permutations(n):
        img = []
        for r in rays:
            g = apply_permutation(r.rep, p)
            if g not in index:
                raise CatalogError("ray set is not closed under permutations")
            img.append(index[g])
        act[p] = tuple(img)
    return act


@dataclass(frozen=True)
class Orbit:
    family: str
    size: int
    representative: int
    members: tuple[int, ...]


def _orbits(rays, act) -> list[tuple[int, ...]]:
    seen = set()
    out = []
    for i in range(len(rays)):
        if i in seen:
            continue
        members = tuple(sorted({img[i] for img in act.values()}))
        seen.update(members)
        out.append(members)
    return out


def _fixed_element(rep: SetFunction) -> int:
    """The element whose stabiliser fixes the ray (orbit of size n)."""
    n = rep.n
    for i in range(1, n + 1):
        if all(apply_permutation(rep, p) == rep for p in all_permutations(n) if p[i - 1] == i):
            return i
    raise CatalogError("ray has no fixed element")


def name_rays(rays: Sequence[ExtremeRay], faces: Sequence[FacePair] | None = None) -> list[RayName]:
    """Name every extreme ray of Gamma_n (n = 2, 3, 4).

    Matroid rays are matched exactly against the named rank functions.  For
    n = 4 the 14 remaining rays split into orbits of sizes 4, 4 and 6; the
    6-orbit is V8, and the two 4-orbits are told apart by which U23 rays they
    share a 2-face with.
    """
    n = rays[0].rep.n
    lookup = {named_rank_function(nm): nm for nm in matroid_names(n)}
    names: list[RayName | None] = [lookup.get(r.rep) for r in rays]
    rest = [i for i, nm in enumerate(names) if nm is None]
    if not rest:
        return names
    if n != 4:
        raise CatalogError(f"unnamed rays for n={n}: {rest}")
    if faces is None:
        faces = enumerate_2faces(rays)
    act = ray_action(rays)
    adjacent = {(f.i, f.j) for f in faces if f.is_2face}
    adjacent |= {(j, i) for i, j in adjacent}
    u23 = {names[i].support: i for i in range(len(rays))
           if names[i] is not None and names[i].family == "U23"}
    full = 0b1111
    for members in _orbits(rays, act):
        if names[members[0]] is not None:
            continue
        if len(members) == 6:
            # The stabiliser of a pair also fixes its complement, so symmetry alone
            # cannot pick the label; use the pair shared by the adjacent U23 rays.
            for i in members:
                common = full
                for sup, j in u23.items():
                    if (i, j) in adjacent:
                        common &= sup
                if bin(common).count("1") != 2:
                    raise CatalogError("size-6 orbit member does not match the V8 fingerprint")
                names[i] = RayName("V8", common, 4)
            continue
        if len(members) != 4:
            raise CatalogError(f"unexpected residual orbit of size {len(members)}")
        probe = members[0]
        e = _fixed_element(rays[probe].rep)
        ebit = 1 << (e - 1)
        outside = (probe, u23[full & ~ebit]) in adjacent
        inside = any((probe, u23[m]) in adjacent for m in u23 if m & ebit)
        if outside and not inside:
            fam = "Uhat25"
        elif inside and not outside:
            fam = "Uhat35"
        else:
            raise CatalogError("size-4 orbit matches neither Uhat25 nor Uhat35 fingerprint")
        for i in members:
            names[i] = RayName(fam, 1 << (_fixed_element(rays[i].rep) - 1), 4)
    return names


def name_ray(rep: SetFunction, rays: Sequence[ExtremeRay], faces=None) -> RayName:
    names = name_rays(rays, faces)
    for r, nm in zip(rays, names):
        if r.rep == rep:
            return nm
    raise CatalogError("set function is not one of the given extreme rays")


def _family_key(name: RayName) -> int:
    base = name.base_family
    return FAMILY_ORDER.index(base) if base in FAMILY_ORDER else len(FAMILY_ORDER)


def classify_orbits(rays: Sequence[ExtremeRay], names: Sequence[RayName] | None = None) -> list[Orbit]:
    """Orbits of the rays under all permutations of N_n, in table family order.

    The representative is the member with the lexicographically least name.
    """
    if names is None:
        names = name_rays(rays)
    act = ray_action(rays)
    out = []
    for members in _orbits(rays, act):
        rep = min(members, key=lambda i: (str(names[i]), i))
        out.append(Orbit(names[rep].family, len(members), rep, members))
    out.sort(key=lambda o: (_family_key(names[o.representative]), o.family))
    return out


# Face types of Gamma_4 ------------------------------------------------------

STATUS_BY_THEOREM = {
    1: "AllEntropic", 2: "Matus", 3: "LogK", 4: "LogK",
    5: "LogGrid", 6: "Partition", 7: "HalfOpen",
}
UNCHARACTERIZED = "Uncharacterized"

# Printed representative of each face type, with the theorem that characterizes
# it (None for the uncharacterized ones).
FACE_ALIASES: tuple[tuple[str, str, int | None], ...] = (
    ("U11^1", "U11^2", 1), ("U12^12", "U11^1", 1), ("U12^12", "U11^3", 1),
    ("U13^123", "U11^1", 1), ("U13^123", "U11^4", 1), ("U14", "U11^1", 1),
    ("U23^123", "U11^1", 3), ("U23^123", "U11^4", 3), ("W2^14", "U11^1", 3),
    ("W2^34", "U11^1", 3), ("U24", "U11^1", None), ("U34", "U11^1", None),
    ("Uhat25^1", "U11^1", None), ("Uhat25^1", "U11^2", None),
    ("Uhat35^1", "U11^1", None), ("Uhat35^1", "U11^2", None),
    ("V8^12", "U11^1", None), ("V8^12", "U11^3", None),
    ("U12^12", "U12^13", 1), ("U12^12", "U12^34", 1), ("U13^123", "U12^12", 1),
    ("U13^123", "U12^14", 1), ("U14", "U12^12", 1), ("U23^123", "U12^12", 2),
    ("U23^123", "U12^14", 3), ("W2^14", "U12^14", 3), ("W2^24", "U12^14", 3),
    ("W2^34", "U12^12", 2), ("U24", "U12^12", None), ("U34", "U12^12", None),
    ("Uhat25^1", "U12^12", None), ("Uhat35^1", "U12^12", None),
    ("V8^12", "U12^13", None),
    ("U13^123", "U13^124", 1), ("U14", "U13^123", 1), ("U23^123", "U13^124", 4),
    ("W2^14", "U13^124", 2), ("U24", "U13^123", None), ("U34", "U13^123", None),
    ("Uhat25^1", "U13^123", None), ("Uhat35^1", "U13^234", None),
    ("V8^12", "U13^134", None),
    ("U23^123", "U14", 7), ("U34", "U14", None), ("V8^12", "U14", None),
    ("U23^123", "U23^124", 5), ("W2^12", "U23^134", 6), ("U24", "U23^123", None),
    ("U34", "U23^123", None), ("Uhat25^1", "U23^234", None),
    ("Uhat35^1", "U23^123", None), ("V8^12", "U23^123", None),
    ("W2^12", "W2^13", None), ("U24", "W2^12", None), ("Uhat25^1", "W2^12", None),
    ("Uhat35^1", "W2^23", None),
    ("Uhat25^1", "U24", None), ("Uhat35^1", "U24", None),
    ("V8^12", "U34", None),
)


def face_label(first: RayName, second: RayName) -> str:
    return f"({first},{second})"


def parse_face(text: str) -> tuple[RayName, RayName]:
    m = re.fullmatch(r"\s*\(?\s*([^,()]+?)\s*,\s*([^,()]+?)\s*\)?\s*", text)
    if not m:
        raise CatalogError(f"cannot parse face {text!r}; expected '(NAME,NAME)'")
    first, second = RayName.parse(m.group(1)), RayName.parse(m.group(2))
    if first.n != second.n:
        raise CatalogError("face rays live on different ground sets")
    return first, second


@dataclass(frozen=True)
class FaceType:
    """One orbit of 2-faces.  ``members`` are ordered ray-index pairs, each the
    image of ``(first, second)`` under the matching entry of ``perms``."""

    type_id: int
    first: RayName
    second: RayName
    count: int
    theorem: int | None
    members: tuple[tuple[int, int], ...] = field(repr=False)
    perms: tuple[tuple[int, ...], ...] = field(repr=False)

    @property
    def status(self) -> str:
        return STATUS_BY_THEOREM[self.theorem] if self.theorem else UNCHARACTERIZED

    @property
    def label(self) -> str:
        return face_label(self.first, self.second)

    @property
    def characterized(self) -> bool:
        return self.theorem is not None

    def as_row(self) -> dict:
        return {"type_id": self.type_id, "ray1": str(self.first), "ray2": str(self.second),
                "count": self.count, "status": self.status,
                "theorem": self.theorem if self.theorem else ""}


def _orient(names, i, j) -> tuple[int, int]:
    """Column family first, as in the printed table."""
    ki, kj = _family_key(names[i]), _family_key(names[j])
    if ki != kj:
        return (i, j) if ki > kj else (j, i)
    return (i, j) if str(names[i]) <= str(names[j]) else (j, i)


def face_type_table(face_pairs: Sequence[FacePair], names: Sequence[RayName],
                    rays: Sequence[ExtremeRay]) -> list[FaceType]:
    """Group the 2-faces into orbits under all permutations of the ground set."""
    act = ray_action(rays)
    index_of = {nm: i for i, nm in enumerate(names)}
    aliases = {}
    if names and names[0].n == 4:
        for a, b, thm in FACE_ALIASES:
            aliases[(index_of[RayName.parse(a)], index_of[RayName.parse(b)])] = thm
    faces = sorted((f.i, f.j) for f in face_pairs if f.is_2face)
    seen = set()
    groups = []
    for i, j in faces:
        if (i, j) in seen:
            continue
        orbit = {}
        for p, img in act.items():
            key = tuple(sorted((img[i], img[j])))
            orbit.setdefault(key, p)
        seen.update(orbit)
        cand = [(a, b) for a, b in aliases if tuple(sorted((a, b))) in orbit]
        if cand:
            first, second = cand[0]
            thm = aliases[cand[0]]
        else:
            pairs = [_orient(names, a, b) for a, b in orbit]
            first, second = min(pairs, key=lambda ab: (str(names[ab[0]]), str(names[ab[1]])))
            thm = None
        members, perms = [], []
        for p, img in sorted(act.items()):
            pair = (img[first], img[second])
            if pair not in members:
                members.append(pair)
                perms.append(p)
        groups.append((first, second, thm, tuple(members), tuple(perms)))
    groups.sort(key=lambda g: (_family_key(names[g[0]]), _family_key(names[g[1]]),
                               names[g[0]].support, names[g[1]].support))
    out = []
    for tid, (first, second, thm, members, perms) in enumerate(groups, start=1):
        count = len({tuple(sorted(m)) for m in members})
        out.append(FaceType(tid, names[first], names[second], count, thm, members, perms))
    return out


@dataclass(frozen=True)
class Catalog:
    """Everything computed from the elemental inequalities of Gamma_n."""

    n: int
    inequalities: tuple[LinearInequality, ...]
    rays: tuple[ExtremeRay, ...]
    names: tuple[RayName, ...]
    faces: tuple[FacePair, ...]
    face_types: tuple[FaceType, ...]

    def ray_index(self, name: RayName) -> int:
        for i, nm in enumerate(self.names):
            if nm == name:
                return i
        raise CatalogError(f"{name} is not an extreme ray of Gamma_{self.n}")

    def rank_function(self, name: RayName) -> SetFunction:
        return self.rays[self.ray_index(name)].rep

    def face_type(self, key) -> FaceType:
        """Look up by type id or by the label of its representative."""
        for ft in self.face_types:
            if key == ft.type_id or key == ft.label:
                return ft
        raise CatalogError(f"unknown face type {key!r}")

    def resolve_face(self, text: str) -> tuple[FaceType, tuple[int, ...], bool]:
        """Face type of any member face given by name.

        Returns ``(type, perm, swapped)``: the member equals the representative
        with rank functions transformed by ``apply_permutation(., perm)``, and
        ``swapped`` says the member lists the two rays in the opposite order.
        """
        a, b = parse_face(text)
        i, j = self.ray_index(a), self.ray_index(b)
        for ft in self.face_types:
            for pair, p in zip(ft.members, ft.perms):
                if pair == (i, j):
                    return ft, p, False
        for ft in self.face_types:
            for pair, p in zip(ft.members, ft.perms):
                if pair == (j, i):
                    return ft, p, True
        raise CatalogError(f"{text} is not a 2-dimensional face of Gamma_{self.n}")


@functools.lru_cache(maxsize=None)
def build_catalog(n: int = 4) -> Catalog:
    """Inequalities, rays, names, 2-faces and face types of Gamma_n (cached)."""
    ineqs = elemental_inequalities(n)
    rays = double_description(ineqs)
    faces = enumerate_2faces(rays, ineqs)
    names = name_rays(rays, faces)
    table = face_type_table(faces, names, rays) if n >= 2 else []
    return Catalog(n, tuple(ineqs), tuple(rays), tuple(names), tuple(faces), tuple(table))
