from collections import Counter
from itertools import permutations

import pytest

from entfaces.catalog import (
    FAMILY_ORDER,
    CatalogError,
    RayName,
    classify_orbits,
    name_ray,
    named_rank_function,
    parse_face,
)
from entfaces.entspace import SetFunction, apply_permutation, restrict, uniform_rank

from table_data import TABLE, ZERO_CELLS


def test_named_rank_examples():
    u = named_rank_function(RayName.parse("U12^12"))
    assert (u[{1}], u[{3}], u[{1, 2}], u[0b1111]) == (1, 0, 1, 1)
    t = named_rank_function(RayName.parse("U23^123"))
    assert t[{1, 2}] == 2 and t[{4}] == 0


def test_w2_restrictions():
    w = named_rank_function(RayName.parse("W2^34"))
    assert restrict(w, {1, 2, 3}) == uniform_rank(3, 2, 0b111)
    w12 = named_rank_function(RayName.parse("W2^12"))
    assert restrict(w12, {1, 3, 4}) == uniform_rank(3, 2, 0b111)
    assert w12[{1, 2}] == 1 and w12[{1, 3}] == 2


def test_parse_errors():
    with pytest.raises(CatalogError):
        RayName.parse("U99^1")
    with pytest.raises(CatalogError):
        RayName.parse("U12^1")
    with pytest.raises(CatalogError):
        parse_face("U12^12")
    assert str(RayName.parse("U12_3^12")) == "U12_3^12"


def test_orbits_n4(cat4):
    orbits = classify_orbits(cat4.rays, cat4.names)
    assert [o.family for o in orbits] == list(FAMILY_ORDER)
    assert [o.size for o in orbits] == [4, 6, 4, 1, 4, 6, 1, 1, 4, 4, 6]


def test_orbits_n3(cat3):
    orbits = classify_orbits(cat3.rays)
    assert [o.size for o in orbits] == [3, 3, 1, 1]
    assert [o.family for o in orbits] == ["U11_3", "U12_3", "U13_3", "U23_3"]


def test_orbits_n2(cat2):
    orbits = classify_orbits(cat2.rays)
    assert [o.size for o in orbits] == [2, 1]


def brute_orbit_sizes(rays):
    reps = [r.rep for r in rays]
    n = reps[0].n
    seen, sizes = set(), []
    for f in reps:
        if f in seen:
            continue
        orb = {apply_permutation(f, p) for p in permutations(range(1, n + 1))}
        seen |= orb
        sizes.append(len(orb))
    return sorted(sizes)


def test_orbits_brute_force(cat2, cat4):
    assert brute_orbit_sizes(cat2.rays) == [1, 2]
    assert brute_orbit_sizes(cat4.rays) == sorted([4, 6, 4, 1, 4, 6, 1, 1, 4, 4, 6])


def test_names_unique_and_rank_functions(cat4):
    assert len(set(cat4.names)) == 41
    for r, nm in zip(cat4.rays, cat4.names):
        if nm.family not in ("Uhat25", "Uhat35", "V8"):
            assert named_rank_function(nm) == r.rep


def test_name_ray(cat4):
    u24 = uniform_rank(4, 2, 0b1111)
    assert str(name_ray(u24, cat4.rays, cat4.faces)) == "U24"
    v8 = [nm for nm in cat4.names if nm.family == "V8"]
    assert len(v8) == 6


def test_non_matroid_forms(cat4):
    def size(m):
        return bin(m).count("1")

    uhat25 = SetFunction.from_function(4, lambda m: min(2, size(m & 0b1110) + 2 * (m & 1)))
    uhat35 = SetFunction.from_function(4, lambda m: min(3, size(m & 0b1110) + 2 * (m & 1)))
    assert cat4.rank_function(RayName.parse("Uhat25^1")) == uhat25
    assert cat4.rank_function(RayName.parse("Uhat35^1")) == uhat35


def test_names_equivariant(cat4):
    index = {r.rep: nm for r, nm in zip(cat4.rays, cat4.names)}
    for p in permutations([1, 2, 3, 4]):
        for r, nm in zip(cat4.rays, cat4.names):
            img = index[apply_permutation(r.rep, p)]
            assert img.family == nm.family


def test_face_type_count(cat4):
    assert len(cat4.face_types) == 59
    assert sum(ft.count for ft in cat4.face_types) == 510
    assert [ft.type_id for ft in cat4.face_types] == list(range(1, 60))


@pytest.mark.parametrize("first,second,count,theorem", TABLE)
def test_table_cell(cat4, first, second, count, theorem):
    ft = cat4.face_type(f"({first},{second})")
    assert ft.count == count
    assert ft.theorem == theorem


def test_table_is_complete(cat4):
    labels = {f"({a},{b})" for a, b, _, _ in TABLE}
    assert labels == {ft.label for ft in cat4.face_types}


@pytest.mark.parametrize("fam1,fam2", ZERO_CELLS)
def test_zero_cells(cat4, fam1, fam2):
    for f in cat4.faces:
        if f.is_2face:
            pair = {cat4.names[f.i].family, cat4.names[f.j].family}
            assert pair != {fam1, fam2}


def test_status_split(cat4):
    by_thm = Counter(ft.theorem for ft in cat4.face_types)
    assert [by_thm[t] for t in range(1, 8)] == [13, 3, 7, 1, 1, 1, 1]
    assert by_thm[None] == 32
    assert sum(ft.characterized for ft in cat4.face_types) == 27
    statuses = Counter(ft.status for ft in cat4.face_types)
    assert statuses["LogK"] == 8 and statuses["Uncharacterized"] == 32


def test_counts_divide_group_order(cat4):
    for ft in cat4.face_types:
        assert 24 % ft.count == 0


def test_members_are_images(cat4):
    for ft in cat4.face_types:
        r1, r2 = cat4.rank_function(ft.first), cat4.rank_function(ft.second)
        assert len({tuple(sorted(m)) for m in ft.members}) == ft.count
        for (i, j), p in zip(ft.members, ft.perms):
            assert cat4.rays[i].rep == apply_permutation(r1, p)
            assert cat4.rays[j].rep == apply_permutation(r2, p)


def test_every_face_in_one_type(cat4):
    owners = Counter()
    for ft in cat4.face_types:
        for m in {tuple(sorted(m)) for m in ft.members}:
            owners[m] += 1
    faces = {(f.i, f.j) for f in cat4.faces if f.is_2face}
    assert set(owners) == faces
    assert set(owners.values()) == {1}


def test_resolve_face(cat4):
    ft, perm, swapped = cat4.resolve_face("(U12^12,U23^124)")
    assert ft.label == "(U23^123,U12^12)" and swapped
    ft2, _, swapped2 = cat4.resolve_face("(U23^134,U12^34)")
    assert ft2 is ft and not swapped2
    with pytest.raises(CatalogError):
        cat4.resolve_face("(U24,U34)")


def test_table_sorted(cat4):
    keys = [(FAMILY_ORDER.index(ft.first.family), FAMILY_ORDER.index(ft.second.family))
            for ft in cat4.face_types]
    assert keys == sorted(keys)
