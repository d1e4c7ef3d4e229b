"""Acceptance criteria 1-8, each with its tolerance and runtime bound.

Every criterion prints one PASS/FAIL line (also collected in the terminal
summary).
"""

import math
import time
from collections import Counter

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from entfaces.catalog import classify_orbits, face_type_table, name_rays
from entfaces.cone import double_description, enumerate_2faces, extreme_rays_of, verify_extreme
from entfaces.dist import (
    entropy_vector,
    marginalize,
    product_combine,
    random_joint_dist,
    shannon,
)
from entfaces.entspace import elemental_inequalities, gcd_normalize, is_polymatroid, restrict
from entfaces.faces import (
    FacePoint,
    log_match,
    membership,
    partition_entropy,
    partitions,
    region_sample,
    validation_set,
    witness,
    witness_error,
)

from table_data import TABLE, ZERO_CELLS

TOL = 1e-9


def report(num, title, ok, elapsed, limit, detail=""):
    status = "PASS" if ok and elapsed < limit else "FAIL"
    line = f"criterion {num}: {status}  {title}  ({elapsed:.2f}s < {limit}s) {detail}".rstrip()
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, line
    assert elapsed < limit, line


@pytest.fixture(scope="module")
def gamma4():
    ineqs = elemental_inequalities(4)
    t0 = time.perf_counter()
    rays = double_description(ineqs)
    return ineqs, rays, time.perf_counter() - t0


def test_criterion_1_facet_counts():
    t0 = time.perf_counter()
    counts = {n: len(elemental_inequalities(n)) for n in (2, 3, 4)}
    elapsed = time.perf_counter() - t0
    report(1, "elemental inequality counts", counts == {2: 3, 3: 9, 4: 28}, elapsed, 1,
           f"{counts}")


def test_criterion_2_rays_and_families(gamma4):
    ineqs, rays, dd_time = gamma4
    t0 = time.perf_counter()
    names = name_rays(rays, enumerate_2faces(rays))
    sizes4 = [o.size for o in classify_orbits(rays, names)]
    rays3 = double_description(elemental_inequalities(3))
    sizes3 = [o.size for o in classify_orbits(rays3)]
    elapsed = dd_time + time.perf_counter() - t0
    ok = (len(rays) == 41 and sizes4 == [4, 6, 4, 1, 4, 6, 1, 1, 4, 4, 6]
          and len(rays3) == 8 and len(sizes3) == 4)
    report(2, "41 rays in 11 families, 8 rays in 4 families", ok, elapsed, 60,
           f"{sizes4} {sizes3}")


def test_criterion_3_extremeness_audit(gamma4):
    ineqs, rays, _ = gamma4
    t0 = time.perf_counter()
    all_extreme = all(verify_extreme(r, ineqs) for r in rays)
    normals = set(extreme_rays_of([r.vector for r in rays]))
    want = {gcd_normalize(q.coefficients) for q in ineqs}
    elapsed = time.perf_counter() - t0
    report(3, "every ray extreme, dual recovers 28 normals",
           all_extreme and normals == want and len(want) == 28, elapsed, 60)


def test_criterion_4_table(gamma4):
    ineqs, rays, _ = gamma4
    t0 = time.perf_counter()
    faces = enumerate_2faces(rays, ineqs)
    names = name_rays(rays, faces)
    table = face_type_table(faces, names, rays)
    elapsed = time.perf_counter() - t0
    by_label = {ft.label: ft.count for ft in table}
    mismatches = [(a, b, c) for a, b, c, _ in TABLE if by_label.get(f"({a},{b})") != c]
    pairs = {frozenset((names[f.i].family, names[f.j].family)) for f in faces if f.is_2face}
    zero_hits = [z for z in ZERO_CELLS if frozenset(z) in pairs]
    ok = len(table) == 59 and not mismatches and not zero_hits
    report(4, "59 face types, all cell counts, all zero cells", ok, elapsed, 10,
           f"mismatches={mismatches} zero_hits={zero_hits}")


def test_criterion_5_status_split(cat4):
    t0 = time.perf_counter()
    by_thm = Counter(ft.theorem for ft in cat4.face_types)
    split = [by_thm[t] for t in range(1, 8)]
    characterized = sum(ft.characterized for ft in cat4.face_types)
    elapsed = time.perf_counter() - t0
    report(5, "27 characterized types split 13/3/7/1/1/1/1",
           characterized == 27 and split == [13, 3, 7, 1, 1, 1, 1], elapsed, 60, f"{split}")


def test_criterion_6_witness_roundtrip(cat4):
    t0 = time.perf_counter()
    worst, failures = 0.0, []
    points = validation_set()
    for fp, params in points:
        try:
            err = witness_error(fp, witness(fp, params))
        except Exception as exc:  # recorded, reported as failure
            failures.append((fp, repr(exc)))
            continue
        worst = max(worst, err)
    elapsed = time.perf_counter() - t0
    ok = not failures and worst <= TOL and len({fp.face for fp, _ in points}) == 27
    report(6, f"witness round-trip on {len(points)} validation points", ok, elapsed, 120,
           f"max_error={worst:.2e} failures={failures[:3]}")


def _sawtooth_ok():
    rows = region_sample("(U23^123,U12^12)", (2, 1, 0.01))
    for a, b, v in rows:
        expect = any(a - TOL <= math.log2(k) <= a + b + TOL for k in range(1, 16))
        if v.entropic != expect:
            return False
    for k in (2, 3, 4):
        lk = math.log2(k)
        if not membership(FacePoint("(U23^123,U12^12)", lk, 0.0)).entropic:
            return False
        if membership(FacePoint("(U23^123,U12^12)", lk + 1e-6, 0.0)).entropic:
            return False
        top = math.log2(k + 1) - lk
        # vertical edge at a = log2 k, up to b = log2(k+1) - log2 k just to its right
        if membership(FacePoint("(U23^123,U12^12)", lk + 1e-6, top - 1e-3)).entropic:
            return False
        if not membership(FacePoint("(U23^123,U12^12)", lk + 1e-6, top)).entropic:
            return False
    return True


def _vertical_lines_ok(face):
    return all(v.entropic == (log_match(a) is not None)
               for a, b, v in region_sample(face, (3, 2, 0.01)))


def _lattice_ok():
    return all(v.entropic == (log_match(a) is not None and log_match(b) is not None)
               for a, b, v in region_sample("(U23^123,U23^124)", (3, 3, 0.01)))


def _partition_dots_ok():
    face = "(W2^12,U23^134)"
    for k in range(1, 9):
        lk = math.log2(k)
        allowed = sorted({round(partition_entropy(p), 12) for p in partitions(k)})
        grid = np.linspace(0, lk, 801).tolist() + [partition_entropy(p) for p in partitions(k)]
        hits = sorted({round(a, 12) for a in grid
                       if membership(FacePoint(face, a, max(lk - a, 0.0))).entropic})
        if hits != allowed:
            return False
        # off the lines nothing is entropic
        if any(membership(FacePoint(face, a, lk - a + 0.013)).entropic for a in grid[:50]):
            return False
    k4 = sorted(round(partition_entropy(p), 12) for p in partitions(4))
    want = sorted(round(x, 12) for x in (0, shannon([0.75, 0.25]), 1, 1.5, 2))
    return k4 == want


def _half_plane_ok():
    for a, b, v in region_sample("(U23^123,U14)", (3, 2, 0.01)):
        if v.entropic != (b > 0 or log_match(a) is not None):
            return False
    return not membership(FacePoint("(U23^123,U14)", 1.3, 0.0)).entropic


def test_criterion_7_region_shapes(cat4):
    t0 = time.perf_counter()
    line_faces = [ft.label for ft in cat4.face_types if ft.theorem in (3, 4)]
    checks = {
        "sawtooth": _sawtooth_ok(),
        "vertical lines": all(_vertical_lines_ok(f) for f in line_faces),
        "lattice": _lattice_ok(),
        "partition dots": _partition_dots_ok(),
        "half plane": _half_plane_ok(),
    }
    elapsed = time.perf_counter() - t0
    report(7, "membership region shapes", all(checks.values()), elapsed, 30, f"{checks}")


def test_criterion_8_property_suites():
    t0 = time.perf_counter()
    rng = np.random.default_rng(20240601)
    poly = all(is_polymatroid(entropy_vector(random_joint_dist(rng, n)), TOL)
               for n in (2, 3, 4) for _ in range(1000))
    commute = True
    additive = True
    for _ in range(200):
        d = random_joint_dist(rng, 4)
        s = int(rng.integers(1, 16))
        commute &= entropy_vector(marginalize(d, s)).allclose(restrict(entropy_vector(d), s), TOL)
        e = random_joint_dist(rng, 4)
        additive &= entropy_vector(product_combine(d, e)).allclose(
            entropy_vector(d) + entropy_vector(e), TOL)
    upward = True
    for _ in range(2000):
        a, b, db = rng.uniform(0, 3), rng.uniform(0, 2), rng.uniform(0, 1)
        if membership(FacePoint("(U23^123,U12^12)", a, b)).entropic:
            upward &= membership(FacePoint("(U23^123,U12^12)", a, b + db)).entropic
    elapsed = time.perf_counter() - t0
    report(8, "polymatroidal, commuting, additive, upward closed",
           poly and commute and additive and upward, elapsed, 60,
           f"poly={poly} commute={commute} additive={additive} upward={upward}")
