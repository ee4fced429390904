from __future__ import annotations

from itertools import combinations, product
from math import comb

import numpy as np
import pytest
from scipy.optimize import linprog

from matchfield.core import GroundConfig, Matroid, SignMap, is_matroid
from matchfield.oriented import chirotope, tree_chirotope
from matchfield.subdivision import (
    build_subdivision,
    face_bases,
    face_decomposition,
    forbidden_check,
    forbidden_split,
    local_to_global_verify,
    octahedron_faces,
    transversal_matroid,
)
from matchfield.triangulation import extract_matching_field, staircase_triangulation

from conftest import fixture

EXAMPLE_SIGNS = [[1, -1, 1, -1], [1, -1, -1, 1]]


def labels(bases):
    return sorted("".join(map(str, b)) for b in bases)


def polytope_edges(bases, n):
    """LP oracle: pairs of vertices whose midpoint is not a convex combination
    of the other vertices, i.e. the edges of the polytope."""
    verts = [np.array([1.0 if e in b else 0.0 for e in range(1, n + 1)]) for b in bases]
    edges = []
    for i, j in combinations(range(len(verts)), 2):
        others = [v for k, v in enumerate(verts) if k not in (i, j)]
        mid = (verts[i] + verts[j]) / 2
        if not others:
            edges.append((i, j))
            continue
        # weight on the other vertices in a convex combination hitting the midpoint
        allv = [verts[i], verts[j]] + others
        A_eq = np.vstack([np.array(allv).T, np.ones(len(allv))])
        b_eq = np.concatenate([mid, [1.0]])
        c = np.concatenate([[0.0, 0.0], -np.ones(len(others))])
        res = linprog(c, A_eq=A_eq, b_eq=b_eq, bounds=[(0, None)] * len(allv), method="highs")
        if res.status == 0 and -res.fun < 1e-9:
            edges.append((i, j))
    return [(bases[i], bases[j]) for i, j in edges]


def test_fig4_cells():
    sub = build_subdivision(fixture("fig4_prism4"))
    assert sorted(labels(c.matroid.bases) for c in sub.cells) == [
        ["12", "13", "14", "23", "24"],
        ["13", "14", "23", "24", "34"],
    ]
    assert sub.covers_ambient()


def test_cells_are_matroid_polytopes_by_edge_directions():
    # every edge of every cell is parallel to some e_i - e_j
    for ts in (staircase_triangulation(2, 4), staircase_triangulation(3, 5)):
        for cell in build_subdivision(ts).cells:
            bases = sorted(cell.matroid.bases)
            assert is_matroid(bases)
            for a, b in polytope_edges(bases, ts.n):
                assert len(set(a) ^ set(b)) == 2


def test_pointed_cells_cover_the_larger_uniform_matroid():
    sub = build_subdivision(staircase_triangulation(2, 3), pointed=True)
    assert sub.ambient == Matroid.uniform(2, 5)
    assert sub.covers_ambient()


def test_transversal_matroid_of_a_tree():
    tree = ((1, 1), (1, 2), (2, 2), (2, 3))
    m = transversal_matroid(tree, GroundConfig(2, 3))
    assert labels(m.bases) == ["12", "13", "23"]


def test_octahedron_faces_counts():
    assert len(octahedron_faces(Matroid.uniform(2, 4))) == 1
    # a (d-2)-set X and a disjoint 4-set: C(5,1) * C(4,4)
    assert len(octahedron_faces(Matroid.uniform(3, 5))) == 5 == comb(5, 1) * comb(4, 4)
    assert len(octahedron_faces(Matroid.uniform(3, 6))) == comb(6, 1) * comb(5, 4)


def test_forbidden_split_of_the_example_chirotope():
    chi = chirotope(fixture("fig1"), EXAMPLE_SIGNS)
    (face,) = octahedron_faces(Matroid.uniform(2, 4))
    apex = forbidden_split(chi, face)
    # products are chi(12)chi(34)=-, chi(13)chi(42)=-, chi(14)chi(23)=+
    assert apex == ((1, 4), (2, 3))


def test_face_decomposition_of_fig4():
    sub = build_subdivision(fixture("fig4_prism4"))
    (face,) = octahedron_faces(sub.ambient)
    kind, apexes = face_decomposition(sub, face)
    assert kind == "two-pyramid" and apexes == ((1, 2), (3, 4))
    assert face_bases(face)[0] == (1, 2)


def test_forbidden_check_pass_and_fail():
    sub = build_subdivision(fixture("fig4_prism4"))
    good = chirotope(fixture("fig1"), EXAMPLE_SIGNS)
    assert forbidden_check(good, sub)
    bad = SignMap.from_labels(2, 4, {"12": "+", "13": "+", "14": "+", "23": "+", "24": "-", "34": "-"})
    rep = forbidden_check(bad, sub)
    assert not rep.passed
    # products -, +, +: the forbidden split is the one the prism subdivision uses
    assert rep.witness["apexes"] == [(1, 2), (3, 4)]
    upper = sorted([(1, 2), (1, 3), (1, 4), (2, 3), (2, 4)])
    assert upper in rep.witness["cells"]


def test_forbidden_check_needs_a_chirotope():
    sub = build_subdivision(fixture("fig4_prism4"))
    not_chi = SignMap.from_labels(2, 4, {"12": "+", "13": "+", "14": "+", "23": "+", "24": "-", "34": "+"})
    with pytest.raises(ValueError, match="not a chirotope"):
        forbidden_check(not_chi, sub)


def test_matching_field_chirotopes_never_hit_a_forbidden_split():
    ts = staircase_triangulation(2, 4)
    sub = build_subdivision(ts)
    mf = extract_matching_field(ts)
    for signs in product((1, -1), repeat=8):
        A = [signs[:4], signs[4:]]
        assert forbidden_check(chirotope(mf, A), sub)


def test_local_to_global_on_cells():
    ts = staircase_triangulation(2, 4)
    sub = build_subdivision(ts)
    chi = chirotope(extract_matching_field(ts), EXAMPLE_SIGNS)
    pieces = [chi.restrict(c.matroid.bases) for c in sub.cells]
    rep = local_to_global_verify(pieces)
    assert rep.passed and rep.detail["cells"] == [True, True]


def test_local_to_global_rejects_inconsistent_gluing():
    # two trees that match {1, 3} with opposite permutation signs
    G = ((1, 1), (1, 3), (2, 1), (2, 2))
    H = ((1, 1), (1, 2), (2, 2), (2, 3))
    plus = [[1, 1, 1], [1, 1, 1]]
    pieces = [tree_chirotope(G, plus), tree_chirotope(H, plus)]
    assert pieces[0].value((1, 3)) == -pieces[1].value((1, 3))
    with pytest.raises(ValueError, match="inconsistent gluing"):
        local_to_global_verify(pieces)
