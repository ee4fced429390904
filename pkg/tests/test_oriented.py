from __future__ import annotations

import random
from itertools import combinations, product
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from matchfield.core import SignedVector, check_full_gp, det_sign, is_chirotope, orthogonal
from matchfield.oriented import (
    chirotope,
    chow_pd_graph,
    chow_tree,
    circuits_of,
    cocircuits,
    cocircuits_of,
    covector_sweep,
    dual_pair,
    duality_identity,
    is_covector,
    orthogonality_witness,
    pointed_covector_pairs,
    pointed_matrix,
    psi,
    sign_matrix,
    signed_circuits,
    topes,
    tree_chirotope,
)
from matchfield.coherent import diagonal_field
from matchfield.triangulation import extract_matching_field, placing_completion, pointed_extension, staircase_triangulation

from conftest import fixture

EXAMPLE_SIGNS = [[1, -1, 1, -1], [1, -1, -1, 1]]


def uniform_tope_count(r: int, n: int) -> int:
    # regions of a generic central arrangement of n hyperplanes in R^r
    return 2 * sum(comb(n - 1, i) for i in range(r))


def random_matrix(rng, d, n):
    return [[rng.choice((1, -1)) for _ in range(n)] for _ in range(d)]


def test_sign_matrix_parsing():
    assert sign_matrix(["+-0", "--+"]) == ((1, -1, 0), (-1, -1, 1))
    assert pointed_matrix([[1, -1]]) == ((1, 1, -1),)


def test_example_chirotope():
    chi = chirotope(fixture("fig1"), fixture("fig10_signs"))
    assert chi.to_labels() == {"12": "-", "13": "-", "14": "+", "23": "+", "24": "-", "34": "+"}
    assert is_chirotope(chi)


def test_support_violation():
    with pytest.raises(ValueError, match="support violation"):
        chirotope(fixture("fig1"), [[1, 0, 1, 1], [1, 1, 1, 1]])


def test_all_plus_matrix_gives_matching_parities():
    mf = fixture("fig3")
    chi = chirotope(mf, [[1] * 5] * 3)
    assert all(chi.value(m.support) == mf.sign(m.support) for m in mf)


def test_fig3_all_plus_fails_three_term_gp():
    from matchfield.core import check_3term_gp

    rep = check_3term_gp(chirotope(fixture("fig3"), [[1] * 5] * 3))
    assert not rep.passed
    w = rep.witness
    assert (w["x1"], w["x2"], w["y1"], w["y2"], list(w["X"])) == (1, 2, 3, 4, [5])
    assert list(w["products"]) == [1, 1, 1]


def test_tree_chirotope_agrees_with_determinants():
    ts = staircase_triangulation(3, 5)
    rng = random.Random(3)
    for t in ts.trees:
        A = random_matrix(rng, 3, 5)
        mags = [[rng.randint(1, 9) for _ in range(5)] for _ in range(3)]
        tree_chirotope(t, A, realization_magnitudes=mags)  # asserts internally


def test_example_circuit_and_cocircuit():
    ts = fixture("fig4_prism4")
    mf = extract_matching_field(ts)
    pos, neg = signed_circuits(mf, EXAMPLE_SIGNS, (1, 2, 3))
    assert pos.signs == (1, 1, -1, 0) and neg == -pos
    assert chow_tree(ts, (1, 2, 4)) == ((1, 1), (1, 2), (1, 3), (2, 3), (2, 4))
    assert chow_pd_graph(ts, (1, 2, 4)) == frozenset({(1, 1), (1, 2), (2, 4)})
    co, _ = cocircuits(ts, EXAMPLE_SIGNS, (1, 2, 4))
    assert co.signs == (1, -1, 0, 1)


@pytest.mark.parametrize("d,n", [(2, 4), (3, 5)])
def test_pd_graph_circuits_match_chirotope_circuits(d, n):
    ts = staircase_triangulation(d, n)
    mf = extract_matching_field(ts)
    rng = random.Random(d * 10 + n)
    for _ in range(10):
        A = random_matrix(rng, d, n)
        chi = chirotope(mf, A)
        from_chi = {c.signs for c in circuits_of(chi)} | {(-c).signs for c in circuits_of(chi)}
        co_chi = {c.signs for c in cocircuits_of(chi)} | {(-c).signs for c in cocircuits_of(chi)}
        for tau in combinations(range(1, n + 1), d + 1):
            assert signed_circuits(mf, A, tau)[0].signs in from_chi
        for rho in combinations(range(1, n + 1), n - d + 1):
            assert cocircuits(ts, A, rho)[0].signs in co_chi


def test_circuits_are_orthogonal_to_cocircuits():
    ts = staircase_triangulation(3, 5)
    mf = extract_matching_field(ts)
    A = random_matrix(random.Random(5), 3, 5)
    for tau in combinations(range(1, 6), 4):
        c = signed_circuits(mf, A, tau)[0]
        for rho in combinations(range(1, 6), 3):
            assert orthogonal(c, cocircuits(ts, A, rho)[0])


def test_orthogonality_witness_at_least_two():
    ts = staircase_triangulation(3, 5)
    mf = extract_matching_field(ts)
    for tau in combinations(range(1, 6), 4):
        for rho in combinations(range(1, 6), 3):
            if len(set(tau) & set(rho)) >= 2:
                assert orthogonality_witness(ts, tau, rho, mf) >= 2


@pytest.mark.parametrize("ts_name", ["prism", "fig4_prism4"])
def test_duality_identity_for_all_matrices(ts_name):
    ts = fixture(ts_name)
    for signs in product((1, -1), repeat=ts.d * ts.n):
        A = [signs[i * ts.n:(i + 1) * ts.n] for i in range(ts.d)]
        chi1, chi2 = dual_pair(ts, A)
        rep = duality_identity(chi1, chi2)
        assert rep.passed and rep.detail["checked"] == comb(ts.n + ts.d, ts.d)


def test_duality_identity_detects_a_wrong_dual():
    chi1, chi2 = dual_pair(fixture("prism"), [[1, 1, 1], [1, -1, 1]])
    assert not duality_identity(chi1, chi2.reoriented([1]))


def test_example_covectors():
    A = fixture("covector_example_signs")
    At = pointed_matrix(A)
    X = psi((0, -1, 1), [(2, 2), (2, 4), (2, 5), (3, 3), (3, 4), (3, 6)], At)
    assert X.signs == (0, -1, 1, 0, 1, -1)
    # the first row of T forces S'_1 = -1
    Y = psi((-1, -1, 1), [(1, 1), (2, 2), (2, 4), (2, 5), (3, 3), (3, 6)], At)
    assert Y.signs == (-1, -1, 1, 1, 1, -1)
    # Y is a tope refining X; both are covectors of the pointed chirotope
    assert all(x == 0 or x == y for x, y in zip(X.signs, Y.signs))
    ts = fixture("covector_example_trees")
    chi = chirotope(extract_matching_field(pointed_extension(ts)), At)
    assert is_covector(X, chi) and is_covector(Y, chi)
    assert Y.signs in topes(chi)


def test_psi_rejects_non_covector_graphs():
    ts = fixture("prism")
    with pytest.raises(ValueError, match="covector pd-graph"):
        psi((1, 1), [(1, 1)], [[1, 1, 1], [1, 1, 1]], trees=ts)


def test_topes_count_for_uniform_chirotopes():
    mf = diagonal_field(3, 6)
    rng = random.Random(11)
    for _ in range(5):
        chi = chirotope(mf, random_matrix(rng, 3, 6))
        assert len(topes(chi)) == uniform_tope_count(3, 6)
        assert len(cocircuits_of(chi)) == comb(6, 2)


def test_topes_of_a_realizable_configuration():
    cols = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1), (1, 2, 3)]
    from matchfield.core import SignMap

    chi = SignMap.from_function(3, 5, lambda s: det_sign([[cols[e - 1][i] for e in s] for i in range(3)]))
    T = topes(chi)
    # the tope oracle: sign vectors y . M over a grid of y in general position
    seen = set()
    for y in product(range(-7, 8), repeat=3):
        vals = [sum(a * b for a, b in zip(y, c)) for c in cols]
        if 0 not in vals:
            seen.add(tuple(1 if v > 0 else -1 for v in vals))
    assert seen <= T and len(T) == uniform_tope_count(3, 5)


def test_mandel_criterion():
    chi = chirotope(fixture("fig1"), EXAMPLE_SIGNS)
    for c in cocircuits_of(chi):
        assert is_covector(c, chi)
    assert is_covector(SignedVector((0, 0, 0, 0)), chi)
    assert not is_covector(SignedVector((1, 0, 0, 0)), chi)


def test_covector_sweep_on_the_pointed_prism():
    ts = fixture("prism")
    pairs = list(pointed_covector_pairs(ts))
    assert pairs
    for signs in product((1, -1), repeat=6):
        assert covector_sweep(ts, [signs[:3], signs[3:]])


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**12 - 1))
def test_covectors_on_pointed_staircase(bits):
    # pointed field of the (2,4) staircase with (I | A): a chirotope on 6 elements
    ts = staircase_triangulation(2, 4)
    A = [[1 if bits >> (4 * r + e) & 1 else -1 for e in range(4)] for r in range(2)]
    full = placing_completion(pointed_extension(ts))
    chi = chirotope(extract_matching_field(full), pointed_matrix(A))
    assert check_full_gp(chi)
