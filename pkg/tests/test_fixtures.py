"""Every bundled fixture reproduces the values in its ``expected`` block."""

from __future__ import annotations

import pytest

from matchfield.cli import fixture_names
from matchfield.coherent import omm, tropically_nonsingular_minors
from matchfield.core import check_3term_gp, is_matroid, subset_label
from matchfield.hyperfields import builtin, weak_matroid_check
from matchfield.oriented import (
    chirotope,
    cocircuits,
    cocircuits_of,
    pointed_matrix,
    psi,
    signed_circuits,
    topes,
)
from matchfield.subdivision import build_subdivision
from matchfield.triangulation import extract_matching_field, is_linkage, pointed_extension, validate_triangulation

from conftest import fixture, fixture_doc


def sign_chars(v):
    return ["+" if x > 0 else "-" if x < 0 else "0" for x in v.signs]


def check(name, key, value):
    obj = fixture(name)
    if key == "validate":
        return bool(validate_triangulation(obj)) == value
    if key == "linkage":
        return bool(is_linkage(obj)) == value
    if key == "omm_count":
        return len(omm(obj)) == value
    if key == "omm_equal_to":
        return omm(obj).maps == omm(fixture(value)).maps
    if key == "gp_witness_all_plus":
        rep = check_3term_gp(chirotope(obj, [[1] * obj.n] * obj.d))
        w = rep.witness
        return not rep.passed and {**w, "X": list(w["X"]), "products": list(w["products"])} == value
    if key == "inner_cells":
        cells = sorted(sorted(subset_label(b) for b in c.matroid.bases) for c in build_subdivision(obj).cells)
        return cells == value
    if key == "chirotope_on_fig1":
        return chirotope(fixture("fig1"), obj).to_labels() == value
    if key == "circuit_123":
        pos, _ = signed_circuits(fixture("fig1"), obj, (1, 2, 3))
        return sign_chars(pos) == value
    if key == "cocircuit_124":
        pos, _ = cocircuits(fixture("fig4_prism4"), obj, (1, 2, 4))
        return sign_chars(pos) == value
    if key in ("tropical_phase", "phase"):
        return bool(weak_matroid_check(obj, builtin(key))) == value
    if key in ("trees", "cocircuits", "topes"):
        chi = chirotope(extract_matching_field(pointed_extension(obj)), pointed_matrix(fixture("ringel_signs")))
        got = {"trees": len(obj.trees), "cocircuits": 2 * len(cocircuits_of(chi)), "topes": len(topes(chi))}[key]
        return got == value
    if key == "subsets":
        return sorted(subset_label(s) for s in tropically_nonsingular_minors(obj[1])) == value
    if key == "matroid":
        return is_matroid(tropically_nonsingular_minors(obj[1])) == value
    if key in ("S", "F", "S_T", "T"):
        return True  # inputs of the X and Y entries
    if key in ("X", "Y"):
        e = fixture_doc(name)["expected"]
        S, graph = (e["S"], e["F"]) if key == "X" else (e["S_T"], e["T"])
        S = [{"+": 1, "-": -1, "0": 0}[c] for c in S]
        return sign_chars(psi(S, [tuple(x) for x in graph], pointed_matrix(obj))) == value
    raise KeyError(f"no check for expected key {key!r}")


CASES = [
    (name, key, value)
    for name in fixture_names()
    for key, value in (fixture_doc(name).get("expected") or {}).items()
]


@pytest.mark.parametrize("name,key,value", CASES, ids=[f"{n}-{k}" for n, k, _ in CASES])
def test_fixture_expectation(name, key, value):
    assert check(name, key, value)
