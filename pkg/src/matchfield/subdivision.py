"""Transversal matroids of trees, the matroid subdivision a triangulation induces,
and the octahedron-face test for compatibility of a chirotope with a subdivision."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from .core import GroundConfig, Matroid, Report, SignMap, check_full_gp, is_chirotope, is_matroid, mask_of
from .triangulation import Tree, TreeSet, pointed_extension, restrict_to_inner, tree_matchings

__all__ = [
    "MatroidCell",
    "Subdivision",
    "Face",
    "transversal_matroid",
    "build_subdivision",
    "octahedron_faces",
    "face_bases",
    "face_decomposition",
    "forbidden_split",
    "forbidden_check",
    "local_to_global_verify",
]

Face = tuple[int, int, int, int, tuple[int, ...]]


@dataclass(frozen=True)
class MatroidCell:
    matroid: Matroid
    source_tree: Tree


@dataclass(frozen=True)
class Subdivision:
    ambient: Matroid
    cells: tuple[MatroidCell, ...]

    def covers_ambient(self) -> bool:
        covered = set().union(*(c.matroid.bases for c in self.cells))
        return covered >= set(self.ambient.bases)


def transversal_matroid(tree: Iterable[Sequence[int]], config: GroundConfig) -> Matroid:
    """Bases are the d-subsets matched to all of R inside the graph."""
    tree = tuple(sorted((r, e) for r, e in tree))
    bases = [m.support for m in tree_matchings(tree, config.d).values()]
    if not bases:
        raise ValueError("rank deficient")
    return Matroid(config.d, tuple(range(1, config.n + 1)), frozenset(bases))


def build_subdivision(ts: TreeSet, pointed: bool = False) -> Subdivision:
    """Cells from the inner trees (subdividing U_{d,n}), or, with ``pointed``,
    from all trees after attaching the copies of R (subdividing U_{d,n+d})."""
    if pointed:
        src = pointed_extension(ts)
    else:
        src = restrict_to_inner(ts)
    cfg = src.config
    cells = []
    local: dict[int, tuple] = {}
    for t in src.trees:
        matchings = tree_matchings(t, cfg.d)
        if not matchings:
            raise ValueError("rank deficient")
        for key, m in matchings.items():
            prev = local.setdefault(key, m)
            if prev != m:
                raise AssertionError(f"cells disagree on the matching for {m.support}")
        bases = frozenset(m.support for m in matchings.values())
        cells.append(MatroidCell(Matroid(cfg.d, tuple(range(1, cfg.n + 1)), bases), t))
    return Subdivision(Matroid.uniform(cfg.d, cfg.n), tuple(cells))


def face_bases(face: Face) -> tuple[tuple[int, ...], ...]:
    """The six bases of an octahedron face, as antipodal pairs in the order
    (x1x2, y1y2), (x1y1, x2y2), (x1y2, x2y1)."""
    x1, x2, y1, y2, X = face
    pairs = [((x1, x2), (y1, y2)), ((x1, y1), (x2, y2)), ((x1, y2), (x2, y1))]
    out = []
    for a, b in pairs:
        out.append(tuple(sorted(a + X)))
        out.append(tuple(sorted(b + X)))
    return tuple(out)


def octahedron_faces(m: Matroid) -> list[Face]:
    """Faces of the matroid polytope that are octahedra: a (d-2)-set X and a
    4-set disjoint from it such that all six completions of X are bases."""
    ground = m.ground
    bases = {mask_of(b) for b in m.bases}
    faces = []
    for quad in combinations(ground, 4):
        rest = [e for e in ground if e not in quad]
        for X in combinations(rest, m.rank - 2):
            xm = mask_of(X)
            if all((xm | mask_of(pair)) in bases for pair in combinations(quad, 2)):
                faces.append((*quad, X))
    faces.sort(key=lambda f: (f[4], f[:4]))
    return faces


def _products(chi: SignMap, face: Face) -> tuple[int, int, int]:
    x1, x2, y1, y2, X = face
    return (
        chi(x1, x2, *X) * chi(y1, y2, *X),
        chi(x1, y1, *X) * chi(y2, x2, *X),
        chi(x1, y2, *X) * chi(x2, y1, *X),
    )


def forbidden_split(chi: SignMap, face: Face) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Apex pair of the two-pyramid split of the face that the chirotope forbids.

    Exactly two of the three GP products agree; the remaining antipodal pair is
    the apex pair.  Removing one apex leaves a pyramid on which the other two
    products violate the 3-term relation.
    """
    prods = _products(chi, face)
    if 0 in prods:
        raise ValueError(f"chirotope vanishes on the face {face}")
    odd = [i for i in range(3) if prods.count(prods[i]) == 1]
    if len(odd) != 1:
        raise AssertionError(f"GP products {prods} on {face} do not have exactly two equal signs")
    fb = face_bases(face)
    return fb[2 * odd[0]], fb[2 * odd[0] + 1]


def face_decomposition(sub: Subdivision, face: Face) -> tuple[str, tuple | None]:
    """How the subdivision cuts an octahedron face of the ambient matroid.

    Returns ``("trivial", None)``, ``("two-pyramid", apex_pair)`` or
    ``("other", None)``; the last would mean four tetrahedra, which is not a
    matroid subdivision.
    """
    fb = set(face_bases(face))
    pieces = {frozenset(fb & set(c.matroid.bases)) for c in sub.cells}
    if any(len(p) == 6 for p in pieces):
        return "trivial", None
    # each pyramid omits one vertex; the two omitted vertices are the apexes
    omitted = {next(iter(fb - p)) for p in pieces if len(p) == 5}
    antipodes = {a: b for a, b in zip(face_bases(face)[::2], face_bases(face)[1::2])}
    antipodes.update({b: a for a, b in antipodes.items()})
    if len(omitted) == 2:
        a, b = sorted(omitted)
        if antipodes[a] == b:
            return "two-pyramid", (a, b)
    return "other", None


def forbidden_check(chi: SignMap, sub: Subdivision) -> Report:
    if not is_chirotope(chi):
        raise ValueError("not a chirotope")
    for face in octahedron_faces(sub.ambient):
        apex_pair = set(forbidden_split(chi, face))
        fb = set(face_bases(face))
        bad = []
        for cell in sub.cells:
            piece = fb & set(cell.matroid.bases)
            if len(piece) == 5 and (fb - piece) <= apex_pair:
                bad.append(sorted(cell.matroid.bases))
        if bad:
            return Report(
                "forbidden split",
                False,
                witness={
                    "face": {"quadruple": list(face[:4]), "X": list(face[4])},
                    "apexes": sorted(apex_pair),
                    "cells": bad,
                },
            )
    return Report("forbidden split", True)


def local_to_global_verify(cells: Sequence[SignMap]) -> Report:
    """Check each restriction with is_chirotope and the glued map with the
    full GP relations; both results are reported."""
    if not cells:
        raise ValueError("no cells")
    d, n = cells[0].d, cells[0].n
    glued: dict[int, int] = {}
    for cell in cells:
        if (cell.d, cell.n) != (d, n):
            raise ValueError("cells live on different ground sets")
        for m, v in cell.masks().items():
            if not v:
                continue
            prev = glued.setdefault(m, v)
            if prev != v:
                raise ValueError("inconsistent gluing")
    per_cell = [is_chirotope(c) for c in cells]
    full = {m: glued.get(m, 0) for m in cells[0].masks()}
    glued_map = SignMap(d, n, full)
    support_ok = is_matroid(glued_map.support()) if glued else False
    glued_report = check_full_gp(glued_map) if support_ok else Report("full GP", False, witness="support")
    return Report(
        "local to global",
        all(per_cell) and glued_report.passed,
        witness=None if glued_report.passed else glued_report.witness,
        detail={"cells": per_cell, "glued": glued_report.passed},
    )
