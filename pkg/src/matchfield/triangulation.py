"""Triangulations of a product of two simplices, encoded as sets of spanning trees
of the complete bipartite graph K_{R,E}, and the matching fields they carry.

A tree is a sorted tuple of edges ``(r, e)``.  The pointed extension appends a
copy of R to the ground set; by default the copies come first, so element
``i`` of the new ground set is the copy of row ``i`` and old element ``e``
becomes ``e + d``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Iterable, Iterator, Mapping, Sequence

from .core import GroundConfig, Matching, Report, mask_of, elements_of, sign_of_matching, subset_label

Edge = tuple[int, int]
Tree = tuple[Edge, ...]

__all__ = [
    "TreeSet",
    "MatchingField",
    "canonical_tree",
    "forest_perfect_matching",
    "is_spanning_tree",
    "tree_matchings",
    "validate_triangulation",
    "extract_matching_field",
    "restrict_to_inner",
    "saturating_matching_by_peeling",
    "pointed_extension",
    "placing_completion",
    "transpose_treeset",
    "is_linkage",
    "linkage_pd_graph",
    "staircase_triangulation",
]


def canonical_tree(edges: Iterable[Sequence[int]]) -> Tree:
    return tuple(sorted({(int(r), int(e)) for r, e in edges}))


@dataclass(frozen=True, eq=False)
class TreeSet:
    config: GroundConfig
    trees: tuple[Tree, ...]

    def __post_init__(self) -> None:
        trees = tuple(sorted(canonical_tree(t) for t in self.trees))
        for t in trees:
            for r, e in t:
                self.config.check_edge(r, e)
        object.__setattr__(self, "trees", trees)

    @classmethod
    def from_lists(cls, d: int, n: int, trees: Iterable[Iterable[Sequence[int]]]) -> "TreeSet":
        return cls(GroundConfig(d, n), tuple(canonical_tree(t) for t in trees))

    @classmethod
    def from_neighbourhoods(cls, d: int, n: int, trees: Iterable[Sequence[Iterable[int]]]) -> "TreeSet":
        """Each tree given as a list, entry ``r - 1`` holding the neighbours of row ``r``."""
        out = []
        for nbhds in trees:
            out.append(canonical_tree((r, e) for r, nb in enumerate(nbhds, start=1) for e in nb))
        return cls(GroundConfig(d, n), tuple(out))

    @property
    def d(self) -> int:
        return self.config.d

    @property
    def n(self) -> int:
        return self.config.n

    def __len__(self) -> int:
        return len(self.trees)

    def __iter__(self) -> Iterator[Tree]:
        return iter(self.trees)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, TreeSet) and self.config == other.config and set(self.trees) == set(other.trees)

    def __hash__(self) -> int:
        return hash((self.config, frozenset(self.trees)))

    def to_dict(self) -> dict:
        return {"d": self.d, "n": self.n, "trees": [[list(e) for e in t] for t in self.trees]}


class MatchingField:
    """One perfect matching for every d-subset of E, keyed by subset bitmask."""

    __slots__ = ("config", "_matchings")

    def __init__(self, config: GroundConfig, matchings: Mapping[int, Matching] | Iterable[Matching]):
        if isinstance(matchings, Mapping):
            items = list(matchings.values())
        else:
            items = list(matchings)
        table: dict[int, Matching] = {}
        for m in items:
            if m.d != config.d:
                raise ValueError(f"matching {m.edges} has the wrong size")
            for r, e in m.edges:
                config.check_edge(r, e)
            key = mask_of(m.support)
            if key in table and table[key] != m:
                raise ValueError(f"two matchings on {m.support}")
            table[key] = m
        if len(table) != comb(config.n, config.d):
            missing = [s for s in config.d_subsets() if mask_of(s) not in table]
            raise ValueError(f"matching field is missing subsets, e.g. {missing[:3]}")
        self.config = config
        self._matchings = table

    @classmethod
    def from_targets(cls, d: int, n: int, targets: Mapping[str | tuple, Sequence[int]]) -> "MatchingField":
        """``{"135": (1, 5, 3)}``: row i is matched to ``targets[i - 1]``."""
        return cls(GroundConfig(d, n), [Matching.from_targets(t) for t in targets.values()])

    @property
    def d(self) -> int:
        return self.config.d

    @property
    def n(self) -> int:
        return self.config.n

    def __getitem__(self, subset: Iterable[int] | int) -> Matching:
        key = subset if isinstance(subset, int) else mask_of(subset)
        return self._matchings[key]

    def __iter__(self) -> Iterator[Matching]:
        for s in self.config.d_subsets():
            yield self._matchings[mask_of(s)]

    def __len__(self) -> int:
        return len(self._matchings)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, MatchingField) and self.config == other.config and self._matchings == other._matchings

    def __hash__(self) -> int:
        return hash((self.config, frozenset(self._matchings.items())))

    @property
    def support(self) -> frozenset[Edge]:
        return frozenset(edge for m in self._matchings.values() for edge in m.edges)

    def sign(self, subset: Iterable[int]) -> int:
        return sign_of_matching(self[subset])

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "n": self.n,
            "matchings": {subset_label(m.support): list(m.targets) for m in self},
        }

    def __repr__(self) -> str:
        body = ", ".join(f"{subset_label(m.support)}:{''.join(map(str, m.targets))}" for m in self)
        return f"MatchingField(d={self.d}, n={self.n}, {body})"


# --- graph helpers --------------------------------------------------------------


def is_spanning_tree(edges: Iterable[Edge], rows: Iterable[int], cols: Iterable[int]) -> bool:
    """Spanning tree of the bipartite graph on the given rows and columns."""
    nodes = [("r", r) for r in rows] + [("e", e) for e in cols]
    edges = list(edges)
    if len(edges) != len(nodes) - 1:
        return False
    parent = {v: v for v in nodes}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for r, e in edges:
        a, b = ("r", r), ("e", e)
        if a not in parent or b not in parent:
            return False
        ra, rb = find(a), find(b)
        if ra == rb:
            return False
        parent[ra] = rb
    return True


def forest_perfect_matching(edges: Iterable[Edge], rows: Iterable[int], cols: Iterable[int]) -> Matching | tuple | None:
    """The unique perfect matching of a forest restricted to ``rows`` and
    ``cols``, found by repeatedly matching a leaf to its neighbour.

    Returns the matching as a sorted tuple of edges, or None.
    """
    rows = set(rows)
    cols = set(cols)
    if len(rows) != len(cols):
        return None
    adj: dict[tuple[str, int], set[tuple[str, int]]] = {("r", r): set() for r in rows}
    adj.update({("e", e): set() for e in cols})
    for r, e in edges:
        if r in rows and e in cols:
            adj[("r", r)].add(("e", e))
            adj[("e", e)].add(("r", r))
    matched = []
    while adj:
        leaf = None
        for v, nb in adj.items():
            if len(nb) <= 1:
                leaf = v
                break
        if leaf is None:
            # a non-empty forest always has a node of degree at most one
            raise ValueError("graph is not a forest")
        if not adj[leaf]:
            return None
        (mate,) = adj[leaf]
        for v in (leaf, mate):
            for w in adj.pop(v):
                if w in adj:
                    adj[w].discard(v)
        pair = (leaf, mate) if leaf[0] == "r" else (mate, leaf)
        matched.append((pair[0][1], pair[1][1]))
    return tuple(sorted(matched))


def tree_matchings(tree: Iterable[Edge], d: int) -> dict[int, Matching]:
    """All R-saturating matchings of a tree, keyed by the bitmask of their support."""
    tree = list(tree)
    cols = sorted({e for _, e in tree})
    out: dict[int, Matching] = {}
    for sigma in combinations(cols, d):
        m = forest_perfect_matching(tree, range(1, d + 1), sigma)
        if m is not None:
            out[mask_of(sigma)] = Matching(m)
    return out


def _all_partial_matchings(tree: Tree, d: int) -> dict[tuple[int, int], tuple[Edge, ...]]:
    """Perfect matchings on every I ⊔ J (|I| = |J| >= 1) inside a tree."""
    cols = sorted({e for _, e in tree})
    out = {}
    for k in range(1, d + 1):
        for I in combinations(range(1, d + 1), k):
            for J in combinations(cols, k):
                m = forest_perfect_matching(tree, I, J)
                if m is not None:
                    out[(mask_of(I), mask_of(J))] = m
    return out


# --- validation and extraction -----------------------------------------------------


def validate_triangulation(ts: TreeSet) -> Report:
    """Check the three tree conditions characterising triangulations, then the
    number of maximal cells.  The first failed condition is reported."""
    d, n = ts.d, ts.n
    for t in ts.trees:
        for r, e in t:
            ts.config.check_edge(r, e)
    name = "triangulation"
    if not ts.trees:
        return Report(name, False, witness={"condition": 1, "reason": "no trees"})
    if len(set(ts.trees)) != len(ts.trees):
        dup = next(t for t in ts.trees if ts.trees.count(t) > 1)
        return Report(name, False, witness={"condition": 1, "reason": "repeated tree", "tree": dup})

    rows, cols = range(1, d + 1), range(1, n + 1)
    for t in ts.trees:
        if not is_spanning_tree(t, rows, cols):
            return Report(name, False, witness={"condition": 1, "tree": t})

    by_minus_edge: dict[Tree, int] = {}
    for t in ts.trees:
        for i in range(len(t)):
            rest = t[:i] + t[i + 1 :]
            by_minus_edge[rest] = by_minus_edge.get(rest, 0) + 1
    for t in ts.trees:
        for i, edge in enumerate(t):
            rest = t[:i] + t[i + 1 :]
            r, e = edge
            r_isolated = not any(rr == r for rr, _ in rest)
            e_isolated = not any(ee == e for _, ee in rest)
            if r_isolated or e_isolated:
                continue
            if by_minus_edge[rest] < 2:
                return Report(name, False, witness={"condition": 2, "tree": t, "edge": edge})

    seen: dict[tuple[int, int], tuple[tuple[Edge, ...], Tree]] = {}
    for t in ts.trees:
        for key, m in _all_partial_matchings(t, d).items():
            prev = seen.get(key)
            if prev is None:
                seen[key] = (m, t)
            elif prev[0] != m:
                return Report(
                    name,
                    False,
                    witness={
                        "condition": 3,
                        "I": list(elements_of(key[0])),
                        "J": list(elements_of(key[1])),
                        "trees": [prev[1], t],
                        "matchings": [prev[0], m],
                    },
                )

    expected = comb(d + n - 2, d - 1)
    if len(ts.trees) != expected:
        return Report(
            name, False, witness={"condition": "count", "trees": len(ts.trees), "expected": expected}
        )
    return Report(name, True, detail={"trees": len(ts.trees)})


def extract_matching_field(ts: TreeSet) -> MatchingField:
    d = ts.d
    found: dict[int, Matching] = {}
    for t in ts.trees:
        for key, m in tree_matchings(t, d).items():
            prev = found.get(key)
            if prev is not None and prev != m:
                raise ValueError(f"not a triangulation: two matchings on {elements_of(key)}")
            found[key] = m
    for s in ts.config.d_subsets():
        if mask_of(s) not in found:
            raise ValueError(f"not a triangulation: no matching on {s}")
    return MatchingField(ts.config, found)


def _row_degrees(tree: Tree, d: int) -> list[int]:
    deg = [0] * d
    for r, _ in tree:
        deg[r - 1] += 1
    return deg


def restrict_to_inner(ts: TreeSet) -> TreeSet:
    """Trees in which every row node has degree at least two."""
    keep = tuple(t for t in ts.trees if min(_row_degrees(t, ts.d)) >= 2)
    return TreeSet(ts.config, keep)


def saturating_matching_by_peeling(tree: Tree, d: int) -> Matching:
    """An R-saturating matching built by peeling leaves in E, as long as every
    remaining row keeps degree at least two."""
    edges = set(tree)
    rows = set(range(1, d + 1))
    matched = []
    while rows:
        col_deg: dict[int, list[int]] = {}
        for r, e in edges:
            col_deg.setdefault(e, []).append(r)
        leaf = next((e for e in sorted(col_deg) if len(col_deg[e]) == 1), None)
        if leaf is None:
            raise ValueError("no leaf in E to peel")
        (r,) = col_deg[leaf]
        matched.append((r, leaf))
        rows.discard(r)
        edges = {(rr, ee) for rr, ee in edges if rr != r and ee != leaf}
    return Matching(tuple(matched))


# --- pointed extension ---------------------------------------------------------------


def pointed_extension(ts: TreeSet, copies_first: bool = True) -> TreeSet:
    """Attach each row r to a new element, its copy; the ground set grows to n + d.

    With ``copies_first`` the copies are 1..d and E is shifted up by d,
    otherwise E keeps its labels and the copies are n+1..n+d.
    """
    d, n = ts.d, ts.n
    if copies_first:
        shift, copy = d, (lambda r: r)
    else:
        shift, copy = 0, (lambda r: n + r)
    trees = []
    for t in ts.trees:
        trees.append(canonical_tree([(r, e + shift) for r, e in t] + [(r, copy(r)) for r in range(1, d + 1)]))
    return TreeSet(GroundConfig(d, n + d), tuple(trees))


def transpose_treeset(ts: TreeSet) -> TreeSet:
    """Swap the roles of R and E; a triangulation of the same product."""
    trees = tuple(canonical_tree((e, r) for r, e in t) for t in ts.trees)
    return TreeSet(_loose_config(ts.n, ts.d), trees)


def _loose_config(d: int, n: int) -> GroundConfig:
    # TreeSets may have more rows than columns after transposing; the config
    # only bounds edge endpoints, so build it without the d <= n check.
    cfg = object.__new__(GroundConfig)
    object.__setattr__(cfg, "d", d)
    object.__setattr__(cfg, "n", n)
    return cfg


# --- placing completion -----------------------------------------------------------


def _bareiss_det(rows: list[list[int]]) -> int:
    m = [list(r) for r in rows]
    size = len(m)
    sign = 1
    prev = 1
    for k in range(size - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, size) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[-1][-1]


def _point(edge: Edge, d: int, n: int) -> list[int]:
    r, e = edge
    row = [1 if r == i else 0 for i in range(1, d)]
    col = [1 if e == j else 0 for j in range(1, n)]
    return row + col + [1]


def _orientation(points: Sequence[Edge], d: int, n: int) -> int:
    det = _bareiss_det([_point(p, d, n) for p in points])
    return (det > 0) - (det < 0)


def placing_completion(ts: TreeSet, order: Sequence[Edge] | None = None) -> TreeSet:
    """Extend a triangulation of a subconfiguration of the product to a full
    triangulation by placing the missing vertices one at a time.

    A new vertex p is coned over every boundary facet F of the current complex
    for which p and the vertex of the unique cell opposite to F lie strictly on
    opposite sides of F.
    """
    d, n = ts.d, ts.n
    cells = [frozenset(t) for t in ts.trees]
    used = set().union(*cells) if cells else set()
    if order is None:
        order = [(r, e) for r in range(1, d + 1) for e in range(1, n + 1) if (r, e) not in used]
    for p in order:
        if p in used:
            continue
        facet_owner: dict[frozenset, list[tuple[frozenset, Edge]]] = {}
        for c in cells:
            for v in c:
                facet_owner.setdefault(c - {v}, []).append((c, v))
        new_cells = []
        for facet, owners in facet_owner.items():
            if len(owners) != 1:
                continue
            _, q = owners[0]
            base = sorted(facet)
            sp = _orientation(base + [p], d, n)
            sq = _orientation(base + [q], d, n)
            if sp != 0 and sq != 0 and sp != sq:
                new_cells.append(facet | {p})
        if not new_cells:
            raise ValueError(f"vertex {p} sees no boundary facet")
        cells.extend(new_cells)
        used.add(p)
    return TreeSet(ts.config, tuple(tuple(sorted(c)) for c in cells))


# --- linkage -------------------------------------------------------------------------


def linkage_pd_graph(mf: MatchingField, tau: Sequence[int]) -> Tree:
    """Union of the matchings on the d-subsets of a (d+1)-subset tau."""
    tau = tuple(sorted(tau))
    if len(tau) != mf.d + 1:
        raise ValueError("tau must have d + 1 elements")
    edges = set()
    for sigma in combinations(tau, mf.d):
        edges.update(mf[sigma].edges)
    tree = tuple(sorted(edges))
    if not is_spanning_tree(tree, range(1, mf.d + 1), tau):
        raise ValueError(f"not linkage at {subset_label(tau)}")
    return tree


def is_linkage(mf: MatchingField) -> Report:
    for tau in combinations(range(1, mf.n + 1), mf.d + 1):
        try:
            tree = linkage_pd_graph(mf, tau)
        except ValueError:
            return Report("linkage", False, witness={"tau": list(tau)})
        if any(deg != 2 for deg in _row_degrees(tree, mf.d)):
            return Report("linkage", False, witness={"tau": list(tau), "tree": tree})
    return Report("linkage", True)


# --- a standard example ----------------------------------------------------------------


def staircase_triangulation(d: int, n: int) -> TreeSet:
    """The staircase triangulation: trees are monotone lattice paths from
    (1, 1) to (d, n); its matching field is the diagonal one."""
    trees = []

    def walk(r: int, e: int, path: list[Edge]) -> None:
        if (r, e) == (d, n):
            trees.append(tuple(path))
            return
        if r < d:
            walk(r + 1, e, path + [(r + 1, e)])
        if e < n:
            walk(r, e + 1, path + [(r, e + 1)])

    walk(1, 1, [(1, 1)])
    return TreeSet(GroundConfig(d, n), tuple(trees))
