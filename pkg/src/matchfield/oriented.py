"""Oriented matroids from matching fields and sign matrices.

The chirotope of a matching field M and a sign matrix A is
``chi(sigma) = sign(M_sigma) * prod(A_e for e in M_sigma)``.  Circuits,
cocircuits and covectors are read off from pd-graphs (subgraphs of the trees of
the triangulation); the chirotope-derived versions serve as cross-checks.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations, product
from typing import Iterable, Sequence

from .core import (
    Report,
    SignMap,
    SignedVector,
    det_sign,
    mask_of,
    orthogonal,
    parse_sign,
    perm_sign,
    sign_of_matching,
)
from .triangulation import (
    MatchingField,
    Tree,
    TreeSet,
    extract_matching_field,
    linkage_pd_graph,
    pointed_extension,
    tree_matchings,
    transpose_treeset,
)

__all__ = [
    "SignMatrix",
    "sign_matrix",
    "pointed_matrix",
    "duality_matrix",
    "chirotope",
    "tree_chirotope",
    "dual_pair",
    "duality_identity",
    "signed_circuits",
    "chow_tree",
    "chow_pd_graph",
    "cocircuits",
    "psi",
    "circuits_of",
    "cocircuits_of",
    "topes",
    "is_covector",
    "orthogonality_witness",
    "pointed_covector_pairs",
    "covector_sweep",
    "DESK_SCALE_N",
]

SignMatrix = tuple[tuple[int, ...], ...]

DESK_SCALE_N = 9


def sign_matrix(rows: Iterable[Iterable]) -> SignMatrix:
    """Parse rows of signs; accepts strings like ``"+-+-"`` or lists of tokens."""
    out = []
    for row in rows:
        if isinstance(row, str) and " " not in row and "," not in row:
            tokens = list(row)
        elif isinstance(row, str):
            tokens = row.replace(",", " ").split()
        else:
            tokens = list(row)
        out.append(tuple(parse_sign(t) if not isinstance(t, int) else _clip(t) for t in tokens))
    if len({len(r) for r in out}) > 1:
        raise ValueError("ragged sign matrix")
    return tuple(out)


def _clip(x: int) -> int:
    return (x > 0) - (x < 0)


def pointed_matrix(A: SignMatrix) -> SignMatrix:
    """(I | A): the identity block sits on the copies of the rows."""
    d = len(A)
    return tuple(tuple(1 if i == j else 0 for j in range(d)) + tuple(A[i]) for i in range(d))


def duality_matrix(A: SignMatrix) -> SignMatrix:
    """(-A^T | I) on the swapped factor."""
    d, n = len(A), len(A[0])
    return tuple(tuple(-A[i][j] for i in range(d)) + tuple(1 if j == k else 0 for k in range(n)) for j in range(n))


def _entry(A: SignMatrix, r: int, e: int) -> int:
    return A[r - 1][e - 1]


# --- the main construction ------------------------------------------------------


@lru_cache(maxsize=256)
def _chirotope_cached(mf: MatchingField, A: SignMatrix) -> SignMap:
    values = {}
    for m in mf:
        prod_ = 1
        for r, e in m.edges:
            a = _entry(A, r, e)
            if a == 0:
                raise ValueError(f"support violation at edge ({r}, {e})")
            prod_ *= a
        values[mask_of(m.support)] = sign_of_matching(m) * prod_
    return SignMap(mf.d, mf.n, values)


def chirotope(mf: MatchingField, A: Sequence[Sequence[int]]) -> SignMap:
    A = sign_matrix(A)
    if len(A) != mf.d or len(A[0]) != mf.n:
        raise ValueError(f"sign matrix must be {mf.d} x {mf.n}")
    return _chirotope_cached(mf, A)


def tree_chirotope(
    tree: Iterable[Sequence[int]],
    A: Sequence[Sequence[int]],
    realization_magnitudes: Sequence[Sequence[int]] | None = None,
) -> SignMap:
    """The chirotope restricted to the transversal matroid of one tree.

    Values come from the matchings of the tree; they are checked against the
    determinant signs of a real matrix with the signs of A on the tree edges
    (magnitudes default to 1) and zeros elsewhere.
    """
    A = sign_matrix(A)
    d, n = len(A), len(A[0])
    tree = tuple(sorted((int(r), int(e)) for r, e in tree))
    matchings = tree_matchings(tree, d)
    values = {}
    for s in combinations(range(1, n + 1), d):
        m = matchings.get(mask_of(s))
        if m is None:
            values[mask_of(s)] = 0
            continue
        v = sign_of_matching(m)
        for r, e in m.edges:
            if _entry(A, r, e) == 0:
                raise ValueError(f"support violation at edge ({r}, {e})")
            v *= _entry(A, r, e)
        values[mask_of(s)] = v
    chi = SignMap(d, n, values)

    edges = set(tree)
    mags = realization_magnitudes
    real = [
        [
            (_entry(A, r, e) * (mags[r - 1][e - 1] if mags else 1)) if (r, e) in edges else 0
            for e in range(1, n + 1)
        ]
        for r in range(1, d + 1)
    ]
    for s, v in chi.items():
        if det_sign([[row[e - 1] for e in s] for row in real]) != v:
            raise AssertionError(f"determinant sign disagrees with the matching on {s}")
    return chi


# --- duality ----------------------------------------------------------------------


def dual_pair(ts: TreeSet, A: Sequence[Sequence[int]]) -> tuple[SignMap, SignMap]:
    """Chirotopes of rank d and n on a common ground set of size d + n.

    The ground set lists the copies of R first, then E.  The first map comes
    from the pointed field with matrix (I | A); the second from the pointed
    field of the transposed triangulation with matrix (-A^T | I).
    """
    A = sign_matrix(A)
    if any(a == 0 for row in A for a in row):
        raise ValueError("sign matrix has zero entries")
    mf1 = extract_matching_field(pointed_extension(ts))
    mf2 = extract_matching_field(pointed_extension(transpose_treeset(ts), copies_first=False))
    return chirotope(mf1, pointed_matrix(A)), chirotope(mf2, duality_matrix(A))


def duality_identity(chi1: SignMap, chi2: SignMap) -> Report:
    """chi1(P1) * chi2(P2) == sign(P1, P2) for every split of the ground set;
    by alternation this covers every ordering."""
    total = chi1.n
    if chi2.n != total or chi1.d + chi2.d != total:
        raise ValueError("ranks do not complement each other")
    ground = range(1, total + 1)
    count = 0
    for P1 in combinations(ground, chi1.d):
        P2 = tuple(e for e in ground if e not in P1)
        count += 1
        if chi1(P1) * chi2(P2) != perm_sign(P1 + P2):
            return Report("duality", False, witness={"P1": list(P1), "P2": list(P2)}, detail={"checked": count})
    return Report("duality", True, detail={"checked": count})


# --- circuits ------------------------------------------------------------------------


def signed_circuits(mf: MatchingField, A: Sequence[Sequence[int]], tau: Sequence[int]) -> tuple[SignedVector, SignedVector]:
    """The two signed circuits supported on tau, from the linkage tree.

    Two elements joined through a row r get equal signs iff
    ``-A[r][u] * A[r][v]`` is positive.  The smallest element of tau is +.
    """
    A = sign_matrix(A)
    tau = tuple(sorted(tau))
    tree = linkage_pd_graph(mf, tau)
    by_row: dict[int, list[int]] = {}
    for r, e in tree:
        by_row.setdefault(r, []).append(e)
    adj: dict[int, list[tuple[int, int]]] = {e: [] for e in tau}
    for r, (u, v) in ((r, es) for r, es in by_row.items()):
        label = -_entry(A, r, u) * _entry(A, r, v)
        if label == 0:
            raise ValueError(f"support violation in row {r}")
        adj[u].append((v, label))
        adj[v].append((u, label))
    signs = {tau[0]: 1}
    stack = [tau[0]]
    while stack:
        u = stack.pop()
        for v, label in adj[u]:
            if v not in signs:
                signs[v] = signs[u] * label
                stack.append(v)
    vec = SignedVector(tuple(signs.get(e, 0) for e in range(1, mf.n + 1)))
    return vec, -vec


# --- Chow trees and cocircuits ---------------------------------------------------------


def _degrees(tree: Tree) -> tuple[dict[int, int], dict[int, int]]:
    rdeg: dict[int, int] = {}
    edeg: dict[int, int] = {}
    for r, e in tree:
        rdeg[r] = rdeg.get(r, 0) + 1
        edeg[e] = edeg.get(e, 0) + 1
    return rdeg, edeg


def chow_tree(ts: TreeSet, rho: Sequence[int]) -> Tree:
    """The tree of the triangulation whose nodes in rho are leaves and whose
    other E-nodes have degree two."""
    rho = set(rho)
    if len(rho) != ts.n - ts.d + 1:
        raise ValueError("rho must have n - d + 1 elements")
    found = []
    for t in ts.trees:
        _, edeg = _degrees(t)
        if all(edeg.get(e, 0) == (1 if e in rho else 2) for e in range(1, ts.n + 1)):
            found.append(t)
    if len(found) != 1:
        raise ValueError(f"triangulation corrupt: {len(found)} candidate trees for rho={sorted(rho)}")
    return found[0]


def chow_pd_graph(ts: TreeSet, rho: Sequence[int]) -> frozenset[tuple[int, int]]:
    tree = chow_tree(ts, rho)
    rho = set(rho)
    return frozenset((r, e) for r, e in tree if e in rho)


def cocircuits(ts: TreeSet, A: Sequence[Sequence[int]], rho: Sequence[int]) -> tuple[SignedVector, SignedVector]:
    """The two signed cocircuits supported on rho.

    A flip negates rows of A.  The two flips that give every node outside rho
    one positive and one negative edge of the Chow tree are found by
    propagation from row 1 (not flipped); the edge signs at rho are read off.
    """
    A = sign_matrix(A)
    tree = chow_tree(ts, rho)
    rho = set(rho)
    rows_of: dict[int, list[int]] = {}
    for r, e in tree:
        rows_of.setdefault(e, []).append(r)
    adj: dict[int, list[tuple[int, int]]] = {r: [] for r in range(1, ts.d + 1)}
    for e, rs in rows_of.items():
        if e in rho:
            continue
        r1, r2 = rs
        # S[r1] * A[r1][e] == -S[r2] * A[r2][e]
        rel = -_entry(A, r1, e) * _entry(A, r2, e)
        adj[r1].append((r2, rel))
        adj[r2].append((r1, rel))
    flip = {1: 1}
    stack = [1]
    while stack:
        r = stack.pop()
        for s, rel in adj[r]:
            if s not in flip:
                flip[s] = flip[r] * rel
                stack.append(s)
            elif flip[s] != flip[r] * rel:
                raise AssertionError("inconsistent flips")
    if len(flip) != ts.d:
        raise AssertionError("auxiliary tree on R is disconnected")
    signs = [0] * ts.n
    for r, e in tree:
        if e in rho:
            signs[e - 1] = flip[r] * _entry(A, r, e)
    vec = SignedVector(tuple(signs))
    if vec.support and min(vec.support) in vec.negative:
        vec = -vec
    return vec, -vec


def orthogonality_witness(ts: TreeSet, tau: Sequence[int], rho: Sequence[int], mf: MatchingField | None = None) -> int:
    """Number of edges of the Chow tree at rho lying in the linkage pd-graph at tau."""
    mf = mf or extract_matching_field(ts)
    linkage = set(linkage_pd_graph(mf, tau))
    count = len(linkage & chow_pd_graph(ts, rho))
    if count < 2:
        raise AssertionError(f"only {count} common edges for tau={list(tau)}, rho={list(rho)}")
    return count


# --- covectors ----------------------------------------------------------------------


def psi(
    S: Sequence[int] | SignedVector,
    F: Iterable[Sequence[int]],
    A: Sequence[Sequence[int]],
    trees: TreeSet | None = None,
) -> SignedVector:
    """Column-wise sign of the matrix with entries S_i * A_ij on F and 0 off F:
    a column with both signs, or no nonzero entry, gives 0."""
    A = sign_matrix(A)
    S = S.signs if isinstance(S, SignedVector) else tuple(parse_sign(s) for s in S)
    F = {(int(r), int(e)) for r, e in F}
    if trees is not None:
        if not any(F <= set(t) for t in trees.trees):
            raise ValueError("not a covector pd-graph")
        covered = {e for _, e in F}
        if any(e not in covered for e in range(1, trees.n + 1)):
            raise ValueError("not a covector pd-graph: isolated node in E")
    n = len(A[0])
    out = []
    for e in range(1, n + 1):
        col = {S[r - 1] * _entry(A, r, e) for r in range(1, len(A) + 1) if (r, e) in F}
        col.discard(0)
        out.append(col.pop() if len(col) == 1 else 0)
    return SignedVector(tuple(out))


def circuits_of(chi: SignMap) -> list[SignedVector]:
    """Signed circuits (one of each opposite pair) of the oriented matroid:
    loops, and for each (d+1)-set the vector C(e_k) = (-1)^k chi(tau - e_k)."""
    found: dict[tuple, SignedVector] = {}
    n, d = chi.n, chi.d
    in_basis = set()
    for s, v in chi.items():
        if v:
            in_basis.update(s)
    for e in range(1, n + 1):
        if e not in in_basis:
            vec = SignedVector(tuple(1 if x == e else 0 for x in range(1, n + 1)))
            found[vec.signs] = vec
    for tau in combinations(range(1, n + 1), d + 1):
        signs = [0] * n
        for k, e in enumerate(tau, start=1):
            rest = tau[: k - 1] + tau[k:]
            signs[e - 1] = (-1) ** k * chi(rest)
        vec = SignedVector(tuple(signs))
        if vec.is_zero():
            continue
        if min(vec.support) in vec.negative:
            vec = -vec
        found[vec.signs] = vec
    return sorted(found.values(), key=lambda v: v.signs)


def cocircuits_of(chi: SignMap) -> list[SignedVector]:
    """Signed cocircuits (one of each pair): D(e) = chi(y_1, ..., y_{d-1}, e)."""
    found: dict[tuple, SignedVector] = {}
    n, d = chi.n, chi.d
    for Y in combinations(range(1, n + 1), d - 1):
        vec = SignedVector(tuple(chi(*Y, e) for e in range(1, n + 1)))
        if vec.is_zero():
            continue
        if min(vec.support) in vec.negative:
            vec = -vec
        found[vec.signs] = vec
    return sorted(found.values(), key=lambda v: v.signs)


def topes(chi: SignMap) -> frozenset[tuple[int, ...]]:
    """Full sign vectors orthogonal to every signed circuit."""
    if chi.n > DESK_SCALE_N:
        raise ValueError(f"desk-scale limit: n = {chi.n} > {DESK_SCALE_N}")
    return _topes_cached(chi)


@lru_cache(maxsize=64)
def _topes_cached(chi: SignMap) -> frozenset[tuple[int, ...]]:
    circuits = circuits_of(chi)
    out = set()
    for signs in product((1, -1), repeat=chi.n):
        cand = SignedVector(signs)
        if all(orthogonal(cand, c) for c in circuits):
            out.add(signs)
    return frozenset(out)


def is_covector(X: SignedVector | Sequence[int], chi: SignMap) -> bool:
    """Mandel's criterion: X is a covector iff X composed with any tope is a tope."""
    if not isinstance(X, SignedVector):
        X = SignedVector(tuple(X))
    if len(X) != chi.n:
        raise ValueError("sign vector has the wrong length")
    T = topes(chi)
    return all(X.compose(SignedVector(t)).signs in T for t in T)


def pointed_covector_pairs(ts: TreeSet) -> Iterable[tuple[tuple[int, ...], Tree]]:
    """Pairs (S, F) on the pointed trees: F is a subgraph of a pointed tree
    covering every element of E, a copy of a row is isolated only if the row
    is, and S is nonzero on every row F touches.  Copies are labelled 1..d."""
    d = ts.d
    seen = set()
    for tree in pointed_extension(ts).trees:
        for k in range(len(tree) + 1):
            for F in combinations(tree, k):
                cols = {e for _, e in F}
                if any(e not in cols for e in range(d + 1, ts.n + d + 1)):
                    continue
                rows = {r for r, _ in F}
                if any(c not in cols and c in rows for c in range(1, d + 1)):
                    continue
                if F in seen:
                    continue
                seen.add(F)
                choices = [(1, -1) if r in rows else (1, 0, -1) for r in range(1, d + 1)]
                for S in product(*choices):
                    yield S, F


def covector_sweep(ts: TreeSet, A: Sequence[Sequence[int]]) -> Report:
    """Every psi(S, F) over the pointed pairs must be a covector of the
    chirotope of the pointed field with matrix (I | A)."""
    At = pointed_matrix(sign_matrix(A))
    chi = chirotope(extract_matching_field(pointed_extension(ts)), At)
    checked = 0
    for S, F in pointed_covector_pairs(ts):
        X = psi(S, F, At)
        checked += 1
        if not is_covector(X, chi):
            return Report("covectors", False, witness={"S": list(S), "F": [list(e) for e in F], "X": X.signs})
    return Report("covectors", True, detail={"checked": checked})
