"""Coherent matching fields, sets of sign maps over all sign matrices, isomorphism
classes of chirotopes, and tropically non-singular minors.

Coherent fields pick weight-maximal matchings; tropical minors use the min
convention.  Both follow the usual conventions of their contexts.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations, product
from math import factorial, lcm
from typing import Iterable, Sequence

from .core import GroundConfig, Matching, SignMap, mask_of, perm_sign
from .oriented import chirotope
from .triangulation import MatchingField

__all__ = [
    "WeightMatrix",
    "weight_matrix",
    "best_matchings",
    "coherent_field",
    "diagonal_field",
    "OmmSet",
    "omm",
    "canonical_form",
    "isomorphism_classes",
    "tropically_nonsingular_minors",
    "realized_chirotope",
    "FREE_ENTRY_LIMIT",
]

WeightMatrix = tuple[tuple[Fraction, ...], ...]

FREE_ENTRY_LIMIT = 24
ISOMORPHISM_N_LIMIT = 9
EXHAUSTIVE_D_LIMIT = 6
MAX_SPREAD = 4096


def weight_matrix(rows: Iterable[Iterable]) -> WeightMatrix:
    out = tuple(tuple(Fraction(x) for x in row) for row in rows)
    if len({len(r) for r in out}) != 1:
        raise ValueError("ragged weight matrix")
    return out


# --- assignment problems ----------------------------------------------------------------


def best_matchings(W: WeightMatrix, sigma: Sequence[int], maximize: bool = True) -> tuple[Fraction, list[tuple[int, ...]]]:
    """Optimal value and all optimal assignments of rows to the columns in sigma.

    Assignments are tuples of columns, entry i for row i + 1.
    """
    d = len(W)
    if d <= EXHAUSTIVE_D_LIMIT:
        best = None
        arg: list[tuple[int, ...]] = []
        for perm in permutations(sigma):
            v = sum(W[i][e - 1] for i, e in enumerate(perm))
            if best is None or (v > best if maximize else v < best):
                best, arg = v, [perm]
            elif v == best:
                arg.append(perm)
        return best, arg
    return _hungarian_all(W, sigma, maximize)


def _hungarian(cost: list[list[Fraction]]) -> tuple[Fraction, list[int]]:
    """Exact minimum-cost perfect assignment (potentials method); returns the
    value and the column chosen for each row."""
    size = len(cost)
    INF = None
    u = [Fraction(0)] * (size + 1)
    v = [Fraction(0)] * (size + 1)
    p = [0] * (size + 1)
    way = [0] * (size + 1)
    for i in range(1, size + 1):
        p[0] = i
        j0 = 0
        minv: list = [INF] * (size + 1)
        used = [False] * (size + 1)
        while True:
            used[j0] = True
            i0 = p[j0]
            delta = INF
            j1 = 0
            for j in range(1, size + 1):
                if used[j]:
                    continue
                cur = cost[i0 - 1][j - 1] - u[i0] - v[j]
                if minv[j] is INF or cur < minv[j]:
                    minv[j] = cur
                    way[j] = j0
                if delta is INF or minv[j] < delta:
                    delta = minv[j]
                    j1 = j
            for j in range(size + 1):
                if used[j]:
                    u[p[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if p[j0] == 0:
                break
        while True:
            j1 = way[j0]
            p[j0] = p[j1]
            j0 = j1
            if j0 == 0:
                break
    assign = [0] * size
    for j in range(1, size + 1):
        assign[p[j] - 1] = j - 1
    return sum(cost[i][assign[i]] for i in range(size)), assign


def _hungarian_all(W: WeightMatrix, sigma: Sequence[int], maximize: bool) -> tuple[Fraction, list[tuple[int, ...]]]:
    sgn = -1 if maximize else 1
    cols = list(sigma)
    cost = [[sgn * W[i][e - 1] for e in cols] for i in range(len(W))]
    value, assign = _hungarian(cost)
    best = tuple(cols[j] for j in assign)
    found = [best]
    # the optimum is unique iff forbidding any one of its edges makes things worse
    big = sum(abs(x) for row in cost for x in row) + 1
    for i, j in enumerate(assign):
        alt = [row[:] for row in cost]
        alt[i][j] = big
        v2, a2 = _hungarian(alt)
        if v2 == value:
            found.append(tuple(cols[k] for k in a2))
    return sgn * value, found


# --- coherent and diagonal fields -----------------------------------------------------------


def coherent_field(W: Sequence[Sequence]) -> MatchingField:
    """Weight-maximal matching for every d-subset; ties are an error."""
    W = weight_matrix(W)
    d, n = len(W), len(W[0])
    matchings = []
    for sigma in combinations(range(1, n + 1), d):
        _, arg = best_matchings(W, sigma, maximize=True)
        if len(arg) != 1:
            raise ValueError(f"non-generic at {sigma}: optimal matchings {arg[:2]}")
        matchings.append(Matching.from_targets(arg[0]))
    return MatchingField(GroundConfig(d, n), matchings)


def diagonal_field(d: int, n: int) -> MatchingField:
    """Row i is matched to the i-th smallest element of every d-subset."""
    cfg = GroundConfig(d, n)
    return MatchingField(cfg, [Matching.from_targets(s) for s in cfg.d_subsets()])


# --- sets of sign maps -------------------------------------------------------------------


@dataclass(frozen=True)
class OmmSet:
    config: GroundConfig
    maps: frozenset[SignMap]
    representatives: dict  # SignMap -> first sign matrix producing it

    def __len__(self) -> int:
        return len(self.maps)

    def __contains__(self, chi: SignMap) -> bool:
        return chi in self.maps

    def sorted_maps(self) -> list[SignMap]:
        return sorted(self.maps, key=lambda c: c.key())


def omm(mf: MatchingField) -> OmmSet:
    """All distinct sign maps chirotope(mf, A) as A ranges over the sign
    matrices that are nonzero exactly on the support of the field."""
    support = sorted(mf.support)
    if len(support) > FREE_ENTRY_LIMIT:
        raise ValueError(f"desk-scale limit: {len(support)} free entries > {FREE_ENTRY_LIMIT}")
    reps: dict[SignMap, tuple] = {}
    for signs in product((1, -1), repeat=len(support)):
        A = [[0] * mf.n for _ in range(mf.d)]
        for (r, e), s in zip(support, signs):
            A[r - 1][e - 1] = s
        A = tuple(tuple(row) for row in A)
        chi = chirotope(mf, A)
        reps.setdefault(chi, A)
    return OmmSet(mf.config, frozenset(reps), reps)


# --- isomorphism -------------------------------------------------------------------------


def _colex_blocks(n: int, d: int) -> list[list[tuple[int, ...]]]:
    """d-subsets of 1..n grouped by their largest element (colex order)."""
    blocks = [[] for _ in range(n + 1)]
    for s in combinations(range(1, n + 1), d):
        blocks[s[-1]].append(s)
    for b in blocks:
        b.sort(key=lambda s: tuple(reversed(s)))
    return blocks


def canonical_form(chi: SignMap) -> tuple[int, ...]:
    """Lexicographically least colex encoding of chi over all relabelings,
    reorientations and a global sign.

    Positions are filled one at a time.  Reorientation of the element placed at
    position p > d is fixed by requiring the value on {1, ..., d-1, p} to be +
    (both orientations are kept if that value is 0).  All partial labelings
    that achieve the least prefix so far are extended; the rest are dropped.
    """
    d, n = chi.d, chi.n
    blocks = _colex_blocks(n, d)
    enc = {1: 0, 0: 1, -1: 2}

    def value(assign, eps, glob, subset):
        elems = [assign[p - 1] for p in subset]
        v = chi(*elems)
        if v == 0:
            return 0
        for e in elems:
            v *= eps[e]
        return v * glob

    # states: (assignment tuple, eps dict as tuple over elements, global sign)
    states = []
    for first in permutations(range(1, n + 1), d):
        for flips in product((1, -1), repeat=d):
            for glob in (1, -1):
                eps = {e: 1 for e in range(1, n + 1)}
                for e, f in zip(first, flips):
                    eps[e] = f
                states.append((first, eps, glob))
    # prefix up to position d is the single value on {1..d}
    def best_of(cands):
        keyed = [(tuple(enc[x] for x in blk), st) for blk, st in cands]
        low = min(k for k, _ in keyed)
        return low, [st for k, st in keyed if k == low]

    prefix: list[int] = []
    cands = []
    for st in states:
        assign, eps, glob = st
        cands.append(([value(assign, eps, glob, s) for s in blocks[d]], st))
    low, states = best_of(cands)
    prefix.extend(low)
    seen = set()
    uniq = []
    for assign, eps, glob in states:
        key = (assign, tuple(sorted(eps.items())), glob)
        if key not in seen:
            seen.add(key)
            uniq.append((assign, eps, glob))
    states = uniq

    for pos in range(d + 1, n + 1):
        cands = []
        for assign, eps, glob in states:
            for e in range(1, n + 1):
                if e in assign:
                    continue
                new_assign = assign + (e,)
                anchor = tuple(range(1, d)) + (pos,)
                eps1 = dict(eps)
                eps1[e] = 1
                a = value(new_assign, eps1, glob, anchor)
                options = [1] if a > 0 else [-1] if a < 0 else [1, -1]
                for f in options:
                    eps2 = dict(eps)
                    eps2[e] = f
                    blk = [value(new_assign, eps2, glob, s) for s in blocks[pos]]
                    cands.append((blk, (new_assign, eps2, glob)))
        low, states = best_of(cands)
        prefix.extend(low)
        seen = set()
        uniq = []
        for assign, eps, glob in states:
            key = (assign, tuple(sorted(eps.items())), glob)
            if key not in seen:
                seen.add(key)
                uniq.append((assign, eps, glob))
        states = uniq
    return tuple(prefix)


def isomorphism_classes(oset: OmmSet | Iterable[SignMap]) -> list[list[SignMap]]:
    """Partition sign maps into classes up to relabeling and reorientation."""
    maps = list(oset.maps) if isinstance(oset, OmmSet) else list(oset)
    if any(c.n > ISOMORPHISM_N_LIMIT for c in maps):
        raise ValueError(f"desk-scale limit: n > {ISOMORPHISM_N_LIMIT}")
    classes: dict[tuple, list[SignMap]] = {}
    for chi in sorted(maps, key=lambda c: c.key()):
        classes.setdefault((chi.d, chi.n, canonical_form(chi)), []).append(chi)
    return [classes[k] for k in sorted(classes)]


# --- tropical minors ---------------------------------------------------------------------


def tropically_nonsingular_minors(M: Sequence[Sequence]) -> set[tuple[int, ...]]:
    """Column sets of d x d submatrices whose min-plus permanent is attained once."""
    W = weight_matrix(M)
    d, n = len(W), len(W[0])
    out = set()
    for sigma in combinations(range(1, n + 1), d):
        _, arg = best_matchings(W, sigma, maximize=False)
        if len(arg) == 1:
            out.add(sigma)
    return out


# --- realization oracle ------------------------------------------------------------------


def _integer_weights(W: WeightMatrix) -> list[list[int]]:
    scale = lcm(*(x.denominator for row in W for x in row))
    low = min(x for row in W for x in row)
    return [[int((x - low) * scale) for x in row] for row in W]


def _leading_signs(A, Wint, t: int) -> dict[tuple[int, ...], int]:
    d, n = len(Wint), len(Wint[0])
    out = {}
    for sigma in combinations(range(1, n + 1), d):
        total = 0
        for perm in permutations(range(d)):
            term = perm_sign(perm)
            for i, j in enumerate(perm):
                e = sigma[j] - 1
                term *= A[i][e] * t ** Wint[i][e]
                if term == 0:
                    break
            total += term
        out[sigma] = (total > 0) - (total < 0)
    return out


def realized_chirotope(W: Sequence[Sequence], A: Sequence[Sequence[int]]) -> SignMap:
    """Signs of the maximal minors of (A_ij * t^W_ij) for a large integer t.

    W is shifted and scaled to non-negative integers; with spread the largest
    possible difference of two matching weights, t = 1 + d! * 2^spread.  The
    signs are recomputed with t doubled and must agree.
    """
    Wq = weight_matrix(W)
    d = len(Wq)
    Wint = _integer_weights(Wq)
    spread = d * max(x for row in Wint for x in row)
    if spread > MAX_SPREAD:
        raise ValueError(f"weight spread {spread} too large for the exact oracle; use small integer weights")
    t = 1 + factorial(d) * 2 ** spread
    first = _leading_signs(A, Wint, t)
    second = _leading_signs(A, Wint, 2 * t)
    if first != second:
        raise AssertionError("determinant signs are not stable under doubling t")
    return SignMap(d, len(Wq[0]), {mask_of(s): v for s, v in first.items()})
