"""Ground-set conventions, matchings, matroids, sign maps and Grassmann-Pluecker checks.

Elements of the ground set E are the integers 1..n, rows R are 1..d.  Subsets
are passed around as sorted tuples; a bitmask (bit ``e - 1`` for element
``e``) is the canonical dictionary key.  Signs are the integers -1, 0, 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Any, Callable, Iterable, Iterator, Mapping, Sequence

__all__ = [
    "GroundConfig",
    "Matching",
    "Matroid",
    "Report",
    "SignMap",
    "SignedVector",
    "check_3term_gp",
    "det",
    "det_sign",
    "orthogonal",
    "check_full_gp",
    "is_chirotope",
    "is_matroid",
    "mask_of",
    "elements_of",
    "perm_sign",
    "sign_of_matching",
    "sign_char",
    "parse_sign",
    "subset_label",
    "three_term_tuples",
]


# --- subsets and permutations ---------------------------------------------


def mask_of(subset: Iterable[int]) -> int:
    m = 0
    for e in subset:
        m |= 1 << (e - 1)
    return m


def elements_of(mask: int) -> tuple[int, ...]:
    out = []
    e = 1
    while mask:
        if mask & 1:
            out.append(e)
        mask >>= 1
        e += 1
    return tuple(out)


def perm_sign(seq: Sequence[int]) -> int:
    """Sign of the permutation that sorts ``seq``; 0 if ``seq`` has a repeat."""
    seq = list(seq)
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] == seq[j]:
                return 0
            if seq[i] > seq[j]:
                sign = -sign
    return sign


def sign_char(s: int) -> str:
    return {1: "+", -1: "-", 0: "0"}[s]


def parse_sign(token: Any) -> int:
    if isinstance(token, int) and token in (-1, 0, 1):
        return token
    table = {"+": 1, "-": -1, "0": 0, "+1": 1, "-1": -1, "1": 1, "−": -1}
    try:
        return table[str(token).strip()]
    except KeyError:
        raise ValueError(f"not a sign: {token!r}") from None


def subset_label(subset: Sequence[int]) -> str:
    """``(1, 2)`` -> ``"12"`` for ground sets below 10, comma separated otherwise."""
    if all(0 < e < 10 for e in subset):
        return "".join(str(e) for e in subset)
    return ",".join(str(e) for e in subset)


def parse_subset_label(label: str) -> tuple[int, ...]:
    label = label.strip()
    if "," in label:
        return tuple(sorted(int(x) for x in label.split(",")))
    return tuple(sorted(int(ch) for ch in label))


def det(rows: Sequence[Sequence[Any]]) -> Fraction:
    """Exact determinant by Gaussian elimination over the rationals."""
    m = [[Fraction(x) for x in row] for row in rows]
    size = len(m)
    if any(len(row) != size for row in m):
        raise ValueError("matrix is not square")
    result = Fraction(1)
    for k in range(size):
        pivot = next((i for i in range(k, size) if m[i][k] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != k:
            m[k], m[pivot] = m[pivot], m[k]
            result = -result
        result *= m[k][k]
        for i in range(k + 1, size):
            if m[i][k]:
                f = m[i][k] / m[k][k]
                for j in range(k, size):
                    m[i][j] -= f * m[k][j]
    return result


def det_sign(rows: Sequence[Sequence[Any]]) -> int:
    v = det(rows)
    return (v > 0) - (v < 0)


# --- basic types ------------------------------------------------------------


@dataclass(frozen=True)
class GroundConfig:
    d: int
    n: int

    def __post_init__(self) -> None:
        if not (1 <= self.d <= self.n):
            raise ValueError(f"need 1 <= d <= n, got d={self.d}, n={self.n}")

    def d_subsets(self) -> Iterator[tuple[int, ...]]:
        return combinations(range(1, self.n + 1), self.d)

    def check_edge(self, r: int, e: int) -> None:
        if not (1 <= r <= self.d and 1 <= e <= self.n):
            raise ValueError(f"edge ({r}, {e}) out of range for d={self.d}, n={self.n}")


@dataclass(frozen=True)
class Matching:
    """A perfect matching between R = {1..d} and a d-subset of E.

    ``edges`` is stored sorted by row; ``edges[i] == (i + 1, e)``.
    """

    edges: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        edges = tuple(sorted(self.edges))
        rows = [r for r, _ in edges]
        cols = [e for _, e in edges]
        if rows != list(range(1, len(edges) + 1)):
            raise ValueError(f"every row must appear exactly once: {edges}")
        if len(set(cols)) != len(cols):
            raise ValueError(f"column used twice: {edges}")
        object.__setattr__(self, "edges", edges)

    @classmethod
    def from_targets(cls, targets: Sequence[int]) -> "Matching":
        """``targets[i]`` is the element matched to row ``i + 1``."""
        return cls(tuple((i + 1, e) for i, e in enumerate(targets)))

    @property
    def d(self) -> int:
        return len(self.edges)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(sorted(e for _, e in self.edges))

    @property
    def targets(self) -> tuple[int, ...]:
        return tuple(e for _, e in self.edges)

    def __iter__(self):
        return iter(self.edges)


def sign_of_matching(m: Matching) -> int:
    """Parity of [d] -> R -> sigma -> [d] with order-preserving outer maps."""
    return perm_sign(m.targets)


@dataclass(frozen=True)
class Report:
    """Outcome of a check.  ``witness`` is the first violation found, if any."""

    name: str
    passed: bool
    witness: Any = None
    detail: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.passed

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "witness": _jsonable(self.witness),
            "detail": _jsonable(self.detail),
        }


def _jsonable(obj: Any) -> Any:
    if isinstance(obj, Report):
        return obj.to_dict()
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = sorted(obj) if isinstance(obj, (set, frozenset)) else obj
        return [_jsonable(v) for v in items]
    if isinstance(obj, (int, float, str, bool)) or obj is None:
        return obj
    return str(obj)


# --- matroids -----------------------------------------------------------------


@dataclass(frozen=True)
class Matroid:
    rank: int
    ground: tuple[int, ...]
    bases: frozenset[tuple[int, ...]]

    @classmethod
    def from_bases(cls, bases: Iterable[Iterable[int]], ground: Iterable[int] | None = None) -> "Matroid":
        bs = frozenset(tuple(sorted(b)) for b in bases)
        if not bs:
            raise ValueError("empty basis set")
        ranks = {len(b) for b in bs}
        if len(ranks) != 1:
            raise ValueError("bases of different sizes")
        g = tuple(sorted(set(ground) if ground is not None else {e for b in bs for e in b}))
        return cls(ranks.pop(), g, bs)

    @classmethod
    def uniform(cls, d: int, n: int) -> "Matroid":
        return cls(d, tuple(range(1, n + 1)), frozenset(combinations(range(1, n + 1), d)))

    def is_valid(self) -> bool:
        return is_matroid(self.bases)

    def __contains__(self, basis: Iterable[int]) -> bool:
        return tuple(sorted(basis)) in self.bases


def is_matroid(bases: Iterable[Iterable[int]]) -> bool:
    """Basis-exchange test on a collection of equal-size subsets."""
    masks = {mask_of(b) for b in bases}
    if not masks:
        raise ValueError("empty basis set")
    sizes = {bin(m).count("1") for m in masks}
    if len(sizes) != 1:
        raise ValueError("bases of different sizes")
    for b1 in masks:
        for b2 in masks:
            diff1 = b1 & ~b2
            diff2 = b2 & ~b1
            while diff1:
                low = diff1 & -diff1
                diff1 ^= low
                base = b1 ^ low
                rest = diff2
                ok = False
                while rest:
                    f = rest & -rest
                    rest ^= f
                    if base | f in masks:
                        ok = True
                        break
                if not ok:
                    return False
    return True


# --- sign vectors -------------------------------------------------------------


@dataclass(frozen=True)
class SignedVector:
    signs: tuple[int, ...]

    def __post_init__(self) -> None:
        signs = tuple(int(s) for s in self.signs)
        if any(s not in (-1, 0, 1) for s in signs):
            raise ValueError(f"not a sign vector: {self.signs}")
        object.__setattr__(self, "signs", signs)

    @classmethod
    def parse(cls, text: str | Sequence[Any]) -> "SignedVector":
        if isinstance(text, str):
            text = [t for t in text.replace(",", " ").split()] if (" " in text or "," in text) else list(text)
        return cls(tuple(parse_sign(t) for t in text))

    def __len__(self) -> int:
        return len(self.signs)

    def __getitem__(self, e: int) -> int:
        """1-based access."""
        return self.signs[e - 1]

    def __neg__(self) -> "SignedVector":
        return SignedVector(tuple(-s for s in self.signs))

    @property
    def support(self) -> frozenset[int]:
        return frozenset(i + 1 for i, s in enumerate(self.signs) if s)

    @property
    def positive(self) -> frozenset[int]:
        return frozenset(i + 1 for i, s in enumerate(self.signs) if s > 0)

    @property
    def negative(self) -> frozenset[int]:
        return frozenset(i + 1 for i, s in enumerate(self.signs) if s < 0)

    def compose(self, other: "SignedVector") -> "SignedVector":
        return SignedVector(tuple(x if x else y for x, y in zip(self.signs, other.signs)))

    def conforms_to(self, other: "SignedVector") -> bool:
        """``self <= other`` in the sign-vector order."""
        return all(x == 0 or x == y for x, y in zip(self.signs, other.signs))

    def separation(self, other: "SignedVector") -> frozenset[int]:
        return frozenset(i + 1 for i, (x, y) in enumerate(zip(self.signs, other.signs)) if x and x == -y)

    def is_zero(self) -> bool:
        return not any(self.signs)

    def __str__(self) -> str:
        return "(" + ",".join(sign_char(s) for s in self.signs) + ")"


def orthogonal(x: SignedVector, y: SignedVector) -> bool:
    """Oriented-matroid orthogonality: the supports' intersection is empty, or
    it carries both an agreeing and an opposing element."""
    agree = oppose = False
    for a, b in zip(x.signs, y.signs):
        if a and b:
            if a == b:
                agree = True
            else:
                oppose = True
    return (agree and oppose) or not (agree or oppose)


# --- sign maps ----------------------------------------------------------------


class SignMap:
    """Alternating map on d-tuples of E, stored on sorted d-subsets.

    The table is total: every d-subset has an explicit value, zeros included.
    """

    __slots__ = ("d", "n", "_values", "_key")

    def __init__(self, d: int, n: int, values: Mapping[Any, int]):
        self.d = d
        self.n = n
        table: dict[int, int] = {}
        for k, v in values.items():
            m = k if isinstance(k, int) else mask_of(k)
            if bin(m).count("1") != d or m >> n:
                raise ValueError(f"bad subset key {k!r} for d={d}, n={n}")
            v = parse_sign(v)
            table[m] = v
        expected = comb(n, d)
        if len(table) != expected:
            missing = [s for s in combinations(range(1, n + 1), d) if mask_of(s) not in table]
            raise ValueError(f"sign map is not total: missing {missing[:5]}")
        self._values = table
        self._key = None

    @classmethod
    def from_function(cls, d: int, n: int, fn: Callable[[tuple[int, ...]], int]) -> "SignMap":
        return cls(d, n, {mask_of(s): fn(s) for s in combinations(range(1, n + 1), d)})

    @classmethod
    def from_labels(cls, d: int, n: int, labels: Mapping[str, Any], default: int | None = None) -> "SignMap":
        """Build from ``{"12": "-", ...}``; unlisted subsets take ``default``."""
        values = {mask_of(parse_subset_label(k)): parse_sign(v) for k, v in labels.items()}
        if default is not None:
            for s in combinations(range(1, n + 1), d):
                values.setdefault(mask_of(s), default)
        return cls(d, n, values)

    def value(self, subset: Iterable[int]) -> int:
        """Value on a subset given in any order, interpreted as sorted."""
        return self._values[mask_of(subset)]

    def __call__(self, *tup: int) -> int:
        if len(tup) == 1 and not isinstance(tup[0], int):
            tup = tuple(tup[0])
        s = perm_sign(tup)
        if s == 0:
            return 0
        return s * self._values[mask_of(tup)]

    def items(self) -> Iterator[tuple[tuple[int, ...], int]]:
        for s in combinations(range(1, self.n + 1), self.d):
            yield s, self._values[mask_of(s)]

    def masks(self) -> dict[int, int]:
        return dict(self._values)

    def support(self) -> frozenset[tuple[int, ...]]:
        return frozenset(s for s, v in self.items() if v)

    def is_zero(self) -> bool:
        return not any(self._values.values())

    def is_uniform(self) -> bool:
        return all(self._values.values())

    def key(self) -> tuple[int, ...]:
        """Values in lexicographic order of subsets; a hashable fingerprint."""
        if self._key is None:
            self._key = tuple(v for _, v in self.items())
        return self._key

    def to_labels(self) -> dict[str, str]:
        return {subset_label(s): sign_char(v) for s, v in self.items()}

    def restrict(self, bases: Iterable[Iterable[int]]) -> "SignMap":
        keep = {mask_of(b) for b in bases}
        return SignMap(self.d, self.n, {m: (v if m in keep else 0) for m, v in self._values.items()})

    def negated(self) -> "SignMap":
        return SignMap(self.d, self.n, {m: -v for m, v in self._values.items()})

    def reoriented(self, flip: Iterable[int]) -> "SignMap":
        fm = mask_of(flip)
        out = {}
        for m, v in self._values.items():
            out[m] = -v if bin(m & fm).count("1") % 2 else v
        return SignMap(self.d, self.n, out)

    def relabeled(self, perm: Mapping[int, int]) -> "SignMap":
        """New map chi' with chi'(perm[x1], ..., perm[xd]) = chi(x1, ..., xd)."""
        out = {}
        for s, v in self.items():
            image = [perm[e] for e in s]
            out[mask_of(image)] = perm_sign(image) * v
        return SignMap(self.d, self.n, out)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SignMap) and (self.d, self.n) == (other.d, other.n) and self._values == other._values

    def __hash__(self) -> int:
        return hash((self.d, self.n, self.key()))

    def __repr__(self) -> str:
        body = ",".join(f"({k},{v})" for k, v in self.to_labels().items())
        return f"SignMap(d={self.d}, n={self.n}, {body})"


# --- Grassmann-Pluecker -------------------------------------------------------


def _three_term_products(chi: SignMap, x1: int, x2: int, y1: int, y2: int, X: tuple[int, ...]) -> tuple[int, int, int]:
    return (
        chi(x1, x2, *X) * chi(y1, y2, *X),
        chi(x1, y1, *X) * chi(y2, x2, *X),
        chi(x1, y2, *X) * chi(x2, y1, *X),
    )


def _gp_ok(terms: Iterable[int]) -> bool:
    terms = list(terms)
    return (1 in terms and -1 in terms) or not any(terms)


def three_term_tuples(n: int, d: int) -> Iterator[tuple[int, int, int, int, tuple[int, ...]]]:
    """All (x1, x2, y1, y2, X) with distinct entries, in lexicographic order,
    the quadruple increasing and X sorted."""
    ground = range(1, n + 1)
    items = []
    for quad in combinations(ground, 4):
        rest = [e for e in ground if e not in quad]
        for X in combinations(rest, d - 2):
            items.append((*quad, X))
    items.sort()
    return iter(items)


def check_3term_gp(chi: SignMap) -> Report:
    if chi.d < 2:
        return Report("3-term GP", True, detail={"relations": 0})
    count = 0
    for x1, x2, y1, y2, X in three_term_tuples(chi.n, chi.d):
        count += 1
        prods = _three_term_products(chi, x1, x2, y1, y2, X)
        if not _gp_ok(prods):
            return Report(
                "3-term GP",
                False,
                witness={"x1": x1, "x2": x2, "y1": y1, "y2": y2, "X": list(X), "products": list(prods)},
                detail={"relations": count},
            )
    return Report("3-term GP", True, detail={"relations": count})


def check_full_gp(chi: SignMap) -> Report:
    """All (d+1)-term Grassmann-Pluecker relations.

    Sorting the x's or the y's changes every term by the same sign, so
    enumerating (d-1)-subsets X and (d+1)-subsets Y is exhaustive.
    """
    d, n = chi.d, chi.n
    if chi.is_zero():
        return Report("full GP", False, witness="identically zero")
    ground = range(1, n + 1)
    count = 0
    for X in combinations(ground, d - 1):
        for Y in combinations(ground, d + 1):
            count += 1
            terms = []
            for k, y in enumerate(Y, start=1):
                rest = Y[: k - 1] + Y[k:]
                terms.append((-1) ** k * chi(*X, y) * chi(*rest))
            if not _gp_ok(terms):
                return Report(
                    "full GP", False, witness={"X": list(X), "Y": list(Y), "terms": terms}, detail={"relations": count}
                )
    return Report("full GP", True, detail={"relations": count})


def is_chirotope(chi: SignMap) -> bool:
    if chi.is_zero():
        return False
    if not is_matroid(chi.support()):
        return False
    return check_3term_gp(chi).passed
