"""Hyperfields, matroids over hyperfields, and the inflation property.

Hypersums are only ever queried through membership: ``contains(x, terms)``
decides ``x in terms[0] ⊞ ... ⊞ terms[-1]``.  By reversibility this reduces to
``0 in terms ⊞ (-x)``, so each hyperfield supplies a single oracle
``zero_in(terms)``.  Finite hyperfields carry an explicit table of pairwise
sums and fold it left to right; the tropical, phase and tropical phase
hyperfields use exact interval and arc arithmetic.

Element encodings:

* Krasner: 0, 1.  Sign: -1, 0, 1.
* Tropical (min convention): rationals, with ``math.inf`` as the zero.
* Phase and tropical phase: ``Fraction`` angles in [0, 2) as multiples of pi,
  ``None`` as the zero.  So ``Fraction(1, 2)`` is i.
* Cyclic-group constructions: 0 is the zero, ``k + 1`` stands for g^k.
* Prime fields: 0..p-1.  Quotients F_p/U: 0 and the smallest member of each coset.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Any, Callable, Iterable, Mapping, Sequence

from .core import Report, is_matroid, mask_of, perm_sign, three_term_tuples
from .triangulation import MatchingField

__all__ = [
    "Hyperfield",
    "HSignMap",
    "Morphism",
    "builtin",
    "krasner",
    "sign_hyperfield",
    "tropical",
    "phase",
    "tropical_phase",
    "massouros",
    "weak_group",
    "prime_field",
    "quotient_field",
    "inflated",
    "has_ip",
    "check_axioms",
    "h_chirotope",
    "weak_matroid_check",
    "strong_matroid_check",
    "morphism",
    "pushforward",
    "phase_of",
    "complex_field",
]


@dataclass(frozen=True, eq=False)
class Hyperfield:
    name: str
    zero: Any
    one: Any
    mul: Callable[[Any, Any], Any]
    neg: Callable[[Any], Any]
    elements: tuple | None = None
    table: Mapping[tuple, frozenset] | None = None
    zero_oracle: Callable[[list], bool] | None = None
    ip: bool | None = None
    normalize: Callable[[Any], Any] = field(default=lambda x: x)

    @property
    def finite(self) -> bool:
        return self.elements is not None

    def add(self, a: Any, b: Any) -> frozenset:
        if self.table is None:
            raise ValueError(f"{self.name}: sums are only available as membership queries")
        return self.table[(a, b)]

    def hsum(self, terms: Sequence[Any]) -> frozenset:
        """Materialized k-fold hypersum of a finite hyperfield, folded left to right."""
        if not terms:
            return frozenset([self.zero])
        acc = frozenset([terms[0]])
        for t in terms[1:]:
            acc = frozenset().union(*(self.add(a, t) for a in acc))
        return acc

    def zero_in(self, terms: Iterable[Any]) -> bool:
        terms = [self.normalize(t) for t in terms]
        if self.zero_oracle is not None:
            return self.zero_oracle(terms)
        return self.zero in self.hsum(terms)

    def contains(self, x: Any, terms: Iterable[Any]) -> bool:
        return self.zero_in(list(terms) + [self.neg(self.normalize(x))])

    def minus_one(self) -> Any:
        return self.neg(self.one)

    def inv(self, a: Any) -> Any:
        if not self.finite:
            raise ValueError("inverse search needs a finite hyperfield")
        for b in self.elements:
            if b != self.zero and self.mul(a, b) == self.one:
                return b
        raise ValueError(f"{a} has no inverse")

    def prod(self, items: Iterable[Any]) -> Any:
        out = self.one
        for x in items:
            out = self.mul(out, x)
        return out

    def __repr__(self) -> str:
        return f"Hyperfield({self.name})"


def _finite(name: str, elements: Sequence, zero, one, mul, neg, pair_sum, ip=None) -> Hyperfield:
    elements = tuple(elements)
    table = {(a, b): frozenset(pair_sum(a, b)) for a in elements for b in elements}
    return Hyperfield(name, zero, one, mul, neg, elements=elements, table=table, ip=ip)


# --- finite built-ins ------------------------------------------------------------------


def krasner() -> Hyperfield:
    def s(a, b):
        if a == 0 or b == 0:
            return {a + b}
        return {0, 1}

    return _finite("krasner", (0, 1), 0, 1, lambda a, b: a * b, lambda a: a, s)


def sign_hyperfield() -> Hyperfield:
    def s(a, b):
        if a == 0 or b == 0:
            return {a + b}
        if a == b:
            return {a}
        return {-1, 0, 1}

    return _finite("sign", (-1, 0, 1), 0, 1, lambda a, b: a * b, lambda a: -a, s)


def _cyclic_mul(m: int):
    def mul(a, b):
        if a == 0 or b == 0:
            return 0
        return (a - 1 + b - 1) % m + 1

    return mul


def massouros(m: int) -> Hyperfield:
    """Cyclic group of order m plus a zero; a ⊞ b = {a, b}, a ⊞ a = everything."""
    elements = tuple(range(m + 1))

    def s(a, b):
        if a == b:
            return set(elements)
        return {a, b}

    return _finite(f"massouros({m})", elements, 0, 1, _cyclic_mul(m), lambda a: a, _zero_fix(s))


def weak_group(m: int) -> Hyperfield:
    """Cyclic group of order m plus a zero; a ⊞ b = G for a != b, a ⊞ a = everything."""
    elements = tuple(range(m + 1))
    group = set(range(1, m + 1))

    def s(a, b):
        if a == b:
            return set(elements)
        return set(group)

    return _finite(f"weak_group({m})", elements, 0, 1, _cyclic_mul(m), lambda a: a, _zero_fix(s))


def _zero_fix(pair_sum):
    def s(a, b):
        if a == 0:
            return {b}
        if b == 0:
            return {a}
        return pair_sum(a, b)

    return s


def prime_field(p: int) -> Hyperfield:
    if p < 2 or any(p % k == 0 for k in range(2, int(p ** 0.5) + 1)):
        raise ValueError(f"{p} is not prime")
    return _finite(
        f"F({p})", range(p), 0, 1, lambda a, b: a * b % p, lambda a: (-a) % p, lambda a, b: {(a + b) % p}
    )


def quotient_field(p: int, subgroup: Iterable[int]) -> Hyperfield:
    """Krasner quotient F_p / U: cosets, with [a] ⊞ [b] = {[x + y] : x in aU, y in bU}."""
    U = frozenset(u % p for u in subgroup)
    closure = {a * b % p for a in U for b in U}
    if 1 not in U or not closure <= U or 0 in U:
        raise ValueError("not a multiplicative subgroup")

    def rep(x):
        x %= p
        return 0 if x == 0 else min(x * u % p for u in U)

    reps = sorted({rep(x) for x in range(p)})

    def s(a, b):
        return {rep(x + y) for x in (a * u % p for u in U) for y in (b * u % p for u in U)}

    name = f"F({p})/{{{','.join(map(str, sorted(U)))}}}"
    return _finite(name, reps, 0, 1, lambda a, b: rep(a * b), lambda a: rep(-a), s)


# --- infinite built-ins ---------------------------------------------------------------


def _tropical_zero(terms: list) -> bool:
    finite = [t for t in terms if t != math.inf]
    if not finite:
        return True
    low = min(finite)
    return finite.count(low) >= 2


def tropical() -> Hyperfield:
    """Min convention: zero is infinity, one is 0, multiplication is addition."""
    def norm(x):
        if x == math.inf or x is None:
            return math.inf
        return Fraction(x)

    return Hyperfield(
        "tropical",
        math.inf,
        Fraction(0),
        lambda a, b: math.inf if math.inf in (a, b) else a + b,
        lambda a: a,
        zero_oracle=_tropical_zero,
        ip=False,
        normalize=norm,
    )


def _angle(x) -> Fraction | None:
    if x is None:
        return None
    return Fraction(x) % 2


def _gaps(terms: list) -> list[Fraction]:
    dirs = sorted({t for t in terms if t is not None})
    if not dirs:
        return []
    gaps = [b - a for a, b in zip(dirs, dirs[1:])]
    gaps.append(2 - dirs[-1] + dirs[0])
    return gaps


def _phase_zero(terms: list) -> bool:
    dirs = sorted({t for t in terms if t is not None})
    if not dirs:
        return True
    if len(dirs) == 2 and dirs[1] - dirs[0] == 1:
        return True
    return max(_gaps(terms)) < 1


def _tropical_phase_zero(terms: list) -> bool:
    gaps = _gaps(terms)
    if not gaps:
        return True
    return max(gaps) <= 1


def _phase_mul(a, b):
    if a is None or b is None:
        return None
    return (a + b) % 2


def _phase_neg(a):
    return None if a is None else (a + 1) % 2


def phase() -> Hyperfield:
    """Unit circle plus zero; the sum of two phases is the open minor arc."""
    return Hyperfield("phase", None, Fraction(0), _phase_mul, _phase_neg, zero_oracle=_phase_zero, ip=False, normalize=_angle)


def tropical_phase() -> Hyperfield:
    """Unit circle plus zero; the sum of two phases is the closed minor arc."""
    return Hyperfield(
        "tropical_phase", None, Fraction(0), _phase_mul, _phase_neg, zero_oracle=_tropical_phase_zero, ip=True, normalize=_angle
    )


def complex_field() -> Hyperfield:
    """The complex numbers, used only as the source of the phase map."""
    return Hyperfield(
        "complex",
        0j,
        1 + 0j,
        lambda a, b: a * b,
        lambda a: -a,
        zero_oracle=lambda terms: abs(sum(terms)) == 0,
        normalize=complex,
    )


# --- inflation ---------------------------------------------------------------------------


def inflated(H: Hyperfield) -> Hyperfield:
    """Canonical inflation: a ⊞~ b = (a ⊞ b) ∪ {a, b}, and a ⊞~ (-a) = H."""
    if H.name == "phase":
        return tropical_phase()
    if not H.finite:
        raise ValueError(f"canonical inflation of {H.name} is not available")
    everything = set(H.elements)

    def s(a, b):
        if a == H.zero:
            return {b}
        if b == H.zero:
            return {a}
        if b == H.neg(a):
            return everything
        return set(H.add(a, b)) | {a, b}

    return _finite(f"inflated({H.name})", H.elements, H.zero, H.one, H.mul, H.neg, s)


def has_ip(H: Hyperfield) -> bool:
    """Inflation property: 1 ⊞ (-1) is the whole hyperfield."""
    if H.finite:
        return set(H.add(H.one, H.minus_one())) == set(H.elements)
    if H.ip is None:
        raise ValueError("undecidable here")
    return H.ip


_BUILTINS: dict[str, Callable[..., Hyperfield]] = {
    "krasner": krasner,
    "sign": sign_hyperfield,
    "tropical": tropical,
    "phase": phase,
    "tropical_phase": tropical_phase,
    "complex": complex_field,
}


def builtin(name: str) -> Hyperfield:
    """Look up a hyperfield by name.  Parametrised names: ``massouros(m)``,
    ``weak_group(m)``, ``F(p)``, ``F(p)/{u1,u2,...}``, ``inflated(<name>)``."""
    name = name.strip()
    if name in _BUILTINS:
        return _BUILTINS[name]()
    if name.startswith("F(") and name.endswith("}") and ")/{" in name:
        p, units = name[2:-1].split(")/{")
        return quotient_field(int(p), [int(u) for u in units.split(",")])
    if name.endswith(")") and "(" in name:
        head, arg = name[:-1].split("(", 1)
        if head == "inflated":
            return inflated(builtin(arg))
        if head in ("massouros", "weak_group", "F"):
            k = int(arg)
            return {"massouros": massouros, "weak_group": weak_group, "F": prime_field}[head](k)
    raise ValueError(f"unknown hyperfield {name!r}")


# --- axioms -------------------------------------------------------------------------------


def check_axioms(H: Hyperfield) -> Report:
    """Exhaustive check of the hyperfield axioms on a finite hyperfield."""
    if not H.finite:
        raise ValueError("axioms can only be checked exhaustively on finite hyperfields")
    E = H.elements
    Z = H.zero

    def fail(axiom, **w):
        return Report(f"axioms of {H.name}", False, witness={"axiom": axiom, **w})

    for a, b in product(E, E):
        if not H.add(a, b):
            return fail("non-empty sum", a=a, b=b)
        if H.add(a, b) != H.add(b, a):
            return fail("commutativity", a=a, b=b)
    for a, b, c in product(E, E, E):
        left = frozenset().union(*(H.add(x, c) for x in H.add(a, b)))
        right = frozenset().union(*(H.add(a, y) for y in H.add(b, c)))
        if left != right:
            return fail("associativity", a=a, b=b, c=c)
    for a in E:
        if H.add(Z, a) != frozenset([a]):
            return fail("zero is neutral", a=a)
        inverses = [b for b in E if Z in H.add(a, b)]
        if inverses != [H.neg(a)]:
            return fail("unique inverse", a=a, inverses=inverses)
    for x, y, z in product(E, E, E):
        if (x in H.add(y, z)) != (z in H.add(x, H.neg(y))):
            return fail("reversibility", x=x, y=y, z=z)
    units = [a for a in E if a != Z]
    for a in E:
        if H.mul(Z, a) != Z or H.mul(a, Z) != Z:
            return fail("zero absorbs", a=a)
    for a, b in product(units, units):
        if H.mul(a, b) == Z or H.mul(a, b) != H.mul(b, a):
            return fail("abelian group", a=a, b=b)
    for a, b, c in product(units, units, units):
        if H.mul(H.mul(a, b), c) != H.mul(a, H.mul(b, c)):
            return fail("multiplicative associativity", a=a, b=b, c=c)
    for a in units:
        if H.mul(H.one, a) != a:
            return fail("unit", a=a)
        H.inv(a)
    for a, x, y in product(E, E, E):
        left = frozenset(H.mul(a, s) for s in H.add(x, y))
        right = H.add(H.mul(a, x), H.mul(a, y))
        if left != right:
            return fail("distributivity", a=a, x=x, y=y)
    return Report(f"axioms of {H.name}", True)


# --- matroids over hyperfields ---------------------------------------------------------------


class HSignMap:
    """Alternating hyperfield-valued map on d-tuples, stored on sorted subsets."""

    __slots__ = ("d", "n", "H", "_values")

    def __init__(self, d: int, n: int, H: Hyperfield, values: Mapping[Any, Any]):
        self.d, self.n, self.H = d, n, H
        table = {}
        for k, v in values.items():
            m = k if isinstance(k, int) else mask_of(k)
            table[m] = H.normalize(v)
        for s in combinations(range(1, n + 1), d):
            if mask_of(s) not in table:
                raise ValueError(f"missing value on {s}")
        self._values = table

    def __call__(self, *tup: int) -> Any:
        s = perm_sign(tup)
        if s == 0:
            return self.H.zero
        v = self._values[mask_of(tup)]
        return v if s > 0 else self.H.neg(v)

    def value(self, subset: Iterable[int]) -> Any:
        return self._values[mask_of(subset)]

    def items(self):
        for s in combinations(range(1, self.n + 1), self.d):
            yield s, self._values[mask_of(s)]

    def support(self) -> list[tuple[int, ...]]:
        return [s for s, v in self.items() if v != self.H.zero]

    def is_zero(self) -> bool:
        return all(v == self.H.zero for v in self._values.values())

    def as_dict(self) -> dict[tuple[int, ...], Any]:
        return dict(self.items())

    def __eq__(self, other: object) -> bool:
        return isinstance(other, HSignMap) and (self.d, self.n) == (other.d, other.n) and self._values == other._values

    def __repr__(self) -> str:
        return f"HSignMap({self.H.name}, {dict(self.items())})"


def h_chirotope(mf: MatchingField, A: Sequence[Sequence[Any]], H: Hyperfield) -> HSignMap:
    """sigma -> sign(M_sigma) ⊗ prod of the matrix entries on M_sigma."""
    A = [[H.normalize(x) for x in row] for row in A]
    if len(A) != mf.d or any(len(row) != mf.n for row in A):
        raise ValueError(f"matrix must be {mf.d} x {mf.n}")
    if any(x == H.zero for row in A for x in row):
        raise ValueError("matrix has zero entries")
    values = {}
    for m in mf:
        v = H.one if perm_sign(m.targets) > 0 else H.minus_one()
        for r, e in m.edges:
            v = H.mul(v, A[r - 1][e - 1])
        values[mask_of(m.support)] = v
    return HSignMap(mf.d, mf.n, H, values)


def weak_matroid_check(chi: HSignMap, H: Hyperfield | None = None) -> Report:
    """Non-zero, matroid support, and 0 in the 3-term sum for every (x1, x2, y1, y2, X).

    The 3-term expression changes by a global factor -1 under permutations of
    the quadruple and not at all under permutations of X, so increasing
    quadruples and sorted X cover every case.
    """
    H = H or chi.H
    name = f"weak matroid over {H.name}"
    if chi.is_zero():
        return Report(name, False, witness="identically zero")
    if not is_matroid(chi.support()):
        return Report(name, False, witness="support is not a matroid")
    if chi.d < 2:
        return Report(name, True)
    for x1, x2, y1, y2, X in three_term_tuples(chi.n, chi.d):
        terms = [
            H.mul(chi(x1, x2, *X), chi(y1, y2, *X)),
            H.mul(chi(x1, y1, *X), chi(y2, x2, *X)),
            H.mul(chi(x1, y2, *X), chi(x2, y1, *X)),
        ]
        if not H.zero_in(terms):
            return Report(name, False, witness={"x1": x1, "x2": x2, "y1": y1, "y2": y2, "X": list(X), "terms": terms})
    return Report(name, True)


def strong_matroid_check(chi: HSignMap, H: Hyperfield | None = None) -> Report:
    """0 in the (d+1)-term Grassmann-Pluecker sum for every (d-1)-set and (d+1)-set."""
    H = H or chi.H
    name = f"strong matroid over {H.name}"
    if chi.is_zero():
        return Report(name, False, witness="identically zero")
    d, n = chi.d, chi.n
    minus = H.minus_one()
    for X in combinations(range(1, n + 1), d - 1):
        for Y in combinations(range(1, n + 1), d + 1):
            terms = []
            for k, y in enumerate(Y, start=1):
                rest = Y[: k - 1] + Y[k:]
                t = H.mul(chi(*X, y), chi(*rest))
                terms.append(H.mul(minus, t) if k % 2 else t)
            if not H.zero_in(terms):
                return Report(name, False, witness={"X": list(X), "Y": list(Y), "terms": terms})
    return Report(name, True)


# --- morphisms ----------------------------------------------------------------------------------


@dataclass(frozen=True)
class Morphism:
    name: str
    source: Hyperfield
    target: Hyperfield
    fn: Callable[[Any], Any]

    def __call__(self, x: Any) -> Any:
        return self.fn(x)


def phase_of(z: complex) -> Fraction | None:
    """z / |z| as an exact angle (multiple of pi) of the float argument."""
    if z == 0:
        return None
    return Fraction(cmath.phase(z) / math.pi) % 2


def morphism(name: str, source: Hyperfield | None = None) -> Morphism:
    """Registered morphisms: ``forget_sign`` (sign -> Krasner), ``support``
    (any hyperfield -> Krasner), ``phase`` (complex -> phase) and
    ``inflation`` (H -> canonical inflation of H, the identity on elements)."""
    if name == "forget_sign":
        return Morphism(name, sign_hyperfield(), krasner(), lambda x: 0 if x == 0 else 1)
    if name == "support":
        src = source or sign_hyperfield()
        return Morphism(name, src, krasner(), lambda x: 0 if x == src.zero else 1)
    if name == "phase":
        return Morphism(name, complex_field(), phase(), phase_of)
    if name == "inflation":
        if source is None:
            raise ValueError("inflation needs a source hyperfield")
        return Morphism(name, source, inflated(source), lambda x: x)
    raise ValueError(f"unknown morphism {name!r}")


def pushforward(chi: HSignMap, phi: Morphism) -> HSignMap:
    return HSignMap(chi.d, chi.n, phi.target, {s: phi(v) for s, v in chi.items()})
