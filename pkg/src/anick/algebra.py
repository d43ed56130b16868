"""Finite-type graded algebras given by monomial presentations.

Two flavors are supported:

* ``free``: the tensor algebra T(V); a monomial is a word, stored as a tuple
  of generator indices.
* ``commutative``: free graded-commutative algebra with optional truncation
  exponents; a monomial is a tuple of exponents, one per generator. Odd
  generators always have exponent at most 1.

Elements are sparse dicts from monomials to scalars. Tensor powers A^{⊗k}
live in :class:`Tensor`, keyed by k-tuples of monomials; the empty word / zero
exponent vector stands for the unit 1.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

from .errors import DegreeOutOfCap, InvalidDerivation, MixedPresentation, NotACycle

FREE = "free"
COMMUTATIVE = "commutative"


@dataclass(frozen=True)
class GeneratorSpec:
    name: str
    degree: int
    truncation: Optional[int] = None

    def __post_init__(self):
        if self.degree < 1:
            raise ValueError(f"generator {self.name!r} must have positive degree")
        if self.truncation is not None and self.truncation < 2:
            raise ValueError(f"truncation of {self.name!r} must be at least 2")


class AlgebraPresentation:
    """Generators, flavor, coefficient ring and degree cap.

    Generators must be listed in non-decreasing degree order.
    """

    def __init__(self, flavor, generators, cap, ring):
        if flavor not in (FREE, COMMUTATIVE):
            raise ValueError(f"unknown flavor {flavor!r}")
        gens = tuple(generators)
        names = [g.name for g in gens]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate generator names in {names}")
        for g, h in zip(gens, gens[1:]):
            if h.degree < g.degree:
                raise ValueError("generators must be ordered by degree")
        if flavor == FREE and any(g.truncation is not None for g in gens):
            raise ValueError("truncation exponents need the commutative flavor")
        self.flavor = flavor
        self.generators = gens
        self.cap = cap
        self.ring = ring
        self.names = names
        self.degrees = [g.degree for g in gens]
        self._gen_index = {n: i for i, n in enumerate(names)}
        if flavor == COMMUTATIVE:
            self.truncations = [
                2 if g.degree % 2 else g.truncation for g in gens
            ]
        else:
            self.truncations = [None] * len(gens)
        self._basis = {}
        self._index = {}
        self._mul = {}
        self._tbasis = {}
        self._tindex = {}

    def __repr__(self):
        gens = ", ".join(f"{g.name}:{g.degree}" for g in self.generators)
        return f"AlgebraPresentation({self.flavor}, [{gens}], cap={self.cap}, {self.ring})"

    @property
    def q(self) -> int:
        """Minimal generator degree (the algebra is q-reduced)."""
        return min(self.degrees, default=self.cap + 1)

    def same_shape(self, other) -> bool:
        return (
            self.flavor == other.flavor
            and self.generators == other.generators
            and self.ring == other.ring
        )

    def gen_index(self, name: str) -> int:
        return self._gen_index[name]

    # -- monomials ---------------------------------------------------------

    @property
    def one(self):
        return () if self.flavor == FREE else (0,) * len(self.generators)

    def gen_mono(self, i: int):
        if self.flavor == FREE:
            return (i,)
        e = [0] * len(self.generators)
        e[i] = 1
        return tuple(e)

    def word(self, m):
        """The monomial as a left-to-right word of generator indices."""
        if self.flavor == FREE:
            return m
        return tuple(i for i, e in enumerate(m) for _ in range(e))

    def mono_degree(self, m) -> int:
        if self.flavor == FREE:
            return sum(self.degrees[i] for i in m)
        return sum(e * d for e, d in zip(m, self.degrees))

    def is_one(self, m) -> bool:
        return m == self.one

    def split_first(self, m):
        """m = g · rest with g the first letter; coefficient is exactly +1."""
        if self.flavor == FREE:
            return m[0], m[1:]
        i = next(j for j, e in enumerate(m) if e)
        rest = list(m)
        rest[i] -= 1
        return i, tuple(rest)

    def render_mono(self, m) -> str:
        if self.is_one(m):
            return "1"
        if self.flavor == FREE:
            return ".".join(self.names[i] for i in m)
        parts = []
        for i, e in enumerate(m):
            if e == 1:
                parts.append(self.names[i])
            elif e > 1:
                parts.append(f"{self.names[i]}^{e}")
        return "*".join(parts)

    def check_degree(self, n: int):
        if n > self.cap:
            raise DegreeOutOfCap(n, self.cap)

    def basis(self, n: int):
        """Monomial basis of A_n in the fixed order (ascending as words)."""
        self.check_degree(n)
        if n in self._basis:
            return self._basis[n]
        if n < 0:
            out = []
        elif n == 0:
            out = [self.one]
        elif self.flavor == FREE:
            out = []
            for i, d in enumerate(self.degrees):
                if d <= n:
                    out.extend((i,) + w for w in self.basis(n - d))
            out.sort()
        else:
            out = [
                tuple(e)
                for e in _exponent_vectors(self.degrees, self.truncations, n)
            ]
            out.sort(key=self.word)
        self._basis[n] = out
        self._index[n] = {m: i for i, m in enumerate(out)}
        return out

    def index(self, n: int):
        self.basis(n)
        return self._index[n]

    def dim(self, n: int) -> int:
        return len(self.basis(n))

    def mono_mul(self, a, b):
        """Product of two monomials as (sign, monomial), or None if zero."""
        key = (a, b)
        if key in self._mul:
            return self._mul[key]
        if self.flavor == FREE:
            out = (1, a + b)
        else:
            out = None
            prod = []
            for e, f, t in zip(a, b, self.truncations):
                if t is not None and e + f >= t:
                    break
                prod.append(e + f)
            else:
                parity = 0
                # generator j of b moves left past generator i > j of a
                odd_a = [(e * d) % 2 for e, d in zip(a, self.degrees)]
                odd_b = [(f * d) % 2 for f, d in zip(b, self.degrees)]
                suffix = 0
                for j in range(len(a) - 1, -1, -1):
                    parity ^= odd_b[j] & suffix
                    suffix ^= odd_a[j]
                out = (-1 if parity else 1, tuple(prod))
        self._mul[key] = out
        return out

    # -- tensor powers -----------------------------------------------------

    def tensor_basis(self, k: int, n: int, reduced: bool = True):
        """Basis of (I^{⊗k})_n (or (A^{⊗k})_n when ``reduced`` is False)."""
        key = (k, n, reduced)
        if key in self._tbasis:
            return self._tbasis[key]
        lo = 1 if reduced else 0
        out = []
        if k == 1:
            if n >= lo:
                out = [(m,) for m in self.basis(n)]
        else:
            for d in range(lo, n + 1 - lo * (k - 1)):
                for m in self.basis(d):
                    for rest in self.tensor_basis(k - 1, n - d, reduced):
                        out.append((m,) + rest)
        self._tbasis[key] = out
        self._tindex[key] = {t: i for i, t in enumerate(out)}
        return out

    def tensor_index(self, k: int, n: int, reduced: bool = True):
        self.tensor_basis(k, n, reduced)
        return self._tindex[(k, n, reduced)]

    # -- constructors ------------------------------------------------------

    def zero(self, degree: int) -> "Element":
        return Element(self, degree, {})

    def unit(self) -> "Element":
        return Element(self, 0, {self.one: 1})

    def gen(self, name_or_index) -> "Element":
        i = name_or_index if isinstance(name_or_index, int) else self.gen_index(name_or_index)
        return Element(self, self.degrees[i], {self.gen_mono(i): 1})

    def mono(self, m, coeff=1) -> "Element":
        return Element(self, self.mono_degree(m), {m: coeff})

    def from_vector(self, n: int, v) -> "Element":
        return Element(self, n, {m: c for m, c in zip(self.basis(n), v) if c})

    def tensor_zero(self, k: int, degree: int) -> "Tensor":
        return Tensor(self, k, degree, {})

    def tensor_from_vector(self, k, n, v, reduced=True) -> "Tensor":
        return Tensor(self, k, n, {t: c for t, c in zip(self.tensor_basis(k, n, reduced), v) if c})

    def sub_presentation(self, k: int) -> "AlgebraPresentation":
        """The subalgebra on the first k generators, as its own presentation."""
        return AlgebraPresentation(self.flavor, self.generators[:k], self.cap, self.ring)

    def with_generator(self, spec: GeneratorSpec) -> "AlgebraPresentation":
        if self.generators and spec.degree < self.degrees[-1]:
            raise ValueError("adjoined generator must not lower the degree order")
        return AlgebraPresentation(self.flavor, self.generators + (spec,), self.cap, self.ring)

    def with_ring(self, ring) -> "AlgebraPresentation":
        return AlgebraPresentation(self.flavor, self.generators, self.cap, ring)


def _exponent_vectors(degrees, truncations, n):
    def rec(i, remaining):
        if i == len(degrees):
            if remaining == 0:
                yield ()
            return
        d, t = degrees[i], truncations[i]
        top = remaining // d
        if t is not None:
            top = min(top, t - 1)
        for e in range(top + 1):
            for rest in rec(i + 1, remaining - e * d):
                yield (e,) + rest

    yield from rec(0, n)


def hilbert_series(degrees, truncations, flavor, cap):
    """Coefficients of the Hilbert series up to ``cap`` by power-series algebra.

    Independent of basis enumeration: free algebras use 1/(1 - Σ t^{d_i}),
    commutative ones the product of (1 - t^{d e})/(1 - t^d) factors.
    """
    if flavor == FREE:
        c = [0] * (cap + 1)
        c[0] = 1
        for n in range(1, cap + 1):
            c[n] = sum(c[n - d] for d in degrees if d <= n)
        return c
    series = [1] + [0] * cap
    for d, t in zip(degrees, truncations):
        factor = [0] * (cap + 1)
        k = 0
        while k * d <= cap and (t is None or k < t):
            factor[k * d] = 1
            k += 1
        series = [
            sum(series[i] * factor[n - i] for i in range(n + 1)) for n in range(cap + 1)
        ]
    return series


# --------------------------------------------------------------------------
# elements


class _Linear:
    __slots__ = ("alg", "degree", "terms")

    def _norm_terms(self, terms):
        ring = self.alg.ring
        out = {}
        for k, c in terms.items():
            c = ring.norm(c)
            if c:
                out[k] = c
        return out

    def _check(self, other):
        if not isinstance(other, type(self)) or other.alg is not self.alg:
            if isinstance(other, _Linear) and other.alg.same_shape(self.alg):
                return
            raise MixedPresentation("operands belong to different presentations")

    def _combine(self, other, sign):
        self._check(other)
        if other.terms and self.terms and other.degree != self.degree:
            raise ValueError(f"adding degree {self.degree} to degree {other.degree}")
        terms = dict(self.terms)
        for k, c in other.terms.items():
            terms[k] = terms.get(k, 0) + sign * c
        degree = self.degree if self.terms or not other.terms else other.degree
        return self._new(degree, terms)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return self._new(self.degree, {k: -c for k, c in self.terms.items()})

    def scale(self, c):
        return self._new(self.degree, {k: c * v for k, v in self.terms.items()})

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, _Linear):
            return NotImplemented
        return self.terms == other.terms and (not self.terms or self.degree == other.degree)

    def __hash__(self):
        return hash((self.degree, frozenset(self.terms.items())))

    def divisible_by(self, c) -> bool:
        ring = self.alg.ring
        vc = ring.valuation(c)
        return all(ring.valuation(v) >= vc for v in self.terms.values())

    def divide(self, c):
        ring = self.alg.ring
        return self._new(self.degree, {k: ring.div(v, c) for k, v in self.terms.items()})


class Element(_Linear):
    """A homogeneous element of an algebra presentation."""

    __slots__ = ()

    def __init__(self, alg, degree, terms):
        self.alg = alg
        self.degree = degree
        self.terms = self._norm_terms(terms)

    def _new(self, degree, terms):
        return Element(self.alg, degree, terms)

    def __mul__(self, other):
        if isinstance(other, Element):
            return multiply(self, other)
        return self.scale(other)

    def __rmul__(self, c):
        return self.scale(c)

    def to_vector(self, n: Optional[int] = None):
        n = self.degree if n is None else n
        idx = self.alg.index(n)
        v = [0] * len(idx)
        for m, c in self.terms.items():
            v[idx[m]] = c
        return v

    def render(self) -> str:
        return render_terms(
            [(c, self.alg.render_mono(m)) for m, c in sorted(self.terms.items(), key=lambda kv: self.alg.word(kv[0]))],
            self.alg.ring,
        )

    def __repr__(self):
        return f"<{self.render()} in degree {self.degree}>"


class Tensor(_Linear):
    """A homogeneous element of A^{⊗k}."""

    __slots__ = ("k",)

    def __init__(self, alg, k, degree, terms):
        self.alg = alg
        self.k = k
        self.degree = degree
        self.terms = self._norm_terms(terms)

    def _new(self, degree, terms):
        return Tensor(self.alg, self.k, degree, terms)

    def _check(self, other):
        super()._check(other)
        if other.k != self.k:
            raise MixedPresentation(f"tensor powers {self.k} and {other.k} differ")

    def __mul__(self, other):
        if isinstance(other, Tensor):
            return tensor_multiply(self, other)
        return self.scale(other)

    def __rmul__(self, c):
        return self.scale(c)

    def to_vector(self, n=None, reduced=True):
        n = self.degree if n is None else n
        idx = self.alg.tensor_index(self.k, n, reduced)
        v = [0] * len(idx)
        for t, c in self.terms.items():
            if t not in idx:
                raise ValueError(f"term {t} is not in the {'reduced ' if reduced else ''}tensor basis")
            v[idx[t]] = c
        return v

    def is_reduced(self) -> bool:
        one = self.alg.one
        return all(one not in t for t in self.terms)

    def render(self) -> str:
        alg = self.alg
        items = sorted(self.terms.items(), key=lambda kv: tuple(alg.word(m) for m in kv[0]))
        return render_terms(
            [(c, " (x) ".join(alg.render_mono(m) for m in t)) for t, c in items],
            alg.ring,
        )

    def __repr__(self):
        return f"<{self.render()} in degree {self.degree}>"


def render_terms(items, ring) -> str:
    from .linalg import render_scalar

    if not items:
        return "0"
    out = []
    for c, body in items:
        c = ring.norm(c)
        if ring.kind == "modp":
            neg = False
            mag = str(c)
        else:
            neg = c < 0
            mag = render_scalar(-c if neg else c)
        if body == "1":
            term = mag
        elif mag == "1":
            term = body
        else:
            term = f"{mag}*{body}"
        if not out:
            out.append(("-" if neg else "") + term)
        else:
            out.append((" - " if neg else " + ") + term)
    return "".join(out)


def multiply(a: Element, b: Element) -> Element:
    """Bilinear product in the presentation, with Koszul signs where needed."""
    if not isinstance(a, Element) or not isinstance(b, Element):
        raise TypeError("multiply expects two Elements")
    a._check(b)
    alg = a.alg
    terms = {}
    for m1, c1 in a.terms.items():
        for m2, c2 in b.terms.items():
            r = alg.mono_mul(m1, m2)
            if r is None:
                continue
            s, m = r
            terms[m] = terms.get(m, 0) + s * c1 * c2
    return Element(alg, a.degree + b.degree, terms)


def koszul_tensor_sign(alg, left, right) -> int:
    """Sign of (l_1⊗...⊗l_k)(r_1⊗...⊗r_k) → ± l_1r_1⊗...⊗l_kr_k."""
    parity = 0
    odd_l = [alg.mono_degree(m) % 2 for m in left]
    odd_r = [alg.mono_degree(m) % 2 for m in right]
    for j in range(len(right)):
        if odd_r[j]:
            for i in range(j + 1, len(left)):
                parity ^= odd_l[i]
    return -1 if parity else 1


def tensor_multiply(x: Tensor, y: Tensor) -> Tensor:
    x._check(y)
    alg = x.alg
    terms = {}
    for t1, c1 in x.terms.items():
        for t2, c2 in y.terms.items():
            sign = koszul_tensor_sign(alg, t1, t2)
            coeff = sign * c1 * c2
            out = []
            for m1, m2 in zip(t1, t2):
                r = alg.mono_mul(m1, m2)
                if r is None:
                    break
                coeff *= r[0]
                out.append(r[1])
            else:
                key = tuple(out)
                terms[key] = terms.get(key, 0) + coeff
    return Tensor(alg, x.k, x.degree + y.degree, terms)


def tensor(*elements: Element) -> Tensor:
    """a_1 ⊗ ... ⊗ a_k of homogeneous elements."""
    alg = elements[0].alg
    terms = {(): 1}
    for e in elements:
        new = {}
        for t, c in terms.items():
            for m, d in e.terms.items():
                new[t + (m,)] = new.get(t + (m,), 0) + c * d
        terms = new
    return Tensor(alg, len(elements), sum(e.degree for e in elements), terms)


def tensor_factor_element(alg, m) -> Element:
    return Element(alg, alg.mono_degree(m), {m: 1})


# --------------------------------------------------------------------------
# derivations


class Derivation:
    """A degree −1 derivation given by its values on generators.

    Extension to monomials follows the graded Leibniz rule
    ∂(ab) = ∂a·b + (−1)^{|a|} a·∂b.
    """

    def __init__(self, alg: AlgebraPresentation, values: dict, validate: bool = True):
        self.alg = alg
        vals = {}
        for i, g in enumerate(alg.generators):
            v = values.get(g.name, values.get(i))
            if v is None:
                v = alg.zero(g.degree - 1)
            if not isinstance(v, Element) or not v.alg.same_shape(alg):
                raise MixedPresentation(f"value for {g.name} is not an element of the algebra")
            if v.terms and v.degree != g.degree - 1:
                raise InvalidDerivation(f"∂{g.name} has degree {v.degree}, expected {g.degree - 1}")
            if alg.one in v.terms:
                raise InvalidDerivation(f"∂{g.name} has a constant term")
            vals[i] = Element(alg, g.degree - 1, v.terms)
        self.values = vals
        self._memo = {}
        if validate:
            for i, g in enumerate(alg.generators):
                if self.apply(vals[i]):
                    raise InvalidDerivation(f"∂∂{g.name} ≠ 0")

    def value(self, name_or_index) -> Element:
        i = name_or_index if isinstance(name_or_index, int) else self.alg.gen_index(name_or_index)
        return self.values[i]

    def apply_mono(self, m) -> Element:
        if m in self._memo:
            return self._memo[m]
        alg = self.alg
        deg = alg.mono_degree(m)
        if alg.is_one(m):
            out = alg.zero(-1)
        else:
            i, rest = alg.split_first(m)
            g = alg.gen(i)
            restel = alg.mono(rest)
            out = multiply(self.values[i], restel)
            if not alg.is_one(rest):
                tail = self.apply_mono(rest)
                if tail:
                    sign = -1 if alg.degrees[i] % 2 else 1
                    out = out + multiply(g, tail).scale(sign)
            out = Element(alg, deg - 1, out.terms)
        self._memo[m] = out
        return out

    def apply(self, a: Element) -> Element:
        if not a.alg.same_shape(self.alg):
            raise MixedPresentation("element and derivation live in different presentations")
        terms = {}
        for m, c in a.terms.items():
            for m2, c2 in self.apply_mono(m).terms.items():
                terms[m2] = terms.get(m2, 0) + c * c2
        return Element(self.alg, a.degree - 1, terms)

    def apply_tensor(self, t: Tensor) -> Tensor:
        """Tensor differential Σ ± a_1⊗..∂a_i..⊗a_k."""
        alg = self.alg
        terms = {}
        for key, c in t.terms.items():
            sign = 1
            for i, m in enumerate(key):
                dm = self.apply_mono(m)
                for m2, c2 in dm.terms.items():
                    k2 = key[:i] + (m2,) + key[i + 1:]
                    terms[k2] = terms.get(k2, 0) + sign * c * c2
                if alg.mono_degree(m) % 2:
                    sign = -sign
        return Tensor(alg, t.k, t.degree - 1, terms)

    def matrix(self, n: int):
        """∂_n : A_n → A_{n−1} as a matrix in the monomial bases."""
        alg = self.alg
        src = alg.basis(n)
        tgt_idx = alg.index(n - 1) if n >= 1 else {}
        M = [[0] * len(src) for _ in range(len(tgt_idx))]
        for j, m in enumerate(src):
            for m2, c in self.apply_mono(m).terms.items():
                M[tgt_idx[m2]][j] = c
        return M

    def tensor_matrix(self, k: int, n: int, reduced: bool = True):
        alg = self.alg
        src = alg.tensor_basis(k, n, reduced)
        tgt_idx = alg.tensor_index(k, n - 1, reduced)
        M = [[0] * len(src) for _ in range(len(tgt_idx))]
        for j, t in enumerate(src):
            img = self.apply_tensor(Tensor(alg, k, n, {t: 1}))
            for t2, c in img.terms.items():
                M[tgt_idx[t2]][j] = c
        return M


def derivation_apply(d: Derivation, a: Element) -> Element:
    return d.apply(a)


def enumerate_basis(P: AlgebraPresentation, n: int):
    return P.basis(n)


def adjoin_generator(alg: AlgebraPresentation, d: Derivation, x: GeneratorSpec, b: Element):
    """Free monogenic extension (A ∐ T(x), ∂x = b).

    Returns the enlarged presentation and its derivation; raises NotACycle if
    b is not a cycle of degree deg x − 1.
    """
    if b.terms and b.degree != x.degree - 1:
        raise NotACycle(f"b has degree {b.degree}, expected {x.degree - 1}")
    if d.apply(b):
        raise NotACycle("∂b ≠ 0")
    if alg.flavor != FREE:
        raise ValueError("free monogenic extensions need the free flavor")
    new = alg.with_generator(x)
    values = {i: embed(v, new) for i, v in d.values.items()}
    values[len(alg.generators)] = embed(b, new)
    return new, Derivation(new, values)


def embed(a, target: AlgebraPresentation):
    """Re-home an element (or tensor) of a sub-presentation in ``target``."""
    src = a.alg
    if src is target:
        return a
    if src.generators != target.generators[: len(src.generators)]:
        raise MixedPresentation("source is not a sub-presentation of target")
    pad = len(target.generators) - len(src.generators)

    def conv(m):
        return m if target.flavor == FREE else m + (0,) * pad

    if isinstance(a, Tensor):
        return Tensor(target, a.k, a.degree, {tuple(conv(m) for m in t): c for t, c in a.terms.items()})
    return Element(target, a.degree, {conv(m): c for m, c in a.terms.items()})


def restrict(a, target: AlgebraPresentation):
    """Inverse of :func:`embed`; fails if a uses generators outside ``target``."""
    src = a.alg
    if src is target:
        return a
    k = len(target.generators)

    def conv(m):
        if target.flavor == FREE:
            if any(i >= k for i in m):
                raise MixedPresentation("element involves generators outside the subalgebra")
            return m
        if any(m[k:]):
            raise MixedPresentation("element involves generators outside the subalgebra")
        return m[:k]

    if isinstance(a, Tensor):
        return Tensor(target, a.k, a.degree, {tuple(conv(m) for m in t): c for t, c in a.terms.items()})
    return Element(target, a.degree, {conv(m): c for m, c in a.terms.items()})


def all_monomials(alg: AlgebraPresentation, upto: int):
    return list(itertools.chain.from_iterable(alg.basis(n) for n in range(upto + 1)))
