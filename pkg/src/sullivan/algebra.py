"""Free graded-commutative algebras ΛV = S(V^even) ⊗ E(V^odd) over Q.

A monomial is a tuple of exponents aligned with the algebra's generators,
which are kept sorted by ``(degree, name)``.  Odd generators carry exponent
0 or 1.  Multiplying monomials merges exponent tuples and picks up the
Koszul sign of reordering the odd factors into canonical position.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence

NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")

Monomial = tuple  # exponent tuple over GradedAlgebra.generators


class ForeignGeneratorError(ValueError):
    """An element or monomial does not belong to the algebra it is used in."""


@dataclass(frozen=True)
class Generator:
    name: str
    degree: int

    def __post_init__(self):
        if not isinstance(self.name, str) or not NAME_RE.match(self.name):
            raise ValueError(f"invalid generator name {self.name!r}")
        if not isinstance(self.degree, int) or self.degree < 1:
            raise ValueError(f"generator {self.name} must have positive degree, got {self.degree!r}")

    @property
    def is_odd(self) -> bool:
        return self.degree % 2 == 1

    @property
    def sort_key(self):
        return (self.degree, self.name)

    def __str__(self):
        return self.name


def _as_generator(g) -> Generator:
    if isinstance(g, Generator):
        return g
    name, degree = g
    return Generator(name, degree)


class GradedAlgebra:
    """The free graded-commutative algebra on a finite set of generators.

    Two algebras on the same generators compare equal, so elements built in
    either can be mixed freely.
    """

    def __init__(self, generators: Iterable):
        gens = sorted((_as_generator(g) for g in generators), key=lambda g: g.sort_key)
        names = [g.name for g in gens]
        if len(set(names)) != len(names):
            dup = sorted({n for n in names if names.count(n) > 1})
            raise ValueError(f"duplicate generator names: {', '.join(dup)}")
        self.generators: tuple[Generator, ...] = tuple(gens)
        self.index: dict[str, int] = {g.name: i for i, g in enumerate(gens)}
        self.degrees: tuple[int, ...] = tuple(g.degree for g in gens)
        self._odd = tuple(i for i, g in enumerate(gens) if g.is_odd)
        self._basis_cache: dict[int, list[Monomial]] = {}

    def __eq__(self, other):
        return isinstance(other, GradedAlgebra) and self.generators == other.generators

    def __hash__(self):
        return hash(self.generators)

    def __repr__(self):
        inner = ", ".join(f"{g.name}:{g.degree}" for g in self.generators)
        return f"GradedAlgebra({inner})"

    def __len__(self):
        return len(self.generators)

    def __contains__(self, name):
        return name in self.index

    def generator(self, name: str) -> Generator:
        try:
            return self.generators[self.index[name]]
        except KeyError:
            raise ForeignGeneratorError(f"unknown generator {name!r}") from None

    # -- monomials ---------------------------------------------------------

    @cached_property
    def unit(self) -> Monomial:
        return (0,) * len(self.generators)

    def mono_degree(self, m: Monomial) -> int:
        return sum(e * d for e, d in zip(m, self.degrees))

    def mono_from_factors(self, factors: Mapping[str, int]) -> Monomial:
        exps = [0] * len(self.generators)
        for name, e in factors.items():
            i = self.index.get(name)
            if i is None:
                raise ForeignGeneratorError(f"unknown generator {name!r}")
            if e < 0:
                raise ValueError("negative exponent")
            if e > 1 and self.generators[i].is_odd:
                raise ValueError(f"odd generator {name} cannot appear with exponent {e}")
            exps[i] = e
        return tuple(exps)

    def mono_factors(self, m: Monomial) -> list[tuple[Generator, int]]:
        return [(g, e) for g, e in zip(self.generators, m) if e]

    def _check_mono(self, m: Monomial):
        if len(m) != len(self.generators):
            raise ForeignGeneratorError("monomial does not belong to this algebra")

    def mono_mul(self, m1: Monomial, m2: Monomial) -> tuple[int, Monomial | None]:
        """Product of two monomials as ``(sign, monomial)``.

        The monomial is None when an odd generator repeats (the product is
        zero); the sign then is 0.
        """
        self._check_mono(m1)
        self._check_mono(m2)
        return self._mono_mul(m1, m2)

    def _mono_mul(self, m1, m2):
        swaps = 0
        above = 0  # odd factors of m1 with larger index than the current one
        for i in reversed(self._odd):
            if m2[i]:
                if m1[i]:
                    return 0, None
                swaps += above
            if m1[i]:
                above += 1
        return (-1 if swaps & 1 else 1), tuple(a + b for a, b in zip(m1, m2))

    def mono_key(self, m: Monomial):
        """Sort key: total degree, then lexicographically larger exponents first."""
        return (self.mono_degree(m), tuple(-e for e in m))

    def basis_of_degree(self, d: int) -> list[Monomial]:
        """All monomials of total degree ``d`` in canonical order."""
        if d < 0:
            raise ValueError("degree must be nonnegative")
        cached = self._basis_cache.get(d)
        if cached is not None:
            return cached
        n = len(self.generators)
        out: list[Monomial] = []
        exps = [0] * n

        def rec(i, remaining):
            if remaining == 0:
                out.append(tuple(exps))
                return
            if i == n:
                return
            deg = self.degrees[i]
            top = 1 if deg % 2 else remaining // deg
            top = min(top, remaining // deg)
            for e in range(top, -1, -1):
                exps[i] = e
                rec(i + 1, remaining - e * deg)
            exps[i] = 0

        rec(0, d)
        self._basis_cache[d] = out
        return out

    # -- elements ----------------------------------------------------------

    def zero(self) -> Element:
        return Element(self, {})

    def one(self) -> Element:
        return Element(self, {self.unit: Fraction(1)})

    def scalar(self, q) -> Element:
        return Element(self, {self.unit: Fraction(q)})

    def gen(self, name: str) -> Element:
        i = self.index.get(name)
        if i is None:
            raise ForeignGeneratorError(f"unknown generator {name!r}")
        m = [0] * len(self.generators)
        m[i] = 1
        return Element(self, {tuple(m): Fraction(1)})

    def gens(self, *names: str) -> list[Element]:
        return [self.gen(n) for n in names]

    def monomial(self, m: Monomial, coeff=1) -> Element:
        self._check_mono(m)
        return Element(self, {tuple(m): Fraction(coeff)})

    def element_from_vector(self, degree: int, vec: Sequence) -> Element:
        basis = self.basis_of_degree(degree)
        if len(vec) != len(basis):
            raise ValueError("vector length does not match basis size")
        return Element(self, {m: Fraction(c) for m, c in zip(basis, vec) if c})

    def coerce(self, e: Element) -> Element:
        """Re-home ``e`` into this algebra by generator name."""
        if e.algebra == self:
            return e if e.algebra is self else Element(self, e.terms)
        images = []
        for g in e.algebra.generators:
            i = self.index.get(g.name)
            if i is not None and self.generators[i] == g:
                images.append(self.gen(g.name))
            elif e.involves(g.name):
                raise ForeignGeneratorError(f"generator {g.name} is not in {self!r}")
            else:
                images.append(self.zero())
        return evaluate(e, images, self)


class Element:
    """A rational linear combination of monomials in a :class:`GradedAlgebra`."""

    __slots__ = ("algebra", "terms", "_hash")

    def __init__(self, algebra: GradedAlgebra, terms: Mapping[Monomial, Fraction] | None = None):
        self.algebra = algebra
        self.terms: dict[Monomial, Fraction] = {m: Fraction(c) for m, c in (terms or {}).items() if c}
        self._hash = None

    # -- queries -------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def degrees(self) -> set[int]:
        md = self.algebra.mono_degree
        return {md(m) for m in self.terms}

    def homogeneous_degree(self) -> int | None:
        """The common degree of all terms; None for zero or mixed elements."""
        ds = self.degrees()
        return ds.pop() if len(ds) == 1 else None

    def is_homogeneous(self, degree: int | None = None) -> bool:
        """True if all terms share a degree (equal to ``degree`` if given).

        The zero element is homogeneous of every degree.
        """
        ds = self.degrees()
        if not ds:
            return True
        return len(ds) == 1 and (degree is None or degree in ds)

    def homogeneous_part(self, d: int) -> Element:
        md = self.algebra.mono_degree
        return Element(self.algebra, {m: c for m, c in self.terms.items() if md(m) == d})

    def coefficient(self, m: Monomial) -> Fraction:
        return self.terms.get(tuple(m), Fraction(0))

    def linear_coefficient(self, name: str) -> Fraction:
        i = self.algebra.index[name]
        m = [0] * len(self.algebra.generators)
        m[i] = 1
        return self.terms.get(tuple(m), Fraction(0))

    def involves(self, name: str) -> bool:
        i = self.algebra.index.get(name)
        if i is None:
            return False
        return any(m[i] for m in self.terms)

    def support(self) -> set[str]:
        gens = self.algebra.generators
        return {gens[i].name for m in self.terms for i, e in enumerate(m) if e}

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        key = self.algebra.mono_key
        return sorted(self.terms.items(), key=lambda t: key(t[0]))

    def to_vector(self, degree: int) -> list[Fraction]:
        basis = self.algebra.basis_of_degree(degree)
        if not self.is_homogeneous(degree):
            raise ValueError(f"element is not homogeneous of degree {degree}")
        return [self.terms.get(m, Fraction(0)) for m in basis]

    # -- arithmetic ------------------------------------------------------------

    def _other(self, other) -> Element:
        if isinstance(other, Element):
            if other.algebra != self.algebra:
                raise ForeignGeneratorError("elements belong to different algebras")
            return other
        if isinstance(other, (int, Fraction)):
            return self.algebra.scalar(other)
        return NotImplemented

    def __add__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        terms = dict(self.terms)
        for m, c in other.terms.items():
            v = terms.get(m, 0) + c
            if v:
                terms[m] = v
            else:
                terms.pop(m, None)
        return Element(self.algebra, terms)

    __radd__ = __add__

    def __neg__(self):
        return Element(self.algebra, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, q) -> Element:
        q = Fraction(q)
        if not q:
            return self.algebra.zero()
        return Element(self.algebra, {m: c * q for m, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._other(other)
        if other is NotImplemented:
            return other
        mul = self.algebra._mono_mul
        terms: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                sign, m = mul(m1, m2)
                if m is None:
                    continue
                v = terms.get(m, 0) + (c1 * c2 if sign > 0 else -(c1 * c2))
                if v:
                    terms[m] = v
                else:
                    terms.pop(m, None)
        return Element(self.algebra, terms)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __truediv__(self, q):
        return self.scale(1 / Fraction(q))

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = self.algebra.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.terms == self.algebra.scalar(other).terms
        if not isinstance(other, Element):
            return NotImplemented
        return self.algebra == other.algebra and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.algebra, frozenset(self.terms.items())))
        return self._hash

    def __str__(self):
        from sullivan.expr_io import print_element

        return print_element(self)

    def __repr__(self):
        return f"Element({self})"


def evaluate(e: Element, images: Sequence[Element], target: GradedAlgebra) -> Element:
    """Apply the algebra map sending generator ``i`` of ``e.algebra`` to ``images[i]``.

    Factors are multiplied in canonical order, so Koszul signs of the images
    come out right for any homogeneous images.
    """
    src = e.algebra
    if len(images) != len(src.generators):
        raise ValueError("one image per generator is required")
    powers: dict[tuple[int, int], Element] = {}

    def power(i, k):
        key = (i, k)
        p = powers.get(key)
        if p is None:
            p = images[i] if k == 1 else power(i, k - 1) * images[i]
            powers[key] = p
        return p

    acc: dict[Monomial, Fraction] = {}
    one = target.one()
    for m, c in e.terms.items():
        term = one
        for i, k in enumerate(m):
            if k:
                term = term * power(i, k)
                if not term:
                    break
        for mm, cc in term.terms.items():
            v = acc.get(mm, 0) + c * cc
            if v:
                acc[mm] = v
            else:
                acc.pop(mm, None)
    return Element(target, acc)


def substitute(e: Element, assignment: Mapping) -> Element:
    """Algebra endomorphism extending ``assignment`` (unassigned generators fixed).

    Keys may be generator names or :class:`Generator` objects.  Every image
    must be homogeneous of its generator's degree.
    """
    alg = e.algebra
    images = list(alg.gen(g.name) for g in alg.generators)
    for key, img in assignment.items():
        name = key.name if isinstance(key, Generator) else key
        g = alg.generator(name)
        if isinstance(img, (int, Fraction)):
            img = alg.scalar(img)
        img = alg.coerce(img)
        if not img.is_homogeneous(g.degree):
            raise ValueError(f"image of {name} is not homogeneous of degree {g.degree}")
        images[alg.index[name]] = img
    return evaluate(e, images, alg)


def basis_of_degree(generators: Iterable, d: int) -> list[Monomial]:
    return GradedAlgebra(generators).basis_of_degree(d)


def mono_mul(algebra: GradedAlgebra, m1: Monomial, m2: Monomial):
    return algebra.mono_mul(m1, m2)


def mul(e1: Element, e2: Element) -> Element:
    return e1 * e2


def iter_monomials_up_to(algebra: GradedAlgebra, d: int) -> Iterator[Monomial]:
    for k in range(d + 1):
        yield from algebra.basis_of_degree(k)
