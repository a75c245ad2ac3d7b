"""Free commutative differential graded algebras, their cohomology and morphisms."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from sullivan import linalg
from sullivan.algebra import Element, ForeignGeneratorError, Generator, GradedAlgebra, evaluate
from sullivan.linalg import RowSpace, SparseMatrix
from sullivan.report import CheckReport


class DifferentialError(ValueError):
    """A differential assignment is malformed or does not square to zero."""


@dataclass(frozen=True)
class BettiTable:
    """Cohomology dimensions in degrees ``0..bound``."""

    dims: tuple[int, ...]

    @property
    def bound(self) -> int:
        return len(self.dims) - 1

    def __getitem__(self, d: int) -> int:
        if d < 0 or d > self.bound:
            raise KeyError(f"degree {d} outside computed range 0..{self.bound}")
        return self.dims[d]

    def __iter__(self):
        return iter(self.dims)

    def __len__(self):
        return len(self.dims)

    def truncate(self, bound: int) -> BettiTable:
        if bound > self.bound:
            raise ValueError(f"table only computed up to degree {self.bound}")
        return BettiTable(self.dims[: bound + 1])

    def total(self) -> int:
        return sum(self.dims)

    def euler(self) -> int:
        return sum(-v if d % 2 else v for d, v in enumerate(self.dims))

    def as_dict(self) -> dict[str, int]:
        return {str(d): v for d, v in enumerate(self.dims)}

    def __str__(self):
        return ",".join(map(str, self.dims))


class FreeCdga:
    """``(ΛV, d)`` on finitely many generators.

    ``differential`` maps generator names to elements (or expression strings)
    of degree one higher; missing generators are closed.  d² = 0 is checked
    at construction unless ``check=False``.
    """

    def __init__(self, generators, differential: Mapping | None = None, *, check: bool = True, metadata=None):
        alg = generators if isinstance(generators, GradedAlgebra) else GradedAlgebra(generators)
        self.algebra = alg
        self.metadata = dict(metadata or {})
        d = [alg.zero() for _ in alg.generators]
        for key, img in (differential or {}).items():
            name = key.name if isinstance(key, Generator) else key
            if name not in alg:
                raise DifferentialError(f"differential given for unknown generator {name!r}")
            g = alg.generator(name)
            if isinstance(img, str):
                from sullivan.expr_io import parse_element

                img = parse_element(img, alg)
            elif isinstance(img, (int, Fraction)) or img is None:
                img = alg.scalar(img or 0)
            else:
                try:
                    img = alg.coerce(img)
                except ForeignGeneratorError as exc:
                    raise DifferentialError(f"d({name}): {exc}") from None
            if not img.is_homogeneous(g.degree + 1):
                raise DifferentialError(
                    f"d({name}) must be homogeneous of degree {g.degree + 1}, found {sorted(img.degrees())}"
                )
            d[alg.index[name]] = img
        self._d = tuple(d)
        self._mono_cache: dict = {}
        self._matrix_cache: dict[int, SparseMatrix] = {}
        self._rank_cache: dict[int, int] = {}
        if check:
            report = check_d_squared(self)
            if not report:
                raise DifferentialError(f"d∘d ≠ 0 on {', '.join(report.witnesses)}")

    @property
    def generators(self) -> tuple[Generator, ...]:
        return self.algebra.generators

    def d(self, name: str) -> Element:
        try:
            return self._d[self.algebra.index[name]]
        except KeyError:
            raise ForeignGeneratorError(f"unknown generator {name!r}") from None

    @property
    def differential(self) -> dict[str, Element]:
        return {g.name: self._d[i] for i, g in enumerate(self.algebra.generators)}

    def gen(self, name: str) -> Element:
        return self.algebra.gen(name)

    def __eq__(self, other):
        if not isinstance(other, FreeCdga):
            return NotImplemented
        return self.algebra == other.algebra and self._d == other._d

    def __hash__(self):
        return hash((self.algebra, self._d))

    def __repr__(self):
        body = ", ".join(f"d({g.name})={self._d[i]}" for i, g in enumerate(self.generators) if self._d[i])
        gens = ", ".join(g.name for g in self.generators)
        return f"FreeCdga(Λ({gens}); {body or 'd=0'})"

    def _d_mono(self, m) -> dict:
        cached = self._mono_cache.get(m)
        if cached is not None:
            return cached
        alg = self.algebra
        mul = alg._mono_mul
        n = len(m)
        acc: dict = {}
        prefix_deg = 0
        for i in range(n):
            k = m[i]
            if not k:
                continue
            dg = self._d[i]
            if dg.terms:
                left = m[:i] + (k - 1,) + (0,) * (n - i - 1)
                right = (0,) * (i + 1) + m[i + 1:]
                scale = k if prefix_deg % 2 == 0 else -k
                for dm, dc in dg.terms.items():
                    s1, mm = mul(left, dm)
                    if mm is None:
                        continue
                    s2, mm = mul(mm, right)
                    if mm is None:
                        continue
                    v = acc.get(mm, 0) + dc * (scale * s1 * s2)
                    if v:
                        acc[mm] = v
                    else:
                        acc.pop(mm, None)
            prefix_deg += k * alg.degrees[i]
        self._mono_cache[m] = acc
        return acc

    def apply_d(self, e: Element) -> Element:
        if e.algebra != self.algebra:
            raise ForeignGeneratorError("element does not belong to this model")
        acc: dict = {}
        for m, c in e.terms.items():
            for mm, cc in self._d_mono(m).items():
                v = acc.get(mm, 0) + c * cc
                if v:
                    acc[mm] = v
                else:
                    acc.pop(mm, None)
        return Element(self.algebra, acc)


def apply_d(c: FreeCdga, e: Element) -> Element:
    return c.apply_d(e)


def check_d_squared(c: FreeCdga, up_to: int | None = None) -> CheckReport:
    """Apply d twice to every generator (of degree ≤ ``up_to`` if given)."""
    bad = []
    for g in c.generators:
        if up_to is not None and g.degree > up_to:
            continue
        if c.apply_d(c.d(g.name)):
            bad.append(g.name)
    if bad:
        return CheckReport("d∘d = 0", False, f"d∘d nonzero on {', '.join(bad)}", bad)
    return CheckReport("d∘d = 0", True)


def differential_matrix(c: FreeCdga, d: int) -> SparseMatrix:
    """Row ``i`` holds the coordinates of ``d(b_i)`` for the degree-``d`` basis ``b``."""
    if d < 0:
        raise ValueError("degree must be nonnegative")
    cached = c._matrix_cache.get(d)
    if cached is not None:
        return cached
    alg = c.algebra
    src = alg.basis_of_degree(d)
    tgt = alg.basis_of_degree(d + 1)
    pos = {m: j for j, m in enumerate(tgt)}
    rows = []
    for m in src:
        rows.append({pos[mm]: v for mm, v in c._d_mono(m).items()})
    mat = SparseMatrix.from_row_dicts(rows, len(tgt))
    c._matrix_cache[d] = mat
    return mat


def _rank_d(c: FreeCdga, d: int) -> int:
    if d < 0:
        return 0
    r = c._rank_cache.get(d)
    if r is None:
        r = linalg.rank(differential_matrix(c, d))
        c._rank_cache[d] = r
    return r


def betti(c: FreeCdga, up_to: int) -> BettiTable:
    """``b_d = dim ker d_d − rank d_{d−1}`` for ``d = 0..up_to``."""
    if up_to < 0:
        raise ValueError("up_to must be nonnegative")
    dims = []
    for d in range(up_to + 1):
        n = len(c.algebra.basis_of_degree(d))
        dims.append(n - _rank_d(c, d) - _rank_d(c, d - 1))
    return BettiTable(tuple(dims))


def cochain_euler(c: FreeCdga, up_to: int) -> int:
    return sum((-1) ** d * len(c.algebra.basis_of_degree(d)) for d in range(up_to + 1))


def cocycle_basis(c: FreeCdga, d: int) -> list[list[Fraction]]:
    return linalg.kernel_basis(differential_matrix(c, d).transpose())


def coboundary_rows(c: FreeCdga, d: int) -> list[dict[int, Fraction]]:
    """Spanning set of the degree-``d`` coboundaries (sparse vectors)."""
    if d <= 0:
        return []
    return [r for r in differential_matrix(c, d - 1).rows() if r]


def cohomology_representatives(c: FreeCdga, d: int) -> list[list[Fraction]]:
    """Cocycles whose classes form a basis of H^d."""
    space = RowSpace(len(c.algebra.basis_of_degree(d)))
    for r in coboundary_rows(c, d):
        space.add(r)
    reps = []
    for z in cocycle_basis(c, d):
        if space.add(linalg.to_sparse(z)):
            reps.append(z)
    return reps


def is_coboundary(c: FreeCdga, e: Element) -> bool:
    d = e.homogeneous_degree()
    if d is None:
        return e.is_zero()
    n = len(c.algebra.basis_of_degree(d))
    vecs = [_dense(r, n) for r in coboundary_rows(c, d)]
    return linalg.solve_in_span(vecs, e.to_vector(d)) is not None


def _dense(row: dict, n: int) -> list[Fraction]:
    v = [Fraction(0)] * n
    for j, x in row.items():
        v[j] = x
    return v


def is_pure(c: FreeCdga, base_generators: Iterable = ()) -> bool:
    """Even non-base generators closed; odd differentials in Λ(even, base)."""
    base = {g.name if isinstance(g, Generator) else g for g in base_generators}
    for name in base:
        if name not in c.algebra:
            raise ForeignGeneratorError(f"unknown base generator {name!r}")
    alg = c.algebra
    allowed_odd = {alg.index[n] for n in base if alg.generator(n).is_odd}
    for i, g in enumerate(alg.generators):
        dg = c._d[i]
        if g.name in base:
            continue
        if not g.is_odd:
            if dg:
                return False
            continue
        for m in dg.terms:
            if any(m[j] for j in alg._odd if j not in allowed_odd):
                return False
    return True


def is_minimal(c: FreeCdga) -> bool:
    """No differential has a constant or linear term."""
    for dg in c._d:
        for m in dg.terms:
            if sum(m) <= 1:
                return False
    return True


# -- morphisms ------------------------------------------------------------------


class CdgaMorphism:
    """Algebra map ``source → target`` given on generators.

    Images may be elements of the target or expression strings.  Whether the
    map commutes with the differentials is checked by :func:`check_morphism`,
    never assumed.
    """

    def __init__(self, source: FreeCdga, target: FreeCdga, images: Mapping, *, name: str = ""):
        self.source = source
        self.target = target
        self.name = name
        talg = target.algebra
        imgs = {}
        for key, img in images.items():
            gname = key.name if isinstance(key, Generator) else key
            if gname not in source.algebra:
                raise ForeignGeneratorError(f"{gname!r} is not a generator of the source")
            if isinstance(img, str):
                from sullivan.expr_io import parse_element

                img = parse_element(img, talg)
            elif isinstance(img, (int, Fraction)):
                img = talg.scalar(img)
            else:
                img = talg.coerce(img)
            imgs[gname] = img
        missing = [g.name for g in source.generators if g.name not in imgs]
        if missing:
            raise ValueError(f"no image given for {', '.join(missing)}")
        self.images: dict[str, Element] = imgs
        self._image_list = [imgs[g.name] for g in source.generators]

    def __call__(self, e: Element) -> Element:
        return self.apply(e)

    def apply(self, e: Element) -> Element:
        e = self.source.algebra.coerce(e)
        return evaluate(e, self._image_list, self.target.algebra)

    def __repr__(self):
        body = ", ".join(f"{k} ↦ {v}" for k, v in self.images.items())
        return f"CdgaMorphism({self.name or ''}{': ' if self.name else ''}{body})"


def identity_morphism(c: FreeCdga) -> CdgaMorphism:
    return CdgaMorphism(c, c, {g.name: c.gen(g.name) for g in c.generators}, name="id")


def compose(outer: CdgaMorphism, inner: CdgaMorphism) -> CdgaMorphism:
    """``outer ∘ inner``."""
    if inner.target != outer.source:
        raise ValueError("morphisms are not composable")
    images = {k: outer.apply(v) for k, v in inner.images.items()}
    return CdgaMorphism(inner.source, outer.target, images)


def check_morphism(m: CdgaMorphism) -> CheckReport:
    """Exact check that ``m`` preserves degrees and commutes with d on generators."""
    bad = []
    notes = []
    for g in m.source.generators:
        img = m.images[g.name]
        if not img.is_homogeneous(g.degree):
            bad.append(g.name)
            notes.append(f"{g.name}: image not of degree {g.degree}")
            continue
        lhs = m.target.apply_d(img)
        rhs = m.apply(m.source.d(g.name))
        if lhs != rhs:
            bad.append(g.name)
            notes.append(f"{g.name}: d(f({g.name})) = {lhs} but f(d({g.name})) = {rhs}")
    name = f"{m.name} commutes with d" if m.name else "morphism commutes with d"
    return CheckReport(name, not bad, "; ".join(notes), bad)


def linear_part_matrices(m: CdgaMorphism) -> dict[int, list[list[Fraction]]]:
    """Per degree: rows = source generators, columns = target generators."""
    out = {}
    degrees = sorted({g.degree for g in m.source.generators} | {g.degree for g in m.target.generators})
    for k in degrees:
        src = [g for g in m.source.generators if g.degree == k]
        tgt = [g for g in m.target.generators if g.degree == k]
        out[k] = [[m.images[s.name].linear_coefficient(t.name) for t in tgt] for s in src]
    return out


def is_isomorphism(m: CdgaMorphism) -> bool:
    """True iff the linear part is a bijection on generators in every degree."""
    report = check_morphism(m)
    if not report:
        raise ValueError(f"not a CDGA morphism: {report.details}")
    for k, mat in linear_part_matrices(m).items():
        nsrc = len(mat)
        ntgt = sum(1 for g in m.target.generators if g.degree == k)
        if nsrc != ntgt:
            return False
        if nsrc and linalg.rank(SparseMatrix.from_rows(mat, ntgt)) != nsrc:
            return False
    return True


@dataclass
class CohomologyMap:
    matrices: dict[int, list[list[Fraction]]]
    quasi_isomorphism: bool
    failing_degrees: list[int]


def induced_cohomology_map(m: CdgaMorphism, up_to: int) -> CohomologyMap:
    """Matrices of ``H^k(m)`` (rows: source classes, columns: target classes)."""
    report = check_morphism(m)
    if not report:
        raise ValueError(f"not a CDGA morphism: {report.details}")
    matrices = {}
    failing = []
    for k in range(up_to + 1):
        src_reps = cohomology_representatives(m.source, k)
        tgt_reps = cohomology_representatives(m.target, k)
        n_t = len(m.target.algebra.basis_of_degree(k))
        bounds = [_dense(r, n_t) for r in coboundary_rows(m.target, k)]
        rows = []
        for z in src_reps:
            img = m.apply(m.source.algebra.element_from_vector(k, z))
            coeffs = linalg.solve_in_span(tgt_reps + bounds, img.to_vector(k))
            if coeffs is None:  # image is not a cocycle; cannot happen for a checked morphism
                raise ArithmeticError(f"image of a degree-{k} cocycle is not closed")
            rows.append(coeffs[: len(tgt_reps)])
        matrices[k] = rows
        square = len(src_reps) == len(tgt_reps)
        if not square or (rows and linalg.rank(SparseMatrix.from_rows(rows, len(tgt_reps))) != len(rows)):
            failing.append(k)
    return CohomologyMap(matrices, not failing, failing)
