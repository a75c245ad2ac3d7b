"""Quotient rings Λ(even generators)/I and their Hilbert functions."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Mapping

from sullivan import linalg
from sullivan.algebra import Element, Generator, GradedAlgebra, evaluate
from sullivan.cdga import BettiTable, FreeCdga, betti, coboundary_rows
from sullivan.linalg import SparseMatrix
from sullivan.report import CheckReport


@dataclass
class RingPresentation:
    generators: list
    relations: list = field(default_factory=list)

    def __post_init__(self):
        gens = [g if isinstance(g, Generator) else Generator(*g) for g in self.generators]
        odd = [g.name for g in gens if g.is_odd]
        if odd:
            raise ValueError(f"ring generators must have even degree: {', '.join(odd)}")
        self.generators = gens
        self.algebra = GradedAlgebra(gens)
        rels = []
        for r in self.relations:
            if isinstance(r, str):
                from sullivan.expr_io import parse_element

                r = parse_element(r, self.algebra)
            r = self.algebra.coerce(r)
            if r.homogeneous_degree() is None:
                raise ValueError(f"relation {r} is zero or not homogeneous")
            rels.append(r)
        self.relations = rels

    def normalized_relations(self) -> list[Element]:
        """Relations scaled so the leading coefficient is +1 (same ideal)."""
        out = []
        for r in self.relations:
            lead = r.sorted_terms()[0][1]
            out.append(r / lead)
        return out


def ideal_slice_matrix(p: RingPresentation, d: int) -> SparseMatrix:
    """Rows: ``m·g`` for each relation ``g`` and monomial ``m`` of complementary degree."""
    alg = p.algebra
    basis = alg.basis_of_degree(d)
    pos = {m: j for j, m in enumerate(basis)}
    rows = []
    for r in p.relations:
        k = r.homogeneous_degree()
        if k > d:
            continue
        for m in alg.basis_of_degree(d - k):
            prod = alg.monomial(m) * r
            rows.append({pos[mm]: c for mm, c in prod.terms.items()})
    return SparseMatrix.from_row_dicts(rows, len(basis))


def quotient_dimensions(p: RingPresentation, up_to: int) -> BettiTable:
    dims = []
    for d in range(up_to + 1):
        mat = ideal_slice_matrix(p, d)
        dims.append(mat.ncols - linalg.rank(mat))
    return BettiTable(tuple(dims))


def poincare_product_oracle(n: int, up_to: int | None = None) -> BettiTable:
    """Coefficients of ``(Σ_{j<n} t^{2j})·(Σ_{k≤n} t^{2k})``, padded with zeros to ``up_to``."""
    if n < 2:
        raise ValueError("n must be at least 2")
    top = 4 * n - 2
    bound = top if up_to is None else up_to
    coeffs = [0] * (max(bound, top) + 1)
    for j in range(n):
        for k in range(n + 1):
            coeffs[2 * j + 2 * k] += 1
    return BettiTable(tuple(coeffs[: bound + 1]))


def verify_ring_presentation(
    c: FreeCdga, p: RingPresentation, gen_map: Mapping[str, Element], up_to: int
) -> CheckReport:
    """Relations become coboundaries under ``gen_map``, and dimensions match ``betti(c)``."""
    images = []
    for g in p.generators:
        if g.name not in gen_map:
            raise ValueError(f"gen_map has no image for {g.name}")
        img = gen_map[g.name]
        if isinstance(img, str):
            from sullivan.expr_io import parse_element

            img = parse_element(img, c.algebra)
        img = c.algebra.coerce(img)
        if not img.is_homogeneous(g.degree):
            raise ValueError(f"image of {g.name} is not of degree {g.degree}")
        if c.apply_d(img):
            raise ValueError(f"image of {g.name} is not closed")
        images.append(img)
    checks = []
    for r in p.relations:
        k = r.homogeneous_degree()
        pushed = evaluate(r, images, c.algebra)
        n = len(c.algebra.basis_of_degree(k))
        vecs = []
        for row in coboundary_rows(c, k):
            v = [Fraction(0)] * n
            for j, x in row.items():
                v[j] = x
            vecs.append(v)
        ok = linalg.solve_in_span(vecs, pushed.to_vector(k)) is not None
        checks.append(CheckReport(f"relation {r} is a coboundary", ok, "" if ok else f"{pushed} is not exact"))
    q = quotient_dimensions(p, up_to)
    b = betti(c, up_to)
    diff = [d for d in range(up_to + 1) if q[d] != b[d]]
    checks.append(
        CheckReport(
            f"quotient dimensions equal Betti numbers through degree {up_to}",
            not diff,
            f"quotient {q} vs cohomology {b}" if diff else str(q),
            [str(d) for d in diff],
        )
    )
    return CheckReport.combine("ring presentation", checks)


class TailError(ValueError):
    """Dimensions were not shown to vanish above the computed range."""


def _vanishing_window(p: RingPresentation) -> int:
    return max((g.degree for g in p.generators), default=1)


def euler_characteristic(source, max_degree: int = 200) -> int:
    """Alternating dimension sum.

    For a presentation the dimensions are computed until a run of zeros as
    long as the largest generator degree proves every later slice is zero.
    A :class:`BettiTable` must end in two zero entries.
    """
    if isinstance(source, RingPresentation):
        window = _vanishing_window(source)
        dims = []
        zeros = 0
        for d in range(max_degree + 1):
            mat = ideal_slice_matrix(source, d)
            v = mat.ncols - linalg.rank(mat)
            dims.append(v)
            zeros = zeros + 1 if v == 0 else 0
            if zeros >= window:
                return BettiTable(tuple(dims)).euler()
        raise TailError(f"quotient does not vanish through degree {max_degree}")
    table = source if isinstance(source, BettiTable) else BettiTable(tuple(source))
    if len(table) < 2 or table.dims[-1] or table.dims[-2]:
        raise TailError("table does not end in vanishing degrees")
    return table.euler()


# -- the presentations appearing for P(τ) and the flag manifold -----------------


def cpn_presentation(n: int) -> RingPresentation:
    alg = GradedAlgebra([("y2", 2)])
    return RingPresentation(list(alg.generators), [alg.gen("y2") ** (n + 1)])


def chern_form_presentation(n: int) -> RingPresentation:
    """``(x^n + Σ C(n+1,i) y^i x^{n-i}, y^{n+1})`` in Λ(x2, y2)."""
    alg = GradedAlgebra([("x2", 2), ("y2", 2)])
    x, y = alg.gens("x2", "y2")
    first = x**n + sum((comb(n + 1, i) * y**i * x ** (n - i) for i in range(1, n + 1)), alg.zero())
    return RingPresentation(list(alg.generators), [first, y ** (n + 1)])


def projective_bundle_presentation(n: int) -> RingPresentation:
    """``(Σ_{i=0}^n x^{n-i} y^i, y^{n+1})`` in Λ(x2, y2)."""
    alg = GradedAlgebra([("x2", 2), ("y2", 2)])
    x, y = alg.gens("x2", "y2")
    first = sum((x ** (n - i) * y**i for i in range(n + 1)), alg.zero())
    return RingPresentation(list(alg.generators), [first, y ** (n + 1)])


def flag_presentation(n: int) -> RingPresentation:
    """The signed two-variable sums in Λ(a2, b2) that kill the flag cohomology."""
    alg = GradedAlgebra([("a2", 2), ("b2", 2)])
    a, b = alg.gens("a2", "b2")
    s = (-1) ** (n + 1)
    first = sum((a ** (n - i) * b**i for i in range(n + 1)), alg.zero())
    second = sum((a ** (n - i + 1) * b**i for i in range(1, n + 1)), alg.zero())
    return RingPresentation(list(alg.generators), [s * first, s * second])
