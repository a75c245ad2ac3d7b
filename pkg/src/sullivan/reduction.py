"""Elimination of contractible generator pairs.

A pair ``(u, t)`` with ``du = c·t + r`` where ``r`` involves neither ``t`` nor
``u`` spans an acyclic ideal ``(u, du)``.  The quotient is again free, on the
remaining generators, with ``t`` replaced by ``−r/c`` and ``u`` by 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from sullivan import linalg
from sullivan.algebra import Element, Generator, GradedAlgebra, evaluate
from sullivan.cdga import (
    CdgaMorphism,
    DifferentialError,
    FreeCdga,
    betti,
    check_morphism,
    compose,
    differential_matrix,
    identity_morphism,
)
from sullivan.report import CheckReport


class ReductionError(ValueError):
    pass


@dataclass(frozen=True)
class EliminationStep:
    killed_odd: Generator
    killed_even: Generator
    substitution: Element  # value of killed_even in the reduced model
    coefficient: Fraction

    def describe(self) -> str:
        return f"kill ({self.killed_odd.name}, {self.killed_even.name}): {self.killed_even.name} = {self.substitution}"


def _eligible_targets(c: FreeCdga, u: Generator) -> list[tuple[Generator, Fraction]]:
    du = c.d(u.name)
    out = []
    for t in c.generators:
        if t.name == u.name or t.degree != u.degree + 1:
            continue
        coeff = du.linear_coefficient(t.name)
        if not coeff:
            continue
        rest = du - coeff * c.gen(t.name)
        if rest.involves(t.name) or rest.involves(u.name):
            continue
        out.append((t, coeff))
    return out


def find_contractible_pair(c: FreeCdga):
    """The pair to eliminate next as ``(u, t, coefficient)``, or None.

    ``u``: smallest degree, then smallest name.  ``t``: among eligible linear
    terms of ``du``, the one latest in generator order.
    """
    for u in sorted(c.generators, key=lambda g: (g.degree, g.name)):
        cands = _eligible_targets(c, u)
        if cands:
            idx = c.algebra.index
            t, coeff = max(cands, key=lambda tc: idx[tc[0].name])
            return u, t, coeff
    return None


def eliminate(c: FreeCdga, u, t):
    """Quotient by the acyclic ideal ``(u, du)``.

    Returns ``(reduced model, step, projection)``.
    """
    u = c.algebra.generator(u.name if isinstance(u, Generator) else u)
    t = c.algebra.generator(t.name if isinstance(t, Generator) else t)
    match = [coeff for g, coeff in _eligible_targets(c, u) if g == t]
    if not match:
        raise ReductionError(f"({u.name}, {t.name}) is not a contractible pair")
    coeff = match[0]
    rest = c.d(u.name) - coeff * c.gen(t.name)
    survivors = [g for g in c.generators if g not in (u, t)]
    new_alg = GradedAlgebra(survivors)
    t_value = new_alg.coerce(-rest / coeff)
    images = []
    for g in c.generators:
        if g == u:
            images.append(new_alg.zero())
        elif g == t:
            images.append(t_value)
        else:
            images.append(new_alg.gen(g.name))
    diff = {g.name: evaluate(c.d(g.name), images, new_alg) for g in survivors}
    try:
        reduced = FreeCdga(new_alg, diff, metadata=dict(c.metadata))
    except DifferentialError as exc:
        raise ReductionError(f"eliminating ({u.name}, {t.name}) broke d∘d = 0: {exc}") from None
    proj = CdgaMorphism(c, reduced, {g.name: img for g, img in zip(c.generators, images)}, name="projection")
    report = check_morphism(proj)
    if not report:
        raise ReductionError(f"projection is not a chain map: {report.details}")
    return reduced, EliminationStep(u, t, t_value, coeff), proj


class Minimization(NamedTuple):
    model: FreeCdga
    steps: list
    projection: CdgaMorphism


def minimize(c: FreeCdga, max_steps: int | None = None, up_to: int | None = None) -> Minimization:
    """Eliminate contractible pairs until none is left.

    ``max_steps`` defaults to the number of odd generators.  With ``up_to``
    the Betti numbers of input and output are compared through that degree.
    """
    if max_steps is None:
        max_steps = sum(1 for g in c.generators if g.is_odd)
    current = c
    proj = identity_morphism(c)
    steps = []
    while True:
        pair = find_contractible_pair(current)
        if pair is None:
            break
        if len(steps) >= max_steps:
            raise ReductionError(f"max_steps={max_steps} exhausted with contractible pairs remaining")
        u, t, _ = pair
        current, step, p = eliminate(current, u, t)
        steps.append(step)
        proj = compose(p, proj)
    proj.name = "projection"
    report = check_morphism(proj)
    if not report:
        raise ReductionError(f"composite projection is not a chain map: {report.details}")
    if up_to is not None:
        cert = certify_reduction(c, current, up_to)
        if not cert:
            raise ReductionError(cert.details)
    return Minimization(current, steps, proj)


def certify_reduction(original: FreeCdga, reduced: FreeCdga, up_to: int) -> CheckReport:
    b0 = betti(original, up_to)
    b1 = betti(reduced, up_to)
    if b0 == b1:
        return CheckReport(f"Betti numbers agree through degree {up_to}", True, str(b0))
    diff = [d for d in range(up_to + 1) if b0[d] != b1[d]]
    return CheckReport(
        f"Betti numbers agree through degree {up_to}",
        False,
        f"original {b0} vs reduced {b1}; first difference in degree {diff[0]}",
        [str(d) for d in diff],
    )


def match_models(source: FreeCdga, target: FreeCdga) -> CdgaMorphism:
    """Build a morphism ``source → target`` generator by generator.

    Closed generators go to the same-named target generator.  Every other
    generator ``g`` is sent to a degree-matching element ``x`` with
    ``d x = f(d g)``, found by solving against the target's differential.
    """
    images: dict[str, Element] = {}
    talg = target.algebra
    for g in source.generators:
        if not source.d(g.name):
            if g.name not in talg or talg.generator(g.name).degree != g.degree:
                raise ReductionError(f"no target generator matching closed generator {g.name}")
            images[g.name] = talg.gen(g.name)
    pending = [g for g in source.generators if g.name not in images]
    for g in sorted(pending, key=lambda g: g.degree):
        partial = {h.name: images.get(h.name, talg.zero()) for h in source.generators}
        want = CdgaMorphism(source, target, partial).apply(source.d(g.name))
        mat = differential_matrix(target, g.degree)
        vecs = [[mat.row(i).get(j, Fraction(0)) for j in range(mat.ncols)] for i in range(mat.nrows)]
        coeffs = linalg.solve_in_span(vecs, want.to_vector(g.degree + 1))
        if coeffs is None:
            raise ReductionError(f"cannot lift the image of {g.name}")
        images[g.name] = talg.element_from_vector(g.degree, coeffs)
    return CdgaMorphism(source, target, images, name="match")
