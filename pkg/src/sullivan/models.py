"""Built-in Sullivan models: CP^n, its projectivized tangent bundle, and the
flag manifolds U(m)/U(k_1)×…×U(k_r) together with the comparison morphisms.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from string import ascii_lowercase

from sullivan.algebra import Element, Generator, GradedAlgebra, substitute
from sullivan.cdga import CdgaMorphism, FreeCdga, check_morphism, is_isomorphism
from sullivan.report import CheckReport


def _require_rank(n, minimum):
    if not isinstance(n, int) or n < minimum:
        raise ValueError(f"n must be an integer ≥ {minimum}, got {n!r}")


def model_cpn(n: int) -> FreeCdga:
    """``Λ(y2, y_{2n+1})`` with ``d y_{2n+1} = y2^{n+1}``."""
    _require_rank(n, 1)
    top = f"y{2 * n + 1}"
    alg = GradedAlgebra([("y2", 2), (top, 2 * n + 1)])
    y2 = alg.gen("y2")
    return FreeCdga(alg, {top: y2 ** (n + 1)}, metadata={"construction": "cpn", "n": n})


@dataclass(frozen=True)
class ChernData:
    """Closed cocycles ``c_1..c_n`` (``c_i`` of degree 2i) in a base model."""

    base: FreeCdga
    cocycles: tuple[Element, ...]

    def __post_init__(self):
        fixed = []
        for i, c in enumerate(self.cocycles, 1):
            c = self.base.algebra.coerce(c)
            if not c.is_homogeneous(2 * i):
                raise ValueError(f"c_{i} must be homogeneous of degree {2 * i}")
            if self.base.apply_d(c):
                raise ValueError(f"c_{i} is not closed")
            fixed.append(c)
        object.__setattr__(self, "cocycles", tuple(fixed))

    @property
    def rank(self) -> int:
        return len(self.cocycles)


def chern_classes_tangent_cpn(n: int) -> ChernData:
    """``c_i = C(n+1, i) y2^i`` from the total class ``(1 + y2)^{n+1}``."""
    _require_rank(n, 1)
    base = model_cpn(n)
    y2 = base.gen("y2")
    return ChernData(base, tuple(comb(n + 1, i) * y2**i for i in range(1, n + 1)))


def projectivization_model(chern: ChernData, fiber_names=("x2", None)) -> FreeCdga:
    """Relative model ``A ⊗ Λ(x2, x_{2n-1})`` of the projectivized bundle.

    ``D x_{2n-1} = x2^n + Σ c_i x2^{n-i}``; the base differential is kept.
    """
    n = chern.rank
    _require_rank(n, 2)
    base = chern.base
    x_even = fiber_names[0]
    x_odd = fiber_names[1] or f"x{2 * n - 1}"
    for name in (x_even, x_odd):
        if name in base.algebra:
            raise ValueError(f"fiber generator {name} clashes with the base")
    alg = GradedAlgebra(list(base.generators) + [Generator(x_even, 2), Generator(x_odd, 2 * n - 1)])
    x = alg.gen(x_even)
    top = x**n
    for i, c in enumerate(chern.cocycles, 1):
        top = top + alg.coerce(c) * x ** (n - i)
    diff = {g.name: base.d(g.name) for g in base.generators}
    diff[x_odd] = top
    meta = {"construction": "projectivization", "n": n}
    return FreeCdga(alg, diff, metadata=meta)


def projectivized_tangent_model(n: int) -> FreeCdga:
    """``Λ(x2, y2, x_{2n-1}, y_{2n+1})``, ``D x_{2n-1} = Σ x2^{n-i} y2^i``, ``D y_{2n+1} = y2^{n+1}``."""
    _require_rank(n, 2)
    xo, yo = f"x{2 * n - 1}", f"y{2 * n + 1}"
    alg = GradedAlgebra([("x2", 2), ("y2", 2), (xo, 2 * n - 1), (yo, 2 * n + 1)])
    x, y = alg.gens("x2", "y2")
    dx = sum((x ** (n - i) * y**i for i in range(n + 1)), alg.zero())
    return FreeCdga(alg, {xo: dx, yo: y ** (n + 1)}, metadata={"construction": "ptangent", "n": n})


def verify_chern_normalization(n: int) -> CheckReport:
    """Certify that ``x2 ↦ x2 − y2`` turns the Chern form into the normalized model."""
    _require_rank(n, 2)
    raw = projectivization_model(chern_classes_tangent_cpn(n))
    norm = projectivized_tangent_model(n)
    alg = raw.algebra
    x, y = alg.gens("x2", "y2")
    chern_form = raw.d(f"x{2 * n - 1}")
    shifted = substitute(chern_form, {"x2": x - y})
    expected = sum((x ** (n - i) * y**i for i in range(n + 1)), alg.zero())
    checks = [
        CheckReport(
            "x2 ↦ x2 − y2 normalizes the Chern polynomial",
            shifted == expected,
            "" if shifted == expected else f"got {shifted}, expected {expected}",
        )
    ]
    xo, yo = f"x{2 * n - 1}", f"y{2 * n + 1}"
    images = {"x2": "x2 - y2", "y2": "y2", xo: xo, yo: yo}
    phi = CdgaMorphism(raw, norm, images, name="normalization")
    mc = check_morphism(phi)
    checks.append(mc)
    if mc:
        iso = is_isomorphism(phi)
        checks.append(CheckReport("normalization is an isomorphism", iso))
    return CheckReport.combine(f"Chern normalization (n={n})", checks)


@dataclass(frozen=True)
class BlockPartition:
    blocks: tuple[int, ...]

    def __post_init__(self):
        blocks = tuple(self.blocks)
        if not blocks or any(not isinstance(k, int) or k < 1 for k in blocks):
            raise ValueError(f"invalid block partition {self.blocks!r}")
        if len(blocks) > len(ascii_lowercase):
            raise ValueError("at most 26 blocks are supported")
        object.__setattr__(self, "blocks", blocks)

    @property
    def total(self) -> int:
        return sum(self.blocks)

    def block_letters(self) -> list[str]:
        # last block is always z; earlier ones a, b, c, ... skipping z
        letters = [c for c in ascii_lowercase if c != "z"]
        return letters[: len(self.blocks) - 1] + ["z"]


def homogeneous_space_model(partition) -> FreeCdga:
    """Model ``Λ(block Chern classes) ⊗ Λ(v1, v3, ..., v_{2m-1})`` of U(m)/ΠU(k_j).

    ``d v_{2k-1}`` is the degree-2k part of ``Π_j (1 + c_1^{(j)} + ... + c_{k_j}^{(j)})``.
    """
    if not isinstance(partition, BlockPartition):
        partition = BlockPartition(tuple(partition))
    m = partition.total
    if m < 2:
        raise ValueError("the partition must have total at least 2")
    even = []
    for letter, k in zip(partition.block_letters(), partition.blocks):
        even.extend(Generator(f"{letter}{2 * i}", 2 * i) for i in range(1, k + 1))
    odd = [Generator(f"v{2 * k - 1}", 2 * k - 1) for k in range(1, m + 1)]
    alg = GradedAlgebra(even + odd)
    total = alg.one()
    for letter, k in zip(partition.block_letters(), partition.blocks):
        block = alg.one()
        for i in range(1, k + 1):
            block = block + alg.gen(f"{letter}{2 * i}")
        total = total * block
    diff = {f"v{2 * k - 1}": total.homogeneous_part(2 * k) for k in range(1, m + 1)}
    meta = {"construction": "flag-big", "partition": ",".join(map(str, partition.blocks))}
    return FreeCdga(alg, diff, metadata=meta)


def flag_partition(n: int) -> BlockPartition:
    """The partition (1, 1, n−1) of n+1."""
    _require_rank(n, 2)
    return BlockPartition((1, 1, n - 1))


def minimal_flag_model(n: int) -> FreeCdga:
    """``Λ(a2, b2, v_{2n-1}, v_{2n+1})`` with the signed two-variable sums as differentials."""
    _require_rank(n, 2)
    s = (-1) ** (n + 1)
    lo, hi = f"v{2 * n - 1}", f"v{2 * n + 1}"
    alg = GradedAlgebra([("a2", 2), ("b2", 2), (lo, 2 * n - 1), (hi, 2 * n + 1)])
    a, b = alg.gens("a2", "b2")
    d_lo = sum((a ** (n - i) * b**i for i in range(n + 1)), alg.zero())
    d_hi = sum((a ** (n - i + 1) * b**i for i in range(1, n + 1)), alg.zero())
    return FreeCdga(alg, {lo: s * d_lo, hi: s * d_hi}, metadata={"construction": "flag-min", "n": n})


def paper_morphism_f(n: int) -> CdgaMorphism:
    """The comparison map flag-min → ptangent with images exactly as published:

    a2 ↦ s·x2, b2 ↦ s·y2, v_{2n-1} ↦ s·x_{2n-1}, v_{2n+1} ↦ s·(y2·x_{2n-1} − y_{2n+1}),
    s = (−1)^{n+1}.  For even n this map does not commute with d; see
    :func:`corrected_morphism_f`.
    """
    _require_rank(n, 2)
    s = (-1) ** (n + 1)
    src, tgt = minimal_flag_model(n), projectivized_tangent_model(n)
    x, y = tgt.algebra.gens("x2", "y2")
    xo, yo = tgt.algebra.gens(f"x{2 * n - 1}", f"y{2 * n + 1}")
    images = {
        "a2": s * x,
        "b2": s * y,
        f"v{2 * n - 1}": s * xo,
        f"v{2 * n + 1}": s * (y * xo - yo),
    }
    return CdgaMorphism(src, tgt, images, name="f")


def corrected_morphism_f(n: int) -> CdgaMorphism:
    """Same as :func:`paper_morphism_f` but ``v_{2n+1} ↦ y2·x_{2n-1} − y_{2n+1}`` for every n.

    Both agree for odd n.
    """
    f = paper_morphism_f(n)
    tgt = f.target
    y = tgt.gen("y2")
    images = dict(f.images)
    images[f"v{2 * n + 1}"] = y * tgt.gen(f"x{2 * n - 1}") - tgt.gen(f"y{2 * n + 1}")
    return CdgaMorphism(f.source, tgt, images, name="f'")


BUILTIN_MODELS = ("cpn", "ptangent", "flag-min", "flag-big")


def builtin_model(name: str, n: int) -> FreeCdga:
    if name == "cpn":
        return model_cpn(n)
    if name == "ptangent":
        return projectivized_tangent_model(n)
    if name == "flag-min":
        return minimal_flag_model(n)
    if name == "flag-big":
        c = homogeneous_space_model(flag_partition(n))
        c.metadata["n"] = n
        return c
    raise ValueError(f"unknown model {name!r}; choose from {', '.join(BUILTIN_MODELS)}")
