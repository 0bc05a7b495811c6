"""Koszul complex E2 = H*(G/T) ⊗ Λ(t_1..t_N) and its homology.

The differential is d2(a ⊗ t) = tau(t) a ⊗ 1, extended over the exterior
factor as a derivation: removing the j-th fiber generator carries (-1)^j.
Homology is computed per bidegree (base degree, fiber degree) by exact
linear algebra on the monomial basis of the base quotient.
"""

import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from app.config import get_settings
from app.services.flag import RingPresentation
from app.services.linalg import (
    DimensionLimitError,
    FieldEliminator,
    GradedAbelianGroup,
    GradedQuotient,
    GroupSummand,
    LinearAlgebraError,
    SparseRow,
    integer_echelon,
    lattice_contains,
    smith_normal_form,
)
from app.services.polynomials import GradedRing, Polynomial, PolynomialError
from app.services.root_data import TransgressionData

settings = get_settings()
logger = logging.getLogger(__name__)

Subset = Tuple[int, ...]
Bidegree = Tuple[int, int]


class KoszulError(Exception):
    """Custom exception for Koszul complex errors."""
    pass


def _sort_with_sign(indices: Sequence[int]) -> Tuple[Optional[Subset], int]:
    """Sort exterior indices, returning (None, 0) on a repeated index."""
    items = list(indices)
    if len(set(items)) != len(items):
        return None, 0
    sign = 1
    for i in range(len(items)):
        for j in range(len(items) - 1 - i):
            if items[j] > items[j + 1]:
                items[j], items[j + 1] = items[j + 1], items[j]
                sign = -sign
    return tuple(items), sign


class KoszulElement:
    """
    Element of H*(G/T) ⊗ Λ(t_0..t_{N-1}): base polynomials indexed by
    sorted square-free fiber monomials.
    """

    def __init__(
        self,
        ring: GradedRing,
        rank: int,
        components: Optional[Mapping[Subset, Polynomial]] = None
    ):
        self.ring = ring
        self.rank = rank
        clean: Dict[Subset, Polynomial] = {}
        for subset, coeff in (components or {}).items():
            ordered, sign = _sort_with_sign(subset)
            if ordered is None:
                continue
            if any(i < 0 or i >= rank for i in ordered):
                raise KoszulError(f"Fiber index out of range in {subset} (rank {rank})")
            try:
                value = ring.convert(coeff) * sign
            except PolynomialError as e:
                raise KoszulError(f"Coefficient outside the base ring: {e}")
            total = clean.get(ordered, ring.zero) + value
            if total.is_zero:
                clean.pop(ordered, None)
            else:
                clean[ordered] = total
        self._components = clean

    @classmethod
    def basic(
        cls,
        ring: GradedRing,
        rank: int,
        coefficient: Polynomial,
        subset: Sequence[int] = ()
    ) -> "KoszulElement":
        """The element coefficient ⊗ t_{i1} ... t_{ik}."""
        return cls(ring, rank, {tuple(subset): coefficient})

    @property
    def components(self) -> Dict[Subset, Polynomial]:
        return dict(self._components)

    @property
    def is_zero(self) -> bool:
        return not self._components

    def bidegrees(self) -> List[Bidegree]:
        """
        Bidegrees (base, fiber) of the summands.

        Raises:
            KoszulError: If a coefficient is inhomogeneous
        """
        result = set()
        for subset, coeff in self._components.items():
            try:
                result.add((coeff.degree(), len(subset)))
            except PolynomialError as e:
                raise KoszulError(str(e))
        return sorted(result)

    def _check(self, other: "KoszulElement"):
        if other.ring != self.ring or other.rank != self.rank:
            raise KoszulError("Koszul elements live over different complexes")

    def __add__(self, other: "KoszulElement") -> "KoszulElement":
        self._check(other)
        merged = dict(self._components)
        for subset, coeff in other._components.items():
            merged[subset] = merged.get(subset, self.ring.zero) + coeff
        return KoszulElement(self.ring, self.rank, merged)

    def __neg__(self) -> "KoszulElement":
        return KoszulElement(
            self.ring, self.rank, {s: -c for s, c in self._components.items()}
        )

    def __sub__(self, other: "KoszulElement") -> "KoszulElement":
        return self + (-other)

    def __mul__(self, factor) -> "KoszulElement":
        """Multiply every base coefficient by an integer or a base polynomial."""
        return KoszulElement(
            self.ring, self.rank, {s: c * factor for s, c in self._components.items()}
        )

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, KoszulElement):
            return NotImplemented
        return (
            self.ring == other.ring
            and self.rank == other.rank
            and self._components == other._components
        )

    def to_text(self, fiber_names: Optional[Sequence[str]] = None) -> str:
        if self.is_zero:
            return "0"
        names = list(fiber_names) if fiber_names else [f"t{i + 1}" for i in range(self.rank)]
        pieces = []
        for subset in sorted(self._components, key=lambda s: (len(s), s)):
            fiber = "*".join(names[i] for i in subset) or "1"
            pieces.append(f"({self._components[subset].to_text()})⊗{fiber}")
        return " + ".join(pieces)

    def __str__(self) -> str:
        return self.to_text()


def koszul_d2(x: KoszulElement, tau: TransgressionData) -> KoszulElement:
    """
    Apply d2(a ⊗ t_{i1}...t_{ik}) = sum_j (-1)^j tau(t_{ij}) a ⊗ (omit i_j).

    Args:
        x: Element over the base ring
        tau: Transgression images of the fiber generators

    Returns:
        Element of fiber degree one less

    Raises:
        KoszulError: If a fiber generator has no transgression image or the
            image does not live in the base ring
    """
    images: Dict[int, Polynomial] = {}
    result: Dict[Subset, Polynomial] = {}
    for subset, coeff in x.components.items():
        for j, i in enumerate(subset):
            if i >= tau.rank:
                raise KoszulError(
                    f"Fiber generator t{i + 1} has no transgression image (rank {tau.rank})"
                )
            if i not in images:
                try:
                    images[i] = x.ring.convert(tau.images[i])
                except PolynomialError as e:
                    raise KoszulError(f"Transgression image of {tau.fiber_names[i]}: {e}")
            rest = subset[:j] + subset[j + 1:]
            term = images[i] * coeff
            if j % 2:
                term = -term
            result[rest] = result.get(rest, x.ring.zero) + term
    return KoszulElement(x.ring, x.rank, result)


@dataclass
class KoszulHomology:
    """Homology groups of the Koszul complex per bidegree."""

    groups: Dict[Bidegree, GroupSummand]
    modulus: Optional[int]
    max_total_degree: int

    def by_total_degree(self) -> GradedAbelianGroup:
        """Collapse bidegrees onto the total degree base + fiber."""
        totals: Dict[int, GroupSummand] = {}
        for (base, fiber), group in sorted(self.groups.items()):
            degree = base + fiber
            current = totals.get(degree, GroupSummand(rank=0))
            torsion = tuple(sorted(current.torsion + group.torsion))
            totals[degree] = GroupSummand(rank=current.rank + group.rank, torsion=torsion)
        return GradedAbelianGroup(
            groups={d: g for d, g in totals.items() if not g.is_zero},
            modulus=self.modulus,
        )

    def fiber_row(self, fiber: int) -> GradedAbelianGroup:
        """E3^{*,fiber} as a group graded by base degree."""
        return GradedAbelianGroup(
            groups={
                base: g for (base, k), g in self.groups.items()
                if k == fiber and not g.is_zero
            },
            modulus=self.modulus,
        )

    @property
    def total_dimension(self) -> int:
        """Sum of ranks (F_p dimensions over a field)."""
        return sum(g.rank for g in self.groups.values())

    def to_dict(self) -> Dict[str, list]:
        return {
            f"{base},{fiber}": group.to_list()
            for (base, fiber), group in sorted(self.groups.items())
            if not group.is_zero
        }


@dataclass
class _Chains:
    """Basis of C^{b,k} = (base degree b) ⊗ (k-subsets)."""

    subsets: List[Subset]
    basis: List[Polynomial]
    subset_index: Dict[Subset, int] = field(default_factory=dict)

    @property
    def dimension(self) -> int:
        return len(self.subsets) * len(self.basis)


class KoszulComplex:
    """
    E2 page over a base presentation with a chosen transgression.

    Args:
        presentation: Base ring presentation (H*(G/T), over Z or F_p)
        tau: Transgression images
        max_total_degree: Largest total degree whose homology is needed
    """

    def __init__(
        self,
        presentation: RingPresentation,
        tau: TransgressionData,
        max_total_degree: int
    ):
        self.presentation = presentation
        self.tau = tau
        self.max_total_degree = max_total_degree
        self.modulus = presentation.modulus
        self.quotient: GradedQuotient = presentation.quotient(max_total_degree + 2)
        self.ring = self.quotient.ring
        self.rank = tau.rank
        self._chains: Dict[Bidegree, _Chains] = {}
        self._maps: Dict[Bidegree, List[SparseRow]] = {}

    def element(self, components: Mapping[Subset, Polynomial]) -> KoszulElement:
        return KoszulElement(self.ring, self.rank, components)

    def d2(self, x: KoszulElement) -> KoszulElement:
        return koszul_d2(x, self.tau)

    # Bases and matrices

    def chains(self, base: int, fiber: int) -> _Chains:
        key = (base, fiber)
        if key in self._chains:
            return self._chains[key]
        if base < 0 or fiber < 0 or fiber > self.rank:
            chains = _Chains([], [])
        else:
            subsets = list(combinations(range(self.rank), fiber))
            try:
                if self.modulus is None:
                    group = self.quotient.group(base)
                    if group.torsion:
                        raise KoszulError(
                            f"Base degree {base} of {self.quotient.label} has torsion"
                        )
                    basis = self.quotient.free_basis(base)
                else:
                    basis = self.quotient.free_basis(base)
            except LinearAlgebraError as e:
                raise KoszulError(f"Base degree {base}: {e}")
            chains = _Chains(subsets, basis, {s: i for i, s in enumerate(subsets)})
        if chains.dimension > settings.max_dimension:
            raise DimensionLimitError(
                f"C^({base},{fiber}) has dimension {chains.dimension} "
                f"(limit {settings.max_dimension})"
            )
        self._chains[key] = chains
        return chains

    def vector(self, x: KoszulElement, base: int, fiber: int) -> SparseRow:
        """Coordinates of a homogeneous element in the basis of C^{base,fiber}."""
        chains = self.chains(base, fiber)
        width = len(chains.basis)
        vector: SparseRow = {}
        for subset, coeff in x.components.items():
            if len(subset) != fiber:
                raise KoszulError(f"Summand on {subset} is not of fiber degree {fiber}")
            block = chains.subset_index[subset] * width
            try:
                coords = self.quotient.coordinates(coeff, base)
            except LinearAlgebraError as e:
                raise KoszulError(str(e))
            for i, value in enumerate(coords):
                if value:
                    vector[block + i] = vector.get(block + i, 0) + value
        return {c: v for c, v in vector.items() if v}

    def differential(self, base: int, fiber: int) -> List[SparseRow]:
        """Columns of d2: C^{base,fiber} -> C^{base+2,fiber-1}, as sparse vectors."""
        key = (base, fiber)
        if key in self._maps:
            return self._maps[key]
        source = self.chains(base, fiber)
        columns: List[SparseRow] = []
        if fiber >= 1 and source.dimension:
            target_base = base + 2
            self.chains(target_base, fiber - 1)
            for subset in source.subsets:
                for poly in source.basis:
                    image = self.d2(self.element({subset: poly}))
                    columns.append(self.vector(image, target_base, fiber - 1))
        self._maps[key] = columns
        logger.debug(f"d2 on C^({base},{fiber}): {len(columns)} columns")
        return columns

    def _rank(self, columns: List[SparseRow]) -> int:
        if not columns:
            return 0
        if self.modulus is not None:
            eliminator = FieldEliminator(self.modulus)
            return sum(1 for column in columns if eliminator.add(column))
        return len(integer_echelon(columns))

    def homology(self, base: int, fiber: int) -> GroupSummand:
        """
        ker(d2 out of C^{base,fiber}) / im(d2 into it).

        Raises:
            KoszulError: On a torsion base degree over Z
            DimensionLimitError: If a chain group exceeds the budget
        """
        dimension = self.chains(base, fiber).dimension
        if not dimension:
            return GroupSummand(rank=0)
        rank_out = self._rank(self.differential(base, fiber))
        incoming = self.differential(base - 2, fiber + 1)
        rank_in = self._rank(incoming)
        free = dimension - rank_out - rank_in
        if self.modulus is not None or not incoming:
            return GroupSummand(rank=free)
        echelon = integer_echelon(incoming)
        dense = []
        for row in echelon:
            line = [0] * dimension
            for c, v in row.items():
                line[c] = v
            dense.append(line)
        snf = smith_normal_form(dense, dimension)
        torsion = tuple(d for d in snf.diagonal if d > 1)
        return GroupSummand(rank=free, torsion=torsion)

    def is_boundary(self, x: KoszulElement) -> bool:
        """
        Whether a homogeneous element lies in the image of d2.

        Raises:
            KoszulError: If x is not homogeneous of a single bidegree
        """
        if x.is_zero:
            return True
        bidegrees = x.bidegrees()
        if len(bidegrees) != 1:
            raise KoszulError(f"Element {x} spans bidegrees {bidegrees}")
        base, fiber = bidegrees[0]
        target = self.vector(x, base, fiber)
        if not target:
            return True
        columns = self.differential(base - 2, fiber + 1)
        if self.modulus is not None:
            eliminator = FieldEliminator(self.modulus)
            for column in columns:
                eliminator.add(column)
            return eliminator.contains(target)
        return lattice_contains(integer_echelon(columns), target)

    def is_cycle(self, x: KoszulElement) -> bool:
        """d2(x) vanishes modulo the base relations."""
        image = self.d2(x)
        return all(self.quotient.is_zero(c) for c in image.components.values())


def koszul_homology(
    presentation: RingPresentation,
    tau: TransgressionData,
    max_total_degree: int
) -> KoszulHomology:
    """
    Koszul homology per bidegree up to a total degree.

    Args:
        presentation: Base presentation; its modulus fixes the coefficients
        tau: Transgression data (the fiber generators)
        max_total_degree: Highest total degree base + fiber

    Returns:
        KoszulHomology keyed by (base degree, fiber degree)

    Raises:
        KoszulError: On inconsistent inputs
        DimensionLimitError: If a chain group exceeds the budget
    """
    complex_ = KoszulComplex(presentation, tau, max_total_degree)
    groups: Dict[Bidegree, GroupSummand] = {}
    for total in range(max_total_degree + 1):
        for fiber in range(min(total, tau.rank) + 1):
            base = total - fiber
            group = complex_.homology(base, fiber)
            if not group.is_zero:
                groups[(base, fiber)] = group
    result = KoszulHomology(
        groups=groups, modulus=presentation.modulus, max_total_degree=max_total_degree
    )
    logger.info(
        f"Koszul homology of {presentation.label} through total degree "
        f"{max_total_degree}: {len(groups)} nonzero bidegrees"
    )
    return result
