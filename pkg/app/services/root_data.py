"""Root-system data for SU(n), Sp(n), E6 and E7.

Simple roots use the standard realizations (Bourbaki node ordering; E6 and
E7 sit inside the E8 lattice). Cartan entries follow
b_ij = 2(a_i, a_j) / (a_j, a_j); the adjoint transition matrix is the
transpose of the Cartan matrix.
"""

import logging
from dataclasses import dataclass, replace
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from app.config import get_settings
from app.services.polynomials import GradedRing, Polynomial, graded_ring

settings = get_settings()
logger = logging.getLogger(__name__)

IntegerMatrix = List[List[int]]


class RootDataError(Exception):
    """Custom exception for root data errors."""
    pass


class Family(str, Enum):
    """Simple Lie group families in scope."""

    SU = "SU"
    SP = "Sp"
    E6 = "E6"
    E7 = "E7"


class Lattice(str, Enum):
    """Which group in the isogeny class."""

    SIMPLY_CONNECTED = "simply-connected"
    ADJOINT = "adjoint"


# Orders of the centers of the simply connected groups
CENTER_ORDERS = {
    Family.SU: lambda n: n,
    Family.SP: lambda n: 2,
    Family.E6: lambda n: 3,
    Family.E7: lambda n: 2,
}

_ALIASES = {
    "SU": (Family.SU, Lattice.SIMPLY_CONNECTED),
    "PSU": (Family.SU, Lattice.ADJOINT),
    "SP": (Family.SP, Lattice.SIMPLY_CONNECTED),
    "PSP": (Family.SP, Lattice.ADJOINT),
    "E6": (Family.E6, Lattice.SIMPLY_CONNECTED),
    "PE6": (Family.E6, Lattice.ADJOINT),
    "E7": (Family.E7, Lattice.SIMPLY_CONNECTED),
    "PE7": (Family.E7, Lattice.ADJOINT),
}


@dataclass(frozen=True)
class GroupSpec:
    """Which group (family, rank parameter, lattice) is being computed."""

    family: Family
    n: int
    lattice: Lattice = Lattice.ADJOINT

    def __post_init__(self):
        family = Family(self.family)
        object.__setattr__(self, "family", family)
        object.__setattr__(self, "lattice", Lattice(self.lattice))
        if family is Family.SU and self.n < 2:
            raise RootDataError(f"SU(n) requires n >= 2, got {self.n}")
        if family is Family.SP and self.n < 1:
            raise RootDataError(f"Sp(n) requires n >= 1, got {self.n}")
        if family is Family.E6 and self.n != 6:
            raise RootDataError(f"E6 has rank parameter 6, got {self.n}")
        if family is Family.E7 and self.n != 7:
            raise RootDataError(f"E7 has rank parameter 7, got {self.n}")

    @classmethod
    def parse(cls, name: str, n: Optional[int] = None) -> "GroupSpec":
        """
        Build a spec from a group name such as "PSU", "Sp" or "PE7".

        Args:
            name: Group name, case-insensitive
            n: Rank parameter (ignored for the exceptional groups)

        Returns:
            Validated GroupSpec

        Raises:
            RootDataError: If the name is unknown or n is missing
        """
        key = name.strip().upper()
        if key not in _ALIASES:
            raise RootDataError(f"Unsupported group {name!r}")
        family, lattice = _ALIASES[key]
        if family is Family.E6:
            n = 6
        elif family is Family.E7:
            n = 7
        elif n is None:
            raise RootDataError(f"Group {name} needs a rank parameter n")
        return cls(family, int(n), lattice)

    @property
    def rank(self) -> int:
        if self.family is Family.SU:
            return self.n - 1
        return self.n

    @property
    def dimension(self) -> int:
        """Dimension of G as a manifold."""
        if self.family is Family.SU:
            return self.n * self.n - 1
        if self.family is Family.SP:
            return self.n * (2 * self.n + 1)
        return {Family.E6: 78, Family.E7: 133}[self.family]

    @property
    def center_order(self) -> int:
        return CENTER_ORDERS[self.family](self.n)

    @property
    def quotient_order(self) -> int:
        if self.lattice is Lattice.SIMPLY_CONNECTED:
            return 1
        return self.center_order

    @property
    def is_adjoint(self) -> bool:
        return self.lattice is Lattice.ADJOINT

    @property
    def is_exceptional(self) -> bool:
        return self.family in (Family.E6, Family.E7)

    @property
    def varpi(self) -> str:
        """Name of the surviving weight after restriction along the transgression."""
        return "w2" if self.family is Family.E7 else "w1"

    @property
    def omega_names(self) -> List[str]:
        return [f"w{i}" for i in range(1, self.rank + 1)]

    @property
    def label(self) -> str:
        prefix = "P" if self.is_adjoint else ""
        if self.is_exceptional:
            return f"{prefix}{self.family.value}"
        return f"{prefix}{self.family.value}({self.n})"

    @property
    def base_label(self) -> str:
        return replace(self, lattice=Lattice.SIMPLY_CONNECTED).label

    def adjoint(self) -> "GroupSpec":
        return replace(self, lattice=Lattice.ADJOINT)

    def simply_connected(self) -> "GroupSpec":
        return replace(self, lattice=Lattice.SIMPLY_CONNECTED)

    def __str__(self) -> str:
        return self.label


@dataclass
class TransgressionData:
    """Images of the fiber generators t_i under the transgression."""

    spec: GroupSpec
    fiber_names: List[str]
    images: List[Polynomial]
    matrix: IntegerMatrix
    varpi: Optional[Polynomial] = None

    @property
    def ring(self) -> GradedRing:
        return self.images[0].ring

    @property
    def rank(self) -> int:
        return len(self.images)

    @property
    def with_circle(self) -> bool:
        return self.varpi is not None


def omega_ring(spec: GroupSpec, modulus: Optional[int] = None) -> GradedRing:
    """Polynomial ring on the fundamental weights w1..wm (degree 2)."""
    names = tuple(spec.omega_names)
    return graded_ring(names, (2,) * len(names), modulus)


def _unit(dimension: int, i: int, scale: Fraction = Fraction(1)) -> List[Fraction]:
    vector = [Fraction(0)] * dimension
    vector[i] = scale
    return vector


def _minus(a: List[Fraction], b: List[Fraction]) -> List[Fraction]:
    return [x - y for x, y in zip(a, b)]


def simple_roots(spec: GroupSpec) -> List[List[Fraction]]:
    """
    Simple roots in the standard Euclidean realization.

    Args:
        spec: Group specification

    Returns:
        m vectors with rational coordinates, in Bourbaki order

    Raises:
        RootDataError: If the family is not supported
    """
    if spec.family is Family.SU:
        dim = spec.n
        return [_minus(_unit(dim, i), _unit(dim, i + 1)) for i in range(spec.n - 1)]
    if spec.family is Family.SP:
        dim = spec.n
        roots = [_minus(_unit(dim, i), _unit(dim, i + 1)) for i in range(spec.n - 1)]
        roots.append(_unit(dim, spec.n - 1, Fraction(2)))
        return roots
    if spec.family in (Family.E6, Family.E7):
        half = Fraction(1, 2)
        roots = [[half] + [-half] * 6 + [half]]
        roots.append([Fraction(1), Fraction(1)] + [Fraction(0)] * 6)
        for i in range(4 if spec.family is Family.E6 else 5):
            roots.append(_minus(_unit(8, i + 1), _unit(8, i)))
        return roots
    raise RootDataError(f"Unsupported family {spec.family}")


def _inner(a: List[Fraction], b: List[Fraction]) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def cartan_matrix(spec: GroupSpec) -> IntegerMatrix:
    """
    Cartan matrix b_ij = 2(a_i, a_j) / (a_j, a_j).

    Args:
        spec: Group specification (the lattice does not matter)

    Returns:
        m x m integer matrix in Bourbaki node order

    Raises:
        RootDataError: If an entry is not an integer or the shape is wrong
    """
    roots = simple_roots(spec)
    if len(roots) != spec.rank:
        raise RootDataError(f"{spec} has rank {spec.rank}, got {len(roots)} simple roots")
    matrix: IntegerMatrix = []
    for a in roots:
        row = []
        for b in roots:
            value = 2 * _inner(a, b) / _inner(b, b)
            if value.denominator != 1:
                raise RootDataError(f"Non-integral Cartan entry {value} for {spec}")
            row.append(int(value))
        matrix.append(row)

    for i, row in enumerate(matrix):
        if row[i] != 2 or any(v > 0 for j, v in enumerate(row) if j != i):
            raise RootDataError(f"Malformed Cartan matrix for {spec}: {matrix}")
    return matrix


def positive_roots(spec: GroupSpec) -> List[Tuple[int, ...]]:
    """
    Positive roots as coefficient vectors over the simple roots, by height.

    A root beta extends to beta + a_i when p - <beta, a_i^v> > 0, where p is
    the length of the a_i-string below beta.
    """
    matrix = cartan_matrix(spec)
    m = len(matrix)
    simple = [tuple(1 if j == i else 0 for j in range(m)) for i in range(m)]
    roots = list(simple)
    known = set(roots)
    layer = list(simple)
    while layer:
        grown = []
        for beta in layer:
            for i in range(m):
                pairing = sum(beta[j] * matrix[j][i] for j in range(m))
                p = 0
                lower = list(beta)
                while True:
                    lower[i] -= 1
                    if tuple(lower) not in known:
                        break
                    p += 1
                if p - pairing <= 0:
                    continue
                raised = tuple(b + (1 if j == i else 0) for j, b in enumerate(beta))
                if raised not in known:
                    known.add(raised)
                    grown.append(raised)
        roots.extend(grown)
        layer = grown
    return roots


def exponents(spec: GroupSpec) -> List[int]:
    """
    Exponents of the Weyl group: the partition dual to the root counts by height.

    H*(G; Q) is an exterior algebra on classes of degree 2e + 1.
    """
    counts: Dict[int, int] = {}
    for root in positive_roots(spec):
        height = sum(root)
        counts[height] = counts.get(height, 0) + 1
    result = []
    top = max(counts)
    for e in range(1, top + 1):
        result += [e] * (counts.get(e, 0) - counts.get(e + 1, 0))
    return sorted(result)


def transpose(matrix: IntegerMatrix) -> IntegerMatrix:
    return [list(col) for col in zip(*matrix)]


def transition_matrix(spec: GroupSpec) -> IntegerMatrix:
    """Identity for the simply connected group, A^t for the adjoint group."""
    if spec.lattice is Lattice.SIMPLY_CONNECTED:
        m = spec.rank
        return [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    return transpose(cartan_matrix(spec))


def transgression(spec: GroupSpec, with_circle: bool = False) -> TransgressionData:
    """
    Transgression images tau(t_i) = sum_j C_ji w_j.

    Args:
        spec: Group specification
        with_circle: Append tau'(t0) = varpi for the circle-extended torus

    Returns:
        TransgressionData with images in the weight ring

    Raises:
        RootDataError: If the circle is requested for a group without center quotient
    """
    if with_circle and (not spec.is_adjoint or spec.quotient_order <= 1):
        raise RootDataError(
            f"The circle extension needs an adjoint group with q > 1, got {spec}"
        )
    ring = omega_ring(spec)
    weights = [ring.gen(name) for name in spec.omega_names]
    transition = transition_matrix(spec)
    m = spec.rank

    matrix = [[transition[j][i] for j in range(m)] for i in range(m)]
    images = []
    for row in matrix:
        image = ring.zero
        for coeff, weight in zip(row, weights):
            if coeff:
                image = image + coeff * weight
        images.append(image)
    fiber_names = [f"t{i}" for i in range(1, m + 1)]

    varpi = None
    if with_circle:
        varpi = ring.gen(spec.varpi)
        images.append(varpi)
        fiber_names.append("t0")
        matrix.append([1 if name == spec.varpi else 0 for name in spec.omega_names])

    logger.debug(f"Transgression for {spec}: {[str(i) for i in images]}")
    return TransgressionData(
        spec=spec,
        fiber_names=fiber_names,
        images=images,
        matrix=matrix,
        varpi=varpi
    )
