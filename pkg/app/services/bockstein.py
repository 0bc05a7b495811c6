"""Bockstein operations on the 1-forms of PG and the Bockstein complexes of PE6, PE7.

The Bockstein of a form zeta with characteristic polynomial P is computed
from an integral lift P0 in the transgression ideal with P0 = P mod p:
writing P0 = sum mu_j R_j + p*z, the value is the restriction of z to
E3^{*,0}(PG).

The complexes {H*(PG; F_p), delta_p} are finite graded-commutative algebras
Im(pi*) x (exterior and Delta generators) on which delta_p is a derivation.
"""

import logging
from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from app.config import get_settings
from app.services.binomial import t_coefficient
from app.services.charpolys import CharPolyError, check_prime, h_degree
from app.services.flag import (
    FlagError,
    chern_indices,
    e3_quotient,
    restrict,
    restricted_ring,
    symbol_relations,
    symbol_ring,
)
from app.services.forms import FormError, OneForm, in_tau_ideal, relation_witness
from app.services.linalg import (
    FieldEliminator,
    GradedAbelianGroup,
    GroupSummand,
    LinearAlgebraError,
    SparseRow,
)
from app.services.polynomials import GradedRing, Polynomial, graded_ring
from app.services.root_data import Family, GroupSpec
from app.tables.char_polys import get_bockstein_values, get_quotient_forms
from app.tables.complexes import ComplexRecord, get_complex
from app.tables.symbols import Symbols

settings = get_settings()
logger = logging.getLogger(__name__)

Subset = Tuple[int, ...]


class BocksteinError(Exception):
    """Custom exception for Bockstein computation errors."""
    pass


# Bockstein of a 1-form


def integral_lift(spec: GroupSpec, p: int, s: int) -> Polynomial:
    """
    Integral polynomial P0 in the transgression ideal of PG reducing to zeta_{2s-1}.

    For E6 and E7 this is the tabulated integral polynomial. For SU(n) and
    Sp(n) it is H = c_s - t*c_h*varpi^(s-h) (H = c_s below h) corrected by
    its binomial restriction, which is divisible by p.

    Raises:
        BocksteinError: If s is not a quotient degree or no lift is found
    """
    adjoint = spec.adjoint()
    try:
        check_prime(adjoint, p)
        h = h_degree(adjoint, p)
    except CharPolyError as e:
        raise BocksteinError(str(e))
    ring = symbol_ring(adjoint)

    if adjoint.is_exceptional:
        records = {record.s: record for record in get_quotient_forms(adjoint.family.value)}
        if s not in records:
            raise BocksteinError(f"{adjoint} has no class zeta{2 * s - 1} mod {p}")
        lift = records[s].build(Symbols(ring))
    else:
        if s not in chern_indices(adjoint) or s == h:
            raise BocksteinError(f"{adjoint} has no class zeta{2 * s - 1} mod {p}")
        lift = ring.gen(f"c{s}")
        if s > h:
            k = s if adjoint.family is Family.SU else s // 2
            t = t_coefficient(adjoint.n, k, p)
            lift = lift - t * ring.gen(f"c{h}") * ring.gen(adjoint.varpi) ** (s - h)
        correction = restrict(lift, adjoint, published=True)
        if any(c % p for c in correction.terms.values()):
            raise BocksteinError(f"Restriction {correction} of {lift} is not divisible by {p}")
        lift = lift - ring.convert(correction)

    try:
        member = in_tau_ideal(lift, adjoint)
    except FormError as e:
        raise BocksteinError(f"Membership of {lift}: {e}")
    if not member:
        raise BocksteinError(f"Lift {lift} of zeta{2 * s - 1} is not in the transgression ideal")
    return lift


def bockstein(spec: GroupSpec, p: int, form: OneForm) -> Polynomial:
    """
    beta_p of a class zeta of PG, as a normal form in the integral E3^{*,0}(PG).

    Args:
        spec: Group specification (the adjoint form is used)
        p: Prime dividing the center order
        form: The class, identified by its half-degree s

    Returns:
        Polynomial in the restricted ring over Z

    Raises:
        BocksteinError: If no lift exists or the division by p is not exact
    """
    adjoint = spec.adjoint()
    lift = integral_lift(adjoint, p, form.s)
    try:
        witness = relation_witness(lift.reduce(p), adjoint)
    except FormError as e:
        raise BocksteinError(f"{form.label} of {adjoint}: {e}")

    ring = lift.ring
    relations = dict(symbol_relations(adjoint))
    residual = lift
    for name, coeff in witness.items():
        residual = residual - ring.convert(coeff.lift()) * relations[name]
    terms = residual.terms
    if any(c % p for c in terms.values()):
        raise BocksteinError(f"{form.label}: {residual} is not divisible by {p}")
    quotient = ring.from_terms({m: c // p for m, c in terms.items()})

    try:
        image = restrict(quotient, adjoint, published=False)
        value = e3_quotient(adjoint, None).normal_form(image)
    except (FlagError, LinearAlgebraError) as e:
        raise BocksteinError(f"Reduction of beta({form.label}) in E3: {e}")
    logger.info(f"beta_{p}({form.label}) = {value} on {adjoint}")
    return value


def quotient_form(spec: GroupSpec, p: int, s: int) -> OneForm:
    """A bare zeta_{2s-1} handle for `bockstein`."""
    adjoint = spec.adjoint()
    return OneForm(f"zeta{2 * s - 1}", adjoint, integral_lift(adjoint, p, s).reduce(p), s)


def expected_bockstein(spec: GroupSpec, p: int, s: int) -> Polynomial:
    """
    Closed form of beta_p(zeta_{2s-1}), p-locally.

    SU(n), Sp(n): -(C/p)*varpi^s below h, where C is the binomial value of
    c_s, and zero above h. At p = 2 this is -2^(r-t-1)*varpi^(2^t) for
    s = 2^t (SU) and varpi^(2^r) for s = 2^r (Sp), zero otherwise.
    E6, E7: the tabulated values.
    """
    adjoint = spec.adjoint()
    ring = restricted_ring(adjoint)
    if adjoint.is_exceptional:
        values = get_bockstein_values(adjoint.family.value)
        if s not in values:
            raise BocksteinError(f"No tabulated value for zeta{2 * s - 1} of {adjoint}")
        return values[s](Symbols(ring))
    h = h_degree(adjoint, p)
    if s > h:
        return ring.zero
    k = s if adjoint.family is Family.SU else s // 2
    return -(comb(adjoint.n, k) // p) * ring.gen(adjoint.varpi) ** s


def stated_bockstein(spec: GroupSpec, p: int, s: int) -> Polynomial:
    """
    beta_p(zeta_{2s-1}) in the prime-power form: -p^(r-t-1)*varpi^(p^t) when
    s = p^t with t < r (SU), varpi^(2^r) when s = 2^r (Sp), zero otherwise.
    """
    adjoint = spec.adjoint()
    if adjoint.is_exceptional:
        return expected_bockstein(adjoint, p, s)
    ring = restricted_ring(adjoint)
    varpi = ring.gen(adjoint.varpi)
    h = h_degree(adjoint, p)
    if adjoint.family is Family.SP:
        return varpi ** s if 2 * s == h else ring.zero
    r = 0
    while p ** (r + 1) <= h:
        r += 1
    for t in range(1, r):
        if s == p ** t:
            return -(p ** (r - t - 1)) * varpi ** s
    return ring.zero


@dataclass
class BocksteinValue:
    """A computed Bockstein next to its closed form."""

    label: str
    s: int
    value: Polynomial
    expected: Polynomial
    matches: bool


def check_bockstein(spec: GroupSpec, p: int, s: int) -> BocksteinValue:
    """Compute beta_p(zeta_{2s-1}) and compare with the closed form p-locally."""
    adjoint = spec.adjoint()
    form = quotient_form(adjoint, p, s)
    value = bockstein(adjoint, p, form)
    expected = expected_bockstein(adjoint, p, s)
    quotient = e3_quotient(adjoint, None)
    difference = value - quotient.ring.convert(expected)
    matches = difference.is_zero or quotient.is_zero_p_local(difference, p)
    if not matches:
        logger.warning(f"beta_{p}({form.label}) = {value}, expected {expected} on {adjoint}")
    return BocksteinValue(form.label, s, value, expected, matches)


# Bockstein complexes


class ComplexElement:
    """
    Element of a Bockstein complex: odd index subset -> even coefficient.

    Subsets are sorted tuples of odd-generator positions.
    """

    def __init__(self, complex_: "BocksteinComplex", components: Mapping[Subset, Polynomial]):
        self.complex = complex_
        clean = {}
        for subset, coeff in components.items():
            coeff = complex_.truncate(coeff)
            if not coeff.is_zero:
                clean[tuple(subset)] = coeff
        self._components = clean

    @property
    def components(self) -> Dict[Subset, Polynomial]:
        return dict(self._components)

    @property
    def is_zero(self) -> bool:
        return not self._components

    def degrees(self) -> List[int]:
        found = set()
        for subset, coeff in self._components.items():
            odd = sum(self.complex.odd[i].degree for i in subset)
            for monomial in coeff.terms:
                found.add(odd + coeff.ring.monomial_degree(monomial))
        return sorted(found)

    def __add__(self, other: "ComplexElement") -> "ComplexElement":
        result = dict(self._components)
        for subset, coeff in other._components.items():
            result[subset] = result[subset] + coeff if subset in result else coeff
        return ComplexElement(self.complex, result)

    def __neg__(self) -> "ComplexElement":
        return ComplexElement(self.complex, {s: -c for s, c in self._components.items()})

    def __sub__(self, other: "ComplexElement") -> "ComplexElement":
        return self + (-other)

    def __mul__(self, other) -> "ComplexElement":
        if isinstance(other, ComplexElement):
            return self.complex.multiply(self, other)
        return ComplexElement(
            self.complex, {s: c * other for s, c in self._components.items()}
        )

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, ComplexElement):
            return NotImplemented
        return (self - other).is_zero

    def to_text(self) -> str:
        if self.is_zero:
            return "0"
        pieces = []
        for subset in sorted(self._components):
            coeff = self._components[subset]
            odd = "*".join(self.complex.odd[i].name for i in subset)
            if not odd:
                pieces.append(coeff.to_text())
            elif coeff == coeff.ring.one:
                pieces.append(odd)
            else:
                pieces.append(f"({coeff.to_text()})*{odd}")
        return " + ".join(pieces)

    def __str__(self) -> str:
        return self.to_text()


@dataclass
class _OddData:
    name: str
    degree: int
    differential: Polynomial
    square: Optional[Polynomial]

    @property
    def flavor(self) -> str:
        return "exterior" if self.square is None else "delta"


class BocksteinComplex:
    """
    Finite graded-commutative F_p-algebra with the derivation delta_p.

    Args:
        record: Curated generators and differentials
    """

    def __init__(self, record: ComplexRecord):
        self.record = record
        self.label = record.label
        self.p = record.prime
        self.even = list(record.even)
        self.ring: GradedRing = graded_ring(
            tuple(g.name for g in self.even), tuple(g.degree for g in self.even), self.p
        )
        self.heights = tuple(g.height for g in self.even)
        symbols = Symbols(self.ring)
        self.odd: List[_OddData] = []
        for gen in record.odd:
            square = gen.square(symbols) if gen.square is not None else None
            if self.p != 2 and square is not None and not square.is_zero:
                raise BocksteinError(f"{gen.name} cannot have a nonzero square over F{self.p}")
            self.odd.append(_OddData(gen.name, gen.degree, gen.differential(symbols), square))
        self._odd_index = {gen.name: i for i, gen in enumerate(self.odd)}
        self._basis: Dict[int, List[Tuple[Tuple[int, ...], Subset]]] = {}
        self._ranks: Dict[int, int] = {}

    # Algebra

    @property
    def top_degree(self) -> int:
        even = sum((g.height - 1) * g.degree for g in self.even)
        return even + sum(g.degree for g in self.odd)

    def truncate(self, poly: Polynomial) -> Polynomial:
        """Drop the terms killed by the truncations y^height = 0."""
        poly = self.ring.convert(poly)
        return self.ring.from_terms({
            m: c for m, c in poly.terms.items()
            if all(e < h for e, h in zip(m, self.heights))
        })

    def element(self, components: Mapping[Subset, Polynomial]) -> ComplexElement:
        return ComplexElement(self, components)

    def even_element(self, poly: Polynomial) -> ComplexElement:
        return ComplexElement(self, {(): poly})

    def gen(self, name: str) -> ComplexElement:
        if name in self._odd_index:
            return ComplexElement(self, {(self._odd_index[name],): self.ring.one})
        return self.even_element(self.ring.gen(name))

    def odd_product(self, names: Sequence[str]) -> ComplexElement:
        result = self.even_element(self.ring.one)
        for name in names:
            result = result * self.gen(name)
        return result

    @property
    def one(self) -> ComplexElement:
        return self.even_element(self.ring.one)

    @property
    def symbols(self) -> Symbols:
        return Symbols(self.ring)

    def _merge(self, left: Subset, right: Subset) -> Tuple[int, Subset, Polynomial]:
        """
        Product of two odd monomials as sign * square-factor * monomial.
        """
        sequence = list(left) + list(right)
        inversions = sum(
            1 for i in range(len(sequence)) for j in range(i + 1, len(sequence))
            if sequence[i] > sequence[j]
        )
        sign = -1 if inversions % 2 else 1
        factor = self.ring.one
        result = []
        for index in sorted(sequence):
            if result and result[-1] == index:
                result.pop()
                square = self.odd[index].square
                if square is None:
                    return 0, (), self.ring.zero
                factor = factor * square
            else:
                result.append(index)
        return sign, tuple(result), factor

    def multiply(self, a: ComplexElement, b: ComplexElement) -> ComplexElement:
        result: Dict[Subset, Polynomial] = {}
        for left, x in a.components.items():
            for right, y in b.components.items():
                sign, subset, factor = self._merge(left, right)
                if sign == 0:
                    continue
                term = self.truncate(x * y * factor)
                if term.is_zero:
                    continue
                term = term if sign > 0 else -term
                result[subset] = result[subset] + term if subset in result else term
        return ComplexElement(self, result)

    def delta(self, x: ComplexElement) -> ComplexElement:
        """delta_p as the derivation fixing Im(pi*) with the recorded generator values."""
        result: Dict[Subset, Polynomial] = {}
        for subset, coeff in x.components.items():
            for j, i in enumerate(subset):
                image = self.odd[i].differential
                if image.is_zero:
                    continue
                term = self.truncate(coeff * image)
                if term.is_zero:
                    continue
                if j % 2:
                    term = -term
                rest = subset[:j] + subset[j + 1:]
                result[rest] = result[rest] + term if rest in result else term
        return ComplexElement(self, result)

    # Linear algebra

    def basis(self, degree: int) -> List[Tuple[Tuple[int, ...], Subset]]:
        """(even monomial, odd subset) pairs spanning one degree."""
        if degree in self._basis:
            return self._basis[degree]
        entries = []
        for size in range(len(self.odd) + 1):
            for subset in combinations(range(len(self.odd)), size):
                odd = sum(self.odd[i].degree for i in subset)
                if odd > degree:
                    continue
                for monomial in self.ring.monomials(degree - odd):
                    if all(e < h for e, h in zip(monomial, self.heights)):
                        entries.append((monomial, subset))
        self._basis[degree] = entries
        return entries

    def basis_element(self, entry: Tuple[Tuple[int, ...], Subset]) -> ComplexElement:
        monomial, subset = entry
        return ComplexElement(self, {subset: self.ring.monomial(monomial)})

    def vector(self, x: ComplexElement, degree: int) -> SparseRow:
        index = {entry: i for i, entry in enumerate(self.basis(degree))}
        row: SparseRow = {}
        for subset, coeff in x.components.items():
            for monomial, c in coeff.terms.items():
                key = (monomial, subset)
                if key not in index:
                    raise BocksteinError(f"{x} has a term outside degree {degree}")
                row[index[key]] = c % self.p
        return row

    def rank(self, degree: int) -> int:
        """Rank of delta_p from `degree` to `degree + 1`."""
        if degree in self._ranks:
            return self._ranks[degree]
        if degree < 0:
            return 0
        eliminator = FieldEliminator(self.p)
        for entry in self.basis(degree):
            image = self.delta(self.basis_element(entry))
            if not image.is_zero:
                eliminator.add(self.vector(image, degree + 1))
        self._ranks[degree] = len(eliminator)
        return self._ranks[degree]

    def check_square_zero(self):
        """
        Verify delta_p(delta_p(b)) = 0 on every basis element.

        Raises:
            BocksteinError: On the first failure
        """
        for degree in range(self.top_degree + 1):
            for entry in self.basis(degree):
                twice = self.delta(self.delta(self.basis_element(entry)))
                if not twice.is_zero:
                    raise BocksteinError(
                        f"delta^2 != 0 on {self.basis_element(entry)} in {self.label}: {twice}"
                    )

    def is_boundary(self, x: ComplexElement) -> bool:
        degrees = x.degrees()
        if not degrees:
            return True
        if len(degrees) > 1:
            raise BocksteinError(f"{x} is not homogeneous")
        degree = degrees[0]
        eliminator = FieldEliminator(self.p)
        for entry in self.basis(degree - 1):
            image = self.delta(self.basis_element(entry))
            if not image.is_zero:
                eliminator.add(self.vector(image, degree))
        return eliminator.contains(self.vector(x, degree))

    def total_dimension(self) -> int:
        return sum(len(self.basis(d)) for d in range(self.top_degree + 1))


def bockstein_complex(group: str) -> BocksteinComplex:
    """The curated complex {H*(PG; F_p), delta_p} for "PE6" or "PE7"."""
    try:
        record = get_complex(group)
    except KeyError:
        raise BocksteinError(f"No Bockstein complex is curated for {group}")
    return BocksteinComplex(record)


# Image presentation


@dataclass
class ModuleRelation:
    """A relation sum a_K * c_K over Im(pi*), or a product relation checked in the algebra."""

    name: str
    text: str
    holds: bool


@dataclass
class ImagePresentation:
    """
    Im delta_p = (A0^+ + A0-module on the c_K) x Lambda(cycles).

    The module part is presented by the linear relations; products of two
    c_K are re-expressed by the product relations.
    """

    generators: List[Tuple[str, int]]
    linear: List[Tuple[str, Dict[str, Polynomial]]]
    relations: List[ModuleRelation]
    exterior: List[str]
    dimensions: Dict[int, int] = field(default_factory=dict)

    @property
    def total_dimension(self) -> int:
        return sum(self.dimensions.values())


def _c_name(complex_: BocksteinComplex, subset: Subset) -> str:
    return "c_" + "_".join(complex_.odd[i].name.replace("varsigma", "") for i in subset)


def koszul_indices(complex_: BocksteinComplex) -> List[int]:
    """Odd generators whose differential is a polynomial generator."""
    return [i for i, gen in enumerate(complex_.odd) if not gen.differential.is_zero]


def c_class(complex_: BocksteinComplex, subset: Subset) -> ComplexElement:
    """c_K = delta_p(varsigma_K)."""
    return complex_.delta(complex_.odd_product([complex_.odd[i].name for i in subset]))


def _height_of(complex_: BocksteinComplex, poly: Polynomial) -> int:
    names = poly.variables()
    if len(names) != 1 or len(poly.terms) != 1:
        raise BocksteinError(f"Differential {poly} is not a single generator")
    return complex_.heights[complex_.ring.index(names[0])]


def image_presentation(complex_: BocksteinComplex) -> ImagePresentation:
    """
    Presentation of Im delta_p on the classes c_K, |K| >= 2.

    Linear relations: D_K = sum_j (-1)^j x_{t_j} c_{K - t_j} for |K| >= 3 and
    R_K = (prod x_t^(h_t - 1)) c_K. Product relations (checked inside the
    algebra): c_K^2 = 0 over odd p, and over F2
    c_I c_J = sum_{t in I} x_t * prod_{s in I_t & J} varsigma_s^2 * c_{I_t ^ J}.
    """
    p = complex_.p
    ring = complex_.ring
    indices = koszul_indices(complex_)
    subsets = [
        subset for size in range(2, len(indices) + 1)
        for subset in combinations(indices, size)
    ]
    generators = []
    elements: Dict[Subset, ComplexElement] = {}
    for subset in subsets:
        c = c_class(complex_, subset)
        elements[subset] = c
        degree = sum(complex_.odd[i].degree for i in subset) + 1
        generators.append((_c_name(complex_, subset), degree))

    linear: List[Tuple[str, Dict[str, Polynomial]]] = []
    relations: List[ModuleRelation] = []
    for subset in subsets:
        if len(subset) >= 3:
            coefficients: Dict[str, Polynomial] = {}
            total = complex_.element({})
            for j, i in enumerate(subset):
                x = complex_.odd[i].differential
                x = -x if j % 2 else x
                rest = subset[:j] + subset[j + 1:]
                coefficients[_c_name(complex_, rest)] = x
                total = total + elements[rest] * x
            name = "D" + _c_name(complex_, subset)[1:]
            linear.append((name, coefficients))
            relations.append(ModuleRelation(name, _linear_text(coefficients), total.is_zero))
        annihilator = ring.one
        for i in subset:
            x = complex_.odd[i].differential
            annihilator = annihilator * x ** (_height_of(complex_, x) - 1)
        name = "R" + _c_name(complex_, subset)[1:]
        coefficients = {_c_name(complex_, subset): annihilator}
        linear.append((name, coefficients))
        relations.append(
            ModuleRelation(name, _linear_text(coefficients), (elements[subset] * annihilator).is_zero)
        )

    for a, first in enumerate(subsets):
        for second in subsets[a:]:
            product = elements[first] * elements[second]
            if p != 2:
                if first != second:
                    continue
                rhs = complex_.element({})
            else:
                rhs = complex_.element({})
                for t in first:
                    rest = tuple(i for i in first if i != t)
                    factor = complex_.even_element(complex_.odd[t].differential)
                    for s in set(rest) & set(second):
                        square = complex_.odd[s].square
                        factor = factor * complex_.even_element(
                            square if square is not None else ring.zero
                        )
                    difference = tuple(sorted(set(rest) ^ set(second)))
                    rhs = rhs + factor * c_class(complex_, difference)
            name = f"S({_c_name(complex_, first)},{_c_name(complex_, second)})"
            relations.append(ModuleRelation(
                name,
                f"{_c_name(complex_, first)}*{_c_name(complex_, second)} = {rhs.to_text()}",
                (product - rhs).is_zero,
            ))

    exterior = [gen.name for gen in complex_.odd if gen.differential.is_zero]
    presentation = ImagePresentation(
        generators=[(g.name, g.degree) for g in complex_.even] + generators,
        linear=linear,
        relations=relations,
        exterior=exterior,
    )
    presentation.dimensions = _presentation_dimensions(complex_, presentation, generators)
    return presentation


def _linear_text(coefficients: Dict[str, Polynomial]) -> str:
    return " + ".join(
        name if coeff == coeff.ring.one else f"({coeff.to_text()})*{name}"
        for name, coeff in coefficients.items()
    )


def _presentation_dimensions(
    complex_: BocksteinComplex,
    presentation: ImagePresentation,
    module_generators: List[Tuple[str, int]]
) -> Dict[int, int]:
    """Dimension per degree of (A0^+ + module) x Lambda(exterior)."""
    ring = complex_.ring
    top = complex_.top_degree
    even_dims: Dict[int, int] = {}
    even_basis: Dict[int, List[Tuple[int, ...]]] = {}
    for degree in range(top + 1):
        monomials = [
            m for m in ring.monomials(degree)
            if all(e < h for e, h in zip(m, complex_.heights))
        ]
        even_basis[degree] = monomials
        if monomials and degree > 0:
            even_dims[degree] = len(monomials)

    module_dims: Dict[int, int] = {}
    generator_degree = dict(module_generators)
    for degree in range(top + 1):
        basis = [
            (m, name) for name, d in module_generators if d <= degree
            for m in even_basis.get(degree - d, [])
        ]
        if not basis:
            continue
        index = {entry: i for i, entry in enumerate(basis)}
        eliminator = FieldEliminator(complex_.p)
        for _, coefficients in presentation.linear:
            relation_degree = None
            for name, coeff in coefficients.items():
                relation_degree = coeff.degree() + generator_degree[name]
                break
            lower = degree - relation_degree
            if lower < 0:
                continue
            for m in even_basis.get(lower, []):
                row: SparseRow = {}
                for name, coeff in coefficients.items():
                    product = complex_.truncate(ring.monomial(m) * coeff)
                    for monomial, c in product.terms.items():
                        key = index[(monomial, name)]
                        row[key] = (row.get(key, 0) + c) % complex_.p
                row = {k: v for k, v in row.items() if v}
                if row:
                    eliminator.add(row)
        dimension = len(basis) - len(eliminator)
        if dimension:
            module_dims[degree] = dimension

    exterior_dims = {0: 1}
    for name in presentation.exterior:
        degree = complex_.odd[complex_._odd_index[name]].degree
        shifted = dict(exterior_dims)
        for d, count in exterior_dims.items():
            shifted[d + degree] = shifted.get(d + degree, 0) + count
        exterior_dims = shifted

    result: Dict[int, int] = {}
    for part in (even_dims, module_dims):
        for d, count in part.items():
            for e, multiplicity in exterior_dims.items():
                if d + e <= top:
                    result[d + e] = result.get(d + e, 0) + count * multiplicity
    return result


# Cohomology


@dataclass
class BocksteinCohomology:
    """Bockstein cohomology with the image of delta_p and its presentation."""

    label: str
    prime: int
    cohomology: GradedAbelianGroup
    image: GradedAbelianGroup
    presentation: ImagePresentation
    algebra_dimension: int

    @property
    def presentation_matches(self) -> bool:
        degrees = set(self.presentation.dimensions) | set(self.image.groups)
        return all(
            self.presentation.dimensions.get(d, 0) == self.image[d].rank for d in degrees
        )

    @property
    def relations_hold(self) -> bool:
        return all(relation.holds for relation in self.presentation.relations)


def bockstein_cohomology(
    complex_: BocksteinComplex,
    max_degree: Optional[int] = None
) -> BocksteinCohomology:
    """
    Kernel modulo image of delta_p per degree, with the presentation of the image.

    Args:
        complex_: The complex
        max_degree: Highest degree (defaults to the top degree)

    Returns:
        BocksteinCohomology over F_p

    Raises:
        BocksteinError: If delta_p does not square to zero
    """
    complex_.check_square_zero()
    top = complex_.top_degree if max_degree is None else min(max_degree, complex_.top_degree)
    homology: Dict[int, GroupSummand] = {}
    image: Dict[int, GroupSummand] = {}
    for degree in range(top + 1):
        dimension = len(complex_.basis(degree))
        incoming = complex_.rank(degree - 1)
        free = dimension - complex_.rank(degree) - incoming
        if free:
            homology[degree] = GroupSummand(rank=free)
        if incoming:
            image[degree] = GroupSummand(rank=incoming)
        logger.debug(f"{complex_.label}: degree {degree}, dim {dimension}, H {free}")
    presentation = image_presentation(complex_)
    result = BocksteinCohomology(
        label=complex_.label,
        prime=complex_.p,
        cohomology=GradedAbelianGroup(groups=homology, modulus=complex_.p),
        image=GradedAbelianGroup(groups=image, modulus=complex_.p),
        presentation=presentation,
        algebra_dimension=complex_.total_dimension(),
    )
    logger.info(
        f"Bockstein cohomology of {complex_.label}: dim {result.cohomology.total_rank()}, "
        f"image {result.image.total_rank()}"
    )
    return result


# Relations read off inside the complex


@dataclass
class ActionRelation:
    """An identity between products in H*(PG; F_p), with its verdict."""

    text: str
    lhs: ComplexElement
    rhs: ComplexElement
    strict: bool = True  # rho*c_K = 0 for t in K holds only for some K

    @property
    def holds(self) -> bool:
        return self.lhs == self.rhs


def reduction(complex_: BocksteinComplex, rho: str) -> ComplexElement:
    """Mod p reduction of a free generator rho, as recorded for the complex."""
    reductions = complex_.record.reductions
    if rho not in reductions:
        raise BocksteinError(f"{complex_.label} records no reduction of {rho}")
    coefficient, odd = reductions[rho]
    return complex_.gen(odd) * coefficient(complex_.symbols)


def action_relations(complex_: BocksteinComplex) -> List[ActionRelation]:
    """
    Action of the free part on the torsion classes c_K, checked mod p.

    PE6: w1*rho23 = x4^2*c_1_7, x4*rho23 = 0, c_1_7*rho23 = 0, w1*rho17 = 0.
    PE7: rho_{4t-1}*c_K = x_t*c_{K+t} for t not in K, and the stated
    vanishing rho_{4t-1}*c_K = 0 for t in K.
    """
    g = complex_.symbols
    result: List[ActionRelation] = []
    zero = complex_.element({})
    if complex_.record.group == "PE6":
        rho23 = reduction(complex_, "rho23")
        c = c_class(complex_, (0, 2))
        result.append(ActionRelation("w1*rho23 = x4^2*c_1_7", rho23 * g.w1, c * g.x4**2))
        result.append(ActionRelation("x4*rho23 = 0", rho23 * g.x4, zero))
        result.append(ActionRelation("c_1_7*rho23 = 0", c * rho23, zero))
        result.append(ActionRelation("w1*rho17 = 0", reduction(complex_, "rho17") * g.w1, zero))
        return result

    indices = koszul_indices(complex_)
    rho_of = {}
    for rho, (_, odd) in complex_.record.reductions.items():
        position = complex_._odd_index[odd]
        if position in indices:
            rho_of[position] = rho
    subsets = [
        subset for size in range(2, len(indices) + 1)
        for subset in combinations(indices, size)
    ]
    for t in indices:
        rho = rho_of[t]
        x = complex_.odd[t].differential
        for subset in subsets:
            lhs = reduction(complex_, rho) * c_class(complex_, subset)
            name = _c_name(complex_, subset)
            if t in subset:
                result.append(ActionRelation(f"{rho}*{name} = 0", lhs, zero, strict=False))
            else:
                union = tuple(sorted(subset + (t,)))
                rhs = c_class(complex_, union) * x
                result.append(ActionRelation(
                    f"{rho}*{name} = {x.to_text()}*{_c_name(complex_, union)}", lhs, rhs
                ))
    return result


# delta_p = r_p o beta_p


@dataclass
class DeltaCheck:
    """The wired value of delta_p on a generator against the reduced Bockstein."""

    generator: str
    wired: Polynomial
    computed: Optional[Polynomial]
    matches: bool


def _unit_multiple(a: Polynomial, b: Polynomial, p: int) -> bool:
    if a.is_zero or b.is_zero:
        return a.is_zero and b.is_zero
    return any((a - u * b).is_zero for u in range(1, p))


def delta_consistency(complex_: BocksteinComplex, spec: GroupSpec) -> List[DeltaCheck]:
    """
    Compare delta_p(varsigma) with the mod p reduction of beta_p, up to a unit.

    The value on iota is the generator varpi and is not recomputed.
    """
    p = complex_.p
    adjoint = spec.adjoint()
    quotient = e3_quotient(adjoint, p)
    target = quotient.ring
    g = Symbols(target)
    checks = []
    for gen_record, gen in zip(complex_.record.odd, complex_.odd):
        wired = quotient.normal_form(target.convert(gen.differential))
        if gen_record.recipe is None:
            checks.append(DeltaCheck(gen.name, wired, None, True))
            continue
        total = target.zero
        for coefficient, s in gen_record.recipe:
            beta = bockstein(adjoint, p, quotient_form(adjoint, p, s))
            total = total + coefficient(g) * target.convert(beta.reduce(p))
        computed = quotient.normal_form(total)
        checks.append(DeltaCheck(gen.name, wired, computed, _unit_multiple(computed, wired, p)))
    return checks
