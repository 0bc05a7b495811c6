"""Primary 1-forms: characteristic polynomials and the calculus on them.

A characteristic polynomial P lives in the symbol ring of G. It defines a
1-form when P lies in the ideal generated by the transgression images and
in the kernel of the map f to H*(G/T). The derivative with respect to varpi
restricts P along tau = 0 and divides by varpi; its class in E3^{*,0}(PG)
is theta-bar of the form.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from sympy.core.intfunc import igcdex

from app.config import get_settings
from app.services.flag import (
    FlagError,
    e3_degree_bound,
    e3_quotient,
    kernel_quotient,
    restrict,
    symbol_relations,
    to_flag,
)
from app.services.linalg import (
    LinearAlgebraError,
    SparseRow,
    identity_matrix,
    inverse_unimodular,
    smith_normal_form,
    solve_leftmost,
)
from app.services.polynomials import (
    GradedRing,
    Polynomial,
    PolynomialError,
    exact_divide,
    graded_ring,
    substitute,
)
from app.services.root_data import GroupSpec, TransgressionData

settings = get_settings()
logger = logging.getLogger(__name__)


class FormError(Exception):
    """Custom exception for 1-form errors."""
    pass


@dataclass
class OneForm:
    """
    A fiber-degree-1 class carried by its characteristic polynomial.

    The polynomial has cohomological degree 2s; the form has degree 2s - 1.
    """

    label: str
    spec: GroupSpec
    polynomial: Polynomial
    s: int
    witness: Dict[str, Polynomial] = field(default_factory=dict)
    theta: Optional[Polynomial] = None

    @property
    def modulus(self) -> Optional[int]:
        return self.polynomial.ring.modulus

    @property
    def coefficient_ring(self) -> str:
        return "Z" if self.modulus is None else f"F{self.modulus}"

    @property
    def degree(self) -> int:
        return 2 * self.s - 1

    def witness_text(self) -> Dict[str, str]:
        return {name: coeff.to_text() for name, coeff in self.witness.items()}


def form_label(prefix: str, s: int) -> str:
    return f"{prefix}{2 * s - 1}"


def _sparse(poly: Polynomial, index: Dict[Tuple[int, ...], int]) -> SparseRow:
    return {index[m]: c for m, c in poly.terms.items()}


# Membership in the transgression ideal


def in_tau_ideal(poly: Polynomial, spec: GroupSpec) -> bool:
    """
    Whether P lies in the ideal generated by the transgression images of spec.

    For the simply connected group the images are the weights themselves,
    so P must vanish when every weight (and chern symbol) is set to zero.
    For the adjoint group the images span the weights modulo q*varpi: the
    restriction of P must have no pure special-class terms and all
    varpi-terms divisible by q (over F_p: the restriction vanishes).

    Args:
        poly: Polynomial in the flag ring or symbol ring of spec
        spec: Group specification (the lattice selects the transgression)

    Returns:
        True if P is in the ideal
    """
    if poly.is_zero:
        return True
    if not spec.is_adjoint:
        zeros = {name: 0 for name in poly.variables() if name[0] in "wc"}
        return substitute(poly, zeros).is_zero
    try:
        image = restrict(poly, spec, published=False)
    except (FlagError, PolynomialError) as e:
        raise FormError(f"Restriction of {poly} for {spec}: {e}")
    if image.ring.modulus is not None:
        return image.is_zero
    q = spec.quotient_order
    varpi = image.ring.index(spec.varpi)
    for monomial, coeff in image.terms.items():
        if monomial[varpi] == 0 or coeff % q:
            return False
    return True


def _split(value: int, divisors: Sequence[Tuple[int, int]], modulus: Optional[int]):
    """
    Write value = sum a_k d_k over the (k, d_k) pairs, preferring the first k.

    Returns:
        Map k -> a_k, or None if no combination exists
    """
    if modulus is not None:
        for k, d in divisors:
            if d % modulus:
                return {k: (value * pow(d, -1, modulus)) % modulus}
        return None
    for k, d in divisors:
        if d and value % d == 0:
            return {k: value // d}
    coefficients: Dict[int, int] = {}
    g = 0
    for k, d in divisors:
        if not d:
            continue
        if g == 0:
            coefficients = {k: 1}
            g = d
            continue
        x, y, new_g = (int(t) for t in igcdex(g, d))
        coefficients = {j: c * x for j, c in coefficients.items()}
        coefficients[k] = y
        g = new_g
    if g == 0 or value % g:
        return None
    factor = value // g
    return {k: c * factor for k, c in coefficients.items()}


def expand_in_tau(poly: Polynomial, tau: TransgressionData) -> List[Polynomial]:
    """
    Coefficients p_i with P = sum p_i tau(t_i).

    The weights are changed to coordinates u in which the transgression
    matrix is diagonal (Smith normal form); each term is then divided by the
    first available diagonal generator, which makes the choice deterministic.

    Args:
        poly: Polynomial in the weights (chern symbols are expanded first)
        tau: Transgression data

    Returns:
        One coefficient per fiber generator, in the ring of the expanded P

    Raises:
        FormError: If P is not in the ideal
    """
    spec = tau.spec
    if any(name.startswith("c") for name in poly.variables()):
        poly = to_flag(poly, spec)
    ring = poly.ring
    modulus = ring.modulus
    weights = list(spec.omega_names)
    if poly.is_zero:
        return [ring.zero for _ in range(tau.rank)]

    matrix = [list(row) for row in tau.matrix]
    m = len(weights)
    if matrix == identity_matrix(m):
        left, right, diagonal = identity_matrix(m), identity_matrix(m), [1] * m
    else:
        try:
            snf = smith_normal_form(matrix, m)
        except LinearAlgebraError as e:
            raise FormError(f"Transgression matrix of {spec}: {e}")
        left, right, diagonal = snf.left, snf.right, snf.diagonal
    try:
        right_inverse = inverse_unimodular(right)
    except LinearAlgebraError as e:
        raise FormError(f"Change of weights for {spec}: {e}")

    others = [(n, d) for n, d in zip(ring.names, ring.degrees) if n not in weights]
    u_names = tuple(f"u{k + 1}" for k in range(m))
    u_ring = graded_ring(
        u_names + tuple(n for n, _ in others),
        (2,) * m + tuple(d for _, d in others),
        modulus,
    )
    u = [u_ring.gen(name) for name in u_names]
    to_u = {}
    for j, name in enumerate(weights):
        image = u_ring.zero
        for k in range(m):
            if right[j][k]:
                image = image + right[j][k] * u[k]
        to_u[name] = image
    try:
        moved = substitute(poly, to_u, u_ring)
    except PolynomialError as e:
        raise FormError(f"Cannot express {poly} in the weights of {spec}: {e}")

    coefficients = [u_ring.zero for _ in range(tau.rank)]
    for monomial, coeff in moved.items():
        divisors = [
            (k, diagonal[k]) for k in range(min(m, len(diagonal))) if monomial[k] > 0
        ]
        split = _split(coeff, divisors, modulus)
        if split is None:
            raise FormError(f"{poly} is not in the transgression ideal of {spec}")
        for k, a in split.items():
            lowered = list(monomial)
            lowered[k] -= 1
            quotient = a * u_ring.monomial(tuple(lowered))
            for i in range(tau.rank):
                if left[k][i]:
                    coefficients[i] = coefficients[i] + left[k][i] * quotient

    back = {}
    for k, name in enumerate(u_names):
        image = ring.zero
        for j, weight in enumerate(weights):
            if right_inverse[k][j]:
                image = image + right_inverse[k][j] * ring.gen(weight)
        back[name] = image
    result = [substitute(c, back, ring) for c in coefficients]

    total = ring.zero
    for coeff, image in zip(result, tau.images):
        total = total + coeff * ring.convert(image)
    if total != poly:
        raise FormError(f"Expansion of {poly} in the transgression images failed to verify")
    return result


# Membership in ker f


def relation_columns(
    spec: GroupSpec,
    ring: GradedRing,
    degree: int
) -> Tuple[List[Tuple[str, Tuple[int, ...]]], List[SparseRow], Dict[Tuple[int, ...], int]]:
    """
    The products m * R_j spanning the relation ideal in one degree.

    Returns:
        (tags (relation name, monomial), sparse columns, monomial index)
    """
    index = {m: i for i, m in enumerate(ring.monomials(degree))}
    tags: List[Tuple[str, Tuple[int, ...]]] = []
    columns: List[SparseRow] = []
    for name, relation in symbol_relations(spec, ring.modulus):
        relation = ring.convert(relation)
        lower = degree - relation.degree()
        if lower < 0:
            continue
        for m in ring.monomials(lower):
            tags.append((name, m))
            columns.append(_sparse(ring.monomial(m) * relation, index))
    return tags, columns, index


def relation_witness(poly: Polynomial, spec: GroupSpec) -> Dict[str, Polynomial]:
    """
    Coefficients mu_j with P = sum mu_j R_j over F_p.

    Args:
        poly: Homogeneous polynomial in the symbol ring over F_p
        spec: Group specification

    Returns:
        Relation name -> coefficient polynomial (zero coefficients omitted)

    Raises:
        FormError: If P is not in the relation ideal
    """
    ring = poly.ring
    if ring.modulus is None:
        raise FormError("relation_witness solves over F_p; use in_kernel over Z")
    if poly.is_zero:
        return {}
    try:
        degree = poly.degree()
    except PolynomialError as e:
        raise FormError(str(e))
    tags, columns, index = relation_columns(spec, ring, degree)
    solution = solve_leftmost(columns, _sparse(poly, index), ring.modulus)
    if solution is None:
        raise FormError(f"{poly} is not in the relation ideal of {spec.base_label}/T")
    witness: Dict[str, Polynomial] = {}
    for (name, monomial), value in zip(tags, solution):
        if value:
            witness[name] = witness.get(name, ring.zero) + value * ring.monomial(monomial)
    return {name: coeff for name, coeff in witness.items() if not coeff.is_zero}


def check_witness(poly: Polynomial, spec: GroupSpec, witness: Dict[str, Polynomial]) -> bool:
    """Re-multiply a relation witness and compare with P exactly."""
    ring = poly.ring
    relations = dict(symbol_relations(spec, ring.modulus))
    total = ring.zero
    for name, coeff in witness.items():
        total = total + ring.convert(coeff) * ring.convert(relations[name])
    return total == poly


def in_kernel(poly: Polynomial, spec: GroupSpec) -> bool:
    """
    Whether f(P) = 0 in H*(G/T), checked degreewise in the symbol ring.

    Over F_p a relation witness is searched; over Z the class of P in the
    symbol ring modulo the relations must vanish.
    """
    if poly.is_zero:
        return True
    if poly.ring.modulus is not None:
        try:
            relation_witness(poly, spec)
            return True
        except FormError:
            return False
    try:
        degree = poly.degree()
        quotient = kernel_quotient(spec, None, degree)
        return quotient.is_zero(poly)
    except (PolynomialError, LinearAlgebraError) as e:
        raise FormError(f"Kernel check for {poly}: {e}")


# The varpi-derivation and theta-bar


def derivative_wrt_varpi(
    poly: Polynomial,
    spec: GroupSpec,
    published: bool = True
) -> Polynomial:
    """
    dP/dvarpi = (P restricted along tau = 0) / varpi.

    Args:
        poly: Polynomial in the symbol ring (or flag ring) of G
        spec: Adjoint group specification
        published: Restrict chern symbols through the binomial values

    Returns:
        Polynomial in the restricted ring

    Raises:
        FormError: If the restriction is not divisible by varpi
    """
    adjoint = spec.adjoint()
    try:
        restricted = restrict(poly, adjoint, published=published)
    except FlagError as e:
        raise FormError(f"Restriction of {poly}: {e}")
    try:
        return exact_divide(restricted, adjoint.varpi)
    except PolynomialError as e:
        raise FormError(
            f"{poly} is not in the extended transgression ideal of {adjoint}: {e}"
        )


def theta_bar(poly: Polynomial, spec: GroupSpec) -> Polynomial:
    """
    Class of dP/dvarpi in E3^{*,0}(PG), as a normal form.

    The quotient is taken over the coefficient ring of P.

    Raises:
        FormError: If the derivative does not exist or exceeds the degree bound
    """
    adjoint = spec.adjoint()
    derivative = derivative_wrt_varpi(poly, adjoint)
    if derivative.is_zero:
        return derivative
    quotient = e3_quotient(adjoint, poly.ring.modulus)
    try:
        return quotient.normal_form(derivative)
    except LinearAlgebraError as e:
        raise FormError(
            f"theta-bar of {poly} beyond degree {e3_degree_bound(adjoint)}: {e}"
        )


def theta_bar_xi1(spec: GroupSpec) -> int:
    """theta-bar of the degree-1 class: the covering order q."""
    return spec.adjoint().quotient_order


def theta_order(poly: Polynomial, spec: GroupSpec) -> int:
    """Additive order of theta-bar(P) in the integral E3^{*,0}(PG); 0 for infinite."""
    adjoint = spec.adjoint()
    derivative = derivative_wrt_varpi(poly, adjoint)
    return e3_quotient(adjoint, None).order(derivative)


# Lifting through the kernel of restriction


def lift_characteristic(poly: Polynomial, spec: GroupSpec) -> Polynomial:
    """
    Modify P by a multiple of varpi so that its restriction vanishes.

    Over F_p the derivative D = dP/dvarpi is written as
    sum nu_j * (restricted R_j) with columns ordered by relation, then by
    monomial; the lift is P - varpi * sum nu_j R_j. Over Z only forms with
    vanishing derivative lift (to themselves).

    Args:
        poly: Characteristic polynomial in the symbol ring of G
        spec: Group specification (the adjoint form is used)

    Returns:
        P' with P' - P in <varpi> and P' restricting to zero

    Raises:
        FormError: If theta-bar does not vanish (no lift exists)
    """
    adjoint = spec.adjoint()
    ring = poly.ring
    p = ring.modulus
    derivative = derivative_wrt_varpi(poly, adjoint)
    if derivative.is_zero:
        return poly
    if p is None:
        raise FormError(f"{poly} has nonzero derivative {derivative}; no integral lift")

    target_ring = derivative.ring
    degree = derivative.degree()
    index = {m: i for i, m in enumerate(target_ring.monomials(degree))}
    relations = symbol_relations(adjoint, p)
    tags: List[Tuple[Polynomial, Tuple[int, ...]]] = []
    columns: List[SparseRow] = []
    for _, relation in relations:
        image = restrict(relation, adjoint, published=False)
        lower = degree - relation.degree()
        if lower < 0 or image.is_zero:
            continue
        for m in target_ring.monomials(lower):
            tags.append((relation, m))
            columns.append(_sparse(target_ring.monomial(m) * image, index))
    solution = solve_leftmost(columns, _sparse(derivative, index), p)
    if solution is None:
        raise FormError(
            f"theta-bar of {poly} does not vanish: {derivative} is not in the restricted relations"
        )

    varpi = ring.gen(adjoint.varpi)
    correction = ring.zero
    for (relation, m), value in zip(tags, solution):
        if value:
            correction = correction + value * ring.convert(target_ring.monomial(m)) * relation
    lifted = poly - varpi * correction
    if not restrict(lifted, adjoint, published=False).is_zero:
        raise FormError(f"Lift of {poly} does not restrict to zero")
    logger.debug(f"Lifted {poly} to {lifted} for {adjoint}")
    return lifted
