"""Steenrod squares on chern symbols and on the mod 2 classes zeta of PG.

Sq acts on the symbol ring through the total square: Sq(w) = w + w^2 on
weights and the Wu formula on chern symbols, extended multiplicatively. The
square of a form is identified with a curated zeta modulo the polynomials
annihilated by phi_2: products with the kernel of restriction times the
flag relations, and (m - NF(m)) * zeta for restricted monomials m.
"""

import logging
from dataclasses import dataclass
from math import comb
from typing import Dict, List, Optional, Tuple

from app.config import get_settings
from app.services.charpolys import CharPolyError, PolyKind, char_polys, check_prime, h_degree
from app.services.flag import (
    chern_indices,
    e3_quotient,
    restrict,
    symbol_relations,
    symbol_ring,
)
from app.services.forms import OneForm
from app.services.linalg import LinearAlgebraError, SparseRow, solve_leftmost
from app.services.polynomials import GradedRing, Polynomial, PolynomialError, graded_ring, substitute
from app.services.root_data import Family, GroupSpec
from app.tables.char_polys import E7_SQUARES

settings = get_settings()
logger = logging.getLogger(__name__)


class SteenrodError(Exception):
    """Custom exception for Steenrod operation errors."""
    pass


def _binom(a: int, j: int) -> int:
    return 1 if j == 0 else comb(a, j)


def _chern(spec: Optional[GroupSpec], ring: GradedRing, r: int) -> Polynomial:
    """c_r in the ring: c_0 = 1, c_1 = 3*w2 for E6/E7 and 0 otherwise, 0 out of range."""
    if r == 0:
        return ring.one
    if spec is not None and r == 1:
        return 3 * ring.gen("w2") if spec.is_exceptional else ring.zero
    name = f"c{r}"
    return ring.gen(name) if name in ring.names else ring.zero


def wu_square(m: int, k: int, spec: Optional[GroupSpec] = None) -> Polynomial:
    """
    Sq^{2k} c_m = sum_{j=0}^{k} C(m-k+j-1, j) c_{k-j} c_{m+j} over F2.

    Args:
        m: Index of the chern class
        k: Half the degree of the operation
        spec: Group whose symbol ring receives the result; None for the
            universal ring on c1, c2, ... with c1 symbolic

    Returns:
        Polynomial over F2

    Raises:
        SteenrodError: If m < 1 or k < 0
    """
    if m < 1 or k < 0:
        raise SteenrodError(f"Sq^{2 * k} c{m} is undefined")
    if spec is None:
        top = m + k
        ring = graded_ring(
            tuple(f"c{r}" for r in range(1, top + 1)),
            tuple(2 * r for r in range(1, top + 1)),
            2,
        )
    else:
        ring = symbol_ring(spec, 2)
    if k > m:
        return ring.zero
    total = ring.zero
    for j in range(k + 1):
        if _binom(m - k + j - 1, j) % 2:
            total = total + _chern(spec, ring, k - j) * _chern(spec, ring, m + j)
    return total


def total_square(name: str, spec: GroupSpec) -> Polynomial:
    """Sq = sum of all Sq^i on one generator of the symbol ring."""
    ring = symbol_ring(spec, 2)
    if name.startswith("w"):
        w = ring.gen(name)
        return w + w**2
    if name.startswith("c"):
        m = int(name[1:])
        total = ring.zero
        for k in range(m + 1):
            total = total + wu_square(m, k, spec)
        return total
    raise SteenrodError(f"Sq on the Schubert class {name} is not tabulated")


def steenrod_square(poly: Polynomial, k: int, spec: GroupSpec) -> Polynomial:
    """
    Sq^k on a homogeneous polynomial of the mod 2 symbol ring (Cartan formula).

    Raises:
        SteenrodError: For odd k, odd primes, inhomogeneous input or x-classes
    """
    if poly.ring.modulus != 2:
        raise SteenrodError(f"Steenrod squares act mod 2, got modulus {poly.ring.modulus}")
    if k < 0 or k % 2:
        raise SteenrodError(f"Sq^{k} is not an even square")
    if poly.is_zero or k == 0:
        return poly
    try:
        degree = poly.degree()
    except PolynomialError as e:
        raise SteenrodError(str(e))
    ring = symbol_ring(spec, 2)
    images = {name: total_square(name, spec) for name in poly.variables()}
    try:
        poly = ring.convert(poly)
        total = substitute(poly, images, ring)
    except PolynomialError as e:
        raise SteenrodError(f"Total square of {poly}: {e}")
    return total.homogeneous_part(degree + k)


# Identification with curated forms


def _row(poly: Polynomial, index: Dict[Tuple[int, ...], int]) -> SparseRow:
    return {index[m]: c for m, c in poly.terms.items()}


def restriction_kernel(spec: GroupSpec) -> List[Polynomial]:
    """Generators c_r - restricted(c_r) of the kernel of restriction, mod 2."""
    ring = symbol_ring(spec, 2)
    generators = []
    for r in chern_indices(spec):
        c = ring.gen(f"c{r}")
        image = ring.convert(restrict(c, spec, published=True))
        generators.append(c - image)
    return generators


def annihilated_columns(
    spec: GroupSpec,
    degree: int,
    forms: List[OneForm],
    index: Dict[Tuple[int, ...], int]
) -> List[SparseRow]:
    """Spanning vectors of the polynomials with vanishing phi_2 in one degree."""
    ring = symbol_ring(spec, 2)
    columns: List[SparseRow] = []
    relations = [ring.convert(r) for _, r in symbol_relations(spec, 2)]
    for g in restriction_kernel(spec):
        for relation in relations:
            base = g * relation
            if base.is_zero:
                continue
            lower = degree - g.degree() - relation.degree()
            if lower < 0:
                continue
            for m in ring.monomials(lower):
                columns.append(_row(ring.monomial(m) * base, index))

    quotient = e3_quotient(spec, 2)
    restricted = quotient.ring
    for form in forms:
        lower = degree - 2 * form.s
        if lower <= 0:
            continue
        for m in restricted.monomials(lower):
            monomial = restricted.monomial(m)
            difference = monomial - quotient.normal_form(monomial)
            if difference.is_zero:
                continue
            columns.append(_row(ring.convert(difference) * ring.convert(form.polynomial), index))
    return columns


@dataclass
class SteenrodResult:
    """Sq^k of a form and its identification."""

    source: str
    k: int
    polynomial: Polynomial
    target_s: int
    identified: Optional[str] = None

    @property
    def is_zero(self) -> bool:
        return self.identified is None

    @property
    def label(self) -> str:
        return f"Sq^{self.k} {self.source}"

    def to_text(self) -> str:
        return f"{self.label} = {self.identified or 0}"


def steenrod_sq(spec: GroupSpec, form: OneForm, k: int) -> SteenrodResult:
    """
    Sq^k of a mod 2 class zeta of PG, identified with a curated zeta or zero.

    Args:
        spec: Group specification (the adjoint form is used)
        form: Mod 2 quotient form
        k: Even degree of the square

    Returns:
        SteenrodResult naming the image class

    Raises:
        SteenrodError: Outside p = 2, or if the square is not expressible in
            the curated generators
    """
    adjoint = spec.adjoint()
    try:
        check_prime(adjoint, 2)
    except CharPolyError as e:
        raise SteenrodError(str(e))
    image = steenrod_square(form.polynomial, k, adjoint)
    target_s = form.s + k // 2
    result = SteenrodResult(form.label, k, image, target_s)
    if image.is_zero:
        return result

    ring = symbol_ring(adjoint, 2)
    degree = image.degree()
    monomials = ring.monomials(degree)
    if len(monomials) > settings.max_dimension:
        raise SteenrodError(
            f"Degree {degree} of the symbol ring has {len(monomials)} monomials "
            f"(limit {settings.max_dimension})"
        )
    index = {m: i for i, m in enumerate(monomials)}
    curated = char_polys(adjoint, PolyKind.QUOTIENT, 2, certify=False).entries
    candidates = [f for f in curated if f.s == target_s]
    try:
        columns = annihilated_columns(adjoint, degree, curated, index)
    except (LinearAlgebraError, PolynomialError) as e:
        raise SteenrodError(f"{result.label}: {e}")
    columns += [_row(ring.convert(f.polynomial), index) for f in candidates]
    solution = solve_leftmost(columns, _row(image, index), 2)
    if solution is None:
        raise SteenrodError(
            f"{result.label} = {image} is not expressible in the curated classes of {adjoint}"
        )
    offset = len(columns) - len(candidates)
    for form_candidate, value in zip(candidates, solution[offset:]):
        if value:
            result.identified = form_candidate.label
    logger.info(f"{result.to_text()} on {adjoint}")
    return result


# Closed forms


def square_degree(spec: GroupSpec, s: int) -> int:
    """Degree k of the square applied to zeta_{2s-1}: 2s - 2, or 2s - 4 for Sp."""
    return 2 * s - 4 if spec.family is Family.SP else 2 * s - 2


def stated_squares(spec: GroupSpec) -> Dict[int, Optional[int]]:
    """
    Source half-degree -> image half-degree (None for zero) of the known squares.

    SU(n), n = 2^r(2b+1): zeta_{2s-1} -> zeta_{4s-3} for 2s - 1 <= 2^(r-1).
    Sp(n): zeta_{4s-1} -> zeta_{8s-5} for 2s - 1 < 2^r.
    E7: s = 3, 5 -> 5, 9 and zero for s = 8, 9, 12, 14.
    """
    adjoint = spec.adjoint()
    if adjoint.family is Family.E7:
        return dict(E7_SQUARES)
    if adjoint.is_exceptional:
        return {}
    h = h_degree(adjoint, 2)
    result: Dict[int, Optional[int]] = {}
    if adjoint.family is Family.SU:
        for s in range(2, adjoint.n + 1):
            if 2 * (2 * s - 1) <= h:
                result[s] = 2 * s - 1
        return result
    for s in range(2, adjoint.n + 1):
        target = 4 * s - 2
        if 2 * (2 * s - 1) < h and target <= 2 * adjoint.n:
            result[2 * s] = target
    return result


@dataclass
class SquareCheck:
    """A computed square against its closed form."""

    source_s: int
    k: int
    expected: Optional[str]
    result: Optional[SteenrodResult]
    skipped: bool = False

    @property
    def matches(self) -> bool:
        if self.skipped or self.result is None:
            return self.skipped
        return self.result.identified == self.expected


def check_squares(spec: GroupSpec, degree_cap: Optional[int] = None) -> List[SquareCheck]:
    """
    Recompute every known square of the mod 2 classes of PG.

    Args:
        spec: Group specification
        degree_cap: Skip squares whose image degree exceeds this cap

    Returns:
        One SquareCheck per known square
    """
    adjoint = spec.adjoint()
    forms = char_polys(adjoint, PolyKind.QUOTIENT, 2, certify=False).by_degree()
    cap = degree_cap if degree_cap is not None else settings.exceptional_degree_cap
    checks = []
    for s, target in sorted(stated_squares(adjoint).items()):
        k = square_degree(adjoint, s)
        expected = f"zeta{2 * target - 1}" if target is not None else None
        if 2 * s + k > cap or s not in forms:
            checks.append(SquareCheck(s, k, expected, None, skipped=True))
            continue
        checks.append(SquareCheck(s, k, expected, steenrod_sq(adjoint, forms[s], k)))
    return checks
