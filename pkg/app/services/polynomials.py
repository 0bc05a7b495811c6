"""Exact graded polynomial arithmetic over the integers and prime fields.

Polynomials live in a `GradedRing`: an ordered list of named variables with
cohomological degrees, backed by a sympy sparse polynomial ring over ZZ.
Prime-field rings keep integer coefficients reduced into [0, p).
"""

import logging
from enum import Enum
from functools import lru_cache
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from sympy import ZZ
from sympy.polys.orderings import grlex
from sympy.polys.rings import ring as sympy_ring

logger = logging.getLogger(__name__)

Monomial = Tuple[int, ...]


class PolynomialError(Exception):
    """Custom exception for polynomial arithmetic errors."""
    pass


class ArithmeticOp(str, Enum):
    """Binary operations supported by `poly_arithmetic`."""

    ADD = "add"
    SUB = "sub"
    MUL = "mul"


class GradedRing:
    """
    Polynomial ring with weighted (cohomological) variable degrees.

    Variables are ordered; the canonical term order is graded by weighted
    degree and lexicographic inside a degree, so earlier variables dominate.
    """

    def __init__(
        self,
        names: Sequence[str],
        degrees: Sequence[int],
        modulus: Optional[int] = None
    ):
        if len(names) != len(degrees):
            raise PolynomialError("Variable names and degrees differ in length")
        if len(set(names)) != len(names):
            raise PolynomialError(f"Duplicate variable names: {list(names)}")
        if not names:
            raise PolynomialError("A graded ring needs at least one variable")
        if any(d <= 0 for d in degrees):
            raise PolynomialError(f"Variable degrees must be positive: {list(degrees)}")
        if modulus is not None and modulus < 2:
            raise PolynomialError(f"Invalid modulus {modulus}")

        self.names: Tuple[str, ...] = tuple(names)
        self.degrees: Tuple[int, ...] = tuple(degrees)
        self.modulus = modulus
        self._index = {name: i for i, name in enumerate(self.names)}
        self._sympy, *_ = sympy_ring(list(self.names), ZZ, grlex)
        self._monomials: Dict[int, List[Monomial]] = {}

    # Identity

    @property
    def key(self) -> Tuple:
        return (self.names, self.degrees, self.modulus)

    def __eq__(self, other) -> bool:
        return isinstance(other, GradedRing) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        field = "ZZ" if self.modulus is None else f"GF({self.modulus})"
        gens = ", ".join(f"{n}:{d}" for n, d in zip(self.names, self.degrees))
        return f"GradedRing[{field}]({gens})"

    @property
    def ngens(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise PolynomialError(f"Unknown variable {name!r} in {self!r}")

    def degree_of(self, name: str) -> int:
        return self.degrees[self.index(name)]

    # Derived rings

    def with_modulus(self, modulus: Optional[int]) -> "GradedRing":
        return graded_ring(self.names, self.degrees, modulus)

    def integral(self) -> "GradedRing":
        return self.with_modulus(None)

    # Element construction

    def _wrap(self, element) -> "Polynomial":
        if self.modulus is not None:
            p = self.modulus
            reduced = {m: int(c) % p for m, c in element.items()}
            element = self._sympy.from_dict({m: c for m, c in reduced.items() if c})
        return Polynomial(self, element)

    def from_terms(self, terms: Mapping[Monomial, int]) -> "Polynomial":
        clean = {}
        for monomial, coeff in terms.items():
            if len(monomial) != self.ngens:
                raise PolynomialError(
                    f"Exponent vector {monomial} does not match {self.ngens} variables"
                )
            if coeff:
                clean[tuple(monomial)] = int(coeff)
        return self._wrap(self._sympy.from_dict(clean) if clean else self._sympy.zero)

    def constant(self, value: int) -> "Polynomial":
        return self._wrap(self._sympy(int(value)))

    @property
    def zero(self) -> "Polynomial":
        return Polynomial(self, self._sympy.zero)

    @property
    def one(self) -> "Polynomial":
        return self.constant(1)

    def gen(self, name: str) -> "Polynomial":
        return Polynomial(self, self._sympy.gens[self.index(name)])

    def gens(self) -> Dict[str, "Polynomial"]:
        return {name: self.gen(name) for name in self.names}

    def monomial(self, exponents: Monomial) -> "Polynomial":
        return self.from_terms({tuple(exponents): 1})

    def convert(self, poly: "Polynomial") -> "Polynomial":
        """
        Move a polynomial into this ring, matching variables by name.

        Args:
            poly: Polynomial from any ring whose used variables exist here

        Returns:
            The same polynomial expressed in this ring (reduced if modular)
        """
        if poly.ring == self:
            return poly
        positions = []
        for name in poly.ring.names:
            positions.append(self._index.get(name))
        terms: Dict[Monomial, int] = {}
        for monomial, coeff in poly.element.items():
            target = [0] * self.ngens
            for i, e in enumerate(monomial):
                if not e:
                    continue
                pos = positions[i]
                if pos is None:
                    raise PolynomialError(
                        f"Variable {poly.ring.names[i]!r} has no counterpart in {self!r}"
                    )
                target[pos] = e
            key = tuple(target)
            terms[key] = terms.get(key, 0) + int(coeff)
        return self.from_terms(terms)

    # Monomial bookkeeping

    def monomial_degree(self, monomial: Monomial) -> int:
        return sum(e * d for e, d in zip(monomial, self.degrees))

    def sort_key(self, monomial: Monomial) -> Tuple[int, Monomial]:
        return (self.monomial_degree(monomial), tuple(monomial))

    def monomials(self, degree: int) -> List[Monomial]:
        """
        List all monomials of a given weighted degree.

        Args:
            degree: Cohomological degree

        Returns:
            Exponent vectors in canonical (descending) order
        """
        if degree in self._monomials:
            return self._monomials[degree]
        result: List[Monomial] = []
        if degree >= 0:
            self._enumerate(degree, 0, [], result)
        result.sort(reverse=True)
        self._monomials[degree] = result
        return result

    def _enumerate(self, remaining: int, position: int, prefix: List[int], out: List[Monomial]):
        if position == self.ngens:
            if remaining == 0:
                out.append(tuple(prefix))
            return
        step = self.degrees[position]
        for e in range(remaining // step + 1):
            prefix.append(e)
            self._enumerate(remaining - e * step, position + 1, prefix, out)
            prefix.pop()


@lru_cache(maxsize=None)
def graded_ring(
    names: Tuple[str, ...],
    degrees: Tuple[int, ...],
    modulus: Optional[int] = None
) -> GradedRing:
    """Get a cached graded ring instance."""
    return GradedRing(tuple(names), tuple(degrees), modulus)


Operand = Union["Polynomial", int]


class Polynomial:
    """Immutable polynomial in a `GradedRing`."""

    __slots__ = ("ring", "element")

    def __init__(self, ring: GradedRing, element):
        self.ring = ring
        self.element = element

    # Coercion

    def _coerce(self, other: Operand):
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise PolynomialError(
                    f"Ring mismatch: {self.ring!r} vs {other.ring!r}"
                )
            return other.element
        if isinstance(other, int):
            return self.ring._sympy(other)
        raise PolynomialError(f"Cannot combine polynomial with {type(other).__name__}")

    # Arithmetic

    def __add__(self, other: Operand) -> "Polynomial":
        return self.ring._wrap(self.element + self._coerce(other))

    __radd__ = __add__

    def __sub__(self, other: Operand) -> "Polynomial":
        return self.ring._wrap(self.element - self._coerce(other))

    def __rsub__(self, other: Operand) -> "Polynomial":
        return self.ring._wrap(self._coerce(other) - self.element)

    def __neg__(self) -> "Polynomial":
        return self.ring._wrap(-self.element)

    def __mul__(self, other: Operand) -> "Polynomial":
        return self.ring._wrap(self.element * self._coerce(other))

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "Polynomial":
        if exponent < 0:
            raise PolynomialError("Negative powers are not polynomials")
        return self.ring._wrap(self.element ** exponent)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            return self.element == self.ring._wrap(self.ring._sympy(other)).element
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and self.element == other.element

    def __hash__(self) -> int:
        return hash((self.ring.key, frozenset(self.terms.items())))

    def __bool__(self) -> bool:
        return bool(self.element)

    # Inspection

    @property
    def is_zero(self) -> bool:
        return not self.element

    @property
    def terms(self) -> Dict[Monomial, int]:
        return {m: int(c) for m, c in self.element.items()}

    def items(self) -> List[Tuple[Monomial, int]]:
        """Terms in canonical order, largest monomial first."""
        return sorted(
            ((m, int(c)) for m, c in self.element.items()),
            key=lambda t: self.ring.sort_key(t[0]),
            reverse=True
        )

    def coefficient(self, monomial: Monomial) -> int:
        return int(self.element.get(tuple(monomial), 0))

    def degree(self) -> Optional[int]:
        """
        Homogeneous cohomological degree.

        Returns:
            The common degree of all terms, or None for the zero polynomial

        Raises:
            PolynomialError: If the polynomial is inhomogeneous
        """
        degrees = {self.ring.monomial_degree(m) for m in self.element.keys()}
        if not degrees:
            return None
        if len(degrees) > 1:
            raise PolynomialError(f"Inhomogeneous polynomial {self} (degrees {sorted(degrees)})")
        return degrees.pop()

    def is_homogeneous(self) -> bool:
        return len({self.ring.monomial_degree(m) for m in self.element.keys()}) <= 1

    def homogeneous_part(self, degree: int) -> "Polynomial":
        return self.ring.from_terms(
            {m: c for m, c in self.terms.items() if self.ring.monomial_degree(m) == degree}
        )

    def truncate(self, max_degree: int) -> "Polynomial":
        return self.ring.from_terms(
            {m: c for m, c in self.terms.items() if self.ring.monomial_degree(m) <= max_degree}
        )

    def variables(self) -> List[str]:
        used = set()
        for monomial in self.element.keys():
            used.update(i for i, e in enumerate(monomial) if e)
        return [self.ring.names[i] for i in sorted(used)]

    def max_exponent(self, name: str) -> int:
        i = self.ring.index(name)
        return max((m[i] for m in self.element.keys()), default=0)

    # Change of coefficients

    def reduce(self, p: int) -> "Polynomial":
        """Reduce coefficients modulo p."""
        return self.ring.with_modulus(p).from_terms(self.terms)

    def lift(self) -> "Polynomial":
        """Integral polynomial with the stored coefficients."""
        return self.ring.integral().from_terms(self.terms)

    def to_ring(self, target: GradedRing) -> "Polynomial":
        return target.convert(self)

    # Rendering

    def to_text(self) -> str:
        if self.is_zero:
            return "0"
        pieces = []
        for monomial, coeff in self.items():
            factors = []
            for name, e in zip(self.ring.names, monomial):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            magnitude = abs(coeff)
            if not factors:
                body = str(magnitude)
            elif magnitude == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(magnitude)] + factors)
            sign = "-" if coeff < 0 else "+"
            pieces.append((sign, body))
        first_sign, first_body = pieces[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in pieces[1:]:
            text += f" {sign} {body}"
        return text

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"Polynomial({self.to_text()})"


def poly_arithmetic(a: Polynomial, b: Polynomial, op: ArithmeticOp) -> Polynomial:
    """
    Combine two polynomials of the same ring.

    Args:
        a: Left operand
        b: Right operand
        op: Operation to apply

    Returns:
        Exact result with canonical terms

    Raises:
        PolynomialError: If the operands live in different rings
    """
    if a.ring != b.ring:
        raise PolynomialError(f"Ring mismatch: {a.ring!r} vs {b.ring!r}")
    op = ArithmeticOp(op)
    if op is ArithmeticOp.ADD:
        return a + b
    if op is ArithmeticOp.SUB:
        return a - b
    return a * b


def elementary_symmetric(forms: Sequence[Polynomial], r: int) -> Polynomial:
    """
    Elementary symmetric polynomial of a list of degree-2 forms.

    Args:
        forms: Linear forms in a common ring
        r: Which elementary symmetric polynomial (1 <= r <= len(forms))

    Returns:
        e_r(forms), expanded

    Raises:
        PolynomialError: If r is out of range or a form is not of degree 2
    """
    if not forms:
        raise PolynomialError("No forms given")
    if r < 1 or r > len(forms):
        raise PolynomialError(f"r={r} out of range 1..{len(forms)}")
    for form in forms:
        if not form.is_zero and form.degree() != 2:
            raise PolynomialError(f"Form {form} is not of degree 2")

    base = forms[0].ring
    levels = [base.one] + [base.zero] * r
    for form in forms:
        for k in range(r, 0, -1):
            levels[k] = levels[k] + levels[k - 1] * form
    return levels[r]


def elementary_symmetric_all(forms: Sequence[Polynomial]) -> List[Polynomial]:
    """All of e_0..e_N of the given forms in one pass."""
    base = forms[0].ring
    levels = [base.one] + [base.zero] * len(forms)
    for count, form in enumerate(forms, start=1):
        for k in range(count, 0, -1):
            levels[k] = levels[k] + levels[k - 1] * form
    return levels


def substitute(
    poly: Polynomial,
    assignment: Mapping[str, Operand],
    target: Optional[GradedRing] = None
) -> Polynomial:
    """
    Apply the ring map extending a variable assignment.

    Variables without an assignment map to the variable of the same name in
    the target ring.

    Args:
        poly: Source polynomial
        assignment: Variable name -> image (polynomial in target, or integer)
        target: Target ring (defaults to the source ring)

    Returns:
        Image of the polynomial

    Raises:
        PolynomialError: If a used variable is unbound
    """
    target = target or poly.ring
    source = poly.ring
    used = set()
    for monomial in poly.element.keys():
        used.update(i for i, e in enumerate(monomial) if e)

    images = {}
    for i in used:
        name = source.names[i]
        if name in assignment:
            value = assignment[name]
            if isinstance(value, int):
                images[i] = target._sympy(value)
            else:
                images[i] = target.convert(value).element
        elif name in target._index:
            images[i] = target._sympy.gens[target.index(name)]
        else:
            raise PolynomialError(f"Unbound variable {name!r} without identity assignment")

    powers: Dict[Tuple[int, int], object] = {}

    def power(i: int, e: int):
        key = (i, e)
        if key not in powers:
            powers[key] = images[i] if e == 1 else power(i, e - 1) * images[i]
        return powers[key]

    result = target._sympy.zero
    for monomial, coeff in poly.element.items():
        term = target._sympy(int(coeff))
        for i, e in enumerate(monomial):
            if e:
                term = term * power(i, e)
        result += term
    return target._wrap(result)


def exact_divide(poly: Polynomial, name: str, times: int = 1) -> Polynomial:
    """
    Divide by a power of one variable.

    Raises:
        PolynomialError: If some term is not divisible
    """
    i = poly.ring.index(name)
    terms = {}
    for monomial, coeff in poly.terms.items():
        if monomial[i] < times:
            raise PolynomialError(f"{poly} is not divisible by {name}^{times}")
        shifted = list(monomial)
        shifted[i] -= times
        terms[tuple(shifted)] = coeff
    return poly.ring.from_terms(terms)
