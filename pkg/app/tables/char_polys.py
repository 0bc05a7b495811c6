"""Published characteristic polynomials of E6 and E7 and the values derived from them.

Every entry is indexed by its half-degree s: the polynomial has cohomological
degree 2s and the 1-form it defines has degree 2s - 1.
"""

from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Tuple

from app.services.polynomials import Polynomial
from app.tables.relations import get_relations
from app.tables.symbols import Symbols


@dataclass
class FormRecord:
    """One tabulated polynomial, written against a Symbols namespace."""

    s: int
    text: str
    build: Callable[[Symbols], Polynomial]
    witness: Optional[Callable[[Symbols], Dict[str, Polynomial]]] = None

    @property
    def degree(self) -> int:
        return 2 * self.s


def _relation(family: str, name: str) -> Callable[[Symbols], Polynomial]:
    for record in get_relations(family):
        if record.name == name:
            return record.build
    raise KeyError(f"{family} has no relation {name}")


def _integral(
    family: str,
    s: int,
    first: Tuple[int, str],
    second: Optional[Tuple[str, int, str]] = None
) -> FormRecord:
    """Record for scale*R_a - y^k*R_b, with the relation coefficients as its witness."""
    scale, name = first
    build_a = _relation(family, name)
    text = name if scale == 1 else f"{scale}*{name}"
    if second is None:
        return FormRecord(
            s, text, lambda g: scale * build_a(g), lambda g: {name: g.const(scale)}
        )
    y, power, other = second
    build_b = _relation(family, other)
    factor = y if power == 1 else f"{y}^{power}"
    return FormRecord(
        s,
        f"{text} - {factor}*{other}",
        lambda g: scale * build_a(g) - getattr(g, y) ** power * build_b(g),
        lambda g: {name: g.const(scale), other: -getattr(g, y) ** power},
    )


# Mod p characteristic polynomials, in the symbol ring over F_p
E6_MOD_P: List[FormRecord] = [
    FormRecord(2, "w2^2 - c2", lambda g: g.w2**2 - g.c2),
    FormRecord(4, "c2^2 - c4", lambda g: g.c2**2 - g.c4),
    FormRecord(5, "c5 + c2*c3", lambda g: g.c5 + g.c2 * g.c3),
    FormRecord(6, "c6 - c2*c4 - c3^2", lambda g: g.c6 - g.c2 * g.c4 - g.c3**2),
    FormRecord(8, "-c3*c5 - c2*c6", lambda g: -g.c3 * g.c5 - g.c2 * g.c6),
    FormRecord(9, "c6*c3", lambda g: g.c6 * g.c3),
]

E7_MOD_P: List[FormRecord] = [
    FormRecord(2, "c2", lambda g: g.c2),
    FormRecord(3, "c3", lambda g: g.c3),
    FormRecord(5, "c5 + w2*c4", lambda g: g.c5 + g.w2 * g.c4),
    FormRecord(
        8, "c4^2 + w2^2*c6 + w2^3*c5 + w2^8",
        lambda g: g.c4**2 + g.w2**2 * g.c6 + g.w2**3 * g.c5 + g.w2**8
    ),
    FormRecord(9, "w2^2*c7 + w2^3*c6", lambda g: g.w2**2 * g.c7 + g.w2**3 * g.c6),
    FormRecord(12, "c6^2 + c4^3", lambda g: g.c6**2 + g.c4**3),
    FormRecord(
        14, "c7^2 + c4^2*c6 + w2^2*c6^2",
        lambda g: g.c7**2 + g.c4**2 * g.c6 + g.w2**2 * g.c6**2
    ),
]

# Lifts to the kernel of restriction, used for the classes of PG
E6_QUOTIENT: List[FormRecord] = E6_MOD_P[:5]

E7_QUOTIENT: List[FormRecord] = [
    FormRecord(3, "c3 - c2*w2", lambda g: g.c3 - g.c2 * g.w2),
    E7_MOD_P[2],
    E7_MOD_P[3],
    E7_MOD_P[4],
    E7_MOD_P[5],
    FormRecord(
        14, "c7^2 + c4^2*c6 + w2^2*c6^2 - c2*w2^12",
        lambda g: g.c7**2 + g.c4**2 * g.c6 + g.w2**2 * g.c6**2 - g.c2 * g.w2**12
    ),
]

# Integral characteristic polynomials as combinations of the flag relations
E6_INTEGRAL: List[FormRecord] = [
    _integral("E6", 2, (1, "R2")),
    _integral("E6", 5, (1, "R5")),
    _integral("E6", 6, (2, "R6"), ("x3", 1, "R3")),
    _integral("E6", 8, (1, "R8")),
    _integral("E6", 9, (1, "R9")),
    _integral("E6", 12, (3, "R12"), ("x4", 2, "R4")),
]

# R8 carries 3*x4^2, which survives restriction; x4*R4 cancels it
E7_INTEGRAL: List[FormRecord] = [
    _integral("E7", 2, (1, "R2")),
    _integral("E7", 6, (2, "R6"), ("x3", 1, "R3")),
    _integral("E7", 8, (1, "R8"), ("x4", 1, "R4")),
    _integral("E7", 10, (2, "R10"), ("x5", 1, "R5")),
    _integral("E7", 12, (3, "R12"), ("x4", 2, "R4")),
    _integral("E7", 14, (1, "R14")),
    _integral("E7", 18, (2, "R18"), ("x9", 1, "R9")),
]

# Derivatives with respect to varpi, in the restricted ring
E6_MOD_P_DERIVATIVES: List[Callable[[Symbols], Polynomial]] = [
    lambda g: g.const(0),
    lambda g: g.const(0),
    lambda g: g.const(0),
    lambda g: g.const(0),
    lambda g: g.const(0),
    lambda g: g.w1**8,
]

E7_MOD_P_DERIVATIVES: List[Callable[[Symbols], Polynomial]] = [
    lambda g: g.w2,
    lambda g: g.w2**2,
    lambda g: g.const(0),
    lambda g: g.const(0),
    lambda g: g.const(0),
    lambda g: g.const(0),
    lambda g: g.w2**13,
]

E6_INTEGRAL_DERIVATIVES: List[Callable[[Symbols], Polynomial]] = [
    lambda g: g.const(0),
    lambda g: g.const(0),
    lambda g: g.const(0),
    lambda g: g.const(0),
    lambda g: g.w1**8,
    lambda g: g.const(0),
]

E7_INTEGRAL_DERIVATIVES: List[Callable[[Symbols], Polynomial]] = [
    lambda g: g.w2,
    lambda g: g.w2**2 * g.x3,
    lambda g: g.w2**2 * g.x5,
    lambda g: g.const(0),
    lambda g: g.w2**2 * (g.x9 + g.x4 * g.x5 + g.x4 * g.w2**5),
    lambda g: g.w2**9 * (g.x4 + g.w2**4),
    lambda g: g.const(0),
]

# Bockstein images of the classes zeta_{2s-1}, in the restricted ring
E6_BOCKSTEIN: Dict[int, Callable[[Symbols], Polynomial]] = {
    2: lambda g: g.const(0),
    4: lambda g: -g.x4,
    5: lambda g: g.const(0),
    6: lambda g: g.const(0),
    8: lambda g: -g.x4**2,
}

E7_BOCKSTEIN: Dict[int, Callable[[Symbols], Polynomial]] = {
    3: lambda g: g.x3,
    5: lambda g: g.x5,
    8: lambda g: g.x3 * g.x5,
    9: lambda g: g.x9,
    12: lambda g: g.x3 * g.x9,
    14: lambda g: g.x5 * g.x9,
}

# Sq^{2s-2} zeta_{2s-1}: half-degree of the image class, None for zero
E7_SQUARES: Dict[int, Optional[int]] = {3: 5, 5: 9, 8: None, 9: None, 12: None, 14: None}

MOD_P_DEGREES = {"E6": (2, 4, 5, 6, 8, 9), "E7": (2, 3, 5, 8, 9, 12, 14)}
INTEGRAL_DEGREES = {"E6": (2, 5, 6, 8, 9, 12), "E7": (2, 6, 8, 10, 12, 14, 18)}
H_DEGREE = {"E6": 9, "E7": 2}
PRIMES = {"E6": 3, "E7": 2}


def get_mod_p_forms(family: str) -> List[FormRecord]:
    return {"E6": E6_MOD_P, "E7": E7_MOD_P}[family]


def get_quotient_forms(family: str) -> List[FormRecord]:
    return {"E6": E6_QUOTIENT, "E7": E7_QUOTIENT}[family]


def get_integral_forms(family: str) -> List[FormRecord]:
    return {"E6": E6_INTEGRAL, "E7": E7_INTEGRAL}[family]


def get_derivatives(family: str, integral: bool) -> List[Callable[[Symbols], Polynomial]]:
    if integral:
        return {"E6": E6_INTEGRAL_DERIVATIVES, "E7": E7_INTEGRAL_DERIVATIVES}[family]
    return {"E6": E6_MOD_P_DERIVATIVES, "E7": E7_MOD_P_DERIVATIVES}[family]


def get_bockstein_values(family: str) -> Dict[int, Callable[[Symbols], Polynomial]]:
    return {"E6": E6_BOCKSTEIN, "E7": E7_BOCKSTEIN}[family]
