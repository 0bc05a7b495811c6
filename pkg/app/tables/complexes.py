"""Mod p cohomology of PE6 and PE7 as Bockstein complexes.

The even part is Im(pi*) = E3^{*,0}(PG; F_p), a truncated polynomial algebra
written in the names of the restricted ring. The odd generators varsigma are
the classes iota and zeta (corrected by products) on which delta_p is either
a polynomial generator or zero.
"""

from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

from app.services.polynomials import Polynomial
from app.tables.symbols import Symbols

EvenValue = Callable[[Symbols], Polynomial]


@dataclass(frozen=True)
class EvenGenerator:
    """Polynomial generator y with y^height = 0."""

    name: str
    degree: int
    height: int


@dataclass
class OddGenerator:
    """
    Odd generator varsigma with its differential.

    `square` is None for an exterior generator; otherwise the recorded
    square in the even part (a Delta generator).
    """

    name: str
    degree: int
    differential: EvenValue
    square: Optional[EvenValue] = None
    recipe: Optional[List[Tuple[EvenValue, int]]] = None  # sum coeff * zeta_{2s-1}, None for iota


@dataclass
class ComplexRecord:
    """Curated data of one Bockstein complex."""

    label: str
    group: str
    prime: int
    even: List[EvenGenerator]
    odd: List[OddGenerator]
    reductions: Dict[str, Tuple[EvenValue, str]] = field(default_factory=dict)
    cohomology_dimension: int = 0
    image_dimension: int = 0


def _one(g: Symbols) -> Polynomial:
    return g.const(1)


def _zero(g: Symbols) -> Polynomial:
    return g.const(0)


PE6_COMPLEX = ComplexRecord(
    label="H*(PE6; F3)",
    group="PE6",
    prime=3,
    even=[EvenGenerator("w1", 2, 9), EvenGenerator("x4", 8, 3)],
    odd=[
        OddGenerator("varsigma1", 1, lambda g: g.w1),
        OddGenerator("varsigma3", 3, _zero, recipe=[(_one, 2)]),
        OddGenerator("varsigma7", 7, lambda g: g.x4, recipe=[(_one, 4)]),
        OddGenerator("varsigma9", 9, _zero, recipe=[(_one, 5)]),
        OddGenerator("varsigma11", 11, _zero, recipe=[(_one, 6)]),
        OddGenerator("varsigma15", 15, _zero, recipe=[(_one, 8), (lambda g: -g.x4, 4)]),
    ],
    reductions={
        "rho3": (_one, "varsigma3"),
        "rho9": (_one, "varsigma9"),
        "rho11": (_one, "varsigma11"),
        "rho15": (_one, "varsigma15"),
        "rho17": (lambda g: g.w1**8, "varsigma1"),
        "rho23": (lambda g: g.x4**2, "varsigma7"),
    },
    cohomology_dimension=64,
    image_dimension=832,
)

PE7_COMPLEX = ComplexRecord(
    label="H*(PE7; F2)",
    group="PE7",
    prime=2,
    even=[
        EvenGenerator("w2", 2, 2),
        EvenGenerator("x3", 6, 2),
        EvenGenerator("x5", 10, 2),
        EvenGenerator("x9", 18, 2),
    ],
    odd=[
        OddGenerator("varsigma1", 1, lambda g: g.w2, square=lambda g: g.w2),
        OddGenerator("varsigma5", 5, lambda g: g.x3, square=lambda g: g.x5, recipe=[(_one, 3)]),
        OddGenerator("varsigma9", 9, lambda g: g.x5, square=lambda g: g.x9, recipe=[(_one, 5)]),
        OddGenerator("varsigma15", 15, _zero, recipe=[(_one, 8), (lambda g: g.x3, 5)]),
        OddGenerator("varsigma17", 17, lambda g: g.x9, square=_zero, recipe=[(_one, 9)]),
        OddGenerator("varsigma23", 23, _zero, recipe=[(_one, 12), (lambda g: g.x3, 9)]),
        OddGenerator("varsigma27", 27, _zero, recipe=[(_one, 14), (lambda g: g.x5, 9)]),
    ],
    reductions={
        "rho3": (lambda g: g.w2, "varsigma1"),
        "rho11": (lambda g: g.x3, "varsigma5"),
        "rho15": (_one, "varsigma15"),
        "rho19": (lambda g: g.x5, "varsigma9"),
        "rho23": (_one, "varsigma23"),
        "rho27": (_one, "varsigma27"),
        "rho35": (lambda g: g.x9, "varsigma17"),
    },
    cohomology_dimension=128,
    image_dimension=960,
)


def get_complex(group: str) -> ComplexRecord:
    return {"PE6": PE6_COMPLEX, "PE7": PE7_COMPLEX}[group]
