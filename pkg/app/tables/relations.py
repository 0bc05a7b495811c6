"""Schubert presentations of H*(E6/T) and H*(E7/T) and the restriction constants."""

from dataclasses import dataclass
from math import comb
from typing import Callable, Dict, List

from app.services.polynomials import Polynomial
from app.tables.symbols import Symbols


@dataclass
class RelationRecord:
    """One relation R_k of a flag-manifold presentation, written in chern symbols."""

    name: str
    subscript: int  # R_k has cohomological degree 2k
    build: Callable[[Symbols], Polynomial]

    @property
    def degree(self) -> int:
        return 2 * self.subscript


@dataclass
class SpecialGenerator:
    """A Schubert generator y with f = p*y + alpha and leading power relation g = y^k + ..."""

    name: str
    subscript: int
    prime: int
    linear_relation: str
    power_relation: str
    power: int

    @property
    def degree(self) -> int:
        return 2 * self.subscript


def _e7_a(g: Symbols) -> Polynomial:
    return 2 * g.w2**2 * g.x3 - g.w2 * g.c4 + g.c5


def _e7_b(g: Symbols) -> Polynomial:
    return 2 * g.w2**3 - g.c3


E6_RELATIONS: List[RelationRecord] = [
    RelationRecord("R2", 2, lambda g: 4 * g.w2**2 - g.c2),
    RelationRecord("R3", 3, lambda g: 2 * g.x3 + 2 * g.w2**3 - g.c3),
    RelationRecord("R4", 4, lambda g: 3 * g.x4 + g.w2**4 - g.c4),
    RelationRecord("R5", 5, lambda g: 2 * g.w2**2 * g.x3 - g.w2 * g.c4 + g.c5),
    RelationRecord("R6", 6, lambda g: g.x3**2 - g.w2 * g.c5 + 2 * g.c6),
    RelationRecord(
        "R8", 8,
        lambda g: g.x4 * (g.c4 - g.w2**4) - 2 * g.c5 * g.x3 - g.w2**2 * g.c6 + g.w2**3 * g.c5
    ),
    RelationRecord("R9", 9, lambda g: 2 * g.x3 * g.c6 - g.w2**3 * g.c6),
    RelationRecord("R12", 12, lambda g: g.x4**3 - g.c6**2),
]

E7_RELATIONS: List[RelationRecord] = [
    RelationRecord("R2", 2, lambda g: 4 * g.w2**2 - g.c2),
    RelationRecord("R3", 3, lambda g: 2 * g.x3 + 2 * g.w2**3 - g.c3),
    RelationRecord("R4", 4, lambda g: 3 * g.x4 + g.w2**4 - g.c4),
    RelationRecord("R5", 5, lambda g: 2 * g.x5 - 2 * g.w2**2 * g.x3 + g.w2 * g.c4 - g.c5),
    RelationRecord("R6", 6, lambda g: g.x3**2 - g.w2 * g.c5 + 2 * g.c6),
    RelationRecord(
        "R8", 8,
        lambda g: (3 * g.x4**2 - g.x5 * _e7_b(g) - 2 * g.x3 * g.c5 + 2 * g.w2 * g.c7
                   - g.w2**2 * g.c6 + g.w2**3 * g.c5)
    ),
    RelationRecord(
        "R9", 9,
        lambda g: (2 * g.x9 + g.x4 * _e7_a(g) - 2 * g.x3 * g.c6
                   - g.w2**2 * g.c7 + g.w2**3 * g.c6)
    ),
    RelationRecord("R10", 10, lambda g: g.x5**2 - 2 * g.x3 * g.c7 + g.w2**3 * g.c7),
    RelationRecord(
        "R12", 12,
        lambda g: (g.x4**3 - 4 * g.x5 * g.c7 - g.c6**2 + _e7_b(g) * (g.x9 + g.x4 * g.x5)
                   + 2 * g.w2 * g.x5 * g.c6 + 3 * g.w2 * g.x4 * g.c7 + g.c5 * g.c7)
    ),
    RelationRecord(
        "R14", 14,
        lambda g: (g.c7**2 - _e7_a(g) * g.x9 + 2 * g.x3 * g.x4 * g.c7
                   - g.w2**3 * g.x4 * g.c7)
    ),
    RelationRecord(
        "R18", 18,
        lambda g: (g.x9**2 + 2 * g.x5 * g.c6 * g.c7 - g.x4 * g.c7**2
                   - _e7_a(g) * g.x4 * g.x9 - _e7_b(g) * g.x5**3
                   - 5 * g.w2 * g.x5**2 * g.c7)
    ),
]

E6_SPECIALS: List[SpecialGenerator] = [
    SpecialGenerator("x3", 3, 2, "R3", "R6", 2),
    SpecialGenerator("x4", 4, 3, "R4", "R12", 3),
]

E7_SPECIALS: List[SpecialGenerator] = [
    SpecialGenerator("x3", 3, 2, "R3", "R6", 2),
    SpecialGenerator("x4", 4, 3, "R4", "R12", 3),
    SpecialGenerator("x5", 5, 2, "R5", "R10", 2),
    SpecialGenerator("x9", 9, 2, "R9", "R18", 2),
]

# Omega sets as coefficient maps over the fundamental weights
E6_OMEGA: List[Dict[str, int]] = [
    {"w6": 1},
    {"w5": 1, "w6": -1},
    {"w4": 1, "w5": -1},
    {"w2": 1, "w3": 1, "w4": -1},
    {"w1": 1, "w2": 1, "w3": -1},
    {"w2": 1, "w1": -1},
]

E7_OMEGA: List[Dict[str, int]] = [
    {"w7": 1},
    {"w6": 1, "w7": -1},
    {"w5": 1, "w6": -1},
    {"w4": 1, "w5": -1},
    {"w2": 1, "w3": 1, "w4": -1},
    {"w1": 1, "w2": 1, "w3": -1},
    {"w2": 1, "w1": -1},
]


def tabulated_restriction(family: str, n: int) -> Dict[str, int]:
    """
    Published values of the weights in H^2(G/T)/Im(tau), as multiples of varpi.

    Args:
        family: "SU", "Sp", "E6" or "E7"
        n: Rank parameter

    Returns:
        Map weight name -> coefficient modulo the center order
    """
    if family == "SU":
        return {f"w{k}": k % n for k in range(1, n)}
    if family == "Sp":
        return {f"w{k}": k % 2 for k in range(1, n + 1)}
    if family == "E6":
        return {"w1": 1, "w2": 0, "w3": 2, "w4": 0, "w5": 1, "w6": 2}
    if family == "E7":
        return {"w1": 0, "w2": 1, "w3": 0, "w4": 0, "w5": 1, "w6": 0, "w7": 1}
    raise KeyError(family)


def published_chern_coefficient(family: str, n: int, r: int) -> int:
    """Coefficient of varpi^r in the published restriction of c_r."""
    if family == "SU":
        return comb(n, r)
    if family == "Sp":
        return comb(n, r // 2) if r % 2 == 0 else 0
    if family == "E6":
        return (-1) ** r * comb(6, r)
    if family == "E7":
        return comb(7, r)
    raise KeyError(family)


def get_relations(family: str) -> List[RelationRecord]:
    return {"E6": E6_RELATIONS, "E7": E7_RELATIONS}[family]


def get_specials(family: str) -> List[SpecialGenerator]:
    return {"E6": E6_SPECIALS, "E7": E7_SPECIALS}[family]


def get_omega_forms(family: str) -> List[Dict[str, int]]:
    return {"E6": E6_OMEGA, "E7": E7_OMEGA}[family]
