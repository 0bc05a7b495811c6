"""Integral cohomology of PE6 and PE7: free parts, torsion ideals and action relations.

Names follow the restricted ring (w1 for E6, w2 for E7, x_k) and the
Bockstein complexes (c_I indexed by the degrees of the odd generators).
"""

from dataclasses import dataclass, field
from typing import Dict, List, Tuple


@dataclass
class TorsionRecord:
    """p-primary component sigma_p as generators, exterior factors and relations."""

    prime: int
    generators: List[str]
    exterior: List[str]
    relations: List[str]
    delta: List[str] = field(default_factory=list)


@dataclass
class IntegralRecord:
    """Curated integral ring of one exceptional adjoint group."""

    group: str
    free: List[Tuple[str, int]]
    free_squares: Dict[str, str]
    torsion: List[TorsionRecord]
    action_relations: List[str]


PE6_INTEGRAL = IntegralRecord(
    group="PE6",
    free=[("rho3", 3), ("rho9", 9), ("rho11", 11), ("rho15", 15), ("rho17", 17), ("rho23", 23)],
    free_squares={"rho3": "x3"},
    torsion=[
        TorsionRecord(
            prime=2,
            generators=["x3"],
            exterior=["rho9", "rho15", "rho17", "rho23"],
            relations=["2*x3", "x3^2"],
            delta=["rho3"],
        ),
        TorsionRecord(
            prime=3,
            generators=["w1", "x4", "c_1_7"],
            exterior=["rho3", "rho9", "rho11", "rho15", "rho17"],
            relations=["w1^9", "x4^3", "w1*rho17", "c_1_7^2", "w1^8*x4^2*c_1_7"],
        ),
    ],
    action_relations=[
        "rho3^2 = x3",
        "x3*rho11 = 0",
        "x4*rho23 = 0",
        "w1*rho23 = x4^2*c_1_7",
        "c_1_7*rho23 = 0",
    ],
)

PE7_INTEGRAL = IntegralRecord(
    group="PE7",
    free=[
        ("rho3", 3), ("rho11", 11), ("rho15", 15), ("rho19", 19),
        ("rho23", 23), ("rho27", 27), ("rho35", 35),
    ],
    free_squares={},
    torsion=[
        TorsionRecord(
            prime=2,
            generators=["w2", "x3", "x5", "x9", "c_I"],
            exterior=["rho15", "rho23", "rho27"],
            relations=["w2^2", "x3^2", "x5^2", "x9^2", "D_I", "R_I", "S_I_J"],
        ),
        TorsionRecord(
            prime=3,
            generators=["x4"],
            exterior=["rho3", "rho11", "rho15", "rho19", "rho27", "rho35"],
            relations=["3*x4", "x4^3"],
        ),
    ],
    action_relations=[
        "x4*rho23 = 0",
        "rho_{4t-1}*c_K = 0 for t in K",
        "rho_{4t-1}*c_K = x_t*c_{K+t} for t not in K",
    ],
)


def get_integral_record(group: str) -> IntegralRecord:
    return {"PE6": PE6_INTEGRAL, "PE7": PE7_INTEGRAL}[group]
