"""Pydantic models for command requests and emitted documents."""

from enum import Enum
from typing import Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from app.config import get_settings

settings = get_settings()

GROUP_COMMANDS = {
    "cartan", "transgression", "flag", "e3-base", "koszul",
    "charpolys", "modp", "integral", "bockstein", "steenrod",
}
PRIME_COMMANDS = {"charpolys", "modp"}
SUBCOMMANDS = GROUP_COMMANDS | {"theta", "binomial", "verify"}


class OutputFormat(str, Enum):
    """Emitter used for the document."""

    JSON = "json"
    TEXT = "text"
    LATEX = "latex"


class Document(BaseModel):
    """Common header of every emitted document."""

    schema_version: str = Field(
        default=settings.schema_version,
        alias="schema",
        description="Version of the document layout"
    )
    command: str = Field(..., description="Subcommand that produced the document")

    model_config = ConfigDict(populate_by_name=True)


class PolynomialDoc(BaseModel):
    """A polynomial with its ring."""

    text: str = Field(..., description="Plain-text form, e.g. 2*w1^2*x3")
    latex: str = Field(..., description="LaTeX form")
    degree: Optional[int] = Field(None, description="Cohomological degree; null for zero")
    variables: List[str] = Field(..., description="Generator names of the ambient ring")
    modulus: Optional[int] = Field(None, description="Coefficient prime; null for Z")


class GroupSummandDoc(BaseModel):
    """Z^rank + sum of Z/d in one degree."""

    degree: int = Field(..., ge=0, description="Cohomological degree")
    rank: int = Field(..., ge=0, description="Free rank, or dimension over F_p")
    torsion: List[int] = Field(default_factory=list, description="Invariant factors d_1 | d_2 | ...")


class GradedGroupDoc(BaseModel):
    """Nonzero degrees of a graded abelian group."""

    modulus: Optional[int] = Field(None, description="Prime when the group is an F_p vector space")
    degrees: List[GroupSummandDoc] = Field(..., description="One entry per nonzero degree")
    total_rank: int = Field(..., ge=0, description="Sum of the ranks")


class GeneratorDoc(BaseModel):
    name: str = Field(..., description="Generator name")
    degree: int = Field(..., description="Cohomological degree")


class RelationDoc(BaseModel):
    name: str = Field(..., description="Relation name")
    polynomial: PolynomialDoc = Field(..., description="Relation, read as polynomial = 0")


class PresentationDoc(Document):
    """Generators and relations of a graded ring, with its groups up to a degree."""

    label: str = Field(..., description="Ring being presented")
    modulus: Optional[int] = Field(None, description="Coefficient prime; null for Z")
    generators: List[GeneratorDoc] = Field(..., description="Generators with degrees")
    relations: List[RelationDoc] = Field(..., description="Named relations")
    extra: List[PolynomialDoc] = Field(default_factory=list, description="Further ideal generators")
    abbreviations: Dict[str, str] = Field(default_factory=dict, description="Symbol -> flag-ring value")
    group: Optional[GradedGroupDoc] = Field(None, description="Graded group of the quotient")
    max_degree: Optional[int] = Field(None, description="Degree bound of `group`")


class MatrixDoc(Document):
    """Cartan and transition matrices."""

    group: str = Field(..., description="Group label")
    cartan: List[List[int]] = Field(..., description="Cartan matrix, Bourbaki order")
    transition: List[List[int]] = Field(..., description="Transition matrix of the lattice")


class TransgressionDoc(Document):
    """Images of the fiber generators and, for PG, the restriction along tau = 0."""

    group: str = Field(..., description="Group label")
    fiber: List[str] = Field(..., description="Fiber generator names")
    images: List[PolynomialDoc] = Field(..., description="tau(t_i) in the weight ring")
    matrix: List[List[int]] = Field(..., description="Row i holds the coefficients of tau(t_i)")
    restriction: Dict[str, int] = Field(default_factory=dict, description="Weight -> multiple of varpi")
    order: Optional[int] = Field(None, description="Order q of varpi after restriction")


class KoszulDoc(Document):
    """Koszul homology of H*(G/T) (x) Lambda(t)."""

    group: str = Field(..., description="Group label")
    modulus: Optional[int] = Field(None, description="Coefficient prime; null for Z")
    max_degree: int = Field(..., description="Highest total degree")
    bidegrees: Dict[str, List] = Field(..., description="'base,fiber' -> [rank, torsion]")
    total: GradedGroupDoc = Field(..., description="Groups collapsed onto the total degree")
    poincare: List[int] = Field(..., description="Dimension per total degree")


class OneFormDoc(BaseModel):
    """A characteristic polynomial and the class it defines."""

    label: str = Field(..., description="Class name such as xi3, zeta5 or gamma11")
    s: int = Field(..., ge=1, description="Half-degree of the polynomial")
    degree: int = Field(..., description="Degree 2s - 1 of the class")
    polynomial: PolynomialDoc = Field(..., description="Characteristic polynomial")
    witness: Dict[str, str] = Field(default_factory=dict, description="Relation -> coefficient")
    derivative: Optional[PolynomialDoc] = Field(None, description="dP/dvarpi, for PG")
    theta_bar: Optional[PolynomialDoc] = Field(None, description="theta-bar in E3^(*,0)(PG)")


class CharPolySetDoc(Document):
    """Characteristic-polynomial set of one kind."""

    group: str = Field(..., description="Group label")
    kind: str = Field(..., description="mod-p, quotient or integral")
    prime: Optional[int] = Field(None, description="Prime of the mod-p and quotient sets")
    degree_set: List[int] = Field(..., description="Half-degrees s")
    h: Optional[int] = Field(None, description="h(G) for the prime")
    forms: List[OneFormDoc] = Field(..., description="Entries in degree order")
    a_orders: Dict[int, int] = Field(default_factory=dict, description="s -> order a_s (integral set of PG)")


class OddClassDoc(BaseModel):
    name: str = Field(..., description="Class name")
    degree: int = Field(..., description="Odd degree")
    flavor: str = Field(..., description="Lambda (square zero) or Delta (square recorded)")
    square: Optional[str] = Field(None, description="The square when nonzero")


class TorsionIdealDoc(BaseModel):
    prime: int = Field(..., description="Prime p of sigma_p")
    generators: List[str] = Field(..., description="Even generators")
    exterior: List[str] = Field(..., description="Exterior factors")
    delta: List[str] = Field(default_factory=list, description="Delta factors")
    relations: List[str] = Field(..., description="Relation generators")


class CohomologyRingDoc(Document):
    """An assembled cohomology ring."""

    label: str = Field(..., description="Ring label, e.g. H*(PSU(4); F2)")
    coefficients: str = Field(..., description="Z or F_p")
    isomorphism: Optional[str] = Field(None, description="Set instead of a presentation when G -> PG is a mod p isomorphism")
    generators: List[GeneratorDoc] = Field(default_factory=list, description="Even generators")
    heights: Dict[str, int] = Field(default_factory=dict, description="Truncation heights mod p")
    polynomial_relations: List[str] = Field(default_factory=list, description="Relations of the polynomial part")
    odd_generators: List[OddClassDoc] = Field(default_factory=list, description="Odd generators")
    torsion: List[TorsionIdealDoc] = Field(default_factory=list, description="sigma_p components")
    action_relations: List[str] = Field(default_factory=list, description="Products between the parts")
    checks: Dict[str, bool] = Field(default_factory=dict, description="Recomputed cross-checks")
    observations: Dict[str, bool] = Field(default_factory=dict, description="Relations that hold only in part")
    poincare: List[int] = Field(default_factory=list, description="Dimension (or free rank) per degree")
    total_dimension: Optional[int] = Field(None, description="Sum of `poincare`")


class ActionRelationDoc(BaseModel):
    text: str = Field(..., description="The identity")
    holds: bool = Field(..., description="Whether it holds in the complex")
    strict: bool = Field(..., description="False when it is stated for some index sets only")


class DeltaCheckDoc(BaseModel):
    generator: str = Field(..., description="Odd generator")
    wired: str = Field(..., description="delta_p as built into the complex")
    computed: Optional[str] = Field(None, description="Reduction of the Bockstein, when recomputed")
    matches: bool = Field(..., description="Agreement up to a unit")


class BocksteinValueDoc(BaseModel):
    label: str = Field(..., description="Class zeta_{2s-1}")
    s: int = Field(..., description="Half-degree")
    value: PolynomialDoc = Field(..., description="beta_p in E3^(*,0)(PG)")
    expected: PolynomialDoc = Field(..., description="Closed form")
    matches: bool = Field(..., description="p-local agreement")


class BocksteinComplexDoc(Document):
    """Bockstein values of PG, and for PE6 and PE7 the Bockstein cohomology."""

    group: str = Field(..., description="Group label")
    prime: int = Field(..., description="Prime p")
    values: List[BocksteinValueDoc] = Field(default_factory=list, description="beta_p(zeta) per class")
    algebra_dimension: Optional[int] = Field(None, description="Dimension of H*(PG; F_p)")
    cohomology: Optional[GradedGroupDoc] = Field(None, description="Bockstein cohomology")
    image: Optional[GradedGroupDoc] = Field(None, description="Image of delta_p")
    presentation_matches: Optional[bool] = Field(None, description="Image agrees degreewise with its presentation")
    relations_hold: Optional[bool] = Field(None, description="Module relations of the image hold")
    action_relations: List[ActionRelationDoc] = Field(default_factory=list, description="Products read off in the complex")
    delta_checks: List[DeltaCheckDoc] = Field(default_factory=list, description="delta_p against r_p beta_p")


class SquareDoc(BaseModel):
    source: str = Field(..., description="Class being squared")
    k: int = Field(..., description="Degree of the square")
    image: Optional[str] = Field(None, description="Identified class; null for zero")
    expected: Optional[str] = Field(None, description="Closed form; null for zero")
    skipped: bool = Field(False, description="Beyond the degree cap")
    matches: bool = Field(..., description="Agreement with the closed form")


class SteenrodDoc(Document):
    """Squares of the mod 2 classes zeta of PG."""

    group: str = Field(..., description="Group label")
    squares: List[SquareDoc] = Field(..., description="One entry per known square")


class ThetaTermDoc(BaseModel):
    coefficient: int = Field(..., description="Integer coefficient")
    omega_power: int = Field(..., ge=0, description="Power of omega")
    rho_indices: List[int] = Field(..., description="Degrees of the rho factors")


class ThetaDoc(Document):
    """theta(gamma_I) for n = p^r."""

    n: int = Field(..., description="Prime power p^r")
    index_set: List[int] = Field(..., description="Sorted elements of {1} + Q_p(n)")
    text: str = Field(..., description="Expression, e.g. 2·ρ3·ρ7")
    terms: List[ThetaTermDoc] = Field(..., description="Terms of the expression")
    divisible: bool = Field(..., description="Every coefficient is divisible by p")


class BinomialDoc(Document):
    """gcd sequence, prime-power partition and ratios for one n."""

    n: int = Field(..., description="Rank parameter")
    b: List[int] = Field(..., description="b_{n,k} for k = 1..n")
    ratios: Dict[int, int] = Field(..., description="k -> b_{n,k-1}/b_{n,k}")
    partition: Dict = Field(..., description="Q_0(n) and the blocks Q_p(n)")
    h_sequences: Dict[str, List[int]] = Field(default_factory=dict, description="'p,r,s' -> h_1..h_s when n = p^r")


class CheckDoc(BaseModel):
    name: str = Field(..., description="Check name")
    anchor: str = Field(..., description="Acceptance criterion it covers")
    passed: bool = Field(..., description="Outcome")
    seconds: float = Field(..., ge=0, description="Elapsed time")
    detail: str = Field("", description="Summary or first failures")


class VerificationReport(Document):
    """Outcome of the acceptance battery."""

    scale: str = Field(..., description="quick or full")
    passed: bool = Field(..., description="All checks passed")
    seconds: float = Field(..., ge=0, description="Total elapsed time")
    checks: List[CheckDoc] = Field(..., description="One entry per criterion")


class CommandRequest(BaseModel):
    """Validated command line."""

    subcommand: str = Field(..., description="One of the subcommands")
    group: Optional[str] = Field(None, description="PSU, SU, PSp, Sp, PE6, E6, PE7 or E7")
    n: Optional[int] = Field(None, ge=1, description="Rank parameter for SU and Sp")
    prime: Optional[int] = Field(None, ge=2, description="Coefficient prime")
    max_degree: Optional[int] = Field(None, ge=0, description="Degree bound")
    format: OutputFormat = Field(
        default=OutputFormat(settings.output_format),
        description="json, text or latex"
    )
    output: Optional[str] = Field(None, description="Output path; standard output when absent")
    kind: str = Field("mod-p", description="charpolys kind: mod-p, quotient or integral")
    index_set: List[int] = Field(default_factory=list, description="theta index set")
    full: bool = Field(False, description="verify at full scale")
    checks: List[str] = Field(default_factory=list, description="verify only these checks")

    model_config = ConfigDict(
        json_schema_extra={
            "example": {
                "subcommand": "e3-base",
                "group": "PSU",
                "n": 4,
                "max_degree": 10,
                "format": "json"
            }
        }
    )

    @field_validator("subcommand")
    @classmethod
    def known_subcommand(cls, value: str) -> str:
        if value not in SUBCOMMANDS:
            raise ValueError(f"unknown subcommand {value!r}")
        return value

    @model_validator(mode="after")
    def check_combination(self) -> "CommandRequest":
        if self.subcommand in GROUP_COMMANDS and not self.group:
            raise ValueError(f"{self.subcommand} needs --group")
        needs_prime = self.subcommand in PRIME_COMMANDS and not (
            self.subcommand == "charpolys" and self.kind == "integral"
        )
        if needs_prime and self.prime is None:
            raise ValueError(f"{self.subcommand} needs --prime")
        if self.subcommand in ("theta", "binomial") and self.n is None:
            raise ValueError(f"{self.subcommand} needs --n")
        if self.subcommand == "theta" and not self.index_set:
            raise ValueError("theta needs --set")
        if self.index_set and self.subcommand != "theta":
            raise ValueError("--set only applies to theta")
        if (self.full or self.checks) and self.subcommand != "verify":
            raise ValueError("--full and --check only apply to verify")
        return self
