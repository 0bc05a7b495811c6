"""Acceptance battery: every closed form the library reproduces, recomputed and timed.

Each criterion is a function returning (passed, detail). `run_battery` wraps
them with timing and turns domain exceptions into failed checks, so one
broken computation does not hide the others.
"""

import logging
import time
from dataclasses import dataclass, field
from enum import Enum
from math import comb, factorial
from typing import Callable, Dict, List, Optional, Tuple

from sympy import primerange

from app.config import get_settings
from app.services.binomial import (
    BinomialError,
    ThetaExpression,
    a_ratio,
    admissible_sets,
    b_gcd,
    h_sequence,
    ord_p_binom,
    theta_gamma,
)
from app.services.bockstein import (
    BocksteinError,
    bockstein_cohomology,
    bockstein_complex,
    check_bockstein,
    delta_consistency,
)
from app.services.charpolys import (
    CharPolyError,
    PolyKind,
    char_polys,
    degree_sets,
    derivatives,
    h_degree,
)
from app.services.flag import FlagError, e3_from_flag, e3_quotient, flag_presentation, restriction_map
from app.services.forms import FormError, derivative_wrt_varpi
from app.services.koszul import KoszulError
from app.services.linalg import LinearAlgebraError
from app.services.polynomials import Polynomial, PolynomialError
from app.services.rings import RingError, exactness_audit, integral_ring
from app.services.root_data import Family, GroupSpec, Lattice, RootDataError, cartan_matrix, transgression
from app.services.steenrod import SteenrodError, check_squares
from app.tables.char_polys import PRIMES, get_derivatives, get_quotient_forms
from app.tables.symbols import Symbols

settings = get_settings()
logger = logging.getLogger(__name__)

DOMAIN_ERRORS = (
    RootDataError,
    PolynomialError,
    LinearAlgebraError,
    FlagError,
    KoszulError,
    FormError,
    BinomialError,
    CharPolyError,
    RingError,
    BocksteinError,
    SteenrodError,
)

# theta(gamma_I) for n = 8: I -> {(omega power, rho degrees): coefficient}
THETA_EXAMPLES: Dict[Tuple[int, ...], Dict[Tuple[int, Tuple[int, ...]], int]] = {
    (1, 2, 4): {(0, (3, 7)): 2},
    (1, 2, 8): {(0, (3, 15)): 2, (4, (3, 7)): 1},
    (1, 4, 8): {(0, (7, 15)): 2, (2, (3, 15)): 1},
    (2, 4, 8): {(1, (7, 15)): 1},
    (1, 2, 4, 8): {(0, (3, 7, 15)): 1},
}


class VerificationError(Exception):
    """Custom exception for verification errors."""
    pass


class Scale(str, Enum):
    """How far each criterion is pushed."""

    QUICK = "quick"
    FULL = "full"


@dataclass
class Limits:
    """Ranges of the battery at one scale."""

    su_transgression: int
    sp_transgression: int
    su_flag: int
    sp_flag: int
    su_e3: int
    sp_e3: int
    flag_degree_cap: int
    exceptional_tables: Tuple[str, ...]
    audits: Tuple[Tuple[str, int, int], ...]
    su_bockstein: Tuple[int, ...]
    sp_bockstein: Tuple[int, ...]
    exceptional_bockstein: Tuple[str, ...]
    complexes: Tuple[str, ...]
    a_ratio_limit: int
    valuation_limit: int
    h_sequence_limit: int
    theta_limit: int
    su_integral: int
    sp_integral: int


LIMITS: Dict[Scale, Limits] = {
    Scale.QUICK: Limits(
        su_transgression=10,
        sp_transgression=8,
        su_flag=4,
        sp_flag=3,
        su_e3=6,
        sp_e3=4,
        flag_degree_cap=8,
        exceptional_tables=("E6",),
        audits=(("PSU", 2, 2), ("PSU", 3, 3), ("PSp", 1, 2)),
        su_bockstein=(2, 4, 6),
        sp_bockstein=(1, 2),
        exceptional_bockstein=("PE6",),
        complexes=("PE6",),
        a_ratio_limit=60,
        valuation_limit=1000,
        h_sequence_limit=81,
        theta_limit=27,
        su_integral=6,
        sp_integral=4,
    ),
    Scale.FULL: Limits(
        su_transgression=10,
        sp_transgression=8,
        su_flag=5,
        sp_flag=4,
        su_e3=12,
        sp_e3=8,
        flag_degree_cap=12,
        exceptional_tables=("E6", "E7"),
        audits=(("PSU", 2, 2), ("PSU", 3, 3), ("PSU", 4, 2), ("PSp", 1, 2), ("PSp", 2, 2)),
        su_bockstein=(2, 4, 6, 8),
        sp_bockstein=(1, 2, 4),
        exceptional_bockstein=("PE6", "PE7"),
        complexes=("PE6", "PE7"),
        a_ratio_limit=200,
        valuation_limit=10**4,
        h_sequence_limit=729,
        theta_limit=81,
        su_integral=12,
        sp_integral=8,
    ),
}


@dataclass
class Check:
    """Outcome of one criterion."""

    name: str
    anchor: str
    passed: bool
    seconds: float
    detail: str = ""


@dataclass
class BatteryResult:
    """All checks of one run."""

    scale: Scale
    checks: List[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(check.passed for check in self.checks)

    @property
    def seconds(self) -> float:
        return sum(check.seconds for check in self.checks)

    def failures(self) -> List[Check]:
        return [check for check in self.checks if not check.passed]


Outcome = Tuple[bool, str]


def _failures(items: List[str]) -> Outcome:
    if items:
        shown = "; ".join(items[:5])
        more = f" (+{len(items) - 5} more)" if len(items) > 5 else ""
        return False, f"{shown}{more}"
    return True, ""


def _same(a: Polynomial, b: Polynomial) -> bool:
    return (a - a.ring.convert(b)).is_zero


# 1. Transgression


def _closed_form_images(spec: GroupSpec) -> List[Dict[str, int]]:
    """tau(t_i) for PSU(n): 2w_i - w_{i-1} - w_{i+1}."""
    m = spec.rank
    images = []
    for i in range(1, m + 1):
        image = {f"w{i}": 2}
        if i > 1:
            image[f"w{i - 1}"] = -1
        if i < m:
            image[f"w{i + 1}"] = -1
        images.append(image)
    return images


def _coefficients(poly: Polynomial) -> Dict[str, int]:
    result = {}
    for monomial, coeff in poly.terms.items():
        result[poly.ring.names[monomial.index(1)]] = coeff
    return result


def check_transgression(limits: Limits) -> Outcome:
    """Adjoint images equal A^t applied to the weights; tau = 0 gives the tabulated relations."""
    specs = [GroupSpec(Family.SU, n) for n in range(2, limits.su_transgression + 1)]
    specs += [GroupSpec(Family.SP, n) for n in range(1, limits.sp_transgression + 1)]
    specs += [GroupSpec(Family.E6, 6), GroupSpec(Family.E7, 7)]
    problems = []
    for spec in specs:
        tau = transgression(spec)
        cartan = cartan_matrix(spec)
        for i, image in enumerate(tau.images):
            expected = {f"w{j + 1}": v for j, v in enumerate(cartan[i]) if v}
            if _coefficients(image) != expected:
                problems.append(f"{spec}: tau(t{i + 1}) = {image}")
        if spec.family is Family.SU:
            if [_coefficients(image) for image in tau.images] != _closed_form_images(spec):
                problems.append(f"{spec}: images differ from 2w_i - w_(i-1) - w_(i+1)")
        simply_connected = transgression(spec.simply_connected())
        for i, image in enumerate(simply_connected.images):
            if _coefficients(image) != {f"w{i + 1}": 1}:
                problems.append(f"{spec.base_label}: tau(t{i + 1}) = {image}")
        restriction_map(spec)
    passed, detail = _failures(problems)
    return passed, detail or f"{len(specs)} groups"


# 2. Flag ranks


def check_flag_ranks(limits: Limits) -> Outcome:
    """H*(G/T) is free of total rank |W|: n! for SU(n), 2^n n! for Sp(n)."""
    cases = [(GroupSpec(Family.SU, n, Lattice.SIMPLY_CONNECTED), factorial(n))
             for n in range(2, limits.su_flag + 1)]
    cases += [(GroupSpec(Family.SP, n, Lattice.SIMPLY_CONNECTED), 2**n * factorial(n))
              for n in range(1, limits.sp_flag + 1)]
    problems = []
    for spec, order in cases:
        top = spec.dimension - spec.rank
        group = flag_presentation(spec).graded_group(top)
        if group.total_rank() != order or group.has_torsion():
            problems.append(
                f"{spec.base_label}/T: rank {group.total_rank()} (expected {order}), "
                f"torsion {group.has_torsion()}"
            )
    passed, detail = _failures(problems)
    return passed, detail or f"{len(cases)} flag manifolds"


# 3. E3^{*,0}


def expected_e3(spec: GroupSpec, max_degree: int) -> Dict[int, list]:
    """Closed form of E3^{*,0}(PG) per degree, in GradedAbelianGroup.to_dict shape."""
    groups = {0: [1, []]}
    if spec.family is Family.SU:
        for r in range(1, min(spec.n, max_degree // 2) + 1):
            b = b_gcd(spec.n, r)
            if b > 1:
                groups[2 * r] = [0, [b]]
        return groups
    h = h_degree(spec, 2)
    for k in range(1, min(h - 1, max_degree // 2) + 1):
        groups[2 * k] = [0, [2]]
    return groups


def check_e3(limits: Limits) -> Outcome:
    """
    E3^{*,0} from the restricted presentation, from the flag ring with tau
    adjoined, and from the gcd formula all agree.
    """
    specs = [GroupSpec(Family.SU, n) for n in range(2, limits.su_e3 + 1)]
    specs += [GroupSpec(Family.SP, n) for n in range(1, limits.sp_e3 + 1)]
    problems = []
    for spec in specs:
        top = 2 * spec.n + 2 if spec.family is Family.SU else 2 * h_degree(spec, 2) + 2
        restricted = e3_quotient(spec, None).graded_group(top).to_dict()
        closed = expected_e3(spec, top)
        if restricted != closed:
            problems.append(f"{spec}: restricted {restricted} != {closed}")
        cap = min(top, limits.flag_degree_cap)
        from_flag = e3_from_flag(spec, cap).to_dict()
        truncated = {d: g for d, g in closed.items() if d <= cap}
        if from_flag != truncated:
            problems.append(f"{spec}: flag path {from_flag} != {truncated}")
    passed, detail = _failures(problems)
    return passed, detail or f"{len(specs)} groups"


# 4. Tables


def _table_battery(family: str) -> List[str]:
    spec = GroupSpec.parse(f"P{family}")
    p = PRIMES[family]
    problems = []
    mod_p = char_polys(spec, PolyKind.MOD_P, p, certify=True)
    integral = char_polys(spec, PolyKind.INTEGRAL, certify=True)

    # derivatives are classes of E3 = H*(BT; F_p)/(rho's, p*varpi)
    e3 = e3_quotient(spec, p)
    restricted_mod_p = derivatives(mod_p)
    for form, computed, stored in zip(mod_p.entries, restricted_mod_p, get_derivatives(family, False)):
        if not e3.equal(computed, stored(Symbols(computed.ring))):
            problems.append(f"{spec}: d{form.label}/dvarpi = {computed}")
    restricted_integral = derivatives(integral)
    for form, computed, stored in zip(integral.entries, restricted_integral, get_derivatives(family, True)):
        if not e3.equal(computed, stored(Symbols(computed.ring))):
            problems.append(f"{spec}: d{form.label}/dvarpi = {computed}")

    # lifts agree with the stored ones up to a multiple of varpi and restrict to zero
    quotient = char_polys(spec, PolyKind.QUOTIENT, p, certify=True)
    stored_lifts = {record.s: record for record in get_quotient_forms(family)}
    for form in quotient.entries:
        record = stored_lifts.get(form.s)
        if record is None:
            problems.append(f"{spec}: no stored lift for {form.label}")
            continue
        stored = record.build(Symbols(form.polynomial.ring))
        if not derivative_wrt_varpi(stored, spec).is_zero:
            problems.append(f"{spec}: stored lift of {form.label} does not restrict to zero")
        difference = form.polynomial - stored
        varpi = difference.ring.names.index(spec.varpi)
        if any(monomial[varpi] == 0 for monomial in difference.terms):
            problems.append(f"{spec}: lift of {form.label} differs by {difference}")
    return problems


def _classical_derivatives(spec: GroupSpec) -> List[str]:
    """dc_s/dvarpi = C(n, k) varpi^(s-1), with k = s for SU(n) and s/2 for Sp(n)."""
    problems = []
    entries = char_polys(spec, PolyKind.INTEGRAL, certify=False)
    for form, computed in zip(entries.entries, derivatives(entries)):
        k = form.s if spec.family is Family.SU else form.s // 2
        expected = comb(spec.n, k) * computed.ring.gen(spec.varpi) ** (form.s - 1)
        if not _same(computed, expected):
            problems.append(f"{spec}: d{form.label}/dvarpi = {computed}")
    return problems


def check_tables(limits: Limits) -> Outcome:
    """Characteristic polynomials, their derivatives and their lifts against the stored values."""
    problems = []
    for family in limits.exceptional_tables:
        problems += _table_battery(family)
    for n in range(2, 7):
        problems += _classical_derivatives(GroupSpec(Family.SU, n))
    for n in range(1, 5):
        problems += _classical_derivatives(GroupSpec(Family.SP, n))
    passed, detail = _failures(problems)
    return passed, detail or f"families {', '.join(limits.exceptional_tables)}, SU(2..6), Sp(1..4)"


# 5. Exactness


def check_exactness(limits: Limits) -> Outcome:
    """Poincare series of H*(PG; F_p) against the Koszul homology through dim G."""
    problems = []
    for name, n, p in limits.audits:
        audit = exactness_audit(GroupSpec.parse(name, n), p)
        if not audit.matches:
            problems.append(f"{audit.label}: {audit.ring_series} != {audit.koszul_series}")
    passed, detail = _failures(problems)
    return passed, detail or f"{len(limits.audits)} audits"


# 6. Bockstein and Steenrod


def _bockstein_specs(limits: Limits) -> List[Tuple[GroupSpec, int]]:
    cases = []
    for n in limits.su_bockstein:
        spec = GroupSpec(Family.SU, n)
        for p in sorted({q for q in (2, 3, 5, 7) if n % q == 0}):
            cases.append((spec, p))
    cases += [(GroupSpec(Family.SP, n), 2) for n in limits.sp_bockstein]
    for name in limits.exceptional_bockstein:
        spec = GroupSpec.parse(name)
        cases.append((spec, PRIMES[spec.family.value]))
    return cases


def check_bockstein_steenrod(limits: Limits) -> Outcome:
    """Bocksteins and squares of the classes zeta, and delta_p inside the complexes."""
    problems = []
    count = 0
    for spec, p in _bockstein_specs(limits):
        for s in degree_sets(spec, p).quotient:
            value = check_bockstein(spec, p, s)
            count += 1
            if not value.matches:
                problems.append(f"{spec}: beta_{p}({value.label}) = {value.value}")
        if p == 2 and spec.family is not Family.E6:
            for square in check_squares(spec):
                count += 1
                if not square.matches:
                    got = square.result.identified if square.result else None
                    problems.append(f"{spec}: Sq^{square.k} zeta{2 * square.source_s - 1} = {got}")
    for group in limits.complexes:
        complex_ = bockstein_complex(group)
        for delta in delta_consistency(complex_, GroupSpec.parse(group)):
            count += 1
            if not delta.matches:
                problems.append(f"{group}: delta({delta.generator}) = {delta.wired}, beta gives {delta.computed}")
    passed, detail = _failures(problems)
    return passed, detail or f"{count} values"


# 7. Bockstein cohomology


COMPLEX_DIMENSIONS = {"PE6": 64, "PE7": 128}


def check_bockstein_cohomology(limits: Limits) -> Outcome:
    """Bockstein cohomology dimensions and the degreewise image presentation."""
    problems = []
    summary = []
    for group in limits.complexes:
        result = bockstein_cohomology(bockstein_complex(group))
        dimension = result.cohomology.total_rank()
        summary.append(f"{group}: {dimension}")
        if dimension != COMPLEX_DIMENSIONS[group]:
            problems.append(f"{group}: dimension {dimension}, expected {COMPLEX_DIMENSIONS[group]}")
        if not result.presentation_matches:
            problems.append(f"{group}: image of delta differs from its presentation")
        if not result.relations_hold:
            problems.append(f"{group}: a module relation of the image fails")
    passed, detail = _failures(problems)
    return passed, detail or ", ".join(summary)


# 8. Binomials


def check_binomials(limits: Limits) -> Outcome:
    """gcd ratios, valuations, h-sequences, the n = 8 theta values and divisibility."""
    count = 0
    for n in range(2, limits.a_ratio_limit + 1):
        for k in range(2, n + 1):
            a_ratio(n, k)
            count += 1

    for p in (2, 3, 5, 7):
        for n in range(p * p, limits.valuation_limit + 1, p * p):
            r = 0
            while n % p ** (r + 1) == 0:
                r += 1
            for s in range(1, p ** (r - 1)):
                ord_p_binom(n, s, p)
                count += 1

    for p in primerange(2, limits.h_sequence_limit + 1):
        p = int(p)
        r = 1
        while p**r <= limits.h_sequence_limit:
            for s in range(1, r + 1):
                h_sequence(p, r, s)
                count += 1
            r += 1

    problems = []
    for index_set, terms in THETA_EXAMPLES.items():
        value = theta_gamma(8, index_set)
        if value != ThetaExpression.build(8, terms):
            problems.append(f"theta(gamma_{list(index_set)}) = {value.to_text()}")

    for p in (2, 3):
        r = 1
        while p**r <= limits.theta_limit:
            n = p**r
            for index_set in admissible_sets(n):
                if index_set[-1] >= n:
                    continue
                count += 1
                if not theta_gamma(n, index_set).divisible_by(p):
                    problems.append(f"theta(gamma_{list(index_set)}) for n={n} is not divisible by {p}")
            r += 1
    passed, detail = _failures(problems)
    return passed, detail or f"{count} identities"


# 9. Integral rings


def check_integral(limits: Limits) -> Outcome:
    """Integral rings of PSU(n) and PSp(n) pass their structural checks."""
    specs = [GroupSpec(Family.SP, n) for n in range(1, limits.sp_integral + 1)]
    specs += [GroupSpec(Family.SU, n) for n in range(2, limits.su_integral + 1)]
    problems = []
    for spec in specs:
        ring = integral_ring(spec)
        failed = [name for name, ok in ring.checks.items() if not ok]
        if failed:
            problems.append(f"{ring.label}: {', '.join(failed)}")
    passed, detail = _failures(problems)
    return passed, detail or f"{len(specs)} rings"


CRITERIA: List[Tuple[str, str, Callable[[Limits], Outcome]]] = [
    ("transgression", "criterion 1: transgression images and restriction relations", check_transgression),
    ("flag-ranks", "criterion 2: total rank of H*(G/T)", check_flag_ranks),
    ("e3-orders", "criterion 3: E3^(*,0) orders from the flag presentation", check_e3),
    ("tables", "criterion 4: characteristic polynomial tables", check_tables),
    ("exactness", "criterion 5: mod p rings against Koszul homology", check_exactness),
    ("bockstein-steenrod", "criterion 6: Bockstein and Steenrod values", check_bockstein_steenrod),
    ("bockstein-cohomology", "criterion 7: Bockstein cohomology of PE6 and PE7", check_bockstein_cohomology),
    ("binomials", "criterion 8: binomial identities and theta recurrence", check_binomials),
    ("integral", "criterion 9: integral rings of PSU(n) and PSp(n)", check_integral),
]


def run_check(
    name: str,
    anchor: str,
    criterion: Callable[[Limits], Outcome],
    limits: Limits
) -> Check:
    """Run one criterion; a domain exception fails the check with its message."""
    start = time.perf_counter()
    try:
        passed, detail = criterion(limits)
    except DOMAIN_ERRORS as e:
        passed, detail = False, f"{type(e).__name__}: {e}"
    seconds = time.perf_counter() - start
    level = logging.INFO if passed else logging.WARNING
    logger.log(level, f"{name}: {'pass' if passed else 'FAIL'} in {seconds:.2f}s {detail}")
    return Check(name=name, anchor=anchor, passed=passed, seconds=seconds, detail=detail)


def run_battery(scale: Scale = Scale.QUICK, only: Optional[List[str]] = None) -> BatteryResult:
    """
    Run the acceptance criteria.

    Args:
        scale: quick or full ranges
        only: Names of the criteria to run (all when None)

    Returns:
        BatteryResult with one Check per criterion

    Raises:
        VerificationError: If `only` names an unknown criterion
    """
    scale = Scale(scale)
    known = [name for name, _, _ in CRITERIA]
    if only:
        unknown = [name for name in only if name not in known]
        if unknown:
            raise VerificationError(f"Unknown checks {unknown}; choose from {known}")
    limits = LIMITS[scale]
    result = BatteryResult(scale=scale)
    for name, anchor, criterion in CRITERIA:
        if only and name not in only:
            continue
        result.checks.append(run_check(name, anchor, criterion, limits))
    logger.info(
        f"Verification ({scale.value}): {len(result.checks) - len(result.failures())}"
        f"/{len(result.checks)} passed in {result.seconds:.1f}s"
    )
    return result
