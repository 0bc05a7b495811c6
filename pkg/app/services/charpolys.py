"""Characteristic-polynomial sets of G over F_p and Z.

Three sets are produced per group:

- mod p: one polynomial per degree in D(G, p), defining the classes xi;
- quotient: the mod p polynomials lifted into the kernel of restriction,
  defining the classes zeta of PG (the degree h(G) is excluded);
- integral: one polynomial per degree in D(G), defining the classes gamma.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from math import comb, gcd
from typing import Dict, List, Optional

from app.config import get_settings
from app.services.binomial import b_gcd
from app.services.flag import chern_indices, restricted_ring, symbol_ring
from app.services.forms import (
    FormError,
    OneForm,
    check_witness,
    derivative_wrt_varpi,
    form_label,
    in_kernel,
    in_tau_ideal,
    lift_characteristic,
    relation_witness,
    theta_bar,
    theta_order,
)
from app.services.polynomials import Polynomial
from app.services.root_data import Family, GroupSpec
from app.tables.char_polys import (
    H_DEGREE,
    INTEGRAL_DEGREES,
    MOD_P_DEGREES,
    PRIMES,
    get_integral_forms,
    get_mod_p_forms,
)
from app.tables.symbols import Symbols

settings = get_settings()
logger = logging.getLogger(__name__)


class CharPolyError(Exception):
    """Custom exception for characteristic polynomial errors."""
    pass


class PolyKind(str, Enum):
    """Which characteristic-polynomial set."""

    MOD_P = "mod-p"
    QUOTIENT = "quotient"
    INTEGRAL = "integral"


@dataclass
class DegreeSets:
    """D(G, p), D(PG, p) = D(G, p) minus h(G), and the integral D(G)."""

    spec: GroupSpec
    prime: Optional[int]
    mod_p: List[int]
    integral: List[int]
    h: Optional[int] = None

    @property
    def quotient(self) -> List[int]:
        return [s for s in self.mod_p if s != self.h]

    def to_dict(self) -> dict:
        return {
            "prime": self.prime,
            "mod_p": self.mod_p,
            "quotient": self.quotient,
            "integral": self.integral,
            "h": self.h,
        }


@dataclass
class CharPolySet:
    """Characteristic polynomials of one kind, with their degree set."""

    spec: GroupSpec
    kind: PolyKind
    prime: Optional[int]
    entries: List[OneForm] = field(default_factory=list)
    degree_set: List[int] = field(default_factory=list)

    def by_degree(self) -> Dict[int, OneForm]:
        return {form.s: form for form in self.entries}


def _valuation(n: int, p: int) -> int:
    r = 0
    while n % p == 0:
        n //= p
        r += 1
    return r


def check_prime(spec: GroupSpec, p: int):
    """
    Reject (G, p) pairs outside the torsion primes of the center quotient.

    Raises:
        CharPolyError: If p does not divide the center order
    """
    if spec.family is Family.SU:
        if spec.n % p:
            raise CharPolyError(
                f"{p} does not divide {spec.n}: H*(PSU({spec.n}); F{p}) is that of SU({spec.n})"
            )
        return
    expected = 2 if spec.family is Family.SP else PRIMES[spec.family.value]
    if p != expected:
        raise CharPolyError(
            f"{spec.base_label} is treated mod {expected} only; for p={p} the quotient "
            f"map induces an isomorphism with {spec.base_label}"
        )


def h_degree(spec: GroupSpec, p: int) -> int:
    """h(G) = p^r, 2^{r+1}, 9, 2 for SU(n), Sp(n), E6, E7."""
    check_prime(spec, p)
    if spec.family is Family.SU:
        return p ** _valuation(spec.n, p)
    if spec.family is Family.SP:
        return 2 ** (_valuation(spec.n, 2) + 1)
    return H_DEGREE[spec.family.value]


def degree_sets(spec: GroupSpec, p: Optional[int] = None) -> DegreeSets:
    """
    Degree sets of the characteristic polynomials.

    Args:
        spec: Group specification
        p: Prime for the mod p set (None for the integral set only)

    Returns:
        DegreeSets with half-degrees s
    """
    if spec.is_exceptional:
        family = spec.family.value
        integral = list(INTEGRAL_DEGREES[family])
        mod_p = list(MOD_P_DEGREES[family]) if p is not None else []
    else:
        integral = list(chern_indices(spec))
        mod_p = list(integral) if p is not None else []
    h = h_degree(spec, p) if p is not None else None
    return DegreeSets(spec=spec, prime=p, mod_p=mod_p, integral=integral, h=h)


def _chern_entry(spec: GroupSpec, s: int, modulus: Optional[int]) -> Polynomial:
    return symbol_ring(spec, modulus).gen(f"c{s}")


def _mod_p_entries(spec: GroupSpec, p: int, certify: bool) -> List[OneForm]:
    ring = symbol_ring(spec, p)
    entries = []
    if spec.is_exceptional:
        g = Symbols(ring)
        records = [(record.s, record.build(g)) for record in get_mod_p_forms(spec.family.value)]
    else:
        records = [(s, _chern_entry(spec, s, p)) for s in chern_indices(spec)]
    for s, poly in records:
        if not spec.is_exceptional:
            witness = {f"c{s}": ring.one}
        elif certify:
            witness = relation_witness(poly, spec)
        else:
            witness = {}
        entries.append(OneForm(form_label("xi", s), spec, poly, s, witness=witness))
    return entries


def _integral_entries(spec: GroupSpec) -> List[OneForm]:
    ring = symbol_ring(spec)
    entries = []
    if spec.is_exceptional:
        g = Symbols(ring)
        for record in get_integral_forms(spec.family.value):
            entries.append(OneForm(
                form_label("gamma", record.s), spec, record.build(g), record.s,
                witness=record.witness(g),
            ))
        return entries
    for s in chern_indices(spec):
        entries.append(OneForm(
            form_label("gamma", s), spec, _chern_entry(spec, s, None), s,
            witness={f"c{s}": ring.one},
        ))
    return entries


def char_polys(
    spec: GroupSpec,
    kind: PolyKind,
    p: Optional[int] = None,
    certify: bool = True
) -> CharPolySet:
    """
    Build the characteristic-polynomial set of the requested kind.

    Args:
        spec: Group specification
        kind: mod-p, quotient or integral
        p: Prime, required for mod-p and quotient sets
        certify: Attach relation witnesses and check ideal membership

    Returns:
        CharPolySet whose entries carry theta-bar where it is defined

    Raises:
        CharPolyError: For an out-of-scope (G, p) pair or a failed certificate
    """
    kind = PolyKind(kind)
    if kind is not PolyKind.INTEGRAL and p is None:
        raise CharPolyError(f"The {kind.value} set needs a prime")
    sets = degree_sets(spec, p if kind is not PolyKind.INTEGRAL else None)
    try:
        if kind is PolyKind.INTEGRAL:
            entries = _integral_entries(spec)
            degree_set = sets.integral
        else:
            entries = _mod_p_entries(spec, p, certify)
            degree_set = sets.mod_p
            if kind is PolyKind.QUOTIENT:
                lifted = []
                for form in entries:
                    if form.s == sets.h:
                        continue
                    poly = lift_characteristic(form.polynomial, spec)
                    witness = relation_witness(poly, spec) if certify else {}
                    lifted.append(OneForm(form_label("zeta", form.s), spec, poly, form.s, witness))
                entries = lifted
                degree_set = sets.quotient
    except FormError as e:
        raise CharPolyError(f"{kind.value} set of {spec.base_label}: {e}")

    if [form.s for form in entries] != degree_set:
        raise CharPolyError(
            f"Degrees {[f.s for f in entries]} do not match the degree set {degree_set}"
        )
    if certify:
        _certify(spec, kind, entries)
    logger.info(f"{kind.value} characteristic polynomials of {spec.base_label}: {len(entries)}")
    return CharPolySet(spec=spec, kind=kind, prime=p, entries=entries, degree_set=degree_set)


def _certify(spec: GroupSpec, kind: PolyKind, entries: List[OneForm]):
    membership = spec.adjoint() if kind is PolyKind.QUOTIENT else spec.simply_connected()
    for form in entries:
        if not in_tau_ideal(form.polynomial, membership):
            raise CharPolyError(f"{form.label} = {form.polynomial} is not in the transgression ideal")
        if form.witness:
            if not check_witness(form.polynomial, spec, form.witness):
                raise CharPolyError(f"Relation witness of {form.label} does not reproduce it")
        elif not in_kernel(form.polynomial, spec):
            raise CharPolyError(f"{form.label} = {form.polynomial} is not in ker f")
        if spec.is_adjoint:
            form.theta = theta_bar(form.polynomial, spec)


# theta-bar values and orders


def theta_bar_values(spec: GroupSpec, p: int) -> Dict[int, Polynomial]:
    """theta-bar(xi_{2s-1}) in E3^{*,0}(PG; F_p) for every s in D(G, p)."""
    entries = char_polys(spec, PolyKind.MOD_P, p, certify=False).entries
    return {form.s: theta_bar(form.polynomial, spec) for form in entries}


def expected_theta_bar(spec: GroupSpec, p: int, s: int) -> Optional[Polynomial]:
    """
    Predicted theta-bar(xi_{2s-1}): zero off h(G), varpi^{h-1} up to a unit at h(G).

    Returns:
        The monomial varpi^{h-1} at s = h(G), None elsewhere (meaning zero)
    """
    h = h_degree(spec, p)
    if s != h:
        return None
    ring = restricted_ring(spec.adjoint(), p)
    return ring.gen(spec.varpi) ** (h - 1)


def a_orders(spec: GroupSpec) -> Dict[int, int]:
    """
    Orders a_s of theta-bar(gamma_{2s-1}) in the integral E3^{*,0}(PG).

    Returns:
        s -> order (1 when theta-bar vanishes)
    """
    entries = char_polys(spec, PolyKind.INTEGRAL, certify=False).entries
    orders = {}
    for form in entries:
        try:
            orders[form.s] = theta_order(form.polynomial, spec)
        except FormError as e:
            raise CharPolyError(f"Order of theta-bar({form.label}): {e}")
    return orders


def expected_a_orders(spec: GroupSpec) -> Dict[int, int]:
    """Closed forms of the orders a_s for each family."""
    sets = degree_sets(spec)
    if spec.family is Family.SU:
        n = spec.n
        result = {}
        for s in sets.integral:
            b = b_gcd(n, s - 1)
            result[s] = b // gcd(b, comb(n, s))
        return result
    if spec.family is Family.SP:
        top = 2 ** (_valuation(spec.n, 2) + 1)
        return {s: 2 if s == top else 1 for s in sets.integral}
    special = {"E6": (9, 3), "E7": (2, 2)}[spec.family.value]
    return {s: special[1] if s == special[0] else 1 for s in sets.integral}


def derivatives(char_set: CharPolySet) -> List[Polynomial]:
    """dP/dvarpi for every entry of a set, in the restricted ring."""
    return [derivative_wrt_varpi(form.polynomial, char_set.spec) for form in char_set.entries]
