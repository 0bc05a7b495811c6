"""Schubert presentations of H*(G/T), their chern symbols and restriction along tau = 0.

Three polynomial contexts are used throughout:

- the flag ring: the weights w1..wm plus the special Schubert classes x_k;
- the symbol ring: the surviving weight(s), chern symbols c_r and the x_k,
  in which the published relations and characteristic polynomials are written;
- the restricted ring: varpi plus the x_k, which carries E3^{*,0}(PG).
"""

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

from app.config import get_settings
from app.services.linalg import (
    GradedAbelianGroup,
    GradedQuotient,
    LinearAlgebraError,
    smith_normal_form,
)
from app.services.polynomials import (
    GradedRing,
    Polynomial,
    PolynomialError,
    elementary_symmetric,
    graded_ring,
    substitute,
)
from app.services.root_data import Family, GroupSpec, omega_ring, transgression
from app.tables.relations import (
    get_omega_forms,
    get_relations,
    get_specials,
    published_chern_coefficient,
    tabulated_restriction,
)
from app.tables.symbols import Symbols

settings = get_settings()
logger = logging.getLogger(__name__)


class FlagError(Exception):
    """Custom exception for flag presentation errors."""
    pass


@dataclass
class RingPresentation:
    """
    Generators with degrees and relation polynomials over Z or F_p.

    Relations may be written in a symbol ring; `abbreviations` expands the
    symbols (chern classes) into the generators.
    """

    label: str
    generators: List[Tuple[str, int]]
    relations: List[Polynomial]
    relation_names: List[str]
    modulus: Optional[int] = None
    ideal_extra: List[Polynomial] = field(default_factory=list)
    abbreviations: Dict[str, Polynomial] = field(default_factory=dict)
    metadata: Dict[str, str] = field(default_factory=dict)

    @property
    def generator_ring(self) -> GradedRing:
        names = tuple(name for name, _ in self.generators)
        degrees = tuple(degree for _, degree in self.generators)
        return graded_ring(names, degrees, self.modulus)

    def expanded_relations(self) -> List[Polynomial]:
        """Relations with the abbreviations substituted, in the generator ring."""
        target = self.generator_ring
        return [substitute(r, self.abbreviations, target) for r in self.relations]

    def quotient(self, max_degree: int) -> GradedQuotient:
        target = self.generator_ring
        extra = [target.convert(e) for e in self.ideal_extra]
        return GradedQuotient(
            target, self.expanded_relations(), extra, max_degree, label=self.label
        )

    def graded_group(self, max_degree: int) -> GradedAbelianGroup:
        return self.quotient(max_degree).graded_group()

    def relation_degrees(self) -> Dict[str, int]:
        return {name: rel.degree() for name, rel in zip(self.relation_names, self.relations)}


@dataclass
class RestrictionMap:
    """Weights expressed as multiples of varpi in H^2(G/T)/Im(tau) = Z/q."""

    spec: GroupSpec
    assignment: Dict[str, int]
    order: int
    varpi: str

    @property
    def relation_text(self) -> str:
        return f"{self.order}*{self.varpi} = 0"


# Rings


def flag_ring(spec: GroupSpec, modulus: Optional[int] = None) -> GradedRing:
    names = list(spec.omega_names)
    degrees = [2] * len(names)
    if spec.is_exceptional:
        for special in get_specials(spec.family.value):
            names.append(special.name)
            degrees.append(special.degree)
    return graded_ring(tuple(names), tuple(degrees), modulus)


def chern_indices(spec: GroupSpec) -> List[int]:
    """Indices r of the chern symbols c_r that appear in the symbol ring."""
    if spec.family is Family.SU:
        return list(range(2, spec.n + 1))
    if spec.family is Family.SP:
        return list(range(2, 2 * spec.n + 1, 2))
    return list(range(2, spec.rank + 1))


def symbol_ring(spec: GroupSpec, modulus: Optional[int] = None) -> GradedRing:
    if spec.family is Family.E6:
        names, degrees = ["w1", "w2"], [2, 2]
    else:
        names, degrees = [spec.varpi], [2]
    for r in chern_indices(spec):
        names.append(f"c{r}")
        degrees.append(2 * r)
    if spec.is_exceptional:
        for special in get_specials(spec.family.value):
            names.append(special.name)
            degrees.append(special.degree)
    return graded_ring(tuple(names), tuple(degrees), modulus)


def restricted_ring(spec: GroupSpec, modulus: Optional[int] = None) -> GradedRing:
    names, degrees = [spec.varpi], [2]
    if spec.is_exceptional:
        for special in get_specials(spec.family.value):
            names.append(special.name)
            degrees.append(special.degree)
    return graded_ring(tuple(names), tuple(degrees), modulus)


# Omega sets and chern classes


def omega_set(spec: GroupSpec) -> List[Polynomial]:
    """
    The linear forms whose elementary symmetric functions define c_r(G).

    Args:
        spec: Group specification

    Returns:
        Degree-2 forms in the weight ring, in the published order
    """
    ring = omega_ring(spec)
    w = {name: ring.gen(name) for name in spec.omega_names}

    if spec.family is Family.SU:
        n = spec.n
        forms = [w["w1"]]
        forms += [w[f"w{k}"] - w[f"w{k - 1}"] for k in range(2, n)]
        forms.append(-w[f"w{n - 1}"])
        return forms
    if spec.family is Family.SP:
        forms = [w["w1"], -w["w1"]]
        for k in range(2, spec.n + 1):
            form = w[f"w{k}"] - w[f"w{k - 1}"]
            forms += [form, -form]
        return forms

    forms = []
    for coefficients in get_omega_forms(spec.family.value):
        form = ring.zero
        for name, coeff in coefficients.items():
            form = form + coeff * w[name]
        forms.append(form)
    return forms


@lru_cache(maxsize=None)
def chern_class(spec: GroupSpec, r: int) -> Polynomial:
    """
    c_r(G): the r-th elementary symmetric polynomial of the omega set.

    Raises:
        FlagError: If r is out of range for the family
    """
    forms = omega_set(spec)
    try:
        return elementary_symmetric(forms, r)
    except PolynomialError as e:
        raise FlagError(f"Chern class c{r} of {spec.base_label}: {e}")


def chern_abbreviations(spec: GroupSpec, modulus: Optional[int] = None) -> Dict[str, Polynomial]:
    target = flag_ring(spec, modulus)
    return {f"c{r}": target.convert(chern_class(spec, r)) for r in chern_indices(spec)}


def to_flag(poly: Polynomial, spec: GroupSpec) -> Polynomial:
    """Expand chern symbols: map a symbol-ring polynomial into the flag ring."""
    abbreviations = chern_abbreviations(spec, poly.ring.modulus)
    return substitute(poly, abbreviations, flag_ring(spec, poly.ring.modulus))


# Presentations


def symbol_relations(spec: GroupSpec, modulus: Optional[int] = None) -> List[Tuple[str, Polynomial]]:
    """Relations of H*(G/T) written in chern symbols, in presentation order."""
    ring = symbol_ring(spec, modulus)
    if not spec.is_exceptional:
        return [(f"c{r}", ring.gen(f"c{r}")) for r in chern_indices(spec)]
    g = Symbols(ring)
    return [(record.name, record.build(g)) for record in get_relations(spec.family.value)]


def flag_presentation(spec: GroupSpec, modulus: Optional[int] = None) -> RingPresentation:
    """
    Schubert presentation of H*(G/T).

    Args:
        spec: Group specification (the lattice is irrelevant)
        modulus: None for Z, or a prime for the reduction mod p

    Returns:
        RingPresentation with relations in chern symbols
    """
    ring = flag_ring(spec, modulus)
    relations = symbol_relations(spec, modulus)
    presentation = RingPresentation(
        label=f"H*({spec.base_label}/T)",
        generators=list(zip(ring.names, ring.degrees)),
        relations=[rel for _, rel in relations],
        relation_names=[name for name, _ in relations],
        modulus=modulus,
        abbreviations=chern_abbreviations(spec, modulus),
        metadata={"family": spec.family.value, "kind": "flag"},
    )
    for name, relation in relations:
        if not relation.is_homogeneous():
            raise FlagError(f"Relation {name} of {presentation.label} is inhomogeneous")
    return presentation


def validate_shape(spec: GroupSpec) -> List[str]:
    """
    Check each special generator y appears as f = p*y + alpha and g = y^k + ...

    Returns:
        One line per verified special generator

    Raises:
        FlagError: If a relation does not have the advertised shape
    """
    if not spec.is_exceptional:
        return []
    relations = dict(symbol_relations(spec))
    report = []
    for special in get_specials(spec.family.value):
        ring = relations[special.linear_relation].ring
        y = ring.gen(special.name)
        linear = relations[special.linear_relation]
        alpha = linear - special.prime * y
        if alpha.max_exponent(special.name) != 0 or linear.coefficient(
            tuple(1 if n == special.name else 0 for n in ring.names)
        ) != special.prime:
            raise FlagError(
                f"{special.linear_relation} is not of the form {special.prime}*{special.name} + alpha"
            )
        power = relations[special.power_relation]
        top = tuple(special.power if n == special.name else 0 for n in ring.names)
        others = power - y ** special.power
        if power.coefficient(top) != 1 or others.max_exponent(special.name) >= special.power:
            raise FlagError(
                f"{special.power_relation} does not lead with {special.name}^{special.power}"
            )
        if linear.degree() != special.degree:
            raise FlagError(f"{special.linear_relation} has degree {linear.degree()}")
        report.append(
            f"{special.name}: {special.linear_relation} = {special.prime}*{special.name} + alpha, "
            f"{special.power_relation} = {special.name}^{special.power} + ..."
        )
    return report


def mod_p_presentation(spec: GroupSpec, p: int) -> RingPresentation:
    """
    Presentation of H*(G/T; F_p).

    Special generators whose prime is invertible mod p are solved for and
    eliminated together with their linear relation.
    """
    base = flag_presentation(spec, p)
    if not spec.is_exceptional:
        base.label = f"H*({spec.base_label}/T; F{p})"
        return base

    named = list(zip(base.relation_names, base.relations))
    ring = symbol_ring(spec, p)
    eliminated = []
    for special in get_specials(spec.family.value):
        if special.prime % p == 0:
            continue
        linear = dict(named)[special.linear_relation]
        y = linear.ring.gen(special.name)
        alpha = linear - special.prime * y
        inverse = pow(special.prime, -1, p)
        value = alpha * (-inverse)
        keep = [(n, d) for n, d in zip(linear.ring.names, linear.ring.degrees) if n != special.name]
        target = graded_ring(tuple(n for n, _ in keep), tuple(d for _, d in keep), p)
        named = [
            (name, substitute(rel, {special.name: value}, target))
            for name, rel in named if name != special.linear_relation
        ]
        ring = target
        eliminated.append(special.name)

    generators = [(n, d) for n, d in base.generators if n not in eliminated]
    logger.info(f"Mod {p} presentation of {spec.base_label}/T eliminates {eliminated}")
    return RingPresentation(
        label=f"H*({spec.base_label}/T; F{p})",
        generators=generators,
        relations=[rel for _, rel in named if not rel.is_zero],
        relation_names=[name for name, rel in named if not rel.is_zero],
        modulus=p,
        abbreviations=chern_abbreviations(spec, p),
        metadata={"family": spec.family.value, "kind": "flag", "eliminated": ",".join(eliminated)},
    )


# Restriction along tau = 0


@lru_cache(maxsize=None)
def restriction_map(spec: GroupSpec) -> RestrictionMap:
    """
    Solve tau(t_i) = 0 over Z by Smith normal form.

    Returns:
        RestrictionMap sending each weight to a multiple of varpi modulo q

    Raises:
        FlagError: If the quotient is not cyclic of order q generated by varpi,
            or disagrees with the tabulated relations
    """
    if not spec.is_adjoint:
        raise FlagError(f"Restriction needs an adjoint group, got {spec}")
    tau = transgression(spec)
    q = spec.quotient_order
    try:
        snf = smith_normal_form(tau.matrix)
    except LinearAlgebraError as e:
        raise FlagError(f"Transgression matrix of {spec}: {e}")

    units = snf.diagonal[:-1]
    if any(d != 1 for d in units) or snf.diagonal[-1] != q:
        raise FlagError(f"H^2/Im(tau) of {spec} is not Z/{q}: diagonal {snf.diagonal}")
    k = len(snf.diagonal) - 1
    names = spec.omega_names
    column = [snf.right[j][k] for j in range(len(names))]
    anchor = column[names.index(spec.varpi)] % q
    try:
        inverse = pow(anchor, -1, q) if q > 1 else 0
    except ValueError:
        raise FlagError(f"{spec.varpi} does not generate H^2/Im(tau) for {spec}")
    assignment = {name: (value * inverse) % q for name, value in zip(names, column)}

    expected = tabulated_restriction(spec.family.value, spec.n)
    if assignment != expected:
        raise FlagError(
            f"Restriction of {spec} disagrees with the tabulated relations: "
            f"{assignment} != {expected}"
        )
    logger.debug(f"Restriction map for {spec}: {assignment} with {q}*{spec.varpi} = 0")
    return RestrictionMap(spec=spec, assignment=assignment, order=q, varpi=spec.varpi)


def _elementary_integers(values: List[int]) -> List[int]:
    levels = [1] + [0] * len(values)
    for count, value in enumerate(values, start=1):
        for k in range(count, 0, -1):
            levels[k] += levels[k - 1] * value
    return levels


@lru_cache(maxsize=None)
def raw_chern_coefficients(spec: GroupSpec) -> Tuple[int, ...]:
    """Coefficient of varpi^r in c_r restricted along tau = 0, for every r."""
    assignment = restriction_map(spec).assignment
    values = []
    for form in omega_set(spec):
        total = 0
        for monomial, coeff in form.terms.items():
            name = form.ring.names[monomial.index(1)]
            total += coeff * assignment[name]
        values.append(total)
    return tuple(_elementary_integers(values))


def restrict(poly: Polynomial, spec: GroupSpec, published: bool = True) -> Polynomial:
    """
    Restriction along tau = 0 into the restricted ring.

    Weights go to their multiples of varpi; chern symbols go to the published
    binomial values (published=True) or to the exact image of e_r under the
    weight assignment (published=False). The two agree modulo q*varpi.

    Args:
        poly: Polynomial in the flag ring or the symbol ring of `spec`
        spec: Adjoint group specification
        published: Which value to use for chern symbols

    Returns:
        Polynomial in the restricted ring (same coefficients)
    """
    modulus = poly.ring.modulus
    target = restricted_ring(spec, modulus)
    varpi = target.gen(spec.varpi)
    assignment = restriction_map(spec).assignment
    raw = raw_chern_coefficients(spec)

    images: Dict[str, Polynomial] = {}
    for name in poly.variables():
        if name.startswith("w"):
            images[name] = assignment[name] * varpi
        elif name.startswith("c"):
            r = int(name[1:])
            coeff = (
                published_chern_coefficient(spec.family.value, spec.n, r)
                if published else raw[r]
            )
            images[name] = coeff * varpi**r
    return substitute(poly, images, target)


def restricted_chern(spec: GroupSpec, r: int) -> Polynomial:
    """
    Image of c_r along tau = 0, coefficients reduced modulo q.

    Raises:
        FlagError: If the computed value contradicts the published binomial formula
    """
    raw = raw_chern_coefficients(spec)
    if r < 1 or r >= len(raw):
        raise FlagError(f"c{r} out of range for {spec.base_label}")
    q = spec.quotient_order
    published = published_chern_coefficient(spec.family.value, spec.n, r)
    if (raw[r] - published) % q:
        raise FlagError(
            f"c{r} of {spec} restricts to {raw[r]}*{spec.varpi}^{r}, "
            f"not congruent to {published} mod {q}"
        )
    ring = restricted_ring(spec)
    return (raw[r] % q) * ring.gen(spec.varpi) ** r


# E3^{*,0}(PG)


def e3_degree_bound(spec: GroupSpec) -> int:
    return max(settings.exceptional_degree_cap, 4 * spec.n + 4)


def e3_base(spec: GroupSpec, modulus: Optional[int] = None) -> RingPresentation:
    """
    Presentation of E3^{*,0}(PG) = H*(G/T) restricted along tau = 0.

    The relations are the exact images of the flag relations under the
    weight assignment solved from tau; q*varpi = 0 is the extra generator.
    """
    if not spec.is_adjoint:
        raise FlagError(f"E3 base presentation needs an adjoint group, got {spec}")
    ring = restricted_ring(spec, modulus)
    relations = []
    names = []
    for name, relation in symbol_relations(spec):
        image = restrict(relation, spec, published=False)
        if modulus is not None:
            image = image.reduce(modulus)
        relations.append(ring.convert(image))
        names.append(name)
    extra = [spec.quotient_order * ring.gen(spec.varpi)]
    suffix = "" if modulus is None else f"; F{modulus}"
    return RingPresentation(
        label=f"E3^(*,0)({spec.label}{suffix})",
        generators=list(zip(ring.names, ring.degrees)),
        relations=relations,
        relation_names=names,
        modulus=modulus,
        ideal_extra=extra,
        metadata={"family": spec.family.value, "kind": "e3-base"},
    )


@lru_cache(maxsize=None)
def e3_quotient(spec: GroupSpec, modulus: Optional[int] = None) -> GradedQuotient:
    """Cached degreewise quotient for E3^{*,0}(PG), over Z or F_p."""
    return e3_base(spec, modulus).quotient(e3_degree_bound(spec))


def e3_from_flag(spec: GroupSpec, max_degree: int) -> GradedAbelianGroup:
    """
    E3^{*,0}(PG) computed in the full flag ring with the transgression images
    adjoined to the ideal.
    """
    presentation = flag_presentation(spec)
    ring = presentation.generator_ring
    tau = transgression(spec)
    quotient = GradedQuotient(
        ring,
        presentation.expanded_relations(),
        [ring.convert(image) for image in tau.images],
        max_degree,
        label=f"E3^(*,0)({spec.label}) via flag ring",
    )
    return quotient.graded_group()


@lru_cache(maxsize=None)
def kernel_quotient(spec: GroupSpec, modulus: Optional[int], max_degree: int) -> GradedQuotient:
    """Symbol ring modulo the flag relations; zero classes lie in ker f."""
    ring = symbol_ring(spec, modulus)
    relations = [rel for _, rel in symbol_relations(spec, modulus)]
    return GradedQuotient(
        ring, relations, (), max_degree, label=f"symbols of {spec.base_label}/T"
    )
