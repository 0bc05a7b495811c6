"""Conversion of computed objects into response documents and their text/LaTeX forms."""

from dataclasses import dataclass
from typing import Optional

from pydantic import BaseModel

from app.models.schemas import (
    CohomologyRingDoc,
    GeneratorDoc,
    GradedGroupDoc,
    GroupSummandDoc,
    OddClassDoc,
    OneFormDoc,
    PolynomialDoc,
    PresentationDoc,
    RelationDoc,
    TorsionIdealDoc,
)
from app.services.flag import RingPresentation
from app.services.forms import OneForm
from app.services.linalg import GradedAbelianGroup
from app.services.polynomials import Polynomial
from app.services.render import polynomial_latex
from app.services.rings import CohomologyRing


@dataclass
class Emitted:
    """A document with its plain-text and LaTeX renderings."""

    document: BaseModel
    text: str
    latex: Optional[str] = None


def polynomial_doc(poly: Polynomial) -> PolynomialDoc:
    return PolynomialDoc(
        text=poly.to_text(),
        latex=polynomial_latex(poly),
        degree=None if poly.is_zero else poly.degree(),
        variables=list(poly.ring.names),
        modulus=poly.ring.modulus,
    )


def group_doc(group: GradedAbelianGroup) -> GradedGroupDoc:
    return GradedGroupDoc(
        modulus=group.modulus,
        degrees=[
            GroupSummandDoc(degree=d, rank=group[d].rank, torsion=list(group[d].torsion))
            for d in group.degrees()
        ],
        total_rank=group.total_rank(),
    )


def presentation_doc(
    command: str,
    presentation: RingPresentation,
    group: Optional[GradedAbelianGroup] = None,
    max_degree: Optional[int] = None
) -> PresentationDoc:
    """Presentation document; `group` is attached when the quotient was computed."""
    return PresentationDoc(
        command=command,
        label=presentation.label,
        modulus=presentation.modulus,
        generators=[GeneratorDoc(name=n, degree=d) for n, d in presentation.generators],
        relations=[
            RelationDoc(name=name, polynomial=polynomial_doc(relation))
            for name, relation in zip(presentation.relation_names, presentation.relations)
        ],
        extra=[polynomial_doc(e) for e in presentation.ideal_extra],
        abbreviations={k: v.to_text() for k, v in sorted(presentation.abbreviations.items())},
        group=group_doc(group) if group is not None else None,
        max_degree=max_degree,
    )


def form_doc(form: OneForm, derivative: Optional[Polynomial] = None) -> OneFormDoc:
    return OneFormDoc(
        label=form.label,
        s=form.s,
        degree=form.degree,
        polynomial=polynomial_doc(form.polynomial),
        witness=form.witness_text(),
        derivative=polynomial_doc(derivative) if derivative is not None else None,
        theta_bar=polynomial_doc(form.theta) if form.theta is not None else None,
    )


def ring_doc(command: str, ring: CohomologyRing) -> CohomologyRingDoc:
    """Ring document; the Poincare series is omitted for isomorphism markers."""
    if ring.isomorphism:
        return CohomologyRingDoc(
            command=command,
            label=ring.label,
            coefficients=ring.coefficients,
            isomorphism=ring.isomorphism,
        )
    generators = ring.generator_degrees()
    polynomial_relations = []
    if ring.polynomial_part is not None:
        polynomial_relations = [r.to_text() for r in ring.polynomial_part.relations]
    poincare = ring.poincare()
    return CohomologyRingDoc(
        command=command,
        label=ring.label,
        coefficients=ring.coefficients,
        generators=[GeneratorDoc(name=n, degree=d) for n, d in generators.items()],
        heights=dict(ring.heights),
        polynomial_relations=polynomial_relations,
        odd_generators=[
            OddClassDoc(
                name=g.name,
                degree=g.degree,
                flavor=g.flavor.value,
                square=g.square.to_text() if g.square is not None and not g.square.is_zero else None,
            )
            for g in ring.odd_generators
        ],
        torsion=[
            TorsionIdealDoc(
                prime=ideal.prime,
                generators=ideal.generators,
                exterior=ideal.exterior,
                delta=ideal.delta,
                relations=ideal.relations,
            )
            for _, ideal in sorted(ring.torsion_ideals.items())
        ],
        action_relations=list(ring.action_relations),
        checks=dict(ring.checks),
        observations=dict(ring.observations),
        poincare=poincare,
        total_dimension=sum(poincare),
    )
