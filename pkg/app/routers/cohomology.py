"""Handlers for charpolys, modp, integral, bockstein and steenrod."""

import logging
from typing import Dict, List

from sympy import factorint

from app.config import get_settings
from app.models.schemas import (
    ActionRelationDoc,
    BocksteinComplexDoc,
    BocksteinValueDoc,
    CharPolySetDoc,
    CommandRequest,
    DeltaCheckDoc,
    SquareDoc,
    SteenrodDoc,
)
from app.routers.documents import Emitted, form_doc, group_doc, polynomial_doc, ring_doc
from app.services.bockstein import (
    action_relations,
    bockstein_cohomology,
    bockstein_complex,
    check_bockstein,
    delta_consistency,
)
from app.services.charpolys import (
    CharPolyError,
    PolyKind,
    a_orders,
    char_polys,
    degree_sets,
    derivatives,
)
from app.services.render import group_text, ring_latex, ring_text
from app.services.rings import integral_ring, mod_p_ring
from app.services.root_data import GroupSpec
from app.services.steenrod import check_squares
from app.tables.char_polys import PRIMES

settings = get_settings()
logger = logging.getLogger(__name__)


def _spec(request: CommandRequest) -> GroupSpec:
    return GroupSpec.parse(request.group, request.n)


def _prime(request: CommandRequest, spec: GroupSpec) -> int:
    """The requested prime, or the torsion prime when the center order is a prime power."""
    if request.prime is not None:
        return request.prime
    if spec.is_exceptional:
        return PRIMES[spec.family.value]
    factors = factorint(spec.center_order)
    if len(factors) == 1:
        return int(next(iter(factors)))
    raise CharPolyError(f"{spec.base_label} has several torsion primes; pass --prime")


def charpolys(request: CommandRequest) -> Emitted:
    """A characteristic-polynomial set with derivatives and theta-bar for PG."""
    spec = _spec(request)
    kind = PolyKind(request.kind)
    prime = None if kind is PolyKind.INTEGRAL else request.prime
    result = char_polys(spec, kind, prime)
    differentiated = derivatives(result) if spec.is_adjoint else [None] * len(result.entries)
    orders: Dict[int, int] = {}
    if spec.is_adjoint and kind is PolyKind.INTEGRAL:
        orders = a_orders(spec)
    sets = degree_sets(spec, prime)
    document = CharPolySetDoc(
        command="charpolys",
        group=spec.label,
        kind=kind.value,
        prime=prime,
        degree_set=result.degree_set,
        h=sets.h,
        forms=[form_doc(f, d) for f, d in zip(result.entries, differentiated)],
        a_orders=orders,
    )
    lines = [f"{kind.value} characteristic polynomials of {spec.label}"]
    for form, derivative in zip(result.entries, differentiated):
        line = f"  {form.label}: {form.polynomial.to_text()}"
        if derivative is not None:
            line += f"  [d/dvarpi = {derivative.to_text()}]"
        lines.append(line)
    for s, order in sorted(orders.items()):
        lines.append(f"  a_{s} = {order}")
    return Emitted(document, "\n".join(lines))


def modp(request: CommandRequest) -> Emitted:
    """H*(PG; F_p)."""
    ring = mod_p_ring(_spec(request), request.prime)
    return Emitted(ring_doc("modp", ring), ring_text(ring), ring_latex(ring))


def integral(request: CommandRequest) -> Emitted:
    """H*(PG) with its torsion ideals."""
    ring = integral_ring(_spec(request))
    return Emitted(ring_doc("integral", ring), ring_text(ring), ring_latex(ring))


def bockstein(request: CommandRequest) -> Emitted:
    """
    beta_p on every class zeta of PG; for PE6 and PE7 also the Bockstein
    cohomology, the image presentation and the action relations.
    """
    spec = _spec(request).adjoint()
    p = _prime(request, spec)
    values = [check_bockstein(spec, p, s) for s in degree_sets(spec, p).quotient]
    lines = [f"Bockstein values of {spec.label} mod {p}"]
    lines += [f"  beta_{p}({v.label}) = {v.value.to_text()}" for v in values]
    document = BocksteinComplexDoc(
        command="bockstein",
        group=spec.label,
        prime=p,
        values=[
            BocksteinValueDoc(
                label=v.label,
                s=v.s,
                value=polynomial_doc(v.value),
                expected=polynomial_doc(v.expected),
                matches=v.matches,
            )
            for v in values
        ],
    )
    if spec.is_exceptional:
        complex_ = bockstein_complex(spec.label)
        result = bockstein_cohomology(complex_)
        relations = action_relations(complex_)
        deltas = delta_consistency(complex_, spec)
        document.algebra_dimension = result.algebra_dimension
        document.cohomology = group_doc(result.cohomology)
        document.image = group_doc(result.image)
        document.presentation_matches = result.presentation_matches
        document.relations_hold = result.relations_hold
        document.action_relations = [
            ActionRelationDoc(text=r.text, holds=r.holds, strict=r.strict) for r in relations
        ]
        document.delta_checks = [
            DeltaCheckDoc(
                generator=d.generator,
                wired=d.wired.to_text(),
                computed=d.computed.to_text() if d.computed is not None else None,
                matches=d.matches,
            )
            for d in deltas
        ]
        lines.append(f"Bockstein cohomology (dimension {result.cohomology.total_rank()}):")
        lines.append(group_text(result.cohomology))
        lines += [f"  {r.text}: {'holds' if r.holds else 'fails'}" for r in relations]
    return Emitted(document, "\n".join(lines))


def steenrod(request: CommandRequest) -> Emitted:
    """Known squares Sq^k zeta of PG, recomputed mod 2."""
    spec = _spec(request).adjoint()
    cap = request.max_degree
    squares = check_squares(spec, cap)
    entries: List[SquareDoc] = []
    lines = [f"Steenrod squares on {spec.label}"]
    for square in squares:
        source = f"zeta{2 * square.source_s - 1}"
        image = square.result.identified if square.result is not None else None
        entries.append(SquareDoc(
            source=source,
            k=square.k,
            image=image,
            expected=square.expected,
            skipped=square.skipped,
            matches=square.matches,
        ))
        shown = "skipped" if square.skipped else (image or "0")
        lines.append(f"  Sq^{square.k} {source} = {shown}")
    return Emitted(SteenrodDoc(command="steenrod", group=spec.label, squares=entries), "\n".join(lines))
