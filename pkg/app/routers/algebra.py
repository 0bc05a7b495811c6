"""Handlers for the structural subcommands: cartan, transgression, flag, e3-base, koszul."""

import logging

from app.config import get_settings
from app.models.schemas import CommandRequest, KoszulDoc, MatrixDoc, TransgressionDoc
from app.routers.documents import Emitted, group_doc, polynomial_doc, presentation_doc
from app.services.flag import e3_base, flag_presentation, mod_p_presentation, restriction_map
from app.services.koszul import koszul_homology
from app.services.render import group_text, presentation_latex, presentation_text
from app.services.rings import poincare_series
from app.services.root_data import GroupSpec, cartan_matrix, transgression, transition_matrix

settings = get_settings()
logger = logging.getLogger(__name__)


def _spec(request: CommandRequest) -> GroupSpec:
    return GroupSpec.parse(request.group, request.n)


def _matrix_text(matrix) -> str:
    return "\n".join(" ".join(f"{v:3d}" for v in row) for row in matrix)


def _matrix_latex(matrix) -> str:
    rows = r" \\ ".join(" & ".join(str(v) for v in row) for row in matrix)
    return rf"\begin{{pmatrix}} {rows} \end{{pmatrix}}"


def cartan(request: CommandRequest) -> Emitted:
    """Cartan matrix and the transition matrix of the requested lattice."""
    spec = _spec(request)
    matrix = cartan_matrix(spec)
    transition = transition_matrix(spec)
    document = MatrixDoc(command="cartan", group=spec.label, cartan=matrix, transition=transition)
    text = f"{spec.label}\ncartan:\n{_matrix_text(matrix)}\ntransition:\n{_matrix_text(transition)}"
    return Emitted(document, text, f"A = {_matrix_latex(matrix)}, C = {_matrix_latex(transition)}")


def transgression_images(request: CommandRequest) -> Emitted:
    """
    tau(t_i) for the lattice; for an adjoint group with q > 1 also the
    weights as multiples of varpi after restriction along tau = 0.
    """
    spec = _spec(request)
    tau = transgression(spec)
    restriction = {}
    order = None
    lines = [f"{spec.label}"]
    for name, image in zip(tau.fiber_names, tau.images):
        lines.append(f"  tau({name}) = {image.to_text()}")
    if spec.is_adjoint and spec.quotient_order > 1:
        mapping = restriction_map(spec)
        restriction = dict(mapping.assignment)
        order = mapping.order
        values = ", ".join(f"{k} = {v}*{mapping.varpi}" for k, v in restriction.items())
        lines.append(f"  restriction: {values}; {mapping.relation_text}")
    document = TransgressionDoc(
        command="transgression",
        group=spec.label,
        fiber=tau.fiber_names,
        images=[polynomial_doc(image) for image in tau.images],
        matrix=tau.matrix,
        restriction=restriction,
        order=order,
    )
    return Emitted(document, "\n".join(lines))


def flag(request: CommandRequest) -> Emitted:
    """Schubert presentation of H*(G/T), over Z or F_p, with its groups."""
    spec = _spec(request)
    presentation = flag_presentation(spec, request.prime)
    top = request.max_degree if request.max_degree is not None else settings.default_max_degree
    group = presentation.graded_group(top)
    document = presentation_doc("flag", presentation, group, top)
    text = f"{presentation_text(presentation)}\n{group_text(group)}"
    return Emitted(document, text, presentation_latex(presentation))


def e3_base_ring(request: CommandRequest) -> Emitted:
    """Presentation of E3^{*,0}(PG) and its groups up to the degree bound."""
    spec = _spec(request).adjoint()
    presentation = e3_base(spec, request.prime)
    top = request.max_degree if request.max_degree is not None else settings.default_max_degree
    group = presentation.graded_group(top)
    logger.info(f"{presentation.label}: nonzero degrees {group.degrees()}")
    document = presentation_doc("e3-base", presentation, group, top)
    text = f"{presentation_text(presentation)}\n{group_text(group)}"
    return Emitted(document, text, presentation_latex(presentation))


def koszul(request: CommandRequest) -> Emitted:
    """Homology of H*(G/T) (x) Lambda(t) with d2 given by the transgression."""
    spec = _spec(request)
    top = request.max_degree if request.max_degree is not None else settings.default_max_degree
    if request.prime is None:
        presentation = flag_presentation(spec)
    else:
        presentation = mod_p_presentation(spec, request.prime)
    homology = koszul_homology(presentation, transgression(spec), top)
    total = homology.by_total_degree()
    document = KoszulDoc(
        command="koszul",
        group=spec.label,
        modulus=request.prime,
        max_degree=top,
        bidegrees=homology.to_dict(),
        total=group_doc(total),
        poincare=poincare_series(homology, top),
    )
    lines = [f"Koszul homology of {spec.label} through degree {top}"]
    lines += [f"  ({key}): {value}" for key, value in homology.to_dict().items()]
    lines.append(group_text(total))
    return Emitted(document, "\n".join(lines))
