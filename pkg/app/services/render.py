"""Text and LaTeX emitters for polynomials, presentations, groups and rings."""

import logging
import re
from typing import List

from app.services.flag import RingPresentation
from app.services.linalg import GradedAbelianGroup, GroupSummand
from app.services.polynomials import Polynomial
from app.services.rings import CohomologyRing, Flavor

logger = logging.getLogger(__name__)

_INDEXED = {
    "w": r"\omega",
    "c": "c",
    "x": "x",
    "t": "t",
    "rho": r"\rho",
    "zeta": r"\zeta",
    "xi": r"\xi",
    "gamma": r"\gamma",
    "varsigma": r"\varsigma",
}

_NAME = re.compile(r"^([a-z]+)(\d+)$")
_TOKEN = re.compile(r"[A-Za-z]+[A-Za-z0-9_]*")


def _subscript(index: str) -> str:
    return f"_{index}" if len(index) == 1 else f"_{{{index}}}"


def latex_name(name: str) -> str:
    """
    LaTeX for a generator name.

    Args:
        name: Ring or class name such as w1, c12, rho23, iota or c_1_7

    Returns:
        LaTeX fragment, e.g. \\omega_1, c_{12}, \\rho_{23}, \\mathcal{C}_{\\{1,7\\}}
    """
    if name == "iota":
        return r"\iota"
    if name.startswith("c_"):
        indices = ",".join(name.split("_")[1:])
        return rf"\mathcal{{C}}_{{\{{{indices}\}}}}"
    match = _NAME.match(name)
    if match and match.group(1) in _INDEXED:
        return _INDEXED[match.group(1)] + _subscript(match.group(2))
    return name


def polynomial_latex(poly: Polynomial) -> str:
    """Render a polynomial as LaTeX, e.g. 2\\omega_1^{2}x_3."""
    if poly.is_zero:
        return "0"
    pieces = []
    for monomial, coeff in poly.items():
        factors = []
        for name, e in zip(poly.ring.names, monomial):
            if e == 1:
                factors.append(latex_name(name))
            elif e > 1:
                factors.append(f"{latex_name(name)}^{{{e}}}")
        magnitude = abs(coeff)
        body = "".join(factors)
        if not factors:
            body = str(magnitude)
        elif magnitude != 1:
            body = f"{magnitude}{body}"
        pieces.append(("-" if coeff < 0 else "+", body))
    text = ("-" if pieces[0][0] == "-" else "") + pieces[0][1]
    for sign, body in pieces[1:]:
        text += f" {sign} {body}"
    return text


def text_to_latex(text: str) -> str:
    """
    Translate a relation written in ring names (w1^8*x4^2*c_1_7 = 0) to LaTeX.
    """
    text = re.sub(r"\^(\d+)", r"^{\1}", text)
    text = text.replace("(x)", r"\otimes")
    text = _TOKEN.sub(lambda m: latex_name(m.group(0)), text)
    return text.replace("*", "")


# Plain text


def summand_text(group: GroupSummand) -> str:
    parts = []
    if group.rank:
        parts.append("Z" if group.rank == 1 else f"Z^{group.rank}")
    parts += [f"Z/{order}" for order in group.torsion]
    return " + ".join(parts) or "0"


def group_text(group: GradedAbelianGroup) -> str:
    """One line per nonzero degree; F_p dimensions when the group is over a field."""
    lines = []
    for degree in group.degrees():
        summand = group[degree]
        if group.modulus is not None:
            lines.append(f"{degree}: F{group.modulus}^{summand.rank}")
        else:
            lines.append(f"{degree}: {summand_text(summand)}")
    return "\n".join(lines)


def presentation_text(presentation: RingPresentation) -> str:
    generators = ", ".join(f"{name} ({degree})" for name, degree in presentation.generators)
    lines = [f"{presentation.label}", f"  generators: {generators}"]
    for name, relation in zip(presentation.relation_names, presentation.relations):
        lines.append(f"  {name}: {relation.to_text()}")
    for extra in presentation.ideal_extra:
        lines.append(f"  extra: {extra.to_text()}")
    return "\n".join(lines)


def ring_text(ring: CohomologyRing) -> str:
    return ring.to_text()


# LaTeX


def _aligned(lines: List[str]) -> str:
    body = " \\\\\n".join(f"  {line}" for line in lines)
    return f"\\begin{{aligned}}\n{body}\n\\end{{aligned}}"


def presentation_latex(presentation: RingPresentation) -> str:
    """
    Presentation as an aligned block: the ring, then one relation per line.
    """
    generators = ", ".join(latex_name(name) for name, _ in presentation.generators)
    field_ = r"\mathbb{Z}" if presentation.modulus is None else rf"\mathbb{{F}}_{{{presentation.modulus}}}"
    lines = [rf"&{field_}[{generators}] / I"]
    for relation in presentation.relations:
        lines.append(f"&{polynomial_latex(relation)} = 0")
    for extra in presentation.ideal_extra:
        lines.append(f"&{polynomial_latex(extra)} = 0")
    return _aligned(lines)


def ring_latex(ring: CohomologyRing) -> str:
    """
    Cohomology ring as an aligned block.

    Args:
        ring: Assembled ring

    Returns:
        LaTeX source, deterministic for a fixed ring
    """
    if ring.isomorphism:
        return _aligned([f"&\\text{{{ring.isomorphism}}}"])
    lines = []
    factors = []
    if ring.heights:
        coefficient = rf"\mathbb{{F}}_{{{ring.coefficients[1:]}}}"
        names = ", ".join(latex_name(n) for n in ring.heights)
        powers = ", ".join(f"{latex_name(n)}^{{{h}}}" for n, h in ring.heights.items())
        factors.append(rf"\frac{{{coefficient}[{names}]}}{{\langle {powers} \rangle}}")
    delta = [g for g in ring.odd_generators if g.flavor is Flavor.DELTA]
    exterior = [g for g in ring.odd_generators if g.flavor is Flavor.EXTERIOR]
    if delta:
        factors.append(rf"\Delta({', '.join(latex_name(g.name) for g in delta)})")
    if exterior:
        factors.append(rf"\Lambda({', '.join(latex_name(g.name) for g in exterior)})")
    product = r" \otimes ".join(factors)
    lines.append(f"&H^* = {product}")
    for g in delta:
        lines.append(f"&{latex_name(g.name)}^{{2}} = {polynomial_latex(g.square)}")
    for prime, ideal in sorted(ring.torsion_ideals.items()):
        relations = ", ".join(text_to_latex(r) for r in ideal.relations)
        lines.append(rf"&\sigma_{{{prime}}}: \langle {relations} \rangle")
    for relation in ring.action_relations:
        lines.append(f"&{text_to_latex(relation)}")
    logger.debug(f"Rendered {ring.label} as {len(lines)} LaTeX lines")
    return _aligned(lines)
