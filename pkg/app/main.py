"""Command-line entry point: python -m app.main <subcommand> [options]."""

import argparse
import logging
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence

from pydantic import ValidationError

from app.config import get_settings
from app.models.schemas import CommandRequest, OutputFormat, SUBCOMMANDS
from app.routers import algebra, arithmetic, cohomology
from app.routers.documents import Emitted
from app.services.verify import DOMAIN_ERRORS, VerificationError

settings = get_settings()

# Configure logging
logging.basicConfig(
    level=getattr(logging, settings.log_level.upper()),
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    stream=sys.stderr,
)
logger = logging.getLogger(__name__)

Handler = Callable[[CommandRequest], Emitted]

HELP = {
    "cartan": "Cartan and transition matrices",
    "transgression": "Transgression images and the restriction along tau = 0",
    "flag": "Schubert presentation of H*(G/T)",
    "e3-base": "Presentation and groups of E3^(*,0)(PG)",
    "koszul": "Koszul homology of H*(G/T) (x) Lambda(t)",
    "charpolys": "Characteristic-polynomial sets",
    "modp": "H*(PG; F_p)",
    "integral": "H*(PG) with its torsion ideals",
    "bockstein": "Bockstein values, and the Bockstein cohomology of PE6/PE7",
    "steenrod": "Steenrod squares of the mod 2 classes of PG",
    "theta": "theta(gamma_I) for n = p^r",
    "binomial": "gcd sequence, prime-power partition and h-sequences",
    "verify": "Run the acceptance battery",
}


def command_handlers() -> Dict[str, Handler]:
    return {
        "cartan": algebra.cartan,
        "transgression": algebra.transgression_images,
        "flag": algebra.flag,
        "e3-base": algebra.e3_base_ring,
        "koszul": algebra.koszul,
        "charpolys": cohomology.charpolys,
        "modp": cohomology.modp,
        "integral": cohomology.integral,
        "bockstein": cohomology.bockstein,
        "steenrod": cohomology.steenrod,
        "theta": arithmetic.theta,
        "binomial": arithmetic.binomial,
        "verify": arithmetic.verify,
    }


def _index_set(text: str) -> List[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    """Parser with one subparser per command; every command accepts the shared flags."""
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--group", help="PSU, SU, PSp, Sp, PE6, E6, PE7 or E7")
    shared.add_argument("--n", type=int, help="Rank parameter for SU(n) and Sp(n)")
    shared.add_argument("--prime", type=int, help="Coefficient prime")
    shared.add_argument("--max-degree", type=int, dest="max_degree", help="Degree bound")
    shared.add_argument(
        "--format",
        choices=[f.value for f in OutputFormat],
        default=settings.output_format,
        help=f"Output format (default: {settings.output_format})",
    )
    shared.add_argument("--output", help="Write to this path instead of standard output")

    parser = argparse.ArgumentParser(
        prog="lie-cohomology",
        description="Cohomology of PSU(n), PSp(n), PE6 and PE7 by Schubert calculus.",
    )
    parser.add_argument("--version", action="version", version=settings.app_version)
    subparsers = parser.add_subparsers(dest="subcommand", required=True)
    for name in sorted(SUBCOMMANDS, key=list(HELP).index):
        sub = subparsers.add_parser(name, parents=[shared], help=HELP[name])
        if name == "charpolys":
            sub.add_argument(
                "--kind", choices=["mod-p", "quotient", "integral"], default="mod-p",
                help="Which set to build (default: mod-p)",
            )
        if name == "theta":
            sub.add_argument("--set", type=_index_set, dest="index_set", required=True,
                             help="Index set, e.g. 1,2,4")
        if name == "verify":
            scale = sub.add_mutually_exclusive_group()
            scale.add_argument("--quick", action="store_const", const=False, dest="full",
                               help="Desk-scale ranges (default)")
            scale.add_argument("--full", action="store_const", const=True, dest="full",
                               help="Full acceptance ranges")
            sub.add_argument("--check", action="append", dest="checks", default=[],
                             help="Run only this check; repeatable")
    return parser


def parse_request(argv: Optional[Sequence[str]] = None) -> CommandRequest:
    """
    Parse and validate a command line.

    Exits with status 2 and the usage text on invalid arguments.
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    fields = {k: v for k, v in vars(args).items() if v is not None}
    try:
        return CommandRequest(**fields)
    except ValidationError as e:
        reasons = "; ".join(error["msg"] for error in e.errors())
        parser.error(reasons)


def render(emitted: Emitted, output_format: OutputFormat) -> str:
    """Serialize an emitted document; LaTeX falls back to a verbatim block."""
    if output_format is OutputFormat.JSON:
        return emitted.document.model_dump_json(by_alias=True, indent=2)
    if output_format is OutputFormat.LATEX:
        if emitted.latex is not None:
            return emitted.latex
        return f"\\begin{{verbatim}}\n{emitted.text}\n\\end{{verbatim}}"
    return emitted.text


def run(request: CommandRequest) -> int:
    """
    Dispatch one request and write its document.

    Returns:
        0 on success, 1 on a domain error or a failed verification
    """
    handler = command_handlers()[request.subcommand]
    logger.info(f"Running {request.subcommand} for {request.group or request.n or 'battery'}")
    try:
        emitted = handler(request)
    except DOMAIN_ERRORS + (VerificationError,) as e:
        logger.error(f"{request.subcommand} failed: {e}")
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return 1

    content = render(emitted, request.format)
    if request.output:
        try:
            Path(request.output).write_text(content + "\n", encoding="utf-8")
        except OSError as e:
            print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
            return 1
        logger.info(f"Wrote {request.output}")
    else:
        sys.stdout.write(content + "\n")

    if request.subcommand == "verify" and not emitted.document.passed:
        return 1
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    return run(parse_request(argv))


if __name__ == "__main__":
    sys.exit(main())
