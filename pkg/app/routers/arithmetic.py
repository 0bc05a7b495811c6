"""Handlers for theta and binomial, and for verify."""

import logging

from app.config import get_settings
from app.models.schemas import BinomialDoc, CheckDoc, CommandRequest, ThetaDoc, ThetaTermDoc, VerificationReport
from app.routers.documents import Emitted
from app.services.binomial import BinomialError, a_ratio, b_gcd, h_sequence, prime_power, q_partition, theta_gamma
from app.services.verify import Scale, run_battery

settings = get_settings()
logger = logging.getLogger(__name__)


def theta(request: CommandRequest) -> Emitted:
    """theta(gamma_I) for n = p^r, e.g. --n 8 --set 1,2,4 gives 2·ρ3·ρ7."""
    index_set = sorted(request.index_set)
    value = theta_gamma(request.n, index_set)
    p, _ = prime_power(request.n)
    document = ThetaDoc(
        command="theta",
        n=request.n,
        index_set=index_set,
        text=value.to_text(),
        terms=[ThetaTermDoc(**term) for term in value.to_list()],
        divisible=value.divisible_by(p),
    )
    return Emitted(document, value.to_text())


def binomial(request: CommandRequest) -> Emitted:
    """b_{n,k}, the partition Q_p(n), the ratios a_{n,k} and, for n = p^r, the h-sequences."""
    n = request.n
    b = [b_gcd(n, k) for k in range(1, n + 1)]
    ratios = {k: a_ratio(n, k) for k in range(2, n + 1)}
    partition = q_partition(n)
    sequences = {}
    try:
        p, r = prime_power(n)
    except BinomialError:
        p, r = None, 0
    if p is not None:
        for s in range(1, r + 1):
            sequences[f"{p},{r},{s}"] = h_sequence(p, r, s)
    document = BinomialDoc(
        command="binomial",
        n=n,
        b=b,
        ratios=ratios,
        partition=partition.to_dict(),
        h_sequences=sequences,
    )
    lines = [f"b_{n},k: {b}", f"a_{n},k: {ratios}", f"partition: {partition.to_dict()}"]
    lines += [f"h({key}) = {value}" for key, value in sequences.items()]
    return Emitted(document, "\n".join(lines))


def verify(request: CommandRequest) -> Emitted:
    """Acceptance battery; the caller exits 0 iff `passed`."""
    result = run_battery(Scale.FULL if request.full else Scale.QUICK, request.checks or None)
    document = VerificationReport(
        command="verify",
        scale=result.scale.value,
        passed=result.passed,
        seconds=round(result.seconds, 3),
        checks=[
            CheckDoc(
                name=c.name,
                anchor=c.anchor,
                passed=c.passed,
                seconds=round(c.seconds, 3),
                detail=c.detail,
            )
            for c in result.checks
        ],
    )
    lines = [
        f"[{'PASS' if c.passed else 'FAIL'}] {c.name} ({c.anchor}) {c.seconds:.2f}s {c.detail}".rstrip()
        for c in result.checks
    ]
    lines.append(f"{'OK' if result.passed else 'FAILED'} in {result.seconds:.1f}s")
    return Emitted(document, "\n".join(lines))
