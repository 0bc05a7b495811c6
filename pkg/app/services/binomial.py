"""Binomial arithmetic for the integral cohomology of PSU(n).

Covers the gcd sequence b_{n,k}, the prime-power partition Q_p(n) of
{2..n}, the p-adic valuation of C(n, s), the integer sequences h_i that
express C(p^r, p^s) - p^{r-s} through lower binomials, and the recurrence
producing theta(gamma_I) for n = p^r.
"""

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb, gcd
from typing import Dict, List, Optional, Sequence, Tuple

from sympy import factorint, isprime, multiplicity
from sympy.core.intfunc import igcdex

from app.config import get_settings

settings = get_settings()
logger = logging.getLogger(__name__)

ThetaKey = Tuple[int, Tuple[int, ...]]


class BinomialError(Exception):
    """Custom exception for binomial arithmetic errors."""
    pass


@lru_cache(maxsize=None)
def b_gcd(n: int, k: int) -> int:
    """
    b_{n,k} = gcd(C(n,1), ..., C(n,k)).

    Raises:
        BinomialError: If k is outside 1..n
    """
    if n < 1 or k < 1 or k > n:
        raise BinomialError(f"b_gcd needs 1 <= k <= n, got n={n}, k={k}")
    if k == 1:
        return n
    return gcd(b_gcd(n, k - 1), comb(n, k))


@dataclass
class QPartition:
    """{2..n} split into the prime-power blocks Q_p(n) and the rest Q_0(n)."""

    n: int
    q0: List[int]
    blocks: Dict[int, List[int]] = field(default_factory=dict)

    def block_of(self, k: int) -> Optional[int]:
        """Prime p with k in Q_p(n), or None for k in Q_0(n)."""
        for p, members in self.blocks.items():
            if k in members:
                return p
        return None

    def to_dict(self) -> dict:
        return {"n": self.n, "Q0": self.q0, "Qp": {str(p): m for p, m in self.blocks.items()}}


def q_partition(n: int) -> QPartition:
    """
    Partition {2..n} by the factorization of n.

    Q_p(n) = {p, p^2, ..., p^{r_p}} where p^{r_p} exactly divides n.

    Raises:
        BinomialError: If n < 2
    """
    if n < 2:
        raise BinomialError(f"q_partition needs n >= 2, got {n}")
    blocks: Dict[int, List[int]] = {}
    for p, r in sorted(factorint(n).items()):
        blocks[int(p)] = [int(p) ** e for e in range(1, int(r) + 1)]
    used = {k for members in blocks.values() for k in members}
    q0 = [k for k in range(2, n + 1) if k not in used]
    return QPartition(n=n, q0=q0, blocks=blocks)


def a_ratio(n: int, k: int) -> int:
    """
    a_{n,k} = b_{n,k-1} / b_{n,k}, checked against the Q_p(n) prediction.

    Returns:
        p when k lies in Q_p(n), 1 when k lies in Q_0(n)

    Raises:
        BinomialError: If k is out of range or the ratio contradicts the partition
    """
    if k < 2 or k > n:
        raise BinomialError(f"a_ratio needs 2 <= k <= n, got n={n}, k={k}")
    ratio = b_gcd(n, k - 1) // b_gcd(n, k)
    predicted = q_partition(n).block_of(k) or 1
    if ratio != predicted:
        raise BinomialError(
            f"a_{{{n},{k}}} = {ratio} but the partition predicts {predicted}"
        )
    return ratio


def _split_power(n: int, p: int) -> Tuple[int, int]:
    r = int(multiplicity(p, n))
    return r, n // p**r


def ord_p_binom(n: int, s: int, p: int) -> int:
    """
    p-adic valuation of C(n, s) in the window p^t <= s < p^{t+1}, t + 1 < r.

    The valuation is at least r - t, with equality exactly when p^t is the
    full p-part of s (for p = 2 this means s = 2^t).

    Args:
        n: Integer p^r * n' with n' prime to p
        s: Lower index
        p: Prime

    Returns:
        ord_p C(n, s)

    Raises:
        BinomialError: If the window condition fails or the bound is violated
    """
    if not isprime(p):
        raise BinomialError(f"{p} is not a prime")
    if s < 1 or s > n:
        raise BinomialError(f"s={s} out of range for n={n}")
    r, _ = _split_power(n, p)
    t = len(_digits(s, p)) - 1
    if t + 1 >= r:
        raise BinomialError(
            f"Window condition t+1 < r fails for n={n}, s={s}, p={p} (t={t}, r={r})"
        )
    value = int(multiplicity(p, comb(n, s)))
    bound = r - t
    if value < bound:
        raise BinomialError(f"ord_{p} C({n},{s}) = {value} < {bound}")
    exact = int(multiplicity(p, s)) == t
    if (value == bound) != exact:
        raise BinomialError(
            f"ord_{p} C({n},{s}) = {value}; equality with {bound} should hold iff p^t || s"
        )
    return value


def _digits(value: int, p: int) -> List[int]:
    digits = []
    while value:
        digits.append(value % p)
        value //= p
    return digits


def h_sequence(p: int, r: int, s: int) -> List[int]:
    """
    Integers h_1..h_s with C(p^r, p^s) - p^{r-s} = sum_i h_i C(p^r, p^{s-i}).

    Each h_i settles the congruence modulo the gcd of the remaining
    binomials; the final division by C(p^r, 1) = p^r must be exact.

    Raises:
        BinomialError: If the range is wrong or no certificate is found
    """
    if s < 1 or s > r:
        raise BinomialError(f"h_sequence needs 1 <= s <= r, got r={r}, s={s}")
    n = p**r
    target = comb(n, p**s) - p ** (r - s)
    columns = [comb(n, p ** (s - i)) for i in range(1, s + 1)]
    solution = _greedy(target, columns)
    if solution is None:
        solution = _lattice_solve(target, columns)
    if solution is None or sum(h * c for h, c in zip(solution, columns)) != target:
        raise BinomialError(f"No h-sequence for p={p}, r={r}, s={s}")
    return solution


def _greedy(target: int, columns: Sequence[int]) -> Optional[List[int]]:
    # h_i solves the congruence modulo the gcd of the remaining columns
    solution = [0] * len(columns)
    remainder = target
    for i, column in enumerate(columns):
        tail = 0
        for later in columns[i + 1:]:
            tail = gcd(tail, later)
        if tail == 0:
            if remainder % column:
                return None
            solution[i] = remainder // column
            remainder = 0
            break
        d = gcd(column, tail)
        if remainder % d:
            return None
        modulus = tail // d
        h = (remainder // d) * pow(column // d, -1, modulus) % modulus if modulus > 1 else 0
        solution[i] = h
        remainder -= h * column
    return solution if remainder == 0 else None


def _lattice_solve(target: int, columns: Sequence[int]) -> Optional[List[int]]:
    g, coeffs = 0, []
    for column in columns:
        x, y, g_new = (int(v) for v in igcdex(g, column))
        coeffs = [c * x for c in coeffs] + [y]
        g = g_new
    if g == 0 or target % g:
        return None
    factor = target // g
    return [c * factor for c in coeffs]


def t_coefficient(n: int, k: int, p: int) -> int:
    """
    Least positive t with t * C(n, p^r) = C(n, k) mod p, where p^r || n.

    Raises:
        BinomialError: If p does not divide n
    """
    r, _ = _split_power(n, p)
    if r == 0:
        raise BinomialError(f"{p} does not divide {n}")
    anchor = comb(n, p**r) % p
    value = comb(n, k) % p
    t = (value * pow(anchor, -1, p)) % p
    return t or p


# theta(gamma_I) for n = p^r


@dataclass(frozen=True)
class ThetaExpression:
    """
    Integer combination of omega^a * rho_I with rho's exterior.

    Keys are (omega power, sorted odd degrees of the rho factors).
    """

    n: int
    terms: Tuple[Tuple[ThetaKey, int], ...]

    @classmethod
    def build(cls, n: int, terms: Dict[ThetaKey, int]) -> "ThetaExpression":
        clean = tuple(sorted((k, v) for k, v in terms.items() if v))
        return cls(n=n, terms=clean)

    def as_dict(self) -> Dict[ThetaKey, int]:
        return dict(self.terms)

    def scaled(self, numerator: int, denominator: int = 1) -> "ThetaExpression":
        out = {}
        for key, coeff in self.terms:
            value = coeff * numerator
            if value % denominator:
                raise BinomialError(
                    f"Coefficient {value} of {self.to_text()} is not divisible by {denominator}"
                )
            out[key] = value // denominator
        return ThetaExpression.build(self.n, out)

    def times_rho(self, degree: int) -> "ThetaExpression":
        out: Dict[ThetaKey, int] = {}
        for (a, rhos), coeff in self.terms:
            if degree in rhos:
                continue
            position = sum(1 for d in rhos if d > degree)
            sign = -1 if position % 2 else 1
            key = (a, tuple(sorted(rhos + (degree,))))
            out[key] = out.get(key, 0) + sign * coeff
        return ThetaExpression.build(self.n, out)

    def times_omega(self, power: int) -> "ThetaExpression":
        return ThetaExpression.build(
            self.n, {(a + power, rhos): c for (a, rhos), c in self.terms}
        )

    def __add__(self, other: "ThetaExpression") -> "ThetaExpression":
        out = self.as_dict()
        for key, coeff in other.terms:
            out[key] = out.get(key, 0) + coeff
        return ThetaExpression.build(self.n, out)

    def divisible_by(self, p: int) -> bool:
        return all(coeff % p == 0 for _, coeff in self.terms)

    def normalized(self) -> "ThetaExpression":
        """Reduce the coefficient of omega^a (a >= 1) modulo its order b_{n,a}."""
        out = {}
        for (a, rhos), coeff in self.terms:
            if a >= 1:
                order = b_gcd(self.n, a) if a <= self.n else 1
                coeff %= order
            out[(a, rhos)] = coeff
        return ThetaExpression.build(self.n, out)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for (a, rhos), coeff in sorted(self.terms, key=lambda t: (t[0][0], t[0][1])):
            factors = []
            if a == 1:
                factors.append("ω")
            elif a > 1:
                factors.append(f"ω^{a}")
            factors += [f"ρ{d}" for d in rhos]
            magnitude = abs(coeff)
            if magnitude != 1 or not factors:
                factors.insert(0, str(magnitude))
            pieces.append(("-" if coeff < 0 else "+", "·".join(factors)))
        text = ("-" if pieces[0][0] == "-" else "") + pieces[0][1]
        for sign, body in pieces[1:]:
            text += f" {sign} {body}"
        return text

    def to_list(self) -> List[dict]:
        return [
            {"coefficient": coeff, "omega_power": a, "rho_indices": list(rhos)}
            for (a, rhos), coeff in self.terms
        ]

    def __str__(self) -> str:
        return self.to_text()


def prime_power(n: int) -> Tuple[int, int]:
    """
    Write n = p^r.

    Raises:
        BinomialError: If n is not a prime power
    """
    factors = factorint(n)
    if n < 2 or len(factors) != 1:
        raise BinomialError(f"{n} is not a prime power")
    (p, r), = factors.items()
    return int(p), int(r)


def _exponents(n: int, index_set: Sequence[int]) -> Tuple[int, int, Tuple[int, ...]]:
    p, r = prime_power(n)
    exponents = []
    for element in index_set:
        e = 0
        value = element
        while value > 1 and value % p == 0:
            value //= p
            e += 1
        if value != 1 or e > r:
            raise BinomialError(
                f"{element} is not one of 1, {p}, ..., {p}^{r} for n={n}"
            )
        exponents.append(e)
    if list(exponents) != sorted(set(exponents)):
        raise BinomialError(f"Index set {list(index_set)} must be strictly increasing")
    return p, r, tuple(exponents)


def theta_gamma(n: int, index_set: Sequence[int]) -> ThetaExpression:
    """
    theta(gamma_I) for n = p^r and I a sorted subset of {1, p, ..., p^r}.

    Singletons give p^{r-s} omega^{p^s - 1}; longer sets follow
    theta(I) = theta(I^e) rho_{2p^{i_k}-1} / p + theta(I^d) omega^{p^{i_k}-p^{i_k-1}} / p,
    where I^e drops the last element and I^d lowers it by one power of p
    (zero when it collides with its predecessor).

    Args:
        n: Prime power p^r
        index_set: Strictly increasing elements p^{i_1} < ... < p^{i_k}

    Returns:
        Normalized ThetaExpression

    Raises:
        BinomialError: For empty or malformed index sets, or an inexact division
    """
    if not index_set:
        raise BinomialError("theta of the empty index set is the covering order q")
    p, r, exponents = _exponents(n, index_set)
    raw = _theta_raw(p, r, exponents)
    result = raw.normalized()
    logger.debug(f"theta(gamma_{list(index_set)}) for n={n}: {result}")
    return result


def theta_raw(n: int, index_set: Sequence[int]) -> ThetaExpression:
    """The recurrence value before omega-torsion normalization."""
    if not index_set:
        raise BinomialError("theta of the empty index set is the covering order q")
    p, r, exponents = _exponents(n, index_set)
    return _theta_raw(p, r, exponents)


@lru_cache(maxsize=None)
def _theta_raw(p: int, r: int, exponents: Tuple[int, ...]) -> ThetaExpression:
    n = p**r
    if len(exponents) == 1:
        s = exponents[0]
        return ThetaExpression.build(n, {(p**s - 1, ()): p ** (r - s)})

    last = exponents[-1]
    head = exponents[:-1]
    result = _theta_raw(p, r, head).times_rho(2 * p**last - 1).scaled(1, p)
    lowered = last - 1
    if lowered != head[-1]:
        shifted = _theta_raw(p, r, head + (lowered,))
        result = result + shifted.times_omega(p**last - p**lowered).scaled(1, p)
    return result


def admissible_sets(n: int, include_one: bool = True) -> List[Tuple[int, ...]]:
    """All nonempty sorted subsets of {1} + Q_p(n) for n = p^r."""
    p, r = prime_power(n)
    elements = ([1] if include_one else []) + [p**e for e in range(1, r + 1)]
    subsets = []
    for mask in range(1, 1 << len(elements)):
        subsets.append(tuple(e for i, e in enumerate(elements) if mask >> i & 1))
    return subsets
