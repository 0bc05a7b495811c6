"""Degreewise exact linear algebra: Smith normal form and graded quotients.

A graded quotient R/I is built one degree at a time. I_d is spanned by the
relations of degree d together with v * I_{d - deg v} for every variable v.
Rows with a unit entry become fully reduced pivots; the remaining integer
rows go through a small Smith normal form that yields torsion and rank.
"""

import logging
from dataclasses import dataclass, field
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

from sympy import ZZ
from sympy.core.intfunc import igcdex
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import smith_normal_decomp

from app.config import get_settings
from app.services.polynomials import GradedRing, Polynomial, PolynomialError, graded_ring

settings = get_settings()
logger = logging.getLogger(__name__)

IntMatrix = List[List[int]]
SparseRow = Dict[int, int]


class LinearAlgebraError(Exception):
    """Custom exception for linear algebra errors."""
    pass


class DimensionLimitError(LinearAlgebraError):
    """Raised when a single degree exceeds the configured dimension budget."""
    pass


# Abelian groups


@dataclass(frozen=True)
class GroupSummand:
    """Finitely generated abelian group Z^rank + sum of Z/d (d_1 | d_2 | ...)."""

    rank: int = 0
    torsion: Tuple[int, ...] = ()

    @property
    def is_zero(self) -> bool:
        return self.rank == 0 and not self.torsion

    @property
    def order(self) -> Optional[int]:
        if self.rank:
            return None
        result = 1
        for d in self.torsion:
            result *= d
        return result

    def to_list(self) -> list:
        return [self.rank, list(self.torsion)]


@dataclass
class GradedAbelianGroup:
    """Per-degree abelian groups; over a prime field `rank` is the dimension."""

    groups: Dict[int, GroupSummand] = field(default_factory=dict)
    modulus: Optional[int] = None

    def __getitem__(self, degree: int) -> GroupSummand:
        return self.groups.get(degree, GroupSummand())

    def degrees(self) -> List[int]:
        return sorted(d for d, g in self.groups.items() if not g.is_zero)

    def total_rank(self) -> int:
        return sum(g.rank for g in self.groups.values())

    def has_torsion(self) -> bool:
        return any(g.torsion for g in self.groups.values())

    def total_dimension(self) -> int:
        """Dimension over F_p (rank plus number of cyclic torsion factors)."""
        return sum(g.rank + len(g.torsion) for g in self.groups.values())

    def to_dict(self) -> Dict[int, list]:
        return {d: self.groups[d].to_list() for d in self.degrees()}


# Smith normal form


@dataclass
class SNFResult:
    """Diagonal form left * m * right = diag with unimodular transforms."""

    diagonal: List[int]
    left: IntMatrix
    right: IntMatrix

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d)


def identity_matrix(n: int) -> IntMatrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def matmul(a: IntMatrix, b: IntMatrix, inner: Optional[int] = None) -> IntMatrix:
    if not a:
        return []
    inner = len(b) if inner is None else inner
    cols = len(b[0]) if b else 0
    result = []
    for row in a:
        out = [0] * cols
        for k, value in enumerate(row):
            if value:
                brow = b[k]
                for j in range(cols):
                    if brow[j]:
                        out[j] += value * brow[j]
        result.append(out)
    return result


def _swap(diagonal, left, right, i, j):
    diagonal[i], diagonal[j] = diagonal[j], diagonal[i]
    left[i], left[j] = left[j], left[i]
    for row in right:
        row[i], row[j] = row[j], row[i]


def _merge(diagonal, left, right, i, j):
    a, b = diagonal[i], diagonal[j]
    x, y, g = igcdex(a, b)
    x, y, g = int(x), int(y), int(g)
    ag, bg = a // g, b // g
    row_i, row_j = left[i], left[j]
    left[i] = [x * u + y * v for u, v in zip(row_i, row_j)]
    left[j] = [-bg * u + ag * v for u, v in zip(row_i, row_j)]
    for row in right:
        ci, cj = row[i], row[j]
        row[i] = ci + cj
        row[j] = -y * bg * ci + x * ag * cj
    diagonal[i], diagonal[j] = g, ag * b


def _normalize_chain(diagonal: List[int], left: IntMatrix, right: IntMatrix):
    for i, d in enumerate(diagonal):
        if d < 0:
            diagonal[i] = -d
            left[i] = [-v for v in left[i]]
    changed = True
    while changed:
        changed = False
        for i in range(len(diagonal)):
            for j in range(i + 1, len(diagonal)):
                a, b = diagonal[i], diagonal[j]
                if a == 0 and b != 0:
                    _swap(diagonal, left, right, i, j)
                    changed = True
                elif a != 0 and b % a != 0:
                    _merge(diagonal, left, right, i, j)
                    changed = True


def smith_normal_form(matrix: IntMatrix, cols: Optional[int] = None) -> SNFResult:
    """
    Smith normal form with unimodular transforms.

    Args:
        matrix: Integer matrix as a list of rows
        cols: Column count, required when the matrix has no rows

    Returns:
        SNFResult whose diagonal forms a divisibility chain (zeros last)

    Raises:
        LinearAlgebraError: If the decomposition fails its self-check
    """
    rows = len(matrix)
    cols = len(matrix[0]) if rows else (cols or 0)
    if rows == 0 or cols == 0:
        return SNFResult([], identity_matrix(rows), identity_matrix(cols))

    dm = DomainMatrix([[ZZ(int(v)) for v in row] for row in matrix], (rows, cols), ZZ)
    try:
        smf, s, t = smith_normal_decomp(dm)
    except Exception as e:
        raise LinearAlgebraError(f"Smith normal form failed: {e}")

    dense = smf.to_list()
    diagonal = [int(dense[i][i]) for i in range(min(rows, cols))]
    left = [[int(v) for v in row] for row in s.to_list()]
    right = [[int(v) for v in row] for row in t.to_list()]
    _normalize_chain(diagonal, left, right)

    if settings.verify_transforms:
        product = matmul(matmul(left, matrix), right)
        for i in range(rows):
            for j in range(cols):
                expected = diagonal[i] if i == j else 0
                if product[i][j] != expected:
                    raise LinearAlgebraError(
                        f"Smith normal form check failed at ({i}, {j}): "
                        f"{product[i][j]} != {expected}"
                    )
    return SNFResult(diagonal, left, right)


def inverse_unimodular(matrix: IntMatrix) -> IntMatrix:
    """Exact inverse of a unimodular integer matrix."""
    n = len(matrix)
    if n == 0:
        return []
    dm = DomainMatrix([[ZZ(int(v)) for v in row] for row in matrix], (n, n), ZZ)
    try:
        inverse, den = dm.inv_den()
    except Exception as e:
        raise LinearAlgebraError(f"Matrix is not invertible: {e}")
    den = int(den)
    if abs(den) != 1:
        inverse_rows = inverse.to_list()
        if any(int(v) % den for row in inverse_rows for v in row):
            raise LinearAlgebraError("Matrix is not unimodular")
        return [[int(v) // den for v in row] for row in inverse_rows]
    return [[int(v) * den for v in row] for row in inverse.to_list()]


# Integer echelon


def integer_echelon(rows: Sequence[SparseRow]) -> List[SparseRow]:
    """
    Reduce integer rows to echelon form by unimodular row operations.

    Args:
        rows: Sparse integer rows

    Returns:
        Nonzero echelon rows spanning the same lattice
    """
    pivots: Dict[int, SparseRow] = {}
    for original in rows:
        row = {c: v for c, v in original.items() if v}
        while row:
            col = min(row)
            if col not in pivots:
                if row[col] < 0:
                    row = {c: -v for c, v in row.items()}
                pivots[col] = row
                break
            base = pivots[col]
            a, b = base[col], row[col]
            if b % a == 0:
                row = _axpy(row, base, -(b // a))
            else:
                x, y, g = (int(t) for t in igcdex(a, b))
                merged = _combine(base, x, row, y)
                row = _combine(row, a // g, base, -(b // g))
                pivots[col] = merged
            row.pop(col, None)
    return [pivots[c] for c in sorted(pivots)]


def lattice_contains(echelon: Sequence[SparseRow], target: SparseRow) -> bool:
    """
    Membership of an integer vector in the lattice spanned by echelon rows.

    Args:
        echelon: Output of `integer_echelon`
        target: Sparse integer vector

    Returns:
        True if target is an integer combination of the rows
    """
    pivots = {min(row): row for row in echelon}
    row = {c: v for c, v in target.items() if v}
    while row:
        col = min(row)
        base = pivots.get(col)
        if base is None or row[col] % base[col]:
            return False
        row = _axpy(row, base, -(row[col] // base[col]))
    return True


def _axpy(row: SparseRow, other: SparseRow, factor: int) -> SparseRow:
    result = dict(row)
    for c, v in other.items():
        value = result.get(c, 0) + factor * v
        if value:
            result[c] = value
        else:
            result.pop(c, None)
    return result


def _combine(a: SparseRow, fa: int, b: SparseRow, fb: int) -> SparseRow:
    result: SparseRow = {}
    for c in set(a) | set(b):
        value = fa * a.get(c, 0) + fb * b.get(c, 0)
        if value:
            result[c] = value
    return result


# Field eliminators


class FieldEliminator:
    """
    Incremental echelon form over F_p with optional combination tracking.

    Vectors are sparse dicts; the leading entry is the smallest index.
    """

    def __init__(self, p: int, track: bool = False):
        self.p = p
        self.track = track
        self.rows: Dict[int, Tuple[SparseRow, SparseRow]] = {}

    def __len__(self) -> int:
        return len(self.rows)

    def _normalize(self, vector: SparseRow) -> SparseRow:
        return {c: v % self.p for c, v in vector.items() if v % self.p}

    def reduce(self, vector: SparseRow, tag: Optional[int] = None) -> Tuple[SparseRow, SparseRow]:
        """
        Reduce a vector against the stored rows.

        Returns:
            (remainder, combination) where vector = remainder + combination . rows
        """
        p = self.p
        row = self._normalize(vector)
        combo: SparseRow = {tag: 1} if (self.track and tag is not None) else {}
        used: SparseRow = {}
        while row:
            pivot_cols = [c for c in row if c in self.rows]
            if not pivot_cols:
                break
            col = min(pivot_cols)
            base, base_combo = self.rows[col]
            factor = row[col]
            for c, v in base.items():
                value = (row.get(c, 0) - factor * v) % p
                if value:
                    row[c] = value
                else:
                    row.pop(c, None)
            if self.track:
                for t, v in base_combo.items():
                    value = (combo.get(t, 0) - factor * v) % p
                    if value:
                        combo[t] = value
                    else:
                        combo.pop(t, None)
                used[col] = (used.get(col, 0) + factor) % p
        if self.track and tag is None:
            # express the reduced part as a combination of stored tags
            expressed: SparseRow = {}
            for col, factor in used.items():
                for t, v in self.rows[col][1].items():
                    value = (expressed.get(t, 0) + factor * v) % p
                    if value:
                        expressed[t] = value
                    else:
                        expressed.pop(t, None)
            return row, expressed
        return row, combo

    def add(self, vector: SparseRow, tag: Optional[int] = None) -> bool:
        """
        Insert a vector; returns True if it was independent.
        """
        row, combo = self.reduce(vector, tag)
        if not row:
            return False
        col = min(row)
        inv = pow(row[col], -1, self.p)
        row = {c: (v * inv) % self.p for c, v in row.items()}
        combo = {t: (v * inv) % self.p for t, v in combo.items()}
        self.rows[col] = (row, combo)
        return True

    def contains(self, vector: SparseRow) -> bool:
        row, _ = self.reduce(vector)
        return not row


class BitsetEliminator:
    """
    Echelon form over F_2 with vectors packed into Python integers.

    The leading entry of a vector is its highest set bit.
    """

    def __init__(self, track: bool = False):
        self.track = track
        self.rows: Dict[int, Tuple[int, int]] = {}

    def __len__(self) -> int:
        return len(self.rows)

    def reduce(self, vector: int, tag_mask: int = 0) -> Tuple[int, int]:
        combo = tag_mask
        while vector:
            top = vector.bit_length() - 1
            entry = self.rows.get(top)
            if entry is None:
                break
            vector ^= entry[0]
            if self.track:
                combo ^= entry[1]
        return vector, combo

    def add(self, vector: int, tag: Optional[int] = None) -> bool:
        mask = (1 << tag) if (self.track and tag is not None) else 0
        vector, combo = self.reduce(vector, mask)
        if not vector:
            return False
        self.rows[vector.bit_length() - 1] = (vector, combo)
        return True

    def contains(self, vector: int) -> bool:
        return self.reduce(vector)[0] == 0


def solve_leftmost(
    columns: Sequence[SparseRow],
    target: SparseRow,
    p: int
) -> Optional[List[int]]:
    """
    Solve sum x_j columns[j] = target over F_p using leftmost pivot columns.

    Args:
        columns: Sparse column vectors in priority order
        target: Right-hand side
        p: Prime modulus

    Returns:
        Coefficients in [0, p) (zero on non-pivot columns), or None if the
        system is inconsistent
    """
    eliminator = FieldEliminator(p, track=True)
    for j, column in enumerate(columns):
        eliminator.add(column, tag=j)
    remainder, combo = eliminator.reduce(target)
    if remainder:
        return None
    solution = [0] * len(columns)
    for j, value in combo.items():
        solution[j] = value % p
    return solution


def field_rank(matrix: IntMatrix, p: Optional[int]) -> int:
    """Rank over F_p, or over Q when p is None."""
    eliminator_rows = [{j: v for j, v in enumerate(row) if v} for row in matrix]
    if p is not None:
        eliminator = FieldEliminator(p)
        return sum(1 for row in eliminator_rows if eliminator.add(row))
    return len(integer_echelon(eliminator_rows))


# Graded quotients


class _Piece:
    """One degree of a graded quotient."""

    def __init__(self, monomials: List[Tuple[int, ...]]):
        self.monomials = monomials
        self.index = {m: i for i, m in enumerate(monomials)}
        self.pivots: Dict[int, SparseRow] = {}
        self.users: Dict[int, set] = {}
        self.residual: List[SparseRow] = []
        self.free_cols: List[int] = []
        self.diagonal: List[int] = []
        self.right: IntMatrix = []
        self.right_inverse: IntMatrix = []

    @property
    def basis_rows(self) -> List[SparseRow]:
        return list(self.pivots.values()) + self.residual


class GradedQuotient:
    """
    Degreewise presentation of R / <relations, extra> over Z or F_p.

    Degrees are built lazily and cached; all computations are exact.
    """

    def __init__(
        self,
        ring: GradedRing,
        relations: Sequence[Polynomial],
        ideal_extra: Sequence[Polynomial] = (),
        max_degree: int = 0,
        label: str = ""
    ):
        self.ring = ring
        self.modulus = ring.modulus
        self.max_degree = max_degree
        self.label = label or repr(ring)
        self._generators: Dict[int, List[Polynomial]] = {}
        for poly in list(relations) + list(ideal_extra):
            try:
                poly = ring.convert(poly)
                degree = poly.degree()
            except PolynomialError as e:
                raise LinearAlgebraError(f"Invalid relation for {self.label}: {e}")
            if degree is None:
                continue
            self._generators.setdefault(degree, []).append(poly)
        self._pieces: Dict[int, _Piece] = {}
        self._shift: Dict[Tuple[int, int], List[int]] = {}

    # Construction

    def piece(self, degree: int) -> _Piece:
        if degree in self._pieces:
            return self._pieces[degree]
        if degree > self.max_degree:
            raise LinearAlgebraError(
                f"Degree {degree} beyond the bound {self.max_degree} for {self.label}"
            )
        for d in range(0, degree + 1):
            if d not in self._pieces:
                self._pieces[d] = self._build(d)
        return self._pieces[degree]

    def _build(self, degree: int) -> _Piece:
        monomials = self.ring.monomials(degree)
        if len(monomials) > settings.max_dimension:
            raise DimensionLimitError(
                f"Degree {degree} of {self.label} has {len(monomials)} monomials "
                f"(limit {settings.max_dimension})"
            )
        piece = _Piece(monomials)
        if not monomials:
            return piece

        generators: List[SparseRow] = []
        for poly in self._generators.get(degree, []):
            generators.append({piece.index[m]: c for m, c in poly.terms.items()})
        for var, var_degree in enumerate(self.ring.degrees):
            lower = degree - var_degree
            if lower < 0 or lower not in self._pieces:
                continue
            source = self._pieces[lower]
            if not source.monomials:
                continue
            shift = self._shift_map(lower, var, source, piece)
            for row in source.basis_rows:
                generators.append({shift[c]: v for c, v in row.items()})

        self._insert_all(piece, generators)
        self._finish(piece)
        logger.debug(
            f"{self.label}: degree {degree} has {len(monomials)} monomials, "
            f"{len(piece.pivots)} unit pivots, {len(piece.residual)} residual rows"
        )
        return piece

    def _shift_map(self, lower: int, var: int, source: _Piece, target: _Piece) -> List[int]:
        key = (lower, var)
        if key not in self._shift:
            mapping = []
            for m in source.monomials:
                shifted = list(m)
                shifted[var] += 1
                mapping.append(target.index[tuple(shifted)])
            self._shift[key] = mapping
        return self._shift[key]

    def _reduce(self, piece: _Piece, row: SparseRow) -> SparseRow:
        result = dict(row)
        for col in [c for c in row if c in piece.pivots]:
            factor = result.get(col, 0)
            if factor:
                result = _axpy(result, piece.pivots[col], -factor)
        if self.modulus is not None:
            result = {c: v % self.modulus for c, v in result.items() if v % self.modulus}
        return result

    def _unit_column(self, row: SparseRow) -> Optional[int]:
        if self.modulus is not None:
            return min(row) if row else None
        units = [c for c, v in row.items() if v in (1, -1)]
        return min(units) if units else None

    def _add_pivot(self, piece: _Piece, row: SparseRow, col: int):
        value = row[col]
        if self.modulus is not None:
            inv = pow(value, -1, self.modulus)
            row = {c: (v * inv) % self.modulus for c, v in row.items()}
        elif value == -1:
            row = {c: -v for c, v in row.items()}
        for other_col in list(piece.users.get(col, ())):
            other = piece.pivots[other_col]
            factor = other.get(col, 0)
            if not factor:
                continue
            updated = _axpy(other, row, -factor)
            if self.modulus is not None:
                updated = {c: v % self.modulus for c, v in updated.items() if v % self.modulus}
            for c in other:
                if c != other_col:
                    piece.users.get(c, set()).discard(other_col)
            piece.pivots[other_col] = updated
            for c in updated:
                if c != other_col:
                    piece.users.setdefault(c, set()).add(other_col)
        piece.pivots[col] = row
        for c in row:
            if c != col:
                piece.users.setdefault(c, set()).add(col)

    def _insert_all(self, piece: _Piece, generators: List[SparseRow]):
        size = len(piece.monomials)
        pending: List[SparseRow] = []
        for row in generators:
            if len(piece.pivots) == size:
                break
            reduced = self._reduce(piece, row)
            if not reduced:
                continue
            col = self._unit_column(reduced)
            if col is None:
                pending.append(reduced)
            else:
                self._add_pivot(piece, reduced, col)

        while pending:
            promoted = True
            while promoted:
                promoted = False
                remaining = []
                for row in pending:
                    reduced = self._reduce(piece, row)
                    if not reduced:
                        continue
                    col = self._unit_column(reduced)
                    if col is None:
                        remaining.append(reduced)
                    else:
                        self._add_pivot(piece, reduced, col)
                        promoted = True
                pending = remaining
            echelon = integer_echelon(pending)
            if any(self._unit_column(row) is not None for row in echelon):
                pending = echelon
                continue
            piece.residual = echelon
            break

    def _finish(self, piece: _Piece):
        piece.free_cols = [c for c in range(len(piece.monomials)) if c not in piece.pivots]
        if self.modulus is not None or not piece.residual:
            piece.diagonal = []
            n = len(piece.free_cols)
            piece.right = identity_matrix(n)
            piece.right_inverse = identity_matrix(n)
            return
        position = {c: i for i, c in enumerate(piece.free_cols)}
        matrix = []
        for row in piece.residual:
            dense = [0] * len(piece.free_cols)
            for c, v in row.items():
                dense[position[c]] = v
            matrix.append(dense)
        snf = smith_normal_form(matrix, cols=len(piece.free_cols))
        piece.diagonal = [d for d in snf.diagonal if d]
        piece.right = snf.right
        piece.right_inverse = inverse_unimodular(snf.right)

    # Queries

    def _vector(self, poly: Polynomial, degree: int) -> SparseRow:
        piece = self.piece(degree)
        row = {}
        for m, c in poly.terms.items():
            if m not in piece.index:
                raise LinearAlgebraError(f"Term of {poly} is not of degree {degree}")
            row[piece.index[m]] = c
        return row

    def _degree_of(self, poly: Polynomial) -> Optional[int]:
        try:
            return poly.degree()
        except PolynomialError as e:
            raise LinearAlgebraError(str(e))

    def raw_coordinates(self, poly: Polynomial, degree: Optional[int] = None) -> List[int]:
        """
        Coordinates of a class in the diagonalized basis of its degree.

        Torsion coordinates are reduced into [0, d); over F_p every
        coordinate is a free coordinate modulo p.
        """
        poly = self.ring.convert(poly)
        if degree is None:
            degree = self._degree_of(poly)
            if degree is None:
                return []
        piece = self.piece(degree)
        remainder = self._reduce(piece, self._vector(poly, degree))
        w = [remainder.get(c, 0) for c in piece.free_cols]
        if self.modulus is not None:
            return [v % self.modulus for v in w]
        y = [0] * len(w)
        for i, value in enumerate(w):
            if value:
                row = piece.right[i]
                for j, r in enumerate(row):
                    if r:
                        y[j] += value * r
        for i, d in enumerate(piece.diagonal):
            y[i] %= d
        return y

    def group(self, degree: int) -> GroupSummand:
        piece = self.piece(degree)
        if self.modulus is not None:
            return GroupSummand(rank=len(piece.free_cols))
        torsion = tuple(d for d in piece.diagonal if d > 1)
        return GroupSummand(rank=len(piece.free_cols) - len(piece.diagonal), torsion=torsion)

    def graded_group(self, max_degree: Optional[int] = None) -> GradedAbelianGroup:
        top = self.max_degree if max_degree is None else max_degree
        groups = {}
        for d in range(top + 1):
            g = self.group(d)
            if not g.is_zero:
                groups[d] = g
        return GradedAbelianGroup(groups=groups, modulus=self.modulus)

    def normal_form(self, poly: Polynomial) -> Polynomial:
        """Canonical representative of the class of a homogeneous polynomial."""
        poly = self.ring.convert(poly)
        degree = self._degree_of(poly)
        if degree is None:
            return poly
        piece = self.piece(degree)
        y = self.raw_coordinates(poly, degree)
        if self.modulus is None:
            w = [0] * len(y)
            for i, value in enumerate(y):
                if value:
                    row = piece.right_inverse[i]
                    for j, r in enumerate(row):
                        if r:
                            w[j] += value * r
        else:
            w = y
        return self.ring.from_terms(
            {piece.monomials[c]: v for c, v in zip(piece.free_cols, w) if v}
        )

    def is_zero(self, poly: Polynomial) -> bool:
        return not any(self.raw_coordinates(poly))

    def equal(self, a: Polynomial, b: Polynomial) -> bool:
        return self.is_zero(self.ring.convert(a) - self.ring.convert(b))

    def order(self, poly: Polynomial) -> int:
        """
        Additive order of a class; 0 stands for infinite order.
        """
        poly = self.ring.convert(poly)
        degree = self._degree_of(poly)
        if degree is None:
            return 1
        y = self.raw_coordinates(poly, degree)
        if self.modulus is not None:
            return self.modulus if any(y) else 1
        piece = self.piece(degree)
        result = 1
        for i, value in enumerate(y):
            if not value:
                continue
            if i >= len(piece.diagonal):
                return 0
            d = piece.diagonal[i]
            part = d // gcd(d, value)
            result = result * part // gcd(result, part)
        return result

    def is_zero_p_local(self, poly: Polynomial, p: int) -> bool:
        """True if the class vanishes after localizing at p."""
        order = self.order(poly)
        return order != 0 and order % p != 0

    def standard_monomials(self, degree: int) -> List[Tuple[int, ...]]:
        piece = self.piece(degree)
        return [piece.monomials[c] for c in piece.free_cols]

    def free_basis(self, degree: int) -> List[Polynomial]:
        """
        Polynomials whose classes form a basis of the free part.

        Over F_p these are the standard monomials.
        """
        piece = self.piece(degree)
        if self.modulus is not None:
            return [self.ring.monomial(m) for m in self.standard_monomials(degree)]
        basis = []
        for i in range(len(piece.diagonal), len(piece.free_cols)):
            row = piece.right_inverse[i]
            basis.append(self.ring.from_terms(
                {piece.monomials[c]: v for c, v in zip(piece.free_cols, row) if v}
            ))
        return basis

    def coordinates(self, poly: Polynomial, degree: Optional[int] = None) -> List[int]:
        """
        Coordinates with respect to `free_basis`.

        Raises:
            LinearAlgebraError: If the degree carries torsion over Z
        """
        if degree is None:
            degree = self._degree_of(self.ring.convert(poly))
            if degree is None:
                return []
        piece = self.piece(degree)
        if self.modulus is None and any(d > 1 for d in piece.diagonal):
            raise LinearAlgebraError(
                f"Degree {degree} of {self.label} has torsion; coordinates are not free"
            )
        y = self.raw_coordinates(poly, degree)
        if self.modulus is not None:
            return y
        return y[len(piece.diagonal):]


def graded_quotient(
    generators: Sequence[Tuple[str, int]],
    relations: Sequence[Polynomial],
    ideal_extra: Sequence[Polynomial] = (),
    max_degree: int = 0,
    modulus: Optional[int] = None
) -> GradedAbelianGroup:
    """
    Additive structure of a graded quotient ring, degree by degree.

    Args:
        generators: (name, cohomological degree) pairs
        relations: Homogeneous relation polynomials
        ideal_extra: Further homogeneous ideal generators
        max_degree: Highest degree computed
        modulus: None for Z, or a prime

    Returns:
        GradedAbelianGroup with the cokernel in every degree up to max_degree

    Raises:
        LinearAlgebraError: If a relation is inhomogeneous
    """
    names = tuple(name for name, _ in generators)
    degrees = tuple(degree for _, degree in generators)
    ring = graded_ring(names, degrees, modulus)
    quotient = GradedQuotient(ring, relations, ideal_extra, max_degree)
    result = quotient.graded_group()
    logger.info(f"Graded quotient over {ring!r}: {result.to_dict()}")
    return result
