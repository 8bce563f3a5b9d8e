"""
Exact rational arithmetic kernel: sparse matrices over Q, row reduction,
kernels, minimal polynomials and algebra/commutant dimensions.
"""

from collections import deque
from fractions import Fraction
from typing import Dict, Hashable, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np
import sympy

Rational = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


class CapExceeded(ValueError):
    """Raised when a computation would exceed a configured size cap"""


def to_rational(value) -> Fraction:
    """Convert ints, strings like "3/4" and Fractions; floats are rejected"""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        return Fraction(int(value))
    if isinstance(value, (int, np.integer)):
        return Fraction(int(value))
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, sympy.Rational):
        return Fraction(int(value.p), int(value.q))
    raise ValueError(f"Cannot use {value!r} as an exact rational")


def format_rational(value: Fraction) -> str:
    """Serialize as "p/q" (or "p" for integers)"""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


class SparseMatrix:
    """
    Immutable matrix with Fraction entries stored as a dict (row, col) -> value.
    Zeros are never stored. Indices are 0-based.
    """

    __slots__ = ("n_rows", "n_cols", "_entries", "_row_index", "_hash")

    def __init__(self, n_rows: int, n_cols: int, entries: Optional[Mapping[Tuple[int, int], object]] = None):
        if n_rows < 0 or n_cols < 0:
            raise ValueError(f"Invalid shape {n_rows}x{n_cols}")
        self.n_rows = n_rows
        self.n_cols = n_cols
        clean = {}
        for (r, c), value in (entries or {}).items():
            if not (0 <= r < n_rows and 0 <= c < n_cols):
                raise ValueError(f"Index ({r}, {c}) out of range for {n_rows}x{n_cols} matrix")
            q = to_rational(value)
            if q:
                clean[(r, c)] = q
        self._entries = clean
        self._row_index = None
        self._hash = None

    # ---------------------------------------------------------------- builders

    @classmethod
    def _trusted(cls, n_rows, n_cols, entries):
        m = cls.__new__(cls)
        m.n_rows = n_rows
        m.n_cols = n_cols
        m._entries = entries
        m._row_index = None
        m._hash = None
        return m

    @classmethod
    def zeros(cls, n_rows: int, n_cols: Optional[int] = None) -> "SparseMatrix":
        return cls(n_rows, n_rows if n_cols is None else n_cols)

    @classmethod
    def identity(cls, n: int) -> "SparseMatrix":
        return cls._trusted(n, n, {(i, i): ONE for i in range(n)})

    @classmethod
    def elementary(cls, n_rows: int, row: int, col: int, n_cols: Optional[int] = None) -> "SparseMatrix":
        """E_{row,col} with 0-based indices"""
        return cls(n_rows, n_rows if n_cols is None else n_cols, {(row, col): 1})

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[object]]) -> "SparseMatrix":
        n_rows = len(rows)
        n_cols = len(rows[0]) if rows else 0
        entries = {}
        for r, row in enumerate(rows):
            if len(row) != n_cols:
                raise ValueError("Ragged rows")
            for c, value in enumerate(row):
                entries[(r, c)] = value
        return cls(n_rows, n_cols, entries)

    @classmethod
    def from_triplets(cls, n_rows: int, n_cols: int, triplets: Iterable[Sequence[object]]) -> "SparseMatrix":
        entries: Dict[Tuple[int, int], Fraction] = {}
        for r, c, value in triplets:
            key = (int(r), int(c))
            entries[key] = entries.get(key, ZERO) + to_rational(value)
        return cls(n_rows, n_cols, entries)

    @classmethod
    def diagonal(cls, values: Sequence[object]) -> "SparseMatrix":
        return cls(len(values), len(values), {(i, i): v for i, v in enumerate(values)})

    # ---------------------------------------------------------------- access

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.n_rows, self.n_cols)

    @property
    def nnz(self) -> int:
        return len(self._entries)

    def is_square(self) -> bool:
        return self.n_rows == self.n_cols

    def get(self, row: int, col: int) -> Fraction:
        return self._entries.get((row, col), ZERO)

    def items(self):
        return self._entries.items()

    def rows_dict(self) -> Dict[int, Dict[int, Fraction]]:
        """Row index -> {col: value}; cached"""
        if self._row_index is None:
            index: Dict[int, Dict[int, Fraction]] = {}
            for (r, c), value in self._entries.items():
                index.setdefault(r, {})[c] = value
            self._row_index = index
        return self._row_index

    def column(self, col: int) -> Dict[int, Fraction]:
        return {r: v for (r, c), v in self._entries.items() if c == col}

    def is_zero(self) -> bool:
        return not self._entries

    def is_identity(self) -> bool:
        return self == SparseMatrix.identity(self.n_rows) if self.is_square() else False

    def to_rows(self) -> List[List[Fraction]]:
        rows = [[ZERO] * self.n_cols for _ in range(self.n_rows)]
        for (r, c), value in self._entries.items():
            rows[r][c] = value
        return rows

    def to_numpy(self) -> np.ndarray:
        """Dense object array of Fractions"""
        array = np.empty((self.n_rows, self.n_cols), dtype=object)
        array.fill(ZERO)
        for (r, c), value in self._entries.items():
            array[r, c] = value
        return array

    def to_triplets(self) -> List[Tuple[int, int, str]]:
        return [(r, c, format_rational(v)) for (r, c), v in sorted(self._entries.items())]

    def vector_key(self) -> Dict[Tuple[int, int], Fraction]:
        """Entries as a flat sparse vector keyed by (row, col)"""
        return dict(self._entries)

    # ---------------------------------------------------------------- arithmetic

    def _check_same_shape(self, other: "SparseMatrix"):
        if self.shape != other.shape:
            raise ValueError(f"Shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: "SparseMatrix") -> "SparseMatrix":
        self._check_same_shape(other)
        entries = dict(self._entries)
        for key, value in other._entries.items():
            total = entries.get(key, ZERO) + value
            if total:
                entries[key] = total
            else:
                entries.pop(key, None)
        return SparseMatrix._trusted(self.n_rows, self.n_cols, entries)

    def __neg__(self) -> "SparseMatrix":
        return SparseMatrix._trusted(self.n_rows, self.n_cols, {k: -v for k, v in self._entries.items()})

    def __sub__(self, other: "SparseMatrix") -> "SparseMatrix":
        return self + (-other)

    def scale(self, scalar) -> "SparseMatrix":
        q = to_rational(scalar)
        if not q:
            return SparseMatrix(self.n_rows, self.n_cols)
        return SparseMatrix._trusted(self.n_rows, self.n_cols, {k: v * q for k, v in self._entries.items()})

    def __mul__(self, scalar) -> "SparseMatrix":
        if isinstance(scalar, SparseMatrix):
            return matmul(self, scalar)
        return self.scale(scalar)

    __rmul__ = scale

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        return matmul(self, other)

    def transpose(self) -> "SparseMatrix":
        return SparseMatrix._trusted(self.n_cols, self.n_rows, {(c, r): v for (r, c), v in self._entries.items()})

    @property
    def T(self) -> "SparseMatrix":
        return self.transpose()

    def power(self, k: int) -> "SparseMatrix":
        if not self.is_square():
            raise ValueError("Matrix powers need a square matrix")
        if k < 0:
            raise ValueError("Negative powers are not supported")
        result = SparseMatrix.identity(self.n_rows)
        base = self
        while k:
            if k & 1:
                result = result @ base
            k >>= 1
            if k:
                base = base @ base
        return result

    def kron(self, other: "SparseMatrix") -> "SparseMatrix":
        entries = {}
        for (r1, c1), v1 in self._entries.items():
            for (r2, c2), v2 in other._entries.items():
                entries[(r1 * other.n_rows + r2, c1 * other.n_cols + c2)] = v1 * v2
        return SparseMatrix._trusted(self.n_rows * other.n_rows, self.n_cols * other.n_cols, entries)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "SparseMatrix":
        row_pos = {r: i for i, r in enumerate(rows)}
        col_pos = {c: j for j, c in enumerate(cols)}
        entries = {}
        for (r, c), value in self._entries.items():
            if r in row_pos and c in col_pos:
                entries[(row_pos[r], col_pos[c])] = value
        return SparseMatrix._trusted(len(rows), len(cols), entries)

    def apply(self, vector: Mapping[int, Fraction]) -> Dict[int, Fraction]:
        """Matrix times a sparse column vector {index: value}"""
        out: Dict[int, Fraction] = {}
        rows = self.rows_dict()
        for r, row in rows.items():
            total = ZERO
            for c, value in row.items():
                x = vector.get(c)
                if x:
                    total += value * x
            if total:
                out[r] = total
        return out

    # ---------------------------------------------------------------- identity

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return self.shape == other.shape and self._entries == other._entries

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n_rows, self.n_cols, frozenset(self._entries.items())))
        return self._hash

    def __repr__(self) -> str:
        if self.n_rows * self.n_cols <= 36:
            body = "; ".join(",".join(format_rational(x) for x in row) for row in self.to_rows())
            return f"SparseMatrix({self.n_rows}x{self.n_cols}: [{body}])"
        return f"SparseMatrix({self.n_rows}x{self.n_cols}, nnz={self.nnz})"


def block_diag(*blocks: SparseMatrix) -> SparseMatrix:
    entries = {}
    r0 = c0 = 0
    for block in blocks:
        for (r, c), value in block.items():
            entries[(r0 + r, c0 + c)] = value
        r0 += block.n_rows
        c0 += block.n_cols
    return SparseMatrix._trusted(r0, c0, entries)


def vstack(blocks: Sequence[SparseMatrix]) -> SparseMatrix:
    if not blocks:
        raise ValueError("Nothing to stack")
    n_cols = blocks[0].n_cols
    entries = {}
    r0 = 0
    for block in blocks:
        if block.n_cols != n_cols:
            raise ValueError("Column count mismatch in vstack")
        for (r, c), value in block.items():
            entries[(r0 + r, c)] = value
        r0 += block.n_rows
    return SparseMatrix._trusted(r0, n_cols, entries)


def matmul(a: SparseMatrix, b: SparseMatrix) -> SparseMatrix:
    """Exact product a·b"""
    if a.n_cols != b.n_rows:
        raise ValueError(f"Dimension mismatch: {a.shape} @ {b.shape}")
    b_rows = b.rows_dict()
    entries: Dict[Tuple[int, int], Fraction] = {}
    for (i, k), x in a.items():
        row = b_rows.get(k)
        if not row:
            continue
        for j, y in row.items():
            key = (i, j)
            total = entries.get(key, ZERO) + x * y
            if total:
                entries[key] = total
            else:
                entries.pop(key, None)
    return SparseMatrix._trusted(a.n_rows, b.n_cols, entries)


def commutator(a: SparseMatrix, b: SparseMatrix) -> SparseMatrix:
    return a @ b - b @ a


# ------------------------------------------------------------------ row reduction


class RowEchelon:
    """
    Incremental echelon basis of sparse vectors (dicts with comparable keys).

    Rows are kept reduced against the pivots of earlier rows, so reducing a new
    vector in insertion order clears every pivot. With track=True each row also
    remembers which combination of inserted vectors produced it.
    """

    def __init__(self, track: bool = False):
        self.track = track
        self._rows: List[Tuple[Hashable, Dict[Hashable, Fraction], Dict[Hashable, Fraction]]] = []

    def __len__(self) -> int:
        return len(self._rows)

    @property
    def pivots(self) -> List[Hashable]:
        return [pivot for pivot, _, _ in self._rows]

    def reduce(self, vector: Mapping[Hashable, object], tag: Hashable = None):
        residual = {k: to_rational(v) for k, v in vector.items() if v}
        combo = {tag: ONE} if self.track else {}
        for pivot, row, row_combo in self._rows:
            c = residual.get(pivot)
            if not c:
                continue
            for key, value in row.items():
                updated = residual.get(key, ZERO) - c * value
                if updated:
                    residual[key] = updated
                else:
                    residual.pop(key, None)
            if self.track:
                for key, value in row_combo.items():
                    updated = combo.get(key, ZERO) - c * value
                    if updated:
                        combo[key] = updated
                    else:
                        combo.pop(key, None)
        return residual, combo

    def add(self, vector: Mapping[Hashable, object], tag: Hashable = None):
        """Insert a vector; returns (independent, dependency combination)"""
        residual, combo = self.reduce(vector, tag)
        if not residual:
            return False, combo
        pivot = min(residual)
        scale = 1 / residual[pivot]
        row = {k: v * scale for k, v in residual.items()}
        row_combo = {k: v * scale for k, v in combo.items()}
        self._rows.append((pivot, row, row_combo))
        return True, None

    def reduced_rows(self) -> List[Tuple[Hashable, Dict[Hashable, Fraction]]]:
        """Fully reduced rows (each pivot column cleared in every other row)"""
        rows = [(pivot, dict(row)) for pivot, row, _ in self._rows]
        for k in range(len(rows) - 1, -1, -1):
            pivot_k, row_k = rows[k]
            for j in range(k):
                _, row_j = rows[j]
                c = row_j.get(pivot_k)
                if not c:
                    continue
                for key, value in row_k.items():
                    updated = row_j.get(key, ZERO) - c * value
                    if updated:
                        row_j[key] = updated
                    else:
                        row_j.pop(key, None)
        return rows


def _echelon_of_rows(a: SparseMatrix) -> RowEchelon:
    echelon = RowEchelon()
    for _, row in sorted(a.rows_dict().items()):
        echelon.add(row)
    return echelon


def rank(a: SparseMatrix) -> int:
    return len(_echelon_of_rows(a))


def span_rank(vectors: Iterable[Mapping[Hashable, object]]) -> int:
    """Rank of a family of sparse vectors"""
    echelon = RowEchelon()
    for vector in vectors:
        echelon.add(vector)
    return len(echelon)


def kernel_basis(a: SparseMatrix) -> List[Tuple[Fraction, ...]]:
    """Exact basis of the right null space as column vectors (tuples)"""
    rows = _echelon_of_rows(a).reduced_rows()
    pivot_cols = {pivot for pivot, _ in rows}
    basis = []
    for free in range(a.n_cols):
        if free in pivot_cols:
            continue
        vector = [ZERO] * a.n_cols
        vector[free] = ONE
        for pivot, row in rows:
            value = row.get(free)
            if value:
                vector[pivot] = -value
        basis.append(tuple(vector))
    return basis


def column_matrix(vectors: Sequence[Sequence[Fraction]], n_rows: int) -> SparseMatrix:
    """Matrix whose columns are the given vectors"""
    entries = {}
    for j, vector in enumerate(vectors):
        for i, value in enumerate(vector):
            if value:
                entries[(i, j)] = value
    return SparseMatrix(n_rows, len(vectors), entries)


def coordinates(basis: Sequence[Mapping[Hashable, object]], vector: Mapping[Hashable, object]) -> Optional[List[Fraction]]:
    """Coefficients expressing vector in an independent basis, or None if outside the span"""
    echelon = RowEchelon(track=True)
    for index, b in enumerate(basis):
        independent, _ = echelon.add(b, tag=index)
        if not independent:
            raise ValueError("Basis vectors are linearly dependent")
    residual, combo = echelon.reduce(vector, tag="target")
    if residual:
        return None
    return [-combo.get(index, ZERO) for index in range(len(basis))]


# ------------------------------------------------------------------ polynomials


def minimal_polynomial(a: SparseMatrix) -> Tuple[Fraction, ...]:
    """Monic minimal polynomial, coefficients from degree 0 upwards"""
    if not a.is_square():
        raise ValueError("Minimal polynomial needs a square matrix")
    echelon = RowEchelon(track=True)
    power = SparseMatrix.identity(a.n_rows)
    for degree in range(a.n_rows + 1):
        independent, combo = echelon.add(power.vector_key(), tag=degree)
        if not independent:
            return tuple(combo.get(k, ZERO) for k in range(degree + 1))
        power = a @ power
    raise AssertionError("Cayley-Hamilton bound exceeded")


def evaluate_polynomial(coefficients: Sequence[object], a: SparseMatrix) -> SparseMatrix:
    """Horner evaluation of sum c_k a^k"""
    n = a.n_rows
    result = SparseMatrix.zeros(n)
    identity = SparseMatrix.identity(n)
    for c in reversed(list(coefficients)):
        result = result @ a + identity.scale(c)
    return result


_X = sympy.Symbol("X")


def _to_sympy_poly(coefficients: Sequence[object]) -> sympy.Poly:
    coeffs = [to_rational(c) for c in coefficients]
    high_first = [sympy.Rational(c.numerator, c.denominator) for c in reversed(coeffs)]
    return sympy.Poly(high_first, _X, domain=sympy.QQ)


def rational_roots(coefficients: Sequence[object]) -> List[Fraction]:
    """Distinct rational roots, ascending; irreducible nonlinear factors contribute nothing"""
    poly = _to_sympy_poly(coefficients)
    if poly.degree() <= 0:
        return []
    roots = poly.ground_roots()
    return sorted(to_rational(root) for root in roots)


def poly_from_roots(roots: Iterable[object]) -> Tuple[Fraction, ...]:
    coefficients = [ONE]
    for root in roots:
        q = to_rational(root)
        shifted = [ZERO] + coefficients
        for k, c in enumerate(coefficients):
            shifted[k] -= q * c
        coefficients = shifted
    return tuple(coefficients)


def poly_divides(p: Sequence[object], q: Sequence[object]) -> bool:
    """True iff p divides q in Q[X]"""
    divisor = _to_sympy_poly(p)
    if divisor.is_zero:
        raise ValueError("Division by the zero polynomial")
    return _to_sympy_poly(q).rem(divisor).is_zero


def poly_to_string(coefficients: Sequence[object]) -> str:
    return str(_to_sympy_poly(coefficients).as_expr())


# ------------------------------------------------------------------ algebra dimensions


def commutant_dimension(generators: Sequence[SparseMatrix]) -> int:
    """dim {X : XG = GX for every generator G}"""
    if not generators:
        raise ValueError("Need at least one generator")
    m = generators[0].n_rows
    for g in generators:
        if g.shape != (m, m):
            raise ValueError("Generators must be square of equal size")
    echelon = RowEchelon()
    for g in generators:
        g_rows = g.rows_dict()
        g_cols: Dict[int, Dict[int, Fraction]] = {}
        for (r, c), value in g.items():
            g_cols.setdefault(c, {})[r] = value
        for i in range(m):
            for j in range(m):
                # (XG - GX)_{ij}
                equation: Dict[Tuple[int, int], Fraction] = {}
                for k, value in g_cols.get(j, {}).items():
                    equation[(i, k)] = equation.get((i, k), ZERO) + value
                for k, value in g_rows.get(i, {}).items():
                    equation[(k, j)] = equation.get((k, j), ZERO) - value
                if any(equation.values()):
                    echelon.add(equation)
    return m * m - len(echelon)


def spanned_algebra_dimension(generators: Sequence[SparseMatrix], cap: Optional[int] = None) -> int:
    """
    Dimension of the unital algebra generated by the matrices.

    Breadth-first closure under left multiplication by generators, starting
    from the identity; raises CapExceeded once the span passes cap.
    """
    if not generators:
        return 1
    m = generators[0].n_rows
    for g in generators:
        if g.shape != (m, m):
            raise ValueError("Generators must be square of equal size")
    limit = m * m if cap is None else cap
    echelon = RowEchelon()
    identity = SparseMatrix.identity(m)
    echelon.add(identity.vector_key())
    queue = deque([identity])
    while queue:
        current = queue.popleft()
        for g in generators:
            product = g @ current
            independent, _ = echelon.add(product.vector_key())
            if independent:
                if len(echelon) > limit:
                    raise CapExceeded(f"Spanned algebra dimension exceeds cap {limit}")
                queue.append(product)
    return len(echelon)
