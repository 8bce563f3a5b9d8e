"""
Index combinatorics: weight compositions, theta-symmetric matrices, the
partial orders on them, monomial chains, flag dimensions and the explicit
stabilization matrices.

Mathematical indices (i, j) are 1-based throughout this module; matrix storage
is 0-based.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, List, Optional, Sequence, Tuple

from exactnum import CapExceeded, SparseMatrix, block_diag, rank
from partitions import Partition, as_eps, as_partition
from utils import DEFAULT_LIMITS

WeightComposition = Tuple[int, ...]


def theta(i: int, n: int) -> int:
    """Index involution i -> n - i on 1..n-1"""
    return n - i


def level_sum(v: int) -> int:
    """Total of labels and theta-matrices at level v: v minus its parity"""
    return v - (v % 2)


def as_weight(values: Sequence[int]) -> WeightComposition:
    weight = tuple(int(x) for x in values)
    n = len(weight)
    if any(weight[i] != weight[n - 1 - i] for i in range(n)):
        raise ValueError(f"Weight {weight} is not symmetric")
    return weight


def weight_class(weight: Sequence[int]) -> WeightComposition:
    """Canonical representative of weight + Z(2,...,2): minimum entry 0 or 1"""
    weight = tuple(int(x) for x in weight)
    if not weight:
        return weight
    shift = 2 * (min(weight) // 2)
    return tuple(x - shift for x in weight)


def idempotent_shift(weight: Sequence[int], i: int) -> WeightComposition:
    """Weight reached by e_i: lambda + d_i - d_{i+1} - d_{n-i} + d_{n+1-i}"""
    shifted = list(weight)
    n = len(shifted)
    if not 1 <= i <= n - 1:
        raise ValueError(f"Index {i} out of range for n={n}")
    shifted[i - 1] += 1
    shifted[i] -= 1
    shifted[n - i - 1] -= 1
    shifted[n - i] += 1
    return tuple(shifted)


# ------------------------------------------------------------------ labels


def _symmetric_halves(half_length: int, total: int) -> Iterator[Tuple[int, ...]]:
    """Tuples of naturals of given length with given sum, lexicographic"""
    if half_length == 0:
        if total == 0:
            yield ()
        return
    for first in range(total + 1):
        for rest in _symmetric_halves(half_length - 1, total - first):
            yield (first,) + rest


def enumerate_labels(n: int, v: int, eps: int) -> List[WeightComposition]:
    """Lambda_v: symmetric compositions of v - (v mod 2), lexicographic"""
    eps = as_eps(eps)
    if n < 2:
        raise ValueError("n must be at least 2")
    if eps == -1 and v % 2:
        raise ValueError(f"No symplectic form in odd dimension v={v}")
    total = level_sum(v)
    r = n // 2
    labels = []
    if n % 2:
        for s in range(total // 2 + 1):
            for half in _symmetric_halves(r, s):
                labels.append(half + (total - 2 * s,) + half[::-1])
    else:
        for half in _symmetric_halves(r, total // 2):
            labels.append(half + half[::-1])
    return sorted(labels)


def actual_dims(label: Sequence[int], v: int, eps: int) -> Tuple[int, ...]:
    """Step dimensions of the flag: the middle entry gains 1 when n odd, v odd, eps=+1"""
    eps = as_eps(eps)
    dims = list(label)
    n = len(dims)
    if n % 2 and v % 2 and eps == 1:
        dims[n // 2] += 1
    return tuple(dims)


# ------------------------------------------------------------------ theta-matrices


@dataclass(frozen=True)
class ThetaMatrix:
    """n x n natural matrix with a_{ij} = a_{n+1-i, n+1-j}"""

    rows: Tuple[Tuple[int, ...], ...]
    ambient_v: Optional[int] = None

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in row) for row in self.rows)
        object.__setattr__(self, "rows", rows)
        n = len(rows)
        if n == 0 or any(len(row) != n for row in rows):
            raise ValueError("Theta-matrix must be square and nonempty")
        for i in range(n):
            for j in range(n):
                if rows[i][j] < 0:
                    raise ValueError(f"Negative entry at ({i + 1}, {j + 1})")
                if rows[i][j] != rows[n - 1 - i][n - 1 - j]:
                    raise ValueError(f"Entry ({i + 1}, {j + 1}) breaks theta-symmetry")
        if self.ambient_v is not None:
            if (self.total - level_sum(self.ambient_v)) % (2 * n):
                raise ValueError(f"Sum {self.total} incompatible with ambient v={self.ambient_v}")

    @classmethod
    def from_rows(cls, rows, ambient_v: Optional[int] = None) -> "ThetaMatrix":
        return cls(tuple(tuple(row) for row in rows), ambient_v)

    @classmethod
    def diagonal(cls, values: Sequence[int], ambient_v: Optional[int] = None) -> "ThetaMatrix":
        n = len(values)
        return cls(tuple(tuple(values[i] if i == j else 0 for j in range(n)) for i in range(n)), ambient_v)

    @property
    def n(self) -> int:
        return len(self.rows)

    @property
    def total(self) -> int:
        return sum(sum(row) for row in self.rows)

    def a(self, i: int, j: int) -> int:
        """1-based entry"""
        return self.rows[i - 1][j - 1]

    def diagonal_entries(self) -> Tuple[int, ...]:
        return tuple(self.rows[i][i] for i in range(self.n))

    def is_diagonal(self) -> bool:
        return all(self.rows[i][j] == 0 for i in range(self.n) for j in range(self.n) if i != j)

    def with_ambient(self, ambient_v: Optional[int]) -> "ThetaMatrix":
        return ThetaMatrix(self.rows, ambient_v)

    def to_json(self):
        return {"rows": [list(row) for row in self.rows], "ambient_v": self.ambient_v}

    def __str__(self):
        return "[" + "; ".join(",".join(str(x) for x in row) for row in self.rows) + "]"


def _add(a: ThetaMatrix, other_rows, factor: int, ambient_v: Optional[int]) -> ThetaMatrix:
    n = a.n
    return ThetaMatrix(tuple(tuple(a.rows[i][j] + factor * other_rows[i][j] for j in range(n)) for i in range(n)),
                       ambient_v)


def theta_elementary(n: int, i: int, j: int) -> Tuple[Tuple[int, ...], ...]:
    """E^theta_{ij} = E_{ij} + E_{n+1-i,n+1-j} as rows (a single 1 if the pair is its own mirror)"""
    if not (1 <= i <= n and 1 <= j <= n):
        raise ValueError(f"Index ({i}, {j}) out of range for n={n}")
    rows = [[0] * n for _ in range(n)]
    rows[i - 1][j - 1] = 1
    rows[n - i][n - j] = 1
    return tuple(tuple(row) for row in rows)


def ro(a: ThetaMatrix) -> WeightComposition:
    return tuple(sum(row) for row in a.rows)


def co(a: ThetaMatrix) -> WeightComposition:
    return tuple(sum(a.rows[i][j] for i in range(a.n)) for j in range(a.n))


def shift_class(a: ThetaMatrix, k: int) -> ThetaMatrix:
    """A + 2kI, ambient level moved by 2kn"""
    n = a.n
    rows = [[a.rows[i][j] + (2 * k if i == j else 0) for j in range(n)] for i in range(n)]
    if any(x < 0 for row in rows for x in row):
        raise ValueError(f"{a} + {2 * k}I has negative entries")
    ambient = None if a.ambient_v is None else a.ambient_v + 2 * k * n
    return ThetaMatrix(tuple(tuple(row) for row in rows), ambient)


pad_diagonal = shift_class


@dataclass(frozen=True)
class ThetaClass:
    """Class of A modulo 2I, stored by its minimal-diagonal representative"""

    representative: ThetaMatrix

    @classmethod
    def of(cls, a: ThetaMatrix) -> "ThetaClass":
        return cls(shift_class(a, -(min(a.diagonal_entries()) // 2)))


def same_class(a: ThetaMatrix, b: ThetaMatrix) -> bool:
    return a.n == b.n and ThetaClass.of(a).representative.rows == ThetaClass.of(b).representative.rows


def enumerate_theta(n: int, v: int, cap: Optional[int] = None) -> List[ThetaMatrix]:
    """All of Theta_v: theta-symmetric natural n x n matrices summing to v - (v mod 2)"""
    cap = DEFAULT_LIMITS["theta_cap"] if cap is None else cap
    if n < 1:
        raise ValueError("n must be positive")
    total = level_sum(v)
    # orbit representatives of (i, j) under the mirror, with their orbit sizes
    positions = []
    for i in range(n):
        for j in range(n):
            mirror = (n - 1 - i, n - 1 - j)
            if (i, j) <= mirror:
                positions.append(((i, j), mirror, 1 if (i, j) == mirror else 2))
    results: List[ThetaMatrix] = []

    def fill(index: int, remaining: int, values: List[int]):
        if index == len(positions):
            if remaining == 0:
                rows = [[0] * n for _ in range(n)]
                for ((i, j), (mi, mj), _), value in zip(positions, values):
                    rows[i][j] = value
                    rows[mi][mj] = value
                results.append(ThetaMatrix(tuple(tuple(row) for row in rows), v))
                if len(results) > cap:
                    raise CapExceeded(f"Theta_{v} for n={n} has more than {cap} elements")
            return
        size = positions[index][2]
        for value in range(remaining // size + 1):
            values.append(value)
            fill(index + 1, remaining - size * value, values)
            values.pop()

    fill(0, total, [])
    return results


def enumerate_theta_diagonals(n: int, total: int) -> List[Tuple[int, ...]]:
    """Symmetric diagonals (as tuples) with the given total"""
    r = n // 2
    diagonals = []
    if n % 2:
        for s in range(total // 2 + 1):
            for half in _symmetric_halves(r, s):
                diagonals.append(half + (total - 2 * s,) + half[::-1])
    elif total % 2 == 0:
        for half in _symmetric_halves(r, total // 2):
            diagonals.append(half + half[::-1])
    return sorted(diagonals)


# ------------------------------------------------------------------ orders


def _corner_sum(a: ThetaMatrix, i: int, j: int) -> int:
    """sum over r <= i, s >= j (1-based)"""
    return sum(a.rows[r][s] for r in range(i) for s in range(j - 1, a.n))


def order_preceq(a: ThetaMatrix, b: ThetaMatrix) -> bool:
    if a.n != b.n:
        raise ValueError("Shape mismatch")
    n = a.n
    return all(_corner_sum(a, i, j) <= _corner_sum(b, i, j)
               for i in range(1, n + 1) for j in range(i + 1, n + 1))


def order_sqsubseteq(a: ThetaMatrix, b: ThetaMatrix) -> bool:
    if a.n != b.n:
        raise ValueError("Shape mismatch")
    return ro(a) == ro(b) and co(a) == co(b) and order_preceq(a, b)


def _check_lower(pair: Tuple[int, int]):
    i, j = pair
    if i <= j or j < 1:
        raise ValueError(f"Pair {pair} is not strictly lower-triangular")


def triangle_order_lt(p: Tuple[int, int], q: Tuple[int, int]) -> bool:
    """(i,j) before (k,l) iff i-j > k-l, or equal distance and i < k"""
    _check_lower(p)
    _check_lower(q)
    (i, j), (k, l) = p, q
    return i - j > k - l or (i - j == k - l and i < k)


def lower_pairs_in_order(n: int) -> List[Tuple[int, int]]:
    pairs = [(i, j) for i in range(2, n + 1) for j in range(1, i)]
    return sorted(pairs, key=lambda p: (-(p[0] - p[1]), p[0]))


# ------------------------------------------------------------------ monomial chain


def monomial_chain(a: ThetaMatrix) -> List[ThetaMatrix]:
    """
    Chain G_{ij} over lower pairs in triangle order. G_{ij} is diagonal plus
    s_{ij} E^theta_{i,i-1} with s_{ij} = sum_{k >= i} a_{kj}; its row margin is
    the previous column margin (ro(A) for the first one).
    """
    n = a.n
    if n < 2:
        raise ValueError("Monomial chains need n >= 2")
    target = ro(a)
    chain = []
    for i, j in lower_pairs_in_order(n):
        amount = sum(a.a(k, j) for k in range(i, n + 1))
        band = theta_elementary(n, i, i - 1)
        contributions = [amount * sum(band[row]) for row in range(n)]
        diag = [target[row] - contributions[row] for row in range(n)]
        if any(x < 0 for x in diag):
            raise ValueError(f"Diagonal of {a} too small for G_{i},{j}: would need {diag}")
        rows = tuple(tuple((diag[r] if r == c else 0) + amount * band[r][c] for c in range(n)) for r in range(n))
        g = ThetaMatrix(rows, a.ambient_v)
        chain.append(g)
        target = co(g)
    if target != co(a):
        raise AssertionError(f"Chain for {a} ends at column margin {target}, expected {co(a)}")
    return chain


def chain_margin_errors(a: ThetaMatrix, chain: Sequence[ThetaMatrix]) -> List[str]:
    """Every violated margin or band condition of a chain (empty when valid)"""
    errors = []
    if len(chain) != a.n * (a.n - 1) // 2:
        errors.append(f"chain length {len(chain)}")
    if chain and ro(chain[0]) != ro(a):
        errors.append("first row margin differs from ro(A)")
    for prev, nxt in zip(chain, chain[1:]):
        if co(prev) != ro(nxt):
            errors.append(f"co({prev}) != ro({nxt})")
    if chain and co(chain[-1]) != co(a):
        errors.append("last column margin differs from co(A)")
    for g in chain:
        try:
            band_of(g)
        except ValueError as exc:
            errors.append(str(exc))
        if (g.total - a.total) % (2 * a.n):
            errors.append(f"sum of {g} breaks the level congruence")
    return errors


def band_of(g: ThetaMatrix) -> Tuple[Optional[int], int]:
    """(row i, amount c) with g = diagonal + c E^theta_{i,i-1}; (None, 0) for diagonal g"""
    n = g.n
    lower = [(i + 1, j + 1) for i in range(n) for j in range(n) if i > j and g.rows[i][j]]
    if not lower:
        if not g.is_diagonal():
            raise ValueError(f"{g} has an off-diagonal part without a lower band")
        return None, 0
    if len(lower) > 1 or lower[0][0] != lower[0][1] + 1:
        raise ValueError(f"{g} has more than one theta-symmetric band")
    i = lower[0][0]
    amount = g.a(i, i - 1)
    band = theta_elementary(n, i, i - 1)
    rest = [[g.rows[r][c] - amount * band[r][c] for c in range(n)] for r in range(n)]
    if any(rest[r][c] for r in range(n) for c in range(n) if r != c):
        raise ValueError(f"{g} has more than one theta-symmetric band")
    return i, amount


# ------------------------------------------------------------------ dimensions


def flag_dimension(d: Sequence[int], eps: int) -> Fraction:
    """dim F_{d,eps} = (sum_{i<k} d_i d_k - eps sum_{i<=r} d_i) / 2 for actual step dimensions d"""
    eps = as_eps(eps)
    d = [int(x) for x in d]
    n = len(d)
    if any(x < 0 for x in d) or any(d[i] != d[n - 1 - i] for i in range(n)):
        raise ValueError(f"Step dimensions {tuple(d)} are not isotropic-symmetric")
    r = n // 2
    pairs = sum(d[i] * d[k] for i in range(n) for k in range(i + 1, n))
    value = Fraction(pairs - eps * sum(d[:r]), 2)
    if value.denominator != 1:
        raise AssertionError(f"Flag dimension {value} is not an integer for {tuple(d)}")
    return value


def a_eps(n: int, v: int, eps: int) -> int:
    """2(n+v)(n-1) - eps(n - [n odd])"""
    eps = as_eps(eps)
    return 2 * (n + v) * (n - 1) - eps * (n - n % 2)


def a_eps_variant(n: int, v: int, eps: int) -> Fraction:
    """((2v+n)(n-1) - eps(n - [n odd])) / 2"""
    eps = as_eps(eps)
    return Fraction((2 * v + n) * (n - 1) - eps * (n - n % 2), 2)


# ------------------------------------------------------------------ stabilization


def jordan_type(x: SparseMatrix) -> Partition:
    """Jordan type of a nilpotent matrix from the ranks of its powers"""
    if not x.is_square():
        raise ValueError("Jordan type needs a square matrix")
    size = x.n_rows
    ranks = [size]
    power = SparseMatrix.identity(size)
    while ranks[-1] > 0:
        if len(ranks) > size + 1:
            raise ValueError("Matrix is not nilpotent")
        power = power @ x
        next_rank = rank(power)
        if next_rank == ranks[-1]:
            raise ValueError("Matrix is not nilpotent")
        ranks.append(next_rank)
    dual = [ranks[i] - ranks[i + 1] for i in range(len(ranks) - 1)]
    return tuple(sum(1 for c in dual if c > i) for i in range(dual[0])) if dual else ()


VARIANTS = ("block-2n", "odd-orthogonal", "symplectic-even")


@dataclass(frozen=True)
class StabilizationData:
    variant: str
    n: int
    eps: int
    e_eps: SparseMatrix
    form: SparseMatrix
    fixed_flag_dims: Tuple[int, ...]

    def isometry_residual(self) -> SparseMatrix:
        return self.e_eps.T @ self.form + self.form @ self.e_eps

    def to_json(self):
        return {
            "variant": self.variant,
            "n": self.n,
            "eps": self.eps,
            "size": self.e_eps.n_rows,
            "e_eps": self.e_eps.to_triplets(),
            "form": self.form.to_triplets(),
            "fixed_flag_dims": list(self.fixed_flag_dims),
            "jordan_type": list(jordan_type(self.e_eps)),
        }


def _jordan_block(m: int) -> SparseMatrix:
    return SparseMatrix(m, m, {(k, k + 1): 1 for k in range(m - 1)})


def _anti_identity(m: int) -> SparseMatrix:
    return SparseMatrix(m, m, {(k, m - 1 - k): 1 for k in range(m)})


def _two_by_two(top_left, top_right, bottom_left, bottom_right) -> SparseMatrix:
    m = top_left.n_rows
    entries = {}
    for block, (r0, c0) in ((top_left, (0, 0)), (top_right, (0, m)), (bottom_left, (m, 0)), (bottom_right, (m, m))):
        for (r, c), value in block.items():
            entries[(r0 + r, c0 + c)] = value
    return SparseMatrix(2 * m, 2 * m, entries)


def build_stabilization(variant: str, n: int, eps: Optional[int] = None) -> StabilizationData:
    """
    block-2n: e_eps = diag(e, -e) with form M_eps = [[0, J], [eps J, 0]].
    odd-orthogonal (n = 2r+1, eps=+1): an almost Jordan block isometric for J.
    symplectic-even (n = 2r, eps=-1): [[e_r, E_{r1}], [0, -e_r]] with M_eps on r-blocks.
    """
    if variant not in VARIANTS:
        raise ValueError(f"Unknown variant {variant!r}; choose from {VARIANTS}")
    if n < 1:
        raise ValueError("n must be positive")
    if variant == "block-2n":
        if eps is None:
            raise ValueError("block-2n needs eps")
        eps = as_eps(eps)
        e, j = _jordan_block(n), _anti_identity(n)
        zero = SparseMatrix.zeros(n)
        return StabilizationData(variant, n, eps, block_diag(e, -e),
                                 _two_by_two(zero, j, j.scale(eps), zero), (2,) * n)
    if variant == "odd-orthogonal":
        if n % 2 == 0 or (eps is not None and as_eps(eps) != 1):
            raise ValueError("odd-orthogonal requires n odd and eps=+1")
        r = n // 2
        # block rows r, 1, r: [[e_r, J f^T, 0], [0, 0, -f], [0, 0, -e_r]], f = (1, 0, ..., 0)
        entries = {(k, k + 1): (1 if k < r else -1) for k in range(n - 1)}
        return StabilizationData(variant, n, 1, SparseMatrix(n, n, entries), _anti_identity(n), (1,) * n)
    if n % 2 or (eps is not None and as_eps(eps) != -1):
        raise ValueError("symplectic-even requires n even and eps=-1")
    r = n // 2
    e_r = _jordan_block(r)
    corner = SparseMatrix.elementary(r, r - 1, 0)
    j = _anti_identity(r)
    zero = SparseMatrix.zeros(r)
    return StabilizationData(variant, n, -1, _two_by_two(e_r, corner, zero, -e_r),
                             _two_by_two(zero, j, -j, zero), (1,) * n)


def admissible_residues(n: int, eps: int) -> List[int]:
    """Residues v0 of the limit levels v = v0 + 2nk"""
    eps = as_eps(eps)
    residues = [2 * l for l in range(1, n + 1)]
    if eps == 1 and n % 2:
        residues += [2 * l - 1 for l in range(1, n + 1)]
    return sorted(residues)
