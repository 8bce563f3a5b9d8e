"""
Partitions, epsilon-partitions, dominance order, nilpotent orbit dimensions,
epsilon-collapse and the n-nilcone classification table
"""

from collections import Counter
from dataclasses import dataclass
from typing import Iterator, List, Sequence, Tuple

from exactnum import CapExceeded, SparseMatrix, block_diag, kernel_basis
from utils import DEFAULT_LIMITS

Partition = Tuple[int, ...]


def as_partition(parts: Sequence[int], sort: bool = False) -> Partition:
    """Validate a partition; zero parts are dropped"""
    values = [int(p) for p in parts]
    if any(p < 0 for p in values):
        raise ValueError(f"Negative part in {tuple(values)}")
    values = [p for p in values if p > 0]
    if sort:
        values.sort(reverse=True)
    elif any(values[i] < values[i + 1] for i in range(len(values) - 1)):
        raise ValueError(f"Parts must be weakly decreasing: {tuple(values)}")
    return tuple(values)


def as_eps(value) -> int:
    """Parse an epsilon sign: +1/-1 as int or string"""
    if isinstance(value, str):
        value = value.strip()
        if value in ("+", "+1", "1"):
            return 1
        if value in ("-", "-1"):
            return -1
        raise ValueError(f"Epsilon must be +1 or -1, got {value!r}")
    if value in (1, -1):
        return int(value)
    raise ValueError(f"Epsilon must be +1 or -1, got {value!r}")


def dual_partition(mu: Sequence[int]) -> Partition:
    mu = as_partition(mu)
    if not mu:
        return ()
    return tuple(sum(1 for p in mu if p > i) for i in range(mu[0]))


def _prefix_sums(mu: Partition, length: int) -> List[int]:
    sums, total = [], 0
    for i in range(length):
        total += mu[i] if i < len(mu) else 0
        sums.append(total)
    return sums


def dominance_leq(lam: Sequence[int], mu: Sequence[int]) -> bool:
    """lambda <= mu in dominance order"""
    lam, mu = as_partition(lam), as_partition(mu)
    if sum(lam) != sum(mu):
        raise ValueError(f"Size mismatch: |{lam}| != |{mu}|")
    length = max(len(lam), len(mu))
    return all(a <= b for a, b in zip(_prefix_sums(lam, length), _prefix_sums(mu, length)))


def is_eps_partition(mu: Sequence[int], eps: int) -> bool:
    """eps=+1: even parts have even multiplicity; eps=-1: odd parts do"""
    mu = as_partition(mu)
    eps = as_eps(eps)
    bad_parity = 0 if eps == 1 else 1
    return all(count % 2 == 0 for part, count in Counter(mu).items() if part % 2 == bad_parity)


def ambient_dim(v: int, eps: int) -> int:
    """dim sp_v (eps=-1) or so_v (eps=+1)"""
    eps = as_eps(eps)
    if v < 0:
        raise ValueError("v must be nonnegative")
    if eps == -1 and v % 2:
        raise ValueError(f"No symplectic form in odd dimension v={v}")
    return v * (v - eps) // 2


def orbit_dimension(mu: Sequence[int], eps: int) -> int:
    mu = as_partition(mu)
    eps = as_eps(eps)
    if not is_eps_partition(mu, eps):
        raise ValueError(f"{mu} is not an epsilon-partition for eps={eps:+d}")
    size = sum(mu)
    odd_parts = sum(1 for p in mu if p % 2)
    twice = size * size - sum(p * p for p in dual_partition(mu)) - eps * (size - odd_parts)
    if twice % 2 or twice < 0:
        raise AssertionError(f"Orbit dimension formula gave {twice}/2 for {mu}")
    return twice // 2


def enumerate_partitions(v: int, max_part: int = None) -> Iterator[Partition]:
    """All partitions of v, dominance-compatible order (reverse lexicographic)"""
    if v == 0:
        yield ()
        return
    top = v if max_part is None else min(v, max_part)
    for first in range(top, 0, -1):
        for rest in enumerate_partitions(v - first, first):
            yield (first,) + rest


def enumerate_eps_partitions(v: int, eps: int, bound: int = None) -> List[Partition]:
    eps = as_eps(eps)
    bound = DEFAULT_LIMITS["partition_bound"] if bound is None else bound
    if v < 0:
        raise ValueError("v must be nonnegative")
    if v > bound:
        raise CapExceeded(f"v={v} exceeds the partition enumeration bound {bound}")
    return [mu for mu in enumerate_partitions(v) if is_eps_partition(mu, eps)]


def eps_collapse(mu: Sequence[int], eps: int) -> Partition:
    """
    Largest eps-partition dominated by mu.

    Repeatedly take the largest part q of the forbidden parity with odd
    multiplicity, lower its last occurrence to q-1 and raise the first later
    part smaller than q-1 by one.
    """
    eps = as_eps(eps)
    parts = list(as_partition(mu))
    if eps == -1 and sum(parts) % 2:
        raise ValueError(f"No symplectic partitions of odd size {sum(parts)}")
    bad_parity = 0 if eps == 1 else 1
    while True:
        counts = Counter(parts)
        offenders = [p for p, c in counts.items() if p % 2 == bad_parity and c % 2]
        if not offenders:
            return as_partition(parts)
        q = max(offenders)
        last = max(i for i, p in enumerate(parts) if p == q)
        parts[last] = q - 1
        for j in range(last + 1, len(parts)):
            if parts[j] < q - 1:
                parts[j] += 1
                break
        else:
            parts.append(1)
        parts = [p for p in parts if p > 0]


def closure_leq(lam: Sequence[int], mu: Sequence[int], eps: int) -> bool:
    """Orbit closure order on P_eps(v): O_lambda in closure(O_mu) iff lambda <= mu"""
    for nu in (lam, mu):
        if not is_eps_partition(nu, eps):
            raise ValueError(f"{tuple(nu)} is not an epsilon-partition for eps={as_eps(eps):+d}")
    return dominance_leq(lam, mu)


def closure_ideal(mu: Sequence[int], eps: int) -> List[Partition]:
    mu = as_partition(mu)
    return [lam for lam in enumerate_eps_partitions(sum(mu), eps) if dominance_leq(lam, mu)]


@dataclass(frozen=True)
class NilconeDescription:
    components: Tuple[Partition, ...]
    irreducible: bool
    normal: bool
    very_even: bool

    def to_dict(self):
        return {
            "components": [list(c) for c in self.components],
            "irreducible": self.irreducible,
            "normal": self.normal,
            "very_even": self.very_even,
        }


def nilcone_description(n: int, v: int, eps: int) -> NilconeDescription:
    """Partition type of the closure of {x : x^n = 0} in the isometry Lie algebra"""
    eps = as_eps(eps)
    if n < 2:
        raise ValueError("n must be at least 2")
    if v < 1:
        raise ValueError("v must be positive")
    if eps == -1 and v % 2:
        raise ValueError(f"No symplectic form in odd dimension v={v}")
    k, l = divmod(v, n)
    n_odd, k_odd, l_odd = n % 2 == 1, k % 2 == 1, l % 2 == 1

    if eps == 1 and not n_odd and not k_odd and l == 0:
        block = (n,) * k
        return NilconeDescription((block, block), irreducible=False, normal=True, very_even=True)

    if eps == -1:
        if n_odd and k_odd and l_odd:
            parts = (n,) * (k - 1) + (n - 1, l + 1)
        else:
            parts = (n,) * k + (l,)
    elif v % 2:
        if not n_odd and k_odd:
            parts = (n,) * (k - 1) + (n - 1, l, 1)
        elif n_odd and k_odd:
            parts = (n,) * k + ((l - 1, 1) if l else ())
        else:
            parts = (n,) * k + (l,)
    else:
        if n_odd and k_odd:
            parts = (n,) * k + (l,)
        elif not n_odd and k_odd:
            parts = (n,) * (k - 1) + (n - 1, l + 1)
        else:
            parts = (n,) * k + ((l - 1, 1) if l else ())
    component = as_partition(parts, sort=True)
    if not is_eps_partition(component, eps):
        raise AssertionError(f"Nilcone table produced invalid partition {component}")
    return NilconeDescription((component,), irreducible=True, normal=True, very_even=False)


def _anti_diagonal(m: int) -> SparseMatrix:
    return SparseMatrix(m, m, {(i, m - 1 - i): 1 for i in range(m)})


def _shift_block(m: int, signs: Sequence[int]) -> SparseMatrix:
    """Superdiagonal matrix with entry signs[k] at (k, k+1)"""
    return SparseMatrix(m, m, {(k, k + 1): signs[k] for k in range(m - 1)})


def _paired_block(m: int, eps: int):
    """diag(e, -e) on Q^m + Q^m with form [[0, J], [eps J, 0]]"""
    e = _shift_block(m, [1] * (m - 1))
    j = _anti_diagonal(m)
    x = block_diag(e, -e)
    form = SparseMatrix(2 * m, 2 * m, {
        **{(r, m + c): v for (r, c), v in j.items()},
        **{(m + r, c): eps * v for (r, c), v in j.items()},
    })
    return x, form


def _self_paired_block(m: int, eps: int):
    """Single Jordan block of size m that is an isometry for a form on Q^m"""
    half = m // 2
    if eps == 1:
        # odd m, form J; signs +1 then -1 around the middle
        signs = [1 if k < half else -1 for k in range(m - 1)]
        return _shift_block(m, signs), _anti_diagonal(m)
    j = _anti_diagonal(half)
    form = SparseMatrix(m, m, {
        **{(r, half + c): v for (r, c), v in j.items()},
        **{(half + r, c): -v for (r, c), v in j.items()},
    })
    signs = [1 if k < half else -1 for k in range(m - 1)]
    return _shift_block(m, signs), form


def nilpotent_representative(mu: Sequence[int], eps: int):
    """Nilpotent x of Jordan type mu with its eps-form M (x^T M + M x = 0)"""
    mu = as_partition(mu)
    eps = as_eps(eps)
    if not is_eps_partition(mu, eps):
        raise ValueError(f"{mu} is not an epsilon-partition for eps={eps:+d}")
    self_parity = 1 if eps == 1 else 0
    xs, forms = [], []
    for part, count in sorted(Counter(mu).items(), reverse=True):
        if part % 2 == self_parity:
            for _ in range(count):
                x, form = _self_paired_block(part, eps)
                xs.append(x)
                forms.append(form)
        else:
            for _ in range(count // 2):
                x, form = _paired_block(part, eps)
                xs.append(x)
                forms.append(form)
    if not xs:
        return SparseMatrix.zeros(0), SparseMatrix.zeros(0)
    return block_diag(*xs), block_diag(*forms)


def centralizer_dimension_oracle(mu: Sequence[int], eps: int, bound: int = None) -> int:
    """Dimension of the centralizer of a type-mu nilpotent in the isometry Lie algebra"""
    from indexing import jordan_type

    mu = as_partition(mu)
    eps = as_eps(eps)
    bound = DEFAULT_LIMITS["oracle_bound"] if bound is None else bound
    if sum(mu) > bound:
        raise CapExceeded(f"|mu|={sum(mu)} exceeds the oracle bound {bound}")
    x, form = nilpotent_representative(mu, eps)
    v = x.n_rows
    if v == 0:
        return 0
    if not (x.T @ form + form @ x).is_zero() or jordan_type(x) != mu:
        raise AssertionError(f"No valid representative found for {mu}, eps={eps:+d}")

    # Unknown y_{ab} is column a*v + b; rows stack y^T M + M y = 0 and xy - yx = 0
    form_rows, x_rows = form.rows_dict(), x.rows_dict()
    form_cols, x_cols = {}, {}
    for (r, c), value in form.items():
        form_cols.setdefault(c, {})[r] = value
    for (r, c), value in x.items():
        x_cols.setdefault(c, {})[r] = value
    triplets = []
    row = 0
    for a in range(v):
        for b in range(v):
            for c_, m_cb in form_cols.get(b, {}).items():
                triplets.append((row, c_ * v + a, m_cb))
            for c_, m_ac in form_rows.get(a, {}).items():
                triplets.append((row, c_ * v + b, m_ac))
            row += 1
    for a in range(v):
        for b in range(v):
            for c_, x_ac in x_rows.get(a, {}).items():
                triplets.append((row, c_ * v + b, x_ac))
            for c_, x_cb in x_cols.get(b, {}).items():
                triplets.append((row, a * v + c_, -x_cb))
            row += 1
    system = SparseMatrix.from_triplets(row, v * v, triplets)
    return len(kernel_basis(system))


def brute_force_collapse(mu: Sequence[int], eps: int) -> Partition:
    """Dominance-maximum of the eps-partitions below mu, by enumeration"""
    mu = as_partition(mu)
    candidates = [nu for nu in enumerate_eps_partitions(sum(mu), eps) if dominance_leq(nu, mu)]
    if not candidates:
        raise ValueError(f"No epsilon-partition lies below {mu}")
    maxima = [nu for nu in candidates
              if not any(other != nu and dominance_leq(nu, other) for other in candidates)]
    if len(maxima) != 1:
        raise AssertionError(f"Collapse of {mu} is not unique: {maxima}")
    return maxima[0]

