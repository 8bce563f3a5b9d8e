"""
Concrete representations with exact generator matrices: the rank-one
Grassmannian module, the n-flag module, tensor space with its
hyperoctahedral symmetry, the rectified even-rank module, theta-twists,
singular vectors, the t-element and the faithfulness machinery.
"""

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from algebra import (GenToken, cartan_hprime, chain_element, evaluate, monomial_m)
from exactnum import (CapExceeded, ONE, ZERO, RowEchelon, SparseMatrix, block_diag, commutant_dimension,
                      coordinates, evaluate_polynomial, format_rational, kernel_basis, minimal_polynomial,
                      poly_from_roots, poly_to_string, rational_roots, spanned_algebra_dimension,
                      span_rank)
from indexing import ThetaMatrix, co, enumerate_labels, idempotent_shift, monomial_chain, ro, weight_class
from partitions import as_eps
from utils import DEFAULT_LIMITS, parse_key_values


class RepModule:
    """
    Finite-dimensional module: labeled basis, a weight per basis vector and
    exact matrices for e_i and h_i (1 <= i <= n-1). f_i is read as e_{n-i};
    h'_i and idempotents are derived on demand.
    """

    def __init__(self, name, n, labels, weights, e_matrices, h_matrices, params=None):
        self.name = name
        self.n = n
        self.labels = list(labels)
        self.weights = [tuple(w) for w in weights]
        self.e_matrices: Dict[int, SparseMatrix] = dict(e_matrices)
        self.h_matrices: Dict[int, SparseMatrix] = dict(h_matrices)
        self.params = dict(params or {})
        self._cache: Dict[GenToken, SparseMatrix] = {}

        size = len(self.labels)
        if len(self.weights) != size:
            raise ValueError(f"{name}: {len(self.weights)} weights for {size} basis vectors")
        for i in range(1, n):
            for kind, table in (("e", self.e_matrices), ("h", self.h_matrices)):
                if i not in table:
                    raise ValueError(f"{name}: missing matrix for {kind}{i}")
                if table[i].shape != (size, size):
                    raise ValueError(f"{name}: {kind}{i} has shape {table[i].shape}, expected {size}x{size}")

    @property
    def dimension(self) -> int:
        return len(self.labels)

    def token_matrix(self, token: GenToken) -> SparseMatrix:
        if token in self._cache:
            return self._cache[token]
        if token.kind == "e":
            matrix = self._lookup(self.e_matrices, token.index, "e")
        elif token.kind == "f":
            matrix = self._lookup(self.e_matrices, self.n - token.index, "f")
        elif token.kind == "h":
            matrix = self._lookup(self.h_matrices, token.index, "h")
        elif token.kind == "hprime":
            if not 1 <= token.index <= self.n // 2:
                raise ValueError(f"{self.name}: no h'{token.index} for n={self.n}")
            matrix = evaluate(cartan_hprime(self.n)[token.index - 1], self)
        else:
            matrix = self.weight_projector(token.weight)
        self._cache[token] = matrix
        return matrix

    def _lookup(self, table, index, kind):
        if index not in table:
            raise ValueError(f"{self.name}: no generator matrix for {kind}{index}")
        return table[index]

    def weight_projector(self, weight) -> SparseMatrix:
        """Projector onto basis vectors whose weight lies in the class of weight (zero if absent)"""
        target = weight_class(weight)
        return SparseMatrix.diagonal([1 if weight_class(w) == target else 0 for w in self.weights])

    def generators(self) -> List[SparseMatrix]:
        return [self.e_matrices[i] for i in range(1, self.n)] + [self.h_matrices[i] for i in range(1, self.n)]

    def __repr__(self):
        return f"RepModule({self.name}, n={self.n}, dim={self.dimension})"


def direct_sum(modules: Sequence[RepModule], name: Optional[str] = None) -> RepModule:
    if not modules:
        raise ValueError("Direct sum of no modules")
    n = modules[0].n
    if any(m.n != n for m in modules):
        raise ValueError("Direct summands must share n")
    labels = [(k, label) for k, m in enumerate(modules) for label in m.labels]
    weights = [w for m in modules for w in m.weights]
    e_matrices = {i: block_diag(*[m.e_matrices[i] for m in modules]) for i in range(1, n)}
    h_matrices = {i: block_diag(*[m.h_matrices[i] for m in modules]) for i in range(1, n)}
    name = name or " + ".join(m.name for m in modules)
    return RepModule(name, n, labels, weights, e_matrices, h_matrices, {"summands": [m.name for m in modules]})


# ------------------------------------------------------------------ rank-one and n-flag modules


def grassmannian_module(v: int, eps) -> RepModule:
    """Basis [Gr_0..Gr_d]: e Gr_i = (i+1) Gr_{i+1}, f Gr_i = 2(d-i+1) Gr_{i-1}, h Gr_i = (3i-2d) Gr_i"""
    eps = as_eps(eps)
    if v < 0:
        raise ValueError("v must be nonnegative")
    if eps == -1 and v % 2:
        raise ValueError(f"No symplectic form in odd dimension v={v}")
    d = v // 2
    size = d + 1
    e1 = SparseMatrix(size, size, {(i + 1, i): i + 1 for i in range(d)})
    e2 = SparseMatrix(size, size, {(i - 1, i): 2 * (d - i + 1) for i in range(1, d + 1)})
    h1 = SparseMatrix.diagonal([3 * i - 2 * d for i in range(size)])
    weights = [(i, 2 * d - 2 * i, i) for i in range(size)]
    return RepModule(f"grassmannian(v={v},eps={eps:+d})", 3, list(range(size)), weights,
                     {1: e1, 2: e2}, {1: h1, 2: -h1}, {"kind": "grassmannian", "v": v, "eps": eps})


def _flag_matrices(n: int, labels: Sequence[Tuple[int, ...]]):
    """e_i [F_d] = (d')_i [F_d'] with d' = d + delta_i + delta_{n+1-i} - delta_{i+1} - delta_{n-i}"""
    position = {label: k for k, label in enumerate(labels)}
    size = len(labels)
    e_matrices, h_matrices = {}, {}
    for i in range(1, n):
        entries = {}
        for k, label in enumerate(labels):
            target = idempotent_shift(label, i)
            if min(target) < 0 or target not in position:
                continue
            coefficient = target[i - 1]
            if coefficient:
                entries[(position[target], k)] = coefficient
        e_matrices[i] = SparseMatrix(size, size, entries)
        h_matrices[i] = SparseMatrix.diagonal([label[i - 1] - label[i] for label in labels])
    return e_matrices, h_matrices


def nflag_module(n: int, v: int, eps) -> RepModule:
    eps = as_eps(eps)
    if n % 2 == 0 and v % 2 and eps == 1:
        raise ValueError(f"No isotropic {n}-flags for n even, v={v} odd, eps=+1; use rectified_module")
    labels = enumerate_labels(n, v, eps)
    if not labels:
        raise ValueError(f"Empty label set for n={n}, v={v}, eps={eps:+d}")
    e_matrices, h_matrices = _flag_matrices(n, labels)
    return RepModule(f"nflag(n={n},v={v},eps={eps:+d})", n, labels, labels, e_matrices, h_matrices,
                     {"kind": "nflag", "n": n, "v": v, "eps": eps})


def rectified_module(n: int, v: int) -> RepModule:
    """
    Rank-n module for n even, v odd, eps=+1, cut out of nflag(n+1, v, +1) by
    middle label 0. e_r = e'_r e'_{r+1} - h'_r, h_r = 0, indices above r
    shift by one.
    """
    if n % 2 or n < 2 or v % 2 == 0:
        raise ValueError(f"rectified_module needs n even and v odd, got n={n}, v={v}")
    big = nflag_module(n + 1, v, 1)
    r = n // 2
    keep = [k for k, label in enumerate(big.labels) if label[r] == 0]
    if not keep:
        raise ValueError(f"No maximal isotropic labels for n={n}, v={v}")

    def restrict(matrix: SparseMatrix) -> SparseMatrix:
        return matrix.submatrix(keep, keep)

    size = len(keep)
    e_matrices, h_matrices = {}, {}
    for i in range(1, n):
        if i < r:
            e_matrices[i] = restrict(big.e_matrices[i])
            h_matrices[i] = restrict(big.h_matrices[i])
        elif i == r:
            e_matrices[i] = restrict(big.e_matrices[r] @ big.e_matrices[r + 1] - big.h_matrices[r])
            h_matrices[i] = SparseMatrix.zeros(size)
        else:
            e_matrices[i] = restrict(big.e_matrices[i + 1])
            h_matrices[i] = -restrict(big.h_matrices[n - i])
    labels = [big.labels[k] for k in keep]
    weights = [label[:r] + label[r + 1:] for label in labels]
    return RepModule(f"rectified(n={n},v={v})", n, labels, weights, e_matrices, h_matrices,
                     {"kind": "rectified", "n": n, "v": v, "eps": 1})


def twist_by_theta(module: RepModule) -> RepModule:
    """x acts as theta(x): e_i by the old f_i, h_i by -h_i, weights negated"""
    n = module.n
    e_matrices = {i: module.e_matrices[n - i] for i in range(1, n)}
    h_matrices = {i: -module.h_matrices[i] for i in range(1, n)}
    weights = [tuple(-x for x in w) for w in module.weights]
    params = dict(module.params, twisted=True)
    return RepModule(f"theta-twist({module.name})", n, module.labels, weights, e_matrices, h_matrices, params)


# ------------------------------------------------------------------ tensor space


def _leibniz(single: SparseMatrix, n: int, d: int) -> SparseMatrix:
    total = SparseMatrix.zeros(n ** d)
    for k in range(d):
        left = SparseMatrix.identity(n ** k)
        right = SparseMatrix.identity(n ** (d - k - 1))
        total = total + left.kron(single).kron(right)
    return total


def _tensor_labels(n: int, d: int, cap: Optional[int]):
    cap = DEFAULT_LIMITS["tensor_cap"] if cap is None else cap
    if n < 2 or d < 1:
        raise ValueError(f"Tensor space needs n >= 2 and d >= 1, got n={n}, d={d}")
    if n ** d > cap:
        raise CapExceeded(f"(Q^{n})^(x{d}) has dimension {n ** d} > cap {cap}")
    return list(itertools.product(range(1, n + 1), repeat=d))


def tensor_module(n: int, d: int, cap: Optional[int] = None) -> RepModule:
    """(Q^n)^{x d} with e_{i,theta} = E_{i,i+1} + E_{n+1-i,n-i} acting on each factor"""
    labels = _tensor_labels(n, d, cap)
    weights = []
    for label in labels:
        counts = [label.count(k) for k in range(1, n + 1)]
        weights.append(tuple(counts[k] + counts[n - 1 - k] for k in range(n)))
    e_matrices, h_matrices = {}, {}
    for i in range(1, n):
        single_e = SparseMatrix(n, n, {(i - 1, i): 1, (n - i, n - i - 1): 1})
        single_h = SparseMatrix.from_triplets(n, n, [
            (i - 1, i - 1, 1), (i, i, -1), (n - i - 1, n - i - 1, -1), (n - i, n - i, 1),
        ])
        e_matrices[i] = _leibniz(single_e, n, d)
        h_matrices[i] = _leibniz(single_h, n, d)
    return RepModule(f"tensor(n={n},d={d})", n, labels, weights, e_matrices, h_matrices,
                     {"kind": "tensor", "n": n, "d": d})


def hyperoctahedral_generators(n: int, d: int, cap: Optional[int] = None) -> List[SparseMatrix]:
    """Adjacent factor swaps, then the sign-node involution J on the first factor and its conjugates"""
    labels = _tensor_labels(n, d, cap)
    position = {label: k for k, label in enumerate(labels)}
    size = len(labels)
    generators = []
    for k in range(d - 1):
        entries = {}
        for p, label in enumerate(labels):
            swapped = list(label)
            swapped[k], swapped[k + 1] = swapped[k + 1], swapped[k]
            entries[(position[tuple(swapped)], p)] = 1
        generators.append(SparseMatrix(size, size, entries))
    for k in range(d):
        entries = {}
        for p, label in enumerate(labels):
            flipped = list(label)
            flipped[k] = n + 1 - flipped[k]
            entries[(position[tuple(flipped)], p)] = 1
        generators.append(SparseMatrix(size, size, entries))
    return generators


def double_centralizer_check(n: int, d: int, cap: Optional[int] = None):
    """(image dimension of U(sl_n^theta), commutant dimension of W_{B_d}, equal)"""
    module = tensor_module(n, d, cap)
    image_dim = spanned_algebra_dimension(module.generators())
    commutant_dim = commutant_dimension(hyperoctahedral_generators(n, d, cap))
    return image_dim, commutant_dim, image_dim == commutant_dim


# ------------------------------------------------------------------ singular vectors


@dataclass
class SingularSpace:
    weight: Tuple[int, ...]
    omega: Tuple[Fraction, ...]
    omega_prime: Tuple[Fraction, ...]
    basis: List[Dict[object, Fraction]]

    def to_json(self):
        return {
            "weight": list(self.weight),
            "omega": [format_rational(x) for x in self.omega],
            "omega_prime": [format_rational(x) for x in self.omega_prime],
            "dimension": len(self.basis),
            "basis": [[[_jsonable(label), format_rational(c)] for label, c in vector.items()]
                      for vector in self.basis],
        }


@dataclass
class SingularVectorReport:
    module: str
    spaces: List[SingularSpace] = field(default_factory=list)
    findings: List[str] = field(default_factory=list)

    def highest_weights(self):
        """Sorted distinct (omega, omega') pairs as integer tuples"""
        pairs = set()
        for space in self.spaces:
            pairs.add((tuple(int(x) for x in space.omega), tuple(int(x) for x in space.omega_prime)))
        return sorted(pairs)

    def to_json(self):
        return {
            "module": self.module,
            "spaces": [space.to_json() for space in self.spaces],
            "highest_weights": [[list(a), list(b)] for a, b in self.highest_weights()],
            "findings": list(self.findings),
        }


def _row_times(row: Dict[int, Fraction], matrix: SparseMatrix) -> Dict[int, Fraction]:
    rows = matrix.rows_dict()
    out: Dict[int, Fraction] = {}
    for k, value in row.items():
        for c, entry in rows.get(k, {}).items():
            total = out.get(c, ZERO) + value * entry
            if total:
                out[c] = total
            else:
                out.pop(c, None)
    return out


def _invariant_annihilated_space(size, annihilators, operators):
    """Largest operator-invariant subspace killed by every annihilator (block coordinates)"""
    echelon = RowEchelon()
    independent_rows = []
    queue = []
    for matrix in annihilators:
        for _, row in sorted(matrix.rows_dict().items()):
            added, _ = echelon.add(row)
            if added:
                independent_rows.append(row)
                queue.append(row)
    while queue:
        row = queue.pop()
        for op in operators:
            product = _row_times(row, op)
            if not product:
                continue
            added, _ = echelon.add(product)
            if added:
                independent_rows.append(product)
                queue.append(product)
    if not independent_rows:
        return [tuple(ONE if i == j else ZERO for i in range(size)) for j in range(size)]
    system = SparseMatrix(len(independent_rows), size,
                          {(r, c): v for r, row in enumerate(independent_rows) for c, v in row.items()})
    return kernel_basis(system)


def _as_dict(vector: Sequence[Fraction]) -> Dict[int, Fraction]:
    return {k: v for k, v in enumerate(vector) if v}


def _split_by_operator(space, operator, findings, context):
    """Eigenspaces of operator on an invariant subspace with rational eigenvalues"""
    basis = [_as_dict(u) for u in space]
    dim = len(basis)
    columns = []
    for u in basis:
        image = operator.apply(u)
        coords = coordinates(basis, image)
        if coords is None:
            raise AssertionError(f"{context}: subspace is not invariant")
        columns.append(coords)
    restricted = SparseMatrix(dim, dim, {(i, j): columns[j][i] for j in range(dim) for i in range(dim)})
    pieces = []
    found = 0
    for value in rational_roots(minimal_polynomial(restricted)):
        shifted = restricted - SparseMatrix.identity(dim).scale(value)
        vectors = []
        for coeffs in kernel_basis(shifted):
            combined = [ZERO] * len(space[0])
            for c, u in zip(coeffs, space):
                if c:
                    for k, x in enumerate(u):
                        combined[k] += c * x
            vectors.append(tuple(combined))
        found += len(vectors)
        pieces.append((value, vectors))
    if found < dim:
        findings.append(f"{context}: {dim - found} dimensions without rational eigenvectors")
    return pieces


def singular_vectors(module: RepModule) -> SingularVectorReport:
    """
    Joint eigenvectors of h_i, h'_i (i <= r) killed by e_i for i <= r
    (i < r when n is even), computed weight space by weight space.
    """
    n = module.n
    r = n // 2
    annihilator_indices = [i for i in range(1, r + 1) if not (n % 2 == 0 and i == r)]
    annihilators = [module.token_matrix(GenToken("e", i)) for i in annihilator_indices]
    operators = [module.token_matrix(GenToken("h", i)) for i in range(1, r + 1)]
    operators += [module.token_matrix(GenToken("hprime", i)) for i in range(1, r + 1)]

    blocks: Dict[Tuple[int, ...], List[int]] = {}
    for k, w in enumerate(module.weights):
        blocks.setdefault(w, []).append(k)

    report = SingularVectorReport(module.name)
    for weight in sorted(blocks):
        block = blocks[weight]
        block_annihilators = [a.submatrix(list(range(module.dimension)), block) for a in annihilators]
        block_operators = [op.submatrix(block, block) for op in operators]
        space = _invariant_annihilated_space(len(block), block_annihilators, block_operators)
        if not space:
            continue
        pieces = [((), space)]
        for index, op in enumerate(block_operators):
            refined = []
            for values, sub in pieces:
                for value, vectors in _split_by_operator(sub, op, report.findings, f"weight {weight}, operator {index}"):
                    if vectors:
                        refined.append((values + (value,), vectors))
            pieces = refined
        for values, vectors in pieces:
            basis = [{module.labels[block[k]]: x for k, x in enumerate(u) if x} for u in vectors]
            report.spaces.append(SingularSpace(weight, values[:r], values[r:], basis))
    return report


def expected_highest_weights(n: int, v: int, twisted: bool = False):
    """(omega, omega') of the n-flag module (or its theta-twist) at level v"""
    if n < 2:
        raise ValueError("n must be at least 2")
    d = v // 2
    r = n // 2
    zeros = [0] * r
    if n == 2:
        return (0,), (d,)
    if n % 2:
        if twisted:
            top = tuple(zeros[:-1] + [2 * d])
            return top, top
        return tuple([d] + zeros[1:]), tuple([2 * d] + zeros[1:])
    if twisted:
        omega = list(zeros)
        omega[r - 2] = d
        return tuple(omega), tuple(zeros[:-2] + [-d, d])
    # n even untwisted: matched against singular_vectors of nflag_module(4, v, eps), not a stated formula
    # (DESIGN.md findings)
    return tuple([d] + zeros[1:]), tuple([d] + zeros[1:])


# ------------------------------------------------------------------ t-element


def t_element_matrix(v: int, eps) -> SparseMatrix:
    """(e f - h) on the top label [Gr_d] of the rank-one module, as a 1x1 matrix"""
    module = grassmannian_module(v, eps)
    d = v // 2
    full = module.e_matrices[1] @ module.e_matrices[2] - module.h_matrices[1]
    return full.submatrix([d], [d])


def t_weight_space_matrix(d: int, cap: Optional[int] = None) -> SparseMatrix:
    """e_1 f_1 - h_1 of (Q^3)^{x d} restricted to the weight space (d, 0, d)"""
    if d < 0:
        raise ValueError("d must be nonnegative")
    if d == 0:
        return SparseMatrix.zeros(1)
    module = tensor_module(3, d, cap)
    block = [k for k, w in enumerate(module.weights) if w == (d, 0, d)]
    full = module.e_matrices[1] @ module.e_matrices[2] - module.h_matrices[1]
    return full.submatrix(block, block)


def t_target_polynomial(d: int):
    return poly_from_roots([d - 2 * k for k in range(d + 1)])


def t_element_report(v: int, eps):
    d = v // 2
    t = t_element_matrix(v, eps)
    target = t_target_polynomial(d)
    weight_space = t_weight_space_matrix(d)
    minpoly = minimal_polynomial(weight_space)
    report = {
        "v": v,
        "eps": as_eps(eps),
        "d": d,
        "top_eigenvalue": format_rational(t.get(0, 0)),
        "weight_space_dimension": weight_space.shape[0],
        "minimal_polynomial": poly_to_string(minpoly),
        "target": poly_to_string(target),
        "weight_space_exact": tuple(minpoly) == tuple(target),
        "annihilates": evaluate_polynomial(target, weight_space).is_zero(),
    }
    report["passed"] = t.get(0, 0) == d and report["weight_space_exact"] and report["annihilates"]
    return report


def t_min_poly_check(v: int, eps) -> bool:
    return t_element_report(v, eps)["passed"]


# ------------------------------------------------------------------ faithfulness


def faithfulness_polynomial(a: int, b: int, c: int):
    """P_{a,b,c}(y, d) = 2^{a+c} prod (d-(y-c+b-l)) prod (y-c+k) prod (d-(y-j))"""
    if min(a, b, c) < 0:
        raise ValueError("Exponents must be nonnegative")

    def evaluate_at(y, d) -> Fraction:
        value = Fraction(2) ** (a + c)
        for l in range(1, a + 1):
            value *= d - (y - c + b - l)
        for k in range(1, b + 1):
            value *= y - c + k
        for j in range(1, c + 1):
            value *= d - (y - j)
        return value

    return evaluate_at


def _path_in_range(a: int, b: int, c: int, y: int, d: int) -> bool:
    """Whether f^a e^b f^c walks Gr_y through indices inside 0..d"""
    return y - c >= 0 and y - c + b <= d and y - c + b - a >= 0


def monomial_action(a: int, b: int, c: int, y: int, d: int) -> Fraction:
    """Coefficient of m_{a,b,c} on [Gr_y]: P_{a,b,c}(y, d) if the path stays in range, else 0"""
    if not 0 <= y <= d or not _path_in_range(a, b, c, y, d):
        return ZERO
    return faithfulness_polynomial(a, b, c)(y, d)


def faithfulness_consistency(a: int, b: int, c: int, v: int, eps) -> bool:
    """Closed form against the composed operators of the rank-one module"""
    module = grassmannian_module(v, eps)
    d = v // 2
    for y in range(d + 1):
        operator = evaluate(monomial_m(a, b, c, module.weights[y]), module)
        column = operator.column(y)
        expected = monomial_action(a, b, c, y, d)
        target = y - a + b - c
        if expected:
            if column != {target: expected}:
                return False
        elif column:
            return False
    return True


def faithfulness_report(family: Sequence[Tuple[int, int, int]], max_level: Optional[int] = None, weight=None,
                        residue: int = 0, eps=1):
    """
    Certify linear independence of m_{a,b,c;lambda} over a weight-homogeneous
    family from the composed module operators on [Gr_y], over increasing levels
    until full rank. With a weight, only points whose weight lies in its class
    are used and the idempotent is that class. Without one, the levels are
    those with 2d = |lambda| mod 6 for |lambda| = residue and each point is
    taken with the idempotent of its own weight.
    """
    max_level = DEFAULT_LIMITS["faithfulness_max_level"] if max_level is None else max_level
    eps = as_eps(eps)
    members = [tuple(int(x) for x in triple) for triple in family]
    if not members:
        raise ValueError("Empty family")
    if len(set(members)) != len(members):
        raise ValueError("Family members must be distinct")
    if any(len(m) != 3 or min(m) < 0 for m in members):
        raise ValueError("Members must be triples of naturals")
    shifts = {a - b + c for a, b, c in members}
    if len(shifts) != 1:
        raise ValueError(f"Family is not weight-homogeneous: a-b+c takes values {sorted(shifts)}")
    shift = shifts.pop()
    if weight is None:
        if residue % 2:
            raise ValueError(f"Weights of the rank-one modules have even size; residue {residue} is odd")
        target_class = None
    else:
        target_class = weight_class(weight)
        if len(target_class) != 3:
            raise ValueError(f"Weight {tuple(weight)} is not a composition of length 3")

    result = {"family": [list(m) for m in members], "mode": "level" if target_class is None else "class"}
    if target_class is None:
        result["residue"] = residue % 6
    else:
        result["weight"] = list(target_class)
    echelon = RowEchelon()
    d_used = 0
    for d in range(max_level // 2 + 1):
        if target_class is None and (2 * d - residue) % 6:
            continue
        module = grassmannian_module(2 * d, eps)
        points = [y for y in range(d + 1) if target_class is None or weight_class(module.weights[y]) == target_class]
        if not points:
            continue
        d_used = d
        for y in points:
            idempotent = module.weights[y] if target_class is None else target_class
            row = {}
            for k, (a, b, c) in enumerate(members):
                value = evaluate(monomial_m(a, b, c, idempotent), module).column(y).get(y - shift, ZERO)
                if value:
                    row[k] = value
            echelon.add(row)
        if len(echelon) == len(members):
            break
    result.update(independent=len(echelon) == len(members), rank=len(echelon), d_used=d_used)
    return result


def faithfulness_check(family, max_level: Optional[int] = None, weight=None, residue: int = 0, eps=1) -> bool:
    return faithfulness_report(family, max_level, weight, residue, eps)["independent"]


# ------------------------------------------------------------------ basis proxy


def _off_diagonal_patterns(n: int, max_entry: int):
    positions = []
    for i in range(n):
        for j in range(n):
            if i != j and (i, j) <= (n - 1 - i, n - 1 - j):
                positions.append((i, j))
    for values in itertools.product(range(max_entry + 1), repeat=len(positions)):
        rows = [[0] * n for _ in range(n)]
        for (i, j), value in zip(positions, values):
            rows[i][j] = value
            rows[n - 1 - i][n - 1 - j] = value
        yield rows


def _stabilized(rows, target_co, n: int, attempts: int) -> Optional[ThetaMatrix]:
    """Smallest A = rows + diagonal with co(A) in the class of target_co whose chain exists"""
    col_sums = [sum(rows[i][j] for i in range(n)) for j in range(n)]
    diag = [target_co[j] - col_sums[j] for j in range(n)]
    shift = max(0, (1 - min(diag)) // 2)
    for k in range(shift, shift + attempts):
        padded = [[rows[i][j] + (diag[i] + 2 * k if i == j else 0) for j in range(n)] for i in range(n)]
        if any(padded[i][i] < 0 for i in range(n)):
            continue
        candidate = ThetaMatrix.from_rows(padded)
        try:
            monomial_chain(candidate)
        except ValueError:
            continue
        return candidate
    return None


def _realizable(a: ThetaMatrix, classes) -> bool:
    """Whether both margins and every intermediate column margin of the chain of A are weights of the proxy"""
    if weight_class(co(a)) not in classes or weight_class(ro(a)) not in classes:
        return False
    return all(weight_class(co(g)) in classes for g in monomial_chain(a))


def basis_proxy_check(n: int, max_entry: int = 2, max_degree: Optional[int] = None):
    """
    Evaluate chain elements of all classes with off-diagonal entries <= max_entry
    on the direct sum of tensor modules d <= max_degree; within each margin
    pair the evaluations should be linearly independent. Elements passing
    through a weight class the proxy lacks act as zero there and are skipped.
    """
    max_degree = DEFAULT_LIMITS["basis_proxy_degree"] if max_degree is None else max_degree
    total = direct_sum([tensor_module(n, d) for d in range(1, max_degree + 1)])
    present = {weight_class(w) for w in total.weights}
    classes = sorted(present)
    groups: Dict[Tuple[Tuple[int, ...], Tuple[int, ...]], List[Dict]] = {}
    skipped = unrealizable = 0
    for rows in _off_diagonal_patterns(n, max_entry):
        for target in classes:
            a = _stabilized(rows, target, n, attempts=2 * n * (max_entry + 1) + 4)
            if a is None:
                skipped += 1
                continue
            if not _realizable(a, present):
                unrealizable += 1
                continue
            key = (weight_class(co(a)), weight_class(ro(a)))
            operator = evaluate(chain_element(a), total)
            groups.setdefault(key, []).append(operator.vector_key())
    summary, deficient = [], []
    for (co_class, ro_class), vectors in sorted(groups.items()):
        entry = {"co": list(co_class), "ro": list(ro_class), "size": len(vectors), "rank": span_rank(vectors)}
        summary.append(entry)
        if entry["rank"] < entry["size"]:
            deficient.append(entry)
    return {
        "n": n,
        "max_entry": max_entry,
        "max_degree": max_degree,
        "module_dimension": total.dimension,
        "groups": summary,
        "deficient": deficient,
        "skipped": skipped,
        "unrealizable": unrealizable,
        "independent": not deficient,
    }


# ------------------------------------------------------------------ serialization


def _jsonable(label):
    if isinstance(label, tuple):
        return [_jsonable(x) for x in label]
    return label


def _from_jsonable(label):
    if isinstance(label, list):
        return tuple(_from_jsonable(x) for x in label)
    return label


def dump_module(module: RepModule):
    return {
        "name": module.name,
        "n": module.n,
        "labels": [_jsonable(label) for label in module.labels],
        "weights": [list(w) for w in module.weights],
        "e": {str(i): module.e_matrices[i].to_triplets() for i in sorted(module.e_matrices)},
        "h": {str(i): module.h_matrices[i].to_triplets() for i in sorted(module.h_matrices)},
        "params": module.params,
    }


def load_module(data) -> RepModule:
    size = len(data["labels"])
    e_matrices = {int(i): SparseMatrix.from_triplets(size, size, t) for i, t in data["e"].items()}
    h_matrices = {int(i): SparseMatrix.from_triplets(size, size, t) for i, t in data["h"].items()}
    return RepModule(data["name"], int(data["n"]), [_from_jsonable(x) for x in data["labels"]],
                     [tuple(w) for w in data["weights"]], e_matrices, h_matrices, data.get("params"))


MODULE_KINDS = {
    "grassmannian": (("v", "eps"), lambda p: grassmannian_module(p["v"], p["eps"])),
    "nflag": (("n", "v", "eps"), lambda p: nflag_module(p["n"], p["v"], p["eps"])),
    "tensor": (("n", "d"), lambda p: tensor_module(p["n"], p["d"])),
    "rectified": (("n", "v"), lambda p: rectified_module(p["n"], p["v"])),
}


def parse_module_spec(text: str) -> RepModule:
    """"nflag:n=4,v=4,eps=-1" -> RepModule"""
    kind, _, rest = text.partition(":")
    kind = kind.strip()
    if kind not in MODULE_KINDS:
        raise ValueError(f"Unknown module kind {kind!r}; choose from {sorted(MODULE_KINDS)}")
    required, build = MODULE_KINDS[kind]
    params = parse_key_values(rest)
    missing = [key for key in required if key not in params]
    if missing:
        raise ValueError(f"Module spec {text!r} is missing {', '.join(missing)}")
    extra = sorted(set(params) - set(required))
    if extra:
        raise ValueError(f"Module spec {text!r} has unknown keys {', '.join(extra)}")
    return build(params)
