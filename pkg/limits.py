"""
Transfer maps between levels of the projective system, limit generator
families and their truncations, and consistency checks across levels.

A LimitElement is lazy: it carries a rule producing the finite signed label
combination at each level v = residue_v + 2nk. Labels pushed below level
zero become ZERO_SYMBOL and drop out of truncations.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple

from exactnum import SparseMatrix, format_rational, minimal_polynomial, rational_roots
from indexing import (ThetaClass, ThetaMatrix, admissible_residues, co, enumerate_theta_diagonals, level_sum, ro,
                      shift_class, theta, theta_elementary, weight_class)
from modules import t_element_matrix, t_weight_space_matrix
from partitions import as_eps
from utils import DEFAULT_LIMITS

Combination = Dict[ThetaMatrix, Fraction]

LIMIT_KINDS = ("e", "f", "h", "idem")
TRANSFER_VARIANTS = ("odd-orthogonal", "symplectic-even")


class ZeroSymbol:
    """Image of a label whose transfer leaves the natural matrices"""

    def __repr__(self):
        return "0"

    def to_json(self):
        return None


ZERO_SYMBOL = ZeroSymbol()


def transfer_2n(a: ThetaMatrix):
    """A - 2I, or ZERO_SYMBOL when an entry turns negative"""
    try:
        return shift_class(a, -1)
    except ValueError:
        return ZERO_SYMBOL


def transfer_n(a: ThetaMatrix, variant: str):
    """
    A - I for the one-step variants (n odd orthogonal, n even symplectic).
    The result carries no ambient level: A - I leaves the level congruence.
    """
    if variant not in TRANSFER_VARIANTS:
        raise ValueError(f"Unknown transfer variant {variant!r}; choose from {TRANSFER_VARIANTS}")
    n = a.n
    if variant == "odd-orthogonal" and n % 2 == 0:
        raise ValueError("odd-orthogonal transfer requires n odd")
    if variant == "symplectic-even" and n % 2:
        raise ValueError("symplectic-even transfer requires n even")
    rows = [[a.rows[i][j] - (1 if i == j else 0) for j in range(n)] for i in range(n)]
    if any(x < 0 for row in rows for x in row):
        return ZERO_SYMBOL
    return ThetaMatrix.from_rows(rows)


def residue_of(v: int, n: int) -> int:
    """Residue of v modulo 2n in the range 1..2n"""
    residue = v % (2 * n)
    return residue or 2 * n


def limit_label(a: ThetaMatrix, residue_v: int, eps=None) -> Tuple[ThetaMatrix, int]:
    """Minimal-diagonal representative of the class of A together with its residue"""
    residue = residue_of(residue_v, a.n)
    if eps is not None and residue not in admissible_residues(a.n, as_eps(eps)):
        raise ValueError(f"Residue {residue} is not admissible for n={a.n}, eps={as_eps(eps):+d}")
    return ThetaClass.of(a).representative.with_ambient(None), residue


@dataclass
class LimitElement:
    kind: str
    index: int
    n: int
    eps: int
    residue_v: int
    rule: Callable[[int], Combination]
    weight: Optional[Tuple[int, ...]] = None

    @property
    def name(self) -> str:
        if self.kind == "idem":
            return f"1_{list(self.weight)}"
        return f"{self.kind}{self.index}"

    def levels(self, horizon: Optional[int] = None) -> List[int]:
        """First horizon levels of the residue class, starting at the smallest nonnegative one"""
        horizon = DEFAULT_LIMITS["limit_horizon"] if horizon is None else horizon
        start = self.residue_v % (2 * self.n)
        return [start + 2 * self.n * k for k in range(horizon)]

    def truncate(self, v: int) -> Combination:
        if v < 0 or (v - self.residue_v) % (2 * self.n):
            raise ValueError(f"Level {v} is not congruent to {self.residue_v} mod {2 * self.n}")
        return self.rule(v)

    def to_json(self, horizon: Optional[int] = None):
        return {
            "name": self.name,
            "n": self.n,
            "eps": self.eps,
            "residue_v": self.residue_v,
            "levels": {
                str(v): [{"label": a.to_json()["rows"], "coeff": format_rational(c)}
                         for a, c in sorted(self.truncate(v).items(), key=lambda item: item[0].rows)]
                for v in self.levels(horizon)
            },
        }


def _with_band(diagonal: Tuple[int, ...], band, v: int) -> ThetaMatrix:
    n = len(diagonal)
    rows = [[(diagonal[i] if i == j else 0) + band[i][j] for j in range(n)] for i in range(n)]
    return ThetaMatrix.from_rows(rows, v)


def _odd_sign(a: ThetaMatrix, pivot: int, extra_index: int, i: int, v: int, eps: int) -> int:
    """(-1)^{a_pp + delta_{i,extra}(delta_{-1,(-1)^v} + 1 - delta_{1,eps})}"""
    exponent = a.a(pivot, pivot)
    if i == extra_index:
        exponent += (v % 2) + 1 - (1 if eps == 1 else 0)
    return -1 if exponent % 2 else 1


def _raising_terms(n: int, i: int, v: int, eps: int) -> Combination:
    """e_i at level v: sum over A with A - E^theta_{i,i+1} diagonal"""
    r = n // 2
    band = theta_elementary(n, i, i + 1)
    terms: Combination = {}
    for diagonal in enumerate_theta_diagonals(n, level_sum(v) - 2):
        a = _with_band(diagonal, band, v)
        if n % 2:
            sign = _odd_sign(a, i, r + 1, i, v, eps)
        else:
            exponent = a.a(i, i) - (1 if i == r and eps == 1 else 0)
            sign = -1 if exponent % 2 else 1
        terms[a] = Fraction(sign)
    if n % 2 == 0 and i == r:
        # extra diagonal terms: every diagonal with even middle pair, coefficient -1
        for diagonal in enumerate_theta_diagonals(n, level_sum(v)):
            if diagonal[r - 1] % 2 == 0:
                a = ThetaMatrix.diagonal(diagonal, v)
                terms[a] = terms.get(a, Fraction(0)) - 1
    return {a: c for a, c in terms.items() if c}


def _lowering_terms(n: int, i: int, v: int, eps: int) -> Combination:
    """f_i at level v for n odd: sum over A with A - E^theta_{i+1,i} diagonal"""
    r = n // 2
    band = theta_elementary(n, i + 1, i)
    terms: Combination = {}
    for diagonal in enumerate_theta_diagonals(n, level_sum(v) - 2):
        a = _with_band(diagonal, band, v)
        terms[a] = Fraction(_odd_sign(a, i + 1, r, i, v, eps))
    return terms


def _cartan_terms(n: int, i: int, v: int) -> Combination:
    terms: Combination = {}
    for diagonal in enumerate_theta_diagonals(n, level_sum(v)):
        value = diagonal[i - 1] - diagonal[i]
        if value:
            terms[ThetaMatrix.diagonal(diagonal, v)] = Fraction(value)
    return terms


def _idempotent_terms(n: int, weight: Tuple[int, ...], v: int) -> Combination:
    base = weight_class(weight)
    gap = level_sum(v) - sum(base)
    if gap < 0 or gap % (2 * n):
        return {}
    k = gap // (2 * n)
    return {ThetaMatrix.diagonal([x + 2 * k for x in base], v): Fraction(1)}


def limit_generator(kind: str, i: int, n: int, residue_v: int, eps, weight=None) -> LimitElement:
    """Signed family of e_i, f_i, h_i or the idempotent 1_weight in the projective limit"""
    eps = as_eps(eps)
    if kind not in LIMIT_KINDS:
        raise ValueError(f"Unknown generator kind {kind!r}; choose from {LIMIT_KINDS}")
    if n < 2:
        raise ValueError("n must be at least 2")
    residue = residue_of(residue_v, n)
    if residue not in admissible_residues(n, eps):
        raise ValueError(f"Residue {residue} is not admissible for n={n}, eps={eps:+d}")

    if kind == "idem":
        if weight is None:
            raise ValueError("Idempotent family needs a weight")
        weight = weight_class(weight)
        if len(weight) != n or any(weight[k] != weight[n - 1 - k] for k in range(n)):
            raise ValueError(f"Weight {weight} is not a symmetric composition of length {n}")
        return LimitElement(kind, 0, n, eps, residue, lambda v: _idempotent_terms(n, weight, v), weight)

    if not 1 <= i <= n - 1:
        raise ValueError(f"Index {i} out of range for n={n}")
    if kind == "h":
        rule = lambda v: _cartan_terms(n, i, v)
    elif kind == "e":
        rule = lambda v: _raising_terms(n, i, v, eps)
    elif n % 2 == 0:
        # f_i = e_{theta(i)} for n even
        rule = lambda v: _raising_terms(n, theta(i, n), v, eps)
    else:
        rule = lambda v: _lowering_terms(n, i, v, eps)
    return LimitElement(kind, i, n, eps, residue, rule)


def _transferred(combination: Combination) -> Combination:
    out: Combination = {}
    for a, c in combination.items():
        image = transfer_2n(a)
        if image is ZERO_SYMBOL:
            continue
        total = out.get(image, Fraction(0)) + c
        if total:
            out[image] = total
        else:
            out.pop(image, None)
    return out


def coherence_check(x: LimitElement, v: int) -> bool:
    """transfer_2n applied to the truncation at v + 2n equals the truncation at v, signs included"""
    return _transferred(x.truncate(v + 2 * x.n)) == x.truncate(v)


def coherence_report(x: LimitElement, levels: Optional[int] = None):
    checked = []
    for v in x.levels(levels):
        checked.append({"v": v, "terms": len(x.truncate(v)), "coherent": coherence_check(x, v)})
    return {
        "family": x.name,
        "n": x.n,
        "eps": x.eps,
        "residue_v": x.residue_v,
        "levels": checked,
        "passed": all(item["coherent"] for item in checked),
    }


def corrupted_family(x: LimitElement) -> LimitElement:
    """Copy of x whose signs flip with the level index; never coherent when x has terms"""
    def rule(v):
        flip = -1 if (v // (2 * x.n)) % 2 else 1
        return {a: c * flip for a, c in x.rule(v).items()}

    return LimitElement(x.kind, x.index, x.n, x.eps, x.residue_v, rule, x.weight)


def _basis_of_weight(module, weight) -> List[int]:
    weight = tuple(weight)
    return [k for k, w in enumerate(module.weights) if tuple(w) == weight]


def label_operator(a: ThetaMatrix, i: int, sign: int, module) -> SparseMatrix:
    """sign * ro(A)_i * E_{ro(A), co(A)} on the module basis vectors of those weights"""
    entries = {}
    for p in _basis_of_weight(module, ro(a)):
        for q in _basis_of_weight(module, co(a)):
            entries[(p, q)] = sign * ro(a)[i - 1]
    return SparseMatrix(module.dimension, module.dimension, entries)


def convolution_sign(a: ThetaMatrix, kind: str, i: int, v: int, eps) -> int:
    """
    (-1)^{dim of the fibre} of the conormal correspondence labelled by A when
    it convolves with a fundamental class. The fibre is a projective space of
    dimension a_pp at the pivot step p, or the isotropic lines of the middle
    piece, of dimension m - 1 - delta_{1,eps} with m = a_pp + 2 actual
    dimensions, when the pivot is the middle step of an odd flag.
    """
    eps = as_eps(eps)
    n = a.n
    if kind not in ("e", "f"):
        raise ValueError(f"Only e and f labels carry a convolution sign, got {kind!r}")
    if n % 2 == 0:
        if kind == "f":
            kind, i = "e", theta(i, n)
        if i == n // 2:
            raise ValueError("The middle generator for n even has no label-wise operator assignment")
    pivot = i if kind == "e" else i + 1
    if n % 2 and pivot == n // 2 + 1:
        m = a.a(pivot, pivot) + 2 + (1 if eps == 1 and v % 2 else 0)
        dimension = m - 1 - (1 if eps == 1 else 0)
    else:
        dimension = a.a(pivot, pivot)
    return -1 if dimension % 2 else 1


def truncation_operator(x: LimitElement, v: int, module) -> SparseMatrix:
    """
    Evaluate the truncation of x at v on a module: diagonal labels act as
    coefficient times weight projectors, band labels through label_operator
    with the convolution sign of the label.
    """
    if x.n % 2 == 0 and x.kind in ("e", "f") and x.index == x.n // 2:
        raise ValueError("The middle generator for n even has no label-wise operator assignment")
    size = module.dimension
    total = SparseMatrix.zeros(size)
    for a, c in x.truncate(v).items():
        if a.is_diagonal():
            projector = SparseMatrix(size, size, {(k, k): 1 for k in _basis_of_weight(module, co(a))})
            total = total + projector.scale(c)
            continue
        sign = convolution_sign(a, x.kind, x.index, v, x.eps)
        index = x.index if x.kind == "e" else x.index + 1
        total = total + label_operator(a, index, sign, module).scale(c)
    return total


def _spectrum(d: int) -> List[Fraction]:
    return rational_roots(minimal_polynomial(t_weight_space_matrix(d)))


def spectral_transfer_report(v: int, eps):
    """
    The spectrum of t at level v is {-d, -d+2, ..., d}; two transfer steps keep
    the rest and lose {d, -d}; for eps=-1 one step sends X to -(X+1)
    onto a superset of the spectrum one level down.
    """
    eps = as_eps(eps)
    if v < 4:
        raise ValueError("Spectral transfer needs v >= 4")
    d = v // 2
    expected = [Fraction(d - 2 * k) for k in range(d + 1)][::-1]
    spectrum = _spectrum(d)
    minpoly = minimal_polynomial(t_weight_space_matrix(d))
    top = t_element_matrix(v, eps).get(0, 0)
    lower = _spectrum(d - 2)
    leftover = sorted(set(spectrum) - set(lower))
    report = {
        "v": v,
        "eps": eps,
        "d": d,
        "spectrum": [format_rational(x) for x in spectrum],
        "spectrum_exact": spectrum == expected and len(minpoly) - 1 == d + 1,
        "top_eigenvalue_in_spectrum": top in spectrum,
        "two_step_contains_lower": set(lower) <= set(spectrum),
        "two_step_leftover": [format_rational(x) for x in leftover],
    }
    passed = (report["spectrum_exact"] and report["top_eigenvalue_in_spectrum"]
              and report["two_step_contains_lower"] and leftover == sorted({Fraction(-d), Fraction(d)}))
    if eps == -1:
        image = {-(x + 1) for x in spectrum}
        report["one_step_contains_lower"] = set(_spectrum(d - 1)) <= image
        passed = passed and report["one_step_contains_lower"]
    report["passed"] = passed
    return report


def spectral_transfer_check(v: int, eps) -> bool:
    return spectral_transfer_report(v, eps)["passed"]
