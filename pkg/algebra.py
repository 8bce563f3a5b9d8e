"""
The presented algebra U(sl_n^theta): generator tokens, formal word
combinations, the theta-involution, the defining relators, the Cartan
elements h' and evaluation into concrete modules.

Words are stored uncollapsed; equality is only ever tested by evaluating
on modules. In a word the rightmost token acts first.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Dict, List, Tuple

from exactnum import ONE, ZERO, SparseMatrix, format_rational, to_rational
from indexing import ThetaMatrix, band_of, co, idempotent_shift, monomial_chain, theta, weight_class

KINDS = ("e", "f", "h", "hprime", "idem")


@dataclass(frozen=True, order=True)
class GenToken:
    kind: str
    index: int = 0
    weight: Tuple[int, ...] = ()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"Unknown generator kind {self.kind!r}")
        if self.kind == "idem":
            object.__setattr__(self, "weight", weight_class(self.weight))
        elif self.index < 1:
            raise ValueError(f"Generator index must be positive, got {self.index}")

    def name(self) -> str:
        if self.kind == "idem":
            return "1[" + ",".join(str(x) for x in self.weight) + "]"
        return f"{self.kind}{self.index}"

    def to_json(self):
        if self.kind == "idem":
            return {"kind": "idem", "weight": list(self.weight)}
        return {"kind": self.kind, "index": self.index}

    @classmethod
    def from_json(cls, data):
        if data["kind"] == "idem":
            return cls("idem", 0, tuple(data["weight"]))
        return cls(data["kind"], int(data["index"]))


Word = Tuple[GenToken, ...]


def _check_token(token: GenToken, n: int):
    r = n // 2
    if token.kind in ("e", "f", "h") and not 1 <= token.index <= n - 1:
        raise ValueError(f"{token.name()} out of range for n={n}")
    if token.kind == "hprime" and not 1 <= token.index <= r:
        raise ValueError(f"{token.name()} out of range 1..{r}")
    if token.kind == "idem" and len(token.weight) != n:
        raise ValueError(f"Idempotent weight {token.weight} has wrong length for n={n}")


class AlgebraElement:
    """Finite rational combination of generator words"""

    def __init__(self, n: int, terms: Dict[Word, object] = None):
        if n < 2:
            raise ValueError("n must be at least 2")
        self.n = n
        self.terms: Dict[Word, Fraction] = {}
        for word, coeff in (terms or {}).items():
            word = tuple(word)
            for token in word:
                _check_token(token, n)
            q = to_rational(coeff)
            if q:
                self.terms[word] = self.terms.get(word, ZERO) + q
                if not self.terms[word]:
                    del self.terms[word]

    def _check_rank(self, other: "AlgebraElement"):
        if self.n != other.n:
            raise ValueError(f"Rank mismatch: n={self.n} vs n={other.n}")

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._check_rank(other)
        terms = dict(self.terms)
        for word, coeff in other.terms.items():
            terms[word] = terms.get(word, ZERO) + coeff
        return AlgebraElement(self.n, terms)

    def __neg__(self) -> "AlgebraElement":
        return self.scale(-1)

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self + (-other)

    def scale(self, scalar) -> "AlgebraElement":
        q = to_rational(scalar)
        return AlgebraElement(self.n, {word: coeff * q for word, coeff in self.terms.items()})

    def __mul__(self, other) -> "AlgebraElement":
        if not isinstance(other, AlgebraElement):
            return self.scale(other)
        self._check_rank(other)
        terms: Dict[Word, Fraction] = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                word = w1 + w2
                terms[word] = terms.get(word, ZERO) + c1 * c2
        return AlgebraElement(self.n, terms)

    def __rmul__(self, scalar) -> "AlgebraElement":
        return self.scale(scalar)

    def __pow__(self, k: int) -> "AlgebraElement":
        result = one(self.n)
        for _ in range(k):
            result = result * self
        return result

    def is_formally_zero(self) -> bool:
        return not self.terms

    def tokens(self):
        return {token for word in self.terms for token in word}

    def to_json(self):
        return [
            {"word": [token.to_json() for token in word], "coeff": format_rational(coeff)}
            for word, coeff in sorted(self.terms.items())
        ]

    @classmethod
    def from_json(cls, n: int, data) -> "AlgebraElement":
        terms: Dict[Word, Fraction] = {}
        for item in data:
            word = tuple(GenToken.from_json(t) for t in item["word"])
            terms[word] = terms.get(word, ZERO) + to_rational(item["coeff"])
        return cls(n, terms)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for word, coeff in sorted(self.terms.items()):
            body = "*".join(token.name() for token in word) or "1"
            parts.append(f"{format_rational(coeff)}*{body}")
        return " + ".join(parts)


def bracket(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    return x * y - y * x


def _single(n: int, token: GenToken) -> AlgebraElement:
    return AlgebraElement(n, {(token,): ONE})


def e(i: int, n: int) -> AlgebraElement:
    return _single(n, GenToken("e", i))


def f(i: int, n: int) -> AlgebraElement:
    """f_{i,theta}, identified with e_{theta(i),theta}"""
    return _single(n, GenToken("f", i))


def h(i: int, n: int) -> AlgebraElement:
    return _single(n, GenToken("h", i))


def hprime(i: int, n: int) -> AlgebraElement:
    return _single(n, GenToken("hprime", i))


def idem(weight, n: int) -> AlgebraElement:
    return _single(n, GenToken("idem", 0, tuple(weight)))


def one(n: int) -> AlgebraElement:
    return AlgebraElement(n, {(): ONE})


def to_e_form(x: AlgebraElement) -> AlgebraElement:
    """Rewrite every f_i as e_{theta(i)}"""
    terms: Dict[Word, Fraction] = {}
    for word, coeff in x.terms.items():
        rewritten = tuple(GenToken("e", theta(t.index, x.n)) if t.kind == "f" else t for t in word)
        terms[rewritten] = terms.get(rewritten, ZERO) + coeff
    return AlgebraElement(x.n, terms)


def cartan_hprime(n: int) -> List[AlgebraElement]:
    """[h'_1, ..., h'_r] expanded into words"""
    if n < 2:
        raise ValueError("n must be at least 2")
    r = n // 2
    top = bracket(e(r, n), f(r, n)) if n % 2 else e(r, n)
    elements = [top]
    for i in range(r - 1, 0, -1):
        elements.append(bracket(bracket(e(i, n), elements[-1]), f(i, n)))
    return elements[::-1]


def expand_hprime(x: AlgebraElement) -> AlgebraElement:
    """Replace every hprime token by its bracket expansion"""
    if not any(t.kind == "hprime" for t in x.tokens()):
        return x
    expansions = cartan_hprime(x.n)
    result = AlgebraElement(x.n)
    for word, coeff in x.terms.items():
        product = one(x.n)
        for token in word:
            product = product * (expansions[token.index - 1] if token.kind == "hprime" else _single(x.n, token))
        result = result + product.scale(coeff)
    return result


def _theta_token(token: GenToken, n: int) -> Tuple[GenToken, int]:
    if token.kind == "e":
        return GenToken("f", token.index), 1
    if token.kind == "f":
        return GenToken("e", token.index), 1
    if token.kind == "h":
        return token, -1
    return GenToken("idem", 0, tuple(-x for x in token.weight)), 1


def theta_involution(x: AlgebraElement) -> AlgebraElement:
    """e_i -> f_i, f_i -> e_i, h_i -> -h_i, 1_lambda -> 1_{-lambda}, extended multiplicatively"""
    x = expand_hprime(x)
    terms: Dict[Word, Fraction] = {}
    for word, coeff in x.terms.items():
        image, sign = [], 1
        for token in word:
            mapped, s = _theta_token(token, x.n)
            image.append(mapped)
            sign *= s
        key = tuple(image)
        terms[key] = terms.get(key, ZERO) + coeff * sign
    return AlgebraElement(x.n, terms)


@dataclass(frozen=True)
class Relator:
    element: AlgebraElement
    case_tag: str
    indices: Tuple[int, ...]

    def describe(self) -> str:
        return f"{self.case_tag}{self.indices}"


def cartan_entry(i: int, j: int) -> int:
    return 2 * (i == j) - (i == j + 1) - (i == j - 1)


def serre_relators(n: int, constant_shift: int = 0) -> List[Relator]:
    """
    Defining relators, each as lhs - rhs. constant_shift moves the constant of
    the nonhomogeneous Serre relations (-4 for n odd, +1 for n even).
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    indices = range(1, n)
    relators = []

    for i in indices:
        if i < theta(i, n):
            relators.append(Relator(h(i, n) + h(theta(i, n), n), "h-sum", (i, theta(i, n))))
        elif i == theta(i, n):
            relators.append(Relator(h(i, n), "h-sum", (i, i)))

    for i in indices:
        for j in indices:
            if i < j:
                relators.append(Relator(bracket(h(i, n), h(j, n)), "h-h", (i, j)))

    for i in indices:
        for j in indices:
            weight = cartan_entry(i, j) - cartan_entry(theta(i, n), j)
            relators.append(Relator(bracket(h(i, n), e(j, n)) - e(j, n).scale(weight), "h-e", (i, j)))

    for i in indices:
        for j in indices:
            if i != j and cartan_entry(i, j) == 0:
                rel = bracket(e(i, n), e(j, n))
                if i == theta(j, n):
                    rel = rel - h(i, n)
                relators.append(Relator(rel, "e-e", (i, j)))

    for i in indices:
        for j in indices:
            if cartan_entry(i, j) != -1:
                continue
            ei, ej = e(i, n), e(j, n)
            lhs = ei * ei * ej - (ei * ej * ei).scale(2) + ej * ei * ei
            if n % 2 and i == theta(j, n):
                relators.append(Relator(lhs - ei.scale(-4 + constant_shift), "serre-nonhomogeneous", (i, j)))
            elif n % 2 == 0 and i == theta(i, n):
                relators.append(Relator(lhs - ej.scale(1 + constant_shift), "serre-nonhomogeneous", (i, j)))
            else:
                relators.append(Relator(lhs, "serre", (i, j)))
    return relators


def evaluate(x: AlgebraElement, module) -> SparseMatrix:
    """Operator of x on module; words compose left to right as matrix products"""
    if x.n != module.n:
        raise ValueError(f"Element has n={x.n}, module has n={module.n}")
    size = module.dimension
    result = SparseMatrix.zeros(size)
    for word, coeff in x.terms.items():
        operator = SparseMatrix.identity(size)
        for token in word:
            operator = operator @ module.token_matrix(token)
            if operator.is_zero():
                break
        result = result + operator.scale(coeff)
    return result


def relations_check(n: int, module, constant_shift: int = 0):
    """Evaluate every relator on the module; failures carry their nonzero witness"""
    entries = []
    for relator in serre_relators(n, constant_shift):
        residual = evaluate(relator.element, module)
        entries.append({
            "case": relator.case_tag,
            "indices": list(relator.indices),
            "zero": residual.is_zero(),
            "witness": None if residual.is_zero() else residual.to_triplets(),
        })
    return {
        "n": n,
        "module": module.name,
        "dimension": module.dimension,
        "relators": entries,
        "failures": sum(1 for entry in entries if not entry["zero"]),
        "passed": all(entry["zero"] for entry in entries),
    }


def idempotent_checks(module):
    """1_a 1_b = delta 1_a and e_i 1_a = 1_{a+shift} e_i on the module"""
    n = module.n
    classes = sorted({weight_class(w) for w in module.weights})
    failures = []
    for a in classes:
        for b in classes:
            lhs = evaluate(idem(a, n) * idem(b, n), module)
            rhs = evaluate(idem(a, n), module) if a == b else SparseMatrix.zeros(module.dimension)
            if lhs != rhs:
                failures.append({"check": "orthogonal", "weights": [list(a), list(b)]})
    for i in range(1, n):
        for a in classes:
            shifted = idempotent_shift(a, i)
            if evaluate(e(i, n) * idem(a, n), module) != evaluate(idem(shifted, n) * e(i, n), module):
                failures.append({"check": "commute", "index": i, "weight": list(a)})
    return {"module": module.name, "classes": len(classes), "failures": failures, "passed": not failures}


def commuting_cartan_check(module) -> bool:
    """h_i (i <= r) and all h'_j commute pairwise on the module"""
    n = module.n
    r = n // 2
    operators = [module.token_matrix(GenToken("h", i)) for i in range(1, r + 1)]
    operators += [module.token_matrix(GenToken("hprime", j)) for j in range(1, r + 1)]
    for a in range(len(operators)):
        for b in range(a + 1, len(operators)):
            if not (operators[a] @ operators[b] - operators[b] @ operators[a]).is_zero():
                return False
    return True


def monomial_m(a: int, b: int, c: int, weight, n: int = 3) -> AlgebraElement:
    """f^a e^b f^c 1_lambda with e = e_1, f = f_1"""
    if min(a, b, c) < 0:
        raise ValueError("Exponents must be nonnegative")
    word = (GenToken("f", 1),) * a + (GenToken("e", 1),) * b + (GenToken("f", 1),) * c
    word += (GenToken("idem", 0, tuple(weight)),)
    return AlgebraElement(n, {word: ONE})


def chain_element(a: ThetaMatrix) -> AlgebraElement:
    """
    Product over the monomial chain of A: a band c E^theta_{p,p-1} gives the
    divided power f_{p-1}^c / c!, each factor followed by 1_{co(G)}.
    """
    n = a.n
    word: List[GenToken] = []
    scale = Fraction(1)
    for g in monomial_chain(a):
        row, amount = band_of(g)
        if row is not None and amount:
            word.extend([GenToken("f", row - 1)] * amount)
            scale /= factorial(amount)
        token = GenToken("idem", 0, co(g))
        if not word or word[-1] != token:
            word.append(token)
    return AlgebraElement(n, {tuple(word): scale})
