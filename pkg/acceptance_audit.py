"""
Acceptance suite: eleven exact checks over desk-scale parameter grids.
Each criterion returns a result dict; the runner collects them sequentially
or over a process pool and prints a pass/fail line per criterion.
"""

import itertools
import multiprocessing
import time
from concurrent.futures import ProcessPoolExecutor, as_completed

from algebra import relations_check
from indexing import (ThetaMatrix, a_eps, actual_dims, enumerate_labels, enumerate_theta, flag_dimension, level_sum,
                      shift_class)
from limits import (ZERO_SYMBOL, coherence_check, corrupted_family, limit_generator, spectral_transfer_check,
                    transfer_2n, transfer_n)
from modules import (basis_proxy_check, double_centralizer_check, expected_highest_weights, faithfulness_check,
                     faithfulness_consistency, faithfulness_report, grassmannian_module, nflag_module, rectified_module,
                     singular_vectors, t_min_poly_check, tensor_module, twist_by_theta)
from partitions import (ambient_dim, centralizer_dimension_oracle, enumerate_eps_partitions, eps_collapse,
                        nilcone_description, orbit_dimension)
from utils import create_progress_bar, format_duration, log_progress, status_mark

EPSILONS = (1, -1)
FAITHFULNESS_RESIDUES = (0, 2, 4)
FAITHFULNESS_CLASSES = ((0, 0, 0), (0, 2, 0), (1, 0, 1))


def _levels(max_v, eps):
    """Levels 0..max_v carrying a form of sign eps"""
    return [v for v in range(max_v + 1) if not (eps == -1 and v % 2)]


class _Tally:
    """Counts checks and keeps the first few failures"""

    def __init__(self, limit=20):
        self.checks = 0
        self.failures = []
        self.findings = []
        self.limit = limit

    def record(self, ok, description):
        self.checks += 1
        if not ok and len(self.failures) < self.limit:
            self.failures.append(description)
        return ok

    def result(self, number):
        return {
            "criterion": number,
            "title": CRITERIA[number][0],
            "checks": self.checks,
            "failures": list(self.failures),
            "findings": list(self.findings),
            "passed": not self.failures,
        }


def check_orbit_dimensions():
    tally = _Tally()
    for eps in EPSILONS:
        for v in _levels(8, eps):
            if v == 0:
                continue
            for mu in enumerate_eps_partitions(v, eps):
                expected = ambient_dim(v, eps) - centralizer_dimension_oracle(mu, eps)
                tally.record(orbit_dimension(mu, eps) == expected, f"dim O_{list(mu)} eps={eps:+d}")
    return tally.result(1)


def check_nilcone_table():
    tally = _Tally()
    for n in range(2, 7):
        for eps in EPSILONS:
            for v in _levels(12, eps):
                if v == 0:
                    continue
                description = nilcone_description(n, v, eps)
                k, l = divmod(v, n)
                if description.very_even:
                    ok = description.components == ((n,) * k, (n,) * k)
                else:
                    ok = description.components == (eps_collapse((n,) * k + (l,), eps),)
                tally.record(ok, f"nilcone n={n} v={v} eps={eps:+d}")
    return tally.result(2)


def _presentation_modules():
    for eps in EPSILONS:
        for v in _levels(10, eps):
            yield grassmannian_module(v, eps)
    for n in (3, 4, 5):
        for eps in EPSILONS:
            for v in _levels(8, eps):
                if n % 2 == 0 and v % 2:
                    continue
                yield nflag_module(n, v, eps)
    for n in (2, 4):
        for v in (3, 5):
            yield rectified_module(n, v)
    for n in range(2, 6):
        for d in range(1, 4):
            yield tensor_module(n, d)


def check_presentation():
    tally = _Tally()
    for module in _presentation_modules():
        report = relations_check(module.n, module)
        tally.record(report["passed"], f"{module.name}: {report['failures']} relators nonzero")
    return tally.result(3)


def _perturbation_fails(module):
    """Every nonhomogeneous relator must leave a residual once its constant moves by one"""
    for shift in (1, -1):
        report = relations_check(module.n, module, constant_shift=shift)
        nonhomogeneous = [entry for entry in report["relators"] if entry["case"] == "serre-nonhomogeneous"]
        if not nonhomogeneous or any(entry["zero"] for entry in nonhomogeneous):
            return False
    return True


def check_serre_constants():
    tally = _Tally()
    controls = [grassmannian_module(v, eps) for eps in EPSILONS for v in (2, 4, 6)]
    controls += [nflag_module(4, 4, -1), nflag_module(4, 6, 1), tensor_module(4, 2), rectified_module(4, 5)]
    for module in controls:
        tally.record(relations_check(module.n, module)["passed"], f"{module.name}: exact constants")
        tally.record(_perturbation_fails(module), f"{module.name}: perturbed constants still vanish")
    return tally.result(4)


def check_t_element():
    tally = _Tally()
    for eps in EPSILONS:
        for v in _levels(11, eps):
            tally.record(t_min_poly_check(v, eps), f"t minimal polynomial v={v} eps={eps:+d}")
            if 4 <= v <= 10:
                tally.record(spectral_transfer_check(v, eps), f"spectral transfer v={v} eps={eps:+d}")
    return tally.result(5)


def homogeneous_families(bound=3, size=8):
    """Triples a <= b (entries <= bound) grouped by a - b + c, at most size per group"""
    groups = {}
    for a, b, c in itertools.product(range(bound + 1), repeat=3):
        if a <= b:
            groups.setdefault(a - b + c, []).append((a, b, c))
    return [members[:size] for _, members in sorted(groups.items())]


def check_faithfulness():
    tally = _Tally()
    for a, b, c in itertools.product(range(4), repeat=3):
        for eps in EPSILONS:
            for v in _levels(12, eps):
                tally.record(faithfulness_consistency(a, b, c, v, eps), f"P_{a},{b},{c} at v={v} eps={eps:+d}")
    for family in homogeneous_families():
        for residue in FAITHFULNESS_RESIDUES:
            tally.record(faithfulness_check(family, residue=residue),
                         f"family {family} not certified at weight size {residue} mod 6")
        for weight in FAITHFULNESS_CLASSES:
            report = faithfulness_report(family, weight=weight)
            if not report["independent"]:
                tally.findings.append(f"family {family} in the class of {list(weight)}: "
                                      f"rank {report['rank']} of {len(family)}")
    return tally.result(6)


def check_double_centralizer():
    tally = _Tally()
    for n, d in ((2, 1), (2, 2), (2, 3), (3, 2), (3, 3), (4, 2)):
        image_dim, commutant_dim, equal = double_centralizer_check(n, d)
        tally.record(equal, f"(n={n}, d={d}): image {image_dim} vs commutant {commutant_dim}")
    return tally.result(7)


def check_highest_weights():
    tally = _Tally()
    for n in (3, 4, 5):
        for eps in EPSILONS:
            for v in _levels(8, eps):
                if n % 2 == 0 and v % 2:
                    continue
                module = nflag_module(n, v, eps)
                for twisted in (False, True):
                    target = twist_by_theta(module) if twisted else module
                    report = singular_vectors(target)
                    tally.findings.extend(report.findings)
                    expected = expected_highest_weights(n, v, twisted)
                    tally.record(expected in report.highest_weights(),
                                 f"{target.name}: {expected} not among {report.highest_weights()}")
    tally.findings.append("n=4 compared against the even-rank highest weights (d at r-1, (0,..,-d,d) twisted)")
    return tally.result(8)


def _residue_weight(n, residue):
    """A symmetric weight whose idempotent family is nonzero on the levels of the residue"""
    weight = [0] * n
    total = level_sum(residue)
    if n % 2:
        weight[n // 2] = total
    else:
        weight[n // 2 - 1] = weight[n // 2] = total // 2
    return tuple(weight)


def check_transfer_coherence():
    tally = _Tally()
    tally.record(transfer_2n(ThetaMatrix.from_rows([[2, 1], [1, 2]])) == ThetaMatrix.from_rows([[0, 1], [1, 0]]),
                 "[[2,1],[1,2]] -> [[0,1],[1,0]]")
    tally.record(transfer_2n(ThetaMatrix.from_rows([[0, 1], [1, 0]])) is ZERO_SYMBOL, "[[0,1],[1,0]] -> 0")
    tally.record(transfer_n(ThetaMatrix.diagonal([1, 1, 1]), "odd-orthogonal") == ThetaMatrix.diagonal([0, 0, 0]),
                 "diag(1,1,1) -> diag(0,0,0)")
    for n in range(2, 5):
        variant = "odd-orthogonal" if n % 2 else "symplectic-even"
        for v in range(0, 7):
            for a in enumerate_theta(n, v):
                tally.record(transfer_2n(shift_class(a, 1)) == a, f"round trip {a}")
                once = transfer_n(a, variant)
                if once is not ZERO_SYMBOL:
                    twice = transfer_n(once, variant)
                    direct = transfer_2n(a)
                    ok = (twice is ZERO_SYMBOL and direct is ZERO_SYMBOL) or (
                        twice is not ZERO_SYMBOL and direct is not ZERO_SYMBOL and twice.rows == direct.rows)
                    tally.record(ok, f"transfer_n twice vs transfer_2n on {a}")
    for n in range(2, 5):
        for eps in EPSILONS:
            for residue in (2, 2 * n - 1 if n % 2 else 2 * n):
                if residue % 2 and eps == -1:
                    continue
                families = [limit_generator(kind, i, n, residue, eps) for kind in ("e", "f", "h")
                            for i in range(1, n)]
                families.append(limit_generator("idem", 0, n, residue, eps, weight=_residue_weight(n, residue)))
                for family in families:
                    for v in family.levels():
                        tally.record(coherence_check(family, v),
                                     f"{family.name} n={n} eps={eps:+d} v={v} incoherent")
                corrupted = corrupted_family(families[0])
                tally.record(not all(coherence_check(corrupted, v) for v in corrupted.levels()),
                             f"corrupted {corrupted.name} n={n} eps={eps:+d} passed coherence")
    return tally.result(9)


def check_basis_proxy():
    tally = _Tally()
    for n in (2, 3):
        report = basis_proxy_check(n, max_entry=2, max_degree=4)
        tally.record(report["independent"], f"n={n} deficient groups {report['deficient']}")
        for group in report["deficient"]:
            tally.findings.append(f"n={n} group co={group['co']} ro={group['ro']}: "
                                  f"rank {group['rank']} of {group['size']}")
    return tally.result(10)


def check_dimension_differences():
    tally = _Tally()
    for n in range(2, 6):
        for eps in EPSILONS:
            for v in _levels(10, eps):
                if n % 2 == 0 and v % 2:
                    continue
                for label in enumerate_labels(n, v, eps):
                    dims = actual_dims(label, v, eps)
                    raised = tuple(x + 2 for x in dims)
                    difference = 2 * (flag_dimension(raised, eps) - flag_dimension(dims, eps))
                    tally.record(difference == a_eps(n, v, eps), f"dim-F n={n} v={v} eps={eps:+d} label {label}")
            for v in _levels(6, eps):
                for mu in enumerate_eps_partitions(v, eps):
                    if mu and max(mu) > n:
                        continue
                    padded = tuple(sorted((n, n) + tuple(mu), reverse=True))
                    difference = orbit_dimension(padded, eps) - orbit_dimension(mu, eps)
                    tally.record(difference == a_eps(n, v, eps), f"orbit difference n={n} mu={list(mu)} eps={eps:+d}")
    return tally.result(11)


CRITERIA = {
    1: ("Orbit-dimension oracle equivalence", check_orbit_dimensions),
    2: ("Nilcone table", check_nilcone_table),
    3: ("Presentation verification", check_presentation),
    4: ("Nonhomogeneous Serre constants", check_serre_constants),
    5: ("t-element", check_t_element),
    6: ("Faithfulness machinery", check_faithfulness),
    7: ("Double centralizer", check_double_centralizer),
    8: ("Highest weights", check_highest_weights),
    9: ("Transfer coherence", check_transfer_coherence),
    10: ("Basis proxy", check_basis_proxy),
    11: ("Dimension-difference identities", check_dimension_differences),
}


def _run_criterion(number):
    start_time = time.time()
    result = CRITERIA[number][1]()
    result["seconds"] = round(time.time() - start_time, 3)
    return result


def run_acceptance(criteria=None, processes=None):
    """Run the selected criteria (all by default); results come back sorted by number"""
    numbers = sorted(criteria or CRITERIA)
    unknown = [k for k in numbers if k not in CRITERIA]
    if unknown:
        raise ValueError(f"Unknown acceptance criteria {unknown}")
    processes = processes or multiprocessing.cpu_count()

    log_progress("Running acceptance suite")
    log_progress("=" * 60)
    results = []
    start_time = time.time()

    if processes == 1 or len(numbers) == 1:
        for k, number in enumerate(numbers, 1):
            results.append(_run_criterion(number))
            log_progress(f"  {create_progress_bar(k, len(numbers))}")
    else:
        with ProcessPoolExecutor(max_workers=processes) as executor:
            future_to_number = {executor.submit(_run_criterion, number): number for number in numbers}
            for future in as_completed(future_to_number):
                number = future_to_number[future]
                try:
                    results.append(future.result())
                except Exception as e:
                    log_progress(f"Criterion {number} failed: {e}")
                    raise
                log_progress(f"  {create_progress_bar(len(results), len(numbers))}")

    results.sort(key=lambda result: result["criterion"])
    log_progress("=" * 60)
    for result in results:
        log_progress(f"{status_mark(result['passed'])}  {result['criterion']:2d}. {result['title']}"
                     f" ({result['checks']} checks, {format_duration(result['seconds'])})")
        for failure in result["failures"]:
            log_progress(f"      {failure}")
    log_progress(f"Total time: {format_duration(time.time() - start_time)}")
    return results
