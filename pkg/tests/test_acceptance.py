"""Acceptance suite: nine exact criteria, one PASS/FAIL line each.

Every check is exact; no numeric tolerance is involved anywhere, so the
allowed mismatch count is pinned at zero.  The lines are printed in the
pytest terminal summary, or directly when this file is run as a script.
"""
import itertools
import random
import subprocess
import sys
import time
from pathlib import Path

from adicert.adic import complete, derived_completion
from adicert.cech import ElementSystem, FlatTestModule, radical_invariance_check
from adicert.certifier import certify_equivalence, verify_flat_vanishing, verify_torsion_transfer
from adicert.corpus import F5, bundled_names, prime_pool, random_corpus, random_module, random_torsion_in_support
from adicert.fpmod import FPModule, Ideal, support_in_V, tensor
from adicert.matrix import Matrix, is_unit_determinant, smith_normal_form
from adicert.ring import ZZ, Poly, product
from adicert.towers import (CompletionTower, MultiplicationTower, SymbolicLocalization, check_completion_ext_limits,
                            check_localization_routes, oracle_crosscheck)

from conftest import ACCEPTANCE

ALLOWED_MISMATCHES = 0
CORPUS_SIZE = 500
CORPUS_SEED = 0
DEPTH = 8
CERTIFY_TIME_LIMIT_S = 30.0
TRANSFER_PAIRS = 200
SNF_MATRICES = 1000
SNF_MAX_DIM = 6
SNF_INT_BOUND = 10 ** 3
SNF_MAX_DEGREE = 4
RADICAL_PAIRS = 50
GOLDEN_INSTANCES = 10

ROOT = Path(__file__).resolve().parent.parent
GOLDEN = ROOT / "tests" / "golden"

_corpus = None


def corpus():
    global _corpus
    if _corpus is None:
        _corpus = random_corpus(CORPUS_SIZE, CORPUS_SEED)
    return _corpus


def record(n: int, title: str, failures: list, detail: str) -> None:
    ok = len(failures) <= ALLOWED_MISMATCHES
    line = f"criterion {n} {'PASS' if ok else 'FAIL'}: {title} ({detail}, failures={len(failures)})"
    ACCEPTANCE[n] = line
    assert ok, f"{line}; first failures: {failures[:3]}"


def test_criterion_1_certifier_equivalence():
    start = time.perf_counter()
    failures, separated = [], 0
    for i, e in enumerate(corpus()):
        r = certify_equivalence(e.M, e.I, e.system)
        if r.separated:
            separated += 1
            if not r.consistent:
                failures.append((i, "equivalence broken"))
        elif r.kernel.is_zero() or r.hom_at_generator.is_zero() or not r.explanation:
            failures.append((i, "non-separated instance not flagged"))
    elapsed = time.perf_counter() - start
    if elapsed >= CERTIFY_TIME_LIMIT_S:
        failures.append(("runtime", round(elapsed, 1)))
    record(1, "complete <=> Ext conditions on separated instances", failures,
           f"{CORPUS_SIZE} instances, {separated} separated, {elapsed:.1f}s < {CERTIFY_TIME_LIMIT_S:.0f}s")


def corpus_towers(e):
    for x in e.system.elements:
        yield MultiplicationTower(e.M, x)
    yield MultiplicationTower(e.M, e.I.reduced)
    yield CompletionTower(e.M, e.I)


def test_criterion_2_oracle_agreement():
    failures, towers, nonzero_lim1 = [], 0, 0
    for i, e in enumerate(corpus()):
        for T in corpus_towers(e):
            towers += 1
            c = oracle_crosscheck(T, DEPTH)
            if not c["agree"]:
                failures.append((i, c))
            if c["lim1"] != "Zero":
                nonzero_lim1 += 1
                # NonZero only with full-depth strict descent and positive free rank
                if not (c["strict_descent"] and T.M.free_rank > 0):
                    failures.append((i, "unjustified NonZero lim1"))
    record(2, "closed-form lim/lim1 match the truncation oracle", failures,
           f"{towers} towers at depth {DEPTH}, {nonzero_lim1} with NonZero lim1")


def flat_modules(e):
    """Flat test modules from at most three elements of Rad I: system, repeated, composite."""
    ring, g = e.M.ring, e.I.reduced
    p = prime_pool(ring)[0]
    loc = lambda x: SymbolicLocalization(ring, x)
    yield FlatTestModule.from_system(e.system)
    yield FlatTestModule((loc(g), loc(g)))
    yield FlatTestModule((loc(g * g), loc(g * p), loc(product(ring, e.system.elements))))


def test_criterion_3_flat_test_vanishing():
    failures, checked = [], 0
    for i, e in enumerate(corpus()):
        for F in flat_modules(e):
            checked += 1
            r = verify_flat_vanishing(e.M, e.I, F, DEPTH)
            if not r.passed:
                failures.append((i, F.describe()))
    record(3, "Hom and Ext^1 from flat test modules into completions vanish", failures,
           f"{checked} (M, I, F) triples")


def test_criterion_4_torsion_transfer():
    rng = random.Random(CORPUS_SEED)
    failures, pairs, nonzero_X = [], 0, 0
    for i, e in enumerate(corpus()[:TRANSFER_PAIRS]):
        X = random_torsion_in_support(rng, e.I)
        assert support_in_V(X, e.I)
        pairs += 1
        nonzero_X += not X.is_zero()
        r = verify_torsion_transfer(X, e.M, e.I, DEPTH)
        a = r["quotient_vanishing"]
        zero_clause = all(a[k] == "Zero" for k in ("hom_into_quotient", "ext1_into_quotient",
                                                     "hom_into_kernel", "ext1_into_kernel"))
        if not (r["passed"] and r["hom"]["equal"] and r["ext1"]["equal"] and zero_clause):
            failures.append((i, r))
    if pairs < TRANSFER_PAIRS:
        failures.append(("too few pairs", pairs))
    record(4, "Ext^i(X, M) = Ext^i(X, Mhat) for X supported on V(I)", failures,
           f"{pairs} pairs, {nonzero_X} with X nonzero")


def test_criterion_5_lemma_checkers():
    failures, routes, towers = [], 0, 0
    for i, e in enumerate(corpus()):
        ring = e.M.ring
        for x in (*e.system.elements, e.I.reduced, ring.one()):
            routes += 1
            if not check_localization_routes(x, e.M).passed:
                failures.append((i, "routes", ring.format(x)))
        T = CompletionTower(e.M, e.I)
        for X in (FPModule.free(ring, 1), FPModule.cyclic(ring, e.I.reduced),
                  SymbolicLocalization(ring, e.system.elements[0])):
            towers += 1
            if not check_completion_ext_limits(X, T, DEPTH).passed:
                failures.append((i, "completion tower", X.describe()))
    record(5, "localization routes and completion-tower Ext limits", failures,
           f"{routes} route checks, {towers} tower checks at depth {DEPTH}")


def test_criterion_6_cyclic_tensor_vanishing():
    I = Ideal(ZZ, [2])
    R_I = FPModule.cyclic(ZZ, 2)
    pool = [FPModule.cyclic(ZZ, product(ZZ, [p ** k for p, k in zip((2, 3, 5), es)]))
            for es in itertools.product(range(3), repeat=3)]
    pool.append(FPModule.free(ZZ, 1))
    failures, pairs = [], 0
    for M in pool:
        hat, _ = complete(M, I)
        lam0, _ = derived_completion(M, I)
        t0 = tensor(M, R_I).is_zero()
        if not t0 == hat.is_zero() == lam0.is_zero():
            failures.append(("vanishing", M.describe()))
        for X in pool:
            pairs += 1
            if t0 and support_in_V(X, I) and not tensor(M, X).is_zero():
                failures.append(("support", M.describe(), X.describe()))
    record(6, "cyclic modules: tensor, completion and derived completion vanish together", failures,
           f"{len(pool)} modules, {pairs} support pairs, I = (2)")


def _random_f5(rng):
    return F5.normalize(Poly([rng.randint(0, 4) for _ in range(rng.randint(1, SNF_MAX_DEGREE + 1))], 5))


def snf_failures(A: Matrix) -> list:
    ring = A.ring
    r = smith_normal_form(A)
    S = r.S
    bad = []
    if not (r.U @ A @ r.V == S):
        bad.append("U A V != S")
    if not (is_unit_determinant(r.U) and is_unit_determinant(r.V)):
        bad.append("determinant not a unit")
    if not (r.U @ r.U_inv == Matrix.identity(ring, A.rows) and r.V @ r.V_inv == Matrix.identity(ring, A.cols)):
        bad.append("inverse mismatch")
    if not S.is_diagonal():
        bad.append("not diagonal")
    diag = r.diagonal
    if any(ring.normalize(d) != d for d in diag):
        bad.append("diagonal not normalized")
    if not all(ring.divides(a, b) for a, b in zip(diag, diag[1:])):
        bad.append("divisibility chain")
    return bad


def test_criterion_7_snf_suite():
    rng = random.Random(CORPUS_SEED)
    failures = []
    for k in range(SNF_MATRICES):
        rows, cols = rng.randint(1, SNF_MAX_DIM), rng.randint(1, SNF_MAX_DIM)
        if k % 2 == 0:
            data = [[rng.randint(-SNF_INT_BOUND, SNF_INT_BOUND) for _ in range(cols)] for _ in range(rows)]
            A = Matrix(ZZ, data, rows, cols)
        else:
            A = Matrix(F5, [[_random_f5(rng) for _ in range(cols)] for _ in range(rows)], rows, cols)
        bad = snf_failures(A)
        if bad:
            failures.append((k, bad))
    record(7, "Smith normal form: U A V = S, unit determinants, divisibility chain", failures,
           f"{SNF_MATRICES} matrices, half over Z and half over F5[t]")


def _support_element(rng, ring, support):
    return product(ring, [p ** rng.randint(1, 3) for p in support])


def radical_pairs(rng):
    fixed = [(ZZ, (6,), (6, 12)), (ZZ, (2,), (2, 4, 8)), (ZZ, (10,), (2 * 25, 4 * 5)),
             (F5, (F5.parse("t^2 + t"),), (F5.parse("t^2 + t"), F5.parse("t^3 + t^2")))]
    yield from fixed
    for k in range(RADICAL_PAIRS):
        ring = ZZ if k % 2 == 0 else F5
        primes = prime_pool(ring)
        support = rng.sample(primes, rng.randint(1, len(primes)))
        xs = tuple(_support_element(rng, ring, support) for _ in range(rng.randint(1, 3)))
        ys = tuple(_support_element(rng, ring, support) for _ in range(rng.randint(1, 3)))
        yield ring, xs, ys


def _witness_ok(ring, g, system, alpha, c) -> bool:
    """g^c lies in (x_i^alpha) and g^(c-1) does not."""
    target = ring.gcd(*(x ** alpha for x in system.elements))
    return ring.divides(target, g ** c) and (c == 0 or not ring.divides(target, g ** (c - 1)))


def test_criterion_8_radical_invariance():
    rng = random.Random(CORPUS_SEED)
    failures, pairs = [], 0
    for ring, xs, ys in radical_pairs(rng):
        pairs += 1
        X, Y = ElementSystem(ring, xs), ElementSystem(ring, ys)
        M = random_module(rng, ring)
        alpha = rng.randint(1, 3)
        r = radical_invariance_check(X, Y, M, alpha)
        if not r.equal:
            failures.append(("verdicts differ", xs, ys))
        if not (_witness_ok(ring, X.reduced, Y, alpha, r.witness_xy) and
                _witness_ok(ring, Y.reduced, X, alpha, r.witness_yx)):
            failures.append(("witness", xs, ys))
    if pairs < RADICAL_PAIRS:
        failures.append(("too few pairs", pairs))
    record(8, "local cohomology depends only on the radical", failures, f"{pairs} system pairs")


def _cli(args) -> bytes:
    return subprocess.run([sys.executable, "-m", "adicert.cli", *args], capture_output=True, check=False).stdout


def test_criterion_9_cli_determinism():
    names = bundled_names()
    failures, compared = [], 0
    for name in names:
        for cmd in ("certify", "oracle-crosscheck"):
            golden = GOLDEN / f"{name}__{cmd}.json"
            first, second = _cli([cmd, "-i", name]), _cli([cmd, "-i", name])
            compared += 1
            if first != second or first != golden.read_bytes():
                failures.append((name, cmd))
    if len(names) < GOLDEN_INSTANCES:
        failures.append(("too few instances", len(names)))
    record(9, "CLI reports byte-identical across runs and to goldens", failures,
           f"{len(names)} bundled instances, {compared} reports run twice")


if __name__ == "__main__":
    sys.path.insert(0, str(Path(__file__).parent))
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_criterion_")]
    for t in tests:
        try:
            t()
        except AssertionError:
            pass
        print(ACCEPTANCE.get(int(t.__name__.split("_")[2]), f"{t.__name__}: FAIL (no result recorded)"))
    sys.exit(0 if all("PASS" in line for line in ACCEPTANCE.values()) and len(ACCEPTANCE) == 9 else 1)
