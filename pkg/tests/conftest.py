import os

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from adicert.fpmod import FPModule
from adicert.ring import ZZ, Poly, PolyRing, product

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", max_examples=400, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

F5 = PolyRing(5)
QT = PolyRing(0)
INT_PRIMES = [2, 3, 5]
F5_PRIMES = [F5.parse("t"), F5.parse("t + 1"), F5.parse("t^2 + 2")]


@st.composite
def smooth_ints(draw, primes=(2, 3, 5), max_exp=3):
    return product(ZZ, [p ** draw(st.integers(0, max_exp)) for p in primes])


@st.composite
def f5_polys(draw, max_deg=4):
    coeffs = draw(st.lists(st.integers(0, 4), min_size=1, max_size=max_deg + 1))
    return F5.normalize(Poly(coeffs, 5))


@st.composite
def int_modules(draw, max_free=2, max_factors=3):
    r = draw(st.integers(0, max_free))
    factors = draw(st.lists(smooth_ints(), max_size=max_factors))
    return FPModule.from_invariants(ZZ, r, factors)


@st.composite
def int_matrices(draw, max_dim=4, bound=30):
    rows = draw(st.integers(0, max_dim))
    cols = draw(st.integers(0, max_dim))
    return [[draw(st.integers(-bound, bound)) for _ in range(cols)] for _ in range(rows)], rows, cols


# criterion number -> PASS/FAIL line, filled by test_acceptance
ACCEPTANCE: dict = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
