"""Instance-level certificates: completeness against Ext from localizations.

Over a PID a module M is complete for (g) exactly when it is separated and
Ext^1(R_y, M) vanishes for y in the ideal, or for a system generating an
ideal with the same radical.  Non-separated inputs are reported, not
rejected: they are where the Ext test alone gives the wrong answer.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from .adic import PreconditionError, complete, is_complete, is_separated, verify_quotient_identity
from .cech import ElementSystem, FlatTestModule, flat_test_validate
from .fpmod import FPModule, Ideal, ModuleMap, ext1, ext1_via_resolution, hom, hom_via_resolution, quotient_by_power, \
    support_in_V
from .ring import Element
from .towers import (DEFAULT_DEPTH, LimVerdict, MultiplicationTower, SymbolicLocalization, _stable_image,
                     limits_closed_form, localization_hom_ext, ml_certificate)

DEFAULT_SAMPLES = 5


def _verdict(zero: bool) -> str:
    return "Zero" if zero else "NonZero"


def _lim_is_zero(v: LimVerdict) -> bool:
    return v.lim.is_zero()


@dataclass
class SingleElementReport:
    x: Element
    beta: int
    kernel_chain: list
    hom: LimVerdict
    hom_vanishes: bool
    ext1_vanishes: bool
    complete_x: bool

    @property
    def consistent(self) -> bool:
        return self.complete_x == (self.hom_vanishes and self.ext1_vanishes)

    def to_json(self) -> dict:
        ring = self.hom.lim.ring
        return {
            "x": ring.format(self.x),
            "beta": self.beta,
            "kernel_chain": [k.to_json() for k in self.kernel_chain],
            "hom": self.hom.lim.to_json(),
            "hom_verdict": _verdict(self.hom_vanishes),
            "ext1": self.hom.lim1_json(),
            "ext1_verdict": _verdict(self.ext1_vanishes),
            "complete_x": self.complete_x,
            "consistent": self.consistent,
        }


def kernel_stabilization(M: FPModule, x: Element) -> tuple[int, list[FPModule]]:
    """Smallest beta with 0:_M x^beta = 0:_M x^(beta+1), with the chain up to beta + 1."""
    ring = M.ring
    chain = [FPModule.zero(ring)]
    power = ring.one()
    while True:
        power = power * x
        chain.append(ModuleMap.multiplication(M, power).kernel().source)
        if chain[-1] == chain[-2]:
            return len(chain) - 2, chain


def certify_single(M: FPModule, x) -> SingleElementReport:
    ring = M.ring
    x = ring.parse(x)
    beta, chain = kernel_stabilization(M, x)
    verdict = limits_closed_form(MultiplicationTower(M, x))
    return SingleElementReport(
        x=x, beta=beta, kernel_chain=chain, hom=verdict,
        hom_vanishes=_lim_is_zero(verdict), ext1_vanishes=verdict.lim1_vanishes,
        complete_x=is_complete(M, Ideal.principal(ring, x)),
    )


# -- the four-way equivalence ------------------------------------------------------

@dataclass
class CertifierReport:
    description: str
    ideal: Ideal
    system: ElementSystem
    separated: bool
    kernel: FPModule
    complete: bool
    cond_ii: list = field(default_factory=list)   # (flat module, hom zero, ext1 zero, valid)
    cond_iii: list = field(default_factory=list)  # (y, ext1 zero)
    cond_iv: tuple = ()                           # (per-summand ext1 zero, combined)
    monotonicity: list = field(default_factory=list)  # (y, complete for (y))
    hom_at_generator: FPModule | None = None
    consistent: bool = False
    explanation: str = ""

    def to_json(self) -> dict:
        ring = self.ideal.ring
        fmt = ring.format
        per, combined = self.cond_iv
        return {
            "input": self.description,
            "ideal": self.ideal.to_json(),
            "system": self.system.to_json(),
            "separated": self.separated,
            "kernel": self.kernel.to_json(),
            "complete": self.complete,
            "cond_ii": [{"flat_module": F.describe(), "valid": ok, "hom": _verdict(h), "ext1": _verdict(e)}
                        for F, h, e, ok in self.cond_ii],
            "cond_iii": [{"y": fmt(y), "ext1": _verdict(e)} for y, e in self.cond_iii],
            "cond_iv": {"summands": [_verdict(e) for e in per], "ext1": _verdict(combined)},
            "monotonicity": [{"J": fmt(y), "complete": c} for y, c in self.monotonicity],
            "hom_from_localization_at_generator": self.hom_at_generator.to_json() if self.hom_at_generator else None,
            "consistent": self.consistent,
            "explanation": self.explanation,
        }


def sample_ideal_elements(I: Ideal, count: int, seed: int) -> list[Element]:
    """g, g^2 and ``count`` seeded multiples g*m with m nonzero."""
    ring = I.ring
    g = I.reduced
    rng = random.Random(seed)
    out = [g, g * g]
    for _ in range(count):
        m = ring.zero()
        while not m:
            m = ring.random_element(rng, 3)
        out.append(ring.normalize(g * m))
    return out


def _flat_verdicts(F: FlatTestModule, N) -> tuple[bool, bool]:
    verdicts = [localization_hom_ext(s, N) for s in F.summands]
    return all(_lim_is_zero(v) for v in verdicts), all(v.lim1_vanishes for v in verdicts)


def certify_equivalence(M: FPModule, I: Ideal, system: ElementSystem | None = None,
                        sample_count: int = DEFAULT_SAMPLES, seed: int = 0) -> CertifierReport:
    """Completeness against the Ext^1 tests from localizations at I, its samples and a system."""
    ring = M.ring
    g = I.reduced
    if system is None:
        system = ElementSystem(ring, (g,))
    if not ring.same_radical(system.reduced, g):
        raise PreconditionError("the system and the ideal have different radicals")
    separated, kernel = is_separated(M, I)
    complete_ = is_complete(M, I)
    samples = sample_ideal_elements(I, sample_count, seed)
    report = CertifierReport(M.describe(), I, system, separated, kernel, complete_)

    family = [FlatTestModule((SymbolicLocalization(ring, y),)) for y in samples]
    family.append(FlatTestModule.from_system(system))
    for F in family:
        h, e = _flat_verdicts(F, M)
        report.cond_ii.append((F, h, e, flat_test_validate(F, I)))
    for y in samples:
        report.cond_iii.append((y, localization_hom_ext(SymbolicLocalization(ring, y), M).lim1_vanishes))
    per = [localization_hom_ext(SymbolicLocalization(ring, x), M).lim1_vanishes for x in system.elements]
    report.cond_iv = (per, all(per))
    report.monotonicity = [(y, is_complete(M, Ideal.principal(ring, y))) for y in samples]
    report.hom_at_generator = localization_hom_ext(SymbolicLocalization(ring, g), M).lim

    valid = all(ok for *_, ok in report.cond_ii)
    monotone = not complete_ or all(c for _, c in report.monotonicity)
    if separated:
        iii = all(e for _, e in report.cond_iii)
        ii = all(h and e for _, h, e, _ in report.cond_ii)
        report.consistent = valid and monotone and complete_ == iii == report.cond_iv[1] == ii
    else:
        hom_nonzero = not report.hom_at_generator.is_zero()
        report.consistent = valid and monotone and not kernel.is_zero() and hom_nonzero and not complete_
        report.explanation = (
            f"M is not {ring.format(g)}-adically separated: the intersection of the powers {ring.format(g)}^a M is "
            f"{kernel.describe()}, and Hom(R_{ring.format(g)}, M) = {report.hom_at_generator.describe()} is nonzero. "
            "The Ext^1 conditions only detect completeness of separated modules, "
            "so the equivalence says nothing here."
        )
    return report


# -- vanishing against completions --------------------------------------------------

@dataclass
class VanishingReport:
    completion: object
    entries: list
    passed: bool

    def to_json(self) -> dict:
        return {"completion": self.completion.to_json(), "entries": self.entries, "passed": self.passed}


def verify_flat_vanishing(M: FPModule, I: Ideal, F: FlatTestModule, depth: int = DEFAULT_DEPTH) -> VanishingReport:
    """Hom and Ext^1 from every summand R_x of F into Mhat vanish.

    Closed route: the multiplication tower {Mhat, x}.  Truncation route:
    for each a <= depth the stable image of x on M / g^a M is zero (x is
    nilpotent there), and the certified Mittag-Leffler index is finite.
    """
    if not flat_test_validate(F, I):
        raise PreconditionError("flat test module has a summand outside Rad I")
    ring = M.ring
    hat, _ = complete(M, I)
    levels = [quotient_by_power(M, I, a).normal_form()[0] for a in range(1, depth + 1)]
    entries = []
    passed = True
    for loc in F.summands:
        closed = localization_hom_ext(loc, hat)
        level_ok = []
        for N in levels:
            if not loc.x:
                level_ok.append(True)
                continue
            cert = ml_certificate(MultiplicationTower(N, loc.x))
            bound = cert.bound_used if cert.stabilizes else depth
            level_ok.append(cert.stabilizes and _stable_image(ModuleMap.multiplication(N, loc.x), bound).source.is_zero())
        hom_zero, ext_zero = _lim_is_zero(closed), closed.lim1_vanishes
        ok = hom_zero and ext_zero and all(level_ok)
        passed = passed and ok
        entries.append({"summand": loc.describe(), "hom": _verdict(hom_zero), "ext1": _verdict(ext_zero),
                        "truncation_levels_zero": all(level_ok), "depth": depth, "passed": ok})
    return VanishingReport(hat, entries, passed)


def verify_torsion_transfer(X: FPModule, M: FPModule, I: Ideal, depth: int = DEFAULT_DEPTH) -> dict:
    """Ext^i(X, M) = Ext^i(X, Mhat) for g-primary torsion X, i = 0, 1.

    The cokernel of M -> Mhat is (Rhat/R)^r, on which g acts invertibly, so
    Hom and Ext^1 from X vanish there; the kernel of M -> Mhat is g-coprime
    torsion and X is g-primary, so both vanish against it too.
    """
    from .adic import ext_into_completed

    if not X.is_torsion():
        raise PreconditionError("X must be torsion")
    if not support_in_V(X, I):
        raise PreconditionError("support of X is not contained in V(I)")
    ring = M.ring
    hat, tau = complete(M, I)
    hom_M, ext_M = hom(X, M), ext1(X, M)
    routes_agree = hom_M == hom_via_resolution(X, M) and ext_M == ext1_via_resolution(X, M)
    hom_hat, ext_hat = ext_into_completed(X, hat)
    # Rhat / g^a Rhat = R / g^a: the truncation maps are isomorphisms, so g is invertible on Rhat/R
    R = FPModule.free(ring, 1)
    quotient_ok = I.is_unit() or all(verify_quotient_identity(R, I, a) for a in range(1, depth + 1))
    kernel_hom, kernel_ext = hom(X, tau.kernel), ext1(X, tau.kernel)
    clause_a = {
        "hom_into_quotient": "Zero",
        "ext1_into_quotient": "Zero",
        "quotient_rank": tau.cokernel_rank,
        "truncation_isomorphisms": quotient_ok,
        "hom_into_kernel": _verdict(kernel_hom.is_zero()),
        "ext1_into_kernel": _verdict(kernel_ext.is_zero()),
    }
    a_ok = quotient_ok and kernel_hom.is_zero() and kernel_ext.is_zero()
    b_ok = hom_M == hom_hat and ext_M == ext_hat
    return {
        "completion": hat.to_json(),
        "hom": {"M": hom_M.to_json(), "Mhat": hom_hat.to_json(), "equal": hom_M == hom_hat},
        "ext1": {"M": ext_M.to_json(), "Mhat": ext_hat.to_json(), "equal": ext_M == ext_hat},
        "routes_agree": routes_agree,
        "quotient_vanishing": clause_a,
        "passed": a_ok and b_ok and routes_agree,
    }
