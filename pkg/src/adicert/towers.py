"""Inverse systems: lim and lim^1 with Mittag-Leffler certificates.

Two tower kinds are classified in closed form: the multiplication tower
{M, x} (every level M, transitions multiplication by x) and the
completion tower {M / I^a M} (natural surjections).  Their limits are
compared against :func:`limits_truncated`, an oracle that computes
compatible tuples of a finite truncation by explicit kernel computations.
The oracle can certify stabilization or strict descent; it never decides
that lim^1 is nonzero.  That verdict comes from structure alone
(positive free rank and x a nonzero non-unit).

By the standard identification, lim and lim^1 of {M, x} are Hom(R_x, M)
and Ext^1(R_x, M); higher Ext against R_x vanishes over a PID.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence, Union

from .adic import CompletedModule, PreconditionError, complete, completed_hom_ext
from .fpmod import FPModule, Ideal, ModuleMap, ResolutionFunctor, block_diagonal, quotient_by_power
from .matrix import Matrix
from .ring import Element, Ring

DEFAULT_DEPTH = 8


@dataclass(frozen=True)
class SymbolicLocalization:
    """R_x = colim (R -x-> R -x-> ...); zero for x = 0 and R itself for x a unit."""

    ring: Ring
    x: Element

    def is_zero(self) -> bool:
        return not self.x

    def describe(self) -> str:
        return f"{self.ring}_({self.ring.format(self.x)})"


@dataclass(frozen=True)
class MultiplicationTower:
    M: Union[FPModule, CompletedModule]
    x: Element


@dataclass(frozen=True)
class CompletionTower:
    M: FPModule
    I: Ideal


@dataclass(frozen=True)
class ExplicitFinite:
    """levels[0] <- levels[1] <- ...; maps[i] goes from levels[i+1] to levels[i]."""

    levels: tuple
    maps: tuple


Tower = Union[MultiplicationTower, CompletionTower, ExplicitFinite]


@dataclass(frozen=True)
class MLCertificate:
    stabilizes_at: int | None
    never_rank: int | None
    bound_used: int
    chain: tuple = ()

    @property
    def stabilizes(self) -> bool:
        return self.stabilizes_at is not None

    def to_json(self) -> dict:
        if self.stabilizes:
            verdict = {"StabilizesAt": self.stabilizes_at}
        else:
            verdict = {"NeverStabilizes": {"PositiveFreeRank": self.never_rank}}
        return {"verdict": verdict, "bound_used": self.bound_used,
                "chain": [m.to_json() for m in self.chain]}


@dataclass(frozen=True)
class LimVerdict:
    """lim, and lim^1 as a rank witness (0 means lim^1 = 0)."""

    lim: Union[FPModule, CompletedModule]
    lim1_rank: int
    reason: str = ""

    @property
    def lim1_vanishes(self) -> bool:
        return self.lim1_rank == 0

    def lim1_json(self):
        return "Zero" if self.lim1_vanishes else {"NonZero": {"free_rank_witness": self.lim1_rank}}

    def to_json(self) -> dict:
        return {"lim": self.lim.to_json(), "lim1": self.lim1_json(), "reason": self.reason}


def _check_fp(T) -> FPModule:
    if not isinstance(T.M, FPModule):
        raise PreconditionError("this operation needs a finitely presented tower")
    return T.M


def ml_certificate(T: Tower) -> MLCertificate:
    if isinstance(T, CompletionTower):
        return MLCertificate(0, None, 0)
    if not isinstance(T, MultiplicationTower):
        raise PreconditionError(f"unsupported tower kind {type(T).__name__}")
    M = _check_fp(T)
    ring, x = M.ring, T.x
    if ring.is_unit(x):
        return MLCertificate(0, None, 0)
    if not x:
        bound = 1
    else:
        bound = 1 + max((ring.adic_length(d, x) for d in M.invariant_factors), default=0)
    # chain of quotients M / x^a M; equal consecutive quotients mean equal images
    chain = [quotient_by_power(M, Ideal.principal(ring, x), a) if a else FPModule.zero(ring)
             for a in range(bound + 2)]
    if x and M.free_rank:
        return MLCertificate(None, M.free_rank, bound, tuple(chain))
    n = next(a for a in range(bound + 1) if chain[a] == chain[a + 1])
    assert chain[n + 1] == chain[min(n + 2, bound + 1)], "image chain failed to stay constant"
    return MLCertificate(n, None, bound, tuple(chain))


def _localization_limits(ring: Ring, N: FPModule, x: Element) -> tuple[FPModule, int]:
    if ring.is_unit(x):
        return N, 0
    if not x:
        return FPModule.zero(ring), 0
    lim = FPModule.from_invariants(ring, 0, [ring.coprime_part(d, x) for d in N.invariant_factors])
    return lim, N.free_rank


def limits_closed_form(T: Tower) -> LimVerdict:
    if isinstance(T, CompletionTower):
        hat, _ = complete(T.M, T.I)
        return LimVerdict(hat, 0, "surjective transitions (Mittag-Leffler)")
    if not isinstance(T, MultiplicationTower):
        raise PreconditionError(f"unsupported tower kind {type(T).__name__}")
    if isinstance(T.M, CompletedModule):
        return _completed_multiplication_limits(T.M, T.x)
    M = T.M
    lim, rank = _localization_limits(M.ring, M, T.x)
    if rank:
        reason = "positive free rank with x a nonzero non-unit: images strictly descend"
    else:
        reason = "image chain stabilizes (Mittag-Leffler)"
    return LimVerdict(lim, rank, reason)


def _completed_multiplication_limits(N: CompletedModule, y: Element) -> LimVerdict:
    ring = N.ring
    g = N.ideal.reduced
    if not g:
        lim, rank = _localization_limits(ring, N.as_fpmodule(), y)
        return LimVerdict(lim, rank, "zero ideal: the completion is the module itself")
    if N.ideal.is_unit() or not y:
        return LimVerdict(CompletedModule.zero(N.ideal), 0, "zero module")
    if ring.is_unit(y):
        return LimVerdict(N, 0, "y acts invertibly")
    # Rhat splits along g = g1 * g2: y-adically complete on the g1 factor, y invertible on g2
    _, g2 = ring.part_split(g, y)
    ideal2 = Ideal.principal(ring, g2)
    lim = CompletedModule.build(ideal2, N.completed_free_rank, [ring.coprime_part(c, y) for c in N.torsion_factors])
    return LimVerdict(lim, 0, "completion is y-adically complete where y is not invertible")


def localization_hom_ext(loc: SymbolicLocalization, N: Union[FPModule, CompletedModule]) -> LimVerdict:
    """Hom(R_x, N) and Ext^1(R_x, N) via the multiplication tower {N, x}."""
    return limits_closed_form(MultiplicationTower(N, loc.x))


def ext_localization_by_summands(x: Element, N: FPModule) -> tuple[FPModule, int]:
    """Hom(R_x, N) and the Ext^1(R_x, N) rank witness, summand by summand.

    Hom(R_x, R) = 0 and Ext^1(R_x, R) != 0 (R is not x-complete);
    R/(a) with a x-primary is x-complete, so both vanish;
    R/(b) with b coprime to x is an R_x-module: Hom = R/(b), Ext^1 = 0.
    """
    ring = N.ring
    if not x:
        return FPModule.zero(ring), 0
    if ring.is_unit(x):
        return N, 0
    hom_parts = []
    for d in N.invariant_factors:
        a, b = ring.part_split(d, x)
        hom_parts.append(FPModule.cyclic(ring, b))
    hom = FPModule.zero(ring).direct_sum(*hom_parts) if hom_parts else FPModule.zero(ring)
    return hom, N.free_rank


# -- truncation oracle ----------------------------------------------------------

def tower_levels(T: Tower, depth: int) -> tuple[list[FPModule], list[ModuleMap]]:
    # levels are kept in diagonal normal form so map matrices get reduced
    if isinstance(T, MultiplicationTower):
        M = _check_fp(T).normal_form()[0]
        mult = ModuleMap.multiplication(M, T.x)
        return [M] * depth, [mult] * (depth - 1)
    if isinstance(T, CompletionTower):
        normal = [quotient_by_power(T.M, T.I, a).normal_form() for a in range(1, depth + 1)]
        levels = [N for N, _, _ in normal]
        maps = [ModuleMap(levels[a + 1], levels[a], levels[a].reduce(normal[a][1] @ normal[a + 1][2]), check=False)
                for a in range(depth - 1)]
        return levels, maps
    if isinstance(T, ExplicitFinite):
        if len(T.levels) < depth:
            raise ValueError(f"explicit tower has only {len(T.levels)} levels")
        return list(T.levels[:depth]), list(T.maps[:depth - 1])
    raise PreconditionError(f"unsupported tower kind {type(T).__name__}")


@dataclass
class TruncatedLimit:
    lim_approx: FPModule
    level: int
    descent_log: list = field(default_factory=list)
    stabilized: bool = False

    @property
    def strict_descent(self) -> bool:
        """Every step of the level-1 image chain is a proper inclusion."""
        return all(entry["strict"] for entry in self.descent_log[1:])

    def to_json(self) -> dict:
        return {
            "lim_approx": self.lim_approx.to_json(),
            "level": self.level,
            "stabilized": self.stabilized,
            "descent_log": [
                {"depth": e["depth"], "image": e["image"].to_json(), "cokernel": e["cokernel"].to_json(),
                 "strict": e["strict"]} for e in self.descent_log
            ],
        }


def limits_truncated(T: Tower, depth: int = DEFAULT_DEPTH) -> TruncatedLimit:
    """Compatible tuples of the first ``depth`` levels, built by iterated kernels.

    C_1 = M_1 and C_{d+1} = ker(C_d + M_{d+1} -> M_d, (c, m) -> c_d - t(m)).
    The approximation of lim is the projection of C_depth to level
    h = max(2, ceil(depth / 2)); the descent log records the image of
    C_d in level 1 for every d.  Stabilization means the last two level-1
    images agree and the projections to levels h-1 and h are isomorphic.
    """
    if depth < 2:
        raise ValueError("depth must be at least 2")
    levels, maps = tower_levels(T, depth)
    ring = levels[0].ring
    h = max(2, (depth + 1) // 2)
    C = levels[0]
    proj = [ModuleMap.identity(C)]  # proj[k]: C -> levels[k]
    log = []

    def record(d: int) -> None:
        inc = proj[0].image()
        coker = proj[0].cokernel().target
        strict = bool(log) and log[-1]["cokernel"] != coker
        log.append({"depth": d, "image": inc.source, "cokernel": coker, "strict": strict})

    record(1)
    for d in range(1, depth):
        last, t = proj[d - 1], maps[d - 1]
        Md1 = levels[d]
        src = FPModule(ring, block_diagonal(ring, [C.presentation, Md1.presentation]))
        diff = ModuleMap(src, levels[d - 1], last.matrix.hstack(-t.matrix), check=False)
        inc = diff.kernel()
        K = inc.source
        first = inc.matrix.select_rows(range(C.ngens))
        second = inc.matrix.select_rows(range(C.ngens, C.ngens + Md1.ngens))
        proj = [ModuleMap(K, p.target, p.target.reduce(p.matrix @ first), check=False) for p in proj]
        proj.append(ModuleMap(K, Md1, Md1.reduce(second), check=False))
        C = K
        record(d + 1)
    approx = proj[h - 1].image().source
    previous = proj[h - 2].image().source
    stabilized = log[-1]["cokernel"] == log[-2]["cokernel"] and approx == previous
    return TruncatedLimit(approx, h, log, stabilized)


# -- lemma checkers ---------------------------------------------------------------

def _stable_image(f: ModuleMap, bound: int) -> ModuleMap:
    """Inclusion of the image of f^bound restricted to the torsion submodule."""
    M = f.source
    ring = M.ring
    ann = M.invariant_factors[-1] if M.invariant_factors else ring.one()
    torsion = ModuleMap.multiplication(M, ann).kernel()
    power = torsion
    for _ in range(bound):
        power = f.compose(power)
    return power.image()


@dataclass
class LemmaReport:
    name: str
    entries: dict
    passed: bool

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "entries": self.entries}


def check_localization_routes(x: Element, N: FPModule) -> LemmaReport:
    """Ext^i(R_x, N) against lim^i of the Hom-tower {Hom(R, N), x}, i = 0, 1.

    The tower route builds Hom(R, N) and Ext^1(R, N) from a free resolution,
    takes the stable image of x (after the certified Mittag-Leffler index)
    for lim, and the certificate verdict for lim^1.  The Ext route uses the
    summand rules of :func:`ext_localization_by_summands`.
    """
    ring = N.ring
    ring.check(x)
    R = FPModule.free(ring, 1)
    functor = ResolutionFunctor(R)
    hom_R = functor.hom(N)
    ext_R = functor.ext1(N)
    mult = functor.hom_map(ModuleMap.multiplication(N, x))
    cert = ml_certificate(MultiplicationTower(hom_R, x))
    if ring.is_unit(x):
        tower_lim = hom_R
    else:
        tower_lim = _stable_image(mult, cert.bound_used).source
    tower_lim1 = 0 if cert.stabilizes else cert.never_rank
    ext_hom, ext_rank = ext_localization_by_summands(x, N)
    closed = limits_closed_form(MultiplicationTower(N, x))
    entries = {
        "i=0": {"ext_route": ext_hom.to_json(), "lim_route": tower_lim.to_json(),
                "closed_form": closed.lim.to_json(), "agree": ext_hom == tower_lim == closed.lim},
        "i=1": {"ext_route_rank": ext_rank, "lim1_route_rank": tower_lim1,
                "closed_form_rank": closed.lim1_rank,
                "lim_ext1_R_zero": ext_R.is_zero(),
                "agree": ext_rank == tower_lim1 == closed.lim1_rank and ext_R.is_zero()},
        "certificate": cert.to_json(),
    }
    return LemmaReport("localization-routes", entries, entries["i=0"]["agree"] and entries["i=1"]["agree"])


def _functor_tower(levels: Sequence[FPModule], maps: Sequence[ModuleMap], X) -> tuple[ExplicitFinite, ExplicitFinite]:
    """Apply Hom(X, -) and Ext^1(X, -) to a finite tower."""
    ring = levels[0].ring
    if isinstance(X, FPModule):
        functor = ResolutionFunctor(X)
        hom_levels = [functor.hom(N) for N in levels]
        hom_maps = [functor.hom_map(t) for t in maps]
        ext_levels = [functor.ext1(N) for N in levels]
        ext_maps = [functor.ext1_map(t) for t in maps]
        return ExplicitFinite(tuple(hom_levels), tuple(hom_maps)), ExplicitFinite(tuple(ext_levels), tuple(ext_maps))
    # symbolic localization: Hom(R_y, N) is the stable image of y on torsion N, Ext^1 vanishes
    y = X.x
    incs = []
    for N in levels:
        if not N.is_torsion():
            raise PreconditionError("levels must be torsion")
        if ring.is_unit(y):
            incs.append(ModuleMap.identity(N))
            continue
        bound = 1 if not y else 1 + max((ring.adic_length(d, y) for d in N.invariant_factors), default=0)
        incs.append(_stable_image(ModuleMap.multiplication(N, y), bound))
    hom_maps = [t.compose(incs[a + 1]).lift_through(incs[a]) for a, t in enumerate(maps)]
    zero = FPModule.zero(ring)
    zmap = ModuleMap(zero, zero, Matrix.zeros(ring, 0, 0), check=False)
    return (ExplicitFinite(tuple(i.source for i in incs), tuple(hom_maps)),
            ExplicitFinite(tuple(zero for _ in levels), tuple(zmap for _ in maps)))


def _compare_limit(closed: Union[FPModule, CompletedModule], oracle: TruncatedLimit) -> dict:
    """Closed-form limit against the oracle approximation.

    Stabilized oracles must match exactly.  Otherwise the limit has to be a
    completion with a completed free part whose truncation at the oracle
    level is the projected image.
    """
    level_match = None
    if oracle.stabilized:
        if isinstance(closed, CompletedModule):
            exact = closed.same_as(oracle.lim_approx)
        else:
            exact = closed == oracle.lim_approx
        ok = exact
    else:
        exact = None
        ok = False
        if isinstance(closed, CompletedModule) and closed.completed_free_rank and closed.ideal.reduced:
            level_match = closed.truncation(oracle.level) == oracle.lim_approx
            ok = level_match
    return {"closed_form": closed.to_json(), "oracle": oracle.lim_approx.to_json(),
            "oracle_level": oracle.level, "stabilized": oracle.stabilized,
            "level_match": level_match, "exact_match": exact, "agree": ok}


def oracle_crosscheck(T: Tower, depth: int = DEFAULT_DEPTH) -> dict:
    """Closed-form lim/lim^1 of a classified tower against the truncation oracle."""
    closed = limits_closed_form(T)
    oracle = limits_truncated(T, depth)
    entry = _compare_limit(closed.lim, oracle)
    free_rank = T.M.free_rank if isinstance(T, MultiplicationTower) else 0
    if closed.lim1_vanishes:
        lim1_ok = True
    else:
        lim1_ok = oracle.strict_descent and free_rank > 0 and not oracle.stabilized
        # lim is the stable torsion part; the free part of the approximation never settles
        approx_torsion = FPModule.from_invariants(oracle.lim_approx.ring, 0, oracle.lim_approx.invariant_factors)
        entry["exact_match"] = closed.lim == approx_torsion
        entry["agree"] = entry["exact_match"]
    entry.update({
        "lim1": closed.lim1_json(),
        "strict_descent": oracle.strict_descent,
        "lim1_consistent": lim1_ok,
        "descent_log": oracle.to_json()["descent_log"],
    })
    entry["agree"] = entry["agree"] and lim1_ok
    return entry


def _constant_tower_check(X, M: FPModule, hat: CompletedModule) -> LemmaReport:
    """Zero ideal: the tower is M <- M <- ... with identity maps, so lim is M and lim^1 = 0."""
    if isinstance(X, FPModule):
        functor = ResolutionFunctor(X)
        hom_c, ext_c = completed_hom_ext(X, hat)
        hom_l, ext_l = functor.hom(M), functor.ext1(M)
        ok0, ok1 = hom_c.same_as(hom_l), ext_c.same_as(ext_l)
        i1 = {"closed_form": ext_c.to_json(), "level": ext_l.to_json(), "agree": ok1}
    else:
        closed = limits_closed_form(MultiplicationTower(hat, X.x))
        level = limits_closed_form(MultiplicationTower(M, X.x))
        hom_c, hom_l = closed.lim, level.lim
        ok0, ok1 = hom_c == hom_l, closed.lim1_rank == level.lim1_rank
        i1 = {"closed_form": closed.lim1_json(), "level": level.lim1_json(), "agree": ok1}
    entries = {
        "X": X.describe() if isinstance(X, SymbolicLocalization) else X.to_json(),
        "constant_tower": True,
        "i=0": {"closed_form": hom_c.to_json(), "level": hom_l.to_json(), "agree": ok0},
        "i=1": i1,
    }
    return LemmaReport("completion-ext-limits", entries, ok0 and ok1)


def check_completion_ext_limits(X: Union[FPModule, SymbolicLocalization], T: CompletionTower,
                                depth: int = DEFAULT_DEPTH) -> LemmaReport:
    """0 -> lim^1 Ext^{i-1}(X, N_a) -> Ext^i(X, lim N_a) -> lim Ext^i(X, N_a) -> 0.

    The completion tower has surjective transitions, so its lim^1 vanishes.
    Its levels are torsion, so the Hom and Ext towers have finite-length
    levels and satisfy Mittag-Leffler; the sequence then says Ext^i(X, Mhat)
    is the limit of the tower Ext^i(X, M / I^a M) for i = 0, 1.
    """
    if not isinstance(T, CompletionTower):
        raise PreconditionError("check_completion_ext_limits needs a completion tower")
    hat, _ = complete(T.M, T.I)
    if T.I.is_zero():
        return _constant_tower_check(X, T.M, hat)
    if isinstance(X, FPModule):
        hom_c, ext_c = completed_hom_ext(X, hat)
    else:
        verdict = limits_closed_form(MultiplicationTower(hat, X.x))
        assert verdict.lim1_vanishes, "completions at a nonzero ideal are complete where x is not invertible"
        hom_c = verdict.lim
        ext_c = CompletedModule.zero(hat.ideal)
    levels, maps = tower_levels(T, depth)
    hom_tower, ext_tower = _functor_tower(levels, maps, X)
    finite_levels = all(N.is_torsion() for N in hom_tower.levels + ext_tower.levels)
    hom_cmp = _compare_limit(hom_c, limits_truncated(hom_tower, depth))
    ext_cmp = _compare_limit(ext_c, limits_truncated(ext_tower, depth))
    entries = {
        "X": X.describe() if isinstance(X, SymbolicLocalization) else X.to_json(),
        "finite_levels": finite_levels,
        "lim1_hom_tower": "Zero" if finite_levels else "unknown",
        "i=0": hom_cmp,
        "i=1": ext_cmp,
    }
    return LemmaReport("completion-ext-limits", entries, finite_levels and hom_cmp["agree"] and ext_cmp["agree"])
