"""I-adic separatedness, completion and derived completion of f.p. modules.

Over a Euclidean domain an ideal I reduces to a principal generator g.
The completion of R^r + sum R/(d_i) is  Rhat^r + sum R/(g-part of d_i),
where Rhat is the (g)-adic completion of R.  Rhat is not finitely
generated over R, so completions are kept as invariant-level
:class:`CompletedModule` descriptions.

Limiting cases: for g = 0 the completion is the module itself (Rhat = R);
for g a unit the completion is 0.
"""
from __future__ import annotations

from dataclasses import dataclass

from .fpmod import FPModule, Ideal, ModuleMap, ResolutionFunctor, free_resolution, quotient_by_power, support_in_V
from .matrix import Matrix, smith_normal_form
from .ring import Element, Ring


class PreconditionError(ValueError):
    """An operation was called outside its hypotheses."""


@dataclass(frozen=True)
class CompletedModule:
    """Rhat^completed_free_rank + sum R/(c_j), with every c_j g-primary."""

    ideal: Ideal
    completed_free_rank: int = 0
    torsion_factors: tuple = ()

    @classmethod
    def build(cls, ideal: Ideal, free_rank: int, factors) -> "CompletedModule":
        ring = ideal.ring
        g = ideal.reduced
        if ideal.is_unit():
            return cls(ideal, 0, ())
        for c in factors:
            if c and g and not ring.is_unit(ring.part_split(c, g)[1]):
                raise ValueError(f"torsion factor {ring.format(c)} is not {ring.format(g)}-primary")
        chain = FPModule.from_invariants(ring, 0, factors)
        return cls(ideal, free_rank + chain.free_rank, chain.invariant_factors)

    @classmethod
    def zero(cls, ideal: Ideal) -> "CompletedModule":
        return cls(ideal, 0, ())

    @property
    def ring(self) -> Ring:
        return self.ideal.ring

    def is_zero(self) -> bool:
        return self.completed_free_rank == 0 and not self.torsion_factors

    def torsion_part(self) -> FPModule:
        return FPModule.from_invariants(self.ring, 0, self.torsion_factors)

    def truncation(self, alpha: int) -> FPModule:
        """The quotient by g^alpha, an f.p. module."""
        if alpha < 1:
            raise ValueError("alpha must be at least 1")
        ring = self.ring
        ga = self.ideal.reduced ** alpha
        factors = [ga] * self.completed_free_rank + [ring.gcd(c, ga) for c in self.torsion_factors]
        return FPModule.from_invariants(ring, 0, factors)

    def as_fpmodule(self) -> FPModule:
        """The module itself when it is finitely generated over R."""
        if self.completed_free_rank and self.ideal.reduced:
            raise ValueError("a module with completed free part is not finitely generated")
        return FPModule.from_invariants(self.ring, self.completed_free_rank, self.torsion_factors)

    def same_as(self, M: FPModule) -> bool:
        if self.completed_free_rank and self.ideal.reduced:
            return False
        return self.as_fpmodule() == M

    def direct_sum(self, other: "CompletedModule") -> "CompletedModule":
        if other.ideal != self.ideal:
            raise ValueError("completions at different ideals")
        return CompletedModule.build(self.ideal, self.completed_free_rank + other.completed_free_rank,
                                     self.torsion_factors + other.torsion_factors)

    def describe(self) -> str:
        ring = self.ring
        fmt = ring.format
        parts = []
        if self.completed_free_rank:
            hat = f"{ring}hat_({fmt(self.ideal.reduced)})"
            parts.append(hat if self.completed_free_rank == 1 else f"{hat}^{self.completed_free_rank}")
        parts += [f"{ring}/({fmt(c)})" for c in self.torsion_factors]
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        fmt = self.ring.format
        return {
            "ideal": fmt(self.ideal.reduced),
            "completed_free_rank": self.completed_free_rank,
            "torsion_factors": [fmt(c) for c in self.torsion_factors],
        }


@dataclass(frozen=True)
class TauVerdict:
    """The natural map M -> Mhat: kernel, and cokernel as a rank of Rhat/R."""

    kernel: FPModule
    cokernel_rank: int

    @property
    def is_iso(self) -> bool:
        return self.kernel.is_zero() and self.cokernel_rank == 0

    def to_json(self) -> dict:
        return {"kernel": self.kernel.to_json(), "cokernel_rank": self.cokernel_rank, "is_iso": self.is_iso}


def is_separated(M: FPModule, I: Ideal) -> tuple[bool, FPModule]:
    """Whether the intersection of the g^a M vanishes, and that intersection."""
    ring = M.ring
    g = I.reduced
    if not g:
        return True, FPModule.zero(ring)
    if ring.is_unit(g):
        return M.is_zero(), M
    kernel = FPModule.from_invariants(ring, 0, [ring.coprime_part(d, g) for d in M.invariant_factors])
    return kernel.is_zero(), kernel


def complete(M: FPModule, I: Ideal) -> tuple[CompletedModule, TauVerdict]:
    ring = M.ring
    g = I.reduced
    _, kernel = is_separated(M, I)
    if ring.is_unit(g):
        return CompletedModule.zero(I), TauVerdict(kernel, 0)
    if not g:
        return CompletedModule.build(I, M.free_rank, M.invariant_factors), TauVerdict(kernel, 0)
    hat = CompletedModule.build(I, M.free_rank, [ring.g_part(d, g) for d in M.invariant_factors])
    return hat, TauVerdict(kernel, M.free_rank)


def is_complete(M: FPModule, I: Ideal) -> bool:
    ring = M.ring
    g = I.reduced
    if not g:
        return True
    if ring.is_unit(g):
        return M.is_zero()
    return M.free_rank == 0 and all(ring.is_unit(ring.coprime_part(d, g)) for d in M.invariant_factors)


def _hat_quotient(ring: Ring, g: Element, d: Element) -> Element:
    # Rhat / d Rhat = R / (g-part of d)
    return ring.g_part(d, g)


def _dual_on_hat(A: Matrix, ideal: Ideal) -> tuple[int, list]:
    """Kernel rank and cokernel factors of A acting on Rhat^cols -> Rhat^rows."""
    ring = ideal.ring
    g = ideal.reduced
    snf = smith_normal_form(A)
    diag = [d for d in snf.diagonal if d]
    # nonzero diagonal entries act injectively on the torsion-free Rhat
    kernel_rank = A.cols - len(diag)
    coker_free = A.rows - len(diag)
    factors = [_hat_quotient(ring, g, d) for d in diag] + [ring.zero()] * coker_free
    return kernel_rank, factors


def derived_completion(M: FPModule, I: Ideal) -> tuple[CompletedModule, CompletedModule]:
    """(Lambda_0, Lambda_1) from the completed free resolution R^k -> R^n of M."""
    if I.is_unit():
        return CompletedModule.zero(I), CompletedModule.zero(I)
    A = free_resolution(M)
    kernel_rank, factors = _dual_on_hat(A, I)
    free = sum(1 for f in factors if not f)
    lam0 = CompletedModule.build(I, free, [f for f in factors if f])
    lam1 = CompletedModule.build(I, kernel_rank, [])
    return lam0, lam1


def completed_hom_ext(X: FPModule, N: CompletedModule) -> tuple[CompletedModule, CompletedModule]:
    """Hom(X, N) and Ext^1(X, N) from the free resolution of X with coefficients in N.

    N = Rhat^s + T is split into its completed-free part, handled by reading
    the Smith form of A^T on Rhat, and its f.p. torsion part T.
    """
    ideal = N.ideal
    if ideal.is_unit():
        return CompletedModule.zero(ideal), CompletedModule.zero(ideal)
    functor = ResolutionFunctor(X)
    s = N.completed_free_rank
    kernel_rank, factors = _dual_on_hat(functor.A.T, ideal)
    coker_free = sum(1 for f in factors if not f)
    T = N.torsion_part()
    hom_T, ext_T = functor.hom(T), functor.ext1(T)
    hom = CompletedModule.build(ideal, s * kernel_rank, hom_T.invariant_factors)
    ext = CompletedModule.build(ideal, s * coker_free,
                                [f for f in factors if f] * s + list(ext_T.invariant_factors))
    return hom, ext


def completed_hom_ext_rules(X: FPModule, N: CompletedModule) -> tuple[CompletedModule, CompletedModule]:
    """Same as :func:`completed_hom_ext` from summand rules.

    Hom(R, Rhat) = Rhat, Hom(R/a, Rhat) = 0, Ext^1(R/a, Rhat) = R/(g-part of a).
    """
    ideal = N.ideal
    ring = ideal.ring
    g = ideal.reduced
    if ideal.is_unit():
        return CompletedModule.zero(ideal), CompletedModule.zero(ideal)
    f, a_s = X.invariants()
    s, cs = N.completed_free_rank, N.torsion_factors
    hom = CompletedModule.build(ideal, f * s, list(cs) * f + [ring.gcd(a, c) for a in a_s for c in cs])
    ext = CompletedModule.build(ideal, 0, [ring.g_part(a, g) for a in a_s for _ in range(s)]
                                + [ring.gcd(a, c) for a in a_s for c in cs])
    return hom, ext


def ext_into_completed(X: FPModule, N: CompletedModule) -> tuple[FPModule, FPModule]:
    """Hom(X, N) and Ext^1(X, N) for X supported in V(I); both are f.p."""
    if not support_in_V(X, N.ideal):
        raise PreconditionError("support of X is not contained in V(I)")
    hom, ext = completed_hom_ext(X, N)
    return hom.as_fpmodule(), ext.as_fpmodule()


def verify_quotient_identity(M: FPModule, I: Ideal, alpha: int) -> bool:
    """M / I^a M is isomorphic to Mhat / I^a Mhat."""
    lhs = quotient_by_power(M, I, alpha)
    hat, _ = complete(M, I)
    return lhs == hat.truncation(alpha)


def truncation_map(M: FPModule, N: FPModule, f: ModuleMap, I: Ideal, alpha: int) -> ModuleMap:
    """The map M / I^a M -> N / I^a N induced by f (checked for well-definedness)."""
    return ModuleMap(quotient_by_power(M, I, alpha), quotient_by_power(N, I, alpha), f.matrix)
