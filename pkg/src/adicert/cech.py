"""Koszul and Čech complexes, local cohomology, flat test modules."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

from .adic import PreconditionError
from .fpmod import FPModule, Ideal, ModuleMap, block_diagonal
from .matrix import Matrix
from .ring import ZZ, Element, Ring, product
from .towers import SymbolicLocalization

MAX_SYSTEM = 3


@dataclass(frozen=True)
class ElementSystem:
    ring: Ring
    elements: tuple

    def __post_init__(self):
        if not self.elements:
            raise ValueError("an element system needs at least one element")
        self.ring.check(*self.elements)

    @classmethod
    def of(cls, ring: Ring, elements: Sequence) -> "ElementSystem":
        return cls(ring, tuple(ring.parse(x) for x in elements))

    @property
    def r(self) -> int:
        return len(self.elements)

    @property
    def reduced(self) -> Element:
        return self.ring.gcd(*self.elements)

    def ideal(self) -> Ideal:
        return Ideal(self.ring, self.elements)

    def powers(self, exponents: Sequence[int]) -> tuple:
        return tuple(x ** n for x, n in zip(self.elements, exponents))

    def to_json(self) -> list:
        return [self.ring.format(x) for x in self.elements]


def _subsets(r: int, k: int) -> list[tuple[int, ...]]:
    return list(combinations(range(r), k))


def _sign(S: tuple, j: int) -> int:
    # (-1)^(position of j among the sorted elements of S)
    return -1 if sum(1 for i in S if i < j) % 2 else 1


# -- Koszul complexes -----------------------------------------------------------

def koszul_differentials(ys: Sequence[Element], M: FPModule) -> list[ModuleMap]:
    """d_k : K_k -> K_{k-1} for k = 0..r+1 of K(ys) (x) M (the ends are zero maps)."""
    ring = M.ring
    r = len(ys)
    q = M.ngens
    terms = []
    for k in range(r + 1):
        terms.append(FPModule(ring, block_diagonal(ring, [M.presentation] * len(_subsets(r, k)))))
    zero = FPModule.zero(ring)
    maps = [ModuleMap(terms[0], zero, Matrix.zeros(ring, 0, terms[0].ngens), check=False)]
    for k in range(1, r + 1):
        src, tgt = _subsets(r, k), _subsets(r, k - 1)
        index = {S: i for i, S in enumerate(tgt)}
        data = [[ring.zero()] * (len(src) * q) for _ in range(len(tgt) * q)]
        for col, S in enumerate(src):
            for j in S:
                rest = tuple(i for i in S if i != j)
                c = ys[j] * _sign(S, j)
                row = index[rest]
                for t in range(q):
                    data[row * q + t][col * q + t] = c
        maps.append(ModuleMap(terms[k], terms[k - 1], Matrix._trusted(ring, data, len(tgt) * q, len(src) * q),
                              check=False))
    maps.append(ModuleMap(zero, terms[r], Matrix.zeros(ring, terms[r].ngens, 0), check=False))
    return maps


def homology(d_in: ModuleMap, d_out: ModuleMap) -> FPModule:
    """ker d_out / im d_in."""
    inc = d_out.kernel()
    return d_in.lift_through(inc).cokernel().target


def koszul_homology(system: ElementSystem, exponents: Sequence[int], M: FPModule) -> list[FPModule]:
    """[H_0, ..., H_r] of the Koszul complex on x_i^{n_i} with coefficients in M."""
    if system.r > MAX_SYSTEM:
        raise PreconditionError(f"systems of more than {MAX_SYSTEM} elements are not supported")
    if len(exponents) != system.r or any(n < 1 for n in exponents):
        raise PreconditionError("one exponent >= 1 per element is required")
    ys = system.powers(exponents)
    d = koszul_differentials(ys, M)
    r = system.r
    # d[k] : K_k -> K_{k-1}, d[r+1] : 0 -> K_r
    return [homology(d[k + 1], d[k]) for k in range(r + 1)]


def koszul_cochain_differential(ys: Sequence[Element], ring: Ring, k: int) -> Matrix:
    """d^k : K^k -> K^{k+1} of the cohomological Koszul complex on R."""
    r = len(ys)
    src, tgt = _subsets(r, k), _subsets(r, k + 1)
    index = {S: i for i, S in enumerate(tgt)}
    data = [[ring.zero()] * len(src) for _ in tgt]
    for col, S in enumerate(src):
        for j in range(r):
            if j in S:
                continue
            T = tuple(sorted(S + (j,)))
            data[index[T]][col] = ys[j] * _sign(T, j)
    return Matrix._trusted(ring, data, len(tgt), len(src))


def koszul_transition(system: ElementSystem, k: int) -> Matrix:
    """K^k(x^n) -> K^k(x^{n+1}): multiplication by the product of x_S on e_S."""
    ring = system.ring
    subs = _subsets(system.r, k)
    return Matrix.diagonal(ring, [product(ring, [system.elements[i] for i in S]) for S in subs])


# -- Čech complex ------------------------------------------------------------------

@dataclass(frozen=True)
class CechComplex:
    """Degree k term: the sum over k-subsets S of R localized at the product of x_S."""

    system: ElementSystem

    def terms(self, k: int) -> list[SymbolicLocalization]:
        ring = self.system.ring
        return [SymbolicLocalization(ring, product(ring, [self.system.elements[i] for i in S]))
                for S in _subsets(self.system.r, k)]

    def sign_matrix(self, k: int) -> Matrix:
        """Signs of the canonical maps R_{x_S} -> R_{x_{S+j}} in d^k."""
        ones = [1] * self.system.r
        return koszul_cochain_differential(ones, ZZ, k)

    def structural_checks(self) -> dict:
        """d o d = 0, the augmentation to R, the sequence 0 -> D[-1] -> C -> R -> 0,
        and compatibility with the Koszul colimit, checked term by term."""
        sys_ = self.system
        r = sys_.r
        ring = sys_.ring
        d_squared = all((self.sign_matrix(k + 1) @ self.sign_matrix(k)).is_zero() for k in range(r - 1))
        sizes = [len(self.terms(k)) for k in range(r + 1)]
        # D^i = C^{i+1}: D[-1] has C^k in degree k >= 1 and nothing in degree 0
        d_shift = [0] + sizes[1:]
        r_terms = [1] + [0] * r
        ses = all(d_shift[k] + r_terms[k] == sizes[k] for k in range(r + 1))
        augmentation = sizes[0] == 1 and self.terms(0)[0].x == ring.one()
        colimit = True
        for n in range(1, 4):
            ys_n = [x ** n for x in sys_.elements]
            ys_n1 = [x ** (n + 1) for x in sys_.elements]
            for k in range(r):
                left = koszul_cochain_differential(ys_n1, ring, k) @ koszul_transition(sys_, k)
                right = koszul_transition(sys_, k + 1) @ koszul_cochain_differential(ys_n, ring, k)
                colimit = colimit and left == right
        return {"d_squared_zero": d_squared, "short_exact_sequence": ses,
                "augmentation": augmentation, "koszul_colimit": colimit, "term_sizes": sizes}


# -- local cohomology ----------------------------------------------------------------

@dataclass(frozen=True)
class LocalCohomologyVerdict:
    H0: FPModule
    higher: tuple  # rank witness per degree 1..r, 0 meaning Zero

    def __eq__(self, other) -> bool:
        if not isinstance(other, LocalCohomologyVerdict):
            return NotImplemented
        return self.H0 == other.H0 and _trim(self.higher) == _trim(other.higher)

    def __hash__(self) -> int:
        return hash((self.H0, _trim(self.higher)))

    def to_json(self) -> dict:
        return {"H0": self.H0.to_json(),
                "higher": ["Zero" if not w else {"NonZero": {"rank": w}} for w in self.higher]}


def _trim(ws: tuple) -> tuple:
    ws = list(ws)
    while ws and not ws[-1]:
        ws.pop()
    return tuple(ws)


def local_cohomology(M: FPModule, system: ElementSystem) -> LocalCohomologyVerdict:
    ring = M.ring
    g = system.reduced
    r = system.r
    if ring.is_unit(g):
        return LocalCohomologyVerdict(FPModule.zero(ring), (0,) * r)
    if not g:
        return LocalCohomologyVerdict(M, (0,) * r)
    H0 = FPModule.from_invariants(ring, 0, [ring.g_part(d, g) for d in M.invariant_factors])
    return LocalCohomologyVerdict(H0, (M.free_rank,) + (0,) * (r - 1))


def torsion_by_kernels(M: FPModule, g: Element) -> FPModule:
    """Union of the kernels of g^n on M, for n up to the invariant-factor bound."""
    ring = M.ring
    if not g:
        return M
    if ring.is_unit(g):
        return FPModule.zero(ring)
    bound = max((ring.adic_length(d, g) for d in M.invariant_factors), default=0)
    return ModuleMap.multiplication(M, g ** max(bound, 1)).kernel().source


def h0_via_koszul(M: FPModule, system: ElementSystem) -> FPModule:
    """Top Koszul homology 0 :_M (x^n) at n past the invariant-factor bound."""
    ring = M.ring
    g = system.reduced
    if not g:
        return M
    n = 1 + max((ring.adic_length(d, x) for d in M.invariant_factors for x in system.elements if x), default=0)
    return koszul_homology(system, [n] * system.r, M)[-1]


@dataclass(frozen=True)
class RadicalInvarianceReport:
    equal: bool
    alpha: int
    witness_xy: int  # smallest c with gcd(x)^c in (y_1^alpha, ...)
    witness_yx: int

    def to_json(self) -> dict:
        return {"equal_verdicts": self.equal, "alpha": self.alpha,
                "cofinality_witness_x_in_y": self.witness_xy, "cofinality_witness_y_in_x": self.witness_yx}


def cofinality_witness(g: Element, system: ElementSystem, alpha: int) -> int:
    """Smallest c with g^c in (x_1^alpha, ..., x_r^alpha)."""
    ring = system.ring
    target = ring.gcd(*(x ** alpha for x in system.elements))
    c = ring.radical_exponent(g, target)
    if c is None:
        raise PreconditionError("element is not in the radical of the system")
    return c


def radical_invariance_check(xs: ElementSystem, ys: ElementSystem, M: FPModule, alpha: int = 2) -> RadicalInvarianceReport:
    ring = M.ring
    gx, gy = xs.reduced, ys.reduced
    if not ring.same_radical(gx, gy):
        raise PreconditionError("radicals differ")
    equal = local_cohomology(M, xs) == local_cohomology(M, ys)
    return RadicalInvarianceReport(equal, alpha, cofinality_witness(gx, ys, alpha), cofinality_witness(gy, xs, alpha))


# -- flat test modules ------------------------------------------------------------------

@dataclass(frozen=True)
class FlatTestModule:
    """F = sum of the localizations R_{x_i}."""

    summands: tuple

    @classmethod
    def from_elements(cls, ring: Ring, elements: Sequence) -> "FlatTestModule":
        return cls(tuple(SymbolicLocalization(ring, ring.parse(x)) for x in elements))

    @classmethod
    def from_system(cls, system: ElementSystem) -> "FlatTestModule":
        return cls.from_elements(system.ring, system.elements)

    def describe(self) -> str:
        return " + ".join(s.describe() for s in self.summands) or "0"


def flat_test_validate(F: FlatTestModule, I: Ideal) -> bool:
    """F (x) R/I = 0, i.e. every x_i lies in Rad I."""
    ring = I.ring
    return all(ring.radical_exponent(s.x, I.reduced) is not None for s in F.summands)


def localization_tensor_vanishes(x: Element, X: FPModule) -> bool:
    """R_x (x) X = 0: X is torsion and x is invertible on no summand."""
    ring = X.ring
    if not x:
        return True
    if X.free_rank:
        return False
    return all(ring.is_unit(ring.coprime_part(d, x)) for d in X.invariant_factors)
