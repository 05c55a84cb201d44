"""Finitely presented modules over a Euclidean domain.

A module is the cokernel of its presentation matrix ``A: R^m -> R^n``;
columns of ``A`` are relations among the ``n`` generators.  Elements of
a module are written as vectors in the ambient free module ``R^n``, and
a :class:`ModuleMap` is a matrix between ambient free covers that sends
relations to relations.

Hom, Ext^1, tensor and Tor_1 come in two independent flavours: the
summand rules on the invariant-factor decomposition (the public
functions :func:`hom`, :func:`ext1`, :func:`tensor`, :func:`tor1`) and
computations on presentations through a free resolution
(:class:`ResolutionFunctor`, :func:`tensor_via_presentation`,
:func:`tor1_via_resolution`).
"""
from __future__ import annotations

from functools import cached_property
from typing import Iterable, Sequence

from .matrix import Matrix, SNFResult, column_basis, kernel_basis, smith_normal_form, solve
from .ring import Element, Ring, RingMismatchError


class FPModule:
    """coker(presentation).  Equality means isomorphism (same invariants)."""

    def __init__(self, ring: Ring, presentation: Matrix):
        if presentation.ring != ring:
            raise RingMismatchError(f"presentation over {presentation.ring}, module over {ring}")
        self.ring = ring
        self.presentation = presentation

    # the Smith form is computed on first use; many intermediate modules never need it
    @cached_property
    def _snf(self):
        return smith_normal_form(self.presentation)

    @cached_property
    def _nonzero_diagonal(self) -> list:
        return [d for d in self._snf.diagonal if d]

    @property
    def free_rank(self) -> int:
        return self.presentation.rows - len(self._nonzero_diagonal)

    @cached_property
    def invariant_factors(self) -> tuple[Element, ...]:
        return tuple(d for d in self._nonzero_diagonal if not self.ring.is_unit(d))

    # -- constructors ---------------------------------------------------------
    @classmethod
    def from_invariants(cls, ring: Ring, free_rank: int = 0, factors: Iterable[Element] = ()) -> "FPModule":
        """R^free_rank + sum R/(d); units are dropped and zero factors become free."""
        tors, free = [], free_rank
        for d in factors:
            if not d:
                free += 1
            elif not ring.is_unit(d):
                tors.append(ring.normalize(d))
        n = len(tors) + free
        return cls(ring, Matrix.diagonal(ring, tors, rows=n, cols=len(tors)))

    @classmethod
    def free(cls, ring: Ring, n: int) -> "FPModule":
        return cls(ring, Matrix.zeros(ring, n, 0))

    @classmethod
    def zero(cls, ring: Ring) -> "FPModule":
        return cls.free(ring, 0)

    @classmethod
    def cyclic(cls, ring: Ring, d: Element) -> "FPModule":
        return cls(ring, Matrix(ring, [[d]]))

    # -- structure ------------------------------------------------------------
    @property
    def ngens(self) -> int:
        return self.presentation.rows

    def invariants(self) -> tuple[int, tuple[Element, ...]]:
        return self.free_rank, self.invariant_factors

    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.invariant_factors

    def is_torsion(self) -> bool:
        return self.free_rank == 0

    def annihilator(self) -> Element:
        """Generator of the annihilator ideal (0 when the free rank is positive)."""
        if self.free_rank:
            return self.ring.zero()
        return self.invariant_factors[-1] if self.invariant_factors else self.ring.one()

    def __eq__(self, other) -> bool:
        if not isinstance(other, FPModule):
            return NotImplemented
        return self.ring == other.ring and self.invariants() == other.invariants()

    def __hash__(self) -> int:
        return hash((self.ring, self.invariants()))

    def direct_sum(self, *others: "FPModule") -> "FPModule":
        mods = (self,) + others
        for m in others:
            if m.ring != self.ring:
                raise RingMismatchError("direct sum of modules over different rings")
        return FPModule(self.ring, block_diagonal(self.ring, [m.presentation for m in mods]))

    def __add__(self, other: "FPModule") -> "FPModule":
        return self.direct_sum(other)

    def power(self, k: int) -> "FPModule":
        return FPModule(self.ring, block_diagonal(self.ring, [self.presentation] * k))

    def contains_relation(self, v: Matrix) -> bool:
        """True iff every column of v lies in the relation submodule (is zero in M)."""
        return solve(self.presentation, v, self._snf) is not None

    @cached_property
    def _normal(self) -> tuple["FPModule", Matrix, Matrix]:
        ring = self.ring
        snf = self._snf
        diag = snf.diagonal
        n = self.ngens
        keep_tors = [i for i, d in enumerate(diag) if d and not ring.is_unit(d)]
        keep_free = list(range(snf.rank, n))
        keep = keep_tors + keep_free
        N = FPModule.from_invariants(ring, len(keep_free), [diag[i] for i in keep_tors])
        to_new = snf.U.select_rows(keep)
        to_old = snf.U_inv.select_columns(keep)
        return N, N.reduce(to_new), to_old

    def normal_form(self) -> tuple["FPModule", Matrix, Matrix]:
        """(N, to_new, to_old): N has diagonal presentation and is isomorphic to self.

        ``to_new`` maps ambient vectors of self to those of N, ``to_old`` back.
        """
        return self._normal

    def is_diagonal_normal(self) -> bool:
        # checked on the matrix itself, so no Smith form is needed
        P, ring = self.presentation, self.ring
        if not P.is_diagonal() or P.cols > P.rows:
            return False
        diag = [P[i, i] for i in range(P.cols)]
        if not all(d and not ring.is_unit(d) and ring.normalize(d) == d for d in diag):
            return False
        return all(ring.divides(a, b) for a, b in zip(diag, diag[1:]))

    def reduce(self, m: Matrix) -> Matrix:
        """Reduce rows modulo diagonal relations (no-op for other presentations)."""
        if not self.is_diagonal_normal():
            return m
        data = m.tolist()
        for i, d in enumerate(self.presentation.diagonal_entries()):
            data[i] = [x % d for x in data[i]]
        return Matrix._trusted(self.ring, data, m.rows, m.cols)

    def describe(self) -> str:
        fmt = self.ring.format
        base = str(self.ring)
        parts = []
        if self.free_rank:
            parts.append(base if self.free_rank == 1 else f"{base}^{self.free_rank}")
        for d in self.invariant_factors:
            parts.append(f"{base}/({fmt(d)})")
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {
            "free_rank": self.free_rank,
            "invariant_factors": [self.ring.format(d) for d in self.invariant_factors],
        }

    def __repr__(self) -> str:
        return f"FPModule({self.describe()})"


def block_diagonal(ring: Ring, blocks: Sequence[Matrix]) -> Matrix:
    rows = sum(b.rows for b in blocks)
    cols = sum(b.cols for b in blocks)
    z = ring.zero()
    data = [[z] * cols for _ in range(rows)]
    r0 = c0 = 0
    for b in blocks:
        for i in range(b.rows):
            row = b.row(i)
            for j in range(b.cols):
                data[r0 + i][c0 + j] = row[j]
        r0 += b.rows
        c0 += b.cols
    return Matrix._trusted(ring, data, rows, cols)


class ModuleMapError(ValueError):
    """A matrix does not define a homomorphism between the given modules."""


class ModuleMap:
    """Homomorphism source -> target given by a matrix on ambient free covers."""

    def __init__(self, source: FPModule, target: FPModule, matrix: Matrix, check: bool = True):
        if matrix.shape != (target.ngens, source.ngens):
            raise ValueError(f"matrix shape {matrix.shape} does not fit {target.ngens}x{source.ngens}")
        self.source = source
        self.target = target
        self.matrix = matrix
        if check and not target.contains_relation(matrix @ source.presentation):
            raise ModuleMapError("matrix does not send relations into relations")

    @property
    def ring(self) -> Ring:
        return self.source.ring

    @classmethod
    def identity(cls, M: FPModule) -> "ModuleMap":
        return cls(M, M, Matrix.identity(M.ring, M.ngens), check=False)

    @classmethod
    def multiplication(cls, M: FPModule, c: Element) -> "ModuleMap":
        return cls(M, M, Matrix.scalar(M.ring, M.ngens, c), check=False)

    def compose(self, inner: "ModuleMap") -> "ModuleMap":
        """self after inner."""
        return ModuleMap(inner.source, self.target, self.target.reduce(self.matrix @ inner.matrix), check=False)

    def __matmul__(self, inner: "ModuleMap") -> "ModuleMap":
        return self.compose(inner)

    def _preimage(self) -> Matrix:
        # generators of {c in R^n_source : F c lies in the target relations}
        F, BT = self.matrix, self.target.presentation
        Kb = kernel_basis(F.hstack(BT))
        return Kb.select_rows(range(self.source.ngens))

    def kernel(self) -> "ModuleMap":
        """Inclusion of the kernel into the source."""
        ring = self.ring
        P = column_basis(self._preimage())
        C = solve(P, self.source.presentation)
        assert C is not None, "source relations must lie in the preimage of zero"
        K = FPModule(ring, C)
        N, _, to_old = K.normal_form()
        return ModuleMap(N, self.source, self.source.reduce(P @ to_old), check=False)

    def image(self) -> "ModuleMap":
        """Inclusion of the image into the target."""
        P = self._preimage()
        I = FPModule(self.ring, P)
        N, _, to_old = I.normal_form()
        return ModuleMap(N, self.target, self.target.reduce(self.matrix @ to_old), check=False)

    def cokernel(self) -> "ModuleMap":
        """Projection of the target onto the cokernel."""
        C = FPModule(self.ring, self.matrix.hstack(self.target.presentation))
        N, to_new, _ = C.normal_form()
        return ModuleMap(self.target, N, to_new, check=False)

    def lift_through(self, inclusion: "ModuleMap") -> "ModuleMap":
        """The map g with inclusion o g == self; requires im self inside im inclusion."""
        if inclusion.target.ngens != self.target.ngens:
            raise ValueError("lift through a map with a different target")
        G = inclusion.matrix
        Z = solve(G.hstack(self.target.presentation), self.matrix)
        if Z is None:
            raise ModuleMapError("image does not factor through the given inclusion")
        H = Z.select_rows(range(G.cols))
        return ModuleMap(self.source, inclusion.source, inclusion.source.reduce(H), check=False)

    def is_zero(self) -> bool:
        return self.target.contains_relation(self.matrix)

    def is_injective(self) -> bool:
        return self.kernel().source.is_zero()

    def is_surjective(self) -> bool:
        return self.cokernel().target.is_zero()

    def is_isomorphism(self) -> bool:
        return self.is_injective() and self.is_surjective()

    def __repr__(self) -> str:
        return f"ModuleMap({self.source.describe()} -> {self.target.describe()})"


def direct_sum_map(maps: Sequence[ModuleMap]) -> ModuleMap:
    ring = maps[0].ring
    src = FPModule(ring, block_diagonal(ring, [f.source.presentation for f in maps]))
    tgt = FPModule(ring, block_diagonal(ring, [f.target.presentation for f in maps]))
    return ModuleMap(src, tgt, block_diagonal(ring, [f.matrix for f in maps]), check=False)


class Ideal:
    """An ideal of a Euclidean domain, reduced to a principal generator."""

    def __init__(self, ring: Ring, generators: Iterable):
        gens = tuple(ring.parse(g) for g in generators)
        ring.check(*gens)
        self.ring = ring
        self.generators = gens
        self.reduced = ring.gcd(*gens) if gens else ring.zero()

    @classmethod
    def principal(cls, ring: Ring, g: Element) -> "Ideal":
        return cls(ring, [g])

    @property
    def g(self) -> Element:
        return self.reduced

    def is_zero(self) -> bool:
        return not self.reduced

    def is_unit(self) -> bool:
        return self.ring.is_unit(self.reduced)

    def is_proper_nonzero(self) -> bool:
        return bool(self.reduced) and not self.is_unit()

    def contains(self, x: Element) -> bool:
        return self.ring.divides(self.reduced, x)

    def __le__(self, other: "Ideal") -> bool:
        """Containment J <= I."""
        return other.contains(self.reduced)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Ideal):
            return NotImplemented
        return self.ring == other.ring and self.reduced == other.reduced

    def __hash__(self) -> int:
        return hash((self.ring, self.reduced))

    def to_json(self) -> dict:
        fmt = self.ring.format
        return {"generators": [fmt(x) for x in self.generators], "reduced": fmt(self.reduced)}

    def __repr__(self) -> str:
        return f"Ideal({self.ring.format(self.reduced)})"


def _check_same_ring(*mods: FPModule) -> Ring:
    ring = mods[0].ring
    for m in mods[1:]:
        if m.ring != ring:
            raise RingMismatchError(f"modules over {ring} and {m.ring}")
    return ring


# -- summand rules --------------------------------------------------------------

def invariants(M: FPModule) -> tuple[int, tuple[Element, ...]]:
    return M.invariants()


def hom(M: FPModule, N: FPModule) -> FPModule:
    """Hom(M, N) from Hom(R,N)=N, Hom(R/a,R)=0, Hom(R/a,R/b)=R/gcd(a,b)."""
    ring = _check_same_ring(M, N)
    r, ds = M.invariants()
    s, es = N.invariants()
    factors = list(es) * r + [ring.gcd(d, e) for d in ds for e in es]
    return FPModule.from_invariants(ring, r * s, factors)


def ext1(M: FPModule, N: FPModule) -> FPModule:
    """Ext^1(M, N) from Ext^1(R,N)=0 and Ext^1(R/a,N)=N/aN."""
    ring = _check_same_ring(M, N)
    _, ds = M.invariants()
    s, es = N.invariants()
    factors = [d for d in ds for _ in range(s)] + [ring.gcd(d, e) for d in ds for e in es]
    return FPModule.from_invariants(ring, 0, factors)


def tensor(M: FPModule, N: FPModule) -> FPModule:
    ring = _check_same_ring(M, N)
    r, ds = M.invariants()
    s, es = N.invariants()
    factors = list(es) * r + list(ds) * s + [ring.gcd(d, e) for d in ds for e in es]
    return FPModule.from_invariants(ring, r * s, factors)


def tor1(M: FPModule, N: FPModule) -> FPModule:
    ring = _check_same_ring(M, N)
    _, ds = M.invariants()
    _, es = N.invariants()
    return FPModule.from_invariants(ring, 0, [ring.gcd(d, e) for d in ds for e in es])


# -- presentation routes ------------------------------------------------------

def free_resolution(M: FPModule) -> Matrix:
    """Injective presentation matrix A' with 0 -> R^k -A'-> R^n -> M -> 0 exact."""
    snf = M._snf
    # columns of A V with nonzero diagonal entry form a basis of the relations
    AV = M.presentation @ snf.V
    return AV.select_columns(range(snf.rank))


class ResolutionFunctor:
    """Hom(X, -) and Ext^1(X, -) computed from the free resolution of X.

    For 0 -> R^k -A-> R^n -> X -> 0, Hom(X, N) and Ext^1(X, N) are the
    kernel and cokernel of  A^T (x) N : N^n -> N^k.
    """

    def __init__(self, X: FPModule):
        self.X = X
        self.ring = X.ring
        self.A = free_resolution(X)
        self.n, self.k = self.A.rows, self.A.cols

    def _dual(self, N: FPModule) -> ModuleMap:
        ring = self.ring
        q = N.ngens
        Nn = FPModule(ring, block_diagonal(ring, [N.presentation] * self.n))
        Nk = FPModule(ring, block_diagonal(ring, [N.presentation] * self.k))
        return ModuleMap(Nn, Nk, self.A.T.kron(Matrix.identity(ring, q)), check=False)

    def hom_inclusion(self, N: FPModule) -> ModuleMap:
        _check_same_ring(self.X, N)
        return self._dual(N).kernel()

    def ext1_projection(self, N: FPModule) -> ModuleMap:
        _check_same_ring(self.X, N)
        return self._dual(N).cokernel()

    def hom(self, N: FPModule) -> FPModule:
        return self.hom_inclusion(N).source

    def ext1(self, N: FPModule) -> FPModule:
        return self.ext1_projection(N).target

    def hom_map(self, f: ModuleMap) -> ModuleMap:
        """Hom(X, f): Hom(X, N) -> Hom(X, N')."""
        inc = self.hom_inclusion(f.source)
        inc2 = self.hom_inclusion(f.target)
        Fn = Matrix.identity(self.ring, self.n).kron(f.matrix)
        pushed = ModuleMap(inc.source, inc2.target, Fn @ inc.matrix, check=False)
        return pushed.lift_through(inc2)

    def ext1_map(self, f: ModuleMap) -> ModuleMap:
        """Ext^1(X, f): Ext^1(X, N) -> Ext^1(X, N')."""
        p = self.ext1_projection(f.source)
        p2 = self.ext1_projection(f.target)
        Fk = Matrix.identity(self.ring, self.k).kron(f.matrix)
        # the cokernels share ambient coordinates with N^k; go back through a section of p
        section = _section_of_projection(p)
        matrix = p2.matrix @ Fk @ section
        return ModuleMap(p.target, p2.target, p2.target.reduce(matrix), check=False)


def _section_of_projection(p: ModuleMap) -> Matrix:
    """A matrix s with p.matrix @ s == id on the ambient of p.target (modulo relations)."""
    ring = p.ring
    target = p.target
    Z = solve(p.matrix.hstack(target.presentation), Matrix.identity(ring, target.ngens))
    if Z is None:
        raise ModuleMapError("projection is not surjective")
    return Z.select_rows(range(p.source.ngens))


def hom_via_resolution(M: FPModule, N: FPModule) -> FPModule:
    return ResolutionFunctor(M).hom(N)


def ext1_via_resolution(M: FPModule, N: FPModule) -> FPModule:
    return ResolutionFunctor(M).ext1(N)


def tensor_via_presentation(M: FPModule, N: FPModule) -> FPModule:
    ring = _check_same_ring(M, N)
    A, B = M.presentation, N.presentation
    left = A.kron(Matrix.identity(ring, N.ngens))
    right = Matrix.identity(ring, M.ngens).kron(B)
    return FPModule(ring, left.hstack(right))


def tor1_via_resolution(M: FPModule, N: FPModule) -> FPModule:
    """Tor_1(M, N) = ker(A' (x) N : N^k -> N^n) for the resolution A' of M."""
    ring = _check_same_ring(M, N)
    A = free_resolution(M)
    Nk = FPModule(ring, block_diagonal(ring, [N.presentation] * A.cols))
    Nn = FPModule(ring, block_diagonal(ring, [N.presentation] * A.rows))
    f = ModuleMap(Nk, Nn, A.kron(Matrix.identity(ring, N.ngens)), check=False)
    return f.kernel().source


# -- ideals and supports --------------------------------------------------------

def support_in_V(X: FPModule, I: Ideal) -> bool:
    """Supp X inside V(I): X is killed by a power of the reduced generator."""
    ring = I.ring
    g = I.reduced
    if not g:
        return True
    if ring.is_unit(g):
        return X.is_zero()
    if X.free_rank:
        return False
    return all(ring.is_unit(ring.part_split(d, g)[1]) for d in X.invariant_factors)


def quotient_by_power(M: FPModule, I: Ideal, alpha: int) -> FPModule:
    """M / I^alpha M, presented by the relations of M plus g^alpha times the identity."""
    if alpha < 1:
        raise ValueError("alpha must be at least 1")
    ring = M.ring
    ga = I.reduced ** alpha
    return FPModule(ring, M.presentation.hstack(Matrix.scalar(ring, M.ngens, ga)))


def quotient_map(M: FPModule, I: Ideal, alpha: int) -> ModuleMap:
    """The natural surjection M -> M / I^alpha M."""
    Q = quotient_by_power(M, I, alpha)
    return ModuleMap(M, Q, Matrix.identity(M.ring, M.ngens), check=False)


def multiplication_map(M: FPModule, c: Element) -> ModuleMap:
    return ModuleMap.multiplication(M, c)
