import itertools

import pytest
from hypothesis import given

from adicert.fpmod import (FPModule, Ideal, ModuleMap, ModuleMapError, ext1, ext1_via_resolution, hom,
                           hom_via_resolution, invariants, quotient_by_power, support_in_V, tensor,
                           tensor_via_presentation, tor1, tor1_via_resolution)
from adicert.matrix import Matrix
from adicert.ring import ZZ, RingMismatchError, product

from conftest import F5, int_modules

Z = FPModule.free(ZZ, 1)


def cyc(d):
    return FPModule.cyclic(ZZ, d)


def coker(rows):
    return FPModule(ZZ, Matrix(ZZ, rows, len(rows), len(rows[0]) if rows else 0))


def test_invariants_examples():
    assert invariants(coker([[2, 0], [0, 12]])) == (0, (2, 12))
    assert invariants(FPModule(ZZ, Matrix.zeros(ZZ, 2, 0))) == (2, ())
    assert invariants(coker([[2, 1], [0, 3]])) == (0, (6,))


def test_hom_examples():
    assert hom(cyc(6), cyc(4)) == cyc(2)
    M = coker([[2, 0], [0, 12]])
    assert hom(Z, M) == M
    assert hom(cyc(2), Z).is_zero()


def test_ext1_examples():
    assert ext1(cyc(6), cyc(4)) == cyc(2)
    assert ext1(FPModule.free(ZZ, 2), cyc(5)).is_zero()
    assert ext1(cyc(4), Z) == cyc(4)


def test_tensor_tor_examples():
    assert tensor(cyc(6), cyc(4)) == cyc(2)
    M = cyc(12) + Z
    assert tensor(M, Z) == M
    assert tor1(cyc(6), cyc(4)) == cyc(2)


def test_ring_mismatch():
    with pytest.raises(RingMismatchError):
        hom(Z, FPModule.free(F5, 1))


def test_support_in_V_examples():
    I = Ideal(ZZ, [2])
    assert support_in_V(cyc(8), I)
    assert not support_in_V(Z, I)
    assert not support_in_V(cyc(12), I)
    assert support_in_V(Z, Ideal(ZZ, [0]))
    assert not support_in_V(cyc(3), Ideal(ZZ, [1]))
    assert support_in_V(FPModule.zero(ZZ), Ideal(ZZ, [1]))


def test_quotient_by_power_examples():
    assert quotient_by_power(Z, Ideal(ZZ, [2]), 3) == cyc(8)
    assert quotient_by_power(cyc(12), Ideal(ZZ, [2]), 4) == cyc(4)
    R = FPModule.free(F5, 1)
    t = F5.parse("t")
    assert quotient_by_power(R, Ideal(F5, [t]), 2) == FPModule.cyclic(F5, t * t)


def test_ideal_reduction():
    I = Ideal(ZZ, ["4", "6"])
    assert I.reduced == 2 and I.generators == (4, 6)


@given(int_modules(), int_modules())
def test_routes_agree(M, N):
    assert hom(M, N) == hom_via_resolution(M, N)
    assert ext1(M, N) == ext1_via_resolution(M, N)
    assert tensor(M, N) == tensor_via_presentation(M, N)
    assert tor1(M, N) == tor1_via_resolution(M, N)


@given(int_modules(), int_modules())
def test_symmetry(M, N):
    assert tensor(M, N) == tensor(N, M)
    assert tor1(M, N) == tor1(N, M)


@given(int_modules(), int_modules(), int_modules())
def test_additivity(A, B, N):
    assert hom(A + B, N) == hom(A, N) + hom(B, N)
    assert hom(N, A + B) == hom(N, A) + hom(N, B)
    assert ext1(A + B, N) == ext1(A, N) + ext1(B, N)
    assert ext1(N, A + B) == ext1(N, A) + ext1(N, B)


@given(int_modules())
def test_quotient_depends_on_reduced_generator(M):
    for a in (1, 2, 3):
        assert quotient_by_power(M, Ideal(ZZ, [6]), a) == quotient_by_power(M, Ideal(ZZ, [12, 18, 30]), a)


def test_scrambled_presentation_keeps_invariants():
    M = coker([[2, 4, 0], [6, 0, 12], [0, 0, 0]])
    N = FPModule.from_invariants(ZZ, *M.invariants())
    assert M == N


def _cyclic_pool():
    return [product(ZZ, [p ** e for p, e in zip((2, 3, 5), es)]) for es in itertools.product(range(3), repeat=3)]


def test_tensor_kills_supported_modules():
    """M (x) R/I = 0 and Supp X in V(I) force M (x) X = 0, over all cyclic pairs."""
    I = Ideal(ZZ, [2])
    R_I = cyc(2)
    for d, e in itertools.product(_cyclic_pool(), repeat=2):
        M, X = cyc(d), cyc(e)
        if tensor(M, R_I).is_zero() and support_in_V(X, I):
            assert tensor(M, X).is_zero()


def test_module_maps():
    M, N = cyc(4), cyc(8)
    f = ModuleMap(M, N, Matrix(ZZ, [[2]], 1, 1))
    assert f.kernel().source.is_zero()
    assert f.cokernel().target == cyc(2)
    assert f.image().source == cyc(4)
    assert f.is_injective() and not f.is_surjective()
    with pytest.raises(ModuleMapError):
        ModuleMap(M, N, Matrix(ZZ, [[1]], 1, 1))
    g = ModuleMap.multiplication(cyc(12) + Z, 2)
    assert g.kernel().source == cyc(2)
    assert g.cokernel().target == cyc(2) + cyc(2)
