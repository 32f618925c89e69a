import itertools
import random

import pytest

from oracles import brute_hom, jordan
from sgcat import (FieldSpec, linear_quiver, omega_nc, one_loop, projective_module, regular_bimodule,
                   regular_module, simple_module, truncated_polynomial, two_cycle, two_loop)
from sgcat.exactla import Matrix, rank
from sgcat.modules import ModuleMorphism, direct_sum, hom_space, module_from_matrices, submodule
from sgcat.tensor import TensorProduct, associator, tensor_bimodules, tensor_over_algebra

F3 = FieldSpec(3)


def jordan_module(alg, k):
    return module_from_matrices(alg, k, {"e[1]": Matrix.identity(alg.field, k), "x": jordan(k)}, f"J{k}")


@pytest.mark.parametrize("k, l", list(itertools.product([1, 2, 3], repeat=2)))
def test_hom_dims_match_enumeration(k, l):
    A = truncated_polynomial(3, F3)
    X, Y = jordan_module(A, k), jordan_module(A, l)
    H = hom_space(X, Y)
    assert 3 ** H.dim == len(brute_hom(jordan(k), jordan(l), 3))
    for f in H:
        assert f.is_morphism()


def test_hom_dims_quiver_modules():
    A = linear_quiver(2)
    P1, P2, S1, S2 = (projective_module(A, 0), projective_module(A, 1), simple_module(A, 0),
                      simple_module(A, 1))
    assert hom_space(P2, P1).dim == 1
    assert hom_space(P1, P2).dim == 0
    assert hom_space(P1, S1).dim == 1
    assert hom_space(S2, P1).dim == 1
    assert hom_space(S1, P1).dim == 0


def test_cover_of_simple(small_algebra):
    A = small_algebra
    for v in range(A.num_vertices):
        S = simple_module(A, v)
        cov = S.cover()
        assert cov.pi_morphism().is_morphism()
        assert rank(cov.pi) == S.dim
        P = projective_module(A, v)
        assert cov.P.dim == P.dim
        assert cov.kernel.cols == P.dim - 1
        assert (cov.pi @ cov.kernel).is_zero()


def test_cover_lift():
    A = truncated_polynomial(3)
    X = jordan_module(A, 2)
    Y = jordan_module(A, 3)
    f = hom_space(X, Y)[0].matrix
    cx, cy = X.cover(), Y.cover()
    h = cx.lift(f, cy)
    assert cy.pi @ h == f @ cx.pi


def test_direct_sum_and_submodule():
    A = two_cycle()
    X = direct_sum(projective_module(A, 0), simple_module(A, 1))
    assert X.dim == 3
    assert sorted(X.dimension_vector()) == [1, 2]
    L = regular_module(A)
    rad = Matrix.from_rows(A.field, [[0, 0], [0, 0], [1, 0], [0, 1]])
    R = submodule(L, rad, check=True)
    assert R.dim == 2


def test_regular_tensor_is_identity():
    A = two_cycle()
    M = omega_nc(A).bimodule
    T = TensorProduct(M, regular_bimodule(A))
    assert T.dim == M.dim
    X = simple_module(A, 0)
    assert tensor_over_algebra(regular_bimodule(A), X).dim == X.dim


@pytest.mark.parametrize("make", [one_loop, two_cycle, two_loop, lambda: linear_quiver(3)])
def test_tensor_balanced(make):
    A = make()
    M = omega_nc(A).bimodule
    T = TensorProduct(M, projective_module(A, 0))
    Xp = T.X
    F = A.field
    for m in range(M.dim):
        mv = Matrix.unit_column(F, M.dim, m)
        for a in range(A.dim):
            for x in range(Xp.dim):
                xv = Matrix.unit_column(F, Xp.dim, x)
                lhs = T.bil(M.ract_of(Matrix.unit_column(F, A.dim, a)) @ mv, xv)
                rhs = T.bil(mv, Xp.act_of(Matrix.unit_column(F, A.dim, a)) @ xv)
                assert lhs == rhs


def test_map_right_functorial():
    A = truncated_polynomial(3)
    M = omega_nc(A).bimodule
    X, Y, Z = jordan_module(A, 1), jordan_module(A, 2), jordan_module(A, 3)
    rng = random.Random(3)
    Txy, Tyz = hom_space(X, Y), hom_space(Y, Z)
    TX, TY, TZ = TensorProduct(M, X), TensorProduct(M, Y), TensorProduct(M, Z)
    for _ in range(5):
        f = Txy.combine(Matrix.column(A.field, [rng.randint(-3, 3) for _ in range(Txy.dim)])).matrix
        g = Tyz.combine(Matrix.column(A.field, [rng.randint(-3, 3) for _ in range(Tyz.dim)])).matrix
        lhs = TY.map_right(g, TZ) @ TX.map_right(f, TY)
        assert lhs == TX.map_right(g @ f, TZ)
        assert ModuleMorphism(TX.module, TY.module, TX.map_right(f, TY)).is_morphism()


def test_associator_is_isomorphism():
    A = two_cycle()
    M = omega_nc(A).bimodule
    iso = associator(M, M, simple_module(A, 0))
    assert iso.is_morphism()
    assert iso.source.dim == iso.target.dim == rank(iso.matrix)


def test_tensor_bimodule_checks():
    A = one_loop()
    M = omega_nc(A).bimodule
    MM = tensor_bimodules(M, M)
    MM.check()
    assert MM.dim == 2
