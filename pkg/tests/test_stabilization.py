import pytest

from oracles import jordan_syzygy, stable_end_dim_truncated
from sgcat import (FieldSpec, linear_quiver, one_loop, projective_module, regular_module, semisimple,
                   simple_module, truncated_polynomial, two_cycle, two_loop)
from sgcat.errors import HorizonExceeded, InputError
from sgcat.exactla import rank
from sgcat.modules import direct_sum, hom_space
from sgcat.omega import syzygy
from sgcat.stabilization import (MinimalChain, StabilizedObject, global_dim_probe, in_add,
                                 iso_in_stabilization, sg_hom, split_mono_retraction,
                                 stable_hom, strong_grading_index)


@pytest.mark.parametrize("n", [2, 3])
@pytest.mark.parametrize("p", [2, 3])
def test_sg_hom_matches_brute_force(n, p):
    A = truncated_polynomial(n, FieldSpec(p))
    S = simple_module(A, 0)
    horizon = 4
    rep = sg_hom(S, 0, S, 0, horizon)
    k, expected = 1, []
    for _ in range(horizon + 1):
        expected.append(stable_end_dim_truncated(n, k, p))
        k = jordan_syzygy(n, k)
    assert rep.dims == expected
    assert rep.verdict == {"kind": "Stabilized", "at": 0, "dim": 1}


@pytest.mark.parametrize("via", ["cover", "E", "EE"])
def test_stable_hom_independent_of_epi(via):
    A = truncated_polynomial(3)
    S = simple_module(A, 0)
    R = MinimalChain(S)[1]
    for X, Y in [(S, S), (R, R), (S, R), (R, S)]:
        assert stable_hom(X, Y, via=via).dim == stable_hom(X, Y, via="cover").dim


def test_projectives_vanish_stably(small_algebra):
    A = small_algebra
    L = regular_module(A)
    for v in range(A.num_vertices):
        S = simple_module(A, v)
        assert stable_hom(L, S).dim == 0
        assert stable_hom(S, L).dim == 0


def test_models_agree():
    for A in [truncated_polynomial(2), two_cycle(), linear_quiver(3)]:
        for v in range(A.num_vertices):
            S = simple_module(A, v)
            a = sg_hom(S, 0, S, 0, 3, model="minimal")
            b = sg_hom(S, 0, S, 0, 3, model="nc")
            assert a.dims == b.dims and a.verdict == b.verdict


def test_suspension_consistency():
    A = two_cycle()
    S1, S2 = simple_module(A, 0), simple_module(A, 1)
    base = sg_hom(S1, 0, S2, 1, 6)
    shifted = sg_hom(S1, 2, S2, 3, 6)
    assert base.dims == shifted.dims
    assert [p + 2 for p in base.steps] == shifted.steps
    X = StabilizedObject(S1, 0).suspend(2)
    assert X.shift == 2


def test_cross_shift_two_cycle():
    # Ω S1 = S2 over the radical-square-zero 2-cycle
    A = two_cycle()
    S1, S2 = simple_module(A, 0), simple_module(A, 1)
    assert sg_hom(S2, 0, S1, 1, 6).verdict["dim"] == 1
    assert sg_hom(S1, 0, S1, 1, 6).verdict["dim"] == 0


@pytest.mark.parametrize("v", [0, 1, 2])
def test_hereditary_simples_vanish(v):
    A = linear_quiver(3)
    S = simple_module(A, v)
    rep = sg_hom(S, 0, S, 0, 12)
    assert rep.stabilized and rep.verdict["dim"] == 0


def test_horizon_precondition():
    A = truncated_polynomial(2)
    S = simple_module(A, 0)
    with pytest.raises(InputError):
        sg_hom(S, 0, S, 3, 0)


def test_size_guard_is_inconclusive():
    A = two_loop()
    S = simple_module(A, 0)
    rep = sg_hom(S, 0, S, 0, 12)
    assert rep.verdict["kind"] == "Inconclusive"
    assert "size_limit_at" in rep.verdict


def test_in_add_properties():
    A = truncated_polynomial(2)
    S, L = simple_module(A, 0), regular_module(A)
    assert not in_add(S, L)
    assert in_add(L, direct_sum(L, S))
    assert in_add(S, S)
    cert = in_add(direct_sum(S, S), S)
    assert cert and cert.verify(direct_sum(S, S))


def test_split_mono_retraction():
    A = linear_quiver(2)
    P2, P1 = projective_module(A, 1), projective_module(A, 0)
    f = hom_space(P2, P1)[0]
    r = split_mono_retraction(f)
    assert r is not None
    assert r.shape == (syzygy(P2).dim, syzygy(P1).dim)


def test_iso_in_stabilization():
    A = truncated_polynomial(2)
    S, L = simple_module(A, 0), regular_module(A)
    assert iso_in_stabilization(S, 0, S, 1)["kind"] == "Isomorphic"
    assert iso_in_stabilization(S, 0, L, 0)["kind"] == "NotIsomorphicUpTo"


@pytest.mark.parametrize("make, p0", [(truncated_polynomial, 0), (one_loop, 0), (two_cycle, 0),
                                      (two_loop, 0), (lambda: linear_quiver(2), 2),
                                      (lambda: linear_quiver(3), 3), (lambda: semisimple(3), 1)])
def test_strong_grading_index(make, p0):
    A = make(2) if make is truncated_polynomial else make()
    cert = strong_grading_index(A)
    assert cert.index == p0 and cert.verify()


def test_strong_grading_horizon_exceeded():
    with pytest.raises(HorizonExceeded):
        strong_grading_index(linear_quiver(3), horizon=1)


@pytest.mark.parametrize("make, kind, bound", [
    (lambda: semisimple(3), "FiniteWithBound", 0),
    (lambda: linear_quiver(2), "FiniteWithBound", 1),
    (lambda: linear_quiver(3), "FiniteWithBound", 2),
    (lambda: truncated_polynomial(2), "NotDetectedUpTo", 12),
    (lambda: truncated_polynomial(3), "NotDetectedUpTo", 12),
    (two_cycle, "NotDetectedUpTo", 12),
])
def test_global_dim_probe(make, kind, bound):
    v = global_dim_probe(make(), 12)
    assert v["kind"] == kind
    assert v.get("bound", v.get("horizon")) == bound


def test_global_dim_probe_size_note():
    v = global_dim_probe(two_loop(), 12)
    assert v["kind"] == "NotDetectedUpTo" and v["horizon"] < 12 and "size_limit" in v


def test_minimal_chain_ranks():
    A = truncated_polynomial(3)
    ch = MinimalChain(simple_module(A, 0))
    assert [ch[k].dim for k in range(5)] == [1, 2, 1, 2, 1]
    assert rank(ch[1].acts[A.arrow_indices[0]]) == 1
