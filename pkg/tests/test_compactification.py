import time

import pytest

from gluenerve import corpus
from gluenerve.anodyne import validate_certificate
from gluenerve.compactification import (
    alpha_comm,
    alpha_grid,
    box_bounds,
    build_box,
    build_cpt,
    certify_box,
    enumerate_compactifications,
    enumerate_kpt,
    piece_of,
    tau_chain,
)
from gluenerve.errors import UsageError
from gluenerve.fincat import check_cofiltered
from gluenerve.grids import COMM, grid_simplex
from gluenerve.nerve import faces, horn, nerve


def test_cpt_sizes_and_hasse():
    for n in range(5):
        assert len(build_cpt(n)) == (n + 1) * (n + 2) // 2
    assert len(build_cpt(2).covers()) == 6


def test_box_1_is_inner_horn():
    B = build_box(1)
    H = horn(2, 1)
    relabel = {0: (0, 0), 1: (0, 1), 2: (1, 1)}
    assert B.chains == {tuple(relabel[x] for x in c) for c in H.chains}


def test_box_bounds_zero_based():
    assert box_bounds(2) == ([(0, 0), (0, 1), (0, 2)], [(0, 2), (1, 2), (2, 2)])


@pytest.mark.parametrize("n, moves", [(1, 1), (2, 14), (3, 142)])
def test_box_certificates(n, moves):
    cert = certify_box(n)
    validate_certificate(cert)
    assert len(cert.moves) == moves
    assert cert.target == nerve(build_cpt(n))


def test_box_1_move():
    cert = certify_box(1)
    assert cert.moves[0].chain == ((0, 0), (0, 1), (1, 1)) and cert.moves[0].k == 1


@pytest.mark.parametrize("n", [1, 2, 3])
def test_box_search_agrees(n):
    found = certify_box(n, method="search")
    validate_certificate(found)
    assert len(found.moves) == len(certify_box(n).moves)


def test_kpt_of_poset_arrow_is_interval():
    I = corpus.grid21_all()
    C = I.C
    f = C.arrow((0, 0), (2, 1))
    K = enumerate_kpt(C, I.E1, I.E2, f)
    # with both classes everything, the middle object ranges over [x, y]
    assert sorted(k.obj((0, 1)) for k in K.objects) == sorted(
        z for z in C.objects if C.poset.leq((0, 0), z) and C.poset.leq(z, (2, 1))
    )
    assert check_cofiltered(K)


def test_kpt_of_object_is_single_point():
    I = corpus.square11()
    K = enumerate_kpt(I.C, I.E1, I.E2, (0, 0))
    assert len(K.objects) == 1 and check_cofiltered(K)


def test_kpt_empty_without_factorization():
    I = corpus.broken_factorization()
    K = enumerate_kpt(I.C, I.E1, I.E2, I.C.arrow((0, 0), (0, 1)))
    r = check_cofiltered(K)
    assert not K.objects and not r and r.reason == "empty"


def test_kpt_finset_has_initial_factorization():
    I = corpus.finset_injections()
    C = I.C
    f = C.function(1, 2, [1])
    K = enumerate_kpt(C, I.E1, I.E2, f)
    assert check_cofiltered(K)
    # the trivial factorization through x maps uniquely to every other one
    start = [k for k in K.objects if k.obj((0, 1)) == 1]
    assert any(all(len(K.hom(s, k)) == 1 for k in K.objects) for s in start)


def test_compactification_edges_compose_to_tau():
    I = corpus.grid21_all()
    C = I.C
    f, g = C.arrow((0, 0), (1, 0)), C.arrow((1, 0), (2, 1))
    tau = tau_chain(C, [f, g])
    for s in enumerate_compactifications(C, I.E1, I.E2, tau):
        assert s.diagonal_steps() == (f, g)


def test_tau_chain_rejects_non_composable():
    I = corpus.grid21_all()
    C = I.C
    with pytest.raises(UsageError):
        tau_chain(C, [C.arrow((0, 0), (1, 0)), C.arrow((0, 1), (1, 1))])


def test_alpha_comm_is_simplicial():
    I = corpus.grid21_all()
    C = I.C
    tau = tau_chain(C, [C.arrow((0, 0), (1, 0)), C.arrow((1, 0), (2, 1))])
    for s in enumerate_compactifications(C, I.E1, I.E2, tau):
        A = alpha_comm(s)
        assert set(A) == build_box(2).chains
        for gam, g in A.items():
            grid_simplex(C, g.objects, I.E1, I.E2, COMM, g.rows, g.cols)
            assert g.diagonal() == tuple(s.obj(x) for x in gam)
            if len(gam) > 1:
                for k, fc in enumerate(faces(gam)):
                    assert A[fc] == g.face(k)


def test_piece_of():
    assert piece_of(2, ((0, 1), (1, 1))) == 1
    with pytest.raises(UsageError):
        piece_of(2, ((0, 0), (2, 2)))
