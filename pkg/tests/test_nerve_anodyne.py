import itertools

import pytest

from gluenerve.anodyne import (
    AnodyneCertificate,
    HornMove,
    NotFound,
    apply_move,
    certify_interval_union,
    certify_poset_pushout,
    check_pushout_hypotheses,
    pushout_poset,
    replay,
    search_certificate,
    validate_certificate,
)
from gluenerve.errors import (
    BaseMismatch,
    CertificateInvalid,
    HypothesisFailed,
    MoveInvalid,
    NotInner,
    NotSubcomplex,
)
from gluenerve.nerve import SubNerve, combine, faces, horn, nerve, simplices, standard_shape, sub_nerve
from gluenerve.poset import Poset, chain, grid, interval


def test_chain_nerve_counts():
    # Delta^n has C(n+1, k+1) non-degenerate k-simplices
    for n in range(5):
        K = nerve(chain(n))
        assert K.counts() == [len(list(itertools.combinations(range(n + 1), k + 1))) for k in range(n + 1)]


def test_faces():
    assert faces((0, 1, 2)) == [(1, 2), (0, 2), (0, 1)]


def test_horns():
    H = horn(2, 1)
    assert (0, 2) not in H and (0, 1, 2) not in H and (0, 1) in H
    assert len(standard_shape(3, "boundary")) == 14
    with pytest.raises(NotInner):
        standard_shape(2, "inner_horn", 0)


def test_subnerve_validation():
    with pytest.raises(NotSubcomplex):
        SubNerve(chain(2), [(0, 1, 2)])
    with pytest.raises(BaseMismatch):
        combine(nerve(chain(1)), nerve(chain(2)))


def test_maximal_chains_roundtrip():
    K = nerve(grid(1))
    again = SubNerve.from_maximal(grid(1), K.maximal_chains())
    assert again == K


def test_inner_horn_fills_in_one_move():
    cert = search_certificate(horn(2, 1), nerve(chain(2)))
    assert cert.moves == (HornMove((0, 1, 2), 1),)
    validate_certificate(cert)


def test_outer_horn_not_found():
    res = search_certificate(horn(2, 0), nerve(chain(2)))
    assert isinstance(res, NotFound) and res.exhausted and not res


def test_outer_horn_of_3_simplex_not_found():
    res = search_certificate(horn(3, 0), nerve(chain(3)))
    assert isinstance(res, NotFound) and res.exhausted


def test_inner_horn_3():
    for k in (1, 2):
        cert = search_certificate(horn(3, k), nerve(chain(3)))
        assert len(cert.moves) == 1
        validate_certificate(cert)


def test_moves_reject_bad_input():
    with pytest.raises(MoveInvalid):
        HornMove((0, 1, 2), 0)
    with pytest.raises(MoveInvalid):
        apply_move(nerve(chain(2)), HornMove((0, 1, 2), 1))
    with pytest.raises(MoveInvalid):
        # (1, 2) missing, so (0, 1, 2) is not a horn filler
        replay(SubNerve.from_maximal(chain(2), [(0, 1)]), [HornMove((0, 1, 2), 1)])


def test_tampered_certificate_rejected():
    cert = search_certificate(horn(2, 1), nerve(chain(2)))
    bad = AnodyneCertificate(cert.start, (), cert.target)
    with pytest.raises(CertificateInvalid):
        validate_certificate(bad)


def test_pushout_of_chains():
    P = Poset(["p"])
    Q = Poset(["p", "q"], [("q", "p")])
    R = Poset(["p", "r"], [("p", "r")])
    S = pushout_poset(P, Q, R)
    assert S.leq("q", "r")
    cert = certify_poset_pushout(P, Q, R)
    validate_certificate(cert)
    assert len(cert.moves) == 1


def test_pushout_hypothesis_failure():
    # P = {p} is not an up-set of Q when q sits above p
    P = Poset(["p"])
    Q = Poset(["p", "q"], [("p", "q")])
    with pytest.raises(HypothesisFailed) as e:
        check_pushout_hypotheses(P, Q, Q)
    assert e.value.name == "up-set" and e.value.witness == ("p", "q")


def test_interval_union_matches_search():
    G = grid(2)
    cert = certify_interval_union(G, [(0, 0), (1, 1)], [(1, 1), (2, 2)])
    validate_certificate(cert)
    found = search_certificate(cert.start, cert.target)
    assert found and len(found.moves) == len(cert.moves)


def test_interval_union_order_hypothesis():
    with pytest.raises(HypothesisFailed):
        certify_interval_union(chain(3), [2, 0], [3, 1])
