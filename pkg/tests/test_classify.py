import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from ternexp import bigarith
from ternexp.classify import (
    SPORADIC,
    Conclusion8,
    Lemma8Outcome,
    OddPrimeRepunit,
    PQSolution,
    Sporadic,
    TwoPowerFamily,
    TwoPrimeSolution,
    classify_2p,
    classify_pq,
    classify_pq_both,
    enum_2p,
    enum_pq,
    lemma7_matches,
)
from ternexp.errors import AmbiguousClassification, LemmaFalsification
from ternexp.lemmas import lemma6_check


def _oracle_2p(Xmax, lmax):
    out = set()
    for X in range(2, Xmax + 1):
        for ell in range(2, lmax + 1):
            f = sympy.factorint(X**ell - 1)
            if len(f) == 2 and 2 in f:
                (p,) = set(f) - {2}
                out.add((p, X, ell, f[2], f[p]))
    return out


def _oracle_pq(Xmax, lmax):
    out = set()
    for X in range(2, Xmax + 1):
        for ell in range(2, lmax + 1):
            f = sympy.factorint(X**ell - 1)
            if len(f) == 2 and 2 not in f:
                p, q = sorted(f)
                out.add((p, q, X, ell, f[p], f[q]))
    return out


def test_enum_2p_examples():
    small = {s.astuple() for s in enum_2p(17, 4).solutions}
    assert set(SPORADIC) <= small
    assert 33**2 - 1 == 1088 == 2**6 * 17
    assert (17, 33, 2, 6, 1) in {s.astuple() for s in enum_2p(33, 2).solutions}
    assert (31, 5, 3, 2, 1) in {s.astuple() for s in enum_2p(5, 3).solutions}


def test_enum_2p_matches_factorint_oracle():
    res = enum_2p(120, 6)
    assert res.complete
    assert {s.astuple() for s in res.solutions} == _oracle_2p(120, 6)


def test_enum_pq_examples():
    assert (3, 5, 4, 2, 1, 1) in {s.astuple() for s in enum_pq(4, 2).solutions}
    assert (23, 89, 2, 11, 1, 1) in {s.astuple() for s in enum_pq(2, 11).solutions}
    assert (7, 73, 8, 3, 1, 1) in {s.astuple() for s in enum_pq(8, 3).solutions}


def test_enum_pq_matches_factorint_oracle():
    res = enum_pq(60, 6)
    assert res.complete
    assert {s.astuple() for s in res.solutions} == _oracle_pq(60, 6)


def test_solution_invariants():
    with pytest.raises(ValueError):
        TwoPrimeSolution(3, 5, 2, 3, 2)
    with pytest.raises(ValueError):
        PQSolution(5, 3, 4, 2, 1, 1)


def test_classify_2p_examples():
    assert classify_2p(TwoPrimeSolution(3, 5, 2, 3, 1)) == Sporadic(0)
    assert classify_2p(TwoPrimeSolution(17, 33, 2, 6, 1)) == TwoPowerFamily(1)
    assert classify_2p(TwoPrimeSolution(31, 63, 2, 7, 1)) == TwoPowerFamily(-1)
    assert classify_2p(TwoPrimeSolution(13, 3, 3, 1, 1)) == OddPrimeRepunit()


def test_two_power_family_sign():
    # 63 = 2^6 - 1 gives p = 31 = 2^5 - 1, so p = 2^(m-2) + zeta with zeta = -1
    for s, zeta in [(TwoPrimeSolution(17, 33, 2, 6, 1), 1), (TwoPrimeSolution(31, 63, 2, 7, 1), -1)]:
        assert s.p == 2 ** (s.m - 2) + zeta
        assert s.p != 2 ** (s.m - 2) - zeta


def test_classify_2p_zero_matches_raises(monkeypatch):
    import ternexp.classify as classify

    monkeypatch.setattr(classify, "SPORADIC", ())
    with pytest.raises(LemmaFalsification) as info:
        classify.classify_2p(TwoPrimeSolution(3, 5, 2, 3, 1))
    assert info.value.evidence["matches"] == []


def test_classify_2p_box_exclusive_and_complete():
    res = enum_2p(300, 6)
    assert res.complete
    for s in res.solutions:
        outcome = classify_2p(s)
        assert len(lemma7_matches(s)) == 1
        if isinstance(outcome, Sporadic):
            assert s.m <= 5 and s.ell % 2 == 0
        elif isinstance(outcome, TwoPowerFamily):
            assert s.m >= 6 and s.ell == 2
        else:
            assert s.ell % 2 == 1
            assert lemma6_check(s.X, s.ell, s.p, s.n).holds


def test_classify_pq_examples():
    s = PQSolution(3, 5, 4, 2, 1, 1)
    assert classify_pq(s, 5) == Lemma8Outcome(Conclusion8.EVEN_SPLIT, 5, 3, 1)
    assert classify_pq(s, 3) == Lemma8Outcome(Conclusion8.EVEN_SPLIT, 3, 5, -1)
    m = PQSolution(23, 89, 2, 11, 1, 1)
    assert classify_pq(m, 23).conclusion is Conclusion8.MERSENNE
    e = PQSolution(3, 7, 4, 3, 2, 1)
    assert classify_pq(e, 3) == Lemma8Outcome(Conclusion8.ELL_EQUALS_P, 3, 7)
    # Swapping the labels turns the same data into the mirrored conclusion.
    assert classify_pq(e, 7) == Lemma8Outcome(Conclusion8.ELL_EQUALS_Q, 7, 3)


def test_classify_pq_falsification(monkeypatch):
    import ternexp.classify as classify

    monkeypatch.setattr(classify, "lemma8_matches", lambda s, p: [])
    with pytest.raises(LemmaFalsification):
        classify.classify_pq(PQSolution(3, 5, 4, 2, 1, 1), 3)


def test_classify_pq_ambiguity_detected(monkeypatch):
    import ternexp.classify as classify

    out = Lemma8Outcome(Conclusion8.MERSENNE, 3, 5)
    monkeypatch.setattr(classify, "lemma8_matches", lambda s, p: [out, out])
    with pytest.raises(AmbiguousClassification):
        classify.classify_pq(PQSolution(3, 5, 4, 2, 1, 1), 3)


def test_classify_pq_box_coverage():
    res = enum_pq(100, 6)
    assert res.complete and res.solutions
    for s in res.solutions:
        both = classify_pq_both(s)
        assert any(v is not None for v in both.values())
        for v in both.values():
            if v is None:
                continue
            p, q, m, n = s.labeled(v.p)
            if v.conclusion is Conclusion8.REPUNIT_Q:
                assert lemma6_check(s.X, s.ell, q, n).holds
            elif v.conclusion is Conclusion8.REPUNIT_P:
                assert lemma6_check(s.X, s.ell, p, m).holds


def test_skipped_points_reported():
    # 129^5 - 1 = 2^7 * 279086341 needs a primality proof above this ceiling.
    with bigarith.ceiling(10**7):
        res = enum_2p(130, 5)
    assert (129, 5) in {(X, ell) for X, ell, _ in res.skipped}
    found = {s.astuple() for s in res.solutions}
    truth = _oracle_2p(130, 5)
    undecided = {(X, ell) for X, ell, _ in res.skipped}
    assert found <= truth
    assert all(t in found or (t[1], t[2]) in undecided for t in truth)


@settings(max_examples=30, deadline=None)
@given(st.integers(3, 150))
def test_enumeration_sharding_is_union(cut):
    whole2, wholepq = enum_2p(150, 5), enum_pq(150, 5)
    left2, right2 = enum_2p(cut - 1, 5), enum_2p(150, 5, Xmin=cut)
    leftpq, rightpq = enum_pq(cut - 1, 5), enum_pq(150, 5, Xmin=cut)
    assert tuple(sorted(left2.solutions + right2.solutions)) == whole2.solutions
    assert tuple(sorted(leftpq.solutions + rightpq.solutions)) == wholepq.solutions
