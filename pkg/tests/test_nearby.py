from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

import nearbycycles.nearby as nb
from nearbycycles.exactlin import homology, verify_complex
from nearbycycles.nearby import (
    ChainMapError,
    SheafTerm,
    alternating_kernel_blocks,
    build_L,
    build_Nbar,
    build_P,
    build_product_summand,
    build_R,
    build_semistable_resolution,
    coefficient,
    coefficient_bruteforce,
    graded_ker_quotient,
    index_window,
    monodromy_graded_terms,
    realize,
    semistable_monodromy_graded,
    stalk_homology,
    term_euler,
    verify_kernel_cokernel,
)
from nearbycycles.strata import FiberModel, StalkPoint
from nearbycycles.suites import graded_consistency, monotonicity_violations

idx = st.integers(0, 9)


def terms_by_degree(cx):
    return {d: sorted((s[0], s[1]) for s in cx.basis(d)) for d in cx.degrees}


# --------------------------------------------------------------------------
# coefficients


def test_coefficient_examples():
    for k in range(8):
        assert coefficient(k, k, k) == k + 1
    assert coefficient(1, 0, 1) == 1
    assert coefficient(1, 1, 1) == 2
    assert coefficient(2, 2, 2) == 3
    assert coefficient_bruteforce(2, 2, 2) == 3
    assert coefficient_bruteforce(1, 0, 0) == 0


@given(idx, idx)
def test_coefficient_zero_step(l1, l2):
    assert coefficient_bruteforce(0, l1, l2) == 1 == coefficient(0, l1, l2)


@given(st.integers(1, 9), idx)
def test_coefficient_on_odd_diagonal(k, l1):
    l2 = 2 * k - 1 - l1
    if l2 >= 0:
        assert coefficient(k, l1, l2) == coefficient(k - 1, l1, l2) == min(l1, l2) + 1


def test_coefficient_identity_exhaustive():
    for n in range(1, 9):
        for k in range(2 * n - 1):
            for l1 in range(n):
                for l2 in range(n):
                    c = coefficient(k, l1, l2)
                    assert c == coefficient_bruteforce(k, l1, l2) == len(index_window(k, l1, l2))


def test_monotonicity_exhaustive():
    assert monotonicity_violations(8) == []


def test_index_window_bounds():
    w = index_window(3, 2, 2)
    assert (w.lo, w.hi) == (1, 2)
    assert list(w) == [1, 2]
    assert len(index_window(5, 1, 1)) == 0


# --------------------------------------------------------------------------
# resolutions


def test_semistable_resolution_shape():
    cx = build_semistable_resolution(3, 4)
    assert terms_by_degree(cx) == {3: [(3, None)]}
    cx = build_semistable_resolution(0, 2)
    assert terms_by_degree(cx) == {0: [(0, None)], 1: [(1, None)]}
    assert build_semistable_resolution(4, 4).is_empty()


def test_semistable_resolution_realized():
    for n in range(1, 6):
        for k in range(n):
            for r in range(1, n + 1):
                want = comb(r - 1, k)
                assert stalk_homology(build_semistable_resolution(k, n), StalkPoint(r, 1)) == ({k: want} if want else {})


def test_product_summand_shape():
    assert terms_by_degree(build_product_summand(2, 1, 3, 2)) == {3: [(2, 1)]}
    assert terms_by_degree(build_product_summand(0, 0, 2, 2)) == {0: [(0, 0)], 1: [(0, 1), (1, 0)], 2: [(1, 1)]}
    assert build_product_summand(3, 0, 3, 3).is_empty()


def test_product_summand_realized():
    for l in range(3):
        for m in range(3):
            cx = build_product_summand(l, m, 3, 3)
            for r in range(1, 4):
                for s in range(1, 4):
                    want = comb(r - 1, l) * comb(s - 1, m)
                    assert stalk_homology(cx, StalkPoint(r, s)) == ({l + m: want} if want else {})


def test_L0_is_the_first_product_summand():
    assert build_L(0, 3, 3).summands == build_product_summand(0, 0, 3, 3).summands


def test_L1_shape():
    cx = build_L(1, 2, 2)
    assert cx.summands == {1: ((0, 1, 0), (1, 0, 1)), 2: ((1, 1, 0), (1, 1, 1))}
    assert all(t.twist == 1 for t in cx.terms)


def test_L_realized_homology():
    for n in (3, 4):
        for k in range(2 * n - 1):
            cx = build_L(k, n, n)
            for r in range(1, n + 1):
                for s in range(1, n + 1):
                    c = realize(cx, StalkPoint(r, s))
                    assert verify_complex(c)
                    want = comb(r + s - 2, k)
                    assert {d: h for d, h in homology(c).items() if h} == ({k: want} if want else {})


def test_out_of_range_degenerates_to_empty():
    assert build_L(7, 3, 3).is_empty()
    assert build_L(-1, 3, 3).is_empty()


# --------------------------------------------------------------------------
# Nbar, P_k, R_k


def test_nbar_copy_rule():
    f = build_Nbar(2, 2, 2)
    src, tgt = f.source.basis(2), f.target.basis(2)
    assert src == ((1, 1, 1),)
    assert tgt == ((1, 1, 0), (1, 1, 1))
    assert f.at(2).to_dense() == [[1], [1]]


def test_nbar_empty_source_block():
    f = build_Nbar(1, 2, 2)
    assert (0, 0, 0) not in f.source.basis(0)
    assert f.at(0).cols == 0


def test_nbar_commutes():
    for n in range(1, 6):
        for k in range(1, 2 * n - 1):
            assert build_Nbar(k, n, n, check=False).failures() == []


def test_P_and_R_examples():
    P = build_P(1, 2, 2)
    assert [(t.l1, t.l2, t.twist, t.degree) for t in P.terms] == [(1, 1, 1, 2)]
    R = build_R(1, 4, 4)
    assert [(t.l1, t.l2, t.twist, t.degree) for t in R.terms] == [(0, 0, 0, 0)]


def test_P_and_R_term_counts():
    n = 6
    for k in range(1, n + 1):
        assert len(build_P(k, n, n).terms) == (n - k) ** 2
        # blocks with l1, l2 <= k - 1 and l1 + l2 >= k - 1
        assert len(build_R(k, n, n).terms) == k * (k + 1) // 2


def test_P_and_R_blocks_follow_coefficient_differences():
    n = 5
    for k in range(1, 2 * n - 1):
        p = {(t.l1, t.l2) for t in build_P(k, n, n).terms}
        r = {(t.l1, t.l2) for t in build_R(k, n, n).terms}
        for l1 in range(n):
            for l2 in range(n):
                diff = coefficient(k, l1, l2) - coefficient(k - 1, l1, l2)
                assert ((l1, l2) in p) == (diff == 1)
                assert ((l1, l2) in r) == (diff == -1)
                assert diff in (-1, 0, 1)


def test_P_and_earlier_R_share_no_block():
    n = 6
    for k in range(1, 2 * n - 1):
        p = {(t.l1, t.l2) for t in build_P(k, n, n).terms}
        for j in range(1, k + 1):
            assert not p & {(t.l1, t.l2) for t in build_R(k - j, n, n).terms}


def test_kernel_cokernel_on_stalks():
    for r in range(1, 4):
        for s in range(1, 4):
            for k in range(1, 5):
                rep = verify_kernel_cokernel(k, StalkPoint(r, s), 3)
                assert rep.ok, rep.failures[:3]


def test_kernel_cokernel_on_fiber_counts():
    f = FiberModel(n=3, m1=3, m2=3)
    for k in range(1, 5):
        assert verify_kernel_cokernel(k, f, 3).ok


def test_alternating_vector_killed_blockwise():
    for k in range(1, 6):
        rep = alternating_kernel_blocks(k, 4, 4)
        assert rep.ok
        assert any(r.check == "alternating-vector-killed" for r in rep.records) == (k <= 3)


def test_corrupted_sign_is_located(monkeypatch):
    monkeypatch.setattr(nb, "_second_factor_sign", lambda l1, copy: (-1) ** (l1 + copy))
    with pytest.raises(ChainMapError) as exc:
        build_Nbar(1, 3, 3)
    loc = exc.value.location
    assert {"degree", "source", "target", "defect"} <= set(loc)


# --------------------------------------------------------------------------
# graded pieces


def test_graded_ker_quotient_examples():
    assert graded_ker_quotient(1, 2, 4) == [SheafTerm(2, 2, 2, 4)]
    assert graded_ker_quotient(2, 0, 3) == [SheafTerm(0, 1, 1, 1), SheafTerm(1, 0, 1, 1)]
    assert graded_ker_quotient(1, 3, 3) == []


def test_monodromy_graded_examples():
    assert monodromy_graded_terms(1, 0, 3)[0] == [SheafTerm(0, 0, 0, 0)]
    # twist k + p - 1 = 0 here; the (2, 0) piece carries the same terms with twist 1
    assert monodromy_graded_terms(1, 1, 3)[0] == [SheafTerm(0, 1, 0, 1), SheafTerm(1, 0, 0, 1)]
    assert monodromy_graded_terms(2, 0, 3)[0] == [SheafTerm(0, 1, 1, 1), SheafTerm(1, 0, 1, 1)]
    assert monodromy_graded_terms(0, 0, 3) == {}


def test_graded_twist_shift():
    for n in range(1, 7):
        assert graded_consistency(n) == []


def test_semistable_graded_examples():
    n = 4
    assert semistable_monodromy_graded(n - 1, n) == [SheafTerm(n - 1, None, n - 1, n - 1)]
    assert semistable_monodromy_graded(0, 2) == [SheafTerm(0, None, 0, 0)]


def test_semistable_graded_euler_matches_nearby_cycles():
    for n in range(1, 6):
        for r in range(1, n + 1):
            pt = StalkPoint(r, 1)
            lhs = sum(term_euler(semistable_monodromy_graded(i, n), pt) for i in range(-n, n + 1))
            rhs = sum((-1) ** k * comb(r - 1, k) for k in range(n))
            assert lhs == rhs
