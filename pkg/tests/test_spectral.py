from hypothesis import given, settings
from hypothesis import strategies as st

from nearbycycles.spectral import (
    WeightOffsets,
    appearance_count,
    e1_page,
    euler_check,
    full_page,
    pq_range,
    purity_report,
    semistable_demo_fiber,
    semistable_e1_page,
    weight_classes,
    weight_of,
)
from nearbycycles.strata import FiberModel, concentrated_model, stratum_count


def point_model(n, dim=1):
    """Every stratum a disjoint union of points, each contributing ``dim`` in degree 0."""
    base = FiberModel(n=n, m1=n, m2=n)
    cohom = {(a, b): ((0, 0, dim * stratum_count(base, a, b)),) for a in range(n) for b in range(n)}
    return FiberModel(n=n, m1=n, m2=n, cohomology=cohom)


def test_weight_of_definition():
    assert weight_of(2, 1) == 4
    assert weight_of(2, 1, WeightOffsets(3, 1)) == 5


def test_page_examples():
    f = point_model(3)
    page = e1_page(f, 1, 0)
    first = [e for e in page.entries if e.k == 0]
    assert len(first) == 1 and [s.stratum for s in first[0].summands] == [(0, 0)]
    assert first[0].summands[0].twist == 0

    page = e1_page(f, 1, 1)
    first = [e for e in page.entries if e.k == 0]
    assert [s.stratum for s in first[0].summands] == [(0, 1), (1, 0)]
    assert {s.twist for s in first[0].summands} == {0}
    assert first[0].m - 1 == first[0].summands[0].j


def test_page_empty_beyond_strata():
    n = 3
    f = point_model(n)
    for p, q in pq_range(n):
        for e in e1_page(f, p, q).entries:
            assert e.k + p + q - 1 <= 2 * (n - 1)


def test_symbolic_mode_reports_stratum_counts():
    f = FiberModel(n=2, m1=2, m2=3)
    page = e1_page(f, 1, 0)
    assert page.symbolic
    assert [(s.stratum, s.dim) for e in page.entries for s in e.summands] == [((0, 0), 6), ((1, 1), 3)]


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 4), st.integers(0, 3), st.integers(0, 2))
def test_entry_weight_is_m_plus_p_minus_q_minus_1(n, m_xi, t_xi):
    offsets = WeightOffsets(m_xi, t_xi)
    f = concentrated_model(n)
    for page in full_page(f, offsets):
        for e in page.entries:
            for s in e.summands:
                assert s.weight == e.m + page.p - page.q - 1 + offsets.shift


def test_shift_by_q_raises_weight_by_2q():
    f = concentrated_model(3)
    for p, q in pq_range(3):
        if q == 0:
            continue
        a = [(e.k, e.m, s.stratum, s.dim, s.weight) for e in e1_page(f, p, q).entries for s in e.summands]
        b = [(e.k, e.m, s.stratum, s.dim, s.weight - 2 * q) for e in e1_page(f, p + q, 0).entries for s in e.summands]
        assert a == b


def test_purity_on_concentrated_models():
    for n in range(1, 6):
        f = concentrated_model(n)
        rep = purity_report(f, WeightOffsets(1, 0))
        assert rep.ok, rep.failures[:3]
        for page in full_page(f):
            for e in page.entries:
                assert e.m == 2 * n - 2
        assert all(len(ws) == 1 for ws in weight_classes(full_page(f)).values())


def test_purity_flags_misplaced_cohomology():
    f = concentrated_model(2)
    cohom = dict(f.cohomology)
    cohom[(0, 0)] = cohom[(0, 0)] + ((0, 0, 1),)
    bad = FiberModel(n=2, m1=2, m2=2, cohomology=cohom)
    rep = purity_report(bad)
    assert not rep.ok
    located = [r for r in rep.failures if r.check == "support-in-target-degree"]
    assert located and {"k", "p", "q", "stratum", "m"} <= set(located[0].location)


def test_euler_two_ways_point_model():
    for n in range(1, 5):
        f = point_model(n)
        assert euler_check(f).ok
        # third count: walk over every (p, q, k, i) directly
        direct = 0
        for p, q in pq_range(n):
            for k in range(2 * n):
                for i in range(1, p + q + 1):
                    a, b = k + i - 1, k + p + q - i
                    if a < n and b < n:
                        direct += (-1) ** (2 * k + p + q - 1) * stratum_count(f, a, b)
        page_sum = sum((-1) ** e.m * e.dim for pg in full_page(f) for e in pg.entries)
        assert page_sum == direct


def test_euler_empty_tables():
    n = 3
    f = FiberModel(n=n, m1=n, m2=n, cohomology={(a, b): () for a in range(n) for b in range(n)})
    assert euler_check(f).ok
    assert sum(e.dim for pg in full_page(f) for e in pg.entries) == 0


def test_appearance_count_by_enumeration():
    for n in range(1, 6):
        for a in range(n):
            for b in range(n):
                seen = 0
                for p, q in pq_range(n):
                    for k in range(2 * n):
                        for i in range(1, p + q + 1):
                            seen += (k + i - 1, k + p + q - i) == (a, b)
                assert seen == appearance_count(a, b)


def test_semistable_demo_page():
    page = semistable_e1_page(semistable_demo_fiber())
    assert [e.position for e in page] == [(-1, 2), (0, 0), (0, 2), (1, 0)]
    assert [e.dim for e in page] == [1, 2, 2, 1]
    assert all(e.weight == e.position[1] for e in page)
