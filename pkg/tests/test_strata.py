import json
from itertools import combinations
from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from nearbycycles.nearby import SheafTerm
from nearbycycles.strata import (
    FiberModel,
    ModelError,
    StalkPoint,
    concentrated_model,
    fiber_from_json,
    fiber_to_json,
    load_fiber,
    realize_term,
    stalk_rank_fullwedge,
    stalk_rank_nearby,
    stalk_subsets,
    stratum_count,
)


def test_stratum_count_examples():
    assert stratum_count(FiberModel(n=2, m1=2, m2=2), 0, 0) == 4
    assert stratum_count(FiberModel(n=3, m1=3, m2=2), 1, 1) == 3
    assert stratum_count(FiberModel(n=3, m1=2, m2=2), 2, 0) == 0


def test_stratum_count_with_multiplicities():
    mult = {(frozenset({1}), frozenset({1})): 2, (frozenset({1, 2}), frozenset({1})): 5}
    f = FiberModel(n=2, m1=2, m2=1, multiplicity=mult)
    assert stratum_count(f, 0, 0) == 2
    assert stratum_count(f, 1, 0) == 5


@given(st.integers(1, 5), st.integers(0, 4), st.integers(0, 4))
def test_stratum_count_symmetric(m, a, b):
    f = FiberModel(n=5, m1=m, m2=m)
    assert stratum_count(f, a, b) == stratum_count(f, b, a)


def test_stalk_rank_examples():
    # exterior powers of a free module of rank r + s - 2, counted by listing subsets
    assert stalk_rank_nearby(StalkPoint(2, 2), 1) == 2
    assert stalk_rank_nearby(StalkPoint(3, 2), 2) == 3
    assert all(stalk_rank_nearby(StalkPoint(r, s), 0) == 1 for r in range(1, 5) for s in range(1, 5))
    assert stalk_rank_fullwedge(StalkPoint(2, 2), 0) == 3
    assert stalk_rank_fullwedge(StalkPoint(1, 1), 0) == 1


def test_stalk_rank_counts_subsets():
    for r in range(1, 5):
        for s in range(1, 5):
            for k in range(0, 7):
                assert stalk_rank_nearby(StalkPoint(r, s), k) == len(list(combinations(range(r + s - 2), k)))


def test_fullwedge_is_sum_of_adjacent_nearby_ranks():
    for r in range(1, 7):
        for s in range(1, 7):
            for k in range(11):
                p = StalkPoint(r, s)
                assert stalk_rank_fullwedge(p, k) == stalk_rank_nearby(p, k) + stalk_rank_nearby(p, k + 1)


def test_vandermonde_split():
    for r in range(1, 9):
        for s in range(1, 9):
            for k in range(15):
                split = sum(comb(r - 1, l) * comb(s - 1, k - l) for l in range(k + 1))
                assert split == stalk_rank_nearby(StalkPoint(r, s), k)


def test_stalk_subsets_are_summand_indices():
    assert stalk_subsets(3, 1) == [(0, 1), (0, 2), (1, 2)]
    assert stalk_subsets(2, 2) == []


def test_realize_term_examples():
    pt = StalkPoint(2, 2)
    assert realize_term(pt, SheafTerm(1, 1, 0, 2)) == 1
    assert realize_term(pt, SheafTerm(0, 1, 0, 1, 2, (0, 1))) == 4
    assert realize_term(FiberModel(n=3, m1=3, m2=3), SheafTerm(0, 0, 0, 0)) == 9


def test_stalk_point_validation():
    with pytest.raises(ValueError):
        StalkPoint(0, 1)


def test_cohomology_degree_range_enforced():
    with pytest.raises(ModelError):
        FiberModel(n=2, m1=2, m2=2, cohomology={(1, 1): ((3, 3, 1),)})


def test_json_roundtrip():
    f = concentrated_model(3)
    assert fiber_from_json(json.loads(json.dumps(fiber_to_json(f)))) == f


def test_json_errors_name_the_field(tmp_path):
    with pytest.raises(ModelError) as exc:
        fiber_from_json({"n": 2, "m1": 2, "cohomology": [{"l1": 0, "table": [[0, 0]]}]})
    assert exc.value.field == "cohomology[0].table[0]"
    with pytest.raises(ModelError) as exc:
        fiber_from_json({"n": 2, "m1": 2, "multiplicities": [{"J1": [1]}]})
    assert exc.value.field == "multiplicities[0].count"
    with pytest.raises(ModelError) as exc:
        fiber_from_json({"m1": 2})
    assert exc.value.field == "n"
    path = tmp_path / "bad.json"
    path.write_text('{\n "n": 2,\n "m1": }\n')
    with pytest.raises(ModelError) as exc:
        load_fiber(str(path))
    assert "line 3" in str(exc.value)


def test_concentrated_model_shape():
    f = concentrated_model(3)
    assert f.dimension == 4
    for (a, b), table in f.cohomology.items():
        for deg, w, d in table:
            assert deg == w == 4 - a - b
            assert d == stratum_count(f, a, b)
