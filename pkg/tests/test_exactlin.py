import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nearbycycles.exactlin import (
    ChainComplex,
    ChainMap,
    NotInjectiveError,
    ShapeError,
    SparseMatrix,
    block_matrix,
    cone,
    degreewise_quotient,
    failing_degree,
    homology,
    kron,
    nullspace,
    rank,
    tensor_total,
    verify_complex,
)
from nearbycycles.monodromy import random_unimodular
from nearbycycles.nearby import build_L, realize
from nearbycycles.strata import StalkPoint
from nearbycycles.suites import kunneth_expected, random_split_complex
from oracles import dense_rank

small = st.integers(min_value=-3, max_value=3)


def dense(rows, cols):
    return st.lists(st.lists(small, min_size=cols, max_size=cols), min_size=rows, max_size=rows)


def one_term(dim=1, lo=0):
    return ChainComplex.build(lo, [[("x", i) for i in range(dim)]], [])


def line(dims, mats, lo=0):
    return ChainComplex.build(lo, [[(lo + i, j) for j in range(d)] for i, d in enumerate(dims)], mats)


# --------------------------------------------------------------------------
# sparse matrices


def test_no_stored_zeros_and_duplicates_rejected():
    m = SparseMatrix.from_entries(2, 2, [(0, 0, 1), (1, 1, 0)])
    assert m.nnz() == 1
    with pytest.raises(ValueError):
        SparseMatrix.from_entries(2, 2, [(0, 0, 1), (0, 0, 2)])
    with pytest.raises(ValueError):
        SparseMatrix.from_entries(2, 2, [(2, 0, 1)])


def test_json_roundtrip_uses_rational_strings():
    m = SparseMatrix.from_entries(2, 3, [(0, 2, Fraction(-3, 4)), (1, 0, 5)])
    doc = m.to_json()
    assert doc == {"rows": 2, "cols": 3, "entries": [[0, 2, "-3/4"], [1, 0, "5"]]}
    assert SparseMatrix.from_json(doc) == m


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 6).flatmap(lambda r: st.integers(1, 6).flatmap(lambda c: dense(r, c))))
def test_rank_matches_dense_oracle(rows):
    m = SparseMatrix.from_dense(rows)
    assert rank(m) == dense_rank(rows)
    assert rank(m.transpose()) == rank(m)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 6).flatmap(lambda r: st.integers(1, 6).flatmap(lambda c: dense(r, c))))
def test_rank_nullity(rows):
    m = SparseMatrix.from_dense(rows)
    basis = nullspace(m)
    assert len(basis) + rank(m) == m.cols
    for v in basis:
        assert not m.apply(v)


@settings(max_examples=30, deadline=None)
@given(dense(3, 2), dense(2, 3), dense(3, 3))
def test_matrix_algebra(a, b, c):
    A, B, C = SparseMatrix.from_dense(a), SparseMatrix.from_dense(b), SparseMatrix.from_dense(c)
    assert (A @ B) @ C == A @ (B @ C)
    assert (A @ B).transpose() == B.transpose() @ A.transpose()
    assert (C + C) - C == C
    assert rank(kron(A, B)) == rank(A) * rank(B)


# --------------------------------------------------------------------------
# complexes


def test_verify_complex_examples():
    assert verify_complex(ChainComplex.zero())
    eye = SparseMatrix.identity(1)
    assert verify_complex(line([1, 1], [eye]))
    bad = line([1, 1, 1], [eye, eye])
    assert not verify_complex(bad)
    assert failing_degree(bad) == 0


def test_shape_error_names_degree():
    with pytest.raises(ShapeError) as exc:
        line([1, 2, 1], [SparseMatrix.zeros(2, 1), SparseMatrix.zeros(2, 2)], lo=3)
    assert exc.value.degree == 4


def test_homology_examples():
    assert homology(line([1, 1], [SparseMatrix.identity(1)])) == {0: 0, 1: 0}
    assert homology(one_term(1, lo=2)) == {2: 1}


def test_realized_L1_small_stalk():
    c = realize(build_L(1, 2, 2), StalkPoint(2, 2))
    assert c.dims() == {1: 4, 2: 2}
    assert homology(c) == {1: 2, 2: 0}


def test_circle_homology():
    # boundary of a triangle as a cochain complex: vertices -> edges
    d = SparseMatrix.from_dense([[-1, 1, 0], [0, -1, 1], [-1, 0, 1]])
    assert homology(line([3, 3], [d])) == {0: 1, 1: 1}


# --------------------------------------------------------------------------
# cone, quotient, tensor


def test_cone_of_identity_is_acyclic():
    c = one_term(2)
    f = ChainMap(c, c, {0: SparseMatrix.identity(2)})
    assert all(v == 0 for v in homology(cone(f)).values())


def test_cone_of_zero_map_from_zero_is_target():
    c = line([2, 1], [SparseMatrix.from_dense([[1, 1]])])
    z = ChainComplex.zero()
    f = ChainMap(z, c, {})
    h = {d: v for d, v in homology(cone(f)).items() if v}
    assert h == {d: v for d, v in homology(c).items() if v}


def _random_injection(rng: random.Random) -> ChainMap:
    """``S -> S' (+) E`` where ``S'`` is ``S`` after a unimodular base change and ``E`` is extra."""
    S, _ = random_split_complex(rng, 8)
    E, _ = random_split_complex(rng, 6)
    P, Pinv = zip(*(random_unimodular(S.dim(k), rng) if S.dim(k) else (SparseMatrix.zeros(0, 0),) * 2 for k in S.degrees))
    S2 = ChainComplex.build(S.lo, S.bases, [P[i + 1] @ S.d(S.lo + i) @ Pinv[i] for i in range(len(S.bases) - 1)])
    lo, hi = min(S2.lo, E.lo), max(S2.hi, E.hi)
    bases = [[("a", x) for x in S2.basis(k)] + [("b", y) for y in E.basis(k)] for k in range(lo, hi + 1)]
    mats = [
        block_matrix(
            [
                [S2.d(k), SparseMatrix.zeros(S2.dim(k + 1), E.dim(k))],
                [SparseMatrix.zeros(E.dim(k + 1), S2.dim(k)), E.d(k)],
            ]
        )
        for k in range(lo, hi)
    ]
    big = ChainComplex.build(lo, bases, mats)
    comps = {k: SparseMatrix.from_entries(big.dim(k), S.dim(k), P[k - S.lo].entries()) for k in S.degrees}
    return ChainMap(S, big, comps)


def test_cone_equals_quotient_on_random_injections():
    rng = random.Random(7)
    for _ in range(20):
        f = _random_injection(rng)
        assert f.is_chain_map()
        hc = {d: v for d, v in homology(cone(f)).items() if v}
        hq = {d: v for d, v in homology(degreewise_quotient(f)).items() if v}
        assert hc == hq


def test_quotient_rejects_non_injective():
    c = one_term(2, lo=5)
    f = ChainMap(c, c, {5: SparseMatrix.from_dense([[1, 0], [0, 0]])})
    with pytest.raises(NotInjectiveError) as exc:
        degreewise_quotient(f)
    assert exc.value.degree == 5


def test_tensor_of_points():
    a, b = one_term(1, lo=1), one_term(1, lo=2)
    t = tensor_total(a, b)
    assert t.dims() == {3: 1}


def test_tensor_is_a_complex_with_koszul_sign():
    d = SparseMatrix.identity(1)
    a = line([1, 1], [d])
    t = tensor_total(a, a)
    assert verify_complex(t)
    assert all(v == 0 for v in homology(t).values())


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_kunneth_and_euler(seed):
    rng = random.Random(seed)
    a, ha = random_split_complex(rng, 12)
    b, hb = random_split_complex(rng, 12)
    t = tensor_total(a, b)
    assert verify_complex(t)
    assert {d: v for d, v in homology(a).items() if v} == ha
    assert {d: v for d, v in homology(t).items() if v} == kunneth_expected(ha, hb)
    assert t.euler() == a.euler() * b.euler()
