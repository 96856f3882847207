"""Nilpotent operators, their kernel/image filtrations and the monodromy filtration."""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .exactlin import IntEchelon, SparseMatrix, columns_matrix, nullspace, rank
from .report import Report

Vector = Mapping[int, Fraction]


class NotNilpotentError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Subspace:
    """Subspace of ``Q^dim`` kept as primitive integer echelon rows."""

    dim_ambient: int
    rows: tuple[dict[int, int], ...]

    @classmethod
    def span(cls, dim: int, vectors: Iterable[Mapping[int, object]]) -> Subspace:
        ech = IntEchelon()
        for v in vectors:
            ech.insert(v)
        return cls(dim, tuple(ech.rows()))

    @classmethod
    def zero(cls, dim: int) -> Subspace:
        return cls(dim, ())

    @classmethod
    def full(cls, dim: int) -> Subspace:
        return cls(dim, tuple({i: 1} for i in range(dim)))

    @property
    def dim(self) -> int:
        return len(self.rows)

    def _echelon(self) -> IntEchelon:
        ech = IntEchelon()
        ech.pivots = {min(r): r for r in self.rows}
        return ech

    def __add__(self, other: Subspace) -> Subspace:
        if not other.rows:
            return self
        if not self.rows:
            return other
        big, small = (self, other) if self.dim >= other.dim else (other, self)
        ech = big._echelon()
        for v in small.rows:
            ech.insert(v)
        return Subspace(self.dim_ambient, tuple(ech.rows()))

    def image(self, m: SparseMatrix) -> Subspace:
        return Subspace.span(m.rows, (m.apply(v) for v in self.rows))

    def contains(self, other: Subspace) -> bool:
        ech = self._echelon()
        return all(ech.contains(v) for v in other.rows)

    def intersect(self, other: Subspace) -> Subspace:
        """Exact intersection from the null space of ``[A | -B]``."""
        if not self.rows or not other.rows:
            return Subspace.zero(self.dim_ambient)
        cols = list(self.rows) + [{i: -v for i, v in w.items()} for w in other.rows]
        ns = nullspace(columns_matrix(self.dim_ambient, cols))
        out = []
        for coeffs in ns:
            vec: dict[int, Fraction] = {}
            for j, a in coeffs.items():
                if j < len(self.rows):
                    for i, v in self.rows[j].items():
                        vec[i] = vec.get(i, 0) + a * v
            out.append(vec)
        return Subspace.span(self.dim_ambient, out)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.dim == other.dim and self.contains(other)

    __hash__ = None  # type: ignore[assignment]


@dataclass(frozen=True, eq=False)
class NilpotentOperator:
    dim: int
    N: SparseMatrix
    order: int = field(init=False)
    powers: tuple[SparseMatrix, ...] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if self.N.shape != (self.dim, self.dim):
            raise ValueError(f"operator has shape {self.N.shape}, expected {(self.dim, self.dim)}")
        powers = [SparseMatrix.identity(self.dim)]
        while not powers[-1].is_zero():
            if len(powers) > self.dim:
                raise NotNilpotentError("operator is not nilpotent")
            powers.append(self.N @ powers[-1])
        object.__setattr__(self, "order", len(powers) - 1)
        object.__setattr__(self, "powers", tuple(powers))

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence[object]]) -> NilpotentOperator:
        return cls(len(rows), SparseMatrix.from_dense(rows, cols=len(rows)))

    def power(self, e: int) -> SparseMatrix:
        if e >= len(self.powers):
            return SparseMatrix.zeros(self.dim, self.dim)
        return self.powers[e]


def kernel_image_filtrations(op: NilpotentOperator) -> tuple[list[Subspace], list[Subspace]]:
    """``[ker N^p for p = 0..order]`` and ``[im N^q for q = 0..order]``."""
    kers = [Subspace.span(op.dim, nullspace(op.power(p))) for p in range(op.order + 1)]
    ims = [Subspace.span(op.dim, op.power(q).transpose()._data.values()) for q in range(op.order + 1)]
    return kers, ims


class _Bigraded:
    """Cached ``ker N^p ∩ im N^q`` for one operator."""

    def __init__(self, op: NilpotentOperator):
        self.op = op
        self.kers, self.ims = kernel_image_filtrations(op)
        self._cache: dict[tuple[int, int], Subspace] = {}

    def ker(self, p: int) -> Subspace:
        if p <= 0:
            return Subspace.zero(self.op.dim)
        return self.kers[min(p, self.op.order)]

    def im(self, q: int) -> Subspace:
        if q >= self.op.order:
            return Subspace.zero(self.op.dim)
        return self.ims[max(q, 0)]

    def cap(self, p: int, q: int) -> Subspace:
        """``ker N^p ∩ im N^q``, computed as ``N^q (ker N^{p+q})``."""
        key = (max(p, 0), max(q, 0))
        if key not in self._cache:
            p, q = key
            if p == 0 or q >= self.op.order:
                sub = Subspace.zero(self.op.dim)
            elif q == 0:
                sub = self.ker(p)
            elif p + q >= self.op.order:
                sub = self.im(q)
            else:
                sub = self.cap(p + 1, q - 1).image(self.op.N)
            self._cache[key] = sub
        return self._cache[key]


def _bigraded(op: NilpotentOperator) -> _Bigraded:
    cached = op.__dict__.get("_bigraded")
    if cached is None:
        cached = _Bigraded(op)
        object.__setattr__(op, "_bigraded", cached)
    return cached


def gr_q_gr_p(op: NilpotentOperator, direct: bool = False) -> dict[tuple[int, int], int]:
    """Dimensions of ``Gr^q Gr_p`` for ``p >= 1``, ``q >= 0`` (zero entries omitted).

    With ``direct=True`` every intersection is formed by solving the linear
    system instead of the ``N^q (ker N^{p+q})`` shortcut.
    """
    bg = _bigraded(op)
    cap = (lambda p, q: bg.ker(p).intersect(bg.im(q))) if direct else bg.cap
    out = {}
    for p in range(1, op.order + 1):
        for q in range(0, op.order):
            top = cap(p, q)
            if not top.dim:
                continue
            bottom = cap(p - 1, q) + cap(p, q + 1)
            d = top.dim - bottom.dim
            if d:
                out[(p, q)] = d
    return out


@dataclass(frozen=True, eq=False)
class Filtration:
    """Increasing filtration ``M_r``, stored for ``lo <= r <= hi``; zero below, full above."""

    dim: int
    lo: int
    steps: tuple[Subspace, ...]

    @property
    def hi(self) -> int:
        return self.lo + len(self.steps) - 1

    def __getitem__(self, r: int) -> Subspace:
        if r < self.lo:
            return Subspace.zero(self.dim)
        if r > self.hi:
            return Subspace.full(self.dim)
        return self.steps[r - self.lo]

    def gr(self, r: int) -> int:
        return self[r].dim - self[r - 1].dim

    def gr_dims(self) -> dict[int, int]:
        return {r: g for r in range(self.lo, self.hi + 1) if (g := self.gr(r))}


def monodromy_filtration(op: NilpotentOperator) -> Filtration:
    """``M_r = sum over p - q - 1 = r (p >= 1, q >= 0) of ker N^p ∩ im N^q``."""
    bg = _bigraded(op)
    o = op.order
    steps = []
    for r in range(-o, o):
        sub = Subspace.zero(op.dim)
        for q in range(max(0, -r), o):
            p = r + q + 1
            sub = sub + bg.cap(p, q)
            if p + q >= o:
                # from here on the terms are im N^q, which only shrink
                break
        steps.append(sub)
    return Filtration(op.dim, -o, tuple(steps))


def check_monodromy_properties(op: NilpotentOperator, M: Filtration) -> list[str]:
    """Violations of ``N M_r ⊆ M_{r-2}`` and ``N^r : Gr_r ≅ Gr_{-r}``."""
    bad = []
    lo, hi = M.lo - 1, M.hi + 1
    for r in range(lo, hi + 1):
        if not M[r - 2].contains(M[r].image(op.N)):
            bad.append(f"N M_{r} not inside M_{r - 2}")
        if M[r - 1].dim > M[r].dim:
            bad.append(f"M_{r - 1} larger than M_{r}")
    for r in range(0, hi + 1):
        g, g_neg = M.gr(r), M.gr(-r)
        img = (M[r].image(op.power(r)) + M[-r - 1]).dim - M[-r - 1].dim
        if not (img == g == g_neg):
            bad.append(f"N^{r}: Gr_{r} -> Gr_{-r} has rank {img}, dims {g} and {g_neg}")
    return bad


def perturbed_filtration(M: Filtration, r: int, v: Vector) -> Filtration:
    """Add ``v`` to every ``M_t`` with ``t >= r`` (keeps the family increasing)."""
    extra = Subspace.span(M.dim, [v])
    lo, hi = min(M.lo, r), max(M.hi, r)
    steps = tuple(M[t] + extra if t >= r else M[t] for t in range(lo, hi + 1))
    return Filtration(M.dim, lo, steps)


def decomposition_identity(
    op: NilpotentOperator,
    M: Filtration | None = None,
    shift: int = 1,
    table: Mapping[tuple[int, int], int] | None = None,
) -> dict[int, tuple[int, int]]:
    """Compare ``dim Gr_r^M`` with ``sum over p - q - shift = r`` of ``dim Gr^q Gr_p``.

    Returns ``{r: (lhs, rhs)}`` for every ``r`` where either side is nonzero.
    ``shift = 1`` matches the centering of :func:`monodromy_filtration`.
    """
    M = M if M is not None else monodromy_filtration(op)
    table = table if table is not None else gr_q_gr_p(op)
    sums: Counter[int] = Counter()
    for (p, q), d in table.items():
        sums[p - q - shift] += d
    grs = M.gr_dims()
    return {r: (grs.get(r, 0), sums.get(r, 0)) for r in sorted(set(grs) | set(sums))}


# --------------------------------------------------------------------------
# Jordan oracle


@dataclass(frozen=True)
class JordanData:
    blocks: tuple[int, ...]
    gr: dict[int, int]
    bigraded: dict[tuple[int, int], int]


def jordan_oracle(op: NilpotentOperator) -> JordanData:
    """Block sizes from ``rank N^e`` and the Gr dimensions they predict."""
    ranks = [rank(op.power(e)) for e in range(op.order + 2)]
    return jordan_from_ranks(op.dim, ranks)


def jordan_from_ranks(dim: int, ranks: Sequence[int]) -> JordanData:
    rk = list(ranks)
    if not rk or rk[0] != dim:
        rk = [dim] + rk
    rk += [0, 0]
    blocks: list[int] = []
    for e in range(1, len(rk) - 1):
        count = (rk[e - 1] - rk[e]) - (rk[e] - rk[e + 1])
        blocks.extend([e] * count)
    blocks.sort(reverse=True)
    gr: Counter[int] = Counter()
    big: Counter[tuple[int, int]] = Counter()
    for s in blocks:
        for r in range(-(s - 1), s, 2):
            gr[r] += 1
        for p in range(1, s + 1):
            big[(p, s - p)] += 1
    return JordanData(tuple(blocks), dict(gr), dict(big))


def jordan_matrix(blocks: Sequence[int]) -> SparseMatrix:
    """Nilpotent Jordan form with ``N e_{i+1} = e_i`` inside each block."""
    dim = sum(blocks)
    entries, off = [], 0
    for s in blocks:
        entries.extend((off + i, off + i + 1, 1) for i in range(s - 1))
        off += s
    return SparseMatrix.from_entries(dim, dim, entries)


def random_unimodular(dim: int, rng: random.Random, density: float = 0.3) -> tuple[SparseMatrix, SparseMatrix]:
    """``(P, P^{-1})`` with ``P = L U`` for random unit-triangular integer factors."""

    def unit_triangular(lower: bool) -> SparseMatrix:
        ent = [(i, i, 1) for i in range(dim)]
        for i in range(dim):
            for j in range(dim):
                if (j < i if lower else j > i) and rng.random() < density:
                    ent.append((i, j, rng.choice((-2, -1, 1, 2))))
        return SparseMatrix.from_entries(dim, dim, ent)

    L, U = unit_triangular(True), unit_triangular(False)
    return L @ U, _inverse_unit_triangular(U, upper=True) @ _inverse_unit_triangular(L, upper=False)


def _inverse_unit_triangular(T: SparseMatrix, upper: bool) -> SparseMatrix:
    n = T.rows
    dense = T.to_dense()
    inv = [[0] * n for _ in range(n)]
    order = range(n - 1, -1, -1) if upper else range(n)
    for col in range(n):
        x = [0] * n
        for i in order:
            s = 1 if i == col else 0
            rng_j = range(i + 1, n) if upper else range(i)
            s -= sum(dense[i][j] * x[j] for j in rng_j if dense[i][j])
            x[i] = s
        for i in range(n):
            inv[i][col] = x[i]
    return SparseMatrix.from_dense(inv, cols=n)


def random_partition(total: int, rng: random.Random) -> list[int]:
    parts = []
    left = total
    while left:
        s = rng.randint(1, min(left, max(1, rng.choice((2, 3, 4, 6, left)))))
        parts.append(s)
        left -= s
    return sorted(parts, reverse=True)


def random_nilpotent(rng: random.Random, max_dim: int = 30) -> tuple[NilpotentOperator, tuple[int, ...]]:
    """Random conjugate of a random Jordan form; returns the operator and its true blocks."""
    dim = rng.randint(1, max_dim)
    blocks = random_partition(dim, rng)
    P, Pinv = random_unimodular(dim, rng, density=min(0.3, 3.0 / dim))
    N = P @ jordan_matrix(blocks) @ Pinv
    return NilpotentOperator(dim, N), tuple(blocks)


def verify_operator(op: NilpotentOperator, true_blocks: Sequence[int] | None = None, rep: Report | None = None, **loc) -> Report:
    """Full property check of the monodromy filtration of one operator."""
    rep = rep if rep is not None else Report("monodromy")
    M = monodromy_filtration(op)
    oracle = jordan_oracle(op)
    if true_blocks is not None:
        rep.expect_equal("jordan-roundtrip", oracle.blocks, tuple(sorted(true_blocks, reverse=True)), **loc)
    bad = check_monodromy_properties(op, M)
    rep.add("monodromy-properties", not bad, "; ".join(bad[:3]), **loc)
    rep.expect_equal("gr-vs-jordan", M.gr_dims(), oracle.gr, **loc)
    table = gr_q_gr_p(op)
    rep.expect_equal("grgr-vs-jordan", table, oracle.bigraded, **loc)
    rep.expect_equal("grgr-total", sum(table.values()), op.dim, **loc)
    dec = decomposition_identity(op, M, table=table)
    rep.add("decomposition", all(a == b for a, b in dec.values()), str(dec), **loc)
    return rep
