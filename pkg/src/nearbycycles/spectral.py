"""First page of the weight spectral sequence, with twist and weight bookkeeping."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable

from .nearby import semistable_monodromy_graded
from .report import Report
from .strata import FiberModel, stratum_count


@dataclass(frozen=True)
class WeightOffsets:
    m_xi: int = 0
    t_xi: int = 0

    @property
    def shift(self) -> int:
        return self.m_xi - 2 * self.t_xi


@dataclass(frozen=True)
class E1Summand:
    stratum: tuple[int, int]
    j: int
    twist: int
    dim: int
    weight: int


@dataclass(frozen=True)
class E1Entry:
    k: int
    m: int
    p: int
    q: int
    summands: tuple[E1Summand, ...]

    @property
    def dim(self) -> int:
        return sum(s.dim for s in self.summands)

    def rows(self) -> list[dict]:
        return [
            {
                "k": self.k,
                "m": self.m,
                "p": self.p,
                "q": self.q,
                "stratum": list(s.stratum),
                "j": s.j,
                "twist": s.twist,
                "dim": s.dim,
                "weight": s.weight,
            }
            for s in self.summands
        ]


@dataclass(frozen=True)
class E1Page:
    p: int
    q: int
    entries: tuple[E1Entry, ...]
    symbolic: bool = False

    def rows(self) -> list[dict]:
        return [r for e in self.entries for r in e.rows()]

    @property
    def total_dim(self) -> int:
        return sum(e.dim for e in self.entries)


def weight_of(j: int, twist: int, offsets: WeightOffsets = WeightOffsets(), table_weight: int | None = None) -> int:
    """Weight of ``H^j(-)(-twist)``; the class itself has weight ``j`` unless declared otherwise."""
    w = j if table_weight is None else table_weight
    return w + 2 * twist + offsets.shift


def _stratum_rows(f: FiberModel, a: int, b: int) -> list[tuple[int, int, int]]:
    """``(degree, weight, dim)`` rows for a stratum; a unit ``H^0`` per component in symbolic mode."""
    table = f.table(a, b)
    if table is None:
        c = stratum_count(f, a, b)
        return [(0, 0, c)] if c else []
    return [row for row in table if row[2]]


def e1_page(f: FiberModel, p: int, q: int, offsets: WeightOffsets = WeightOffsets()) -> E1Page:
    """Refined page for ``Gr^q Gr_p``: position ``k`` carries the ``p + q`` strata
    ``(k + i - 1, k + p + q - i)`` in degree ``j = m - 2k - p - q + 1`` twisted by ``k + p - 1``."""
    n = f.n
    by_km: dict[tuple[int, int], list[E1Summand]] = defaultdict(list)
    if p >= 1 and q >= 0:
        s = p + q
        for k in range(0, 2 * n):
            twist = k + p - 1
            shift = 2 * k + s - 1
            for i in range(1, s + 1):
                a, b = k + i - 1, k + s - i
                if not (0 <= a <= n - 1 and 0 <= b <= n - 1):
                    continue
                for deg, w, d in _stratum_rows(f, a, b):
                    m = deg + shift
                    by_km[(k, m)].append(E1Summand((a, b), deg, twist, d, weight_of(deg, twist, offsets, w)))
    entries = tuple(E1Entry(k, m, p, q, tuple(v)) for (k, m), v in sorted(by_km.items()))
    return E1Page(p, q, entries, symbolic=f.cohomology is None)


def pq_range(n: int) -> list[tuple[int, int]]:
    """All ``(p, q)`` with ``p >= 1``, ``q >= 0`` and ``p + q <= 2n - 1``."""
    return [(p, s - p) for s in range(1, 2 * n) for p in range(1, s + 1)]


def full_page(f: FiberModel, offsets: WeightOffsets = WeightOffsets()) -> list[E1Page]:
    return [e1_page(f, p, q, offsets) for p, q in pq_range(f.n)]


def concentration_violations(f: FiberModel) -> list[dict]:
    """Strata whose cohomology is nonzero outside degree ``dimY - a - b``."""
    bad = []
    if f.cohomology is None:
        return bad
    for (a, b), table in sorted(f.cohomology.items()):
        for deg, _w, d in table:
            if d and deg != f.dimension - a - b:
                bad.append({"stratum": [a, b], "degree": deg, "dim": d})
    return bad


def weight_classes(pages: Iterable[E1Page]) -> dict[tuple[int, int], set[int]]:
    """Weights seen per ``(p - q, m)`` class."""
    classes: dict[tuple[int, int], set[int]] = defaultdict(set)
    for page in pages:
        for e in page.entries:
            for s in e.summands:
                classes[(page.p - page.q, e.m)].add(s.weight)
    return classes


def purity_report(f: FiberModel, offsets: WeightOffsets = WeightOffsets(), target_degree: int | None = None) -> Report:
    """Purity bookkeeping for models satisfying the concentration hypothesis.

    Every summand must sit in total degree ``target_degree`` (default
    ``dimY``) with weight ``shift + target - i - 1`` where ``i = q - p``.
    """
    rep = Report("purity")
    target = f.dimension if target_degree is None else target_degree
    bad = concentration_violations(f)
    rep.add("concentration-hypothesis", not bad, str(bad[:3]) if bad else "", n=f.n)
    pages = full_page(f, offsets)
    for page in pages:
        i = page.q - page.p
        want = offsets.shift + target - i - 1
        for e in page.entries:
            for s in e.summands:
                loc = {"k": e.k, "p": page.p, "q": page.q, "stratum": list(s.stratum), "m": e.m}
                if e.m != target:
                    rep.add("support-in-target-degree", False, f"mass {s.dim} in degree {e.m}", **loc)
                if s.weight != want:
                    rep.add("weight", False, f"weight {s.weight}, expected {want}", **loc)
    if rep.ok:
        rep.add("support-in-target-degree", True, n=f.n, degree=target)
        rep.add("weight", True, n=f.n)
    for (r, m), ws in sorted(weight_classes(pages).items()):
        rep.add("weight-constant-in-class", len(ws) == 1, str(sorted(ws)), p_minus_q=r, m=m)
    abutment = abutment_weights(pages)
    for i, ws in sorted(abutment.items()):
        want = offsets.shift + target - i - 1
        rep.add("abutment-weight", ws == {want}, f"{sorted(ws)} vs {want}", i=i)
    return rep


def abutment_weights(pages: Iterable[E1Page]) -> dict[int, set[int]]:
    """Weights of the summed pages ``⊕_{p - q = -i}``, keyed by ``i``."""
    out: dict[int, set[int]] = defaultdict(set)
    for page in pages:
        for e in page.entries:
            for s in e.summands:
                out[page.q - page.p].add(s.weight)
    return dict(out)


def appearance_count(a: int, b: int) -> int:
    """How often ``Y^{(a,b)}`` occurs over all ``(p, q, k, i)``: ``sum_k (a + b - 2k + 1)``."""
    return sum(a + b - 2 * k + 1 for k in range(min(a, b) + 1))


def euler_check(f: FiberModel, offsets: WeightOffsets = WeightOffsets()) -> Report:
    """Alternating dimension of the page, summed over the page and over strata."""
    rep = Report("purity")
    page_sum = sum((-1) ** e.m * s.dim for page in full_page(f, offsets) for e in page.entries for s in e.summands)
    strata_sum = 0
    for a in range(f.n):
        for b in range(f.n):
            for deg, _w, d in _stratum_rows(f, a, b):
                strata_sum += (-1) ** (deg + a + b) * d * appearance_count(a, b)
    rep.expect_equal("euler-two-ways", page_sum, strata_sum, n=f.n)
    return rep


# --------------------------------------------------------------------------
# single semistable factor


@dataclass(frozen=True)
class ClassicalEntry:
    """``E_1^{-r, m + r} = H^m(Y, Gr_r)`` of a single semistable factor."""

    r: int
    m: int
    stratum: int
    j: int
    twist: int
    dim: int
    weight: int

    @property
    def position(self) -> tuple[int, int]:
        return (-self.r, self.m + self.r)

    def row(self) -> dict:
        return {
            "position": list(self.position),
            "r": self.r,
            "m": self.m,
            "stratum": self.stratum,
            "j": self.j,
            "twist": self.twist,
            "dim": self.dim,
            "weight": self.weight,
        }


def semistable_e1_page(f: FiberModel, offsets: WeightOffsets = WeightOffsets()) -> list[ClassicalEntry]:
    """Classical page built from ``Gr_r = ⊕ a_{k+l}(-l)[-(k+l)]``."""
    if f.product:
        raise ValueError("semistable page needs a single-factor model (m2 = null)")
    out = []
    n = f.n
    for r in range(-(n - 1), n):
        for term in semistable_monodromy_graded(r, n):
            for deg, w, d in _stratum_rows(f, term.l1, 0):
                m = deg + term.degree
                out.append(ClassicalEntry(r, m, term.l1, deg, term.twist, d, weight_of(deg, term.twist, offsets, w)))
    out.sort(key=lambda e: (e.position, e.stratum, e.j))
    return out


def semistable_demo_fiber() -> FiberModel:
    """Two projective lines meeting in a point: ``n = 2``, one factor."""
    return FiberModel(
        n=2,
        m1=2,
        cohomology={(0, 0): ((0, 0, 2), (2, 2, 2)), (1, 0): ((0, 0, 1),)},
    )
