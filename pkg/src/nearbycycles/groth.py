"""Grothendieck-group bookkeeping for the cohomology of closed strata.

Representations only enter through segment lengths ``s_1..s_t``; every
formal class ``[V]`` is tracked by its index pair, a variant and a weight.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial, prod
from typing import Iterable, Iterator, Mapping, Sequence

TEMPERED = "tempered"
QUARTER = "quarter-shifted"

# epsilon_k for the three quarter-shifted variants, and their multiplicities
EPSILON = {1: Fraction(-1, 2), 2: Fraction(0), 3: Fraction(1, 2)}
VARIANT_MULT = {1: 1, 2: 2, 3: 1}


@dataclass(frozen=True)
class SegmentData:
    s: tuple[int, ...]
    n: int
    mode: str = TEMPERED

    def __post_init__(self) -> None:
        if self.mode not in (TEMPERED, QUARTER):
            raise ValueError(f"unknown mode {self.mode!r}")
        if not self.s or any(x < 1 for x in self.s):
            raise ValueError("segment lengths must be positive")
        total = sum(self.s) * (2 if self.mode == QUARTER else 1)
        if total != self.n:
            raise ValueError(f"segment lengths {self.s} do not fill n={self.n} in {self.mode} mode")

    @property
    def t(self) -> int:
        return len(self.s)

    def length(self, j: int) -> int:
        """1-based segment length."""
        return self.s[j - 1]


@dataclass(frozen=True, order=True)
class VTerm:
    j1: int
    j2: int
    variant: int = 0  # 0 for tempered, 1..3 quarter-shifted

    @property
    def epsilon(self) -> Fraction:
        return EPSILON.get(self.variant, Fraction(0))

    def label(self) -> str:
        return f"V{self.variant}_{self.j1},{self.j2}" if self.variant else f"V_{self.j1},{self.j2}"


def iwahori_dim(blocks: Iterable[int]) -> int:
    """Multinomial ``(sum b)! / prod b!`` (zero-length blocks allowed)."""
    blocks = list(blocks)
    if any(b < 0 for b in blocks):
        raise ValueError("block sizes must be nonnegative")
    return factorial(sum(blocks)) // prod(factorial(b) for b in blocks)


def gamma_blocks(h: int, j: int, seg: SegmentData) -> list[int] | None:
    """Block sizes of the induced representation whose Iwahori invariants give one factor of gamma."""
    sj = seg.length(j)
    if sj + h - seg.n < 0 or h < 0 or h > seg.n:
        return None
    rest = [seg.length(i) for i in range(1, seg.t + 1) if i != j]
    if seg.mode == QUARTER:
        return [sj + h - seg.n, sj] + rest + rest
    return [sj + h - seg.n] + rest


def gamma_factor(h: int, j: int, seg: SegmentData) -> Fraction:
    """One factor of the closed-form gamma; 0 outside ``s_j >= n - h``."""
    n = seg.n
    sj = seg.length(j)
    if sj + h - n < 0 or not 0 <= h <= n:
        return Fraction(0)
    others = [seg.length(i) for i in range(1, seg.t + 1) if i != j]
    if seg.mode == QUARTER:
        den = factorial(sj + h - n) * factorial(sj) * prod(factorial(x) ** 2 for x in others)
    else:
        den = factorial(sj + h - n) * prod(factorial(x) for x in others)
    return Fraction(factorial(h), den)


def gamma(h1: int, h2: int, j1: int, j2: int, seg: SegmentData) -> Fraction:
    return gamma_factor(h1, j1, seg) * gamma_factor(h2, j2, seg)


def collapse_sum(S_size: int, s: int, n: int) -> int:
    """``sum_{h=n-s}^{n-S} (-1)^{n-S-h} C(s-S, h+s-n)``; the Kronecker delta of ``s`` and ``S``."""
    return sum((-1) ** (n - S_size - h) * comb(s - S_size, h + s - n) for h in range(n - s, n - S_size + 1))


def _variants(seg: SegmentData) -> list[int]:
    return [1, 2, 3] if seg.mode == QUARTER else [0]


def base_weight(S_size: int, T_size: int, n: int, m_xi: int = 0, t_xi: int = 0) -> int:
    return m_xi - 2 * t_xi + 2 * n - S_size - T_size


def term_weight(term: VTerm, S_size: int, T_size: int, n: int, m_xi: int = 0, t_xi: int = 0) -> int:
    w = base_weight(S_size, T_size, n, m_xi, t_xi) - 2 * term.epsilon
    assert w.denominator == 1
    return int(w)


@dataclass(frozen=True)
class ReducedTerm:
    term: VTerm
    coefficient: Fraction
    weight: int

    def to_json(self) -> dict:
        c = self.coefficient
        return {
            "j1": self.term.j1,
            "j2": self.term.j2,
            "variant": self.term.variant,
            "epsilon": str(self.term.epsilon),
            "coefficient": str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}",
            "weight": self.weight,
        }


def reduction_sum(S_size: int, T_size: int, seg: SegmentData, m_xi: int = 0, t_xi: int = 0) -> list[ReducedTerm]:
    """Collapsed answer: only pairs with ``s_{j1} = #S`` and ``s_{j2} = #T`` survive.

    The coefficient is ``(n-#S)!(n-#T)! s_{j1}! s_{j2}! / prod_j (s_j!)^e`` with
    ``e = 2`` (tempered) or ``4`` (quarter-shifted), times the variant multiplicity.
    """
    n = seg.n
    e = 4 if seg.mode == QUARTER else 2
    den = prod(factorial(x) ** e for x in seg.s)
    out = []
    for j1 in range(1, seg.t + 1):
        if seg.length(j1) != S_size:
            continue
        for j2 in range(1, seg.t + 1):
            if seg.length(j2) != T_size:
                continue
            base = Fraction(
                factorial(n - S_size) * factorial(n - T_size) * factorial(S_size) * factorial(T_size), den
            )
            for k in _variants(seg):
                term = VTerm(j1, j2, k)
                out.append(ReducedTerm(term, base * VARIANT_MULT.get(k, 1), term_weight(term, S_size, T_size, n, m_xi, t_xi)))
    return out


FormalSum = dict[VTerm, Fraction]


def red_table(seg: SegmentData) -> dict[tuple[int, int], FormalSum]:
    """``Red^{(h1,h2)} = sum_{j1,j2} gamma * ([V^1] + 2[V^2] + [V^3])`` (or ``[V]``) for all ``h1, h2``."""
    n = seg.n
    factors = {(h, j): gamma_factor(h, j, seg) for h in range(n + 1) for j in range(1, seg.t + 1)}
    table = {}
    for h1 in range(n + 1):
        for h2 in range(n + 1):
            acc: FormalSum = {}
            for j1 in range(1, seg.t + 1):
                g1 = factors[(h1, j1)]
                if not g1:
                    continue
                for j2 in range(1, seg.t + 1):
                    g = g1 * factors[(h2, j2)]
                    if not g:
                        continue
                    for k in _variants(seg):
                        acc[VTerm(j1, j2, k)] = g * VARIANT_MULT.get(k, 1)
            table[(h1, h2)] = acc
    return table


def inclusion_exclusion_expand(
    S_size: int, T_size: int, n: int, table: Mapping[tuple[int, int], Mapping[VTerm, Fraction]]
) -> FormalSum:
    """``sum_{h1, h2} (-1)^{2n-#S-#T-h1-h2} C(n-#S, h1) C(n-#T, h2) Red^{(h1,h2)}``."""
    acc: dict[VTerm, Fraction] = defaultdict(Fraction)
    for h1 in range(n - S_size + 1):
        for h2 in range(n - T_size + 1):
            sign = (-1) ** (2 * n - S_size - T_size - h1 - h2)
            c = sign * comb(n - S_size, h1) * comb(n - T_size, h2)
            for term, v in table.get((h1, h2), {}).items():
                acc[term] += c * v
    return {t: v for t, v in sorted(acc.items()) if v}


def as_formal_sum(terms: Iterable[ReducedTerm]) -> FormalSum:
    return {r.term: r.coefficient for r in sorted(terms, key=lambda r: r.term) if r.coefficient}


def weight_multiplicities(terms: Iterable[ReducedTerm]) -> dict[tuple[int, int], dict[int, Fraction]]:
    """Per ``(j1, j2)``: weight -> summed coefficient."""
    out: dict[tuple[int, int], dict[int, Fraction]] = defaultdict(lambda: defaultdict(Fraction))
    for r in terms:
        out[(r.term.j1, r.term.j2)][r.weight] += r.coefficient
    return {k: dict(v) for k, v in out.items()}


# --------------------------------------------------------------------------
# segment enumeration


def partitions(total: int, largest: int | None = None) -> Iterator[tuple[int, ...]]:
    """Partitions of ``total`` in non-increasing order."""
    largest = total if largest is None else largest
    if total == 0:
        yield ()
        return
    for first in range(min(total, largest), 0, -1):
        for rest in partitions(total - first, first):
            yield (first,) + rest


def compositions(total: int) -> Iterator[tuple[int, ...]]:
    if total == 0:
        yield ()
        return
    for first in range(1, total + 1):
        for rest in compositions(total - first):
            yield (first,) + rest


def all_segments(n: int, ordered: bool = False) -> Iterator[SegmentData]:
    """Every tempered and quarter-shifted segment datum of rank ``n``."""
    gen = compositions if ordered else partitions
    for s in gen(n):
        yield SegmentData(s, n, TEMPERED)
    if n % 2 == 0:
        for s in gen(n // 2):
            yield SegmentData(s, n, QUARTER)


def gamma_mismatches(seg: SegmentData) -> list[dict]:
    """Cells where the closed form disagrees with the multinomial or is not an integer."""
    bad = []
    n = seg.n
    for h in range(n + 1):
        for j in range(1, seg.t + 1):
            g = gamma_factor(h, j, seg)
            blocks = gamma_blocks(h, j, seg)
            want = 0 if blocks is None else iwahori_dim(blocks)
            if g != want or g.denominator != 1 or g < 0:
                bad.append({"s": list(seg.s), "mode": seg.mode, "h": h, "j": j, "gamma": str(g), "oracle": want})
    return bad


def sequence_product(values: Sequence[Fraction]) -> Fraction:
    return prod(values, start=Fraction(1))
