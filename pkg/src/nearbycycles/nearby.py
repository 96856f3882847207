"""Resolutions of nearby cycles on (products of) semistable schemes.

A sheaf-level complex lists formal summands ``a_{l1,l2*}`` (one per copy)
and stores its differential as a sparse coefficient matrix between summands.
An entry between ``(l1, l2)`` and ``(l1 + 1, l2)`` stands for ``c * (wedge
delta_1)``; between ``(l1, l2)`` and ``(l1, l2 + 1)`` for ``c * (wedge
delta_2)``.  Chain maps only ever connect summands on the same stratum and
their entries are plain scalars.  Realizing at a stalk replaces every
summand by the free module on pairs of subsets ``(J1, J2)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Iterable, Mapping, Sequence

from .exactlin import (
    ChainComplex,
    ChainMap,
    SparseMatrix,
    columns_matrix,
    homology,
    nullspace,
    quotient_homology,
    rank,
    subcomplex_homology,
)
from .report import Report
from .strata import FiberModel, StalkPoint, stratum_count


class ChainMapError(RuntimeError):
    """A sheaf-level map fails to commute with the differentials."""

    def __init__(self, message: str, location: dict):
        super().__init__(f"{message} at {location}")
        self.location = location


class NotAComplexError(RuntimeError):
    def __init__(self, message: str, location: dict):
        super().__init__(f"{message} at {location}")
        self.location = location


# --------------------------------------------------------------------------
# coefficients


def coefficient(k: int, l1: int, l2: int) -> int:
    """Multiplicity of ``a_{l1,l2}`` in the resolution of ``R^k psi``."""
    if k < 0:
        return 0
    return max(0, min(min(l1, l2) + 1, l1 + l2 - k + 1, k + 1))


def coefficient_bruteforce(k: int, l1: int, l2: int) -> int:
    return sum(1 for l in range(k + 1) if l <= l1 and k - l <= l2)


@dataclass(frozen=True)
class IndexWindow:
    lo: int
    hi: int

    def __len__(self) -> int:
        return max(0, self.hi - self.lo + 1)

    def __iter__(self):
        return iter(range(self.lo, self.hi + 1))

    def __contains__(self, x: object) -> bool:
        return isinstance(x, int) and self.lo <= x <= self.hi


def index_window(k: int, l1: int, l2: int) -> IndexWindow:
    """Labels ``l'`` of the copies of ``a_{l1,l2}`` inside ``L_k``."""
    return IndexWindow(max(0, k - l2), min(k, l1))


# --------------------------------------------------------------------------
# sheaf-level complexes


@dataclass(frozen=True)
class SheafTerm:
    """``a_{l1,l2*} Lambda(-twist)^{+mult}`` placed in ``degree``.

    ``l2`` is ``None`` for a single semistable factor.
    """

    l1: int
    l2: int | None
    twist: int
    degree: int
    mult: int = 1
    copy_labels: tuple[int, ...] = (0,)

    def __post_init__(self) -> None:
        if self.mult != len(self.copy_labels) or self.mult < 1:
            raise ValueError(f"mult {self.mult} does not match copy labels {self.copy_labels}")

    def to_json(self) -> dict:
        return {
            "l1": self.l1,
            "l2": self.l2,
            "twist": self.twist,
            "degree": self.degree,
            "mult": self.mult,
            "copyLabels": list(self.copy_labels),
        }

    def shifted_twist(self, t: int) -> SheafTerm:
        return SheafTerm(self.l1, self.l2, self.twist + t, self.degree, self.mult, self.copy_labels)


Summand = tuple  # (l1, l2, copy)


@dataclass(frozen=True, eq=False)
class SheafComplex:
    """Formal complex of summands ``a_{l1,l2*}`` with coefficient differentials."""

    name: str
    terms: tuple[SheafTerm, ...]
    summands: Mapping[int, tuple[Summand, ...]]
    diffs: Mapping[int, SparseMatrix]

    @property
    def degrees(self) -> list[int]:
        return sorted(self.summands)

    def basis(self, d: int) -> tuple[Summand, ...]:
        return self.summands.get(d, ())

    def d(self, deg: int) -> SparseMatrix:
        m = self.diffs.get(deg)
        if m is None:
            return SparseMatrix.zeros(len(self.basis(deg + 1)), len(self.basis(deg)))
        return m

    def is_empty(self) -> bool:
        return not self.terms

    def term_count(self) -> int:
        return len(self.terms)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "terms": [t.to_json() for t in self.terms],
            "summands": {str(d): [list(s) for s in self.basis(d)] for d in self.degrees},
            "differentials": {str(d): self.d(d).to_json() for d in self.degrees if d + 1 in self.summands},
        }


def _second_factor_sign(l1: int, copy: int) -> int:
    """Koszul sign on ``wedge delta_2`` leaving a summand in first-factor degree ``l1``."""
    return -1 if l1 % 2 else 1


def _assemble(name: str, terms: Iterable[SheafTerm], rule) -> SheafComplex:
    """Lay out summands per degree and fill the differential via ``rule``.

    ``rule(src, tgt)`` returns the coefficient for adjacent summands.
    """
    terms = tuple(sorted(terms, key=lambda t: (t.degree, t.l1, -1 if t.l2 is None else t.l2)))
    summands: dict[int, list[Summand]] = {}
    for t in terms:
        for c in t.copy_labels:
            summands.setdefault(t.degree, []).append((t.l1, t.l2, c))
    for lst in summands.values():
        lst.sort(key=lambda s: (s[0], -1 if s[1] is None else s[1], s[2]))
    frozen = {d: tuple(v) for d, v in summands.items()}
    diffs = {}
    for d, src in frozen.items():
        tgt = frozen.get(d + 1)
        if not tgt:
            continue
        pos = {s: i for i, s in enumerate(tgt)}
        entries = []
        for j, s in enumerate(src):
            l1, l2, c = s
            for t in ((l1 + 1, l2, c), (l1, None if l2 is None else l2 + 1, c)):
                if t == s or t not in pos:
                    continue
                coeff = rule(s, t)
                if coeff:
                    entries.append((pos[t], j, coeff))
        diffs[d] = SparseMatrix.from_entries(len(tgt), len(src), entries)
    cx = SheafComplex(name, terms, frozen, diffs)
    check_sheaf_complex(cx)
    return cx


def _product_rule(src: Summand, tgt: Summand) -> int:
    if tgt[0] == src[0] + 1:
        return 1
    return _second_factor_sign(src[0], src[2])


def _kind(src: Summand, tgt: Summand) -> tuple[int, int]:
    return (tgt[0] - src[0], 0 if tgt[1] is None else tgt[1] - src[1])


def check_sheaf_complex(cx: SheafComplex) -> None:
    """Sheaf-level ``d o d = 0``.

    Along a mixed square the two paths give the same realized map, so their
    coefficients must cancel; two steps in the same factor vanish on their own.
    """
    for d in cx.degrees:
        if d + 2 not in cx.summands:
            continue
        comp = cx.d(d + 1) @ cx.d(d)
        src, tgt = cx.basis(d), cx.basis(d + 2)
        for r, c, v in comp.entries():
            if _kind(src[c], tgt[r]) == (1, 1):
                raise NotAComplexError("d o d != 0", {"degree": d, "source": src[c], "target": tgt[r]})


def build_semistable_resolution(k: int, n: int) -> SheafComplex:
    """``[a_k -> a_{k+1} -> ... -> a_{n-1}]`` with ``a_l`` in degree ``l``."""
    terms = [SheafTerm(l, None, k, l) for l in range(k, n)] if 0 <= k < n else []
    return _assemble(f"res_{k}", terms, lambda s, t: 1)


def build_product_summand(l: int, k_minus_l: int, n1: int, n2: int) -> SheafComplex:
    """Total complex of the two single-factor resolutions for ``R^l psi (x) R^{k-l} psi``."""
    k = l + k_minus_l
    terms = []
    if 0 <= l < n1 and 0 <= k_minus_l < n2:
        terms = [
            SheafTerm(l1, l2, k, l1 + l2, 1, (l,)) for l1 in range(l, n1) for l2 in range(k_minus_l, n2)
        ]
    return _assemble(f"S_{l},{k_minus_l}", terms, _product_rule)


def build_L(k: int, n1: int, n2: int) -> SheafComplex:
    """Resolution ``L_k`` of ``R^k psi`` on the product, copies labelled by index windows."""
    terms = []
    if 0 <= k <= n1 + n2 - 2:
        for l1 in range(n1):
            for l2 in range(n2):
                w = index_window(k, l1, l2)
                if len(w):
                    terms.append(SheafTerm(l1, l2, k, l1 + l2, len(w), tuple(w)))
    return _assemble(f"L_{k}", terms, _product_rule)


def build_P(k: int, n1: int, n2: int) -> SheafComplex:
    """Kernel complex: ``a_{l1,l2}(-k)`` for ``k <= l1, l2``, blocks where ``c^k - c^{k-1} = 1``."""
    terms = []
    if k >= 1:
        terms = [
            SheafTerm(l1, l2, k, l1 + l2)
            for l1 in range(n1)
            for l2 in range(n2)
            if coefficient(k, l1, l2) - coefficient(k - 1, l1, l2) == 1
        ]
    return _assemble(f"P_{k}", terms, _product_rule)


def build_R(k: int, n1: int, n2: int) -> SheafComplex:
    """Cokernel complex: ``a_{l1,l2}(-(k-1))`` on blocks where ``c^{k-1} - c^k = 1``."""
    terms = []
    if k >= 1:
        terms = [
            SheafTerm(l1, l2, k - 1, l1 + l2)
            for l1 in range(n1)
            for l2 in range(n2)
            if coefficient(k - 1, l1, l2) - coefficient(k, l1, l2) == 1
        ]
    return _assemble(f"R_{k}", terms, _product_rule)


# --------------------------------------------------------------------------
# sheaf-level chain maps


@dataclass(frozen=True, eq=False)
class SheafMap:
    """Stratum-preserving map of sheaf complexes; entries are plain scalars."""

    name: str
    source: SheafComplex
    target: SheafComplex
    components: Mapping[int, SparseMatrix]

    def at(self, d: int) -> SparseMatrix:
        m = self.components.get(d)
        if m is None:
            return SparseMatrix.zeros(len(self.target.basis(d)), len(self.source.basis(d)))
        return m

    def degrees(self) -> list[int]:
        return sorted(set(self.source.degrees) | set(self.target.degrees))

    def failures(self) -> list[dict]:
        """Blocks where ``d f != f d``, with coordinates."""
        out = []
        for d in self.degrees():
            diff = self.target.d(d) @ self.at(d) - self.at(d + 1) @ self.source.d(d)
            src, tgt = self.source.basis(d), self.target.basis(d + 1)
            for r, c, v in diff.entries():
                out.append({"degree": d, "source": list(src[c]), "target": list(tgt[r]), "defect": str(v)})
        return out

    def check(self) -> None:
        bad = self.failures()
        if bad:
            raise ChainMapError(f"{self.name} does not commute with differentials", bad[0])

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "source": self.source.name,
            "target": self.target.name,
            "components": {str(d): self.at(d).to_json() for d in self.degrees()},
        }


def _stratum_map(name: str, source: SheafComplex, target: SheafComplex, rule, check: bool = True) -> SheafMap:
    """Map sending summand ``(l1, l2, c)`` to ``sum rule(...)`` over same-stratum target copies."""
    comps = {}
    for d in sorted(set(source.degrees) | set(target.degrees)):
        src, tgt = source.basis(d), target.basis(d)
        by_stratum: dict[tuple, list[tuple[int, int]]] = {}
        for i, t in enumerate(tgt):
            by_stratum.setdefault(t[:2], []).append((i, t[2]))
        entries = []
        for j, s in enumerate(src):
            for i, copy in by_stratum.get(s[:2], ()):
                v = rule(s, copy)
                if v:
                    entries.append((i, j, v))
        comps[d] = SparseMatrix.from_entries(len(tgt), len(src), entries)
    f = SheafMap(name, source, target, comps)
    if check:
        f.check()
    return f


def build_Nbar(k: int, n1: int, n2: int, check: bool = True) -> SheafMap:
    """Twist map ``L_k -> L_{k-1}``: copy ``l'`` goes to copies ``l'-1`` and ``l'``."""
    if k < 1:
        raise ValueError("N-bar needs k >= 1")
    return _stratum_map(
        f"Nbar_{k}", build_L(k, n1, n2), build_L(k - 1, n1, n2), lambda s, c: 1 if c in (s[2] - 1, s[2]) else 0, check
    )


def build_P_inclusion(k: int, n1: int, n2: int) -> SheafMap:
    """``P_k -> L_k``, ``x -> (x, -x, ..., (-1)^k x)``."""
    return _stratum_map(f"incl_P_{k}", build_P(k, n1, n2), build_L(k, n1, n2), lambda s, c: -1 if c % 2 else 1)


def build_R_projection(k: int, n1: int, n2: int) -> SheafMap:
    """``L_{k-1} -> R_k``, copy ``j`` goes to ``(-1)^j`` (kills consecutive-pair sums)."""
    return _stratum_map(f"proj_R_{k}", build_L(k - 1, n1, n2), build_R(k, n1, n2), lambda s, c: -1 if s[2] % 2 else 1)


def build_alternating_kernel_map(k: int, n1: int, n2: int) -> SheafMap:
    """``sum_b (-1)^b Nbar_1^{k-b} (x) Nbar_2^b`` restricted to ``R^k psi_1 (x) R^k psi_2``.

    Only this summand of ``R^{2k} psi`` survives ``Nbar_1^k`` and ``Nbar_2^k``;
    each term lands on copy ``b`` of ``L_k``.
    """
    return _stratum_map(
        f"alt_{k}", build_product_summand(k, k, n1, n2), build_L(k, n1, n2), lambda s, b: -1 if b % 2 else 1
    )


# --------------------------------------------------------------------------
# realization


@lru_cache(maxsize=None)
def _subsets(r: int, size: int) -> tuple[tuple[int, ...], ...]:
    if size <= 0 or size > r:
        return ()
    return tuple(combinations(range(r), size))


@lru_cache(maxsize=None)
def _cofaces(r: int, size: int) -> tuple[tuple[int, int, int], ...]:
    """``(src, tgt, sign)`` for ``J -> J + {j}`` with sign ``(-1)^{position of j}``."""
    src = _subsets(r, size)
    index = {J: i for i, J in enumerate(_subsets(r, size + 1))}
    out = []
    for i, J in enumerate(src):
        for j in range(r):
            if j in J:
                continue
            K = tuple(sorted(J + (j,)))
            out.append((i, index[K], -1 if K.index(j) % 2 else 1))
    return tuple(out)


def _summand_sizes(s: Summand, pt: StalkPoint) -> tuple[int, int]:
    n1 = comb(pt.r, s[0] + 1)
    n2 = 1 if s[1] is None else comb(pt.s, s[1] + 1)
    return n1, n2


def _layout(summands: Sequence[Summand], pt: StalkPoint) -> tuple[list[int], int]:
    offs, off = [], 0
    for s in summands:
        a, b = _summand_sizes(s, pt)
        offs.append(off)
        off += a * b
    return offs, off


def realized_basis(cx: SheafComplex, d: int, pt: StalkPoint) -> list[tuple]:
    out = []
    for s in cx.basis(d):
        J2s = [()] if s[1] is None else _subsets(pt.s, s[1] + 1)
        out.extend((s[0], s[1], s[2], J1, J2) for J1 in _subsets(pt.r, s[0] + 1) for J2 in J2s)
    return out


def realize(cx: SheafComplex, pt: StalkPoint) -> ChainComplex:
    """Stalk of the complex at ``pt`` as an explicit chain complex."""
    degs = cx.degrees
    if not degs:
        return ChainComplex.zero()
    lo, hi = degs[0], degs[-1]
    layouts = {d: _layout(cx.basis(d), pt) for d in range(lo, hi + 1)}
    bases = [realized_basis(cx, d, pt) for d in range(lo, hi + 1)]
    diffs = []
    for d in range(lo, hi):
        src, tgt = cx.basis(d), cx.basis(d + 1)
        soffs, sdim = layouts[d]
        toffs, tdim = layouts[d + 1]
        entries = []
        for r, c, v in cx.d(d).entries():
            s, t = src[c], tgt[r]
            a, b = _summand_sizes(s, pt)
            if not a or not b:
                continue
            if t[0] == s[0] + 1:
                tb = b
                for i1, t1, sg in _cofaces(pt.r, s[0] + 1):
                    for i2 in range(b):
                        entries.append((toffs[r] + t1 * tb + i2, soffs[c] + i1 * b + i2, v * sg))
            else:
                _, tb = _summand_sizes(t, pt)
                for i2, t2, sg in _cofaces(pt.s, s[1] + 1):
                    for i1 in range(a):
                        entries.append((toffs[r] + i1 * tb + t2, soffs[c] + i1 * b + i2, v * sg))
        diffs.append(SparseMatrix.from_entries(tdim, sdim, entries))
    return ChainComplex.build(lo, bases, diffs)


def realize_map(f: SheafMap, pt: StalkPoint, source: ChainComplex | None = None, target: ChainComplex | None = None) -> ChainMap:
    S = source if source is not None else realize(f.source, pt)
    T = target if target is not None else realize(f.target, pt)
    comps = {}
    for d in f.degrees():
        src, tgt = f.source.basis(d), f.target.basis(d)
        soffs, sdim = _layout(src, pt)
        toffs, tdim = _layout(tgt, pt)
        entries = []
        for r, c, v in f.at(d).entries():
            a, b = _summand_sizes(src[c], pt)
            for i in range(a * b):
                entries.append((toffs[r] + i, soffs[c] + i, v))
        comps[d] = SparseMatrix.from_entries(tdim, sdim, entries)
    return ChainMap(S, T, comps)


def realized_dims(cx: SheafComplex, where: FiberModel | StalkPoint) -> dict[int, int]:
    """Dimension of each degree after realization (counts only for a fiber model)."""
    out = {}
    for d in cx.degrees:
        tot = 0
        for s in cx.basis(d):
            if isinstance(where, StalkPoint):
                a, b = _summand_sizes(s, where)
                tot += a * b
            else:
                tot += stratum_count(where, s[0], s[1] or 0)
        out[d] = tot
    return out


def stalk_homology(cx: SheafComplex, pt: StalkPoint) -> dict[int, int]:
    """Nonzero homology dimensions of the realized stalk complex."""
    return {d: h for d, h in homology(realize(cx, pt)).items() if h}


# --------------------------------------------------------------------------
# kernel / cokernel verification


def verify_kernel_cokernel(k: int, where: FiberModel | StalkPoint, n1: int, n2: int | None = None) -> Report:
    """Check ``0 -> P_k -> L_k -> L_{k-1} -> R_k -> 0`` on a realization.

    On a stalk the sequence is checked degreewise by rank, and the homology of
    the actual kernel and cokernel subcomplexes of the realized ``Nbar`` is
    compared with that of ``P_k`` and ``R_k``.  On a fiber model only
    dimension counts are available.
    """
    n2 = n1 if n2 is None else n2
    rep = Report("kernels")
    loc = {"k": k, "n1": n1, "n2": n2}
    if isinstance(where, StalkPoint):
        loc.update(r=where.r, s=where.s)
    try:
        nbar = build_Nbar(k, n1, n2)
    except ChainMapError as exc:
        rep.add("nbar-chain-map", False, str(exc), **loc, **_block(exc.location))
        return rep
    incl = build_P_inclusion(k, n1, n2)
    proj = build_R_projection(k, n1, n2)
    P, R = incl.source, proj.target

    if isinstance(where, FiberModel):
        dp, dl, dl1, dr = (realized_dims(c, where) for c in (P, nbar.source, nbar.target, R))
        for d in sorted(set(dl) | set(dl1) | set(dp) | set(dr)):
            lhs = dl.get(d, 0) - dp.get(d, 0)
            rhs = dl1.get(d, 0) - dr.get(d, 0)
            rep.expect_equal("degreewise-count", lhs, rhs, degree=d, **loc)
        return rep

    pt = where
    Lk, Lk1 = realize(nbar.source, pt), realize(nbar.target, pt)
    Pr, Rr = realize(P, pt), realize(R, pt)
    f = realize_map(nbar, pt, Lk, Lk1)
    i = realize_map(incl, pt, Pr, Lk)
    q = realize_map(proj, pt, Lk1, Rr)
    rep.add("nbar-realized-chain-map", f.is_chain_map(), **loc)
    rep.add("incl-realized-chain-map", i.is_chain_map(), **loc)
    rep.add("proj-realized-chain-map", q.is_chain_map(), **loc)

    kernels = {}
    for d in Lk.degrees:
        fd, id_, qd = f.at(d), i.at(d), q.at(d)
        rf, ri, rq = rank(fd), rank(id_), rank(qd)
        where_d = dict(degree=d, **loc)
        rep.expect_equal("incl-injective", ri, Pr.dim(d), **where_d)
        rep.add("f-kills-P", (fd @ id_).is_zero(), **where_d)
        rep.expect_equal("exact-at-L_k", Lk.dim(d) - rf, ri, **where_d)
        rep.add("proj-kills-image", (qd @ fd).is_zero(), **where_d)
        rep.expect_equal("exact-at-L_k-1", Lk1.dim(d) - rf, rq, **where_d)
        rep.expect_equal("proj-surjective", rq, Rr.dim(d), **where_d)
        kernels[d] = columns_matrix(Lk.dim(d), nullspace(fd))

    hP = {d: h for d, h in homology(Pr).items() if h}
    hR = {d: h for d, h in homology(Rr).items() if h}
    hK = {d: h for d, h in subcomplex_homology(Lk, kernels).items() if h}
    images = {d: f.at(d) for d in Lk1.degrees}
    hC = {d: h for d, h in quotient_homology(Lk1, images).items() if h}
    rep.expect_equal("H(ker Nbar) = H(P_k)", hK, hP, **loc)
    rep.expect_equal("H(coker Nbar) = H(R_k)", hC, hR, **loc)
    want_p = comb(pt.r - 1, k) * comb(pt.s - 1, k)
    rep.expect_equal("H(P_k) closed form", hP, {2 * k: want_p} if want_p else {}, **loc)
    euler_r = (-1) ** (k - 1) * comb(pt.r + pt.s - 2, k - 1) - (-1) ** k * comb(pt.r + pt.s - 2, k) + want_p
    rep.expect_equal("euler(R_k)", sum((-1) ** d * h for d, h in hR.items()), euler_r, **loc)

    alt = realize_map(build_alternating_kernel_map(k, n1, n2), pt, target=Lk)
    rep.add("alt-map-chain-map", alt.is_chain_map(), **loc)
    for d in Lk.degrees:
        a = alt.at(d)
        same = rank(a) == kernels[d].cols and rank(_hstack_cols(a, kernels[d])) == kernels[d].cols
        rep.add("alt-image = ker Nbar", same, degree=d, **loc)
    return rep


def _hstack_cols(a: SparseMatrix, b: SparseMatrix) -> SparseMatrix:
    from .exactlin import hstack

    return hstack(a, b)


def _block(loc: dict) -> dict:
    return {"block": loc.get("source"), "target_block": loc.get("target"), "degree": loc.get("degree")}


def alternating_kernel_blocks(k: int, n1: int, n2: int) -> Report:
    """Per block of ``L_k``: the alternating vector is killed exactly where ``P_k`` lives.

    Outside those blocks the restriction of ``Nbar`` is injective.
    """
    rep = Report("kernels")
    nbar = build_Nbar(k, n1, n2, check=False)
    for d in nbar.source.degrees:
        F = nbar.at(d)
        src = nbar.source.basis(d)
        strata = sorted({s[:2] for s in src})
        for st in strata:
            cols = [j for j, s in enumerate(src) if s[:2] == st]
            vec = {j: (-1 if src[j][2] % 2 else 1) for j in cols}
            killed = not F.apply(vec)
            block = F.submatrix(cols=cols)
            injective = rank(block) == len(cols)
            in_p = coefficient(k, *st) - coefficient(k - 1, *st) == 1
            loc = {"k": k, "n1": n1, "n2": n2, "block": list(st)}
            if in_p:
                rep.add("alternating-vector-killed", killed and len(cols) == k + 1, **loc)
                rep.expect_equal("block-kernel-dim", len(cols) - rank(block), 1, **loc)
            else:
                rep.add("block-injective", injective, **loc)
    return rep


# --------------------------------------------------------------------------
# graded pieces


def _clip(terms: Iterable[SheafTerm], n1: int, n2: int | None) -> list[SheafTerm]:
    out = []
    for t in terms:
        if not 0 <= t.l1 <= n1 - 1:
            continue
        if t.l2 is not None and not 0 <= t.l2 <= (n2 if n2 is not None else n1) - 1:
            continue
        out.append(t)
    return out


def graded_ker_quotient(j: int, k: int, n1: int, n2: int | None = None) -> list[SheafTerm]:
    """``(k+1)``-st graded piece of ``ker N^j``: ``a_{k+i-1, k+j-i}``, twist ``k+j-1``, degree ``2k+j-1``."""
    if j < 1 or k < 0:
        return []
    terms = (SheafTerm(k + i - 1, k + j - i, k + j - 1, 2 * k + j - 1) for i in range(1, j + 1))
    return _clip(terms, n1, n2)


def monodromy_graded_terms(p: int, q: int, n1: int, n2: int | None = None) -> dict[int, list[SheafTerm]]:
    """Pieces of ``Gr^q Gr_p`` keyed by the filtration step ``k`` (empty steps omitted)."""
    if p < 1 or q < 0:
        return {}
    top = 2 * max(n1, n2 or n1)
    out = {}
    for k in range(top):
        terms = (SheafTerm(k + i - 1, k + p + q - i, k + p - 1, 2 * k + p + q - 1) for i in range(1, p + q + 1))
        kept = _clip(terms, n1, n2)
        if kept:
            out[k] = kept
    return out


def semistable_monodromy_graded(r: int, n: int) -> list[SheafTerm]:
    """``Gr_r^M`` of a single semistable factor: ``a_{k+l}(-l)[-(k+l)]`` with ``l - k = r``."""
    out = []
    for k in range(n):
        l = k + r
        if l < 0 or k + l > n - 1:
            continue
        out.append(SheafTerm(k + l, None, l, k + l))
    return out


def term_euler(terms: Iterable[SheafTerm], where: FiberModel | StalkPoint) -> int:
    """Alternating count of realized terms (sign from the cohomological degree)."""
    from .strata import realize_term

    return sum((-1) ** t.degree * realize_term(where, t) for t in terms)
