"""Verification suites.  Each returns a :class:`Report` of located assertions."""

from __future__ import annotations

import random
from math import comb
from typing import Callable

from . import groth, monodromy, nearby
from .config import RunConfig
from .exactlin import ChainComplex, SparseMatrix, homology, tensor_total
from .nearby import ChainMapError, NotAComplexError
from .report import Report
from .spectral import WeightOffsets, euler_check, purity_report, semistable_demo_fiber, semistable_e1_page
from .strata import StalkPoint, concentrated_model, load_fiber, stalk_rank_nearby


# --------------------------------------------------------------------------
# coefficients and resolutions


def coefficient_rows(n: int) -> list[dict]:
    """``c^k_{l1,l2}`` for ``l1, l2 <= n - 1``, ``k <= 2n - 2``, with the brute-force count beside it."""
    rows = []
    for k in range(max(0, 2 * n - 1)):
        for l1 in range(n):
            for l2 in range(n):
                c = nearby.coefficient(k, l1, l2)
                b = nearby.coefficient_bruteforce(k, l1, l2)
                w = len(nearby.index_window(k, l1, l2))
                rows.append({"k": k, "l1": l1, "l2": l2, "coefficient": c, "bruteforce": b, "window": w, "diff": c - b})
    return rows


def monotonicity_violations(n: int) -> list[dict]:
    """Cells breaking ``c^k <= c^{k-1}`` / ``=`` / ``>=`` according to ``l1 + l2`` against ``2k - 1``."""
    bad = []
    for k in range(1, 2 * n - 1):
        for l1 in range(n):
            for l2 in range(n):
                a, b = nearby.coefficient(k, l1, l2), nearby.coefficient(k - 1, l1, l2)
                s = l1 + l2
                ok = a <= b if s <= 2 * k - 2 else a == b if s == 2 * k - 1 else a >= b
                if not ok:
                    bad.append({"k": k, "l1": l1, "l2": l2, "c_k": a, "c_k-1": b})
    return bad


def suite_resolutions(cfg: RunConfig) -> Report:
    rep = Report("resolutions")
    rows = coefficient_rows(cfg.coeff_n)
    mism = [r for r in rows if r["diff"] or r["window"] != r["coefficient"]]
    rep.add("coefficient-identity", not mism, str(mism[:3]) if mism else "", n=cfg.coeff_n, cells=len(rows))
    mono = monotonicity_violations(cfg.coeff_n)
    rep.add("coefficient-monotonicity", not mono, str(mono[:3]) if mono else "", n=cfg.coeff_n)

    n = cfg.resolution_n
    for r in range(1, cfg.stalk_max + 1):
        for s in range(1, cfg.stalk_max + 1):
            pt = StalkPoint(r, s)
            for k in range(0, 2 * n - 1):
                want = stalk_rank_nearby(pt, k)
                h = nearby.stalk_homology(nearby.build_L(k, n, n), pt)
                rep.expect_equal("L_k-homology", h, {k: want} if want else {}, r=r, s=s, k=k)
            # Vandermonde form of the Kunneth rank identity
            for k in range(0, r + s - 1):
                split = sum(comb(r - 1, l) * comb(s - 1, k - l) for l in range(k + 1))
                rep.expect_equal("vandermonde", split, stalk_rank_nearby(pt, k), r=r, s=s, k=k)
    for r in range(1, cfg.stalk_max + 1):
        pt = StalkPoint(r, 1)
        for k in range(n):
            want = comb(r - 1, k)
            h = nearby.stalk_homology(nearby.build_semistable_resolution(k, n), pt)
            rep.expect_equal("semistable-resolution", h, {k: want} if want else {}, r=r, k=k)
    return rep


# --------------------------------------------------------------------------
# Nbar


def _located(exc: ChainMapError | NotAComplexError) -> dict:
    loc = exc.location
    return {"degree": loc.get("degree"), "block": list(loc.get("source", ())), "target_block": list(loc.get("target", ()))}


def suite_nbar(cfg: RunConfig) -> Report:
    rep = Report("nbar")
    n = cfg.nbar_n
    for k in range(1, 2 * n - 1):
        try:
            f = nearby.build_Nbar(k, n, n, check=False)
        except NotAComplexError as exc:
            rep.add("complex", False, str(exc), k=k, n=n, **_located(exc))
            continue
        bad = f.failures()
        if not bad:
            rep.add("chain-map", True, k=k, n=n)
        for b in bad:
            rep.add(
                "chain-map",
                False,
                f"defect {b['defect']}",
                k=k,
                n=n,
                degree=b["degree"],
                block=b["source"],
                target_block=b["target"],
            )
    for r in range(1, cfg.kernel_stalk_max + 1):
        for s in range(1, cfg.kernel_stalk_max + 1):
            pt = StalkPoint(r, s)
            for k in range(1, 2 * cfg.kernel_n - 1):
                try:
                    f = nearby.build_Nbar(k, cfg.kernel_n, cfg.kernel_n)
                except (ChainMapError, NotAComplexError) as exc:
                    rep.add("realized-chain-map", False, str(exc), r=r, s=s, k=k, **_located(exc))
                    continue
                g = nearby.realize_map(f, pt)
                rep.add("realized-chain-map", g.is_chain_map(), r=r, s=s, k=k)
    return rep


# --------------------------------------------------------------------------
# kernels, cokernels and graded pieces


def graded_consistency(n: int) -> list[dict]:
    """``(p, q)`` pieces must be the ``(p + q, 0)`` pieces with twist lowered by ``q``."""
    bad = []
    for p in range(1, 2 * n - 1):
        for q in range(0, 2 * n - 1 - p):
            got = nearby.monodromy_graded_terms(p, q, n, n)
            ref = nearby.monodromy_graded_terms(p + q, 0, n, n)
            want = {k: [t.shifted_twist(-q) for t in v] for k, v in ref.items()}
            if got != want:
                bad.append({"n": n, "p": p, "q": q})
    return bad


def suite_kernels(cfg: RunConfig) -> Report:
    rep = Report("kernels")
    n = cfg.kernel_n
    for r in range(1, cfg.kernel_stalk_max + 1):
        for s in range(1, cfg.kernel_stalk_max + 1):
            for k in range(1, 2 * n - 1):
                rep.extend(nearby.verify_kernel_cokernel(k, StalkPoint(r, s), n, n))
    for k in range(1, 2 * n - 1):
        try:
            rep.extend(nearby.alternating_kernel_blocks(k, n, n))
        except NotAComplexError as exc:
            rep.add("alternating-vector-killed", False, str(exc), k=k, **_located(exc))
    for m in range(1, cfg.graded_n + 1):
        bad = graded_consistency(m)
        rep.add("graded-twist-shift", not bad, str(bad[:3]) if bad else "", n=m)
    return rep


# --------------------------------------------------------------------------
# Kunneth


def random_split_complex(rng: random.Random, max_total: int) -> tuple[ChainComplex, dict[int, int]]:
    """Complex with prescribed homology, hidden behind random unimodular base changes.

    Degree ``i`` is ``H^i + B^i + X^i`` with ``d`` mapping ``X^i`` onto ``B^{i+1}``.
    """
    length = rng.randint(1, 4)
    lo = rng.randint(-2, 2)
    while True:
        h = [rng.randint(0, 3) for _ in range(length)]
        b = [0] + [rng.randint(0, 3) for _ in range(length - 1)]  # b[i] = dim B^i = dim X^{i-1}
        dims = [h[i] + b[i] + (b[i + 1] if i + 1 < length else 0) for i in range(length)]
        if 0 < sum(dims) <= max_total:
            break
    changes = [monodromy.random_unimodular(d, rng) if d else (SparseMatrix.zeros(0, 0),) * 2 for d in dims]
    diffs = []
    for i in range(length - 1):
        # source layout: H^i, B^i, X^i ; target layout: H^{i+1}, B^{i+1}, X^{i+1}
        x0 = h[i] + b[i]
        b0 = h[i + 1]
        ent = [(b0 + t, x0 + t, 1) for t in range(b[i + 1])]
        d = SparseMatrix.from_entries(dims[i + 1], dims[i], ent)
        P_next, _ = changes[i + 1]
        _, Pinv = changes[i]
        diffs.append(P_next @ d @ Pinv)
    bases = [[(lo + i, j) for j in range(dims[i])] for i in range(length)]
    return ChainComplex.build(lo, bases, diffs), {lo + i: h[i] for i in range(length) if h[i]}


def kunneth_expected(ha: dict[int, int], hb: dict[int, int]) -> dict[int, int]:
    out: dict[int, int] = {}
    for i, x in ha.items():
        for j, y in hb.items():
            out[i + j] = out.get(i + j, 0) + x * y
    return {d: v for d, v in sorted(out.items()) if v}


def kunneth_instance(rng: random.Random, max_total: int) -> tuple[dict, dict, dict, dict, dict]:
    """One random pair: planted homologies, computed homologies, and the tensor-product homology."""
    half = max(1, max_total // 2)
    a, ha = random_split_complex(rng, half)
    b, hb = random_split_complex(rng, max_total - sum(a.dims().values()) or 1)
    got_a = {d: v for d, v in homology(a).items() if v}
    got_b = {d: v for d, v in homology(b).items() if v}
    t = tensor_total(a, b)
    got_t = {d: v for d, v in homology(t).items() if v}
    return ha, hb, got_a, got_b, got_t


def suite_kunneth(cfg: RunConfig) -> Report:
    rep = Report("kunneth")
    rng = random.Random(cfg.seed + 1)
    for i in range(cfg.kunneth_pairs):
        ha, hb, got_a, got_b, got_t = kunneth_instance(rng, cfg.kunneth_max_dim)
        rep.expect_equal("planted-homology", (got_a, got_b), (ha, hb), instance=i)
        rep.expect_equal("kunneth-dimension", got_t, kunneth_expected(got_a, got_b), instance=i)
    return rep


# --------------------------------------------------------------------------
# monodromy


def suite_monodromy(cfg: RunConfig) -> Report:
    rep = Report("monodromy")
    rng = random.Random(cfg.seed)
    for i in range(cfg.monodromy_instances):
        op, blocks = monodromy.random_nilpotent(rng, cfg.monodromy_max_dim)
        monodromy.verify_operator(op, blocks, rep, instance=i, dim=op.dim)
    return rep


# --------------------------------------------------------------------------
# section-5 style identities


def suite_collapse(cfg: RunConfig) -> Report:
    rep = Report("collapse")
    for s in range(1, cfg.collapse_max + 1):
        for S in range(1, s + 1):
            for n in range(s, cfg.collapse_max + 1):
                rep.expect_equal("collapse-delta", groth.collapse_sum(S, s, n), int(S == s), S=S, s=s, n=n)
    return rep


def suite_gamma(cfg: RunConfig) -> Report:
    rep = Report("gamma")
    for n in range(1, cfg.gamma_max_n + 1):
        bad, cells = [], 0
        for seg in groth.all_segments(n):
            cells += (n + 1) * seg.t
            bad.extend(groth.gamma_mismatches(seg))
        rep.add("gamma-multinomial", not bad, str(bad[:3]) if bad else "", n=n, cells=cells)
    for n in range(1, cfg.expand_max_n + 1):
        before = len(rep.failures)
        for seg in groth.all_segments(n):
            table = groth.red_table(seg)
            for S in range(1, n + 1):
                for T in range(1, n + 1):
                    red = groth.reduction_sum(S, T, seg, cfg.m_xi, cfg.t_xi)
                    exp = groth.inclusion_exclusion_expand(S, T, n, table)
                    loc = {"n": n, "s": list(seg.s), "mode": seg.mode, "S": S, "T": T}
                    if exp != groth.as_formal_sum(red):
                        rep.add("expansion-equals-collapse", False, f"{exp} vs {groth.as_formal_sum(red)}", **loc)
                    base = groth.base_weight(S, T, n, cfg.m_xi, cfg.t_xi)
                    for pair, ws in groth.weight_multiplicities(red).items():
                        c = groth.as_formal_sum(red)[groth.VTerm(*pair, 1 if seg.mode == groth.QUARTER else 0)]
                        if seg.mode == groth.QUARTER:
                            want = {base + 1: c, base: 2 * c, base - 1: c}
                        else:
                            want = {base: c}
                        if ws != want:
                            rep.add("weight-multiplicities", False, f"{ws} vs {want}", pair=list(pair), **loc)
        if len(rep.failures) == before:
            rep.add("expansion-equals-collapse", True, n=n)
            rep.add("weight-multiplicities", True, n=n)
    return rep


# --------------------------------------------------------------------------
# purity


def suite_purity(cfg: RunConfig) -> Report:
    rep = Report("purity")
    offsets = WeightOffsets(cfg.m_xi, cfg.t_xi)
    models = [concentrated_model(n) for n in range(1, cfg.purity_max_n + 1)]
    if cfg.fiber:
        models.append(load_fiber(cfg.fiber))
    for f in models:
        if f.product:
            rep.extend(purity_report(f, offsets))
            rep.extend(euler_check(f, offsets))
    page = semistable_e1_page(semistable_demo_fiber(), offsets)
    rep.expect_equal("semistable-demo-entries", len(page), 4)
    rep.add("semistable-demo-weights", all(e.weight == offsets.shift + e.position[1] for e in page))
    return rep


SUITE_FUNCS: dict[str, Callable[[RunConfig], Report]] = {
    "resolutions": suite_resolutions,
    "nbar": suite_nbar,
    "kernels": suite_kernels,
    "kunneth": suite_kunneth,
    "monodromy": suite_monodromy,
    "collapse": suite_collapse,
    "gamma": suite_gamma,
    "purity": suite_purity,
}


def run_suites(cfg: RunConfig) -> list[Report]:
    return [SUITE_FUNCS[name](cfg) for name in cfg.suites]
