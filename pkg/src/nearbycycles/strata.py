"""Combinatorial model of the special fiber of a product of two semistable schemes."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Any, Mapping, Sequence


class ModelError(ValueError):
    """A fiber-model document is malformed; ``field`` names the offending key."""

    def __init__(self, message: str, field: str | None = None):
        super().__init__(message if field is None else f"{field}: {message}")
        self.field = field


@dataclass(frozen=True)
class StalkPoint:
    """Point on ``r`` components of the first factor and ``s`` of the second."""

    r: int
    s: int

    def __post_init__(self) -> None:
        if self.r < 1 or self.s < 1:
            raise ValueError(f"stalk point needs r, s >= 1, got ({self.r}, {self.s})")


CohomTable = tuple[tuple[int, int, int], ...]


@dataclass(frozen=True)
class FiberModel:
    """Special fiber of ``X1 x X2`` described by strata counts.

    ``multiplicity`` maps ``(J1, J2)`` (frozensets of 1-based component
    indices) to the number of connected components of ``Y_{J1,J2}``.  When it
    is ``None`` every admissible pair counts once.  ``cohomology`` maps a
    stratum pair ``(l1, l2)`` to ``(degree, weight, dim)`` triples.

    With ``m2 = None`` the model describes a single semistable factor and
    strata are indexed by ``l1`` alone (``l2`` is ignored and must be 0).
    """

    n: int
    m1: int
    m2: int | None = None
    multiplicity: Mapping[tuple[frozenset[int], frozenset[int]], int] | None = None
    cohomology: Mapping[tuple[int, int], CohomTable] | None = None
    dim_y: int | None = None
    _counts: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ModelError("must be >= 1", "n")
        if self.m1 < 0 or (self.m2 is not None and self.m2 < 0):
            raise ModelError("component counts must be nonnegative", "m1/m2")
        if self.multiplicity:
            for (j1, j2), c in self.multiplicity.items():
                if c < 0:
                    raise ModelError(f"negative count for {sorted(j1)}, {sorted(j2)}", "multiplicities")
                if not j1 or max(j1) > self.m1 or min(j1) < 1:
                    raise ModelError(f"J1={sorted(j1)} outside 1..{self.m1}", "multiplicities")
                m2 = self.m2 if self.m2 is not None else 0
                if self.m2 is not None and (not j2 or max(j2) > m2 or min(j2) < 1):
                    raise ModelError(f"J2={sorted(j2)} outside 1..{m2}", "multiplicities")
        if self.cohomology:
            for (l1, l2), table in self.cohomology.items():
                top = 2 * (self.dimension - l1 - l2)
                for deg, _w, d in table:
                    if d < 0:
                        raise ModelError(f"negative dimension at stratum ({l1}, {l2})", "cohomology")
                    if not 0 <= deg <= top:
                        raise ModelError(f"degree {deg} outside [0, {top}] at stratum ({l1}, {l2})", "cohomology")

    @property
    def product(self) -> bool:
        return self.m2 is not None

    @property
    def dimension(self) -> int:
        """Dimension of the special fiber; defaults to ``2n - 2`` for products, ``n - 1`` otherwise."""
        if self.dim_y is not None:
            return self.dim_y
        return 2 * self.n - 2 if self.product else self.n - 1

    def table(self, l1: int, l2: int = 0) -> CohomTable | None:
        if self.cohomology is None:
            return None
        return self.cohomology.get((l1, l2), ())


def stratum_count(f: FiberModel, l1: int, l2: int = 0) -> int:
    """Number of connected components of ``Y^{(l1,l2)}``; 0 out of range."""
    if l1 < 0 or l2 < 0 or l1 > f.n - 1 or l2 > f.n - 1:
        return 0
    if not f.product and l2:
        return 0
    key = (l1, l2)
    if key in f._counts:
        return f._counts[key]
    if f.multiplicity is None:
        c = comb(f.m1, l1 + 1) * (comb(f.m2, l2 + 1) if f.product else 1)
    else:
        want2 = l2 + 1 if f.product else 0
        c = sum(v for (j1, j2), v in f.multiplicity.items() if len(j1) == l1 + 1 and len(j2) == want2)
    f._counts[key] = c
    return c


def stalk_rank_nearby(p: StalkPoint, k: int) -> int:
    """Rank of the stalk of ``R^k psi`` at ``p``: wedge of a rank ``r+s-2`` module."""
    return comb(p.r + p.s - 2, k) if k >= 0 else 0


def stalk_rank_fullwedge(p: StalkPoint, k: int) -> int:
    """Rank of ``i^* R^{k+1} j_*``: wedge of a rank ``r+s-1`` module."""
    return comb(p.r + p.s - 1, k + 1) if k >= -1 else 0


def stalk_subsets(r: int, l: int) -> list[tuple[int, ...]]:
    """Components ``a_{l}`` visible at a stalk on ``r`` components: ``(l+1)``-subsets."""
    return list(combinations(range(r), l + 1)) if l >= 0 else []


def realize_term(where: FiberModel | StalkPoint, term: Any) -> int:
    """Dimension contributed by a sheaf term ``a_{l1,l2*}`` with multiplicity.

    ``term`` only needs ``l1``, ``l2`` (``None`` for a single factor) and
    ``mult`` attributes.
    """
    l2 = term.l2
    if isinstance(where, StalkPoint):
        base = comb(where.r, term.l1 + 1)
        if l2 is not None:
            base *= comb(where.s, l2 + 1)
        return term.mult * base
    return term.mult * stratum_count(where, term.l1, l2 or 0)


# --------------------------------------------------------------------------
# JSON loading


def _req(doc: Mapping[str, Any], key: str, kind: type, where: str = "") -> Any:
    name = f"{where}{key}"
    if key not in doc:
        raise ModelError("missing", name)
    val = doc[key]
    if kind is int and (isinstance(val, bool) or not isinstance(val, int)):
        raise ModelError(f"expected integer, got {val!r}", name)
    if kind is list and not isinstance(val, list):
        raise ModelError(f"expected list, got {type(val).__name__}", name)
    return val


def fiber_from_json(doc: Mapping[str, Any]) -> FiberModel:
    if not isinstance(doc, Mapping):
        raise ModelError("expected an object", "fiber")
    n = _req(doc, "n", int)
    m1 = _req(doc, "m1", int)
    m2 = doc.get("m2")
    if m2 is not None and (isinstance(m2, bool) or not isinstance(m2, int)):
        raise ModelError(f"expected integer, got {m2!r}", "m2")
    dim_y = doc.get("dimY")
    mult = None
    if doc.get("multiplicities") is not None:
        mult = {}
        for i, item in enumerate(_req(doc, "multiplicities", list)):
            where = f"multiplicities[{i}]."
            j1 = frozenset(_req(item, "J1", list, where))
            j2 = frozenset(item.get("J2", []))
            mult[(j1, j2)] = _req(item, "count", int, where)
    cohom = None
    if doc.get("cohomology") is not None:
        cohom = {}
        for i, item in enumerate(_req(doc, "cohomology", list)):
            where = f"cohomology[{i}]."
            l1 = _req(item, "l1", int, where)
            l2 = item.get("l2", 0)
            rows = []
            for j, row in enumerate(_req(item, "table", list, where)):
                if not (isinstance(row, list) and len(row) == 3 and all(isinstance(x, int) for x in row)):
                    raise ModelError("expected [degree, weight, dim]", f"{where}table[{j}]")
                rows.append(tuple(row))
            cohom[(l1, l2)] = tuple(rows)
    return FiberModel(n=n, m1=m1, m2=m2, multiplicity=mult, cohomology=cohom, dim_y=dim_y)


def load_fiber(path: str) -> FiberModel:
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ModelError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}", "fiber") from exc
    return fiber_from_json(doc)


def fiber_to_json(f: FiberModel) -> dict[str, Any]:
    doc: dict[str, Any] = {"n": f.n, "m1": f.m1, "m2": f.m2}
    if f.dim_y is not None:
        doc["dimY"] = f.dim_y
    if f.multiplicity is not None:
        doc["multiplicities"] = [
            {"J1": sorted(j1), "J2": sorted(j2), "count": c}
            for (j1, j2), c in sorted(f.multiplicity.items(), key=lambda kv: (sorted(kv[0][0]), sorted(kv[0][1])))
        ]
    if f.cohomology is not None:
        doc["cohomology"] = [
            {"l1": l1, "l2": l2, "table": [list(r) for r in table]} for (l1, l2), table in sorted(f.cohomology.items())
        ]
    return doc


def concentrated_model(n: int, m1: int | None = None, m2: int | None = None, dims: Sequence[int] | None = None) -> FiberModel:
    """Product model whose stratum ``(a, b)`` has cohomology only in degree ``dimY - a - b``.

    Each stratum carries ``stratum_count`` copies of a one-dimensional class
    (scaled by ``dims[a+b]`` if given), pure of weight equal to its degree.
    """
    m1 = n if m1 is None else m1
    m2 = n if m2 is None else m2
    base = FiberModel(n=n, m1=m1, m2=m2)
    dim_y = base.dimension
    cohom = {}
    for a in range(n):
        for b in range(n):
            c = stratum_count(base, a, b) * (dims[a + b] if dims else 1)
            j = dim_y - a - b
            cohom[(a, b)] = ((j, j, c),) if c else ()
    return FiberModel(n=n, m1=m1, m2=m2, cohomology=cohom)
