"""Exact sparse linear algebra over Q and the chain-complex substrate.

Scalars are Python ints or :class:`fractions.Fraction`; nothing is ever
rounded.  Matrices act on column vectors, so a differential
``d^i : C^i -> C^{i+1}`` has shape ``(dim C^{i+1}, dim C^i)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Hashable, Iterable, Iterator, Mapping, Sequence

Scalar = int | Fraction
Label = Hashable


class ShapeError(ValueError):
    """A matrix does not fit the basis sizes it is placed between."""

    def __init__(self, message: str, degree: int | None = None):
        super().__init__(message)
        self.degree = degree


class NotInjectiveError(ValueError):
    def __init__(self, degree: int):
        super().__init__(f"chain map component in degree {degree} is not injective")
        self.degree = degree


def _norm(x: Any) -> Scalar:
    if isinstance(x, int):
        return x
    q = Fraction(x)
    return q.numerator if q.denominator == 1 else q


def parse_scalar(text: str | int) -> Scalar:
    return _norm(Fraction(text))


def format_scalar(x: Scalar) -> str:
    q = Fraction(x)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


# --------------------------------------------------------------------------
# sparse matrices


@dataclass(frozen=True, eq=False)
class SparseMatrix:
    """Immutable sparse matrix stored row-wise; no explicit zeros."""

    rows: int
    cols: int
    _data: Mapping[int, Mapping[int, Scalar]] = field(default_factory=dict, repr=False)

    @classmethod
    def from_entries(cls, rows: int, cols: int, entries: Iterable[tuple[int, int, Any]]) -> SparseMatrix:
        """Build from ``(row, col, value)`` triples; duplicates are rejected."""
        data: dict[int, dict[int, Scalar]] = {}
        for r, c, v in entries:
            if not (0 <= r < rows and 0 <= c < cols):
                raise ShapeError(f"entry ({r}, {c}) outside {rows}x{cols}")
            row = data.setdefault(r, {})
            if c in row:
                raise ValueError(f"duplicate entry at ({r}, {c})")
            v = _norm(v)
            if v:
                row[c] = v
            elif not row:
                del data[r]
        return cls(rows, cols, {r: row for r, row in data.items() if row})

    @classmethod
    def accumulate(cls, rows: int, cols: int, entries: Iterable[tuple[int, int, Any]]) -> SparseMatrix:
        """Like :meth:`from_entries` but sums repeated positions."""
        data: dict[int, dict[int, Scalar]] = {}
        for r, c, v in entries:
            if not (0 <= r < rows and 0 <= c < cols):
                raise ShapeError(f"entry ({r}, {c}) outside {rows}x{cols}")
            row = data.setdefault(r, {})
            row[c] = _norm(row.get(c, 0) + v)
        return cls(rows, cols, _prune(data))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> SparseMatrix:
        return cls(rows, cols, {})

    @classmethod
    def identity(cls, n: int) -> SparseMatrix:
        return cls(n, n, {i: {i: 1} for i in range(n)})

    @classmethod
    def from_dense(cls, dense: Sequence[Sequence[Any]], cols: int | None = None) -> SparseMatrix:
        ncols = cols if cols is not None else (len(dense[0]) if dense else 0)
        return cls.from_entries(
            len(dense), ncols, ((r, c, v) for r, row in enumerate(dense) for c, v in enumerate(row) if v)
        )

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def entries(self) -> Iterator[tuple[int, int, Scalar]]:
        for r in sorted(self._data):
            row = self._data[r]
            for c in sorted(row):
                yield r, c, row[c]

    def nnz(self) -> int:
        return sum(len(row) for row in self._data.values())

    def row(self, r: int) -> Mapping[int, Scalar]:
        return self._data.get(r, {})

    def get(self, r: int, c: int) -> Scalar:
        return self._data.get(r, {}).get(c, 0)

    def is_zero(self) -> bool:
        return not self._data

    def to_dense(self) -> list[list[Scalar]]:
        out: list[list[Scalar]] = [[0] * self.cols for _ in range(self.rows)]
        for r, c, v in self.entries():
            out[r][c] = v
        return out

    def transpose(self) -> SparseMatrix:
        data: dict[int, dict[int, Scalar]] = {}
        for r, row in self._data.items():
            for c, v in row.items():
                data.setdefault(c, {})[r] = v
        return SparseMatrix(self.cols, self.rows, data)

    def __matmul__(self, other: SparseMatrix) -> SparseMatrix:
        if self.cols != other.rows:
            raise ShapeError(f"cannot multiply {self.shape} by {other.shape}")
        data: dict[int, dict[int, Scalar]] = {}
        for r, row in self._data.items():
            acc: dict[int, Scalar] = {}
            for k, a in row.items():
                orow = other._data.get(k)
                if not orow:
                    continue
                for c, b in orow.items():
                    acc[c] = acc.get(c, 0) + a * b
            acc = {c: _norm(v) for c, v in acc.items() if v}
            if acc:
                data[r] = acc
        return SparseMatrix(self.rows, other.cols, data)

    def __add__(self, other: SparseMatrix) -> SparseMatrix:
        if self.shape != other.shape:
            raise ShapeError(f"cannot add {self.shape} and {other.shape}")
        data = {r: dict(row) for r, row in self._data.items()}
        for r, row in other._data.items():
            tgt = data.setdefault(r, {})
            for c, v in row.items():
                tgt[c] = _norm(tgt.get(c, 0) + v)
        return SparseMatrix(self.rows, self.cols, _prune(data))

    def __neg__(self) -> SparseMatrix:
        return self.scale(-1)

    def __sub__(self, other: SparseMatrix) -> SparseMatrix:
        return self + (-other)

    def scale(self, s: Any) -> SparseMatrix:
        s = _norm(s)
        if not s:
            return SparseMatrix.zeros(self.rows, self.cols)
        return SparseMatrix(self.rows, self.cols, {r: {c: _norm(v * s) for c, v in row.items()} for r, row in self._data.items()})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return self.shape == other.shape and _prune(self._data) == _prune(other._data)

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, tuple(self.entries())))

    def columns(self) -> Mapping[int, Mapping[int, Scalar]]:
        """Column-major view, built once per matrix."""
        cached = self.__dict__.get("_cols")
        if cached is None:
            cached = {}
            for r, row in self._data.items():
                for c, v in row.items():
                    cached.setdefault(c, {})[r] = v
            object.__setattr__(self, "_cols", cached)
        return cached

    def apply(self, vec: Mapping[int, Scalar]) -> dict[int, Scalar]:
        """Multiply a sparse column vector ``{index: value}``."""
        cols = self.columns()
        out: dict[int, Scalar] = {}
        for c, x in vec.items():
            col = cols.get(c)
            if not col or not x:
                continue
            for r, v in col.items():
                out[r] = out.get(r, 0) + v * x
        return {r: _norm(v) for r, v in out.items() if v}

    def submatrix(self, rows: Sequence[int] | None = None, cols: Sequence[int] | None = None) -> SparseMatrix:
        rmap = {r: i for i, r in enumerate(rows)} if rows is not None else None
        cmap = {c: j for j, c in enumerate(cols)} if cols is not None else None
        data: dict[int, dict[int, Scalar]] = {}
        for r, row in self._data.items():
            if rmap is not None and r not in rmap:
                continue
            rr = rmap[r] if rmap is not None else r
            new = {(cmap[c] if cmap is not None else c): v for c, v in row.items() if cmap is None or c in cmap}
            if new:
                data[rr] = new
        return SparseMatrix(len(rows) if rows is not None else self.rows, len(cols) if cols is not None else self.cols, data)

    def to_json(self) -> dict[str, Any]:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "entries": [[r, c, format_scalar(v)] for r, c, v in self.entries()],
        }

    @classmethod
    def from_json(cls, doc: Mapping[str, Any]) -> SparseMatrix:
        return cls.from_entries(int(doc["rows"]), int(doc["cols"]), ((int(r), int(c), parse_scalar(v)) for r, c, v in doc["entries"]))


def _prune(data: Mapping[int, Mapping[int, Scalar]]) -> dict[int, dict[int, Scalar]]:
    out = {}
    for r, row in data.items():
        new = {c: v for c, v in row.items() if v}
        if new:
            out[r] = new
    return out


def hstack(*mats: SparseMatrix) -> SparseMatrix:
    rows = mats[0].rows
    data: dict[int, dict[int, Scalar]] = {}
    off = 0
    for m in mats:
        if m.rows != rows:
            raise ShapeError("hstack row mismatch")
        for r, row in m._data.items():
            tgt = data.setdefault(r, {})
            for c, v in row.items():
                tgt[c + off] = v
        off += m.cols
    return SparseMatrix(rows, off, data)


def block_matrix(blocks: Sequence[Sequence[SparseMatrix]]) -> SparseMatrix:
    """Assemble a 2-D grid of blocks with consistent row/column sizes."""
    row_sizes = [row[0].rows for row in blocks]
    col_sizes = [m.cols for m in blocks[0]]
    data: dict[int, dict[int, Scalar]] = {}
    roff = 0
    for i, row in enumerate(blocks):
        coff = 0
        for j, m in enumerate(row):
            if m.shape != (row_sizes[i], col_sizes[j]):
                raise ShapeError(f"block ({i}, {j}) has shape {m.shape}, expected {(row_sizes[i], col_sizes[j])}")
            for r, mrow in m._data.items():
                tgt = data.setdefault(r + roff, {})
                for c, v in mrow.items():
                    tgt[c + coff] = v
            coff += col_sizes[j]
        roff += row_sizes[i]
    return SparseMatrix(sum(row_sizes), sum(col_sizes), data)


def kron(a: SparseMatrix, b: SparseMatrix) -> SparseMatrix:
    data: dict[int, dict[int, Scalar]] = {}
    for r1, row1 in a._data.items():
        for c1, v1 in row1.items():
            for r2, row2 in b._data.items():
                tgt = data.setdefault(r1 * b.rows + r2, {})
                for c2, v2 in row2.items():
                    tgt[c1 * b.cols + c2] = _norm(v1 * v2)
    return SparseMatrix(a.rows * b.rows, a.cols * b.cols, _prune(data))


# --------------------------------------------------------------------------
# elimination


def _integral_rows(m: SparseMatrix) -> list[dict[int, int]]:
    out = []
    for row in m._data.values():
        den = 1
        for v in row.values():
            if isinstance(v, Fraction):
                den = den * v.denominator // math.gcd(den, v.denominator)
        out.append({c: int(v * den) for c, v in row.items()})
    return out


def _primitive(row: dict[int, int]) -> dict[int, int]:
    g = 0
    for v in row.values():
        g = math.gcd(g, v)
        if g == 1:
            return row
    return {c: v // g for c, v in row.items()} if g > 1 else row


def integral_vector(vec: Mapping[int, Any]) -> dict[int, int]:
    """Primitive integer multiple of a rational sparse vector."""
    den = 1
    for v in vec.values():
        if isinstance(v, Fraction):
            den = den * v.denominator // math.gcd(den, v.denominator)
    return _primitive({c: int(v * den) for c, v in vec.items() if v})


class IntEchelon:
    """Incremental fraction-free row echelon form keyed by leading column."""

    __slots__ = ("pivots",)

    def __init__(self) -> None:
        self.pivots: dict[int, dict[int, int]] = {}

    def __len__(self) -> int:
        return len(self.pivots)

    def reduce(self, row: dict[int, int]) -> dict[int, int]:
        """Reduce ``row`` against the stored pivots; returns a primitive remainder."""
        pivots = self.pivots
        steps = 0
        while row:
            lead = min(row)
            piv = pivots.get(lead)
            if piv is None:
                return _primitive(row) if steps else row
            a, b = piv[lead], row[lead]
            g = math.gcd(a, b)
            a, b = a // g, b // g
            if a == 1:
                new = dict(row)
            elif a == -1:
                new = {c: -v for c, v in row.items()}
            else:
                new = {c: v * a for c, v in row.items()}
            for c, v in piv.items():
                x = new.get(c, 0) - b * v
                if x:
                    new[c] = x
                else:
                    del new[c]
            steps += 1
            # keeping entries small pays for the gcd only every few steps
            row = _primitive(new) if steps % 4 == 0 else new
        return row

    def insert(self, row: Mapping[int, Any]) -> bool:
        """Add a row; returns whether it increased the rank."""
        r = self.reduce(integral_vector(row))
        if not r:
            return False
        self.pivots[min(r)] = r
        return True

    def contains(self, row: Mapping[int, Any]) -> bool:
        return not self.reduce(integral_vector(row))

    def rows(self) -> list[dict[int, int]]:
        return [self.pivots[p] for p in sorted(self.pivots)]


def rank(m: SparseMatrix) -> int:
    """Exact rank via fraction-free sparse row echelon form."""
    rows = _integral_rows(m)
    if len(rows) > m.cols:
        rows = _integral_rows(m.transpose())
    rows.sort(key=len)
    ech = IntEchelon()
    for row in rows:
        r = ech.reduce(_primitive(row))
        if r:
            ech.pivots[min(r)] = r
    return len(ech)


def rref_rows(rows: Iterable[Mapping[int, Scalar]]) -> dict[int, dict[int, Fraction]]:
    """Reduced row echelon form of a set of sparse row vectors over Q.

    Returns ``{pivot_column: row}`` with each row normalised to 1 at its pivot
    and zero at every other pivot column.
    """
    pivots: dict[int, dict[int, Fraction]] = {}
    for raw in rows:
        row = {c: Fraction(v) for c, v in raw.items() if v}
        row = _reduce_against(row, pivots)
        if not row:
            continue
        lead = min(row)
        inv = 1 / row[lead]
        row = {c: v * inv for c, v in row.items()}
        for p, prow in pivots.items():
            x = prow.get(lead)
            if x:
                for c, v in row.items():
                    y = prow.get(c, 0) - x * v
                    if y:
                        prow[c] = y
                    else:
                        prow.pop(c, None)
        pivots[lead] = row
    return pivots


def _reduce_against(row: dict[int, Fraction], pivots: Mapping[int, Mapping[int, Fraction]]) -> dict[int, Fraction]:
    for p in sorted(set(row) & set(pivots)):
        x = row.get(p)
        if not x:
            continue
        for c, v in pivots[p].items():
            y = row.get(c, 0) - x * v
            if y:
                row[c] = y
            else:
                row.pop(c, None)
    return row


def nullspace(m: SparseMatrix) -> list[dict[int, int]]:
    """Basis of ``{x : m x = 0}`` as primitive integer column vectors.

    Fraction-free Gauss-Jordan: the echelon rows are back-reduced so every
    pivot column is zero outside its own row.
    """
    ech = IntEchelon()
    for row in _integral_rows(m):
        r = ech.reduce(_primitive(row))
        if r:
            ech.pivots[min(r)] = r
    piv = ech.pivots
    for p in sorted(piv, reverse=True):
        prow = piv[p]
        a = prow[p]
        for q in piv:
            if q == p:
                continue
            row = piv[q]
            b = row.get(p)
            if not b:
                continue
            g = math.gcd(a, b)
            x, y = a // g, b // g
            new = {c: v * x for c, v in row.items()}
            for c, v in prow.items():
                z = new.get(c, 0) - y * v
                if z:
                    new[c] = z
                else:
                    new.pop(c, None)
            piv[q] = _primitive(new)
    by_col: dict[int, list[int]] = {}
    for p, row in piv.items():
        for c in row:
            if c not in piv:
                by_col.setdefault(c, []).append(p)
    basis = []
    for free in range(m.cols):
        if free in piv:
            continue
        ps = by_col.get(free, [])
        lcm = 1
        for p in ps:
            a = abs(piv[p][p])
            lcm = lcm * a // math.gcd(lcm, a)
        vec = {free: lcm}
        for p in ps:
            row = piv[p]
            vec[p] = -row[free] * (lcm // row[p])
        basis.append(_primitive(vec))
    return basis


def columns_matrix(rows: int, vectors: Sequence[Mapping[int, Scalar]]) -> SparseMatrix:
    return SparseMatrix.from_entries(rows, len(vectors), ((r, j, v) for j, vec in enumerate(vectors) for r, v in vec.items()))


# --------------------------------------------------------------------------
# chain complexes


@dataclass(frozen=True, eq=False)
class ChainComplex:
    """Cochain complex concentrated in degrees ``lo .. lo + len(bases) - 1``.

    ``diffs[i]`` is the differential out of degree ``lo + i``; the last degree
    has no outgoing differential stored (it maps to zero).
    """

    lo: int
    bases: tuple[tuple[Label, ...], ...]
    diffs: tuple[SparseMatrix, ...]

    @classmethod
    def build(cls, lo: int, bases: Sequence[Sequence[Label]], diffs: Sequence[SparseMatrix]) -> ChainComplex:
        c = cls(lo, tuple(tuple(b) for b in bases), tuple(diffs))
        check_shapes(c)
        return c

    @classmethod
    def zero(cls) -> ChainComplex:
        return cls(0, (), ())

    @property
    def hi(self) -> int:
        return self.lo + len(self.bases) - 1

    @property
    def degrees(self) -> range:
        return range(self.lo, self.lo + len(self.bases))

    def dim(self, i: int) -> int:
        j = i - self.lo
        return len(self.bases[j]) if 0 <= j < len(self.bases) else 0

    def basis(self, i: int) -> tuple[Label, ...]:
        j = i - self.lo
        return self.bases[j] if 0 <= j < len(self.bases) else ()

    def d(self, i: int) -> SparseMatrix:
        """Differential ``C^i -> C^{i+1}`` (zero matrix outside the stored range)."""
        j = i - self.lo
        if 0 <= j < len(self.diffs):
            return self.diffs[j]
        return SparseMatrix.zeros(self.dim(i + 1), self.dim(i))

    def dims(self) -> dict[int, int]:
        return {i: self.dim(i) for i in self.degrees}

    def euler(self) -> int:
        return sum((-1) ** i * self.dim(i) for i in self.degrees)

    def to_json(self, term_meta=None) -> dict[str, Any]:
        doc: dict[str, Any] = {
            "lo": self.lo,
            "bases": [[_label_json(lbl) for lbl in b] for b in self.bases],
            "differentials": [d.to_json() for d in self.diffs],
        }
        if term_meta is not None:
            doc["terms"] = term_meta
        return doc


def _label_json(label: Any) -> Any:
    if isinstance(label, tuple):
        return [_label_json(x) for x in label]
    if isinstance(label, frozenset):
        return sorted(label)
    return label


def check_shapes(c: ChainComplex) -> None:
    if len(c.diffs) > max(len(c.bases) - 1, 0):
        raise ShapeError(f"{len(c.diffs)} differentials for {len(c.bases)} terms", c.lo)
    for j, d in enumerate(c.diffs):
        i = c.lo + j
        if d.shape != (c.dim(i + 1), c.dim(i)):
            raise ShapeError(f"d^{i} has shape {d.shape}, expected {(c.dim(i + 1), c.dim(i))}", i)


def verify_complex(c: ChainComplex) -> bool:
    """True iff every composite ``d^{i+1} d^i`` vanishes.

    Raises :class:`ShapeError` naming the degree when shapes are inconsistent.
    """
    check_shapes(c)
    for j in range(len(c.diffs) - 1):
        if not (c.diffs[j + 1] @ c.diffs[j]).is_zero():
            return False
    return True


def failing_degree(c: ChainComplex) -> int | None:
    for j in range(len(c.diffs) - 1):
        if not (c.diffs[j + 1] @ c.diffs[j]).is_zero():
            return c.lo + j
    return None


def homology(c: ChainComplex) -> dict[int, int]:
    """``dim H^i = dim C^i - rank d^i - rank d^{i-1}`` for each stored degree."""
    ranks = {i: rank(c.d(i)) for i in c.degrees}
    return {i: c.dim(i) - ranks[i] - ranks.get(i - 1, 0) for i in c.degrees}


def nonzero_homology(c: ChainComplex) -> dict[int, int]:
    return {i: h for i, h in homology(c).items() if h}


@dataclass(frozen=True, eq=False)
class ChainMap:
    """Degreewise matrices ``comp[i] : source^i -> target^i``."""

    source: ChainComplex
    target: ChainComplex
    components: Mapping[int, SparseMatrix]

    def at(self, i: int) -> SparseMatrix:
        m = self.components.get(i)
        if m is None:
            return SparseMatrix.zeros(self.target.dim(i), self.source.dim(i))
        return m

    def degrees(self) -> range:
        lo = min(self.source.lo if self.source.bases else 0, self.target.lo if self.target.bases else 0)
        hi = max(self.source.hi if self.source.bases else 0, self.target.hi if self.target.bases else 0)
        return range(lo, hi + 1)

    def check_shapes(self) -> None:
        for i in self.degrees():
            m = self.at(i)
            if m.shape != (self.target.dim(i), self.source.dim(i)):
                raise ShapeError(f"component {i} has shape {m.shape}", i)

    def commutator(self, i: int) -> SparseMatrix:
        """``d_T f^i - f^{i+1} d_S`` as a matrix ``S^i -> T^{i+1}``."""
        return self.target.d(i) @ self.at(i) - self.at(i + 1) @ self.source.d(i)

    def is_chain_map(self) -> bool:
        self.check_shapes()
        return all(self.commutator(i).is_zero() for i in self.degrees())

    def first_failure(self) -> int | None:
        for i in self.degrees():
            if not self.commutator(i).is_zero():
                return i
        return None

    def compose(self, other: ChainMap) -> ChainMap:
        """``self o other``."""
        degs = set(self.components) | set(other.components)
        return ChainMap(other.source, self.target, {i: self.at(i) @ other.at(i) for i in degs})


def _span_degrees(*cs: ChainComplex) -> tuple[int, int] | None:
    nonempty = [c for c in cs if c.bases]
    if not nonempty:
        return None
    return min(c.lo for c in nonempty), max(c.hi for c in nonempty)


def cone(f: ChainMap) -> ChainComplex:
    """Mapping cone: ``Cone^k = T^k + S^{k+1}``, ``d(x, y) = (dx + f y, -dy)``."""
    S, T = f.source, f.target
    span = _span_degrees(T, S)
    if span is None:
        return ChainComplex.zero()
    lo, hi = span[0] - 1, span[1]
    bases = []
    for k in range(lo, hi + 1):
        bases.append([("T", x) for x in T.basis(k)] + [("S", y) for y in S.basis(k + 1)])
    diffs = []
    for k in range(lo, hi):
        diffs.append(
            block_matrix(
                [
                    [T.d(k), f.at(k + 1)],
                    [SparseMatrix.zeros(S.dim(k + 2), T.dim(k)), -S.d(k + 1)],
                ]
            )
        )
    return ChainComplex.build(lo, bases, diffs)


def degreewise_quotient(f: ChainMap) -> ChainComplex:
    """Complex of cokernels of an injective chain map with induced differential."""
    T = f.target
    if not T.bases:
        return ChainComplex.zero()
    projections = {}
    bases = []
    for k in T.degrees:
        fk = f.at(k)
        if rank(fk) != fk.cols:
            raise NotInjectiveError(k)
        keep, proj = _quotient_projection(fk)
        projections[k] = (keep, proj)
        bases.append([T.basis(k)[i] for i in keep])
    diffs = []
    for k in range(T.lo, T.hi):
        keep, _ = projections[k]
        _, proj_next = projections[k + 1]
        incl = SparseMatrix.from_entries(T.dim(k), len(keep), ((i, j, 1) for j, i in enumerate(keep)))
        diffs.append(proj_next @ T.d(k) @ incl)
    return ChainComplex.build(T.lo, bases, diffs)


def _quotient_projection(fk: SparseMatrix) -> tuple[list[int], SparseMatrix]:
    """Coordinates spanning ``V / im(fk)`` and the projection onto them."""
    piv = rref_rows(fk.transpose()._data.values())
    keep = [i for i in range(fk.rows) if i not in piv]
    pos = {i: j for j, i in enumerate(keep)}
    entries: dict[tuple[int, int], Scalar] = {}
    for i in keep:
        entries[(pos[i], i)] = 1
    for p, row in piv.items():
        for c, v in row.items():
            if c in pos:
                entries[(pos[c], p)] = entries.get((pos[c], p), 0) - v
    return keep, SparseMatrix.from_entries(len(keep), fk.rows, ((r, c, v) for (r, c), v in entries.items()))


def tensor_total(a: ChainComplex, b: ChainComplex) -> ChainComplex:
    """Total complex of ``a (x) b`` with ``d(x (x) y) = dx (x) y + (-1)^{|x|} x (x) dy``."""
    if not a.bases or not b.bases:
        return ChainComplex.zero()
    lo, hi = a.lo + b.lo, a.hi + b.hi
    # degree n term: blocks (i, n - i) for i in a.degrees
    layout: dict[int, list[tuple[int, int]]] = {}
    bases = []
    for n in range(lo, hi + 1):
        blocks, basis, off = [], [], 0
        for i in a.degrees:
            j = n - i
            if b.dim(j) == 0 or a.dim(i) == 0:
                continue
            blocks.append((i, off))
            basis.extend((x, y) for x in a.basis(i) for y in b.basis(j))
            off += a.dim(i) * b.dim(j)
        layout[n] = blocks
        bases.append(basis)
    diffs = []
    for n in range(lo, hi):
        entries = []
        tgt_off = {i: off for i, off in layout[n + 1]}
        for i, off in layout[n]:
            j = n - i
            da = a.d(i)
            if i + 1 in tgt_off:
                for r, c, v in kron(da, SparseMatrix.identity(b.dim(j))).entries():
                    entries.append((tgt_off[i + 1] + r, off + c, v))
            db = b.d(j)
            if i in tgt_off:
                sign = -1 if i % 2 else 1
                for r, c, v in kron(SparseMatrix.identity(a.dim(i)), db).entries():
                    entries.append((tgt_off[i] + r, off + c, sign * v))
        diffs.append(SparseMatrix.from_entries(len(bases[n + 1 - lo]), len(bases[n - lo]), entries))
    return ChainComplex.build(lo, bases, diffs)


def subcomplex_homology(c: ChainComplex, spans: Mapping[int, SparseMatrix]) -> dict[int, int]:
    """Homology of the subcomplex whose degree-i term is the column span of ``spans[i]``.

    The spans must be closed under the differential; columns must be
    independent.
    """
    r = {i: rank(c.d(i) @ spans[i]) if spans[i].cols else 0 for i in c.degrees}
    return {i: spans[i].cols - r[i] - r.get(i - 1, 0) for i in c.degrees}


def quotient_homology(c: ChainComplex, spans: Mapping[int, SparseMatrix]) -> dict[int, int]:
    """Homology of ``c / S`` for a subcomplex ``S`` given by spanning columns."""
    sub_rank = {i: rank(spans[i]) for i in c.degrees}
    induced = {}
    for i in c.degrees:
        nxt = spans.get(i + 1, SparseMatrix.zeros(c.dim(i + 1), 0))
        induced[i] = rank(hstack(c.d(i), nxt)) - sub_rank.get(i + 1, 0)
    return {i: c.dim(i) - sub_rank[i] - induced[i] - induced.get(i - 1, 0) for i in c.degrees}
