"""Exact linear algebra over K with O-structure.

Smith decomposition over a DVR, invariant partitions, matrix norms
(sums of invariant orders), unimodularity tests, row reduction to block
forms, and the bottom-block quotient invariants used by the lattice
optimizers.  All operations are pure functions of immutable inputs.
"""

from __future__ import annotations

from dataclasses import dataclass

from .ring import INFINITY, RingConfig, RingElement


class ValuedMatrix:
    """Dense matrix over K; all entries share one RingConfig."""

    __slots__ = ("config", "rows", "cols", "entries")

    def __init__(self, config: RingConfig, entries):
        entries = tuple(tuple(config.element(e) for e in row) for row in entries)
        if not entries or not entries[0]:
            raise ValueError("matrix dimensions must be positive")
        cols = len(entries[0])
        if any(len(row) != cols for row in entries):
            raise ValueError("ragged matrix rows")
        object.__setattr__(self, "config", config)
        object.__setattr__(self, "rows", len(entries))
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", entries)

    def __setattr__(self, name, value):
        raise AttributeError("ValuedMatrix is immutable")

    # -- constructors --------------------------------------------------------

    @classmethod
    def identity(cls, config: RingConfig, n: int) -> "ValuedMatrix":
        one, zero = config.one, config.zero
        return cls(config, [[one if i == j else zero for j in range(n)]
                            for i in range(n)])

    @classmethod
    def diagonal(cls, config: RingConfig, diag) -> "ValuedMatrix":
        diag = [config.element(d) for d in diag]
        zero = config.zero
        n = len(diag)
        return cls(config, [[diag[i] if i == j else zero for j in range(n)]
                            for i in range(n)])

    @classmethod
    def column(cls, config: RingConfig, vec) -> "ValuedMatrix":
        return cls(config, [[v] for v in vec])

    # -- access ---------------------------------------------------------------

    def __getitem__(self, key) -> RingElement:
        i, j = key
        return self.entries[i][j]

    def row(self, i) -> tuple:
        return self.entries[i]

    def col(self, j) -> tuple:
        return tuple(row[j] for row in self.entries)

    def __eq__(self, other):
        return (isinstance(other, ValuedMatrix) and self.config == other.config
                and self.entries == other.entries)

    def __hash__(self):
        return hash((self.config, self.entries))

    def __repr__(self):
        body = "; ".join(" ".join(repr(e) for e in row) for row in self.entries)
        return f"ValuedMatrix[{self.rows}x{self.cols}: {body}]"

    # -- algebra ---------------------------------------------------------------

    def __matmul__(self, other: "ValuedMatrix") -> "ValuedMatrix":
        if self.config != other.config:
            raise ValueError("mixed ring configurations")
        if self.cols != other.rows:
            raise ValueError("dimension mismatch in matrix product")
        ocols = list(zip(*other.entries))
        out = [[_dot(row, c, self.config) for c in ocols] for row in self.entries]
        return ValuedMatrix(self.config, out)

    def scale(self, s) -> "ValuedMatrix":
        s = self.config.element(s)
        return ValuedMatrix(self.config,
                            [[s * e for e in row] for row in self.entries])

    def transpose(self) -> "ValuedMatrix":
        return ValuedMatrix(self.config, list(zip(*self.entries)))

    def hstack(self, other: "ValuedMatrix") -> "ValuedMatrix":
        if self.config != other.config or self.rows != other.rows:
            raise ValueError("hstack shape mismatch")
        return ValuedMatrix(self.config, [a + b for a, b in
                                          zip(self.entries, other.entries)])

    def select_columns(self, js) -> "ValuedMatrix":
        return ValuedMatrix(self.config,
                            [[row[j] for j in js] for row in self.entries])

    def top_rows(self, k) -> "ValuedMatrix":
        return ValuedMatrix(self.config, self.entries[:k])

    def bottom_rows(self, k) -> "ValuedMatrix":
        return ValuedMatrix(self.config, self.entries[self.rows - k:])

    def inverse(self) -> "ValuedMatrix":
        """Exact inverse over the field K; raises on singular input."""
        if self.rows != self.cols:
            raise ValueError("inverse of a non-square matrix")
        n = self.rows
        cfg = self.config
        work = [list(row) + list(ident_row)
                for row, ident_row in zip(self.entries,
                                          ValuedMatrix.identity(cfg, n).entries)]
        for col in range(n):
            piv = next((r for r in range(col, n) if not work[r][col].is_zero()),
                       None)
            if piv is None:
                raise ValueError("matrix is singular over K")
            work[col], work[piv] = work[piv], work[col]
            inv = cfg.one / work[col][col]
            work[col] = [inv * e for e in work[col]]
            for r in range(n):
                if r != col and not work[r][col].is_zero():
                    f = work[r][col]
                    work[r] = [a - f * b for a, b in zip(work[r], work[col])]
        return ValuedMatrix(cfg, [row[n:] for row in work])

    def rank(self) -> int:
        """K-rank by Gaussian elimination."""
        work = [list(row) for row in self.entries]
        rank = 0
        for col in range(self.cols):
            piv = next((r for r in range(rank, self.rows)
                        if not work[r][col].is_zero()), None)
            if piv is None:
                continue
            work[rank], work[piv] = work[piv], work[rank]
            prow = work[rank]
            pinv = self.config.one / prow[col]
            for r in range(rank + 1, self.rows):
                if not work[r][col].is_zero():
                    f = work[r][col] * pinv
                    work[r] = [a - f * b for a, b in zip(work[r], prow)]
            rank += 1
            if rank == self.rows:
                break
        return rank

    def min_entry_valuation(self):
        return min(e.valuation() for row in self.entries for e in row)

    # -- JSON ------------------------------------------------------------------

    def to_json(self) -> dict:
        cfg = self.config
        return {"rows": self.rows, "cols": self.cols,
                "data": [[cfg.scalar_to_json(e) for e in row]
                         for row in self.entries]}

    @classmethod
    def from_json(cls, config: RingConfig, obj: dict) -> "ValuedMatrix":
        data = obj["data"]
        mat = cls(config, [[config.parse_scalar(s) for s in row] for row in data])
        if mat.rows != obj.get("rows", mat.rows) or mat.cols != obj.get("cols", mat.cols):
            raise ValueError("matrix data does not match declared dimensions")
        return mat


def _dot(row, col, config) -> RingElement:
    acc = config.zero
    for a, b in zip(row, col):
        if not (a.is_zero() or b.is_zero()):
            acc = acc + a * b
    return acc


@dataclass(frozen=True)
class SmithDecomposition:
    """A = P @ D @ Q with P, Q unimodular over O and D diagonal.

    Diagonal entries are pure uniformizer powers with non-increasing
    valuations; rank deficiency shows up as trailing zeros.  The inverses
    accumulated during elimination are kept because downstream block
    reductions need them.
    """

    p: ValuedMatrix
    d: ValuedMatrix
    q: ValuedMatrix
    p_inv: ValuedMatrix
    q_inv: ValuedMatrix

    @property
    def diagonal_valuations(self) -> tuple:
        return tuple(self.d[i, i].valuation()
                     for i in range(min(self.d.rows, self.d.cols)))

    @property
    def rank(self) -> int:
        return sum(1 for v in self.diagonal_valuations if v != INFINITY)


class _Eliminator:
    # mutable worker: tracks current = Pacc @ A @ Qacc together with
    # P = Pacc^-1 and Q = Qacc^-1 so that A = P @ current @ Q throughout

    def __init__(self, a: ValuedMatrix):
        self.cfg = a.config
        self.m = a.rows
        self.k = a.cols
        self.cur = [list(row) for row in a.entries]
        ident_m = ValuedMatrix.identity(a.config, a.rows).entries
        ident_k = ValuedMatrix.identity(a.config, a.cols).entries
        self.p = [list(r) for r in ident_m]
        self.p_inv = [list(r) for r in ident_m]
        self.q = [list(r) for r in ident_k]
        self.q_inv = [list(r) for r in ident_k]

    def swap_rows(self, i, j):
        if i == j:
            return
        self.cur[i], self.cur[j] = self.cur[j], self.cur[i]
        self.p_inv[i], self.p_inv[j] = self.p_inv[j], self.p_inv[i]
        for row in self.p:
            row[i], row[j] = row[j], row[i]

    def swap_cols(self, i, j):
        if i == j:
            return
        for row in self.cur:
            row[i], row[j] = row[j], row[i]
        for row in self.q_inv:
            row[i], row[j] = row[j], row[i]
        self.q[i], self.q[j] = self.q[j], self.q[i]

    def add_row(self, i, j, c):
        # row_i += c * row_j
        self.cur[i] = [a + c * b for a, b in zip(self.cur[i], self.cur[j])]
        self.p_inv[i] = [a + c * b for a, b in zip(self.p_inv[i], self.p_inv[j])]
        for row in self.p:
            row[j] = row[j] - c * row[i]

    def add_col(self, i, j, c):
        # col_i += c * col_j
        for row in self.cur:
            row[i] = row[i] + c * row[j]
        for row in self.q_inv:
            row[i] = row[i] + c * row[j]
        self.q[j] = [a - c * b for a, b in zip(self.q[j], self.q[i])]

    def scale_row(self, i, u):
        # u must be a unit of O
        self.cur[i] = [u * e for e in self.cur[i]]
        self.p_inv[i] = [u * e for e in self.p_inv[i]]
        uinv = self.cfg.one / u
        for row in self.p:
            row[i] = row[i] * uinv

    def matrices(self):
        cfg = self.cfg
        return (ValuedMatrix(cfg, self.p), ValuedMatrix(cfg, self.cur),
                ValuedMatrix(cfg, self.q), ValuedMatrix(cfg, self.p_inv),
                ValuedMatrix(cfg, self.q_inv))


def smith_decompose(a: ValuedMatrix) -> SmithDecomposition:
    """Smith decomposition over the DVR: A = P @ D @ Q.

    Pivoting picks the entry of minimal valuation (ties: lowest row, then
    lowest column), so every clearing multiplier lies in O and P, Q stay
    unimodular.  The zero matrix yields an all-zero D.
    """
    work = _Eliminator(a)
    m, k = work.m, work.k
    rank = 0
    for step in range(min(m, k)):
        piv = None
        best = INFINITY
        for i in range(step, m):
            row = work.cur[i]
            for j in range(step, k):
                v = row[j].valuation()
                if v < best:
                    best, piv = v, (i, j)
        if piv is None or best == INFINITY:
            break
        work.swap_rows(step, piv[0])
        work.swap_cols(step, piv[1])
        pivot = work.cur[step][step]
        for i in range(step + 1, m):
            e = work.cur[i][step]
            if not e.is_zero():
                work.add_row(i, step, -(e / pivot))
        for j in range(step + 1, k):
            e = work.cur[step][j]
            if not e.is_zero():
                work.add_col(j, step, -(e / pivot))
        rank += 1
    # normalize pivots to pure uniformizer powers
    for i in range(rank):
        u = work.cur[i][i].unit_part()
        work.scale_row(i, work.cfg.one / u)
    # min-val pivoting leaves valuations ascending; the invariant partition
    # convention wants them non-increasing (stable, so ties keep identity
    # inputs fixed)
    vals = [work.cur[i][i].valuation() for i in range(rank)]
    order = sorted(range(rank), key=lambda i: (-vals[i], i))
    placed = list(range(rank))
    pos = {v: i for i, v in enumerate(placed)}
    for target, src in enumerate(order):
        cur = pos[src]
        if cur != target:
            other = placed[target]
            work.swap_rows(target, cur)
            work.swap_cols(target, cur)
            placed[target], placed[cur] = placed[cur], placed[target]
            pos[src], pos[other] = target, cur
    p, d, q, p_inv, q_inv = work.matrices()
    return SmithDecomposition(p, d, q, p_inv, q_inv)


def invariant_partition(a: ValuedMatrix) -> tuple:
    """Non-increasing valuations of the Smith diagonal, truncated to K-rank."""
    vals = smith_decompose(a).diagonal_valuations
    return tuple(int(v) for v in vals if v != INFINITY)


def matrix_norm(a: ValuedMatrix):
    """Sum of the invariant orders; INFINITY iff K-rank < column count."""
    parts = invariant_partition(a)
    if len(parts) < a.cols:
        return INFINITY
    return sum(parts)


def unimodular_check(p: ValuedMatrix) -> bool:
    """True iff P is square over O with determinant a unit of O."""
    if p.rows != p.cols:
        return False
    if p.min_entry_valuation() < 0:
        return False
    parts = invariant_partition(p)
    return len(parts) == p.rows and sum(parts) == 0


def reduce_to_top_rows(s: ValuedMatrix):
    """Unimodular P with P @ S supported in the first r rows (r = K-rank).

    Returns (P, S_top) where S_top is the top r x r block of P @ S;
    matrix_norm(S_top) == matrix_norm(S).  Rank-deficient input is an error.
    """
    dec = smith_decompose(s)
    r = dec.rank
    if r < s.cols:
        raise ValueError("reduce_to_top_rows requires full column rank")
    reduced = dec.d @ dec.q  # equals P_inv @ S, zero below row r
    return dec.p_inv, reduced.top_rows(r)


def quotient_free_invariants(t: ValuedMatrix, s: ValuedMatrix) -> tuple:
    """Invariant orders of the free part of T's image modulo the span of S.

    Reduces S to its top rows, then reads the invariant partition of the
    bottom (n - r) x n block of P @ T.
    """
    if t.rows != t.cols:
        raise ValueError("T must be square")
    if t.rank() < t.rows:
        raise ValueError("T must have full rank")
    if s.cols >= t.rows:
        raise ValueError("S must have rank below the ambient dimension")
    p, _ = reduce_to_top_rows(s)
    bottom = (p @ t).bottom_rows(t.rows - s.cols)
    return invariant_partition(bottom)


@dataclass(frozen=True)
class NormalForm:
    """Block upper triangular realization of a direct sum of submodules."""

    p: ValuedMatrix
    block_transforms: tuple
    matrix: ValuedMatrix
    diagonal_valuations: tuple  # one tuple per block, non-increasing


def normal_form(blocks) -> NormalForm:
    """Realize pairwise-direct generator blocks in block upper triangular form.

    Each diagonal block comes out diagonal with non-increasing valuations,
    so the total norm is the sum of the diagonal block norms.  A non-direct
    sum is rejected.
    """
    blocks = list(blocks)
    if not blocks:
        raise ValueError("normal_form needs at least one block")
    cfg = blocks[0].config
    n = blocks[0].rows
    if any(b.rows != n or b.config != cfg for b in blocks):
        raise ValueError("blocks must share ambient dimension and ring")
    concat = blocks[0]
    for b in blocks[1:]:
        concat = concat.hstack(b)
    if concat.rank() < concat.cols:
        raise ValueError("sum not direct")

    p_total = ValuedMatrix.identity(cfg, n)
    out_blocks = []
    transforms = []
    diag_vals = []
    offset = 0
    for b in blocks:
        moved = p_total @ b
        if offset == 0:
            sub = moved
        else:
            sub = moved.bottom_rows(n - offset)
        dec = smith_decompose(sub)
        # lift the row transform to the full space, acting below `offset`
        lifted = _embed_rows(dec.p_inv, n, offset)
        p_total = lifted @ p_total
        new_block = (lifted @ moved) @ dec.q_inv
        out_blocks.append(new_block)
        transforms.append(dec.q_inv)
        diag_vals.append(tuple(int(v) for v in dec.diagonal_valuations))
        offset += b.cols
    result = out_blocks[0]
    for b in out_blocks[1:]:
        result = result.hstack(b)
    return NormalForm(p_total, tuple(transforms), result, tuple(diag_vals))


def _embed_rows(small: ValuedMatrix, n: int, offset: int) -> ValuedMatrix:
    cfg = small.config
    out = [list(row) for row in ValuedMatrix.identity(cfg, n).entries]
    for i in range(small.rows):
        for j in range(small.cols):
            out[offset + i][offset + j] = small[i, j]
    return ValuedMatrix(cfg, out)
