"""Hives: construction from a lattice pair, rhombus validation, boundary
types, conversion to Littlewood-Richardson fillings, and rendering.

A hive of size n is a triangular integer array h[i][j], 0 <= i <= j <= n,
normalized by h[0][0] = 0, satisfying the right-leaning, left-leaning and
vertical rhombus inequalities.  Each inequality family is evaluated at
every index pair whose four referenced entries exist inside the triangle
(for the vertical family this includes i = 0 and excludes j = n).
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .lattice import (Lattice, lattice_invariants, max_direct_sum_norm,
                      min_direct_sum_norm, pair_invariant)

PRIMARY = "primary"
SWAPPED = "swapped"


class DualityError(RuntimeError):
    """The min-route and max-route disagreed at one hive entry."""

    def __init__(self, s: int, t: int, min_value: int, max_value: int):
        super().__init__(
            f"duality check failed at ({s},{t}): "
            f"min route {min_value}, max route {max_value}")
        self.s = s
        self.t = t
        self.min_value = min_value
        self.max_value = max_value


class Hive:
    """Triangular integer array; row j holds h[0][j] .. h[j][j]."""

    __slots__ = ("n", "rows")

    def __init__(self, rows):
        rows = tuple(tuple(int(v) for v in row) for row in rows)
        n = len(rows) - 1
        if n < 0 or any(len(row) != j + 1 for j, row in enumerate(rows)):
            raise ValueError("hive rows must have lengths 1, 2, ..., n+1")
        if rows[0][0] != 0:
            raise ValueError("hive normalization requires h00 = 0")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "rows", rows)

    def __setattr__(self, name, value):
        raise AttributeError("Hive is immutable")

    def __getitem__(self, key) -> int:
        i, j = key
        return self.rows[j][i]

    def __eq__(self, other):
        return isinstance(other, Hive) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return f"Hive(n={self.n}, rows={self.rows})"

    def to_json(self) -> dict:
        return {"n": self.n, "rows": [list(row) for row in self.rows]}

    @classmethod
    def from_json(cls, obj: dict) -> "Hive":
        hive = cls(obj["rows"])
        if "n" in obj and hive.n != obj["n"]:
            raise ValueError("hive size does not match rows")
        return hive


@dataclass(frozen=True)
class RhombusViolation:
    family: str  # "right" | "left" | "vertical"
    i: int
    j: int
    lhs: int
    rhs: int


@dataclass(frozen=True)
class RhombusReport:
    violations: tuple

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok


@dataclass(frozen=True)
class HiveType:
    mu: tuple
    nu: tuple
    lam: tuple


class NotAHiveError(ValueError):
    def __init__(self, report: RhombusReport):
        super().__init__(f"array violates {len(report.violations)} "
                         "rhombus inequalities")
        self.report = report


def check_rhombus(hive: Hive) -> RhombusReport:
    """Evaluate all three rhombus families; empty report iff a hive."""
    h = hive.__getitem__
    n = hive.n
    bad = []
    for j in range(2, n + 1):
        for i in range(1, j):
            lhs = h((i, j)) + h((i - 1, j - 1))
            rhs = h((i - 1, j)) + h((i, j - 1))
            if lhs < rhs:
                bad.append(RhombusViolation("right", i, j, lhs, rhs))
            lhs = h((i, j)) + h((i, j - 1))
            rhs = h((i - 1, j - 1)) + h((i + 1, j))
            if lhs < rhs:
                bad.append(RhombusViolation("left", i, j, lhs, rhs))
    for j in range(1, n):
        for i in range(0, j):
            lhs = h((i, j)) + h((i + 1, j))
            rhs = h((i + 1, j + 1)) + h((i, j - 1))
            if lhs < rhs:
                bad.append(RhombusViolation("vertical", i, j, lhs, rhs))
    return RhombusReport(tuple(bad))


def hive_type(hive: Hive) -> HiveType:
    """Boundary difference partitions (mu, nu, lambda); rejects non-hives."""
    report = check_rhombus(hive)
    if not report.ok:
        raise NotAHiveError(report)
    h = hive.__getitem__
    n = hive.n
    mu = tuple(h((0, k)) - h((0, k - 1)) for k in range(1, n + 1))
    nu = tuple(h((k, n)) - h((k - 1, n)) for k in range(1, n + 1))
    lam = tuple(h((k, k)) - h((k - 1, k - 1)) for k in range(1, n + 1))
    return HiveType(mu, nu, lam)


def build_hive(n_lat: Lattice, lam_lat: Lattice, variant: str = PRIMARY) -> Hive:
    """The hive of a lattice pair (N, Lambda).

    Entry (s,t) is |lambda| minus the minimal direct-sum norm over pairs
    of submodules of Lambda (rank n-t) and of N (rank t-s); the swapped
    variant uses M = pair invariant lattice in place of N.  Every entry is
    recomputed through the max formula over summand-realized pairs and the
    two values must agree; a mismatch raises DualityError.
    """
    if variant not in (PRIMARY, SWAPPED):
        raise ValueError(f"unknown hive variant {variant!r}")
    if n_lat.n != lam_lat.n or n_lat.config != lam_lat.config:
        raise ValueError("pair lattices must share dimension and ring")
    if variant == SWAPPED:
        # M in place of N, carried out on transposes: Lambda^T = M^T N^T is
        # the valid factorization with the roles exchanged, so the swapped
        # hive is the primary construction on the pair (M^T, Lambda^T) and
        # its type comes out (nu, mu, lambda)
        m_lat, _ = pair_invariant(n_lat, lam_lat)
        n_lat = Lattice(m_lat.gens.transpose())
        lam_lat = Lattice(lam_lat.gens.transpose())
    m_lat, _ = pair_invariant(n_lat, lam_lat)
    size = sum(lattice_invariants(lam_lat))
    n = lam_lat.n
    rows = []
    for t in range(n + 1):
        row = []
        for s in range(t + 1):
            hmin = size - min_direct_sum_norm(lam_lat, n_lat, n - t, t - s)
            hmax = max_direct_sum_norm(lam_lat, m_lat, s, t - s, target=hmin)
            if hmax != hmin:
                raise DualityError(s, t, hmin, hmax)
            row.append(hmin)
        rows.append(row)
    return Hive(rows)


# ---------------------------------------------------------------------------
# Littlewood-Richardson fillings


class LRFilling:
    """Skew tableau of shape lambda/mu with content nu, stored as counts.

    counts[k-1][i-1] is the number of letters i in row k (1 <= i <= k).
    """

    __slots__ = ("n", "shape", "inner", "content", "counts")

    def __init__(self, shape, inner, content, counts):
        shape = tuple(int(v) for v in shape)
        inner = tuple(int(v) for v in inner)
        content = tuple(int(v) for v in content)
        counts = tuple(tuple(int(c) for c in row) for row in counts)
        n = len(shape)
        if len(inner) != n or len(content) != n or len(counts) != n:
            raise ValueError("filling components must all have length n")
        if any(len(row) != k + 1 for k, row in enumerate(counts)):
            raise ValueError("counts row k must have k entries")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "inner", inner)
        object.__setattr__(self, "content", content)
        object.__setattr__(self, "counts", counts)

    def __setattr__(self, name, value):
        raise AttributeError("LRFilling is immutable")

    def count(self, letter: int, row: int) -> int:
        """Number of letters `letter` in row `row` (both 1-based)."""
        if not (1 <= letter <= row <= self.n):
            return 0
        return self.counts[row - 1][letter - 1]

    def __eq__(self, other):
        return (isinstance(other, LRFilling) and self.shape == other.shape
                and self.inner == other.inner and self.counts == other.counts)

    def __hash__(self):
        return hash((self.shape, self.inner, self.counts))

    def __repr__(self):
        return (f"LRFilling(shape={self.shape}, inner={self.inner}, "
                f"content={self.content})")

    def to_json(self) -> dict:
        return {"n": self.n, "shape": list(self.shape),
                "inner": list(self.inner), "content": list(self.content),
                "counts": [list(row) for row in self.counts]}

    @classmethod
    def from_json(cls, obj: dict) -> "LRFilling":
        return cls(obj["shape"], obj["inner"], obj["content"], obj["counts"])


def hive_to_lr_filling(hive: Hive) -> LRFilling:
    """The linear map from hives to LR fillings.

    c[i][k] = (h[i][k] - h[i-1][k]) - (h[i][k-1] - h[i-1][k-1]), the second
    difference read as 0 when i > k-1.  Nonnegativity of the counts is
    exactly the right-leaning family; shape and content identities hold by
    telescoping.
    """
    typ = hive_type(hive)  # validates the rhombus inequalities
    h = hive.__getitem__
    n = hive.n
    counts = []
    for k in range(1, n + 1):
        row = []
        for i in range(1, k + 1):
            first = h((i, k)) - h((i - 1, k))
            second = h((i, k - 1)) - h((i - 1, k - 1)) if i <= k - 1 else 0
            row.append(first - second)
        counts.append(row)
    return LRFilling(typ.lam, typ.mu, typ.nu, counts)


@dataclass(frozen=True)
class LRValidation:
    ok: bool
    problems: tuple

    def __bool__(self):
        return self.ok


def validate_lr(filling: LRFilling) -> LRValidation:
    """Semistandardness plus the ballot condition, with diagnostics.

    Rows weakly increase by construction of the counts encoding; checks
    nonnegativity, the shape/content identities, strict column increase,
    and the reverse reading word's ballot property, reporting the first
    failure of each kind.
    """
    n = filling.n
    shape, inner, content = filling.shape, filling.inner, filling.content
    problems = []

    def fail(msg):
        if not problems:
            problems.append(msg)

    for k in range(1, n + 1):
        if any(c < 0 for c in filling.counts[k - 1]):
            fail(f"negative letter count in row {k}")
        if inner[k - 1] + sum(filling.counts[k - 1]) != shape[k - 1]:
            fail(f"row {k} length differs from shape")
    for i in range(1, n + 1):
        total = sum(filling.count(i, k) for k in range(1, n + 1))
        if total != content[i - 1]:
            fail(f"letter {i} total differs from content")
    for k in range(2, n + 1):
        for i in range(1, k + 1):
            end_here = inner[k - 1] + sum(filling.count(ii, k)
                                          for ii in range(1, i + 1))
            end_above = inner[k - 2] + sum(filling.count(ii, k - 1)
                                           for ii in range(1, i))
            if end_here > end_above:
                fail(f"column not strictly increasing at row {k}, letter {i}")
                break
    for i in range(1, n):
        seen_next = 0
        seen_this = 0
        for k in range(1, n + 1):
            seen_next += filling.count(i + 1, k)
            if seen_next > seen_this:
                fail(f"ballot violation for letters {i},{i + 1} at row {k}")
                break
            seen_this += filling.count(i, k)
    return LRValidation(not problems, tuple(problems))


# ---------------------------------------------------------------------------
# rendering


def render(hive: Hive, fmt: str = "ascii") -> str:
    if fmt == "ascii":
        return _render_ascii(hive)
    if fmt == "svg":
        return _render_svg(hive)
    if fmt == "json":
        return json.dumps(hive.to_json())
    raise ValueError(f"unknown render format {fmt!r}")


def _render_ascii(hive: Hive) -> str:
    cells = [[str(v) for v in row] for row in hive.rows]
    width = max(len(c) for row in cells for c in row)
    lines = [" ".join(c.rjust(width) for c in row) for row in cells]
    total = len(lines[-1])
    return "\n".join(" " * ((total - len(line)) // 2) + line
                     for line in lines)


def _render_svg(hive: Hive) -> str:
    n = hive.n
    dx, dy, margin = 64, 56, 40
    width = margin * 2 + dx * n
    height = margin * 2 + dy * n
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" '
             f'width="{width}" height="{height}" '
             f'viewBox="0 0 {width} {height}">']
    for j, row in enumerate(hive.rows):
        for i, value in enumerate(row):
            x = margin + i * dx + (n - j) * dx // 2
            y = margin + j * dy
            parts.append(f'<text x="{x}" y="{y}" text-anchor="middle" '
                         f'font-family="monospace">{value}</text>')
    parts.append("</svg>")
    return "\n".join(parts)
