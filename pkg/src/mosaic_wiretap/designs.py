"""Incidence structures, mosaics, and exhaustive design verification.

All verification runs in exact integer arithmetic: the defining
identities of tactical configurations, balanced incomplete block
designs (BIBDs) and group divisible designs (GDDs) are integral, so a
candidate either satisfies them exactly or it is not that design.

Classification is attempted most-specific first: BIBD, then GDD (when a
point-class partition is supplied), then tactical configuration.
Degenerate boundaries are explicit: blocks of size k < 2 or a single
point never classify as a BIBD.

File format
-----------
An incidence structure is stored as a header line ``v b`` followed by v
rows of b characters from {0,1} (row = point, column = block index).  A
mosaic file concatenates the members, each preceded by a ``color
<label>`` line.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np


@dataclass(eq=False)
class IncidenceStructure:
    """A 0/1 incidence matrix with labeled points (rows) and block
    indices (columns)."""

    points: tuple
    blocks: tuple
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.int64)
        if m.ndim != 2 or m.shape != (len(self.points), len(self.blocks)):
            raise ValueError("incidence matrix shape does not match labels")
        if not np.isin(m, (0, 1)).all():
            raise ValueError("incidence matrix entries must be 0 or 1")
        self.matrix = m

    @property
    def v(self) -> int:
        return len(self.points)

    @property
    def b(self) -> int:
        return len(self.blocks)

    @property
    def nonempty(self) -> bool:
        return bool(self.matrix.any())


@dataclass(frozen=True)
class DesignParams:
    """Parameters of a verified design; `kind` is the most specific
    class the structure was verified to satisfy."""

    kind: str  # 'tactical' | 'bibd' | 'gdd'
    v: int
    b: int
    k: int
    r: int
    lam: int | None = None
    u: int | None = None
    m: int | None = None
    lam1: int | None = None
    lam2: int | None = None

    def as_dict(self) -> dict:
        out = {"kind": self.kind, "v": self.v, "b": self.b,
               "k": self.k, "r": self.r}
        for name in ("lam", "u", "m", "lam1", "lam2"):
            val = getattr(self, name)
            if val is not None:
                out[name] = val
        return out


@dataclass(frozen=True)
class ClassMatrix:
    """Partition of the point set into m classes of common size u."""

    assignment: tuple[int, ...]
    u: int
    m: int

    @classmethod
    def from_assignment(cls, assignment: Sequence[int]) -> "ClassMatrix":
        assignment = tuple(int(c) for c in assignment)
        classes = sorted(set(assignment))
        if classes != list(range(len(classes))):
            raise ValueError("class indices must be 0..m-1 without gaps")
        sizes = {c: assignment.count(c) for c in classes}
        if len(set(sizes.values())) != 1:
            raise ValueError(f"point classes must have equal sizes, got {sizes}")
        return cls(assignment, sizes[classes[0]], len(classes))

    def matrix(self) -> np.ndarray:
        a = np.asarray(self.assignment)
        return (a[:, None] == a[None, :]).astype(np.int64)


@dataclass(eq=False)
class Mosaic:
    """Family of incidence structures on a common (points, blocks) pair,
    expected to tile the all-ones matrix: sum of members = J."""

    colors: tuple
    members: dict = field(default_factory=dict)
    functional_form: Callable | None = None

    def __post_init__(self):
        if not self.colors:
            raise ValueError("mosaic needs at least one color")
        shapes = {self.members[c].matrix.shape for c in self.colors}
        if len(shapes) != 1:
            raise ValueError("mosaic members must share the (points, blocks) pair")

    @property
    def points(self) -> tuple:
        return self.members[self.colors[0]].points

    @property
    def blocks(self) -> tuple:
        return self.members[self.colors[0]].blocks

    def color_index_matrix(self) -> np.ndarray:
        """(v, b) array of color indices; requires the members to tile J."""
        stack = np.stack([self.members[c].matrix for c in self.colors])
        if not (stack.sum(axis=0) == 1).all():
            raise ValueError("members do not tile the all-ones matrix")
        return stack.argmax(axis=0)


@dataclass(frozen=True)
class MosaicReport:
    is_mosaic: bool
    member_params: dict
    problems: tuple[str, ...]

    def summary(self) -> str:
        if not self.is_mosaic:
            return "not a mosaic: " + "; ".join(self.problems)
        kinds = []
        for color in self.member_params:
            p = self.member_params[color]
            kinds.append("unclassified" if p is None else p.kind)
        uniq = sorted(set(kinds))
        params = [p for p in self.member_params.values() if p is not None]
        if len(uniq) == 1 and uniq[0] == "bibd" and len(params) == len(kinds):
            tuples = {(p.v, p.k, p.lam) for p in params}
            if len(tuples) == 1:
                v, k, lam = next(iter(tuples))
                return f"mosaic of ({v},{k},{lam}) BIBDs"
        if len(uniq) == 1 and uniq[0] == "gdd" and len(params) == len(kinds):
            tuples = {(p.u, p.m, p.k, p.lam1, p.lam2) for p in params}
            if len(tuples) == 1:
                u, m, k, l1, l2 = next(iter(tuples))
                return f"mosaic of ({u},{m},{k},{l1},{l2}) GDDs"
        return "mosaic with member kinds: " + ", ".join(kinds)


# ----------------------------------------------------------------------
# Verification
# ----------------------------------------------------------------------

def verify_tactical(inc: IncidenceStructure) -> DesignParams | None:
    """Constant row sums r and column sums k; None when violated."""
    if not inc.nonempty:
        return None
    n = inc.matrix
    rows = n.sum(axis=1)
    cols = n.sum(axis=0)
    if rows.min() != rows.max() or cols.min() != cols.max():
        return None
    r, k = int(rows[0]), int(cols[0])
    assert inc.b * k == inc.v * r  # double counting of incidences
    return DesignParams("tactical", v=inc.v, b=inc.b, k=k, r=r)


def verify_bibd(inc: IncidenceStructure) -> DesignParams | None:
    """Tactical with every distinct point pair on exactly lam common
    blocks; cross-checks r(k-1) = lam(v-1) and NN* = (r-lam)id + lam J."""
    base = verify_tactical(inc)
    if base is None or base.k < 2 or base.v < 2:
        return None
    n = inc.matrix
    gram = n @ n.T
    off = gram[~np.eye(inc.v, dtype=bool)]
    if off.min() != off.max():
        return None
    lam = int(off[0])
    r, k, v = base.r, base.k, base.v
    if r * (k - 1) != lam * (v - 1):
        return None
    expect = (r - lam) * np.eye(v, dtype=np.int64) + lam * np.ones((v, v), np.int64)
    if not (gram == expect).all():
        return None
    return DesignParams("bibd", v=v, b=base.b, k=k, r=r, lam=lam)


def verify_gdd(inc: IncidenceStructure, classes: ClassMatrix) -> DesignParams | None:
    """Same-class pairs on lam1 common blocks, cross-class pairs on lam2;
    cross-checks the replication identity and
    NN* = (r-lam1)id + (lam1-lam2)C + lam2 J."""
    if len(classes.assignment) != inc.v:
        raise ValueError("class assignment length does not match point count")
    base = verify_tactical(inc)
    if base is None or base.k < 1:
        return None
    n = inc.matrix
    gram = n @ n.T
    c = classes.matrix()
    same = (c == 1) & ~np.eye(inc.v, dtype=bool)
    cross = c == 0
    u, m = classes.u, classes.m
    lam1 = lam2 = None
    if same.any():
        vals = gram[same]
        if vals.min() != vals.max():
            return None
        lam1 = int(vals[0])
    if cross.any():
        vals = gram[cross]
        if vals.min() != vals.max():
            return None
        lam2 = int(vals[0])
    # single-class or singleton-class layouts leave one count free
    lam1 = lam1 if lam1 is not None else 0
    lam2 = lam2 if lam2 is not None else 0
    r, k, v = base.r, base.k, base.v
    if r * (k - 1) != lam1 * (u - 1) + lam2 * (m - 1) * u:
        return None
    expect = ((r - lam1) * np.eye(v, dtype=np.int64)
              + (lam1 - lam2) * c + lam2 * np.ones((v, v), np.int64))
    if not (gram == expect).all():
        return None
    return DesignParams("gdd", v=v, b=base.b, k=k, r=r,
                        u=u, m=m, lam1=lam1, lam2=lam2)


def classify(inc: IncidenceStructure,
             classes: ClassMatrix | None = None) -> DesignParams | None:
    """Most specific classification: BIBD, then GDD, then tactical."""
    params = verify_bibd(inc)
    if params is not None:
        return params
    if classes is not None:
        params = verify_gdd(inc, classes)
        if params is not None:
            return params
    return verify_tactical(inc)


def verify_mosaic(mos: Mosaic, classes: ClassMatrix | None = None) -> MosaicReport:
    """Check the tiling property (sum of members = J entrywise) and
    classify every member."""
    problems = []
    first = mos.members[mos.colors[0]]
    total = np.zeros_like(first.matrix)
    for color in mos.colors:
        member = mos.members[color]
        if member.matrix.shape != first.matrix.shape:
            raise ValueError("mosaic members have mismatched dimensions")
        if not member.nonempty:
            problems.append(f"member {color!r} is empty")
        total = total + member.matrix
    if not (total == 1).all():
        over = int((total > 1).sum())
        under = int((total == 0).sum())
        problems.append(f"members do not tile J ({over} cells covered twice, "
                        f"{under} uncovered)")
    member_params = {c: classify(mos.members[c], classes) for c in mos.colors}
    return MosaicReport(is_mosaic=not problems,
                        member_params=member_params,
                        problems=tuple(problems))


def mosaic_from_function(f: Callable, points: Sequence, blocks: Sequence,
                         colors: Sequence) -> Mosaic:
    """Materialize the mosaic induced by f(s, x) -> color by full
    enumeration over blocks x points.  Raises if some color is never
    attained (members must be nonempty) or f leaves the color set."""
    points = tuple(points)
    blocks = tuple(blocks)
    colors = tuple(colors)
    index = {c: i for i, c in enumerate(colors)}
    mats = [np.zeros((len(points), len(blocks)), dtype=np.int64) for _ in colors]
    for j, s in enumerate(blocks):
        for i, x in enumerate(points):
            c = f(s, x)
            if c not in index:
                raise ValueError(f"f(s, x) = {c!r} is outside the color set")
            mats[index[c]][i, j] = 1
    for c, mat in zip(colors, mats):
        if not mat.any():
            raise ValueError(f"color {c!r} is never attained; members must be nonempty")
    members = {c: IncidenceStructure(points, blocks, mat)
               for c, mat in zip(colors, mats)}
    return Mosaic(colors=colors, members=members, functional_form=f)


# ----------------------------------------------------------------------
# Text format
# ----------------------------------------------------------------------

def format_incidence(inc: IncidenceStructure) -> str:
    rows = ["".join(str(int(x)) for x in row) for row in inc.matrix]
    return "\n".join([f"{inc.v} {inc.b}"] + rows) + "\n"


def _parse_block(lines: list[str], pos: int) -> tuple[IncidenceStructure, int]:
    header = lines[pos].split()
    if len(header) != 2:
        raise ValueError(f"line {pos + 1}: expected 'v b' header")
    v, b = int(header[0]), int(header[1])
    rows = lines[pos + 1: pos + 1 + v]
    if len(rows) != v:
        raise ValueError("truncated incidence block")
    mat = np.zeros((v, b), dtype=np.int64)
    for i, row in enumerate(rows):
        if len(row) != b or set(row) - {"0", "1"}:
            raise ValueError(f"line {pos + 2 + i}: expected {b} characters from 0/1")
        mat[i] = [int(ch) for ch in row]
    return IncidenceStructure(tuple(range(v)), tuple(range(b)), mat), pos + 1 + v


def parse_incidence(text: str) -> IncidenceStructure:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    inc, pos = _parse_block(lines, 0)
    if pos != len(lines):
        raise ValueError("trailing content after incidence block")
    return inc


def format_mosaic(mos: Mosaic) -> str:
    parts = []
    for color in mos.colors:
        label = color.label() if hasattr(color, "label") else str(color)
        parts.append(f"color {label}\n" + format_incidence(mos.members[color]))
    return "".join(parts)


def parse_mosaic(text: str) -> Mosaic:
    """Parse a mosaic file; member labels come back as strings."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty mosaic file")
    colors = []
    members = {}
    pos = 0
    while pos < len(lines):
        if not lines[pos].startswith("color "):
            raise ValueError(f"line {pos + 1}: expected 'color <label>'")
        label = lines[pos][len("color "):].strip()
        inc, pos = _parse_block(lines, pos + 1)
        colors.append(label)
        members[label] = inc
    return Mosaic(colors=tuple(colors), members=members)


def is_mosaic_text(text: str) -> bool:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    return bool(lines) and lines[0].startswith("color ")
