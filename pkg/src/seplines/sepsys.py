"""Hitting-set formulation of separability: candidate lines through point
pairs, the hit relation, sign-vector separation checking, and conversion
of relaxed separating sets into strictly separating ones.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import _kernels
from .geom import CanonicalLine, Point, line_through, side, sign

PairId = Tuple[int, int]

# Above this many sign evaluations the float kernels (with exact
# escalation) take over from pure bigint evaluation.
_KERNEL_THRESHOLD = 200_000

GENERAL_POSITION_CHECK_CAP = 512


class TooFewPointsError(ValueError):
    pass


class GeneralPositionError(ValueError):
    """Raised when an operation requires no three collinear points."""


class PropernessError(ValueError):
    """Raised by properize when a line carries three or more points."""


class SeparationMode(Enum):
    STRICT = "strict"
    RELAXED = "relaxed"


class PointSet:
    """Ordered, duplicate-free list of exact rational points.

    Integer clearings (common denominator) are cached because every hot
    predicate runs on integers: with x = X/D, the sign of a*x + b*y + c
    equals the sign of a*X + b*Y + c*D.
    """

    def __init__(self, points: Sequence[Point]):
        pts = tuple(points)
        if len(set(pts)) != len(pts):
            raise ValueError("duplicate points in PointSet")
        self.points = pts
        self._int_coords: Optional[Tuple[List[int], List[int], int]] = None
        self._general_position: Optional[bool] = None
        self._float_coords: Optional[Tuple[np.ndarray, np.ndarray]] = None

    def __len__(self):
        return len(self.points)

    def __getitem__(self, i: int) -> Point:
        return self.points[i]

    def __iter__(self):
        return iter(self.points)

    def int_coords(self) -> Tuple[List[int], List[int], int]:
        """(X, Y, D) with points[i] = (X[i]/D, Y[i]/D)."""
        if self._int_coords is None:
            d = 1
            for p in self.points:
                d = math.lcm(d, p.x.denominator, p.y.denominator)
            xs = [int(p.x * d) for p in self.points]
            ys = [int(p.y * d) for p in self.points]
            self._int_coords = (xs, ys, d)
        return self._int_coords

    def float_coords(self) -> Tuple[np.ndarray, np.ndarray]:
        if self._float_coords is None:
            xs = np.array([float(p.x) for p in self.points])
            ys = np.array([float(p.y) for p in self.points])
            self._float_coords = (xs, ys)
        return self._float_coords

    @property
    def general_position(self) -> bool:
        """True iff no three points are collinear. Computed for up to
        512 points; larger sets are assumed in general position (with a
        warning), which holds with overwhelming probability for the random
        constructions this library targets."""
        if self._general_position is None:
            n = len(self.points)
            if n > GENERAL_POSITION_CHECK_CAP:
                warnings.warn(
                    f"general position assumed, not checked, for n={n} > "
                    f"{GENERAL_POSITION_CHECK_CAP}",
                    stacklevel=2,
                )
                self._general_position = True
            else:
                self._general_position = not self._has_collinear_triple()
        return self._general_position

    def _has_collinear_triple(self) -> bool:
        xs, ys, _ = self.int_coords()
        n = len(xs)
        for i in range(n):
            seen = set()
            for j in range(n):
                if j == i:
                    continue
                dx, dy = xs[j] - xs[i], ys[j] - ys[i]
                g = math.gcd(abs(dx), abs(dy))
                dx, dy = dx // g, dy // g
                if dx < 0 or (dx == 0 and dy < 0):
                    dx, dy = -dx, -dy
                if (dx, dy) in seen:
                    return True
                seen.add((dx, dy))
        return False

    def pairs(self) -> List[PairId]:
        n = len(self.points)
        return [(i, j) for i in range(n) for j in range(i + 1, n)]


@dataclass
class CandidateLines:
    """Deduplicated canonical lines through all point pairs, with the
    point pairs incident to each line. In general position there are
    C(n,2) lines, one incident pair each."""

    lines: List[CanonicalLine]
    incident_pairs: List[List[PairId]]
    _coeff_arrays: Optional[Tuple[np.ndarray, np.ndarray, np.ndarray]] = field(
        default=None, repr=False
    )

    def __len__(self):
        return len(self.lines)

    def coeff_arrays(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Float64 (a, b, c) arrays for the kernels."""
        if self._coeff_arrays is None:
            a = np.array([float(l.a) for l in self.lines])
            b = np.array([float(l.b) for l in self.lines])
            c = np.array([float(l.c) for l in self.lines])
            self._coeff_arrays = (a, b, c)
        return self._coeff_arrays


def candidate_lines(P: PointSet) -> CandidateLines:
    """All canonical lines through pairs of P, deduplicated, with
    incidence lists."""
    n = len(P)
    if n < 2:
        raise TooFewPointsError(f"need at least 2 points, got {n}")
    xs, ys, d = P.int_coords()
    by_line: Dict[Tuple[int, int, int], List[PairId]] = {}
    for i in range(n):
        xi, yi = xs[i], ys[i]
        for j in range(i + 1, n):
            # Line through grid points (xi, yi), (xj, yj); in unit
            # coordinates the coefficients pick up a factor D on a and b.
            a = ys[j] - yi
            b = xi - xs[j]
            c = -(a * xi + b * yi)
            a, b = a * d, b * d
            g = math.gcd(math.gcd(abs(a), abs(b)), abs(c))
            a, b, c = a // g, b // g, c // g
            if a < 0 or (a == 0 and b < 0):
                a, b, c = -a, -b, -c
            by_line.setdefault((a, b, c), []).append((i, j))
    lines = []
    incident = []
    for coeffs, prs in by_line.items():
        lines.append(CanonicalLine(*coeffs))
        incident.append(prs)
    return CandidateLines(lines=lines, incident_pairs=incident)


def hits(line: CanonicalLine, P: PointSet, pair: PairId, mode: SeparationMode) -> bool:
    """Does the line separate the pair under the given mode?

    Strict: strictly opposite sides. Relaxed: different side values, so a
    pair with exactly one point on the line counts as separated, but a
    pair with both points on the line does not.
    """
    i, j = pair
    sp, sq = side(line, P[i]), side(line, P[j])
    if mode is SeparationMode.STRICT:
        return sp * sq == -1
    return sp != sq


def _exact_sign_rows(P: PointSet, lines: Sequence[CanonicalLine]) -> List[Tuple[int, ...]]:
    xs, ys, d = P.int_coords()
    coeffs = [(l.a, l.b, l.c * d) for l in lines]
    rows = []
    for x, y in zip(xs, ys):
        rows.append(tuple(sign(a * x + b * y + cd) for a, b, cd in coeffs))
    return rows


def _exact_side_int(line: CanonicalLine, x: int, y: int, d: int) -> int:
    return sign(line.a * x + line.b * y + line.c * d)


def _patched_row_hashes(P: PointSet, lines: Sequence[CanonicalLine]):
    """(h1, h2, zero_points): per-point row hashes over the lines with
    uncertain entries escalated to exact arithmetic, plus the set of points
    lying exactly on at least one of the lines."""
    xfl, yfl = P.float_coords()
    a = np.array([float(l.a) for l in lines])
    b = np.array([float(l.b) for l in lines])
    c = np.array([float(l.c) for l in lines])
    h1, h2, unc = _kernels.row_hash(a, b, c, xfl, yfl)
    zero_pts = set()
    if len(unc):
        xs, ys, d = P.int_coords()
        m = len(lines)
        mask = (1 << 64) - 1
        h1 = h1.copy()
        h2 = h2.copy()
        for i, j in unc:
            s = _exact_side_int(lines[j], xs[i], ys[i], d)
            if s:
                p1 = _kernels.hash_power(_kernels.HASH_MULT_1, m - 1 - j)
                p2 = _kernels.hash_power(_kernels.HASH_MULT_2, m - 1 - j)
                h1[i] = np.uint64((int(h1[i]) + s * p1) & mask)
                h2[i] = np.uint64((int(h2[i]) + s * p2) & mask)
            else:
                zero_pts.add(int(i))
    return h1, h2, zero_pts


def _hashed_relaxed_pair(P: PointSet, lines: Sequence[CanonicalLine]) -> Optional[PairId]:
    """Kernel-accelerated search for a relaxed-unseparated pair: group
    points by hashed sign rows, patch uncertain entries exactly, then
    confirm candidate groups with exact arithmetic."""
    h1, h2, _ = _patched_row_hashes(P, lines)
    groups: Dict[Tuple[int, int], List[int]] = {}
    for i, key in enumerate(zip(h1.tolist(), h2.tolist())):
        groups.setdefault(key, []).append(i)
    xs, ys, d = P.int_coords()
    best: Optional[PairId] = None
    for members in groups.values():
        if len(members) < 2:
            continue
        # Hash collision between distinct rows is possible in principle;
        # confirm with exact rows before reporting.
        rows: Dict[Tuple[int, ...], int] = {}
        for i in members:
            row = tuple(
                _exact_side_int(l, xs[i], ys[i], d) for l in lines
            )
            if row in rows:
                cand = (rows[row], i)
                if best is None or cand < best:
                    best = cand
                break
            rows[row] = i
    return best


def _hashed_strict_pair(P: PointSet, lines: Sequence[CanonicalLine]) -> Optional[PairId]:
    """Kernel-accelerated search for a strict-unseparated pair.

    A strict-unseparated pair has identical exact sign rows, or at least
    one of the two points lies on one of the lines. Identical rows are
    found by hash grouping (with exact confirmation); the usually-empty
    set of on-line points is checked against everything else via the
    vectorized sign kernel with exact escalation.
    """
    n = len(P)
    h1, h2, zero_pts = _patched_row_hashes(P, lines)
    xs, ys, d = P.int_coords()
    best: Optional[PairId] = None
    groups: Dict[Tuple[int, int], List[int]] = {}
    for i, key in enumerate(zip(h1.tolist(), h2.tolist())):
        groups.setdefault(key, []).append(i)
    for members in groups.values():
        if len(members) < 2:
            continue
        rows: Dict[Tuple[int, ...], int] = {}
        for i in members:
            row = tuple(_exact_side_int(l, xs[i], ys[i], d) for l in lines)
            if row in rows:
                cand = (rows[row], i)
                if best is None or cand < best:
                    best = cand
                break
            rows[row] = i
    xfl, yfl = P.float_coords()
    af = np.array([float(l.a) for l in lines])
    bf = np.array([float(l.b) for l in lines])
    cf = np.array([float(l.c) for l in lines])
    for i in sorted(zero_pts):
        row_i = np.array(
            [_exact_side_int(l, xs[i], ys[i], d) for l in lines], dtype=np.int8
        )
        separated = np.zeros(n, dtype=bool)
        chunk = max(1, 2 ** 22 // max(n, 1))
        for lo in range(0, len(lines), chunk):
            hi = min(len(lines), lo + chunk)
            live = row_i[lo:hi] != 0
            if not live.any():
                continue
            signs, unc = _kernels.eval_signs(af[lo:hi], bf[lo:hi], cf[lo:hi], xfl, yfl)
            opp = (signs * row_i[None, lo:hi]) == -1
            separated |= opp.any(axis=1)
            # Uncertain entries on live lines: settle exactly.
            ui, uj = np.nonzero(unc & live[None, :])
            for pi, pj in zip(ui.tolist(), uj.tolist()):
                if separated[pi]:
                    continue
                s = _exact_side_int(lines[lo + pj], xs[pi], ys[pi], d)
                if s * int(row_i[lo + pj]) == -1:
                    separated[pi] = True
        separated[i] = True
        unsep = np.nonzero(~separated)[0]
        if len(unsep):
            j = int(unsep[0])
            cand = (min(i, j), max(i, j))
            if best is None or cand < best:
                best = cand
    return best


def find_unseparated_pair(
    P: PointSet, lines: Sequence[CanonicalLine], mode: SeparationMode
) -> Optional[PairId]:
    """First (lexicographically smallest) pair of points not separated by
    any line under the mode, or None if the lines separate P.

    Relaxed mode groups exact sign vectors (equal vector <=> unseparated);
    large instances go through the hashed kernel path with exact
    confirmation. Strict mode falls back to direct pair checking whenever
    zero signs make vector equality inconclusive.
    """
    lines = list(lines)
    n = len(P)
    if n < 2:
        return None
    if lines and n * len(lines) > _KERNEL_THRESHOLD:
        if mode is SeparationMode.RELAXED:
            return _hashed_relaxed_pair(P, lines)
        return _hashed_strict_pair(P, lines)
    rows = _exact_sign_rows(P, lines)
    seen: Dict[Tuple[int, ...], int] = {}
    first_equal: Optional[PairId] = None
    for i, row in enumerate(rows):
        if row in seen:
            cand = (seen[row], i)
            if first_equal is None or cand < first_equal:
                first_equal = cand
        else:
            seen[row] = i
    if mode is SeparationMode.RELAXED:
        return first_equal
    # Strict: identical rows are always unseparated, but rows differing
    # only where one entry is zero may be unseparated too.
    zero_pts = [i for i, row in enumerate(rows) if any(s == 0 for s in row)]
    if not zero_pts:
        return first_equal
    zero_set = set(zero_pts)
    for i in range(n):
        ri = rows[i]
        for j in range(i + 1, n):
            if i not in zero_set and j not in zero_set:
                if ri != rows[j]:
                    continue
                return (i, j)
            rj = rows[j]
            if not any(a * b == -1 for a, b in zip(ri, rj)):
                if first_equal is not None and first_equal < (i, j):
                    return first_equal
                return (i, j)
    return None


def _perp_bisector(p: Point, q: Point) -> CanonicalLine:
    a = 2 * (q.x - p.x)
    b = 2 * (q.y - p.y)
    c = (p.x * p.x + p.y * p.y) - (q.x * q.x + q.y * q.y)
    return CanonicalLine.from_coeffs(a, b, c)


def _rotate_off_points(
    line: CanonicalLine, keep: Tuple[Point, Point], P: PointSet
) -> CanonicalLine:
    """Perturb a line (by rotation along itself) so that it contains no
    point of P, while preserving the strict sides of all points currently
    off the line. ``keep`` are the two points the line strictly separates;
    their sides are preserved too."""
    vals = {i: line.eval_at(p) for i, p in enumerate(P)}
    on_idx = [i for i, v in vals.items() if v == 0]
    if not on_idx:
        return line
    # h(p) grows along the line direction from a pivot placed beyond all
    # on-line points, so h is nonzero at each of them.
    dx, dy = Fraction(-line.b), Fraction(line.a)
    pos = {i: dx * P[i].x + dy * P[i].y for i in on_idx}
    pivot_t = min(pos.values()) - 1
    # h(p) = dx*p.x + dy*p.y - pivot_t ; zero only on a line transversal
    # to `line` at the pivot.
    bounds = []
    for i, v in vals.items():
        if v == 0:
            continue
        h = abs(dx * P[i].x + dy * P[i].y - pivot_t)
        bounds.append(abs(v) / (2 * (h + 1)))
    t = min(bounds) if bounds else Fraction(1)
    return CanonicalLine.from_coeffs(
        line.a + t * dx, line.b + t * dy, line.c - t * pivot_t
    )


def properize(lines: Sequence[CanonicalLine], P: PointSet) -> List[CanonicalLine]:
    """Convert a relaxed separating set into a strictly separating one of
    size at most 3x.

    Each line carrying one or two points of P is replaced by two parallel
    copies at half the minimum point distance; a line carrying two points
    additionally spawns one line strictly splitting that pair (their
    perpendicular bisector, perturbed off any other points). Lines
    carrying no points pass through unchanged. Requires that no line
    carries three or more points.
    """
    out: List[CanonicalLine] = []
    for line in lines:
        vals = [line.eval_at(p) for p in P]
        on_pts = [P[i] for i, v in enumerate(vals) if v == 0]
        if len(on_pts) >= 3:
            raise PropernessError(
                f"line {line} contains {len(on_pts)} points; properize "
                "requires general position (at most 2 per line)"
            )
        if not on_pts:
            out.append(line)
            continue
        nonzero = [abs(v) for v in vals if v != 0]
        delta = min(nonzero) if nonzero else Fraction(1)
        half = delta / 2
        out.append(CanonicalLine.from_coeffs(line.a, line.b, line.c - half))
        out.append(CanonicalLine.from_coeffs(line.a, line.b, line.c + half))
        if len(on_pts) == 2:
            u, v = on_pts
            bis = _perp_bisector(u, v)
            out.append(_rotate_off_points(bis, (u, v), P))
    # Dedup while preserving order (parallel copies of distinct input
    # lines can coincide only by accident, but keep the contract tight).
    seen = set()
    uniq = []
    for l in out:
        if l not in seen:
            seen.add(l)
            uniq.append(l)
    return uniq
