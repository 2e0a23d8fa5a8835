"""Separability solvers.

* :func:`exact_separability` -- branch-and-bound optimum (n <= 14).
* :func:`greedy_hitting_set` -- lazy greedy baseline.
* :func:`reweight_approx` -- multiplicative-weights epsilon-net sampler.
* :func:`halving_separator` -- the ceil(n/2) splitting construction.
* :func:`grid_separator` -- grid lines plus per-cell fix-ups.

The search space for separating lines is generated from lines through
point pairs. A line through points u, v can be perturbed (translated or
rotated slightly) so that u and v land on prescribed sides while every
other point keeps its strict side; each such *variant* is realized as a
concrete exact line only when needed. Strict-mode solvers use the four
(+-1, +-1) variants per pair; relaxed-mode exact search additionally uses
the base line and the four one-point variants, which together realize
every sign pattern a line can have on the point set.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import _kernels
from .geom import CanonicalLine, Point, line_through, sign
from .sepsys import (
    CandidateLines,
    GeneralPositionError,
    PairId,
    PointSet,
    SeparationMode,
    TooFewPointsError,
    candidate_lines,
    find_unseparated_pair,
)

EXACT_SIZE_CAP = 14

_STRICT_VARIANTS = ((-1, -1), (-1, 1), (1, -1), (1, 1))
_RELAXED_VARIANTS = (
    (0, 0),
    (0, -1),
    (0, 1),
    (-1, 0),
    (1, 0),
) + _STRICT_VARIANTS


class SolverError(RuntimeError):
    pass


class VerificationError(SolverError):
    """A solver's own output failed re-verification (internal bug guard)."""


class SizeCapError(ValueError):
    pass


# ---------------------------------------------------------------------------
# configuration / results


@dataclass
class SolverConfig:
    """Knobs for :func:`reweight_approx`.

    ``c_net`` scales the epsilon-net sample size ceil(c_net * k * ln(k+2))
    for guess k; ``max_rounds_constant`` scales the per-guess round budget
    ceil(max_rounds_constant * k * ln(n+2)); ``initial_guess`` defaults to
    ceil(sqrt(n)); ``prune`` drops redundant lines from a successful
    sample before returning.
    """

    c_net: float = 4.0
    max_rounds_constant: float = 16.0
    initial_guess: Optional[int] = None
    rng_seed: int = 0
    prune: bool = True

    def __post_init__(self):
        if self.c_net <= 0 or self.max_rounds_constant <= 0:
            raise ValueError("constants must be positive")
        if self.initial_guess is not None and self.initial_guess < 1:
            raise ValueError("initial_guess must be positive")


@dataclass
class SolveResult:
    lines: List[CanonicalLine]
    mode: SeparationMode
    rounds_used: int
    guess_history: List[Tuple[int, int, bool]]  # (k, rounds, succeeded)
    weight_doublings: int
    fell_back: bool = False


class WeightState:
    """Per-candidate-line weights 2^hit_count, kept as scaled float64.

    All weights carry an implicit factor 2^rescale_exponent; probabilities
    are weight ratios so rescaling never changes them. The incremental
    total is re-validated against a full resummation every 64 doublings.
    """

    RESCALE_LIMIT = 2.0 ** 512
    RESUM_EVERY = 64
    RESUM_RTOL = 1e-9

    def __init__(self, m: int):
        self.hit_count = np.zeros(m, dtype=np.int64)
        self.weights = np.ones(m, dtype=np.float64)
        self.total_weight = float(m)
        self.rescale_exponent = 0
        self.doubling_events = 0

    def masked_weight(self, mask: np.ndarray) -> float:
        return float(self.weights[mask].sum())

    def double(self, mask: np.ndarray) -> None:
        delta = float(self.weights[mask].sum())
        self.weights[mask] *= 2.0
        self.hit_count[mask] += 1
        self.total_weight += delta
        self.doubling_events += 1
        if self.doubling_events % self.RESUM_EVERY == 0:
            resum = float(self.weights.sum())
            if abs(self.total_weight - resum) > self.RESUM_RTOL * resum:
                raise SolverError("weight accumulator drifted beyond 1e-9")
            self.total_weight = resum
        if self.total_weight > self.RESCALE_LIMIT:
            self.weights *= 2.0 ** -512
            self.total_weight *= 2.0 ** -512
            self.rescale_exponent += 512

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        p = self.weights / self.weights.sum()
        return rng.choice(len(self.weights), size=size, replace=True, p=p)


# ---------------------------------------------------------------------------
# variant realization


def _perp_bisector(p: Point, q: Point) -> CanonicalLine:
    a = 2 * (q.x - p.x)
    b = 2 * (q.y - p.y)
    c = (p.x * p.x + p.y * p.y) - (q.x * q.x + q.y * q.y)
    return CanonicalLine.from_coeffs(a, b, c)


def _rotate(
    base: CanonicalLine,
    vals: Sequence[Fraction],
    pivot: Point,
    direction: Tuple[Fraction, Fraction],
    t_sign: int,
) -> CanonicalLine:
    """Perturb base to base + t*h where h(p) = direction . (p - pivot),
    with |t| small enough to preserve every nonzero sign in vals and
    sign(t) = t_sign."""
    dx, dy = direction
    bounds = [Fraction(1)]
    for v, h in vals:
        if v != 0:
            bounds.append(abs(v) / (2 * (abs(h) + 1)))
    t = t_sign * min(bounds)
    return CanonicalLine.from_coeffs(
        base.a + t * dx, base.b + t * dy, base.c - t * (dx * pivot.x + dy * pivot.y)
    )


def realize_variant(
    P: PointSet, u: int, v: int, su: int, sv: int
) -> CanonicalLine:
    """Concrete line realizing the (su, sv) variant of the line through
    P[u], P[v]: points u and v get sides su and sv (0 = on the line) and
    every point strictly off the base line keeps its side."""
    pu, pv = P[u], P[v]
    base = line_through(pu, pv)
    if su == 0 and sv == 0:
        return base
    vals = [base.eval_at(p) for p in P]
    if su == sv:  # translate
        nonzero = [abs(x) for x in vals if x != 0]
        t = su * (min(nonzero) if nonzero else Fraction(2)) / 2
        return CanonicalLine.from_coeffs(base.a, base.b, base.c + t)
    if su == 0 or sv == 0:  # rotate about the point staying on the line
        pivot, mover, s_target = (pu, pv, sv) if su == 0 else (pv, pu, su)
        dx, dy = mover.x - pivot.x, mover.y - pivot.y
    else:  # opposite sides: rotate about the midpoint
        pivot = Point((pu.x + pv.x) / 2, (pu.y + pv.y) / 2)
        dx, dy = pu.x - pivot.x, pu.y - pivot.y
        s_target = su  # h(pu) = |pu - pivot|^2 > 0, so sign(t) = su
    pairs = [
        (vals[i], dx * (P[i].x - pivot.x) + dy * (P[i].y - pivot.y))
        for i in range(len(P))
    ]
    # h at the moving point is dir . (mover - pivot) = |dir|^2 > 0 in the
    # one-point case, so sign(t) must equal the target sign there too.
    return _rotate(base, pairs, pivot, (dx, dy), s_target)


# ---------------------------------------------------------------------------
# verification


def verify(P: PointSet, L: Sequence[CanonicalLine], mode: SeparationMode) -> bool:
    """True iff L separates every pair of P under the mode."""
    return find_unseparated_pair(P, list(L), mode) is None


def _assert_separates(P: PointSet, L: Sequence[CanonicalLine], mode: SeparationMode, who: str):
    if not verify(P, L, mode):
        raise VerificationError(f"{who} produced a non-separating set (internal bug)")


# ---------------------------------------------------------------------------
# exact solver (branch and bound over realized variant lines)


def _exact_pool(P: PointSet, mode: SeparationMode):
    """Realized variant lines with exact pair-coverage bitmasks, deduplicated
    and dominance-filtered. Returns (entries, pair_count) where each entry
    is (coeff_key, mask, line)."""
    n = len(P)
    pairs = P.pairs()
    pair_bit = {pr: k for k, pr in enumerate(pairs)}
    variants = _STRICT_VARIANTS if mode is SeparationMode.STRICT else _RELAXED_VARIANTS
    raw = []
    for (i, j) in pairs:
        for su, sv in variants:
            line = realize_variant(P, i, j, su, sv)
            row = [sign(line.eval_at(p)) for p in P]
            mask = 0
            for (a, b), k in pair_bit.items():
                hit = (
                    row[a] * row[b] == -1
                    if mode is SeparationMode.STRICT
                    else row[a] != row[b]
                )
                if hit:
                    mask |= 1 << k
            if mask:
                raw.append((line.coeffs(), mask, line))
    raw.sort(key=lambda e: e[0])
    by_mask: Dict[int, Tuple] = {}
    for e in raw:
        by_mask.setdefault(e[1], e)
    entries = list(by_mask.values())
    # Dominance: drop entries whose coverage is a strict subset of another's.
    keep = []
    for e in entries:
        if not any(
            e[1] != o[1] and e[1] | o[1] == o[1] for o in entries
        ):
            keep.append(e)
    keep.sort(key=lambda e: e[0])
    return keep, len(pairs)


def _capacity(t: int, mode: SeparationMode) -> int:
    """Maximum number of point classes t lines can carve out of one face:
    cells only in strict mode (realized lines avoid all points), cells +
    edges + vertices in relaxed mode."""
    if mode is SeparationMode.STRICT:
        return 1 + t * (t + 1) // 2
    return 1 + 2 * t * t


def _max_class_size(n: int, pairs: List[PairId], covered: int) -> int:
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for k, (i, j) in enumerate(pairs):
        if not covered >> k & 1:
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[ri] = rj
    sizes: Dict[int, int] = {}
    for i in range(n):
        r = find(i)
        sizes[r] = sizes.get(r, 0) + 1
    return max(sizes.values())


def exact_separability(
    P: PointSet, mode: SeparationMode = SeparationMode.STRICT
) -> Tuple[int, List[CanonicalLine]]:
    """Minimum number of lines separating P under the mode, with a verified
    witness. Branch-and-bound with iterative deepening; capped at
    |P| <= 14."""
    n = len(P)
    if n < 2:
        raise TooFewPointsError(f"need at least 2 points, got {n}")
    if n > EXACT_SIZE_CAP:
        raise SizeCapError(f"exact solver capped at {EXACT_SIZE_CAP} points, got {n}")
    entries, n_pairs = _exact_pool(P, mode)
    pairs = P.pairs()
    full = (1 << n_pairs) - 1
    masks = [e[1] for e in entries]
    # Per-pair covering entries and entry-set bitmasks.
    cover: List[List[int]] = [[] for _ in range(n_pairs)]
    cover_bits = [0] * n_pairs
    for ei, m in enumerate(masks):
        mm = m
        while mm:
            k = (mm & -mm).bit_length() - 1
            cover[k].append(ei)
            cover_bits[k] |= 1 << ei
            mm &= mm - 1
    if any(not c for c in cover):
        raise GeneralPositionError(
            "some point pair cannot be separated by any candidate line "
            "(degenerate input)"
        )
    # Upper bound: greedy over the pool.
    ub_witness: List[int] = []
    covered = 0
    while covered != full:
        best = max(
            range(len(masks)), key=lambda ei: (bin(masks[ei] & ~covered).count("1"), -ei)
        )
        if masks[best] & ~covered == 0:
            raise SolverError("greedy upper bound stalled (internal bug)")
        ub_witness.append(best)
        covered |= masks[best]
    ub = len(ub_witness)

    pair_order = sorted(range(n_pairs), key=lambda k: len(cover[k]))

    def disjoint_lb(covered: int) -> int:
        used = 0
        lb = 0
        for k in pair_order:
            if not covered >> k & 1 and cover_bits[k] & used == 0:
                lb += 1
                used |= cover_bits[k]
        return lb

    chosen: List[int] = []
    memo: Dict[int, int] = {}  # covered mask -> largest budget proven infeasible

    def dfs(covered: int, budget: int) -> bool:
        if covered == full:
            return True
        if budget == 0:
            return False
        if memo.get(covered, -1) >= budget:
            return False
        if disjoint_lb(covered) > budget:
            memo[covered] = budget
            return False
        if _max_class_size(n, pairs, covered) > _capacity(budget, mode):
            memo[covered] = budget
            return False
        # Branch on the uncovered pair with the fewest covering entries.
        target = min(
            (k for k in range(n_pairs) if not covered >> k & 1),
            key=lambda k: len(cover[k]),
        )
        options = sorted(
            cover[target], key=lambda ei: -bin(masks[ei] & ~covered).count("1")
        )
        for ei in options:
            chosen.append(ei)
            if dfs(covered | masks[ei], budget - 1):
                return True
            chosen.pop()
        memo[covered] = budget
        return False

    lb = 1
    while _capacity(lb, mode) < n:
        lb += 1
    lb = max(lb, disjoint_lb(0))
    for t in range(lb, ub):
        chosen.clear()
        if dfs(0, t):
            witness = [entries[ei][2] for ei in chosen]
            _assert_separates(P, witness, mode, "exact_separability")
            return t, witness
    witness = [entries[ei][2] for ei in ub_witness]
    _assert_separates(P, witness, mode, "exact_separability")
    return ub, witness


# ---------------------------------------------------------------------------
# greedy (lazy evaluation over point classes)


def _exact_line_signs(P: PointSet, line: CanonicalLine) -> np.ndarray:
    """Exact int8 signs of one line over all points, via the float kernel
    with escalation of uncertain entries."""
    xf, yf = P.float_coords()
    a = np.array([float(line.a)])
    b = np.array([float(line.b)])
    c = np.array([float(line.c)])
    s, unc = _kernels.eval_signs(a, b, c, xf, yf)
    s = s[:, 0].copy()
    idx = np.nonzero(unc[:, 0])[0]
    if len(idx):
        xs, ys, d = P.int_coords()
        cd = line.c * d
        for i in idx:
            s[i] = sign(line.a * xs[i] + line.b * ys[i] + cd)
    return s


def _class_tallies(class_id: np.ndarray, signs: np.ndarray, n_classes: int) -> np.ndarray:
    """(n_classes, 3) counts of signs -1/0/+1 per class."""
    flat = class_id * 3 + (signs.astype(np.int64) + 1)
    return np.bincount(flat, minlength=3 * n_classes).reshape(n_classes, 3)


def _count_hits(tal: np.ndarray, mode: SeparationMode) -> int:
    b, o, a = tal[:, 0], tal[:, 1], tal[:, 2]
    if mode is SeparationMode.STRICT:
        return int((b * a).sum())
    return int((b * a + b * o + a * o).sum())


def greedy_hitting_set(P: PointSet, mode: SeparationMode) -> List[CanonicalLine]:
    """Greedy baseline: repeatedly add the line separating the most
    currently-unseparated pairs (ties by canonical line order, then
    variant). Relaxed mode selects among the candidate lines themselves;
    strict mode selects among their four perturbed variants (candidate
    lines pass through two points and never strictly separate them)."""
    n = len(P)
    if n < 2:
        raise TooFewPointsError(f"need at least 2 points, got {n}")
    if n == 2:
        line = realize_variant(P, 0, 1, -1, 1)
        _assert_separates(P, [line], mode, "greedy_hitting_set")
        return [line]
    cand = candidate_lines(P)
    strict = mode is SeparationMode.STRICT
    if strict:
        # One entry per (pair, variant); the base line of entry e is the
        # line through that pair.
        pair_of_line: List[PairId] = []
        base_of_entry: List[int] = []
        variants: List[Tuple[int, int]] = []
        for li, prs in enumerate(cand.incident_pairs):
            for pr in prs:
                for sv in _STRICT_VARIANTS:
                    pair_of_line.append(pr)
                    base_of_entry.append(li)
                    variants.append(sv)
        n_entries = len(variants)
    else:
        base_of_entry = list(range(len(cand.lines)))
        n_entries = len(cand.lines)

    # Deterministic tie order: canonical coefficients of the base line,
    # then the variant.
    line_rank_order = sorted(
        range(len(cand.lines)), key=lambda li: cand.lines[li].coeffs()
    )
    line_rank = {li: r for r, li in enumerate(line_rank_order)}
    if strict:
        entry_order = sorted(
            range(n_entries),
            key=lambda e: (line_rank[base_of_entry[e]], pair_of_line[e], variants[e]),
        )
    else:
        entry_order = sorted(range(n_entries), key=lambda e: line_rank[base_of_entry[e]])
    rank_of_entry = [0] * n_entries
    for r, e in enumerate(entry_order):
        rank_of_entry[e] = r

    # Seed priorities: upper bounds on initial hit counts from kernel side
    # counts (uncertain points counted as on-line, resolved optimistically).
    A, B, C = cand.coeff_arrays()
    xf, yf = P.float_coords()
    below, on, above = _kernels.line_side_counts(A, B, C, xf, yf)
    heap = []
    for e in range(n_entries):
        li = base_of_entry[e]
        b, o, a = int(below[li]), int(on[li]), int(above[li])
        if strict:
            seed = (b + o) * (a + o)
        else:
            seed = b * a + o * (b + a) + o * (o - 1) // 2
        heap.append((-seed, rank_of_entry[e], e))
    heapq.heapify(heap)

    class_id = np.zeros(n, dtype=np.int64)
    n_classes = 1
    unsep = n * (n - 1) // 2
    sign_cache: Dict[int, np.ndarray] = {}
    computed_at = [-1] * n_entries
    round_no = 0
    out: List[CanonicalLine] = []

    def entry_signs(e: int) -> np.ndarray:
        li = base_of_entry[e]
        s = sign_cache.get(li)
        if s is None:
            s = _exact_line_signs(P, cand.lines[li])
            sign_cache[li] = s
        if not strict:
            return s
        (i, j), (su, sv) = pair_of_line[e], variants[e]
        s = s.copy()
        s[i], s[j] = su, sv
        return s

    def exact_count(e: int) -> int:
        tal = _class_tallies(class_id, entry_signs(e), n_classes)
        return _count_hits(tal, mode)

    while unsep > 0:
        negc, rank, e = heapq.heappop(heap)
        if computed_at[e] != round_no:
            c = exact_count(e)
            computed_at[e] = round_no
            heapq.heappush(heap, (-c, rank, e))
            continue
        if negc == 0:
            raise GeneralPositionError(
                "no candidate line separates some remaining pair "
                "(degenerate input)"
            )
        s = entry_signs(e)
        if strict:
            (i, j), (su, sv) = pair_of_line[e], variants[e]
            out.append(realize_variant(P, i, j, su, sv))
        else:
            out.append(cand.lines[base_of_entry[e]])
        # Refine classes by the new line's signs.
        combo = class_id * 3 + (s.astype(np.int64) + 1)
        _, class_id = np.unique(combo, return_inverse=True)
        n_classes = int(class_id.max()) + 1
        sizes = np.bincount(class_id, minlength=n_classes)
        unsep = int((sizes * (sizes - 1) // 2).sum())
        round_no += 1
    _assert_separates(P, out, mode, "greedy_hitting_set")
    return out


# ---------------------------------------------------------------------------
# reweighting approximation


def _pair_hit_mask(P: PointSet, cand: CandidateLines, pair: PairId) -> np.ndarray:
    """Boolean mask over candidate lines that relaxed-hit the pair, exact."""
    i, j = pair
    A, B, C = cand.coeff_arrays()
    xf, yf = P.float_coords()
    x2 = np.array([xf[i], xf[j]])
    y2 = np.array([yf[i], yf[j]])
    s, unc = _kernels.eval_signs(A, B, C, x2, y2)
    bad = np.nonzero(unc.any(axis=0))[0]
    if len(bad):
        xs, ys, d = P.int_coords()
        for li in bad:
            line = cand.lines[li]
            cd = line.c * d
            s[0, li] = sign(line.a * xs[i] + line.b * ys[i] + cd)
            s[1, li] = sign(line.a * xs[j] + line.b * ys[j] + cd)
    return s[0] != s[1]


def _prune_redundant(
    P: PointSet, lines: List[CanonicalLine], mode: SeparationMode
) -> List[CanonicalLine]:
    """Drop lines whose removal keeps the set separating (first-to-last)."""
    kept = list(lines)
    i = 0
    while i < len(kept):
        trial = kept[:i] + kept[i + 1 :]
        if trial and verify(P, trial, mode):
            kept = trial
        else:
            i += 1
    return kept


def reweight_approx(P: PointSet, cfg: Optional[SolverConfig] = None) -> SolveResult:
    """Multiplicative-weights epsilon-net solver (Relaxed mode).

    For a doubling guess k of the separability: sample
    ceil(c_net * k * ln(k+2)) candidate lines by weight; on failure find an
    unseparated pair and, if the lines hitting it carry at most an
    eps = 1/(4k) fraction of the total weight, double their weights.
    Guesses exhaust after ceil(max_rounds_constant * k * ln(n+2)) rounds.
    If k exceeds n the solver falls back to the greedy baseline (flagged).
    """
    if cfg is None:
        cfg = SolverConfig()
    n = len(P)
    if n < 2:
        raise TooFewPointsError(f"need at least 2 points, got {n}")
    cand = candidate_lines(P)
    m = len(cand)
    rng = np.random.default_rng(cfg.rng_seed)
    k = cfg.initial_guess if cfg.initial_guess is not None else math.isqrt(n - 1) + 1
    total_rounds = 0
    doublings = 0
    history: List[Tuple[int, int, bool]] = []
    pair_masks: Dict[PairId, np.ndarray] = {}
    while k <= n:
        ws = WeightState(m)
        eps = 1.0 / (4 * k)
        sample_size = math.ceil(cfg.c_net * k * math.log(k + 2))
        round_cap = math.ceil(cfg.max_rounds_constant * k * math.log(n + 2))
        for r in range(1, round_cap + 1):
            total_rounds += 1
            idx = np.unique(ws.sample(rng, sample_size))
            R = [cand.lines[i] for i in idx.tolist()]
            pair = find_unseparated_pair(P, R, SeparationMode.RELAXED)
            if pair is None:
                if cfg.prune:
                    R = _prune_redundant(P, R, SeparationMode.RELAXED)
                history.append((k, r, True))
                _assert_separates(P, R, SeparationMode.RELAXED, "reweight_approx")
                return SolveResult(
                    lines=R,
                    mode=SeparationMode.RELAXED,
                    rounds_used=total_rounds,
                    guess_history=history,
                    weight_doublings=doublings,
                )
            mask = pair_masks.get(pair)
            if mask is None:
                mask = _pair_hit_mask(P, cand, pair)
                pair_masks[pair] = mask
            if ws.masked_weight(mask) <= eps * ws.total_weight:
                ws.double(mask)
                doublings += 1
        history.append((k, round_cap, False))
        k *= 2
    lines = greedy_hitting_set(P, SeparationMode.RELAXED)
    _assert_separates(P, lines, SeparationMode.RELAXED, "reweight_approx")
    return SolveResult(
        lines=lines,
        mode=SeparationMode.RELAXED,
        rounds_used=total_rounds,
        guess_history=history,
        weight_doublings=doublings,
        fell_back=True,
    )


# ---------------------------------------------------------------------------
# halving construction


def _lex_split_line(P: PointSet, order: List[int], cut: int) -> CanonicalLine:
    """Line with the first `cut` points of the lexicographic x-order on its
    negative side and the rest on its positive side, containing no point.
    Vertical when the boundary x-coordinates differ; tilted by a small
    epsilon otherwise."""
    a, b = order[cut - 1], order[cut]
    pa, pb = P[a], P[b]
    if pa.x != pb.x:
        mid = (pa.x + pb.x) / 2
        return CanonicalLine.from_coeffs(1, 0, -mid)
    xs = sorted({p.x for p in P})
    gaps = [xs[i + 1] - xs[i] for i in range(len(xs) - 1)]
    if not gaps:  # all x equal: two points (n >= 3 would be collinear)
        mid = (pa.y + pb.y) / 2
        return CanonicalLine.from_coeffs(0, 1, -mid)
    ys = [p.y for p in P]
    eps = min(gaps) / (2 * (max(ys) - min(ys) + 1))
    va = pa.x + eps * pa.y
    vb = pb.x + eps * pb.y
    return CanonicalLine.from_coeffs(1, eps, -(va + vb) / 2)


def _split_two_pairs(
    p1: Point, p2: Point, q1: Point, q2: Point
) -> CanonicalLine:
    """One line strictly crossing both segments p1p2 and q1q2 (a line
    through an interior point of each; exists since no four of the points
    are collinear)."""
    m1 = Point((p1.x + p2.x) / 2, (p1.y + p2.y) / 2)
    for denom in range(2, 12):
        t = Fraction(1, denom)
        m2 = Point(q1.x + t * (q2.x - q1.x), q1.y + t * (q2.y - q1.y))
        if m1 == m2:
            continue
        line = line_through(m1, m2)
        if (
            sign(line.eval_at(p1)) * sign(line.eval_at(p2)) == -1
            and sign(line.eval_at(q1)) * sign(line.eval_at(q2)) == -1
        ):
            return line
    raise GeneralPositionError("could not split two pairs (degenerate input)")


def _shift_toward(base: CanonicalLine, target: Fraction) -> CanonicalLine:
    """Parallel copy of base halfway toward a point with value `target`."""
    return CanonicalLine.from_coeffs(base.a, base.b, base.c - target / 2)


def halving_separator(P: PointSet) -> List[CanonicalLine]:
    """Exactly ceil(n/2) lines strictly separating P (general position).

    Vertical split into ceil(n/2)/floor(n/2); while the right part has at
    least 3 points, one line cuts two points off each part (found by
    enumerating two-point lines and their sidedness variants) and a second
    line splits the two removed pairs; terminal sizes (3,2), (2,2), (2,1),
    (1,1), (1,0) are handled directly.
    """
    n = len(P)
    if n < 2:
        raise TooFewPointsError(f"need at least 2 points, got {n}")
    if not P.general_position:
        raise GeneralPositionError("halving_separator requires no 3 collinear points")
    order = sorted(range(n), key=lambda i: (P[i].x, P[i].y))
    cut = (n + 1) // 2
    left = set(order[:cut])
    lines = [_lex_split_line(P, order, cut)] if n > 1 else []
    active_L = sorted(order[:cut])
    active_R = sorted(order[cut:])
    xs, ys, d = P.int_coords()

    def cut_two_and_two() -> Tuple[List[int], List[int], CanonicalLine]:
        active = active_L + active_R
        for ii in range(len(active)):
            for jj in range(ii + 1, len(active)):
                u, v = active[ii], active[jj]
                a = ys[v] - ys[u]
                b = xs[u] - xs[v]
                c = -(a * xs[u] + b * ys[u])
                if a < 0 or (a == 0 and b < 0):
                    # Match the canonical orientation realize_variant uses.
                    a, b, c = -a, -b, -c
                lpos = lneg = rpos = rneg = 0
                for w in active:
                    s = sign(a * xs[w] + b * ys[w] + c * 1)
                    if w in left:
                        lpos += s > 0
                        lneg += s < 0
                    else:
                        rpos += s > 0
                        rneg += s < 0
                for su, sv in _STRICT_VARIANTS:
                    lp = lpos + (u in left and su > 0) + (v in left and sv > 0)
                    ln = lneg + (u in left and su < 0) + (v in left and sv < 0)
                    rp = rpos + (u not in left and su > 0) + (v not in left and sv > 0)
                    rn = rneg + (u not in left and su < 0) + (v not in left and sv < 0)
                    if 2 not in (lp, ln) or 2 not in (rp, rn):
                        continue
                    sub = PointSet([P[w] for w in active])
                    pos = {w: k for k, w in enumerate(active)}
                    line = realize_variant(sub, pos[u], pos[v], su, sv)
                    # Canonicalization may flip orientation relative to the
                    # quick count above; derive the cut sets from the
                    # realized sides directly.
                    sides = {w: sign(line.eval_at(P[w])) for w in active}
                    for lside in (1, -1):
                        cutL = [w for w in active_L if sides[w] == lside]
                        if len(cutL) != 2:
                            continue
                        for rside in (1, -1):
                            cutR = [w for w in active_R if sides[w] == rside]
                            if len(cutR) == 2:
                                return cutL, cutR, line
        raise GeneralPositionError("no 2+2 cutting line found (degenerate input)")

    while len(active_R) >= 3:
        cutL, cutR, line = cut_two_and_two()
        lines.append(line)
        lines.append(
            _split_two_pairs(P[cutL[0]], P[cutL[1]], P[cutR[0]], P[cutR[1]])
        )
        active_L = [w for w in active_L if w not in cutL]
        active_R = [w for w in active_R if w not in cutR]

    nl, nr = len(active_L), len(active_R)
    if (nl, nr) == (3, 2):
        a, b, c = active_L
        base = line_through(P[a], P[b])
        lines.append(_shift_toward(base, base.eval_at(P[c])))
        lines.append(_split_two_pairs(P[a], P[b], P[active_R[0]], P[active_R[1]]))
    elif (nl, nr) == (2, 2):
        lines.append(
            _split_two_pairs(
                P[active_L[0]], P[active_L[1]], P[active_R[0]], P[active_R[1]]
            )
        )
    elif (nl, nr) == (2, 1) or (nl, nr) == (2, 0):
        lines.append(_perp_bisector(P[active_L[0]], P[active_L[1]]))

    expected = (n + 1) // 2
    if len(lines) != expected:
        raise SolverError(
            f"halving produced {len(lines)} lines, expected {expected} (internal bug)"
        )
    _assert_separates(P, lines, SeparationMode.STRICT, "halving_separator")
    return lines


# ---------------------------------------------------------------------------
# grid separator


def grid_separator(P: PointSet, N: int) -> List[CanonicalLine]:
    """The 2(N-1) grid lines x=i/N, y=i/N plus per-cell separators: the
    perpendicular bisector for cells with 2 points, recursive halving for
    more. Points exactly on a grid line are assigned to the lower cell
    (flagged via a warning); any strictness lost that way is repaired by
    explicit bisector fix-ups."""
    import warnings as _warnings

    n = len(P)
    if N < 1:
        raise ValueError("N must be positive")
    if any(not (0 <= p.x <= 1 and 0 <= p.y <= 1) for p in P):
        raise ValueError("grid_separator requires P within the unit square")
    lines: List[CanonicalLine] = []
    for i in range(1, N):
        lines.append(CanonicalLine.from_coeffs(N, 0, -i))
    for i in range(1, N):
        lines.append(CanonicalLine.from_coeffs(0, N, -i))
    xs, ys, d = P.int_coords()
    cells: Dict[Tuple[int, int], List[int]] = {}
    flagged = 0

    def cell_coord(num: int) -> Tuple[int, bool]:
        c, rem = divmod(num * N, d)
        if rem == 0 and 0 < c < N:
            return c - 1, True  # exactly on grid line: lower cell
        if c == N:  # coordinate exactly 1
            return N - 1, False
        return c, False

    for i in range(n):
        cx, fx = cell_coord(xs[i])
        cy, fy = cell_coord(ys[i])
        flagged += fx or fy
        cells.setdefault((cx, cy), []).append(i)
    if flagged:
        _warnings.warn(
            f"{flagged} point(s) exactly on grid lines assigned to the lower cell",
            stacklevel=2,
        )
    for key in sorted(cells):
        idxs = cells[key]
        if len(idxs) == 2:
            lines.append(_perp_bisector(P[idxs[0]], P[idxs[1]]))
        elif len(idxs) > 2:
            lines.extend(halving_separator(PointSet([P[i] for i in idxs])))
    # On-gridline points can straddle a cell boundary without a strict
    # separator; patch any such pair directly.
    guard = 0
    while True:
        pair = find_unseparated_pair(P, lines, SeparationMode.STRICT)
        if pair is None:
            break
        lines.append(_perp_bisector(P[pair[0]], P[pair[1]]))
        guard += 1
        if guard > n:
            raise SolverError("grid_separator fix-up did not converge (internal bug)")
    return lines
