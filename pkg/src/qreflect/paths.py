"""Exact algebra of right-continuous piecewise-linear paths with jumps.

A path is stored as strictly increasing breakpoints ``t_0 < ... < t_{m-1}``
together with the left limit and right value at every breakpoint.  Between
breakpoints the path is the straight line from ``(t_i, right_i)`` to
``(t_{i+1}, left_{i+1})``; the domain is the closed interval
``[t_0, t_{m-1}]``.  Evaluation is right-continuous: at a breakpoint the
right value is returned.  At the first breakpoint there is no left limit and
``left_0 == right_0`` by construction.

Monotone paths (cumulative arrivals, idle times) and invertible paths
(continuous nondecreasing with positive total increase, cumulative service)
are ordinary :class:`PiecewisePath` objects; ``is_nondecreasing`` and
``is_continuous`` express the contracts where an operation needs them.

Everything here is pure: operations never mutate their inputs, so values can
be shared freely across threads.

Numerical conventions: breakpoints closer than ``TIME_TOL`` are collapsed to
a single instant, exactly collinear jump-free breakpoints are merged, and all
arithmetic is plain float64.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .errors import DegenerateInputError, DomainError

TIME_TOL = 1e-12
#: absolute tolerance when matching values (e.g. exact hits in compositions)
VALUE_TOL = 1e-12
#: slack allowed when a composed path overshoots the outer domain
CLAMP_TOL = 1e-9


def _as_array(x) -> np.ndarray:
    a = np.asarray(x, dtype=float)
    return np.atleast_1d(a)


def _cluster_times(times: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Indices of the first and last member of each cluster of nearly equal
    times (gap <= TIME_TOL).  ``times`` must be nondecreasing."""
    new = np.empty(times.shape, dtype=bool)
    new[0] = True
    np.greater(np.diff(times), TIME_TOL, out=new[1:])
    first = np.flatnonzero(new)
    last = np.append(first[1:] - 1, len(times) - 1)
    return first, last


def _merge_collinear(times: np.ndarray, left: np.ndarray, right: np.ndarray):
    """Drop interior breakpoints that carry no jump and lie exactly on the
    line through their neighbours.  Only exact collinearity is merged, so the
    path values are never perturbed."""
    while len(times) > 2:
        jump_free = left[1:-1] == right[1:-1]
        dt_prev = times[1:-1] - times[:-2]
        dt_next = times[2:] - times[1:-1]
        dv_prev = left[1:-1] - right[:-2]
        dv_next = left[2:] - right[1:-1]
        drop = jump_free & (dv_prev * dt_next == dv_next * dt_prev)
        cand = np.flatnonzero(drop)
        if cand.size == 0:
            break
        # never drop two adjacent points in one pass: collinearity of the
        # survivors is re-checked on the next iteration
        if cand.size > 1:
            run_break = np.empty(cand.shape, dtype=bool)
            run_break[0] = True
            np.not_equal(np.diff(cand), 1, out=run_break[1:])
            run_start = np.maximum.accumulate(
                np.where(run_break, np.arange(cand.size), 0)
            )
            keep_cand = ((np.arange(cand.size) - run_start) % 2) == 0
            cand = cand[keep_cand]
        mask = np.ones(len(times), dtype=bool)
        mask[cand + 1] = False
        times, left, right = times[mask], left[mask], right[mask]
    return times, left, right


class PiecewisePath:
    """Right-continuous piecewise-linear path with jumps on a finite domain."""

    __slots__ = ("times", "left", "right", "_slopes")

    def __init__(self, times, left, right, *, canonical: bool = True):
        times = _as_array(times)
        left = _as_array(left)
        right = _as_array(right)
        if not (len(times) == len(left) == len(right)):
            raise ValueError("times/left/right must have equal length")
        if len(times) < 2:
            raise ValueError("a path needs at least two breakpoints")
        if not np.all(np.isfinite(times)):
            raise ValueError("non-finite breakpoint time")
        if not (np.all(np.isfinite(left)) and np.all(np.isfinite(right))):
            raise ValueError("non-finite path value")
        if np.any(np.diff(times) < 0):
            raise ValueError("breakpoint times must be nondecreasing")
        if canonical:
            first, last = _cluster_times(times)
            if len(first) < len(times):
                times, left, right = times[first], left[first], right[last]
            if len(times) < 2:
                raise ValueError("degenerate domain after clustering")
            left = left.copy()
            left[0] = right[0]
            times, left, right = _merge_collinear(times, left, right)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)
        object.__setattr__(self, "_slopes", None)

    def __setattr__(self, name, value):  # pragma: no cover - guard
        raise AttributeError("PiecewisePath is immutable")

    # -- basic accessors ---------------------------------------------------

    @property
    def start(self) -> float:
        return float(self.times[0])

    @property
    def end(self) -> float:
        return float(self.times[-1])

    @property
    def slopes(self) -> np.ndarray:
        """Slope on each segment [t_i, t_{i+1})."""
        s = object.__getattribute__(self, "_slopes")
        if s is None:
            s = (self.left[1:] - self.right[:-1]) / np.diff(self.times)
            object.__setattr__(self, "_slopes", s)
        return s

    @property
    def jumps(self) -> np.ndarray:
        """Jump size at each breakpoint (zero at the first)."""
        return self.right - self.left

    def __repr__(self) -> str:
        return (
            f"PiecewisePath([{self.start:g}, {self.end:g}], "
            f"{len(self.times)} breakpoints)"
        )

    # -- evaluation --------------------------------------------------------

    def _segment_index(self, t: np.ndarray) -> np.ndarray:
        idx = np.searchsorted(self.times, t, side="right") - 1
        return np.clip(idx, 0, len(self.times) - 2)

    def _check_domain(self, tv: np.ndarray) -> np.ndarray:
        if np.any(tv < self.times[0] - TIME_TOL) or np.any(
            tv > self.times[-1] + TIME_TOL
        ):
            raise DomainError(
                f"evaluation outside domain [{self.start}, {self.end}]"
            )
        return np.clip(tv, self.times[0], self.times[-1])

    def eval(self, t):
        """Right-continuous evaluation; scalar in, scalar out."""
        scalar = np.isscalar(t) or np.ndim(t) == 0
        tv = self._check_domain(_as_array(t))
        idx = self._segment_index(tv)
        out = self.right[idx] + self.slopes[idx] * (tv - self.times[idx])
        at_end = tv == self.times[-1]
        if np.any(at_end):
            out = np.where(at_end, self.right[-1], out)
        return float(out[0]) if scalar else out

    def eval_left(self, t):
        """Left limit; at the domain start the right value is returned."""
        scalar = np.isscalar(t) or np.ndim(t) == 0
        tv = self._check_domain(_as_array(t))
        m = len(self.times)
        hit = np.searchsorted(self.times, tv, side="left")
        exact = (hit < m) & (self.times[np.minimum(hit, m - 1)] == tv)
        idx = np.clip(hit - 1, 0, m - 2)
        out = self.right[idx] + self.slopes[idx] * (tv - self.times[idx])
        if np.any(exact):
            out = np.where(exact, self.left[np.minimum(hit, m - 1)], out)
        return float(out[0]) if scalar else out

    # -- structural operations ----------------------------------------------

    def restrict(self, a: float, b: float) -> "PiecewisePath":
        """Restriction to [a, b] (within the current domain)."""
        if a < self.start - TIME_TOL or b > self.end + TIME_TOL:
            raise DomainError("restriction interval exceeds domain")
        if not (b - a > TIME_TOL):
            raise DomainError("restriction interval is degenerate")
        a = max(a, self.start)
        b = min(b, self.end)
        if a == self.start and b == self.end:
            return self
        inner = (self.times > a + TIME_TOL) & (self.times < b - TIME_TOL)
        ts = np.concatenate(([a], self.times[inner], [b]))
        ls = np.concatenate(([self.eval(a)], self.left[inner], [self.eval_left(b)]))
        rs = np.concatenate(([self.eval(a)], self.right[inner], [self.eval(b)]))
        return PiecewisePath(ts, ls, rs)

    def shift_value(self, c: float) -> "PiecewisePath":
        return PiecewisePath(
            self.times, self.left - c, self.right - c, canonical=False
        )

    def __add__(self, other):
        if isinstance(other, PiecewisePath):
            return linear_combination([(1.0, self), (1.0, other)])
        return NotImplemented

    def __sub__(self, other):
        if isinstance(other, PiecewisePath):
            return linear_combination([(1.0, self), (-1.0, other)])
        return NotImplemented

    def __neg__(self):
        return scale(self, -1.0)

    def __rmul__(self, c):
        if np.isscalar(c):
            return scale(self, float(c))
        return NotImplemented

    def max_abs(self) -> float:
        return float(max(np.abs(self.left).max(), np.abs(self.right).max()))

    def min_value(self) -> float:
        return float(min(self.left.min(), self.right.min()))

    def max_value(self) -> float:
        return float(max(self.left.max(), self.right.max()))


# -- constructors ------------------------------------------------------------


def identity(a: float, b: float) -> PiecewisePath:
    return PiecewisePath([a, b], [a, b], [a, b])


def constant(v: float, a: float, b: float) -> PiecewisePath:
    return PiecewisePath([a, b], [v, v], [v, v])


def zero(a: float, b: float) -> PiecewisePath:
    return constant(0.0, a, b)


def from_points(times, values) -> PiecewisePath:
    """Continuous piecewise-linear path through the given points."""
    return PiecewisePath(times, values, values)


def step_path(a, b, jump_times, jump_sizes, initial: float = 0.0) -> PiecewisePath:
    """Piecewise-constant cadlag path on [a, b].

    Jumps at or before ``a`` are folded into the starting value; jumps after
    ``b`` are dropped.  Jump times must be nondecreasing.
    """
    jt = np.asarray(jump_times, dtype=float).ravel()
    js = np.asarray(jump_sizes, dtype=float).ravel()
    if jt.size != js.size:
        raise ValueError("jump times and sizes must align")
    if jt.size and np.any(np.diff(jt) < 0):
        raise ValueError("jump times must be nondecreasing")
    before = jt <= a + TIME_TOL
    initial = float(initial + js[before].sum())
    keep = ~before & (jt <= b + TIME_TOL)
    jt, js = jt[keep], js[keep]
    if jt.size == 0:
        return constant(initial, a, b)
    levels = initial + np.cumsum(js)
    prev = np.concatenate(([initial], levels[:-1]))
    if jt[-1] >= b - TIME_TOL:
        ts = np.concatenate(([a], jt))
        ls = np.concatenate(([initial], prev))
        rs = np.concatenate(([initial], levels))
    else:
        ts = np.concatenate(([a], jt, [b]))
        ls = np.concatenate(([initial], prev, levels[-1:]))
        rs = np.concatenate(([initial], levels, levels[-1:]))
    return PiecewisePath(ts, ls, rs)


# -- grid alignment and linear operations ------------------------------------


def common_domain(paths: Sequence[PiecewisePath]) -> tuple[float, float]:
    a = max(p.start for p in paths)
    b = min(p.end for p in paths)
    if not (b - a > TIME_TOL):
        raise DomainError("paths have no common domain")
    return a, b


_common_domain = common_domain


def _aligned(paths: Sequence[PiecewisePath]):
    """Union breakpoint grid on the common domain, with the left/right values
    of every path on it.  Returns (times, [(left_i, right_i), ...])."""
    a, b = _common_domain(paths)
    rs = [p.restrict(a, b) for p in paths]
    t = np.concatenate([r.times for r in rs])
    t.sort(kind="stable")
    first, last = _cluster_times(t)
    # evaluate the right value at the last member of each cluster so jumps
    # within the tolerance window are not lost
    t_first, t_last = t[first], t[last]
    vals = [(r.eval_left(t_first), r.eval(t_last)) for r in rs]
    return t_first, vals


def linear_combination(terms: Sequence[tuple[float, PiecewisePath]]) -> PiecewisePath:
    t, vals = _aligned([p for _, p in terms])
    left = np.zeros_like(t)
    right = np.zeros_like(t)
    for (c, _), (lv, rv) in zip(terms, vals):
        left += c * lv
        right += c * rv
    return PiecewisePath(t, left, right)


def add(p: PiecewisePath, q: PiecewisePath) -> PiecewisePath:
    return linear_combination([(1.0, p), (1.0, q)])


def sub(p: PiecewisePath, q: PiecewisePath) -> PiecewisePath:
    return linear_combination([(1.0, p), (-1.0, q)])


def scale(p: PiecewisePath, c: float) -> PiecewisePath:
    return PiecewisePath(p.times, c * p.left, c * p.right, canonical=False)


def sum_paths(paths: Iterable[PiecewisePath], *, domain=None) -> PiecewisePath:
    paths = list(paths)
    if not paths:
        if domain is None:
            raise ValueError("empty sum needs an explicit domain")
        return zero(*domain)
    return linear_combination([(1.0, p) for p in paths])


def _insert_rows(t, left, right, t_new, l_new, r_new):
    """Merge extra breakpoint rows into a grid, keeping time order."""
    if len(t_new) == 0:
        return t, left, right
    ts = np.concatenate([t, t_new])
    ls = np.concatenate([left, l_new])
    rs = np.concatenate([right, r_new])
    order = np.argsort(ts, kind="stable")
    return ts[order], ls[order], rs[order]


def path_extremum(p: PiecewisePath, q: PiecewisePath, *, take_max: bool) -> PiecewisePath:
    """Pointwise max (or min) of two paths on their common domain."""
    t, ((pl, pr), (ql, qr)) = _aligned([p, q])
    dl = pl - ql
    dr = pr - qr
    # interior sign changes of the difference add breakpoints
    a0, a1 = dr[:-1], dl[1:]
    crossing = (a0 * a1) < 0
    idx = np.flatnonzero(crossing)
    tau = np.empty(0)
    lv = rv = np.empty(0)
    if idx.size:
        dt = t[idx + 1] - t[idx]
        tau = t[idx] + a0[idx] * dt / (a0[idx] - a1[idx])
        # value of both paths agrees at the crossing; interpolate p
        slope_p = (pl[idx + 1] - pr[idx]) / dt
        v = pr[idx] + slope_p * (tau - t[idx])
        lv = rv = v
    ts, ls_p, rs_p = _insert_rows(t, pl, pr, tau, lv, rv)
    _, ls_q, rs_q = _insert_rows(t, ql, qr, tau, lv, rv)
    fn = np.maximum if take_max else np.minimum
    return PiecewisePath(ts, fn(ls_p, ls_q), fn(rs_p, rs_q))


def path_max(p: PiecewisePath, q: PiecewisePath) -> PiecewisePath:
    return path_extremum(p, q, take_max=True)


def path_min(p: PiecewisePath, q: PiecewisePath) -> PiecewisePath:
    return path_extremum(p, q, take_max=False)


# -- predicates ---------------------------------------------------------------


def is_nondecreasing(p: PiecewisePath, tol: float = 0.0) -> bool:
    return bool(
        np.all(p.left[1:] - p.right[:-1] >= -tol) and np.all(p.jumps >= -tol)
    )


def is_continuous(p: PiecewisePath, tol: float = 0.0) -> bool:
    return bool(np.all(np.abs(p.jumps) <= tol))


def sup_distance(p: PiecewisePath, q: PiecewisePath) -> float:
    """sup |p - q| over the common domain (exact for piecewise-linear)."""
    t, ((pl, pr), (ql, qr)) = _aligned([p, q])
    return float(max(np.abs(pl - ql).max(), np.abs(pr - qr).max()))


def paths_equal(p: PiecewisePath, q: PiecewisePath, tol: float = TIME_TOL) -> bool:
    return sup_distance(p, q) <= tol


# -- running supremum ----------------------------------------------------------


def running_sup(p: PiecewisePath) -> PiecewisePath:
    """(sup p)(t) = sup of p over [domain_start, t], including left limits."""
    t, l, r = p.times, p.left, p.right
    m = len(t)
    inter = np.empty(2 * m)
    inter[0::2] = l
    inter[1::2] = r
    cum = np.maximum.accumulate(inter)
    big_l = cum[0::2]  # sup over [t0, t_i) closure, i.e. including l_i
    big_a = cum[1::2]  # sup over [t0, t_i] including r_i
    # crossing inside segment i where p rises through the previous sup
    a0 = big_a[:-1]
    rise = (r[:-1] < a0) & (l[1:] > a0)
    idx = np.flatnonzero(rise)
    tau = np.empty(0)
    v = np.empty(0)
    if idx.size:
        slope = (l[idx + 1] - r[idx]) / (t[idx + 1] - t[idx])
        tau = t[idx] + (a0[idx] - r[idx]) / slope
        v = a0[idx]
    ts, ls, rs = _insert_rows(t, big_l, big_a, tau, v, v)
    return PiecewisePath(ts, ls, rs)


def running_inf(p: PiecewisePath) -> PiecewisePath:
    return scale(running_sup(scale(p, -1.0)), -1.0)


# -- inverses and graph transposes ----------------------------------------------


def sup_graph(g: PiecewisePath, c: PiecewisePath) -> PiecewisePath:
    """The nondecreasing path h with h(x) = sup {g(tau) : c(tau) <= x}.

    ``c`` and ``g`` must be nondecreasing on a common domain.  The result is
    a cadlag path on the value range of ``c``; flats of ``c`` become jumps of
    ``h`` (supremum attained at the right edge of the flat) and jumps of
    ``c`` become flats of ``h``.
    """
    t, ((gl, gr), (cl, cr)) = _aligned([g, c])
    if np.any(cl[1:] - cr[:-1] < -CLAMP_TOL) or np.any(cr - cl < -CLAMP_TOL):
        raise DegenerateInputError("constraint path must be nondecreasing")
    if np.any(gl[1:] - gr[:-1] < -CLAMP_TOL) or np.any(gr - gl < -CLAMP_TOL):
        raise DegenerateInputError("objective path must be nondecreasing")
    m = len(t)
    xs = np.empty(3 * m)
    ys = np.empty(3 * m)
    xs[0::3] = cl
    xs[1::3] = cr
    xs[2::3] = cr
    ys[0::3] = gl
    ys[1::3] = gl
    ys[2::3] = gr
    xs = np.maximum.accumulate(xs)  # guard against float noise
    ys = np.maximum.accumulate(ys)
    if not xs[-1] - xs[0] > 0:
        raise DegenerateInputError("constraint path has zero total increase")
    return PiecewisePath(xs, ys, ys)


def rc_inverse(c: PiecewisePath) -> PiecewisePath:
    """Right-continuous inverse of a continuous nondecreasing path.

    Defined on the value range of ``c`` by (c^-1)(u) = sup {tau : c(tau) <= u};
    flats of ``c`` turn into jumps landing at the flat's right endpoint.
    """
    if not is_continuous(c):
        raise DegenerateInputError("rc_inverse needs a continuous path")
    if not is_nondecreasing(c, tol=0.0):
        raise DegenerateInputError("rc_inverse needs a nondecreasing path")
    if not (c.right[-1] - c.right[0] > 0):
        raise DegenerateInputError("rc_inverse needs positive total increase")
    return sup_graph(identity(c.start, c.end), c)


# -- composition -----------------------------------------------------------------


def _ragged_ranges(lo: np.ndarray, hi: np.ndarray):
    """Concatenated aranges lo[i]..hi[i]-1 plus the segment id of each entry."""
    counts = hi - lo
    total = int(counts.sum())
    if total == 0:
        return np.empty(0, dtype=int), np.empty(0, dtype=int)
    seg = np.repeat(np.arange(len(lo)), counts)
    starts = np.concatenate(([0], np.cumsum(counts)[:-1]))
    pos = np.arange(total) - np.repeat(starts, counts)
    return lo[seg] + pos, seg


def compose(
    outer: PiecewisePath,
    inner: PiecewisePath,
    *,
    clamp_tol: float = CLAMP_TOL,
    left_at_exact: bool = False,
) -> PiecewisePath:
    """Exact composition outer(inner(t)).

    Supported on the same family as the model needs: a continuous outer path
    composed with anything, or an arbitrary outer composed with a
    nondecreasing inner.  Breakpoints of the result are the breakpoints of
    ``inner`` together with the preimages of the breakpoints of ``outer``.

    ``left_at_exact`` switches the value convention where the inner path sits
    exactly on an outer breakpoint for a positive duration (or ends there):
    the outer *left* value is used instead of the right value.  This realizes
    first-passage (infimum-style) composition for sojourn times.
    """
    inner_monotone = is_nondecreasing(inner)
    if not inner_monotone and not is_continuous(outer):
        raise DomainError(
            "composition needs a continuous outer path or a nondecreasing inner path"
        )
    lo_d, hi_d = outer.start, outer.end
    vmin = min(inner.left.min(), inner.right.min())
    vmax = max(inner.left.max(), inner.right.max())
    if vmin < lo_d - clamp_tol or vmax > hi_d + clamp_tol:
        raise DomainError(
            f"inner range [{vmin}, {vmax}] exceeds outer domain [{lo_d}, {hi_d}]"
        )
    il = np.clip(inner.left, lo_d, hi_d)
    ir = np.clip(inner.right, lo_d, hi_d)
    t = inner.times
    m = len(t)
    xs = outer.times

    def exact_hit(v: np.ndarray) -> np.ndarray:
        k = np.searchsorted(xs, v)
        k = np.clip(k, 0, len(xs) - 1)
        hit_up = np.abs(xs[k] - v) <= VALUE_TOL
        k2 = np.clip(k - 1, 0, len(xs) - 1)
        hit_dn = np.abs(xs[k2] - v) <= VALUE_TOL
        kk = np.where(hit_up, k, k2)
        return (hit_up | hit_dn), kk

    # values at the inner breakpoints -------------------------------------
    right_vals = outer.eval(ir)
    slopes_in = inner.slopes
    if left_at_exact:
        hit, kk = exact_hit(ir)
        sitting = np.zeros(m, dtype=bool)
        sitting[:-1] = slopes_in == 0.0
        sitting[-1] = True
        use_left = hit & sitting
        if np.any(use_left):
            right_vals = np.where(use_left, outer.left[kk], right_vals)

    left_vals = np.empty(m)
    left_vals[0] = right_vals[0]
    prev_slope = slopes_in
    flat_prev = prev_slope == 0.0
    up_prev = prev_slope > 0.0
    lv = np.empty(m - 1)
    lv[up_prev] = outer.eval_left(il[1:][up_prev])
    down = ~flat_prev & ~up_prev
    if np.any(down):
        lv[down] = outer.eval(il[1:][down])
    # a flat carries the value established at its left end
    lv[flat_prev] = right_vals[:-1][flat_prev]
    left_vals[1:] = lv

    # preimages of outer breakpoints inside each inner segment -------------
    v_from = ir[:-1]
    v_to = il[1:]
    asc = v_to >= v_from
    sa = np.where(asc, v_from, v_to)
    sb = np.where(asc, v_to, v_from)
    lo = np.searchsorted(xs, sa, side="right")
    hi = np.searchsorted(xs, sb, side="left")
    hi = np.maximum(hi, lo)
    ks, seg = _ragged_ranges(lo, hi)
    if ks.size:
        dirn = np.where(asc[seg], 1.0, -1.0)
        dt_seg = t[seg + 1] - t[seg]
        dv_seg = v_to[seg] - v_from[seg]
        tau = t[seg] + (xs[ks] - v_from[seg]) * dt_seg / dv_seg
        cl = outer.left[ks]
        cr = outer.right[ks]
        c_left = np.where(dirn > 0, cl, cr)
        c_right = np.where(dirn > 0, cr, cl)
        # descending segments only occur with a continuous outer (cl == cr)
        ts, ls, rs = _insert_rows(t, left_vals, right_vals, tau, c_left, c_right)
    else:
        ts, ls, rs = t, left_vals, right_vals
    return PiecewisePath(ts, ls, rs)


def first_passage_compose(target: PiecewisePath, query: PiecewisePath) -> PiecewisePath:
    """z(t) = inf {tau : target(tau) >= query(t)} for nondecreasing inputs.

    Query values above the final value of ``target`` are unresolved within
    the domain and are capped at the domain end.
    """
    if not is_nondecreasing(query):
        raise DegenerateInputError("first_passage_compose needs a nondecreasing query")
    gamma = sup_graph(identity(target.start, target.end), target)
    cap = gamma.times[-1]
    over = max(query.left.max(), query.right.max()) > cap
    q = path_min(query, constant(cap, query.start, query.end)) if over else query
    z = compose(gamma, q, left_at_exact=True)
    if over:
        # once the query strictly exceeds what the target ever reaches the
        # first passage lies beyond the horizon: cap at the domain end
        excess = sub(query, constant(cap, query.start, query.end))
        above = running_sup(excess)
        lvl = np.where(
            (above.right > 0), target.end, target.start - 1.0
        )
        lvl_l = np.where((above.left > 0), target.end, target.start - 1.0)
        capped = PiecewisePath(above.times, lvl_l, lvl)
        z = path_max(z, capped)
    return z


# -- Stieltjes integration ---------------------------------------------------------


def stieltjes(w: PiecewisePath, y: PiecewisePath) -> float:
    """Integral of w against the measure induced by the nondecreasing path y
    over the common domain.  Jumps of y at t contribute w(t) * jump using the
    right value of w; the continuous part is integrated exactly."""
    t, ((wl, wr), (yl, yr)) = _aligned([w, y])
    dt = np.diff(t)
    slope_y = (yl[1:] - yr[:-1]) / dt
    cont = float(np.sum(slope_y * 0.5 * (wr[:-1] + wl[1:]) * dt))
    atoms = float(np.sum(wr * (yr - yl)))
    return cont + atoms


# -- shifts ------------------------------------------------------------------------


def shift_theta(p: PiecewisePath, c: float) -> PiecewisePath:
    """(Theta_c p)(t) = p(t + c); the domain moves by -c."""
    return PiecewisePath(p.times - c, p.left, p.right, canonical=False)


def shift_xi(p: PiecewisePath, c: float) -> PiecewisePath:
    """(Xi_c p) = Theta_c p - p(c), which vanishes at 0."""
    if c < p.start - TIME_TOL or c > p.end + TIME_TOL:
        raise DomainError("shift reference point outside domain")
    return shift_theta(p, c).shift_value(p.eval(c))


# -- weighted norm ------------------------------------------------------------------


def wnorm(p: PiecewisePath) -> float:
    """sup over the domain of |p(t)| / (1 + |t|).

    On each segment the ratio of affine functions is monotone, so the
    supremum is attained at a breakpoint (left or right value) or at t = 0.
    """
    cands = [np.abs(p.left) / (1.0 + np.abs(p.times)),
             np.abs(p.right) / (1.0 + np.abs(p.times))]
    best = max(float(c.max()) for c in cands)
    if p.start < 0.0 < p.end:
        best = max(best, abs(p.eval(0.0)), abs(p.eval_left(0.0)))
    return best
