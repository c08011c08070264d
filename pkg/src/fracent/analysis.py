"""Series post-processing: decay fits, dip location and revival detection."""

from dataclasses import dataclass

import numpy as np

from fracent.errors import InsufficientData, NoDipFound, NonPositiveValues

POSITIVE_FLOOR = 1e-15

# default fit windows, sized for L = 1250 with 50-site blocks
DEFAULT_POWER_WINDOW = (0.0, 2.5)
DEFAULT_EXP_WINDOW = (60.0, np.inf)


@dataclass(frozen=True)
class LinearFit:
    model: str  # "power" or "exponential"
    slope: float
    intercept: float
    r_squared: float
    window: tuple
    n_points: int
    dropped: int


def _linfit(x, y):
    A = np.vstack([x, np.ones_like(x)]).T
    (slope, intercept), *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid**2)) / ss_tot if ss_tot > 0 else 1.0
    return float(slope), float(intercept), r2


def fit_decay(x, y, model, window=None, min_points=4):
    """Least-squares line through ``ln y`` vs ``x`` (exponential) or vs ``ln x`` (power).

    Only points with ``lo <= x <= hi`` are used; the fit never extrapolates
    outside its window.  Points with ``y <= 1e-15`` are dropped and counted.
    """
    if model in ("exp", "exponential"):
        model = "exponential"
    elif model != "power":
        raise ValueError(f"unknown decay model {model!r}")
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    lo, hi = window if window is not None else (-np.inf, np.inf)
    sel = (x >= lo) & (x <= hi)
    if model == "power":
        sel &= x > 0
    xs, ys = x[sel], y[sel]
    keep = ys > POSITIVE_FLOOR
    dropped = int(np.count_nonzero(~keep))
    if xs.size and dropped == xs.size:
        raise NonPositiveValues(f"all {dropped} values in window {lo}:{hi} are non-positive")
    xs, ys = xs[keep], ys[keep]
    if xs.size < min_points:
        raise InsufficientData(f"{xs.size} usable points in window {lo}:{hi}, need {min_points}")
    xf = np.log(xs) if model == "power" else xs
    slope, intercept, r2 = _linfit(xf, np.log(ys))
    return LinearFit(model, slope, intercept, r2, (float(lo), float(hi)), int(xs.size), dropped)


def fit_both(x, y, power_window, exp_window, min_points=4):
    return {
        "power": fit_decay(x, y, "power", power_window, min_points),
        "exponential": fit_decay(x, y, "exponential", exp_window, min_points),
    }


def moving_average(y, width):
    """Centered moving average over ``width`` samples (edges use the available samples)."""
    y = np.asarray(y, dtype=np.float64)
    width = max(1, int(width))
    if width == 1:
        return y.copy()
    kernel = np.ones(width)
    num = np.convolve(y, kernel, mode="same")
    den = np.convolve(np.ones_like(y), kernel, mode="same")
    return num / den


def running_max(y, width):
    """Centered running maximum over ``width`` samples."""
    y = np.asarray(y, dtype=np.float64)
    half = max(0, int(width) // 2)
    if half == 0:
        return y.copy()
    padded = np.pad(y, half, mode="edge")
    windows = np.lib.stride_tricks.sliding_window_view(padded, 2 * half + 1)
    return windows.max(axis=1)


@dataclass(frozen=True)
class Revival:
    found: bool
    t_peak: float = np.nan
    t_trough: float = np.nan
    rise: float = 0.0  # peak - trough
    ratio: float = 1.0  # peak / trough


def detect_revival(t, y, min_rise=None, min_ratio=None):
    """Find the first rise after the initial decay of a (pre-smoothed) series.

    The initial peak is the global maximum.  After it a running minimum is
    tracked; a revival is declared at the first sample exceeding the running
    minimum by ``min_rise * peak`` (additive) and/or by a factor
    ``min_ratio`` (multiplicative).  The reported time is the local maximum
    that the rise climbs to.
    """
    if min_rise is None and min_ratio is None:
        raise ValueError("need min_rise and/or min_ratio")
    t = np.asarray(t, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if y.size < 3:
        return Revival(False)
    p = int(np.argmax(y))
    peak = y[p]
    trough_val = peak
    trough_idx = p
    for j in range(p + 1, y.size):
        if y[j] < trough_val:
            trough_val, trough_idx = y[j], j
            continue
        ok = True
        if min_rise is not None:
            ok &= (y[j] - trough_val) >= min_rise * peak
        if min_ratio is not None:
            ok &= trough_val > 0 and y[j] / trough_val >= min_ratio
        if ok:
            k = j
            while k + 1 < y.size and y[k + 1] >= y[k]:
                k += 1
            top = y[k]
            return Revival(
                True,
                float(t[k]),
                float(t[trough_idx]),
                float(top - trough_val),
                float(top / trough_val) if trough_val > 0 else np.inf,
            )
    return Revival(False)


@dataclass(frozen=True)
class Dip:
    t: float
    value: float
    index: int


def _parabola_vertex(t3, y3):
    (t0, t1, t2), (y0, y1, y2) = t3, y3
    denom = (t0 - t1) * (t0 - t2) * (t1 - t2)
    if denom == 0:
        return t1, y1
    a = (t2 * (y1 - y0) + t1 * (y0 - y2) + t0 * (y2 - y1)) / denom
    b = (t2 * t2 * (y0 - y1) + t1 * t1 * (y2 - y0) + t0 * t0 * (y1 - y2)) / denom
    c = (t1 * t2 * (t1 - t2) * y0 + t2 * t0 * (t2 - t0) * y1 + t0 * t1 * (t0 - t1) * y2) / denom
    if a <= 0:
        return t1, y1
    tv = -b / (2 * a)
    if not t0 <= tv <= t2:
        return t1, y1
    return tv, a * tv * tv + b * tv + c


def find_dip(t, y):
    """Deepest point after the first local maximum, refined by a parabola.

    Raises :class:`NoDipFound` when there is no local maximum or the minimum
    sits on the last grid point (the series is still falling at the window
    edge, so no dip is resolved).
    """
    t = np.asarray(t, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if y.size < 3:
        raise NoDipFound("series too short")
    inner = np.flatnonzero((y[1:-1] >= y[:-2]) & (y[1:-1] > y[2:])) + 1
    if inner.size == 0:
        raise NoDipFound("series has no local maximum in the window")
    start = int(inner[0])
    i = start + int(np.argmin(y[start:]))
    if i == y.size - 1:
        raise NoDipFound("minimum lies on the window edge")
    tv, yv = _parabola_vertex(t[i - 1 : i + 2], y[i - 1 : i + 2])
    return Dip(float(tv), float(min(yv, y[i])), i)
