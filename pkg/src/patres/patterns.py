"""Dynamically generated point patterns.

A pattern is produced by walking a circle (or torus) hull with a fixed
rotation step per lattice label and converting every hull step into a
spatial displacement through a generator function.  Six generators are
implemented:

* ``EXAMPLE_I``      -- 1D chain, sites at ``n + r*(sin(angle_n) - sin(angle_0))``.
* ``EXAMPLE_II``     -- quasi-1D pair of incommensurate chains in the plane,
  driven by a figure-eight hull of circumferences 1 and ``alpha``; the
  vertical profile is a smoothed two-level step of height ``delta``.
* ``EXAMPLE_III``    -- 2D version of ``EXAMPLE_I`` (independent axes).
* ``EXAMPLE_IV``     -- quasi-2D pair of incommensurate square lattices in 3D,
  driven by a torus hull of side ``1 + alpha`` per axis.
* ``CUT_PROJECT``    -- two-letter Sturmian chain: spacing ``spacing_b`` when
  the circle rotation wraps, ``spacing_a`` otherwise.
* ``IDEAL_BILAYER``  -- suggestively, ``EXAMPLE_II`` with the smoothing turned
  off (``g = 0``), i.e. the exact two-chain limit.

Hull coordinates: ``EXAMPLE_I``/``EXAMPLE_III`` use the angle parametrization
(circumference ``2*pi``, step ``2*pi*alpha``); ``EXAMPLE_II``/``EXAMPLE_IV``
and the bilayer use the flat parametrization of circumference ``1 + alpha``
(large segment of length 1, small segment of length ``alpha``, step ``alpha``);
``CUT_PROJECT`` lives on the unit circle.  When ``alpha`` is given as a
`fractions.Fraction`, hull coordinates are computed with exact residue
arithmetic so orbits are bit-periodic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from functools import cached_property
from numbers import Real
from typing import Iterable, Sequence

import numpy as np

TWO_PI = 2.0 * math.pi

#: generate() refuses to emit a pattern whose generators violate the
#: commutation/inverse relations beyond this residual.
CONSISTENCY_TOL = 1e-9

#: label-offset range scanned when estimating the minimum point separation
NEIGHBOR_RANGE_1D = 8
NEIGHBOR_RANGE_2D = 3


class PatternError(ValueError):
    """Invalid pattern specification or request."""


class ConsistencyError(PatternError):
    """Generator functions failed their commutation/inverse relations."""


class WindowError(PatternError):
    """Requested labels fall outside the generated window."""


class Kind(Enum):
    EXAMPLE_I = "example1"
    EXAMPLE_II = "example2"
    EXAMPLE_III = "example3"
    EXAMPLE_IV = "example4"
    CUT_PROJECT = "cut_project"
    IDEAL_BILAYER = "ideal_bilayer"


_LABEL_DIM = {
    Kind.EXAMPLE_I: 1,
    Kind.EXAMPLE_II: 1,
    Kind.EXAMPLE_III: 2,
    Kind.EXAMPLE_IV: 2,
    Kind.CUT_PROJECT: 1,
    Kind.IDEAL_BILAYER: 1,
}

_SPACE_DIM = {
    Kind.EXAMPLE_I: 1,
    Kind.EXAMPLE_II: 2,
    Kind.EXAMPLE_III: 2,
    Kind.EXAMPLE_IV: 3,
    Kind.CUT_PROJECT: 1,
    Kind.IDEAL_BILAYER: 2,
}

_SINE_KINDS = (Kind.EXAMPLE_I, Kind.EXAMPLE_III)
_BILAYER_KINDS = (Kind.EXAMPLE_II, Kind.IDEAL_BILAYER)


def _as_alpha(value):
    if isinstance(value, Fraction):
        if not 0 <= value < 1:
            raise PatternError(f"alpha must lie in [0, 1), got {value}")
        return value
    value = float(value)
    if not 0.0 <= value < 1.0:
        raise PatternError(f"alpha must lie in [0, 1), got {value}")
    return value


@dataclass(frozen=True)
class PatternSpec:
    """Which generator to use together with its parameters.

    ``alpha`` holds one rotation frequency per label axis; pass fractions
    (e.g. ``Fraction(21, 34)``) for exactly periodic approximants.  ``omega``
    is the hull seed, one coordinate per axis, reduced modulo the hull
    circumference.
    """

    kind: Kind
    alpha: tuple = (0.0,)
    r: float = 0.0
    g: float = 0.0
    delta: float = 0.2
    delta_prime: float = 0.2
    spacing_a: float = 1.0
    spacing_b: float = 0.618
    omega: tuple = ()

    def __post_init__(self):
        kind = Kind(self.kind)
        object.__setattr__(self, "kind", kind)
        alpha = self.alpha
        if isinstance(alpha, (Real, Fraction)):
            alpha = (alpha,)
        alpha = tuple(_as_alpha(a) for a in alpha)
        if len(alpha) != _LABEL_DIM[kind]:
            raise PatternError(
                f"{kind.value} needs {_LABEL_DIM[kind]} alpha value(s), got {len(alpha)}"
            )
        object.__setattr__(self, "alpha", alpha)
        if kind in _SINE_KINDS:
            if not 0.0 <= self.r < 0.5:
                raise PatternError(f"r must lie in [0, 1/2), got {self.r}")
        if kind is Kind.IDEAL_BILAYER:
            object.__setattr__(self, "g", 0.0)
        if self.g < 0.0:
            raise PatternError(f"smoothing g must be >= 0, got {self.g}")
        if kind is Kind.CUT_PROJECT and (self.spacing_a <= 0.0 or self.spacing_b <= 0.0):
            raise PatternError("cut-and-project spacings must be positive")
        omega = self.omega
        if isinstance(omega, Real):
            omega = (omega,)
        omega = tuple(float(w) for w in omega)
        if not omega:
            omega = (0.0,) * _LABEL_DIM[kind]
        if len(omega) != _LABEL_DIM[kind]:
            raise PatternError(
                f"{kind.value} needs {_LABEL_DIM[kind]} omega value(s), got {len(omega)}"
            )
        periods = self.hull_periods
        omega = tuple(float(np.mod(w, c)) for w, c in zip(omega, periods))
        object.__setattr__(self, "omega", omega)

    @property
    def dim_label(self):
        return _LABEL_DIM[self.kind]

    @property
    def dim_space(self):
        return _SPACE_DIM[self.kind]

    @property
    def hull_periods(self):
        """Circumference of the flat hull, one value per label axis."""
        if self.kind in _SINE_KINDS:
            return (TWO_PI,) * self.dim_label
        if self.kind is Kind.CUT_PROJECT:
            return (1.0,)
        return tuple(1.0 + float(a) for a in self.alpha)

    @property
    def hull_steps(self):
        """Hull displacement produced by one positive step per label axis."""
        if self.kind in _SINE_KINDS:
            return tuple(TWO_PI * float(a) for a in self.alpha)
        return tuple(float(a) for a in self.alpha)


def label_period(spec: PatternSpec, axis: int = 0) -> int:
    """Number of label steps after which the hull orbit closes exactly.

    Requires the corresponding ``alpha`` to be a :class:`fractions.Fraction`.
    """
    a = spec.alpha[axis]
    if not isinstance(a, Fraction):
        raise PatternError(
            f"label period is defined for rational alpha only, got {a!r}"
        )
    if spec.kind in _SINE_KINDS or spec.kind is Kind.CUT_PROJECT:
        return a.denominator if a else 1
    # circumference 1 + p/q, step p/q: the orbit closes after p + q steps
    return a.numerator + a.denominator if a else 1


def tau(spec: PatternSpec, shift, omega=None):
    """Hull point reached from ``omega`` after ``shift`` label steps."""
    if omega is None:
        omega = spec.omega
    if isinstance(shift, Real):
        shift = (int(shift),)
    out = []
    for w, n, step, period in zip(omega, shift, spec.hull_steps, spec.hull_periods):
        out.append(float(np.mod(w + n * step, period)))
    return tuple(out)


# ---------------------------------------------------------------------------
# generator geometry


def _curve_height(x, alpha, g, delta):
    """Vertical profile of the figure-eight hull at flat coordinate ``x``.

    The small segment (0, alpha] sits at -delta/2, the large one at +delta/2;
    g > 0 smooths the two crossings, with the second crossing offset by
    g**1.1 so the embedded loop does not self-intersect.
    """
    if g == 0.0:
        return -0.5 * delta if 0.0 < x <= alpha else 0.5 * delta
    gp = g**1.1
    return 0.5 * delta * (
        math.tanh((x + 1.0) / g)
        - math.tanh((x - gp) / g)
        + math.tanh((x - alpha) / g)
    )


def _surface_profile(t, alpha, g):
    """Two-level profile along one torus axis: +1 on the large segment
    (0, 1], -1 on the small segment (1, 1 + alpha]."""
    if g == 0.0:
        return 1.0 if 0.0 < t <= 1.0 else -1.0
    gp = g**1.1
    return (
        math.tanh(t / g)
        - math.tanh((t - 1.0 - gp) / g)
        + math.tanh((t - 1.0 - alpha) / g)
    )


def _surface_height(u, v, spec: PatternSpec):
    a1, a2 = (float(a) for a in spec.alpha)
    amp_u = 0.25 * (2.0 * spec.delta + spec.delta_prime)
    amp_v = 0.25 * spec.delta_prime
    return amp_u * _surface_profile(u, a1, spec.g) - amp_v * _surface_profile(v, a2, spec.g)


def _bilayer_dx(y, alpha, period):
    """Horizontal advance of the two-chain walk given the landing point ``y``."""
    d_plus = (alpha - y) % period
    d_minus = (y - alpha) % period
    return min(alpha, d_plus, d_minus)


def _torus_dx(y, alpha, period):
    """Horizontal advance of the two-lattice walk; the crossing sits at the
    wrap point of the flat torus axis."""
    return min(alpha, y, period - y)


def _sturmian_bit(x, alpha):
    """1 when the rotation from hull point ``x`` wraps the unit circle."""
    return 1 if x + alpha >= 1.0 else 0


def gamma(spec: PatternSpec, e: int, omega=None) -> np.ndarray:
    """Spatial displacement generated by one signed label step ``e``.

    ``e`` is ``+(axis+1)`` or ``-(axis+1)``; ``omega`` is a hull point
    (defaults to the spec seed).  The inverse generators are derived from the
    positive ones through ``gamma(-e, w) = -gamma(e, tau_{-e} w)``.
    """
    if omega is None:
        omega = spec.omega
    if isinstance(omega, Real):
        omega = (omega,)
    d = spec.dim_label
    axis = abs(int(e)) - 1
    if not (isinstance(e, (int, np.integer)) and e != 0 and axis < d):
        raise PatternError(f"unsupported generator {e!r} for kind {spec.kind.value}")
    omega = tuple(float(np.mod(w, c)) for w, c in zip(omega, spec.hull_periods))
    if e < 0:
        back = tuple(-1 if i == axis else 0 for i in range(d))
        return -gamma(spec, axis + 1, tau(spec, back, omega))

    shift = tuple(1 if i == axis else 0 for i in range(d))
    landed = tau(spec, shift, omega)
    out = np.zeros(spec.dim_space)
    kind = spec.kind
    alpha = float(spec.alpha[axis])
    if kind in _SINE_KINDS:
        out[axis] = 1.0 + spec.r * (math.sin(landed[axis]) - math.sin(omega[axis]))
    elif kind in _BILAYER_KINDS:
        period = spec.hull_periods[0]
        out[0] = _bilayer_dx(landed[0], alpha, period)
        out[1] = _curve_height(landed[0], alpha, spec.g, spec.delta) - _curve_height(
            omega[0], alpha, spec.g, spec.delta
        )
    elif kind is Kind.EXAMPLE_IV:
        period = spec.hull_periods[axis]
        out[axis] = _torus_dx(landed[axis], alpha, period)
        out[2] = _surface_height(landed[0], landed[1], spec) - _surface_height(
            omega[0], omega[1], spec
        )
    elif kind is Kind.CUT_PROJECT:
        bit = _sturmian_bit(omega[0], alpha)
        out[0] = spec.spacing_b if bit else spec.spacing_a
    else:  # pragma: no cover - enum is exhaustive
        raise PatternError(f"unsupported kind {kind!r}")
    return out


@dataclass(frozen=True)
class ConsistencyReport:
    max_residual: float
    samples: int
    tol: float

    @property
    def passed(self):
        return self.max_residual <= self.tol


def check_consistency(spec: PatternSpec, samples: int = 16, seed: int = 0,
                      tol: float = 1e-12) -> ConsistencyReport:
    """Verify the generator commutation and inverse relations numerically.

    Draws ``samples`` pseudorandom hull points and checks, componentwise,
    ``G_{e'} + G_e(tau_{e'} w) == G_e + G_{e'}(tau_e w)`` for every ordered
    generator pair and ``G_{-e} == -G_e(tau_{-e} w)`` for every generator.
    """
    if samples < 1:
        raise PatternError("samples must be >= 1")
    rng = np.random.default_rng(seed)
    d = spec.dim_label
    gens = [s * (a + 1) for a in range(d) for s in (+1, -1)]
    worst = 0.0
    for _ in range(samples):
        w = tuple(rng.random() * c for c in spec.hull_periods)
        for a in range(d):
            # inverse relation in its defining orientation
            back = tuple(-1 if i == a else 0 for i in range(d))
            lhs = gamma(spec, -(a + 1), w)
            rhs = -gamma(spec, a + 1, tau(spec, back, w))
            worst = max(worst, float(np.max(np.abs(lhs - rhs))))
        for e in gens:
            for ep in gens:
                if abs(e) == abs(ep):
                    # same-axis pairs reduce to the inverse relation above
                    continue
                step_e = _unit_shift(d, e)
                step_ep = _unit_shift(d, ep)
                lhs = gamma(spec, ep, w) + gamma(spec, e, tau(spec, step_ep, w))
                rhs = gamma(spec, e, w) + gamma(spec, ep, tau(spec, step_e, w))
                worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return ConsistencyReport(max_residual=worst, samples=samples, tol=tol)


def _unit_shift(d, e):
    axis, sign = abs(e) - 1, (1 if e > 0 else -1)
    return tuple(sign if i == axis else 0 for i in range(d))


# ---------------------------------------------------------------------------
# pattern materialization


def _normalize_window(window, d):
    if d == 1 and len(window) == 2 and isinstance(window[0], (int, np.integer)):
        window = (window,)
    window = tuple((int(lo), int(hi)) for lo, hi in window)
    if len(window) != d:
        raise WindowError(f"window needs {d} axis range(s), got {len(window)}")
    for lo, hi in window:
        if lo > hi:
            raise WindowError(f"empty window range ({lo}, {hi})")
        if not lo <= 0 <= hi:
            raise WindowError("window must contain label 0")
    return window


def _hull_axis_coords(spec: PatternSpec, axis: int, ns: np.ndarray) -> np.ndarray:
    """Hull coordinates along one axis for all labels in ``ns``.

    Rational frequencies use exact residue indices so the orbit is
    bit-periodic; floats fall back to direct rotation arithmetic.
    """
    a = spec.alpha[axis]
    period = spec.hull_periods[axis]
    w0 = spec.omega[axis]
    if isinstance(a, Fraction):
        t = label_period(spec, axis)
        k = np.mod(ns.astype(np.int64) * a.numerator, t)
        x = w0 + k * (period / t)
        return np.where(x >= period, x - period, x)
    step = spec.hull_steps[axis]
    return np.mod(w0 + ns * step, period)


def _cumulative(steps: np.ndarray, idx0: int) -> np.ndarray:
    """Positions from per-step increments, anchored to exactly 0 at idx0."""
    n = len(steps) + 1
    pos = np.empty(n)
    pos[idx0] = 0.0
    if idx0 < n - 1:
        pos[idx0 + 1:] = np.cumsum(steps[idx0:])
    if idx0 > 0:
        pos[:idx0] = -np.cumsum(steps[:idx0][::-1])[::-1]
    return pos


def _axis_profiles(spec: PatternSpec, axis: int, lo: int, hi: int):
    """Per-axis ingredients: longitudinal positions and hull coordinates."""
    ns = np.arange(lo, hi + 1)
    idx0 = -lo
    hull = _hull_axis_coords(spec, axis, ns)
    kind = spec.kind
    alpha = float(spec.alpha[axis])
    if kind in _SINE_KINDS:
        long = ns + spec.r * (np.sin(hull) - math.sin(spec.omega[axis]))
        long[idx0] = 0.0
    elif kind in _BILAYER_KINDS:
        period = spec.hull_periods[0]
        land = hull[1:]
        d_plus = np.mod(alpha - land, period)
        d_minus = np.mod(land - alpha, period)
        steps = np.minimum(alpha, np.minimum(d_plus, d_minus))
        long = _cumulative(steps, idx0)
    elif kind is Kind.EXAMPLE_IV:
        period = spec.hull_periods[axis]
        land = hull[1:]
        steps = np.minimum(alpha, np.minimum(land, period - land))
        long = _cumulative(steps, idx0)
    elif kind is Kind.CUT_PROJECT:
        bits = (hull[:-1] + alpha >= 1.0)
        steps = np.where(bits, spec.spacing_b, spec.spacing_a)
        long = _cumulative(steps, idx0)
    else:  # pragma: no cover
        raise PatternError(f"unsupported kind {kind!r}")
    return long, hull


def _materialize(spec: PatternSpec, window) -> np.ndarray:
    kind = spec.kind
    if spec.dim_label == 1:
        (lo, hi), = window
        long, hull = _axis_profiles(spec, 0, lo, hi)
        if kind in _BILAYER_KINDS:
            heights = np.array(
                [_curve_height(x, float(spec.alpha[0]), spec.g, spec.delta) for x in hull]
            )
            y = heights - heights[-lo]
            coords = np.stack([long, y], axis=-1)
        else:
            coords = long[:, None]
        return coords
    (lo1, hi1), (lo2, hi2) = window
    long1, hull1 = _axis_profiles(spec, 0, lo1, hi1)
    long2, hull2 = _axis_profiles(spec, 1, lo2, hi2)
    n1, n2 = len(long1), len(long2)
    coords = np.empty((n1, n2, spec.dim_space))
    coords[..., 0] = long1[:, None]
    coords[..., 1] = long2[None, :]
    if kind is Kind.EXAMPLE_IV:
        g, d, dp = spec.g, spec.delta, spec.delta_prime
        a1, a2 = (float(a) for a in spec.alpha)
        su = np.array([_surface_profile(u, a1, g) for u in hull1])
        sv = np.array([_surface_profile(v, a2, g) for v in hull2])
        amp_u = 0.25 * (2.0 * d + dp)
        amp_v = 0.25 * dp
        zx = amp_u * (su - su[-lo1])
        zy = amp_v * (sv - sv[-lo2])
        coords[..., 2] = zx[:, None] - zy[None, :]
    return coords


@dataclass(frozen=True)
class PointPattern:
    """Lattice-labeled points ``n -> p_n`` over a finite index window.

    The coordinates of the originally generated window are kept in a shared
    table; re-labeling (``shift_relabel``) only moves the anchor into that
    table, so a shift followed by its inverse restores the pattern bit for
    bit.  ``p_0`` is exactly the origin.
    """

    spec: PatternSpec
    window: tuple
    _table: np.ndarray = field(repr=False)
    _table_window: tuple = field(repr=False)
    _anchor: tuple = field(repr=False)

    @property
    def dim_label(self):
        return self.spec.dim_label

    @property
    def dim_space(self):
        return self.spec.dim_space

    @cached_property
    def coords(self) -> np.ndarray:
        """Point coordinates indexed by ``label - window_lo`` per axis."""
        anchor_idx = tuple(a - lo for a, (lo, _) in zip(self._anchor, self._table_window))
        out = self._table - self._table[anchor_idx]
        out.flags.writeable = False
        return out

    def point(self, n) -> np.ndarray:
        if isinstance(n, (int, np.integer)):
            n = (int(n),)
        idx = []
        for nj, (lo, hi) in zip(n, self.window):
            if not lo <= nj <= hi:
                raise WindowError(f"label {tuple(n)} outside window {self.window}")
            idx.append(nj - lo)
        return self.coords[tuple(idx)]

    def labels(self):
        """Iterate all label tuples of the window in row-major order."""
        ranges = [range(lo, hi + 1) for lo, hi in self.window]
        if self.dim_label == 1:
            return [(n,) for n in ranges[0]]
        return [(n1, n2) for n1 in ranges[0] for n2 in ranges[1]]


def generate(spec: PatternSpec, window) -> PointPattern:
    """Generate the pattern on the given label window (must contain 0).

    Refuses to emit a pattern whose generators fail the consistency
    relations beyond :data:`CONSISTENCY_TOL`.
    """
    window = _normalize_window(window, spec.dim_label)
    report = check_consistency(spec, samples=8)
    if report.max_residual > CONSISTENCY_TOL:
        raise ConsistencyError(
            f"generator consistency residual {report.max_residual:.3e} exceeds "
            f"{CONSISTENCY_TOL:.1e}; refusing to generate"
        )
    table = _materialize(spec, window)
    table.flags.writeable = False
    anchor = (0,) * spec.dim_label
    return PointPattern(spec=spec, window=window, _table=table,
                        _table_window=window, _anchor=anchor)


def shift_relabel(pattern: PointPattern, k) -> PointPattern:
    """Re-center the pattern on the point at label ``k``.

    The new pattern satisfies ``p'_n = p_{n+k} - p_k`` with ``p'_0 = 0`` and
    its seed is advanced to ``tau_k(omega)``.
    """
    if isinstance(k, (int, np.integer)):
        k = (int(k),)
    k = tuple(int(v) for v in k)
    if len(k) != pattern.dim_label:
        raise WindowError(f"shift needs {pattern.dim_label} components")
    new_anchor = tuple(a + v for a, v in zip(pattern._anchor, k))
    for aj, (lo, hi) in zip(new_anchor, pattern._table_window):
        if not lo <= aj <= hi:
            raise WindowError(f"shift {k} leaves the generated window")
    new_window = tuple(
        (lo - a, hi - a) for a, (lo, hi) in zip(new_anchor, pattern._table_window)
    )
    new_spec = replace(pattern.spec, omega=tau(pattern.spec, k))
    return PointPattern(spec=new_spec, window=new_window, _table=pattern._table,
                        _table_window=pattern._table_window, _anchor=new_anchor)


# ---------------------------------------------------------------------------
# structural checks


@dataclass(frozen=True)
class DeloneCertificate:
    """Observed uniformity bounds: minimum pairwise separation and maximum
    covering gap (cell diameter) over the window interior."""

    r_min: float
    r_max: float
    window: tuple

    @property
    def ok(self):
        return self.r_min > 1e-12 and math.isfinite(self.r_max)


def delone_check(pattern: PointPattern) -> DeloneCertificate:
    coords = pattern.coords
    d = pattern.dim_label
    if d == 1:
        pts = coords
        n = len(pts)
        if n < 2:
            raise PatternError("window too small for a Delone check")
        r_min = math.inf
        for m in range(1, min(NEIGHBOR_RANGE_1D, n - 1) + 1):
            diff = pts[m:] - pts[:-m]
            r_min = min(r_min, float(np.min(np.linalg.norm(diff, axis=-1))))
        gaps = np.linalg.norm(pts[1:] - pts[:-1], axis=-1)
        r_max = float(np.max(gaps))
        return DeloneCertificate(r_min=r_min, r_max=r_max, window=pattern.window)
    n1, n2 = coords.shape[:2]
    if n1 < 2 or n2 < 2:
        raise PatternError("window too small for a Delone check")
    r_min = math.inf
    rng = NEIGHBOR_RANGE_2D
    for m1 in range(0, min(rng, n1 - 1) + 1):
        for m2 in range(-min(rng, n2 - 1), min(rng, n2 - 1) + 1):
            if m1 == 0 and m2 <= 0:
                continue
            a = coords[m1:, max(m2, 0):]
            b = coords[: n1 - m1, max(-m2, 0):][:, : a.shape[1]]
            a = a[:, : b.shape[1]]
            diff = a - b
            r_min = min(r_min, float(np.min(np.linalg.norm(diff, axis=-1))))
    # covering estimate: largest diameter among unit label cells
    c00 = coords[:-1, :-1]
    c10 = coords[1:, :-1]
    c01 = coords[:-1, 1:]
    c11 = coords[1:, 1:]
    r_max = 0.0
    for a, b in ((c00, c10), (c00, c01), (c00, c11), (c10, c01), (c10, c11), (c01, c11)):
        r_max = max(r_max, float(np.max(np.linalg.norm(a - b, axis=-1))))
    return DeloneCertificate(r_min=r_min, r_max=r_max, window=pattern.window)


def lipschitz_bound(spec: PatternSpec, grid: int = 512) -> float:
    """Upper bound ``D`` with ``|p_{n+m} - p_n| <= D |m|``, estimated as
    ``dim_label * max |Gamma_e|`` over a dense hull grid."""
    d = spec.dim_label
    worst = 0.0
    rng = np.random.default_rng(12345)
    for _ in range(grid):
        w = tuple(rng.random() * c for c in spec.hull_periods)
        for a in range(d):
            worst = max(worst, float(np.linalg.norm(gamma(spec, a + 1, w))))
    return d * worst


def write_pattern_csv(pattern: PointPattern, fh) -> None:
    """CSV export with one row per label: n1[,n2],x[,y[,z]]."""
    d, s = pattern.dim_label, pattern.dim_space
    header = ["n1", "n2"][:d] + ["x", "y", "z"][:s]
    fh.write(",".join(header) + "\n")
    coords = pattern.coords
    for lab in pattern.labels():
        idx = tuple(nj - lo for nj, (lo, _) in zip(lab, pattern.window))
        vals = coords[idx]
        fh.write(",".join(str(v) for v in lab) + "," +
                 ",".join(repr(float(v)) for v in vals) + "\n")
