"""Eigenvalue computation, integrated density of states, gap detection, and
butterfly sweeps over rational frequencies.

At a rational frequency the periodic approximant is sampled at several hull
seeds; the per-seed eigenvalue multisets are merged before gaps are detected,
which realizes the union of spectra over the hull.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction

import numpy as np

from .hamiltonian import HamiltonianMatrix, HoppingRule, build_bulk_pbc
from .patterns import PatternSpec, label_period


class SolverError(RuntimeError):
    """Dense symmetric eigensolver failed or returned inconsistent data."""


#: spot-check bound on ||H v - lambda v|| relative to ||H||
RESIDUAL_TOL = 1e-8

#: golden / plastic low-discrepancy increments for 1 and 2 hull axes
_KRONECKER_1D = (0.6180339887498949,)
_KRONECKER_2D = (0.7548776662466927, 0.5698402909980529)


@dataclass(frozen=True)
class SpectrumRecord:
    """Sorted eigenvalues of one periodic approximant at one hull seed."""

    alpha: tuple
    omega_index: int
    eigenvalues: np.ndarray = field(repr=False)
    dim: int = 0
    bc: str = ""

    def __post_init__(self):
        evs = np.asarray(self.eigenvalues, dtype=float)
        if np.any(np.diff(evs) < 0):
            raise SolverError("eigenvalues must be ascending")
        evs.flags.writeable = False
        object.__setattr__(self, "eigenvalues", evs)
        object.__setattr__(self, "dim", len(evs))


@dataclass(frozen=True)
class GapRecord:
    """A spectral gap with the IDS value it pins."""

    gap_lo: float
    gap_hi: float
    ids: float
    key: str = ""

    @property
    def width(self):
        return self.gap_hi - self.gap_lo

    def contains(self, energy, strict=True):
        if strict:
            return self.gap_lo < energy < self.gap_hi
        return self.gap_lo <= energy <= self.gap_hi


@dataclass(frozen=True)
class SweepPoint:
    """All records and merged-spectrum gaps at one sweep frequency."""

    alpha: tuple
    records: tuple
    gaps: tuple
    size: tuple


def _entries_of(matrix):
    if isinstance(matrix, HamiltonianMatrix):
        return matrix.entries
    a = np.asarray(matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise SolverError(f"expected a square matrix, got shape {a.shape}")
    if not np.array_equal(a, a.T):
        raise SolverError("matrix is not symmetric")
    return a


def eigensystem(matrix):
    """Eigenvalues (ascending) and eigenvectors of a real symmetric matrix,
    with a residual spot-check on a few eigenpairs."""
    a = _entries_of(matrix)
    try:
        vals, vecs = np.linalg.eigh(a)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - rare
        raise SolverError(f"dense symmetric eigensolver failed: {exc}") from exc
    norm = max(abs(vals[0]), abs(vals[-1]), 1e-300)
    for idx in {0, len(vals) // 2, len(vals) - 1}:
        resid = np.linalg.norm(a @ vecs[:, idx] - vals[idx] * vecs[:, idx])
        if resid > RESIDUAL_TOL * norm:
            raise SolverError(
                f"eigenpair residual {resid:.3e} exceeds {RESIDUAL_TOL:.1e} * ||H||"
            )
    return vals, vecs


def eigvals_sym(matrix) -> np.ndarray:
    """All eigenvalues of a real symmetric matrix, ascending."""
    vals, _ = eigensystem(matrix)
    return vals


def ids_at(energy, spectrum) -> float:
    """Fraction of eigenvalues at or below ``energy``."""
    evs = spectrum.eigenvalues if isinstance(spectrum, SpectrumRecord) else np.asarray(spectrum)
    if len(evs) == 0:
        raise SolverError("empty spectrum")
    return float(np.searchsorted(evs, energy, side="right")) / len(evs)


def merge_eigenvalues(spectra) -> np.ndarray:
    """Multiset union of eigenvalues from one or more records/arrays."""
    if isinstance(spectra, (SpectrumRecord, np.ndarray)):
        spectra = [spectra]
    arrays = [
        s.eigenvalues if isinstance(s, SpectrumRecord) else np.asarray(s, dtype=float)
        for s in spectra
    ]
    return np.sort(np.concatenate(arrays))


def detect_gaps(spectra, min_width: float = 0.01, key: str = "") -> list:
    """Maximal eigenvalue-free intervals of relative width >= ``min_width``.

    ``min_width`` is relative to the merged spectral span; the IDS is
    evaluated at each gap midpoint.  Records from several hull seeds are
    merged before detection.
    """
    if not 0.0 < min_width < 1.0:
        raise ValueError(f"min_width must lie in (0, 1), got {min_width}")
    evs = merge_eigenvalues(spectra)
    span = float(evs[-1] - evs[0])
    if span <= 0.0:
        return []
    threshold = min_width * span
    diffs = np.diff(evs)
    out = []
    n = len(evs)
    for i in np.nonzero(diffs >= threshold)[0]:
        out.append(GapRecord(gap_lo=float(evs[i]), gap_hi=float(evs[i + 1]),
                             ids=(i + 1) / n, key=key))
    return out


def farey_fractions(q_max: int) -> list:
    """All reduced fractions p/q in [0, 1) with q <= q_max, ascending."""
    if q_max < 1:
        raise ValueError("q_max must be >= 1")
    out = {Fraction(0, 1)}
    for q in range(2, q_max + 1):
        for p in range(1, q):
            if math.gcd(p, q) == 1:
                out.add(Fraction(p, q))
    return sorted(out)


def omega_samples(spec: PatternSpec, count: int, seed: int = 0) -> list:
    """Deterministic low-discrepancy seeds on the flat hull.

    A Kronecker sequence (golden ratio in 1D, plastic-number pair in 2D) is
    offset by a start point drawn from ``seed``, then scaled to the hull
    circumference per axis.
    """
    if count < 1:
        raise ValueError("need at least one hull sample")
    d = spec.dim_label
    incr = _KRONECKER_1D if d == 1 else _KRONECKER_2D
    rng = np.random.default_rng(seed)
    start = rng.random(d)
    periods = spec.hull_periods
    out = []
    for i in range(count):
        point = tuple(
            float(((start[j] + i * incr[j]) % 1.0) * periods[j]) for j in range(d)
        )
        out.append(point)
    return out


def sweep_sizes(spec: PatternSpec, alpha, size_floor: int) -> tuple:
    """Smallest per-axis multiple of the label period at or above the floor."""
    probe = replace(spec, alpha=alpha, omega=(0.0,) * spec.dim_label)
    sizes = []
    for axis in range(spec.dim_label):
        t = label_period(probe, axis)
        sizes.append(t * max(1, math.ceil(size_floor / t)))
    return tuple(sizes)


def spectra_at(spec: PatternSpec, alpha, sizes, hopping: HoppingRule,
               omegas, min_width: float = 0.01) -> SweepPoint:
    """Periodic-approximant records at one frequency over all hull seeds,
    plus the gaps of the merged spectrum."""
    alpha = tuple(alpha) if isinstance(alpha, (tuple, list)) else (alpha,) * spec.dim_label
    work = replace(spec, alpha=alpha)
    records = []
    for i, w in enumerate(omegas):
        h = build_bulk_pbc(work, sizes, hopping, omega=w)
        vals = eigvals_sym(h)
        records.append(SpectrumRecord(alpha=alpha, omega_index=i,
                                      eigenvalues=vals, bc=h.bc.describe()))
    key = "a=" + ",".join(str(a) for a in alpha)
    gaps = detect_gaps(records, min_width=min_width, key=key)
    return SweepPoint(alpha=alpha, records=tuple(records), gaps=tuple(gaps),
                      size=tuple(sizes))


def butterfly_sweep(spec: PatternSpec, q_max: int, hopping: HoppingRule | None = None,
                    size_floor: int = 100, omega_count: int = 8, seed: int = 0,
                    min_width: float = 0.01, parallelism: int = 1) -> list:
    """Periodic-approximant spectra for every reduced fraction p/q, q <= q_max.

    Multi-axis kinds sweep the diagonal (all axes share the fraction).  Grid
    points run concurrently up to ``parallelism``; results are emitted sorted
    by (q, p, omega index) regardless of scheduling.
    """
    if q_max < 2:
        raise ValueError("q_max must be >= 2")
    hopping = hopping or HoppingRule()
    fracs = farey_fractions(q_max)
    d = spec.dim_label

    def run(frac):
        alpha = (frac,) * d
        sizes = sweep_sizes(spec, alpha, size_floor)
        work = replace(spec, alpha=alpha)
        omegas = omega_samples(work, omega_count, seed=seed)
        return spectra_at(spec, alpha, sizes, hopping, omegas, min_width=min_width)

    if parallelism > 1:
        with ThreadPoolExecutor(max_workers=parallelism) as pool:
            points = dict(zip(fracs, pool.map(run, fracs)))
    else:
        points = {f: run(f) for f in fracs}
    order = sorted(fracs, key=lambda f: (f.denominator, f.numerator))
    return [points[f] for f in order]


def write_butterfly_csv(points, fh) -> None:
    """One row per eigenvalue: alpha_num, alpha_den, omega_idx, eig_idx, energy."""
    fh.write("alpha_num,alpha_den,omega_idx,eig_idx,energy\n")
    for pt in points:
        frac = pt.alpha[0]
        for rec in pt.records:
            for j, e in enumerate(rec.eigenvalues):
                fh.write(f"{frac.numerator},{frac.denominator},"
                         f"{rec.omega_index},{j},{e!r}\n")


def write_gaps_csv(points, fh) -> None:
    fh.write("alpha_num,alpha_den,gap_lo,gap_hi,ids\n")
    for pt in points:
        frac = pt.alpha[0]
        for gap in pt.gaps:
            fh.write(f"{frac.numerator},{frac.denominator},"
                     f"{gap.gap_lo!r},{gap.gap_hi!r},{gap.ids!r}\n")
