"""Finite tight-binding matrices over generated point patterns.

Hopping between two resonators decays exponentially with their Euclidean
distance, ``exp(-beta * d)``, and is dropped beyond ``cutoff_dist``.  Three
builders are provided: periodic approximants (``build_bulk_pbc``), Dirichlet
half-spaces (``build_half_space``), and bundles of half-spaces with shifted
cuts (``build_bundle``).  All matrices are dense, real symmetric to exact bit
equality, with unit diagonal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction

import numpy as np

from .patterns import (
    Kind,
    PatternError,
    PatternSpec,
    PointPattern,
    delone_check,
    generate,
    label_period,
)

#: matrix construction refuses when the observed minimum separation drops
#: below this value (the hopping amplitude degenerates toward 1)
MIN_SEPARATION = 1e-6

_CHUNK_ROWS = 1024


class BuildError(ValueError):
    """Invalid Hamiltonian construction request."""


class CommensurationError(BuildError):
    """Frequency and system size do not close the pattern periodically."""


class DeloneError(BuildError):
    """Pattern too degenerate (nearly coincident points) for a physical
    Hamiltonian."""


@dataclass(frozen=True)
class HoppingRule:
    """Exponential hopping ``exp(-beta*d)`` truncated at ``cutoff_dist``."""

    beta: float = 1.0
    cutoff_dist: float = 7.0

    def __post_init__(self):
        if self.beta <= 0.0 or self.cutoff_dist <= 0.0:
            raise BuildError("beta and cutoff_dist must be positive")

    @property
    def truncation_error(self) -> float:
        """Bound on the total dropped hopping weight per site (1D tail sum)."""
        b, c = self.beta, self.cutoff_dist
        return 2.0 * math.exp(-b * c) / (1.0 - math.exp(-b))


@dataclass(frozen=True)
class BoundaryInfo:
    """Boundary-condition metadata attached to a built matrix."""

    kind: str  # "pbc" or "half"
    sizes: tuple
    periods: tuple  # physical longitudinal period per axis, None on open axes
    cut_axis: int = -1
    cut_offset: int = 0

    def describe(self) -> str:
        if self.kind == "pbc":
            return f"pbc:sizes={self.sizes}"
        return f"half:sizes={self.sizes},axis={self.cut_axis},k={self.cut_offset}"


@dataclass(frozen=True)
class HamiltonianMatrix:
    entries: np.ndarray = field(repr=False)
    labels: np.ndarray = field(repr=False)  # (dim, d) int, row -> lattice label
    bc: BoundaryInfo = BoundaryInfo("pbc", (), ())
    truncation_error: float = 0.0

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def label_of(self, row: int) -> tuple:
        return tuple(int(v) for v in self.labels[row])


def _as_sizes(sizes, d):
    if isinstance(sizes, (int, np.integer)):
        sizes = (int(sizes),) * d
    sizes = tuple(int(s) for s in sizes)
    if len(sizes) != d:
        raise BuildError(f"need {d} size(s), got {len(sizes)}")
    if any(s < 1 for s in sizes):
        raise BuildError(f"sizes must be >= 1, got {sizes}")
    return sizes


def _require_commensurate(spec: PatternSpec, axis: int, size: int) -> int:
    a = spec.alpha[axis]
    if not isinstance(a, Fraction):
        raise CommensurationError(
            f"axis {axis}: periodic boundary conditions need a rational alpha, got {a!r}"
        )
    t = label_period(spec, axis)
    if size % t:
        raise CommensurationError(
            f"axis {axis}: size {size} is not a multiple of the label period {t}"
        )
    return t


def _axis_period_vector(pattern: PointPattern, axis: int, size: int) -> np.ndarray:
    """Physical translation after ``size`` labels along ``axis``."""
    d = pattern.dim_label
    lab = tuple(size if i == axis else 0 for i in range(d))
    vec = pattern.point(lab) - pattern.point((0,) * d)
    return np.asarray(vec, dtype=float)


def _check_separation(pattern: PointPattern):
    cert = delone_check(pattern)
    if cert.r_min < MIN_SEPARATION:
        raise DeloneError(
            f"minimum point separation {cert.r_min:.3e} below {MIN_SEPARATION:.1e}; "
            "hopping amplitudes degenerate"
        )
    return cert


def _image_shifts(period_vectors, cutoff):
    """Lattice of periodic images that can reach within the hopping cutoff."""
    if not period_vectors:
        return [np.zeros(0)]
    shifts = [np.zeros_like(period_vectors[0])]
    for vec in period_vectors:
        norm = float(np.linalg.norm(vec))
        reach = int(cutoff // norm) + 2
        new = []
        for base in shifts:
            for m in range(-reach, reach + 1):
                new.append(base + m * vec)
        shifts = new
    return shifts


def _assemble(positions: np.ndarray, shifts, hopping: HoppingRule) -> np.ndarray:
    n = positions.shape[0]
    w = np.zeros((n, n))
    diam = float(np.linalg.norm(positions.max(axis=0) - positions.min(axis=0))) if n > 1 else 0.0
    for v in shifts:
        if float(np.linalg.norm(v)) - diam > hopping.cutoff_dist:
            continue
        for lo in range(0, n, _CHUNK_ROWS):
            hi = min(lo + _CHUNK_ROWS, n)
            diff = positions[lo:hi, None, :] - positions[None, :, :] + v
            dist = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
            w[lo:hi] += np.where(dist <= hopping.cutoff_dist,
                                 np.exp(-hopping.beta * dist), 0.0)
    upper = np.triu(w, 1)
    h = upper + upper.T
    np.fill_diagonal(h, 1.0)
    return h


def _finish(h, labels, bc, hopping):
    h.flags.writeable = False
    labels = np.asarray(labels, dtype=np.int64)
    labels.flags.writeable = False
    return HamiltonianMatrix(entries=h, labels=labels, bc=bc,
                             truncation_error=hopping.truncation_error)


def build_bulk_pbc(spec: PatternSpec, sizes, hopping: HoppingRule | None = None,
                   omega=None) -> HamiltonianMatrix:
    """Periodic-approximant matrix: every alpha must be a fraction p/q whose
    label period divides the corresponding size.

    Off-diagonal entries sum the hopping over all periodic images within the
    cutoff; image contributions of a site to itself are excluded, so the
    diagonal is exactly 1.
    """
    hopping = hopping or HoppingRule()
    if omega is not None:
        spec = replace(spec, omega=omega)
    d = spec.dim_label
    sizes = _as_sizes(sizes, d)
    for axis, size in enumerate(sizes):
        _require_commensurate(spec, axis, size)
    window = tuple((0, s) for s in sizes)
    pattern = generate(spec, window)
    _check_separation(pattern)
    period_vecs = [_axis_period_vector(pattern, a, sizes[a]) for a in range(d)]
    coords = pattern.coords
    if d == 1:
        positions = coords[: sizes[0]]
        labels = np.arange(sizes[0])[:, None]
    else:
        positions = coords[: sizes[0], : sizes[1]].reshape(-1, spec.dim_space)
        labels = np.stack(np.meshgrid(np.arange(sizes[0]), np.arange(sizes[1]),
                                      indexing="ij"), axis=-1).reshape(-1, 2)
    shifts = _image_shifts(period_vecs, hopping.cutoff_dist)
    h = _assemble(positions, shifts, hopping)
    bc = BoundaryInfo(kind="pbc", sizes=sizes,
                      periods=tuple(float(np.linalg.norm(v)) for v in period_vecs))
    return _finish(h, labels, bc, hopping)


def build_half_space(spec: PatternSpec, cut_axis: int, cut_offset: int, sizes,
                     hopping: HoppingRule | None = None, omega=None) -> HamiltonianMatrix:
    """Dirichlet half-space: labels restricted to ``n_cut >= cut_offset`` on
    the cut axis, open at the far end ``cut_offset + size``; periodic on the
    uncut axis (2D).  Rows and columns outside the restriction are simply
    absent."""
    hopping = hopping or HoppingRule()
    if omega is not None:
        spec = replace(spec, omega=omega)
    d = spec.dim_label
    sizes = _as_sizes(sizes, d)
    if not 0 <= cut_axis < d:
        raise BuildError(f"cut axis {cut_axis} out of range for {d} label axes")
    k = int(cut_offset)
    window = []
    for axis, size in enumerate(sizes):
        if axis == cut_axis:
            window.append((min(0, k), max(k + size - 1, 0)))
        else:
            _require_commensurate(spec, axis, size)
            window.append((0, size))
    pattern = generate(spec, tuple(window))
    _check_separation(pattern)
    coords = pattern.coords
    period_vecs = []
    if d == 1:
        lo = window[0][0]
        positions = coords[k - lo: k - lo + sizes[0]]
        labels = (np.arange(sizes[0]) + k)[:, None]
    else:
        uncut = 1 - cut_axis
        period_vecs = [_axis_period_vector(pattern, uncut, sizes[uncut])]
        lo_cut = window[cut_axis][0]
        sl = [slice(0, sizes[uncut]), slice(0, sizes[uncut])]
        sl[cut_axis] = slice(k - lo_cut, k - lo_cut + sizes[cut_axis])
        block = coords[sl[0], sl[1]]
        positions = block.reshape(-1, spec.dim_space)
        ax0 = np.arange(sizes[0]) + (k if cut_axis == 0 else 0)
        ax1 = np.arange(sizes[1]) + (k if cut_axis == 1 else 0)
        labels = np.stack(np.meshgrid(ax0, ax1, indexing="ij"), axis=-1).reshape(-1, 2)
    if positions.shape[0] == 0:
        raise BuildError("empty half-space restriction")
    shifts = _image_shifts(period_vecs, hopping.cutoff_dist)
    h = _assemble(positions, shifts, hopping)
    periods = tuple(
        None if (axis == cut_axis or d == 1)
        else float(np.linalg.norm(period_vecs[0]))
        for axis in range(d)
    )
    bc = BoundaryInfo(kind="half", sizes=sizes, periods=periods,
                      cut_axis=cut_axis, cut_offset=k)
    return _finish(h, labels, bc, hopping)


def build_bundle(spec: PatternSpec, cuts, sizes, hopping: HoppingRule | None = None,
                 omega=None, cut_axis: int | None = None) -> list:
    """One half-space matrix per cut offset, sorted by offset.

    The default cut axis is the last label axis.
    """
    cuts = sorted(int(k) for k in cuts)
    if not cuts:
        raise BuildError("empty cut set")
    d = _LABEL_DIM_OF(spec)
    axis = d - 1 if cut_axis is None else int(cut_axis)
    return [build_half_space(spec, axis, k, sizes, hopping, omega=omega) for k in cuts]


def _LABEL_DIM_OF(spec):
    return spec.dim_label


def dump_matrix_coo(matrix: HamiltonianMatrix, fh) -> None:
    """Coordinate-list text dump: row, col, value with 17 significant digits."""
    h = matrix.entries
    rows, cols = np.nonzero(h)
    for i, j in zip(rows, cols):
        fh.write(f"{i} {j} {h[i, j]:.17g}\n")
