"""Scalar observables and distributions of joint atom-field states.

Atomic quantities (inversion, concurrence) read the JointState
amplitudes directly; photon-statistics quantities go through the
reduced field density matrix so that cross-block field coherences are
handled in one place.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InputError, InsufficientSpanError
from .states import FieldDensity, JointState, field_density

__all__ = [
    "population_inversion",
    "concurrence",
    "mean_photon",
    "photon_parity",
    "mandel_q",
    "field_moments",
    "quadrature_variance_x",
    "HusimiGrid",
    "husimi",
    "husimi_grid",
    "oscillation_periods",
]

DENSITY_CHECK_TOL = 1e-9
HUSIMI_BOUNDARY_TOL = 1e-6

_SY_SY = np.array([
    [0, 0, 0, -1],
    [0, 0, 1, 0],
    [0, 1, 0, 0],
    [-1, 0, 0, 0],
], dtype=complex)


def population_inversion(state: JointState) -> float:
    """Probability of the excited atom minus that of the ground atom."""
    p_e = math.fsum(float(p) for p in np.abs(state.amp_e) ** 2)
    p_g = math.fsum([abs(complex(state.amp_g0)) ** 2]
                    + [float(p) for p in np.abs(state.amp_g) ** 2])
    return p_e - p_g


def concurrence(rho: np.ndarray) -> float:
    """Wootters concurrence of a two-qubit density matrix.

    rho must be 4x4, Hermitian, unit trace and positive semidefinite
    within 1e-9.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise InputError(f"expected a 4x4 density matrix, got shape {rho.shape}")
    if not np.all(np.isfinite(rho)):
        raise InputError("density matrix must be finite")
    herm = float(np.max(np.abs(rho - rho.conj().T)))
    if herm > DENSITY_CHECK_TOL:
        raise InputError(f"density matrix is not Hermitian (deviation {herm:.3e})")
    tr = complex(np.trace(rho))
    if abs(tr - 1.0) > DENSITY_CHECK_TOL:
        raise InputError(f"density matrix trace is {tr:.6g}, expected 1")
    sym = 0.5 * (rho + rho.conj().T)
    evs, vecs = np.linalg.eigh(sym)
    if float(evs.min()) < -DENSITY_CHECK_TOL:
        raise InputError(
            f"density matrix has negative eigenvalue {float(evs.min()):.3e}")
    # The spin-flip eigenvalues are the singular values of
    # sqrt(rho) (sy x sy) conj(sqrt(rho)); taking square roots of the
    # eigenvalues of rho @ rho_tilde instead would inflate the zero
    # modes to sqrt(machine eps) and poison the subtraction below.
    root = (vecs * np.sqrt(np.clip(evs, 0.0, None))) @ vecs.conj().T
    sigma = np.linalg.svd(root @ _SY_SY @ root.conj(), compute_uv=False)
    return max(0.0, float(sigma[0] - sigma[1] - sigma[2] - sigma[3]))


def mean_photon(state: JointState) -> float:
    """Mean photon number."""
    n = np.arange(state.n_max + 1, dtype=float)
    parts = [float(v) for v in n * np.abs(state.amp_e) ** 2]
    parts += [float(v) for v in (n + 1.0) * np.abs(state.amp_g) ** 2]
    return math.fsum(parts)


def photon_parity(state: JointState) -> float:
    """Expectation of (-1)^n for the field."""
    sign = np.where(np.arange(state.n_max + 1) % 2 == 0, 1.0, -1.0)
    parts = [abs(complex(state.amp_g0)) ** 2]
    parts += [float(v) for v in sign * np.abs(state.amp_e) ** 2]
    # (ground, n+1 photons): parity of n+1 is the opposite of n
    parts += [float(v) for v in -sign * np.abs(state.amp_g) ** 2]
    return math.fsum(parts)


def _second_factorial_moment(state: JointState) -> float:
    n = np.arange(state.n_max + 1, dtype=float)
    parts = [float(v) for v in n * (n - 1.0) * np.abs(state.amp_e) ** 2]
    parts += [float(v) for v in (n + 1.0) * n * np.abs(state.amp_g) ** 2]
    return math.fsum(parts)


def mandel_q(state: JointState) -> float:
    """Mandel Q parameter: (variance - mean) / mean of the photon number."""
    nbar = mean_photon(state)
    if nbar <= 0.0:
        raise DomainError("Mandel Q is undefined for a field with no photons")
    var = _second_factorial_moment(state) + nbar - nbar * nbar
    return var / nbar - 1.0


def field_moments(fd: FieldDensity) -> tuple[complex, complex, float]:
    """First and second lowering-operator moments and the mean photon number.

    Returns (<a>, <a^2>, <n>) computed from the reduced field density
    matrix diagonals.
    """
    rho = fd.rho
    dim = rho.shape[0]
    k = np.arange(1, dim, dtype=float)
    a1 = complex(np.sum(np.sqrt(k) * np.diag(rho, -1)))
    if dim >= 2:
        k2 = np.arange(2, dim, dtype=float)
        a2 = complex(np.sum(np.sqrt(k2 * (k2 - 1.0)) * np.diag(rho, -2)))
    else:
        a2 = 0j
    nbar = float(np.sum(np.arange(dim) * np.diag(rho).real))
    return a1, a2, nbar


def quadrature_variance_x(fd: FieldDensity) -> float:
    """Variance of the x quadrature (a + a^dagger)/2; 0.25 for coherent states."""
    a1, a2, nbar = field_moments(fd)
    return 0.5 * ((a2 - a1 * a1).real + nbar - abs(a1) ** 2 + 0.5)


def husimi(fd: FieldDensity, re_grid, im_grid) -> np.ndarray:
    """Husimi Q function on a phase-space grid.

    Returns Q with shape (len(im_grid), len(re_grid)), row i column j
    evaluated at gamma = re_grid[j] + 1j * im_grid[i]. Warns when the
    boundary values suggest the grid window clips the distribution.
    """
    re_grid = np.asarray(re_grid, dtype=float)
    im_grid = np.asarray(im_grid, dtype=float)
    if re_grid.ndim != 1 or im_grid.ndim != 1 or re_grid.size < 2 or im_grid.size < 2:
        raise InputError("husimi needs one-dimensional grids with at least 2 points")
    w, vecs = np.linalg.eigh(0.5 * (fd.rho + fd.rho.conj().T))
    w = np.clip(w, 0.0, None)
    keep = w > 1e-15
    w = w[keep]
    vecs = vecs[:, keep]
    dim = fd.rho.shape[0]
    gamma = re_grid[None, :] + 1j * im_grid[:, None]
    # coherent-state overlaps <n|gamma> by upward recurrence
    overlap = np.empty((dim,) + gamma.shape, dtype=complex)
    overlap[0] = np.exp(-0.5 * np.abs(gamma) ** 2)
    for n in range(dim - 1):
        overlap[n + 1] = overlap[n] * gamma.conj() / math.sqrt(n + 1.0)
    q = np.zeros(gamma.shape, dtype=float)
    for k in range(w.size):
        # overlap[n] carries conj(gamma)^n, so contracting with the
        # unconjugated eigenvector gives <gamma|psi_k>
        amp = np.tensordot(vecs[:, k], overlap, axes=(0, 0))
        q += w[k] * np.abs(amp) ** 2
    q /= math.pi
    edge = max(float(q[0].max()), float(q[-1].max()),
               float(q[:, 0].max()), float(q[:, -1].max()))
    if edge > HUSIMI_BOUNDARY_TOL:
        warnings.warn(
            f"Husimi grid boundary value {edge:.3e} exceeds "
            f"{HUSIMI_BOUNDARY_TOL:.0e}; enlarge the window",
            RuntimeWarning, stacklevel=2)
    return q


@dataclass(frozen=True)
class HusimiGrid:
    """Husimi Q values sampled on a rectangular phase-space window.

    values[i, j] is Q at re_range-point j, im_range-point i, both axes
    sampled with `resolution` equally spaced points.
    """

    re_range: tuple[float, float]
    im_range: tuple[float, float]
    resolution: int
    values: np.ndarray

    def cell_area(self) -> float:
        dre = (self.re_range[1] - self.re_range[0]) / (self.resolution - 1)
        dim = (self.im_range[1] - self.im_range[0]) / (self.resolution - 1)
        return dre * dim

    def norm(self) -> float:
        """Riemann-sum normalization; 1 up to grid truncation."""
        return float(self.values.sum() * self.cell_area())


def husimi_grid(fd: FieldDensity, re_range=(-5.0, 5.0),
                im_range=(-5.0, 5.0), resolution: int = 201) -> HusimiGrid:
    """Husimi Q function packaged with its sampling window."""
    if resolution < 2:
        raise InputError(f"resolution must be >= 2, got {resolution}")
    if len(re_range) != 2 or len(im_range) != 2:
        # reject a combined 4-entry window passed as re_range, which
        # would otherwise silently keep the default im_range
        raise InputError("re_range and im_range must be (low, high) pairs")
    re_lo, re_hi = float(re_range[0]), float(re_range[1])
    im_lo, im_hi = float(im_range[0]), float(im_range[1])
    if not (re_lo < re_hi and im_lo < im_hi):
        raise InputError("phase-space window must have positive extent")
    xs = np.linspace(re_lo, re_hi, resolution)
    ys = np.linspace(im_lo, im_hi, resolution)
    values = husimi(fd, xs, ys)
    return HusimiGrid(re_range=(re_lo, re_hi), im_range=(im_lo, im_hi),
                      resolution=resolution, values=values)


def oscillation_periods(ts, values, count: int) -> np.ndarray:
    """Successive periods of an oscillating signal from its maxima.

    Locates strict interior maxima of values, refines each by a
    three-point parabolic fit, prepends time 0 as the zeroth peak, and
    returns the differences of consecutive peak times (count of them).
    Raises InsufficientSpanError when fewer than count maxima exist.
    """
    ts = np.asarray(ts, dtype=float)
    values = np.asarray(values, dtype=float)
    if ts.ndim != 1 or ts.shape != values.shape or ts.size < 3:
        raise InputError("need matching one-dimensional arrays with >= 3 points")
    if count < 1:
        raise InputError(f"count must be >= 1, got {count}")
    v = values
    idx = np.nonzero((v[1:-1] > v[:-2]) & (v[1:-1] > v[2:]))[0] + 1
    if idx.size < count:
        raise InsufficientSpanError(
            f"found {idx.size} maxima, need {count}; extend the time span")
    peaks = [0.0]
    for i in idx[:count]:
        y0, y1, y2 = v[i - 1], v[i], v[i + 1]
        denom = y0 - 2.0 * y1 + y2
        if denom < 0.0:
            shift = 0.5 * (y0 - y2) / denom
        else:
            shift = 0.0
        h = 0.5 * (ts[i + 1] - ts[i - 1])
        peaks.append(float(ts[i] + shift * h))
    return np.diff(np.asarray(peaks))
