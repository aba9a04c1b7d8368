"""Per-excitation-block dynamics in the unitary picture.

For order a in (0, 1] the two-level/field dynamics decouples into 2x2
blocks spanned by the bare states (excited atom, n photons) and (ground
atom, n+1 photons). The raw propagator of each block,

    P(t) = [[C, i^{-a} S], [i^{-a} S, C]],

is built from the two Mittag-Leffler evaluations C and S returned by
propagator_pair; it is not unitary for a < 1 and its determinant
D = C^2 - e^{-i pi a} S^2 walks around the complex plane as t grows.
dyson_params constructs the time-dependent similarity (Dyson-type) map
that restores unitarity, and unitary_block assembles the resulting
unitary 2x2 matrix whose amplitudes drive all observables downstream.

The construction needs a continuous branch of ln D(t) along the
trajectory (tracked_log); only the half-phase of D enters, and the final
matrix is invariant under 2 pi branch shifts of ln D, so single-point
evaluations (block_at) may use the principal branch.

The map may also be started from a non-identity initial condition
(DysonInit), which is what makes the construction self-consistent at
t = 0 for restarted evolutions.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import (ConsistencyError, DegeneracyError, DomainError,
                     GridCoarseError, InputError)
from .mittag import DEFAULT_TOL, ml_eval, ml_eval_many

__all__ = [
    "FractionalOrder",
    "BlockPropagator",
    "DysonInit",
    "IDENTITY_INIT",
    "DysonMap",
    "UnitaryBlock",
    "BlockTrajectory",
    "propagator_pair",
    "block_determinant",
    "tracked_log",
    "dyson_params",
    "unitary_block",
    "block_at",
    "block_trajectory",
]

MAX_JUMP = math.pi / 2.0
UNITARITY_TOL = 1e-8


@dataclass(frozen=True)
class FractionalOrder:
    """Derivative order with its two fixed rotation constants.

    rot_quarter = exp(-i pi a / 2) (the principal fractional power of the
    imaginary unit that multiplies the odd kernel) and rot_half is its
    square, exp(-i pi a).
    """

    alpha: float

    def __post_init__(self):
        a = self.alpha
        if not isinstance(a, (int, float)) or a != a or not 0.0 < float(a) <= 1.0:
            raise InputError(f"order must lie in (0, 1], got {a!r}")
        object.__setattr__(self, "alpha", float(a))

    @property
    def rot_quarter(self) -> complex:
        return cmath.exp(-0.5j * math.pi * self.alpha)

    @property
    def rot_half(self) -> complex:
        return cmath.exp(-1j * math.pi * self.alpha)


@dataclass(frozen=True)
class BlockPropagator:
    """Even/odd kernel pair of one excitation block at one time.

    even is the half-sum and odd the (rotation-normalized) half-difference
    of the Mittag-Leffler evaluations on the two conjugate rays; for a = 1
    they reduce to cos and sin of the block Rabi angle.
    """

    n: int
    t: float
    even: complex
    odd: complex

    def as_matrix(self, order: FractionalOrder) -> np.ndarray:
        """Raw (non-unitary for a < 1) 2x2 block propagator."""
        b = order.rot_quarter * self.odd
        return np.array([[self.even, b], [b, self.even]], dtype=complex)


@dataclass(frozen=True)
class DysonInit:
    """Initial condition of the similarity map.

    log_scale is the initial log of the overall scale, offdiag the initial
    off-diagonal parameter, det_factor the initial positivity factor
    (strictly positive). The identity map is the default starting point.
    """

    log_scale: float = 0.0
    offdiag: complex = 0j
    det_factor: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.log_scale) and math.isfinite(self.det_factor)):
            raise InputError("initial map parameters must be finite")
        z = complex(self.offdiag)
        if not (math.isfinite(z.real) and math.isfinite(z.imag)):
            raise InputError("initial map parameters must be finite")
        if self.det_factor <= 0.0:
            raise InputError(
                f"initial positivity factor must be > 0, got {self.det_factor}")

    @property
    def upper_left(self) -> float:
        """Initial upper-left map entry, det_factor + |offdiag|^2."""
        return self.det_factor + abs(complex(self.offdiag)) ** 2


IDENTITY_INIT = DysonInit()


@dataclass(frozen=True)
class DysonMap:
    """Similarity-map parameters of one block at one time.

    log_scale, offdiag, upper_left, det_factor are the map parameters
    proper (det_factor = upper_left*1 - |offdiag|^2 stays positive while
    the construction is valid); block_det is exp of the tracked log
    determinant used to build them; mix_plus/minus and ref_plus/minus are
    the two intermediate amplitude pairs reused by unitary_block.
    """

    n: int
    t: float
    log_scale: float
    offdiag: complex
    upper_left: float
    det_factor: float
    block_det: complex
    mix_plus: complex
    mix_minus: complex
    ref_plus: complex
    ref_minus: complex


@dataclass(frozen=True)
class UnitaryBlock:
    """Unitary 2x2 propagator of one block at one time.

    matrix() returns exp(i phase) * [[amp_plus, amp_minus],
    [-conj(amp_minus), conj(amp_plus)]]; |amp_plus|^2 + |amp_minus|^2 = 1
    up to round-off. phase is half the tracked determinant phase; shifting
    the branch of the tracked log by 2 pi k changes phase by pi k and
    flips the signs of both amplitudes, leaving matrix() invariant.
    """

    n: int
    t: float
    phase: float
    amp_plus: complex
    amp_minus: complex

    def matrix(self) -> np.ndarray:
        eid = cmath.exp(1j * self.phase)
        return np.array(
            [[eid * self.amp_plus, eid * self.amp_minus],
             [-eid * self.amp_minus.conjugate(), eid * self.amp_plus.conjugate()]],
            dtype=complex)


def _check_block_args(mu: float, n: int, t) -> tuple[float, int]:
    mu = float(mu)
    if not (math.isfinite(mu) and mu > 0.0):
        raise InputError(f"coupling must be a finite positive number, got {mu}")
    if not isinstance(n, (int, np.integer)) or n < 0:
        raise InputError(f"block index must be a non-negative integer, got {n!r}")
    return mu, int(n)


def propagator_pair(order: FractionalOrder, mu: float, n: int, t: float,
                    ml_tol: float = DEFAULT_TOL) -> BlockPropagator:
    """Evaluate the even/odd kernel pair of block n at time t."""
    mu, n = _check_block_args(mu, n, t)
    t = float(t)
    if not (math.isfinite(t) and t >= 0.0):
        raise InputError(f"time must be finite and non-negative, got {t}")
    x = mu * math.sqrt(n + 1.0) * t ** order.alpha
    z = order.rot_quarter * x
    rp = ml_eval(order.alpha, z, ml_tol)
    rm = ml_eval(order.alpha, -z, ml_tol)
    even = 0.5 * (rp.value + rm.value)
    odd = (rp.value - rm.value) / (2.0 * order.rot_quarter)
    return BlockPropagator(n=n, t=t, even=even, odd=odd)


def block_determinant(pair: BlockPropagator, order: FractionalOrder) -> complex:
    """Determinant of the raw block propagator, even^2 - e^{-i pi a} odd^2."""
    return pair.even * pair.even - order.rot_half * (pair.odd * pair.odd)


def tracked_log(values, max_jump: float = MAX_JUMP) -> np.ndarray:
    """Continuous complex logarithm along a sampled trajectory.

    values[0] anchors the branch at its principal argument; successive
    phases accumulate the principal arguments of consecutive ratios.
    Raises GridCoarseError when any single step turns the phase by
    max_jump or more (the continuous branch is then not trustworthy),
    and DegeneracyError if a value vanishes.
    """
    vals = np.asarray(values, dtype=complex)
    if vals.ndim != 1 or vals.size == 0:
        raise InputError("tracked_log expects a non-empty 1-d array")
    if not np.all(np.isfinite(vals)):
        raise InputError("tracked_log expects finite values")
    if np.any(vals == 0):
        raise DegeneracyError("determinant trajectory touches zero")
    re = np.log(np.abs(vals))
    jumps = np.angle(vals[1:] / vals[:-1])
    if jumps.size:
        i = int(np.argmax(np.abs(jumps)))
        worst = float(abs(jumps[i]))
        if worst >= max_jump:
            raise GridCoarseError(
                f"phase step {worst:.3f} rad at index {i + 1} reaches the "
                f"jump bound {max_jump:.3f}; refine the time grid")
    phase = float(np.angle(vals[0])) + np.concatenate(([0.0], np.cumsum(jumps)))
    return re + 1j * phase


def dyson_params(pair: BlockPropagator, order: FractionalOrder,
                 log_det: complex, init: DysonInit = IDENTITY_INIT) -> DysonMap:
    """Similarity-map parameters at one time from the kernel pair.

    log_det must be the tracked (or, for single points, principal) log of
    block_determinant(pair, order). Raises DegeneracyError if the
    positivity factor collapses.
    """
    log_det = complex(log_det)
    rot = order.rot_quarter
    b = rot * pair.odd
    lam0 = complex(init.offdiag)
    lam0c = lam0.conjugate()
    chi0 = init.upper_left
    mix_plus = b - lam0c * pair.even
    mix_minus = lam0 * b - chi0 * pair.even
    ref_plus = pair.even - lam0c * b
    ref_minus = lam0 * pair.even - chi0 * b
    base = init.det_factor * math.exp(log_det.real)
    den = abs(ref_plus) ** 2 + abs(ref_minus) ** 2 + base
    chi = (abs(mix_plus) ** 2 + abs(mix_minus) ** 2 + base) / den
    lam = -(ref_plus * mix_plus.conjugate() + ref_minus * mix_minus.conjugate()) / den
    cap = chi - abs(lam) ** 2
    if not (den > 0.0 and cap > 0.0):
        raise DegeneracyError(
            f"positivity factor collapsed (value {cap:.3e}) for block "
            f"n={pair.n} at t={pair.t}")
    return DysonMap(
        n=pair.n, t=pair.t,
        log_scale=init.log_scale - 0.5 * log_det.real,
        offdiag=lam, upper_left=chi, det_factor=cap,
        block_det=cmath.exp(log_det),
        mix_plus=mix_plus, mix_minus=mix_minus,
        ref_plus=ref_plus, ref_minus=ref_minus)


def unitary_block(pair: BlockPropagator, dmap: DysonMap, order: FractionalOrder,
                  log_det: complex, init: DysonInit = IDENTITY_INIT) -> UnitaryBlock:
    """Assemble the unitary block from the map parameters.

    Raises ConsistencyError if the assembled matrix fails unitarity beyond
    1e-8 (accumulated round-off or an inconsistent log_det branch).
    """
    log_det = complex(log_det)
    delta = 0.5 * log_det.imag
    pref = math.exp(dmap.log_scale - init.log_scale) / math.sqrt(
        dmap.det_factor * init.det_factor)
    lamc = dmap.offdiag.conjugate()
    nu_plus = pref * (dmap.mix_plus + lamc * dmap.ref_plus)
    nu_minus = -pref * (dmap.mix_minus + lamc * dmap.ref_minus)
    eid = cmath.exp(1j * delta)
    block = UnitaryBlock(
        n=pair.n, t=pair.t, phase=delta,
        amp_plus=eid * nu_minus.conjugate(),
        amp_minus=-eid * nu_plus.conjugate())
    u = block.matrix()
    resid = float(np.max(np.abs(u.conj().T @ u - np.eye(2))))
    if resid > UNITARITY_TOL:
        raise ConsistencyError(
            f"unitarity residual {resid:.3e} for block n={pair.n} at "
            f"t={pair.t} exceeds {UNITARITY_TOL}")
    return block


def block_at(order: FractionalOrder, mu: float, n: int, t: float,
             ml_tol: float = DEFAULT_TOL,
             init: DysonInit = IDENTITY_INIT) -> UnitaryBlock:
    """Unitary block at a single time, using the principal log branch.

    The returned matrix equals the trajectory construction exactly (branch
    shifts cancel); only the phase/amplitude split is gauge dependent.
    """
    pair = propagator_pair(order, mu, n, t, ml_tol)
    det = block_determinant(pair, order)
    if det == 0:
        raise DegeneracyError(f"block determinant vanished at t={t}")
    log_det = cmath.log(det)
    dmap = dyson_params(pair, order, log_det, init)
    return unitary_block(pair, dmap, order, log_det, init)


@dataclass
class BlockTrajectory:
    """Unitary-block history of one excitation block over a time grid.

    Arrays are aligned with ts. refinements records how many midpoint
    refinements the determinant phase tracking needed (the refined points
    are used only for tracking and are not returned).
    """

    n: int
    ts: np.ndarray
    even: np.ndarray
    odd: np.ndarray
    det: np.ndarray
    log_det: np.ndarray
    log_scale: np.ndarray
    offdiag: np.ndarray
    det_factor: np.ndarray
    phase: np.ndarray
    amp_plus: np.ndarray
    amp_minus: np.ndarray
    refinements: int

    def block(self, i: int) -> UnitaryBlock:
        return UnitaryBlock(n=self.n, t=float(self.ts[i]), phase=float(self.phase[i]),
                            amp_plus=complex(self.amp_plus[i]),
                            amp_minus=complex(self.amp_minus[i]))

    def pair(self, i: int) -> BlockPropagator:
        return BlockPropagator(n=self.n, t=float(self.ts[i]),
                               even=complex(self.even[i]), odd=complex(self.odd[i]))

    def evolve_amplitudes(self, amp_e0: complex, amp_g0: complex):
        """Amplitude pair (on this block's two bare states) at every time."""
        eid = np.exp(1j * self.phase)
        amp_e = eid * (self.amp_plus * amp_e0 + self.amp_minus * amp_g0)
        amp_g = eid * (-np.conj(self.amp_minus) * amp_e0
                       + np.conj(self.amp_plus) * amp_g0)
        return amp_e, amp_g


def _refine_midpoints(ts: np.ndarray) -> np.ndarray:
    fine = np.empty(2 * ts.size - 1, dtype=float)
    fine[0::2] = ts
    fine[1::2] = 0.5 * (ts[:-1] + ts[1:])
    return fine


def _check_grid(ts) -> np.ndarray:
    arr = np.asarray(ts, dtype=float)
    if arr.ndim != 1 or arr.size < 2:
        raise InputError("time grid must be a 1-d array with at least 2 points")
    if not np.all(np.isfinite(arr)):
        raise InputError("time grid must be finite")
    if arr[0] != 0.0:
        raise InputError(
            "time grid must start at t=0 (the determinant phase is anchored there)")
    if not np.all(np.diff(arr) > 0):
        raise InputError("time grid must be strictly increasing")
    return arr


def block_trajectory(order: FractionalOrder, mu: float, n: int, ts,
                     ml_tol: float = DEFAULT_TOL,
                     init: DysonInit = IDENTITY_INIT,
                     max_refine: int = 4,
                     max_jump: float = MAX_JUMP) -> BlockTrajectory:
    """Unitary blocks of block n over a time grid starting at 0.

    The determinant phase is tracked continuously along the grid; if a
    phase step reaches max_jump the grid is refined by midpoint insertion
    (up to max_refine times, refined points used for tracking only).
    Raises GridCoarseError when tracking still fails at the deepest
    refinement, DegeneracyError/ConsistencyError as in the scalar ops.
    """
    ts_arr = _check_grid(ts)
    mu, n = _check_block_args(mu, n, 0.0)
    rot = order.rot_quarter
    rot_half = order.rot_half
    scale = mu * math.sqrt(n + 1.0)

    tsr = ts_arr
    for refinement in range(max_refine + 1):
        x = scale * tsr ** order.alpha
        zs = rot * x
        ep, _, _ = ml_eval_many(order.alpha, zs, ml_tol)
        em, _, _ = ml_eval_many(order.alpha, -zs, ml_tol)
        even = 0.5 * (ep + em)
        odd = (ep - em) / (2.0 * rot)
        det = even * even - rot_half * (odd * odd)
        try:
            log_det = tracked_log(det, max_jump)
        except GridCoarseError:
            if refinement == max_refine:
                raise GridCoarseError(
                    f"determinant phase tracking failed for block n={n} after "
                    f"{max_refine} midpoint refinements; the time grid is too "
                    f"coarse for this order/coupling")
            tsr = _refine_midpoints(tsr)
            continue
        break
    step = 2 ** refinement
    even = even[::step]
    odd = odd[::step]
    det = det[::step]
    log_det = log_det[::step]

    lam0 = complex(init.offdiag)
    lam0c = lam0.conjugate()
    chi0 = init.upper_left
    b = rot * odd
    mix_plus = b - lam0c * even
    mix_minus = lam0 * b - chi0 * even
    ref_plus = even - lam0c * b
    ref_minus = lam0 * even - chi0 * b
    base = init.det_factor * np.exp(log_det.real)
    den = np.abs(ref_plus) ** 2 + np.abs(ref_minus) ** 2 + base
    chi = (np.abs(mix_plus) ** 2 + np.abs(mix_minus) ** 2 + base) / den
    lam = -(ref_plus * np.conj(mix_plus) + ref_minus * np.conj(mix_minus)) / den
    cap = chi - np.abs(lam) ** 2
    if not (np.all(den > 0.0) and np.all(cap > 0.0)):
        i = int(np.argmin(cap))
        raise DegeneracyError(
            f"positivity factor collapsed (value {float(cap[i]):.3e}) for "
            f"block n={n} at t={float(ts_arr[i])}")
    kappa = init.log_scale - 0.5 * log_det.real
    pref = np.exp(kappa - init.log_scale) / np.sqrt(cap * init.det_factor)
    nu_plus = pref * (mix_plus + np.conj(lam) * ref_plus)
    nu_minus = -pref * (mix_minus + np.conj(lam) * ref_minus)
    delta = 0.5 * log_det.imag
    eid = np.exp(1j * delta)
    amp_plus = eid * np.conj(nu_minus)
    amp_minus = -eid * np.conj(nu_plus)
    # for this matrix structure the off-diagonal of u^dagger u vanishes
    # identically, so unitarity reduces to the amplitude sum rule
    resid = np.abs(np.abs(amp_plus) ** 2 + np.abs(amp_minus) ** 2 - 1.0)
    i = int(np.argmax(resid))
    if float(resid[i]) > UNITARITY_TOL:
        raise ConsistencyError(
            f"unitarity residual {float(resid[i]):.3e} for block n={n} at "
            f"t={float(ts_arr[i])} exceeds {UNITARITY_TOL}")
    return BlockTrajectory(
        n=n, ts=ts_arr, even=even, odd=odd, det=det, log_det=log_det,
        log_scale=kappa, offdiag=lam, det_factor=cap, phase=delta,
        amp_plus=amp_plus, amp_minus=amp_minus, refinements=refinement)
