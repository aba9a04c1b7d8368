"""Public interface to the Mittag-Leffler evaluator.

The function computed everywhere below is the one-parameter series
E_a(z) = sum_k z^k / Gamma(a k + 1), for order a in (0, 1] and complex z.
Two routes are available (power series, parabolic-contour Laplace
inversion) plus the closed form exp(z) at a = 1; ml_eval dispatches
between them and enforces the caller's tolerance against the honest
error estimate that every route returns.

The heavy lifting lives in the active backend (see ftjc._backend); this
module validates arguments, converts backend failures to the library's
exception types, and wraps results in MLResult.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._backend import backend_name, core
from .errors import DomainError, EvaluationError, InputError

__all__ = [
    "MLResult",
    "DEFAULT_TOL",
    "R_SWITCH",
    "backend_name",
    "gamma_real",
    "ml_series",
    "ml_contour",
    "ml_eval",
    "ml_eval_many",
]

DEFAULT_TOL = 1e-11
R_SWITCH = 5.0

_METHOD_NAMES = {
    core.METHOD_EXP: "exp_identity",
    core.METHOD_SERIES: "series",
    core.METHOD_CONTOUR: "contour",
}

METHOD_NAMES = dict(_METHOD_NAMES)


@dataclass(frozen=True)
class MLResult:
    """A function value with its honest relative error estimate.

    method is "series", "contour", or "exp_identity".
    """

    value: complex
    est_rel_err: float
    method: str


def _check_order(alpha: float) -> float:
    alpha = float(alpha)
    if not 0.0 < alpha <= 1.0 or alpha != alpha:
        raise InputError(f"order must lie in (0, 1], got {alpha}")
    return alpha


def _check_point(z: complex) -> complex:
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise InputError(f"argument must be finite, got {z}")
    return z


def _check_tol(tol: float) -> float:
    tol = float(tol)
    if not 1e-14 <= tol <= 1e-6:
        raise InputError(f"tolerance must lie in [1e-14, 1e-6], got {tol}")
    return tol


def gamma_real(x: float) -> float:
    """Gamma function on the real line.

    Raises DomainError at the poles (non-positive integers) and
    EvaluationError when the value overflows double precision.
    """
    x = float(x)
    try:
        val = core.gamma_real(x)
    except ValueError as exc:
        raise DomainError(str(exc)) from None
    except OverflowError:
        raise EvaluationError(
            f"gamma({x}) overflows double precision") from None
    if not math.isfinite(val):
        raise EvaluationError(f"gamma({x}) overflows double precision")
    return val


def ml_series(alpha: float, z: complex, tol: float = DEFAULT_TOL,
              max_terms: int = 10000) -> MLResult:
    """Direct power-series evaluation.

    The returned estimate is honest and may exceed tol (or be infinite at
    the round-off floor); callers that need tol enforced should use
    ml_eval. Raises EvaluationError if the series fails to converge or a
    term overflows.
    """
    alpha = _check_order(alpha)
    z = _check_point(z)
    tol = _check_tol(tol)
    try:
        val, est, _ = core.ml_series(alpha, z, tol, max_terms)
    except (ArithmeticError, OverflowError) as exc:
        raise EvaluationError(f"series evaluation failed: {exc}") from None
    return MLResult(val, est, "series")


def ml_contour(alpha: float, z: complex, tol: float = DEFAULT_TOL,
               max_nodes: int = 512) -> MLResult:
    """Parabolic-contour evaluation.

    Raises EvaluationError when no contour inside the node budget reaches
    the requested accuracy or the value overflows double precision.
    """
    alpha = _check_order(alpha)
    z = _check_point(z)
    tol = _check_tol(tol)
    try:
        val, est, _ = core.ml_contour(alpha, z, tol, max_nodes)
    except (ArithmeticError, OverflowError) as exc:
        raise EvaluationError(f"contour evaluation failed: {exc}") from None
    return MLResult(val, est, "contour")


def ml_eval(alpha: float, z: complex, tol: float = DEFAULT_TOL) -> MLResult:
    """Evaluate with automatic route dispatch and tolerance enforcement.

    Returns an MLResult whose est_rel_err is guaranteed <= tol; raises
    EvaluationError (carrying the best value and its estimate, when one
    exists) otherwise.
    """
    alpha = _check_order(alpha)
    z = _check_point(z)
    tol = _check_tol(tol)
    try:
        val, est, code = core.ml_eval(alpha, z, tol)
    except (ArithmeticError, OverflowError) as exc:
        raise EvaluationError(f"evaluation failed: {exc}") from None
    if est > tol:
        raise EvaluationError(
            f"achieved relative error estimate {est:.3e} exceeds tol {tol:.3e} "
            f"at alpha={alpha}, z={z}",
            value=val, est_rel_err=est)
    return MLResult(val, est, _METHOD_NAMES[code])


def ml_eval_many(alpha: float, zs, tol: float = DEFAULT_TOL):
    """Vectorized ml_eval over an array of points.

    Returns (values, ests, codes): complex128, float64, and uint8 arrays
    of the input shape. Codes map to method names via METHOD_NAMES.
    Raises EvaluationError (with the offending index) if any point fails
    or misses the tolerance.
    """
    alpha = _check_order(alpha)
    tol = _check_tol(tol)
    arr = np.asarray(zs, dtype=np.complex128)
    if not np.all(np.isfinite(arr)):
        raise InputError("arguments must be finite")
    flat = np.ascontiguousarray(arr.ravel())
    try:
        vals, ests, codes = core.ml_eval_many(alpha, flat, tol)
    except (ArithmeticError, OverflowError) as exc:
        raise EvaluationError(f"evaluation failed: {exc}") from None
    values = np.asarray(vals, dtype=np.complex128).reshape(arr.shape)
    est_arr = np.asarray(ests, dtype=np.float64).reshape(arr.shape)
    code_arr = np.asarray(codes, dtype=np.uint8).reshape(arr.shape)
    if est_arr.size and float(np.max(est_arr)) > tol:
        i = int(np.argmax(est_arr))
        raise EvaluationError(
            f"achieved relative error estimate {float(est_arr.ravel()[i]):.3e} "
            f"exceeds tol {tol:.3e} at flat index {i} (z={flat[i]})",
            value=complex(values.ravel()[i]),
            est_rel_err=float(est_arr.ravel()[i]))
    return values, est_arr, code_arr
