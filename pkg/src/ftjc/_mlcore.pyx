# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twin of ftjc._mlpure (same algorithms, typed loops).

This module transcribes the pure backend line for line; only the scalar
and complex arithmetic runs through C99 <complex.h> instead of CPython's
cmath, so results can differ from the pure backend by a few ulps in the
transcendental calls (exp, log, pow, atan2). The honest error estimates
absorb those differences; the backend equivalence tests compare against
the estimates rather than expecting bit identity.

One deliberate semantic difference: C pow() overflows to inf silently, so
gamma_real here returns inf where the pure backend may raise OverflowError.
The public wrapper in ftjc.mittag normalizes both to an error; the internal
gamma table build guards with isfinite either way.
"""

import numpy as np


cdef extern from "<complex.h>" nogil:
    double cabs "cabs"(double complex)
    double carg "carg"(double complex)
    double complex cexp "cexp"(double complex)
    double complex clog "clog"(double complex)
    double complex cpow "cpow"(double complex, double complex)

cdef extern from "<math.h>" nogil:
    bint c_isfinite "isfinite"(double)

from libc.math cimport (M_PI, INFINITY, ceil, exp, fabs, floor, fmax, fmin,
                        log, pow, sin, sqrt)


BACKEND = "compiled"

EPS = 2.220446049250313e-16
cdef double C_EPS = 2.220446049250313e-16
cdef double C_LOG_EPS = log(C_EPS)  # about -36.0437
LOG_EPS = C_LOG_EPS

MAX_TERMS = 10000
MAX_NODES = 512
R_SWITCH = 5.0
cdef int C_MAX_TERMS = 10000

METHOD_EXP = 0
METHOD_SERIES = 1
METHOD_CONTOUR = 2

cdef double LANCZOS_G = 7.0
cdef double[9] LANCZOS_C
LANCZOS_C[0] = 0.99999999999980993
LANCZOS_C[1] = 676.5203681218851
LANCZOS_C[2] = -1259.1392167224028
LANCZOS_C[3] = 771.32342877765313
LANCZOS_C[4] = -176.61502916214059
LANCZOS_C[5] = 12.507343278686905
LANCZOS_C[6] = -0.13857109526572012
LANCZOS_C[7] = 9.9843695780195716e-6
LANCZOS_C[8] = 1.5056327351493116e-7

# Stirling series coefficients B_{2n} / (2n (2n-1)) for ln Gamma
cdef double[7] STIRLING
STIRLING[0] = 1.0 / 12.0
STIRLING[1] = -1.0 / 360.0
STIRLING[2] = 1.0 / 1260.0
STIRLING[3] = -1.0 / 1680.0
STIRLING[4] = 1.0 / 1188.0
STIRLING[5] = -691.0 / 360360.0
STIRLING[6] = 1.0 / 156.0


cpdef double gamma_real(double x) except? -1.0:
    """Gamma function on the real line, Lanczos approximation (g=7, n=9).

    Raises ValueError at the poles (non-positive integers) and on nan.
    Overflows to inf for x beyond roughly 142 (see module docstring).
    """
    cdef double xx, acc, t
    cdef int i
    if x != x:
        raise ValueError("gamma: nan argument")
    if x <= 0.0 and x == floor(x):
        raise ValueError(f"gamma: pole at non-positive integer {x}")
    if x < 0.5:
        # reflection
        return M_PI / (sin(M_PI * x) * gamma_real(1.0 - x))
    xx = x - 1.0
    acc = LANCZOS_C[0]
    for i in range(1, 9):
        acc += LANCZOS_C[i] / (xx + i)
    t = xx + LANCZOS_G + 0.5
    return sqrt(2.0 * M_PI) * pow(t, xx + 0.5) * exp(-t) * acc


cpdef double lgamma_pos(double x):
    """ln Gamma(x) for x > 0, ~1e-15 relative (shift to x >= 13 + Stirling)."""
    cdef double shift, xx, inv, inv2, corr, p
    cdef int i
    if x < 13.0:
        shift = 0.0
        xx = x
        while xx < 13.0:
            shift += log(xx)
            xx += 1.0
        return lgamma_pos(xx) - shift
    inv = 1.0 / x
    inv2 = inv * inv
    corr = 0.0
    p = inv
    for i in range(7):
        corr += STIRLING[i] * p
        p *= inv2
    return (x - 0.5) * log(x) - x + 0.5 * log(2.0 * M_PI) + corr


# ---------------------------------------------------------------------------
# per-alpha tables of Gamma(alpha k + 1) and ln Gamma(alpha k + 1)

_TABLE_CACHE = {}
_TABLE_CACHE_MAX = 64


def _tables(double alpha):
    """Return (nd, gtab, lgtab) numpy tables for this alpha.

    Mirrors the pure backend: gtab stops at the last k whose Lanczos
    evaluation stays finite, lgtab covers k = 0..MAX_TERMS.
    """
    cdef int nd, k
    cdef double g
    tabs = _TABLE_CACHE.get(alpha)
    if tabs is None:
        nd = 0
        while nd < C_MAX_TERMS and alpha * (nd + 1) + 1.0 <= 170.0:
            nd += 1
        gbuf = np.empty(nd + 1, dtype=np.float64)
        k = 0
        while k <= nd:
            g = gamma_real(alpha * k + 1.0)
            if not c_isfinite(g):
                break
            gbuf[k] = g
            k += 1
        gtab = np.ascontiguousarray(gbuf[:k])
        nd = k - 1
        lbuf = np.empty(C_MAX_TERMS + 1, dtype=np.float64)
        for k in range(C_MAX_TERMS + 1):
            lbuf[k] = lgamma_pos(alpha * k + 1.0)
        if len(_TABLE_CACHE) >= _TABLE_CACHE_MAX:
            _TABLE_CACHE.pop(next(iter(_TABLE_CACHE)))
        _TABLE_CACHE[alpha] = tabs = (nd, gtab, lbuf)
    return tabs


def ml_series(double alpha, z, double tol, int max_terms=10000):
    """Power series sum_k z^k / Gamma(alpha k + 1) with Kahan summation.

    Returns (value, est_rel_err, n_terms); see the pure backend docstring.
    """
    cdef double complex zc = z
    cdef double complex s, comp, zpow, term, y, t, logz, w
    cdef double tmax, last, m_cond, at, cond, err_scale, mag, drift, factor, noise, est, lg
    cdef int k, k_peak, consec, nd_
    cdef bint use_direct, converged
    cdef double[::1] gv
    cdef double[::1] lgv
    if zc.real == 0.0 and zc.imag == 0.0:
        return 1.0 + 0j, EPS, 1
    if max_terms > C_MAX_TERMS:
        max_terms = C_MAX_TERMS
    nd, gtab, lgtab = _tables(alpha)
    nd_ = nd
    gv = gtab
    lgv = lgtab
    use_direct = cabs(zc) <= 1e12  # iterative powers stay finite long enough
    s = 0.0
    comp = 0.0  # Kahan compensation
    zpow = 1.0
    logz = clog(zc)
    tmax = 0.0
    k_peak = 0
    consec = 0
    k = 0
    last = 0.0
    m_cond = 0.0
    converged = False
    while k <= max_terms:
        if use_direct and k <= nd_ and cabs(zpow) < 1e290:
            term = zpow / gv[k]
            err_scale = 0.5 * k + 4.0
        else:
            lg = lgv[k]
            w = k * logz - lg
            if w.real > 705.0:
                raise ArithmeticError("series term overflows double precision")
            term = cexp(w)
            # the exponent is a difference of two large numbers; its absolute
            # rounding error scales with their magnitudes, not their difference
            err_scale = fabs(k * logz.real) + fabs(lg) + 4.0
        # Kahan step
        y = term - comp
        t = s + y
        comp = (t - s) - y
        s = t
        at = cabs(term)
        last = at
        cond = at * err_scale
        if cond > m_cond:
            m_cond = cond
        if at > tmax:
            tmax = at
            k_peak = k
        if k > 0 and at < tol * cabs(s):
            consec += 1
            if consec >= 3:
                k += 1
                converged = True
                break
        else:
            consec = 0
        k += 1
        if use_direct:
            zpow *= zc
    if not converged:
        raise ArithmeticError(f"series did not converge in {max_terms} terms")
    mag = cabs(s)
    if mag == 0.0:
        return complex(s), float("inf"), k
    # cancellation penalty: the naive floor tmax/|s|*eps, scaled by the phase
    # drift of the peak terms (errors in k*arg(z) accumulate coherently) and
    # by the worst single-term evaluation conditioning
    drift = 1.0 + k_peak * fabs(logz.imag)
    factor = 1.0 + 0.5 * sqrt(<double> k) * drift
    noise = C_EPS * tmax * factor
    if noise > 0.02 * mag:
        return complex(s), float("inf"), k  # sum is at (or below) the round-off floor
    # dominant terms inherit their own evaluation conditioning as a direct
    # relative floor (systematic, does not average out over the sum)
    est = 4.0 * last / mag + noise / mag + 2.0 * C_EPS * (m_cond / tmax)
    return complex(s), est, k


cdef int _opt_bounded(double t, double phi0, double phi1, double p, double q,
                      double log_eps_target, double* out_mu, double* out_h,
                      double* out_n):
    """Contour parameters for a region bounded by singularities phi0 < phi1."""
    cdef double fac = 1.01
    cdef double f_max = exp(log_eps_target - C_LOG_EPS)
    cdef double sq0 = sqrt(phi0)
    cdef double threshold = 2.0 * sqrt((log_eps_target - C_LOG_EPS) / t)
    cdef double sq1 = fmin(sqrt(phi1), threshold - sq0)
    cdef double f_bar = 1.0
    cdef bint adm = False
    cdef double sqb0 = 0.0
    cdef double sqb1 = 0.0
    cdef double f_min, fq, fp, w, den, le, mu, h
    if p < 1e-14 and q < 1e-14:
        sqb0 = sq0
        sqb1 = sq1
        adm = True
    elif p < 1e-14 and q >= 1e-14:
        sqb0 = sq0
        f_min = fac * pow(sq0 / (sq1 - sq0), q) if sq0 > 0 else fac
        if f_min < f_max:
            f_bar = f_min + (f_min / f_max) * (f_max - f_min)
            fq = pow(f_bar, -1.0 / q)
            sqb1 = (2.0 * sq1 - fq * sq0) / (2.0 + fq)
            adm = True
    elif q < 1e-14 and p >= 1e-14:
        sqb1 = sq1
        f_min = fac * pow(sq1 / (sq1 - sq0), p)
        if f_min < f_max:
            f_bar = f_min + (f_min / f_max) * (f_max - f_min)
            fp = pow(f_bar, -1.0 / p)
            sqb0 = (2.0 * sq0 + fp * sq1) / (2.0 - fp)
            adm = True
    else:
        f_min = fac * (sq0 + sq1) / pow(sq1 - sq0, fmax(p, q))
        if f_min < f_max:
            f_min = fmax(f_min, 1.5)
            f_bar = f_min + (f_min / f_max) * (f_max - f_min)
            fp = pow(f_bar, -1.0 / p)
            fq = pow(f_bar, -1.0 / q)
            w = -phi1 * t / log_eps_target
            den = 2.0 + w - (1.0 + w) * fp + fq
            sqb0 = ((2.0 + w + fq) * sq0 + fp * sq1) / den
            sqb1 = (-(1.0 + w) * fq * sq0 + (2.0 + w - (1.0 + w) * fp) * sq1) / den
            adm = True
    if not adm:
        out_mu[0] = 0.0
        out_h[0] = 0.0
        out_n[0] = INFINITY
        return 0
    le = log_eps_target - log(f_bar)
    w = -sqb1 * sqb1 * t / le
    mu = ((1.0 + w) * sqb0 + sqb1) / (2.0 + w)
    mu = mu * mu
    h = -2.0 * M_PI / le * (sqb1 - sqb0) / ((1.0 + w) * sqb0 + sqb1)
    out_mu[0] = mu
    out_h[0] = h
    out_n[0] = ceil(sqrt(1.0 - le / (t * mu)) / h)
    return 0


cdef int _opt_unbounded(double t, double phi0, double p, double log_eps_target,
                        double* out_mu, double* out_h, double* out_n):
    """Contour parameters for the unbounded region right of the last singularity."""
    cdef double sq0 = sqrt(phi0)
    cdef double phibar = phi0 * 1.01 if phi0 > 0 else 0.01
    cdef double sqb = sqrt(phibar)
    cdef double f_min = 1.0
    cdef double f_max = 10.0
    cdef double f_tar = 5.0
    cdef double phi_t, le_t, n, a, sq_mu, fbar, mu, h, threshold, q_, w, u
    while True:
        phi_t = phibar * t
        le_t = log_eps_target / phi_t
        n = ceil(phi_t / M_PI * (1.0 - 1.5 * le_t + sqrt(1.0 - 2.0 * le_t)))
        a = M_PI * n / phi_t
        sq_mu = sqb * fabs(4.0 - a) / fabs(7.0 - sqrt(1.0 + 12.0 * a))
        fbar = pow((sqb - sq0) / sq_mu, -p) if p >= 1e-14 else 0.0
        if p < 1e-14 or (f_min < fbar and fbar < f_max):
            break
        sqb = pow(f_tar, -1.0 / p) * sq_mu + sq0
        phibar = sqb * sqb
    mu = sq_mu * sq_mu
    h = (-3.0 * a - 2.0 + 2.0 * sqrt(1.0 + 12.0 * a)) / (4.0 - a) / n
    # keep exp(mu) amplification of round-off below the target
    threshold = (log_eps_target - C_LOG_EPS) / t
    if mu > threshold:
        q_ = 0.0 if p < 1e-14 else pow(f_tar, -1.0 / p) * sqrt(mu)
        phibar = (q_ + sqrt(phi0)) ** 2
        if phibar < threshold:
            w = sqrt(C_LOG_EPS / (C_LOG_EPS - log_eps_target))
            u = sqrt(-phibar * t / C_LOG_EPS)
            mu = threshold
            n = ceil(w * log_eps_target / (2.0 * M_PI * (u * w - 1.0)))
            h = w / n
        else:
            n = INFINITY
            h = 0.0
    out_mu[0] = mu
    out_h[0] = h
    out_n[0] = n
    return 0


def ml_contour(double alpha, z, double tol, int max_nodes=512):
    """Laplace-inversion parabolic contour evaluation of the series.

    Returns (value, est_rel_err, nodes_used); see the pure backend docstring.
    """
    cdef double complex zc = z
    cdef double t = 1.0
    cdef double theta = carg(zc)
    cdef double az = cabs(zc)
    cdef int kmin = <int> ceil(-alpha / 2.0 - theta / (2.0 * M_PI))
    cdef int kmax = <int> floor(alpha / 2.0 - theta / (2.0 * M_PI))
    cdef double radius = pow(az, 1.0 / alpha)
    cdef double complex[8] poles
    cdef double[8] phi
    cdef int npoles = 0
    cdef int k, i, j
    cdef double ang, f
    cdef double complex sp, tmpc
    for k in range(kmin, kmax + 1):
        ang = (theta + 2.0 * M_PI * k) / alpha
        sp = radius * cexp(1j * ang)
        poles[npoles] = sp
        phi[npoles] = (sp.real + cabs(sp)) / 2.0
        npoles += 1
        if npoles == 8:
            break
    # filter phi > 1e-15, then insertion sort by (phi, real, imag)
    cdef double complex[9] s_star
    cdef double[10] phi_ext
    cdef int j1 = 1
    s_star[0] = 0.0
    phi_ext[0] = 0.0
    for i in range(npoles):
        if phi[i] > 1e-15:
            s_star[j1] = poles[i]
            phi_ext[j1] = phi[i]
            j1 += 1
    for i in range(2, j1):
        f = phi_ext[i]
        sp = s_star[i]
        j = i - 1
        while j >= 1 and (phi_ext[j] > f or (phi_ext[j] == f and
                          (s_star[j].real > sp.real or (s_star[j].real == sp.real and
                           s_star[j].imag > sp.imag)))):
            phi_ext[j + 1] = phi_ext[j]
            s_star[j + 1] = s_star[j]
            j -= 1
        phi_ext[j + 1] = f
        s_star[j + 1] = sp
    phi_ext[j1] = INFINITY
    cdef double log_eps_target = log(fmax(tol, 1e-15))
    cdef double region_cap = (log_eps_target - C_LOG_EPS) / t
    cdef bint[9] admissible
    cdef bint any_adm = False
    for j in range(j1):
        admissible[j] = phi_ext[j] < region_cap and phi_ext[j] < phi_ext[j + 1]
        if admissible[j]:
            any_adm = True
    if not any_adm:
        raise ArithmeticError("no admissible contour region")
    cdef double le = log_eps_target
    cdef double best_n, best_mu, best_h, mu, h, n
    cdef int jopt = 0
    cdef double pj, qj
    while True:
        best_n = INFINITY
        best_mu = 0.0
        best_h = 0.0
        jopt = -1
        for j in range(j1):
            if not admissible[j]:
                continue
            pj = 0.0 if j == 0 else 1.0
            if j < j1 - 1:
                qj = 1.0
                _opt_bounded(t, phi_ext[j], phi_ext[j + 1], pj, qj, le, &mu, &h, &n)
            else:
                _opt_unbounded(t, phi_ext[j], pj, le, &mu, &h, &n)
            if jopt < 0 or n < best_n:
                best_n = n
                best_mu = mu
                best_h = h
                jopt = j
        if best_n <= max_nodes:
            break
        le += log(10.0)
        if le > -5.0:
            raise ArithmeticError("contour quadrature cannot reach requested accuracy")
    cdef int nn = <int> best_n
    mu = best_mu
    h = best_h
    cdef double complex acc = 0.0
    cdef double complex s, ds, sa, w1
    cdef double u
    for k in range(-nn, nn + 1):
        u = h * k
        w1 = 1.0 + 1j * u
        s = mu * (w1 * w1)
        ds = 2.0j * mu * w1
        sa = cpow(s, alpha)
        acc += cexp(s * t) * (sa / s) / (sa - zc) * ds
    cdef double complex val = h * acc / (2.0j * M_PI)
    cdef double res_err = 0.0
    cdef double complex r
    for i in range(jopt + 1, j1):
        sp = s_star[i]
        if sp.real * t > 705.0:
            raise OverflowError(
                f"value overflows double precision (residue exponent {sp.real * t:.3g})"
            )
        r = cexp(t * sp) / alpha
        val += r
        # exp(s*) inherits |s*|*eps relative error from its argument's ulp
        res_err += cabs(r) * cabs(sp) * C_EPS
    cdef double mag = cabs(val)
    if mag == 0.0:
        return complex(val), float("inf"), nn
    cdef double est = (exp(le) + 2.0 * res_err) / mag + 5.0 * C_EPS
    return complex(val), est, nn


def ml_eval(double alpha, z, double tol):
    """Dispatch between the exp identity, series, and contour routes.

    Returns (value, est_rel_err, method_code); see the pure backend,
    including the magnitude-rescaled contour retry that converts the
    quadrature's absolute target into a relative bound.
    """
    cdef double complex zc = z
    cdef double mag, tol2
    if alpha == 1.0:
        return complex(cexp(zc)), 4.0 * EPS, METHOD_EXP
    if cabs(zc) <= 5.0:
        try:
            val, est, _ = ml_series(alpha, z, fmin(tol / 4.0, 1e-8))
            if est <= tol:
                return val, est, METHOD_SERIES
        except ArithmeticError:
            pass
    val, est, _ = ml_contour(alpha, z, tol)
    if est > tol and est != INFINITY:
        mag = abs(val)
        if 0.0 < mag and mag < 1.0:
            tol2 = fmax(0.5 * tol * mag, 2e-15)
            try:
                val2, est2, _ = ml_contour(alpha, z, tol2)
            except (ArithmeticError, OverflowError):
                val2, est2 = val, est
            if est2 < est:
                val, est = val2, est2
    return val, est, METHOD_CONTOUR


def ml_eval_many(double alpha, zs, double tol):
    """Evaluate ml_eval over an array of points.

    Returns (values, ests, codes) numpy arrays. Failures raise with the
    offending index in the message.
    """
    cdef double complex[::1] zv = np.ascontiguousarray(zs, dtype=np.complex128)
    cdef Py_ssize_t m = zv.shape[0]
    values = np.empty(m, dtype=np.complex128)
    ests = np.empty(m, dtype=np.float64)
    codes = np.empty(m, dtype=np.uint8)
    cdef double complex[::1] vv = values
    cdef double[::1] ev = ests
    cdef unsigned char[::1] cv = codes
    cdef Py_ssize_t i
    for i in range(m):
        try:
            val, est, code = ml_eval(alpha, complex(zv[i]), tol)
        except (ArithmeticError, OverflowError) as exc:
            raise type(exc)(f"element {i} (z={complex(zv[i])!r}): {exc}") from None
        vv[i] = val
        ev[i] = est
        cv[i] = code
    return values, ests, codes
