"""Pure-Python numerical core for the one-parameter Mittag-Leffler function.

Two evaluation routes are implemented:

* a Kahan-summed power series with per-term conditioning tracked into an
  honest relative error estimate, and
* Laplace inversion on an optimal parabolic contour (the construction of
  Garrappa, SIAM J. Numer. Anal. 53 (2015) 1350-1369), with residue
  corrections for singularities lying right of the chosen contour.

Every routine returns the value together with a computable error estimate;
the estimate is allowed to be infinite when the requested sum sits at or
below the double-precision round-off floor. Dispatch between the routes
lives in ml_eval / ml_eval_many.

This module is the reference implementation. ftjc._mlcore is a compiled
twin with identical semantics, selected at import time by ftjc._backend.
Internal gamma / log-gamma tables are cached per order alpha; the cache is
a pure memoization and does not change observable behavior.
"""

from __future__ import annotations

import cmath
import math

BACKEND = "pure"

EPS = 2.220446049250313e-16
LOG_EPS = math.log(EPS)  # about -36.0437

MAX_TERMS = 10000
MAX_NODES = 512
R_SWITCH = 5.0

METHOD_EXP = 0
METHOD_SERIES = 1
METHOD_CONTOUR = 2

_LANCZOS_G = 7.0
_LANCZOS_C = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)

# Stirling series coefficients B_{2n} / (2n (2n-1)) for ln Gamma
_STIRLING = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
)


def gamma_real(x: float) -> float:
    """Gamma function on the real line, Lanczos approximation (g=7, n=9).

    Raises ValueError at the poles (non-positive integers) and on nan.
    Relative accuracy is a few 1e-15 away from the poles.
    """
    if x != x:
        raise ValueError("gamma: nan argument")
    if x <= 0.0 and x == math.floor(x):
        raise ValueError(f"gamma: pole at non-positive integer {x}")
    if x < 0.5:
        # reflection
        return math.pi / (math.sin(math.pi * x) * gamma_real(1.0 - x))
    xx = x - 1.0
    acc = _LANCZOS_C[0]
    for i in range(1, 9):
        acc += _LANCZOS_C[i] / (xx + i)
    t = xx + _LANCZOS_G + 0.5
    return math.sqrt(2.0 * math.pi) * t ** (xx + 0.5) * math.exp(-t) * acc


def lgamma_pos(x: float) -> float:
    """ln Gamma(x) for x > 0, ~1e-15 relative (shift to x >= 13 + Stirling)."""
    if x < 13.0:
        shift = 0.0
        xx = x
        while xx < 13.0:
            shift += math.log(xx)
            xx += 1.0
        return lgamma_pos(xx) - shift
    inv = 1.0 / x
    inv2 = inv * inv
    corr = 0.0
    p = inv
    for c in _STIRLING:
        corr += c * p
        p *= inv2
    return (x - 0.5) * math.log(x) - x + 0.5 * math.log(2.0 * math.pi) + corr


# ---------------------------------------------------------------------------
# per-alpha tables of Gamma(alpha k + 1) and ln Gamma(alpha k + 1)

_TABLE_CACHE: dict[float, tuple[int, list[float], list[float]]] = {}
_TABLE_CACHE_MAX = 64


def _tables(alpha: float) -> tuple[int, list[float], list[float]]:
    """Return (nd, gtab, lgtab) for this alpha.

    gtab[k] = Gamma(alpha k + 1) for k = 0..nd, where nd is the largest k
    for which the Lanczos evaluation stays within double range (its power
    factor overflows near alpha*k + 1 ~ 142 even though Gamma itself stays
    finite up to ~171); lgtab[k] = ln Gamma(alpha k + 1) for k = 0..MAX_TERMS.
    Terms with k > nd take the log-domain route in ml_series.
    """
    tabs = _TABLE_CACHE.get(alpha)
    if tabs is None:
        nd = 0
        while nd < MAX_TERMS and alpha * (nd + 1) + 1.0 <= 170.0:
            nd += 1
        gtab = []
        for k in range(nd + 1):
            try:
                g = gamma_real(alpha * k + 1.0)
            except OverflowError:
                break
            if g == math.inf:
                # the Lanczos power factor can overflow to inf silently one
                # step before the power itself raises; an inf entry would
                # turn a huge-but-finite term into a silent zero
                break
            gtab.append(g)
        nd = len(gtab) - 1
        lgtab = [lgamma_pos(alpha * k + 1.0) for k in range(MAX_TERMS + 1)]
        if len(_TABLE_CACHE) >= _TABLE_CACHE_MAX:
            _TABLE_CACHE.pop(next(iter(_TABLE_CACHE)))
        _TABLE_CACHE[alpha] = tabs = (nd, gtab, lgtab)
    return tabs


def ml_series(alpha: float, z: complex, tol: float, max_terms: int = MAX_TERMS):
    """Power series sum_k z^k / Gamma(alpha k + 1) with Kahan summation.

    Returns (value, est_rel_err, n_terms). The estimate combines the last
    term, a cancellation floor scaled by the phase drift of the peak terms,
    and the worst per-term evaluation conditioning; it is math.inf when the
    sum sits at the round-off floor. Raises ArithmeticError if the series
    does not converge within max_terms or a term overflows.
    """
    if z == 0:
        return 1.0 + 0j, EPS, 1
    max_terms = min(max_terms, MAX_TERMS)
    nd, gtab, lgtab = _tables(alpha)
    use_direct = abs(z) <= 1e12  # iterative powers stay finite long enough
    s = 0.0 + 0j
    comp = 0.0 + 0j  # Kahan compensation
    zpow = 1.0 + 0j
    logz = cmath.log(z)
    tmax = 0.0
    k_peak = 0
    consec = 0
    k = 0
    last = 0.0
    m_cond = 0.0
    while k <= max_terms:
        if use_direct and k <= nd and abs(zpow) < 1e290:
            term = zpow / gtab[k]
            err_scale = 0.5 * k + 4.0
        else:
            lg = lgtab[k]
            w = k * logz - lg
            if w.real > 705.0:
                raise ArithmeticError("series term overflows double precision")
            term = cmath.exp(w)
            # the exponent is a difference of two large numbers; its absolute
            # rounding error scales with their magnitudes, not their difference
            err_scale = abs(k * logz.real) + abs(lg) + 4.0
        # Kahan step
        y = term - comp
        t = s + y
        comp = (t - s) - y
        s = t
        at = abs(term)
        last = at
        cond = at * err_scale
        if cond > m_cond:
            m_cond = cond
        if at > tmax:
            tmax = at
            k_peak = k
        if k > 0 and at < tol * abs(s):
            consec += 1
            if consec >= 3:
                k += 1
                break
        else:
            consec = 0
        k += 1
        if use_direct:
            zpow *= z
    else:
        raise ArithmeticError(f"series did not converge in {max_terms} terms")
    mag = abs(s)
    if mag == 0.0:
        return s, math.inf, k
    # cancellation penalty: the naive floor tmax/|s|*eps, scaled by the phase
    # drift of the peak terms (errors in k*arg(z) accumulate coherently) and
    # by the worst single-term evaluation conditioning
    drift = 1.0 + k_peak * abs(logz.imag)
    factor = 1.0 + 0.5 * math.sqrt(float(k)) * drift
    noise = EPS * tmax * factor
    if noise > 0.02 * mag:
        return s, math.inf, k  # sum is at (or below) the round-off floor
    # dominant terms inherit their own evaluation conditioning as a direct
    # relative floor (systematic, does not average out over the sum)
    est = 4.0 * last / mag + noise / mag + 2.0 * EPS * (m_cond / tmax)
    return s, est, k


def _opt_bounded(t, phi0, phi1, p, q, log_eps_target):
    """Contour parameters for a region bounded by singularities phi0 < phi1."""
    fac = 1.01
    f_max = math.exp(log_eps_target - LOG_EPS)
    sq0 = math.sqrt(phi0)
    threshold = 2.0 * math.sqrt((log_eps_target - LOG_EPS) / t)
    sq1 = min(math.sqrt(phi1), threshold - sq0)
    f_bar = 1.0
    adm = False
    sqb0 = sqb1 = 0.0
    if p < 1e-14 and q < 1e-14:
        sqb0, sqb1 = sq0, sq1
        adm = True
    elif p < 1e-14 <= q:
        sqb0 = sq0
        f_min = fac * (sq0 / (sq1 - sq0)) ** q if sq0 > 0 else fac
        if f_min < f_max:
            f_bar = f_min + (f_min / f_max) * (f_max - f_min)
            fq = f_bar ** (-1.0 / q)
            sqb1 = (2.0 * sq1 - fq * sq0) / (2.0 + fq)
            adm = True
    elif q < 1e-14 <= p:
        sqb1 = sq1
        f_min = fac * (sq1 / (sq1 - sq0)) ** p
        if f_min < f_max:
            f_bar = f_min + (f_min / f_max) * (f_max - f_min)
            fp = f_bar ** (-1.0 / p)
            sqb0 = (2.0 * sq0 + fp * sq1) / (2.0 - fp)
            adm = True
    else:
        f_min = fac * (sq0 + sq1) / (sq1 - sq0) ** max(p, q)
        if f_min < f_max:
            f_min = max(f_min, 1.5)
            f_bar = f_min + (f_min / f_max) * (f_max - f_min)
            fp = f_bar ** (-1.0 / p)
            fq = f_bar ** (-1.0 / q)
            w = -phi1 * t / log_eps_target
            den = 2.0 + w - (1.0 + w) * fp + fq
            sqb0 = ((2.0 + w + fq) * sq0 + fp * sq1) / den
            sqb1 = (-(1.0 + w) * fq * sq0 + (2.0 + w - (1.0 + w) * fp) * sq1) / den
            adm = True
    if not adm:
        return 0.0, 0.0, float("inf")
    le = log_eps_target - math.log(f_bar)
    w = -sqb1 * sqb1 * t / le
    mu = (((1.0 + w) * sqb0 + sqb1) / (2.0 + w)) ** 2
    h = -2.0 * math.pi / le * (sqb1 - sqb0) / ((1.0 + w) * sqb0 + sqb1)
    n = math.ceil(math.sqrt(1.0 - le / (t * mu)) / h)
    return mu, h, n


def _opt_unbounded(t, phi0, p, log_eps_target):
    """Contour parameters for the unbounded region right of the last singularity."""
    sq0 = math.sqrt(phi0)
    phibar = phi0 * 1.01 if phi0 > 0 else 0.01
    sqb = math.sqrt(phibar)
    f_min, f_max, f_tar = 1.0, 10.0, 5.0
    while True:
        phi_t = phibar * t
        le_t = log_eps_target / phi_t
        n = math.ceil(phi_t / math.pi * (1.0 - 1.5 * le_t + math.sqrt(1.0 - 2.0 * le_t)))
        a = math.pi * n / phi_t
        sq_mu = sqb * abs(4.0 - a) / abs(7.0 - math.sqrt(1.0 + 12.0 * a))
        fbar = ((sqb - sq0) / sq_mu) ** (-p) if p >= 1e-14 else 0.0
        if p < 1e-14 or (f_min < fbar < f_max):
            break
        sqb = f_tar ** (-1.0 / p) * sq_mu + sq0
        phibar = sqb * sqb
    mu = sq_mu * sq_mu
    h = (-3.0 * a - 2.0 + 2.0 * math.sqrt(1.0 + 12.0 * a)) / (4.0 - a) / n
    # keep exp(mu) amplification of round-off below the target
    threshold = (log_eps_target - LOG_EPS) / t
    if mu > threshold:
        q_ = 0.0 if p < 1e-14 else f_tar ** (-1.0 / p) * math.sqrt(mu)
        phibar = (q_ + math.sqrt(phi0)) ** 2
        if phibar < threshold:
            w = math.sqrt(LOG_EPS / (LOG_EPS - log_eps_target))
            u = math.sqrt(-phibar * t / LOG_EPS)
            mu = threshold
            n = math.ceil(w * log_eps_target / (2.0 * math.pi * (u * w - 1.0)))
            h = w / n
        else:
            n = float("inf")
            h = 0.0
    return mu, h, n


def ml_contour(alpha: float, z: complex, tol: float, max_nodes: int = MAX_NODES):
    """Laplace-inversion parabolic contour evaluation of the series.

    Returns (value, est_rel_err, nodes_used). Raises ArithmeticError when no
    contour within the node budget reaches the requested accuracy, and
    OverflowError when a residue exponent exceeds double-precision range.
    """
    t = 1.0
    theta = cmath.phase(z)
    az = abs(z)
    kmin = math.ceil(-alpha / 2.0 - theta / (2.0 * math.pi))
    kmax = math.floor(alpha / 2.0 - theta / (2.0 * math.pi))
    radius = az ** (1.0 / alpha)
    poles = []
    for k in range(kmin, kmax + 1):
        ang = (theta + 2.0 * math.pi * k) / alpha
        poles.append(radius * cmath.exp(1j * ang))
    phi = [(s.real + abs(s)) / 2.0 for s in poles]
    pairs = sorted(
        ((f, s) for f, s in zip(phi, poles) if f > 1e-15),
        key=lambda fs: (fs[0], fs[1].real, fs[1].imag),
    )
    phi_star = [0.0] + [f for f, _ in pairs]
    s_star = [0j] + [s for _, s in pairs]
    j1 = len(s_star)
    p = [0.0] + [1.0] * (j1 - 1)
    q = [1.0] * (j1 - 1) + [math.inf]
    phi_ext = phi_star + [math.inf]
    log_eps_target = math.log(max(tol, 1e-15))
    region_cap = (log_eps_target - LOG_EPS) / t
    admissible = [
        j for j in range(j1)
        if phi_ext[j] < region_cap and phi_ext[j] < phi_ext[j + 1]
    ]
    if not admissible:
        raise ArithmeticError("no admissible contour region")
    le = log_eps_target
    while True:
        best = None
        for j in admissible:
            if j < j1 - 1:
                mu, h, n = _opt_bounded(t, phi_ext[j], phi_ext[j + 1], p[j], q[j], le)
            else:
                mu, h, n = _opt_unbounded(t, phi_ext[j], p[j], le)
            if best is None or n < best[0]:
                best = (n, mu, h, j)
        if best[0] <= max_nodes:
            break
        le += math.log(10.0)
        if le > -5.0:
            raise ArithmeticError("contour quadrature cannot reach requested accuracy")
    n, mu, h, jopt = best
    n = int(n)
    acc = 0j
    for k in range(-n, n + 1):
        u = h * k
        s = mu * (1j * u + 1.0) ** 2
        ds = 2.0j * mu * (1j * u + 1.0)
        sa = s ** alpha
        acc += cmath.exp(s * t) * (sa / s) / (sa - z) * ds
    val = h * acc / (2.0j * math.pi)
    res_err = 0.0
    for srt in s_star[jopt + 1:]:
        if srt.real * t > 705.0:
            raise OverflowError(
                f"value overflows double precision (residue exponent {srt.real * t:.3g})"
            )
        r = cmath.exp(t * srt) / alpha
        val += r
        # exp(s*) inherits |s*|*eps relative error from its argument's ulp
        res_err += abs(r) * abs(srt) * EPS
    mag = abs(val)
    if mag == 0.0:
        return val, math.inf, n
    est = (math.exp(le) + 2.0 * res_err) / mag + 5.0 * EPS
    return val, est, n


def ml_eval(alpha: float, z: complex, tol: float):
    """Dispatch between the exp identity, series, and contour routes.

    Returns (value, est_rel_err, method_code) with method_code one of
    METHOD_EXP, METHOD_SERIES, METHOD_CONTOUR. The series route is tried
    inside |z| <= R_SWITCH at a tightened tolerance and its result is kept
    only if its honest estimate meets tol; otherwise the contour route
    runs. The contour targets absolute quadrature error, so when the
    value has magnitude below one the first pass is retried once with the
    target rescaled by the magnitude, converting tol into a relative
    bound. No tolerance enforcement happens here; callers compare est to
    tol.
    """
    if alpha == 1.0:
        return cmath.exp(z), 4.0 * EPS, METHOD_EXP
    if abs(z) <= R_SWITCH:
        try:
            val, est, _ = ml_series(alpha, z, min(tol / 4.0, 1e-8))
            if est <= tol:
                return val, est, METHOD_SERIES
        except ArithmeticError:
            pass
    val, est, _ = ml_contour(alpha, z, tol)
    if est > tol and est != math.inf:
        mag = abs(val)
        if 0.0 < mag < 1.0:
            tol2 = max(0.5 * tol * mag, 2e-15)
            try:
                val2, est2, _ = ml_contour(alpha, z, tol2)
            except (ArithmeticError, OverflowError):
                val2, est2 = val, est
            if est2 < est:
                val, est = val2, est2
    return val, est, METHOD_CONTOUR


def ml_eval_many(alpha: float, zs, tol: float):
    """Evaluate ml_eval over an iterable of points.

    Returns (values, ests, codes) as lists of equal length. Failures raise
    with the offending index in the message. The caller (ftjc.mittag) wraps
    the output in numpy arrays; this reference implementation keeps plain
    lists to stay dependency-free.
    """
    values = []
    ests = []
    codes = []
    for i, z in enumerate(zs):
        try:
            val, est, code = ml_eval(alpha, complex(z), tol)
        except (ArithmeticError, OverflowError) as exc:
            raise type(exc)(f"element {i} (z={complex(z)!r}): {exc}") from None
        values.append(val)
        ests.append(est)
        codes.append(code)
    return values, ests, codes
