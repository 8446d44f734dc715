"""Two-parameter Mittag-Leffler function on and near the rays arg z = -pi*beta/2.

E_{a,g}(z) = sum_{n>=0} z^n / Gamma(a*n + g)

is the time kernel of the fractional evolution this package simulates; the
propagator only ever evaluates it along the downward rays arg z = -pi*beta/2
with beta in (0, 1].  Three evaluation routes are combined:

* Taylor series, in plain doubles for small |z| and in compensated
  double-double arithmetic once cancellation would eat too many digits
  (the largest series term grows like exp(|z|^(1/a)) while the value on an
  algebraic ray is only O(1/|z|)),
* the algebraic expansion  -sum_{k>=1} z^{-k} / Gamma(g - a*k)  outside the
  exponential sector,
* the exponential expansion  (1/a) z^{(1-g)/a} exp(z^{1/a}) + algebraic tail
  inside it.

The crossover radius between series and expansions was calibrated once
against the extended-precision oracle ``ml_oracle`` and frozen below.
All functions accept scalars or numpy arrays of ``z`` and are pure.
"""

import cmath
import math
from contextlib import contextmanager
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import mpmath as mp
import numpy as np
from scipy.special import gammaln, rgamma

try:
    import gmpy2

    _HAVE_GMPY2 = True
except ImportError:  # pragma: no cover - gmpy2 ships with the environment
    gmpy2 = None
    _HAVE_GMPY2 = False

from .ddouble import (
    cdd_add,
    cdd_mul_dd,
    cdd_mul_z,
    cdd_to_complex,
    cdd_zeros,
)
from .errors import (
    GammaPoleError,
    MLConvergenceError,
    MLOverflowError,
    PrecisionBudgetError,
)

__all__ = [
    "MLParams",
    "SectorInfo",
    "SectorRegime",
    "crossover_radius",
    "crossover_override",
    "gamma_fn",
    "i_pow",
    "minus_i_pow",
    "ml_asymptotic_algebraic",
    "ml_asymptotic_exponential",
    "ml_derivative",
    "ml_eval",
    "ml_oracle",
    "ml_series",
    "sector_info",
]

# ---------------------------------------------------------------------------
# parameters and sector bookkeeping


@dataclass(frozen=True)
class MLParams:
    """Parameter pair (alpha, gamma) of E_{alpha,gamma}."""

    alpha: float
    gamma: float = 1.0

    def __post_init__(self):
        if not 0.0 < self.alpha <= 1.0:
            raise ValueError("alpha must lie in (0,1]")


class SectorRegime(Enum):
    ALGEBRAIC = "algebraic"
    EXPONENTIAL = "exponential"


@dataclass(frozen=True)
class SectorInfo:
    """Ray data for kappa = rho^2 t^alpha exp(-i pi beta/2).

    ``mu`` is the sector half-angle separating the two expansions; it is kept
    for documentation and branch selection only, never used in arithmetic.
    """

    arg_kappa: float
    regime: SectorRegime
    mu: float


def sector_info(alpha: float, beta: float) -> SectorInfo:
    """Classify the evaluation ray of the propagator for indices (alpha, beta).

    The algebraic regime applies iff pi*beta/2 > pi*alpha/2, i.e. alpha < beta;
    otherwise the ray lies inside the exponential sector.
    """
    if not 0.0 < alpha <= 1.0:
        raise ValueError("alpha must lie in (0,1]")
    if not 0.0 < beta <= 1.0:
        raise ValueError("beta must lie in (0,1]")
    if alpha < beta:
        lo, hi = math.pi * alpha / 2.0, min(math.pi * alpha, math.pi * beta / 2.0)
        regime = SectorRegime.ALGEBRAIC
    else:
        lo, hi = math.pi * alpha / 2.0, math.pi * alpha
        regime = SectorRegime.EXPONENTIAL
    return SectorInfo(arg_kappa=-math.pi * beta / 2.0, regime=regime, mu=0.5 * (lo + hi))


def i_pow(beta: float) -> complex:
    """i**beta on the principal branch: exp(+i pi beta/2)."""
    return cmath.exp(1j * math.pi * beta / 2.0)


def minus_i_pow(beta: float) -> complex:
    """(-i)**beta on the principal branch: exp(-i pi beta/2).

    Satisfies i_pow(beta) * minus_i_pow(beta) == 1 for every beta.
    """
    return cmath.exp(-1j * math.pi * beta / 2.0)


def _unpack_params(p):
    """Accept MLParams or a bare (alpha, gamma) pair.

    The bare-pair form skips the (0,1] bound so the extended-precision oracle
    can cross-check identities such as E_{2,1}(z^2) = cosh z.
    """
    if isinstance(p, MLParams):
        return p.alpha, p.gamma
    alpha, gamma = float(p[0]), float(p[1])
    if alpha <= 0.0:
        raise ValueError("alpha must be positive")
    return alpha, gamma


# ---------------------------------------------------------------------------
# gamma function

_LANCZOS_G = 7.0
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-06,
    1.5056327351493116e-07,
)


def is_gamma_pole(x: float, tol: float = 1e-12) -> bool:
    """True when x sits (numerically) on a non-positive integer."""
    return x <= 0.5 and abs(x - round(x)) < tol * max(1.0, abs(x))


def gamma_fn(x: float) -> float:
    """Gamma(x) for real x, accurate to at least 12 significant digits.

    Negative arguments go through the reflection formula
    Gamma(x) Gamma(1-x) = pi / sin(pi x).

    Raises GammaPoleError at non-positive integers.
    """
    x = float(x)
    if is_gamma_pole(x):
        raise GammaPoleError(f"gamma pole at x={x}")
    if x < 0.5:
        return math.pi / (math.sin(math.pi * x) * gamma_fn(1.0 - x))
    y = x - 1.0
    acc = _LANCZOS[0]
    for i in range(1, len(_LANCZOS)):
        acc += _LANCZOS[i] / (y + i)
    t = y + _LANCZOS_G + 0.5
    return math.sqrt(2.0 * math.pi) * t ** (y + 0.5) * math.exp(-t) * acc


# ---------------------------------------------------------------------------
# dispatcher radii
#
# The Taylor series loses roughly |z|^(1/alpha) * log10(e) digits to
# cancellation on the algebraic rays.  26^alpha keeps that loss under ~12
# digits, which double-double absorbs with a wide margin; the expansions
# reach relative ~1e-10 from 26^alpha outward (smallest-term truncation error
# is of the order exp(-|z|^(1/alpha)) = exp(-26) at the boundary, against a
# value no smaller than ~1/(|z| Gamma(1-alpha))).  Tuned against ml_oracle on
# the beta-grid {0.2, 0.5, 0.8, 1.0} and frozen.

_CROSSOVER_BASE = 26.0
_DD_BASE = 12.0
_EXP_SECTOR_FRACTION = 0.9
_ASYM_MAX_TERMS = 600

_crossover_override = None


def crossover_radius(alpha: float) -> float:
    """Series/asymptotics switch radius R(alpha)."""
    if _crossover_override is not None:
        return float(_crossover_override)
    return _CROSSOVER_BASE**alpha


@contextmanager
def crossover_override(value):
    """Temporarily force the crossover radius (fault injection for selftest)."""
    global _crossover_override
    old = _crossover_override
    _crossover_override = value
    try:
        yield
    finally:
        _crossover_override = old


def _dd_threshold(alpha: float) -> float:
    # plain doubles keep ~9 good digits up to this radius on the worst ray
    return min(_DD_BASE**alpha, crossover_radius(alpha))


# ---------------------------------------------------------------------------
# Taylor series

_SERIES_TOL = 3e-16
_SERIES_MAX_TERMS = 2000

_DD_COEFF_CACHE: dict = {}


def _inv_gamma_dd_table(alpha: float, gamma: float, n_needed: int):
    """Double-double table of 1/Gamma(alpha*n + gamma); zeros at poles."""
    key = (alpha, gamma)
    tab = _DD_COEFF_CACHE.get(key)
    if tab is None:
        tab = []
        _DD_COEFF_CACHE[key] = tab
    if len(tab) <= n_needed:
        with mp.workdps(50):
            a = mp.mpf(alpha)
            g = mp.mpf(gamma)
            for n in range(len(tab), n_needed + 64):
                x = a * n + g
                if x <= 0.5 and mp.almosteq(x, mp.nint(x), abs_eps=mp.mpf("1e-30")):
                    tab.append((0.0, 0.0))
                    continue
                v = 1 / mp.gamma(x)
                hi = float(v)
                tab.append((hi, float(v - hi)))
    return tab


def _term_ratio(alpha, gamma, n, absz):
    """Exact magnitude ratio |t_{n+1}| / |t_n| of series terms past any pole."""
    x = alpha * n + gamma
    return absz * np.exp(gammaln(x) - gammaln(x + alpha))


def _series_plain(alpha, gamma, z, tol, max_terms):
    absz = np.abs(z)
    power = np.ones_like(z)
    total = power * float(rgamma(gamma))
    done = np.zeros(z.shape, dtype=bool)
    n = 0
    while True:
        n += 1
        if n > max_terms:
            raise MLConvergenceError(
                f"series for alpha={alpha}, gamma={gamma} did not converge within "
                f"{max_terms} terms (worst |z|={absz.max():.3g})"
            )
        power = power * z
        term = power * float(rgamma(alpha * n + gamma))
        total = total + term
        if alpha * n + gamma > 1.0:
            r = _term_ratio(alpha, gamma, n, absz)
            tail = np.abs(term) * np.where(r < 0.9, r / (1.0 - np.minimum(r, 0.9)), np.inf)
            done = (r < 0.9) & (tail <= tol * np.abs(total) + 1e-305)
            if done.all():
                return total


def _series_dd(alpha, gamma, z, tol, max_terms):
    absz = np.abs(z)
    zr = np.ascontiguousarray(z.real)
    zi = np.ascontiguousarray(z.imag)
    tab = _inv_gamma_dd_table(alpha, gamma, 64)
    power = cdd_zeros(z.shape)
    power[0][:] = 1.0
    c0h, c0l = tab[0]
    acc = cdd_mul_dd(*power, c0h, c0l)
    n = 0
    while True:
        n += 1
        if n > max_terms:
            raise MLConvergenceError(
                f"compensated series for alpha={alpha}, gamma={gamma} did not "
                f"converge within {max_terms} terms (worst |z|={absz.max():.3g})"
            )
        if n >= len(tab):
            tab = _inv_gamma_dd_table(alpha, gamma, n)
        power = cdd_mul_z(*power, zr, zi)
        ch, cl = tab[n]
        if ch != 0.0 or cl != 0.0:
            term = cdd_mul_dd(*power, ch, cl)
            acc = cdd_add(acc, term)
            tmag = np.hypot(term[0], term[2])
        else:
            tmag = np.zeros(z.shape)
        if alpha * n + gamma > 1.0:
            r = _term_ratio(alpha, gamma, n, absz)
            amag = np.hypot(acc[0], acc[2])
            tail = tmag * np.where(r < 0.9, r / (1.0 - np.minimum(r, 0.9)), np.inf)
            if ((r < 0.9) & (tail <= tol * amag + 1e-305)).all():
                return cdd_to_complex(*acc)


def ml_series(p, z, tol: float = _SERIES_TOL, max_terms: int = _SERIES_MAX_TERMS,
              compensated=None):
    """Partial Taylor sum of E_{alpha,gamma}(z) with a geometric tail bound.

    Terms are added until the bound |t_{n+1}|/(1-r) on the remaining tail
    (r = magnitude ratio of successive terms) drops below ``tol`` times the
    partial sum.  ``compensated`` switches the accumulator to double-double
    arithmetic; by default it is enabled wherever cancellation would leave
    plain doubles with fewer than ~9 good digits.

    Accuracy degrades by cancellation for |z| beyond the dispatcher crossover;
    use ml_eval there.
    """
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    alpha, gamma = _unpack_params(p)
    zarr = np.asarray(z, dtype=complex)
    scalar = zarr.ndim == 0
    flat = np.atleast_1d(zarr).ravel()
    out = np.empty(flat.shape, dtype=complex)
    if compensated is None:
        use_dd = np.abs(flat) > _dd_threshold(alpha)
    else:
        use_dd = np.full(flat.shape, bool(compensated))
    if (~use_dd).any():
        out[~use_dd] = _series_plain(alpha, gamma, flat[~use_dd], tol, max_terms)
    if use_dd.any():
        out[use_dd] = _series_dd(alpha, gamma, flat[use_dd], min(tol, 1e-20), max_terms)
    return out[0] if scalar else out.reshape(zarr.shape)


# ---------------------------------------------------------------------------
# asymptotic expansions


def _tail_envelope(alpha, gamma, k, absz):
    """Smooth magnitude envelope of the k-th algebraic term.

    |1/Gamma(gamma - alpha k)| = Gamma(alpha k + 1 - gamma) |sin(pi ...)| / pi
    by reflection, so the envelope drops the |sin| factor (<= 1).
    """
    return np.exp(-k * np.log(absz) + gammaln(alpha * k + 1.0 - gamma)) / math.pi


def _algebraic_tail(alpha, gamma, z, n_terms):
    """-sum_k z^{-k}/Gamma(gamma - alpha k), truncated at the envelope minimum.

    Returns (value, per-lane absolute error estimate).  ``n_terms=None``
    iterates until terms fall below the floating-point floor of the sum.
    Lanes that have settled are compacted away so that large mixed-radius
    arrays do not pay for the few lanes near the crossover.
    """
    if alpha == 1.0 and float(gamma).is_integer():
        # every coefficient 1/Gamma(gamma - k) with k >= gamma sits on a pole
        # and the finitely many others vanish for gamma <= 1; for integer
        # gamma > 1 the sum is the exact finite polynomial handled below.
        if gamma >= 2.0:
            kk = np.arange(1.0, gamma)
            acc = sum(z ** (-k) * float(rgamma(gamma - k)) for k in kk)
            return -np.asarray(acc, dtype=complex), np.zeros(z.shape)
        return np.zeros(z.shape, dtype=complex), np.zeros(z.shape)
    full_acc = np.zeros(z.shape, dtype=complex)
    full_err = np.zeros(z.shape)
    idx = np.arange(z.size)
    zs = z.copy()
    absz = np.abs(zs)
    zinv = 1.0 / zs
    # envelope minimum: alpha*k + 1 - gamma ~ |z|^(1/alpha)
    kstar = np.maximum(1.0, np.floor((absz ** (1.0 / alpha) - 1.0 + gamma) / alpha))
    cap = np.minimum(kstar, float(n_terms if n_terms is not None else _ASYM_MAX_TERMS))
    acc = np.zeros(zs.shape, dtype=complex)
    power = np.ones_like(zs)
    k = 0
    while idx.size:
        k += 1
        power = power * zinv
        coeff = float(rgamma(gamma - alpha * k))
        if coeff != 0.0:
            acc = acc + power * coeff
        env_next = _tail_envelope(alpha, gamma, k + 1, absz)
        stop = k >= cap
        if n_terms is None:
            stop |= env_next <= np.maximum(1e-17 * np.abs(acc), 1e-300)
        if stop.any():
            full_acc[idx[stop]] = acc[stop]
            full_err[idx[stop]] = env_next[stop]
            keep = ~stop
            idx = idx[keep]
            acc = acc[keep]
            power = power[keep]
            zinv = zinv[keep]
            absz = absz[keep]
            cap = cap[keep]
    return -full_acc, full_err


def ml_asymptotic_algebraic(p, z, n_terms: int = 6):
    """Algebraic large-|z| expansion  -sum_{k=1}^{n_terms} z^{-k}/Gamma(gamma - alpha k).

    Valid outside the exponential sector (|arg z| above the sector parameter
    mu).  Terms whose Gamma argument hits a pole are exactly zero and are
    skipped; the divergent series is additionally truncated at its
    smallest-magnitude term.
    """
    alpha, gamma = _unpack_params(p)
    zarr = np.asarray(z, dtype=complex)
    scalar = zarr.ndim == 0
    value, _ = _algebraic_tail(alpha, gamma, np.atleast_1d(zarr).ravel(), n_terms)
    return value[0] if scalar else value.reshape(zarr.shape)


def _exponential_part(alpha, gamma, z):
    w = z ** (1.0 / alpha)
    logmag = w.real + (1.0 - gamma) / alpha * np.log(np.abs(z)) - math.log(alpha)
    if np.any(logmag > 705.0):
        raise MLOverflowError(
            "exponential asymptotic term exceeds double range "
            f"(max exponent {float(np.max(logmag)):.1f})"
        )
    if gamma == 1.0:
        pref = 1.0
    else:
        pref = z ** ((1.0 - gamma) / alpha)
    return pref * np.exp(w) / alpha


def ml_asymptotic_exponential(p, z, n_terms: int = 6):
    """Exponential-sector expansion (1/alpha) z^{(1-gamma)/alpha} e^{z^{1/alpha}} + tail.

    The tail is the same algebraic sum as ml_asymptotic_algebraic.  Raises
    MLOverflowError when the leading term exceeds the double exponent budget;
    overflow is reported, never saturated.
    """
    alpha, gamma = _unpack_params(p)
    zarr = np.asarray(z, dtype=complex)
    scalar = zarr.ndim == 0
    flat = np.atleast_1d(zarr).ravel()
    tail, _ = _algebraic_tail(alpha, gamma, flat, n_terms)
    value = tail + _exponential_part(alpha, gamma, flat)
    return value[0] if scalar else value.reshape(zarr.shape)


# ---------------------------------------------------------------------------
# dispatcher


def ml_eval(p, z):
    """E_{alpha,gamma}(z) with automatic series/asymptotics dispatch.

    Series below the crossover radius R(alpha) (double-double accumulation in
    the cancellation zone), sector-appropriate expansion beyond it.  Relative
    accuracy target is 1e-8 on the rays arg z = -pi*beta/2, beta in (0,1];
    other directions are supported but not accuracy-guaranteed.
    """
    alpha, gamma = _unpack_params(p)
    if alpha > 1.0:
        raise ValueError("ml_eval requires alpha in (0,1]; use ml_oracle beyond")
    zarr = np.asarray(z, dtype=complex)
    scalar = zarr.ndim == 0
    flat = np.atleast_1d(zarr).ravel()
    out = np.empty(flat.shape, dtype=complex)
    absz = np.abs(flat)
    radius = crossover_radius(alpha)
    small = absz <= radius
    if small.any():
        out[small] = ml_series((alpha, gamma), flat[small])
    large = ~small
    if large.any():
        zl = flat[large]
        value, _ = _algebraic_tail(alpha, gamma, zl, None)
        in_exp = np.abs(np.angle(zl)) <= _EXP_SECTOR_FRACTION * math.pi * alpha
        if in_exp.any():
            value[in_exp] += _exponential_part(alpha, gamma, zl[in_exp])
        out[large] = value
    return out[0] if scalar else out.reshape(zarr.shape)


def ml_derivative(alpha: float, z):
    """d/dz E_{alpha,1}(z) via the identity  E'_{alpha,1} = E_{alpha,alpha}/alpha."""
    return ml_eval((alpha, alpha), z) / alpha


# ---------------------------------------------------------------------------
# extended-precision oracle

_ORACLE_MAX_ABS_Z = 100.0
_ORACLE_MAX_DPS = 12000


def _snap_rational(alpha):
    frac = Fraction(alpha).limit_denominator(10**6)
    if frac.denominator <= 64 and abs(float(frac) - alpha) <= 1e-15 * max(alpha, 1.0):
        return frac
    return None


def ml_oracle(p, z, digits: int = 16) -> complex:
    """Taylor series of E_{alpha,gamma}(z) in extended-precision arithmetic.

    Working precision is ``digits`` plus enough guard digits to absorb the
    cancellation of the series, which is governed by exp(|z|^(1/alpha)) (for
    alpha >= 1 this reduces to the exp(|z|) loss of the exponential series).
    The result is rounded to a complex double.  Independent of ml_eval: no
    crossover, no expansions, no double-double accumulation.

    When alpha is within 1e-15 of a small rational p/q (every grid value used
    by the package is), the Gamma coefficients follow the exact recurrence
    Gamma(x + p) = Gamma(x) * x(x+1)...(x+p-1) along residue classes mod q,
    and the parameter snap perturbs the result well below the requested
    digits; otherwise every coefficient is a fresh extended-precision Gamma.

    Raises PrecisionBudgetError when the guard digits would exceed the
    precision budget.
    """
    alpha, gamma = _unpack_params(p)
    zc = complex(z)
    if abs(zc) > _ORACLE_MAX_ABS_Z:
        raise ValueError(f"oracle range is |z| <= {_ORACLE_MAX_ABS_Z}")
    if digits <= 0:
        raise ValueError("digits must be positive")
    cancel = max(abs(zc), abs(zc) ** (1.0 / alpha), 1.0)
    wp = digits + int(math.log10(math.e) * cancel) + 25
    if wp > _ORACLE_MAX_DPS:
        raise PrecisionBudgetError(
            f"oracle needs ~{wp} working digits for alpha={alpha}, |z|={abs(zc):.3g}"
        )

    frac = _snap_rational(alpha)
    if frac is not None and gamma > 0.0:
        snap_rel = cancel * (math.log(abs(zc) + 2.0) + 2.0) / alpha**2 * max(
            abs(float(frac) - alpha), 0.0
        )
        if snap_rel > 10.0 ** (-digits):
            frac = None

    if _HAVE_GMPY2:
        return _oracle_series_gmpy2(alpha, gamma, zc, wp, frac)
    return _oracle_series_mpmath(alpha, gamma, zc, wp, frac)


def _oracle_series_gmpy2(alpha, gamma, zc, wp, frac):
    # Reciprocal-gamma states avoid a high-precision division per term, and
    # the working precision is stepped down through the post-peak tail, where
    # a term 2^-d below the peak only needs d fewer guard bits.  Each finished
    # precision stage is parked and the stage sums are combined at the end.
    ctx = gmpy2.get_context()
    saved = ctx.precision
    full_bits = int(wp * 3.3219281) + 16
    ctx.precision = full_bits
    try:
        mz = gmpy2.mpc(zc)
        total = gmpy2.mpc(0)
        power = gmpy2.mpc(1)
        g = gmpy2.mpfr(gamma)
        max_term = gmpy2.mpfr(0)
        tiny = gmpy2.exp2(gmpy2.mpfr(-(full_bits - 24)))
        stop_floor = None
        stages = []
        rational = frac is not None and gamma > 0.0
        if rational:
            q, pnum = frac.denominator, frac.numerator
            a = gmpy2.mpfr(pnum) / q
            rstates = [1 / gmpy2.gamma(a * r + g) for r in range(q)]
        else:
            a = gmpy2.mpfr(alpha)
        n = 0
        while True:
            if rational:
                rg = rstates[n % q]
                term = power * rg
            else:
                x = a * n + g
                if x <= 0.5 and abs(x - gmpy2.rint(x)) < 1e-30:
                    term = None
                else:
                    term = power / gmpy2.gamma(x)
            if term is not None:
                total += term
                tm = abs(term.real) + abs(term.imag)
            else:
                tm = gmpy2.mpfr(0)
            if tm > max_term:
                max_term = tm
                stop_floor = max_term * tiny
            if stop_floor is not None and n > 2 and alpha * n + gamma > 1:
                if tm < stop_floor:
                    break
                if tm > 0:
                    want = full_bits + 72 - (gmpy2.get_exp(max_term) - gmpy2.get_exp(tm))
                    if want < ctx.precision - 256:
                        stages.append(total)
                        ctx.precision = max(96, want)
                        total = gmpy2.mpc(0)
            if n > 30 * wp + 1000000:
                raise MLConvergenceError("oracle series failed to terminate")
            if rational:
                x = a * n + g
                upd = x
                for j in range(1, pnum):
                    upd *= x + j
                rstates[n % q] = rg / upd
            power *= mz
            n += 1
        ctx.precision = full_bits
        for s in stages:
            total += s
        return complex(total)
    finally:
        ctx.precision = saved


def _oracle_series_mpmath(alpha, gamma, zc, wp, frac):
    with mp.workdps(wp):
        mz = mp.mpc(zc)
        total = mp.mpc(0)
        power = mp.mpc(1)
        max_term = mp.mpf(0)
        stop_floor = None
        if frac is not None and gamma > 0.0:
            q = frac.denominator
            pnum = frac.numerator
            a = mp.mpf(pnum) / q
            g = mp.mpf(gamma)
            states = [mp.gamma(a * r + g) for r in range(q)]
            n = 0
            while True:
                r = n % q
                gam = states[r]
                term = power / gam
                total += term
                tm = abs(term)
                if tm > max_term:
                    max_term = tm
                    stop_floor = max_term * mp.mpf(10) ** (-(wp - 6))
                if stop_floor is not None and tm < stop_floor and n > 2:
                    break
                if n > 10 * wp + 1000000:
                    raise MLConvergenceError("oracle series failed to terminate")
                x = a * n + g
                upd = x
                for j in range(1, pnum):
                    upd *= x + j
                states[r] = gam * upd
                power *= mz
                n += 1
        else:
            a = mp.mpf(alpha)
            g = mp.mpf(gamma)
            n = 0
            while True:
                x = a * n + g
                if x <= 0.5 and mp.almosteq(x, mp.nint(x), abs_eps=mp.mpf("1e-30")):
                    term = mp.mpc(0)
                else:
                    term = power / mp.gamma(x)
                total += term
                tm = abs(term)
                if tm > max_term:
                    max_term = tm
                    stop_floor = max_term * mp.mpf(10) ** (-(wp - 6))
                if stop_floor is not None and tm < stop_floor and n > 2 and x > 1:
                    break
                if n > 10 * wp + 1000000:
                    raise MLConvergenceError("oracle series failed to terminate")
                power *= mz
                n += 1
        return complex(total)
