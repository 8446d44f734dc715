"""Mean-square displacement of the evolved wave packet.

On the Fourier side D2(t) = ||grad u_hat(.,t)||^2, which for radial data
reduces to

    D2 = sigma_{d-1} * int |d/drho u_hat(rho,t)|^2 rho^{d-1} drho.

For alpha >= beta and large t the integrand carries the oscillation
exp(-i sin(pi beta/(2 alpha)) rho^{2/alpha} t) of the exponential branch of
the kernel.  Up to a few thousand cycles an oscillation-seeded adaptive rule
resolves it directly; beyond that the integrand is split exactly into a
smooth (DC) part and a single harmonic whose amplitude is smooth, and the
harmonic goes through the Filon rule in the variable u = rho^{2/alpha},
where its phase is linear.  Both representations use the same kernel pieces
as the dispatcher, so the value agrees with a brute-force rule applied to
|grad_mode|^2 itself; ``msd_trapezoid`` provides that independent
cross-check.
"""

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.special import rgamma

from . import quadrature
from .errors import OverflowHorizonError, QuadratureError, WrongRegimeError
from .mittag_leffler import _algebraic_tail, crossover_radius, minus_i_pow
from .spectral import (
    DatumClass,
    FractionalIndices,
    InitialDatum,
    Regime,
    grad_mode,
    surface_area,
)

__all__ = [
    "MsdSeries",
    "QuadratureSpec",
    "Scheme",
    "coeff_regime1",
    "coeff_regime2",
    "msd_at",
    "msd_series",
    "msd_trapezoid",
    "overflow_horizon",
    "rate_bounds_regime3",
]

_OSC_CYCLE_BUDGET = 3000.0
_EXP_BUDGET = 690.0  # double exponent budget for the squared growth factor


class Scheme(Enum):
    ADAPTIVE_GK = "adaptive_gk"
    COMPOSITE_GL = "composite_gl"


@dataclass(frozen=True)
class QuadratureSpec:
    scheme: Scheme = Scheme.ADAPTIVE_GK
    rel_tol: float = 1e-10
    abs_tol: float = 1e-14
    rho_max: float = None

    def __post_init__(self):
        if self.rel_tol <= 0.0 or self.abs_tol <= 0.0:
            raise ValueError("tolerances must be positive")


def _domain(datum: InitialDatum, quad: QuadratureSpec):
    lo, hi = datum.support()
    if quad.rho_max is not None:
        hi = min(hi, quad.rho_max) if datum.class_tag is DatumClass.ANNULUS_BUMP \
            else quad.rho_max
    return lo, hi


def _smooth_engine(quad: QuadratureSpec):
    if quad.scheme is Scheme.ADAPTIVE_GK:
        def engine(f, a, b, panels=1):
            return quadrature.integrate_adaptive(
                f, a, b, rel_tol=quad.rel_tol, abs_tol=quad.abs_tol,
                initial_panels=panels)
    else:
        def engine(f, a, b, panels=1):
            return quadrature.composite_gl_auto(
                f, a, b, rel_tol=quad.rel_tol, abs_tol=quad.abs_tol,
                start_panels=max(8, panels))
    return engine


def overflow_horizon(idx: FractionalIndices, datum: InitialDatum) -> float:
    """T_max = 600 / (2 cos(pi beta/(2 alpha)) Lambda_+^{2/alpha}) for alpha > beta.

    Keeps exp(rate * t) comfortably inside double range; infinite otherwise.
    """
    if idx.alpha <= idx.beta:
        return math.inf
    rate = 2.0 * math.cos(math.pi * idx.beta / (2.0 * idx.alpha))
    rate *= datum.lambda_plus ** (2.0 / idx.alpha)
    return 600.0 / rate


def _growth_phase(idx: FractionalIndices):
    """cos/sin of pi beta/(2 alpha); exactly (0, 1) on the ballistic diagonal."""
    if idx.alpha == idx.beta:
        return 0.0, 1.0
    theta = math.pi * idx.beta / (2.0 * idx.alpha)
    return math.cos(theta), math.sin(theta)


def _asym_pieces(idx: FractionalIndices, datum: InitialDatum, rho, t):
    """Exponential-branch prefactor P and algebraic remainder X_A of grad_mode.

    In the asymptotic region  d/drho u_hat = P(rho) exp(kappa^{1/alpha}) + X_A(rho),
    with both factors smooth in rho.
    """
    a = idx.alpha
    rho = np.asarray(rho, dtype=float)
    w = minus_i_pow(idx.beta)
    t_a = t**a
    kap = rho * rho * t_a * w
    f = datum.f(rho)
    fp = datum.f_prime(rho)
    tail1, _ = _algebraic_tail(a, 1.0, kap, None)
    tail_a, _ = _algebraic_tail(a, a, kap, None)
    pref = (2.0 / a) * w * t_a * rho * f
    p_exp = (pref * kap ** ((1.0 - a) / a) + fp) / a
    x_alg = pref * tail_a + fp * tail1
    return p_exp, x_alg


def msd_at(idx: FractionalIndices, datum: InitialDatum, t: float,
           quad: QuadratureSpec = QuadratureSpec()) -> float:
    """D2(t) by radial quadrature; nonnegative, with the quadrature error
    estimate held below max(abs_tol, rel_tol * result).

    Raises OverflowHorizonError when alpha > beta and
    2 cos(pi beta/(2 alpha)) Lambda_+^{2/alpha} t exceeds the double exponent
    budget; shrink the horizon instead.
    """
    if t < 0.0:
        raise ValueError("t must be nonnegative")
    a, b_ = idx.alpha, idx.beta
    if a > b_:
        if datum.class_tag is not DatumClass.ANNULUS_BUMP:
            raise WrongRegimeError(
                "exponential growth needs a compactly supported (annulus) datum")
        c, _ = _growth_phase(idx)
        if 2.0 * c * datum.lambda_plus ** (2.0 / a) * t > _EXP_BUDGET:
            raise OverflowHorizonError(
                f"t={t:g} beyond the overflow horizon "
                f"{overflow_horizon(idx, datum):g}")
    lo, hi = _domain(datum, quad)
    d = datum.dimension
    sigma = surface_area(d)
    engine = _smooth_engine(quad)

    def direct(rho):
        g = grad_mode(idx, datum, rho, t)
        return (g.real**2 + g.imag**2) * rho ** (d - 1)

    if t == 0.0 or a < b_:
        panels = 16
        if t > 0.0 and a < b_ and b_ < 1.8 * a:
            # the dispatcher keeps the recessive exponential here; its
            # oscillation is damped after ~tan(theta) cycles
            theta = math.pi * b_ / (2.0 * a)
            panels = int(min(10.0 * math.tan(theta) + 16.0, 4000))
        val, err = engine(direct, lo, hi, panels)
        total, total_err = sigma * val, sigma * err
    else:
        rho_r = math.sqrt(crossover_radius(a) / t**a)
        split = min(max(rho_r, lo), hi)
        total = 0.0
        total_err = 0.0
        if split > lo:
            val, err = engine(direct, lo, split, 16)
            total += sigma * val
            total_err += sigma * err
        if split < hi:
            c, s = _growth_phase(idx)
            inv_a = 2.0 / a
            u1, u2 = split**inv_a, hi**inv_a
            cycles = s * t * (u2 - u1) / (2.0 * math.pi)
            if cycles <= _OSC_CYCLE_BUDGET:
                val, err = engine(direct, split, hi,
                                  int(2.5 * cycles) + 4)
                total += sigma * val
                total_err += sigma * err
            else:
                def dc_part(rho):
                    p_exp, x_alg = _asym_pieces(idx, datum, rho, t)
                    grow = np.exp(2.0 * c * t * rho**inv_a)
                    mag = (p_exp.real**2 + p_exp.imag**2) * grow
                    mag += x_alg.real**2 + x_alg.imag**2
                    return mag * rho ** (d - 1)

                val, err = engine(dc_part, split, hi, 16)
                total += sigma * val
                total_err += sigma * err

                def harmonic_amp(u):
                    rho = u ** (a / 2.0)
                    p_exp, x_alg = _asym_pieces(idx, datum, rho, t)
                    jac = (a / 2.0) * u ** (a / 2.0 - 1.0)
                    amp = 2.0 * p_exp * np.conj(x_alg) * rho ** (d - 1) * jac
                    if c != 0.0:
                        amp = amp * np.exp(c * t * u)
                    return amp

                ftol = 0.25 * max(quad.abs_tol, quad.rel_tol * total) / sigma
                hval, herr = quadrature.filon_legendre(
                    harmonic_amp, u1, u2, -s * t, abs_tol=ftol)
                total += sigma * hval.real
                total_err += sigma * herr
    if total_err > 4.0 * max(quad.abs_tol, quad.rel_tol * abs(total)):
        raise QuadratureError(
            f"msd quadrature error estimate {total_err:.3g} exceeds its target "
            f"at t={t:g}")
    return max(total, 0.0)


def msd_trapezoid(idx: FractionalIndices, datum: InitialDatum, t: float,
                  n_points: int = 1_000_000,
                  quad: QuadratureSpec = QuadratureSpec()) -> float:
    """Independent D2(t) oracle: dense fixed trapezoid rule on |grad_mode|^2."""
    lo, hi = _domain(datum, quad)
    d = datum.dimension

    def direct(rho):
        g = grad_mode(idx, datum, rho, t)
        return (g.real**2 + g.imag**2) * rho ** (d - 1)

    return surface_area(d) * quadrature.trapezoid_uniform(direct, lo, hi, n_points)


@dataclass(frozen=True)
class MsdSeries:
    """Sampled D2 values over an ascending time grid."""

    times: np.ndarray
    values: np.ndarray
    idx: FractionalIndices
    datum_id: str
    dimension: int
    quad: QuadratureSpec = field(default_factory=QuadratureSpec)

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)
        if times.shape != values.shape or times.ndim != 1:
            raise ValueError("times and values must be 1-d arrays of equal length")
        if np.any(np.diff(times) <= 0.0):
            raise ValueError("times must be strictly increasing")
        if not np.all(np.isfinite(values)) or np.any(values < 0.0):
            raise ValueError("values must be finite and nonnegative")


def msd_series(idx: FractionalIndices, datum: InitialDatum, times,
               quad: QuadratureSpec = QuadratureSpec()) -> MsdSeries:
    times = np.asarray(times, dtype=float)
    values = np.array([msd_at(idx, datum, t, quad) for t in times])
    return MsdSeries(times=times, values=values, idx=idx,
                     datum_id=datum.describe(), dimension=datum.dimension,
                     quad=quad)


# ---------------------------------------------------------------------------
# theoretical leading constants


def coeff_regime1(datum: InitialDatum, alpha: float, d: int,
                  quad: QuadratureSpec = QuadratureSpec()) -> float:
    """Decay-regime constant multiplying t^{-2 alpha} (alpha < beta).

    sigma_{d-1} int |rho^{-2} (f'/Gamma(1-alpha) + 2 f /(rho alpha Gamma(-alpha)))|^2
    rho^{d-1} drho.  Gamma(-alpha) < 0 on (0,1), so the two terms can cancel;
    the quadrature is adaptive and resolves the sign change.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError("regime-1 constant needs alpha in (0,1)")
    if datum.class_tag is not DatumClass.ANNULUS_BUMP or datum.lambda_minus <= 0.0:
        raise QuadratureError(
            "the |rho|^{-4} weight diverges at rho=0: coeff_regime1 requires an "
            "annulus datum with lambda_minus > 0")
    c1 = float(rgamma(1.0 - alpha))
    c2 = 2.0 * float(rgamma(-alpha)) / alpha
    lo, hi = datum.lambda_minus, datum.lambda_plus

    def integrand(rho):
        inner = datum.f_prime(rho) * c1 + datum.f(rho) * c2 / rho
        return rho**-4.0 * inner**2 * rho ** (d - 1)

    val, _ = quadrature.integrate_adaptive(integrand, lo, hi,
                                           rel_tol=quad.rel_tol,
                                           abs_tol=quad.abs_tol)
    return surface_area(d) * val


def coeff_regime2(datum: InitialDatum, alpha: float, d: int,
                  quad: QuadratureSpec = QuadratureSpec()) -> float:
    """Ballistic coefficient (4/alpha^4) || |xi|^{(2-alpha)/alpha} u0_hat ||^2."""
    if not 0.0 < alpha <= 1.0:
        raise ValueError("alpha must lie in (0,1]")
    from .spectral import radial_moment

    moment = radial_moment(datum.with_dimension(d), 2.0 * (2.0 - alpha) / alpha,
                           rel_tol=quad.rel_tol)
    return 4.0 / alpha**4 * moment


def rate_bounds_regime3(idx: FractionalIndices, datum: InitialDatum):
    """Two-sided exponential growth rates (r_minus, r_plus) for alpha > beta:
    r_{-/+} = 2 cos(pi beta/(2 alpha)) Lambda_{-/+}^{2/alpha}."""
    if idx.alpha <= idx.beta:
        raise WrongRegimeError("exponential rates exist only for alpha > beta")
    if datum.class_tag is not DatumClass.ANNULUS_BUMP:
        raise WrongRegimeError("rate bracket needs an annulus datum")
    c = 2.0 * math.cos(math.pi * idx.beta / (2.0 * idx.alpha))
    r_minus = c * datum.lambda_minus ** (2.0 / idx.alpha)
    r_plus = c * datum.lambda_plus ** (2.0 / idx.alpha)
    return r_minus, r_plus
