"""Fourier-side representation of the fractional free evolution.

For radially symmetric data the whole evolution lives on the half-line
rho = |xi|: each mode is multiplied by E_{alpha,1}(kappa) with

    kappa = rho^2 t^alpha exp(-i pi beta / 2),

and the radial derivative of the evolved profile follows from the chain rule
and  d/dz E_{alpha,1} = E_{alpha,alpha}/alpha.  The module also carries the
catalog of admissible initial profiles (a Gaussian and a compactly supported
annulus bump) and the well-posedness checks on the graph norm
sqrt(||v||^2 + ||rho^2 v||^2).
"""

import math
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from . import quadrature
from .errors import WrongRegimeError
from .mittag_leffler import gamma_fn, minus_i_pow, ml_eval

__all__ = [
    "DatumClass",
    "FractionalIndices",
    "InitialDatum",
    "ModeState",
    "NormEnvelopeReport",
    "Regime",
    "annulus_datum",
    "datum_norm_sq",
    "gaussian_datum",
    "grad_mode",
    "kappa",
    "mode_state",
    "norm_envelope_check",
    "propagate_mode",
    "radial_moment",
    "sobolev_interp_check",
    "surface_area",
]

GAUSSIAN_RHO_MAX = math.sqrt(18.0 * math.log(10.0))  # e^{-rho^2} < 1e-18 beyond


class Regime(Enum):
    SUBORDINATE_DECAY = "subordinate_decay"
    BALLISTIC = "ballistic"
    EXPONENTIAL_GROWTH = "exponential_growth"


@dataclass(frozen=True)
class FractionalIndices:
    """The index pair (alpha, beta), both in (0,1].

    The regime map is discontinuous in the parameters, so ballistic transport
    requires exact equality of the stored values; no epsilon comparison is
    mathematically defensible here.
    """

    alpha: float
    beta: float

    def __post_init__(self):
        if not 0.0 < self.alpha <= 1.0:
            raise ValueError("alpha must lie in (0,1]")
        if not 0.0 < self.beta <= 1.0:
            raise ValueError("beta must lie in (0,1]")

    def regime(self) -> Regime:
        if self.alpha < self.beta:
            return Regime.SUBORDINATE_DECAY
        if self.alpha == self.beta:
            return Regime.BALLISTIC
        return Regime.EXPONENTIAL_GROWTH


class DatumClass(Enum):
    GAUSSIAN_SCHWARTZ = "gaussian"
    ANNULUS_BUMP = "annulus"


@dataclass(frozen=True)
class InitialDatum:
    """Radially symmetric Fourier-side profile f(rho) with derivative f'.

    ``lambda_minus``/``lambda_plus`` bound the support of the profile; the
    Gaussian uses the sentinels 0 and inf.  ``profile``/``profile_deriv``
    accept numpy arrays.
    """

    profile: object
    profile_deriv: object
    class_tag: DatumClass
    lambda_minus: float
    lambda_plus: float
    dimension: int = 1

    def __post_init__(self):
        if self.dimension < 1:
            raise ValueError("dimension must be a positive integer")
        if self.class_tag is DatumClass.ANNULUS_BUMP:
            if not 0.0 < self.lambda_minus < self.lambda_plus < math.inf:
                raise ValueError("annulus bump needs 0 < lambda_minus < lambda_plus < inf")

    def f(self, rho):
        return self.profile(np.asarray(rho, dtype=float))

    def f_prime(self, rho):
        return self.profile_deriv(np.asarray(rho, dtype=float))

    def with_dimension(self, d: int) -> "InitialDatum":
        return replace(self, dimension=int(d))

    def support(self):
        """Radial integration window covering the profile up to truncation error."""
        if self.class_tag is DatumClass.ANNULUS_BUMP:
            return self.lambda_minus, self.lambda_plus
        return 0.0, GAUSSIAN_RHO_MAX

    def describe(self) -> str:
        if self.class_tag is DatumClass.ANNULUS_BUMP:
            return f"annulus[{self.lambda_minus:g},{self.lambda_plus:g}]"
        return "gaussian"


def gaussian_datum(dimension: int = 1) -> InitialDatum:
    """f(rho) = exp(-rho^2/2); Schwartz class, admissible only for beta >= alpha."""

    def f(rho):
        return np.exp(-0.5 * rho**2)

    def fp(rho):
        return -rho * np.exp(-0.5 * rho**2)

    return InitialDatum(f, fp, DatumClass.GAUSSIAN_SCHWARTZ, 0.0, math.inf, dimension)


def annulus_datum(lambda_minus: float, lambda_plus: float,
                  dimension: int = 1) -> InitialDatum:
    """Smooth bump exp(-1/(1-s^2)) on the annulus [lambda_minus, lambda_plus].

    s = (2 rho - lambda_plus - lambda_minus)/(lambda_plus - lambda_minus) maps
    the annulus to (-1, 1); the profile is C-infinity with exactly known
    support, so the exponential-regime rate brackets are sharp.
    """
    lam_m, lam_p = float(lambda_minus), float(lambda_plus)
    width = lam_p - lam_m

    def _s(rho):
        return (2.0 * rho - lam_p - lam_m) / width

    def f(rho):
        rho = np.asarray(rho, dtype=float)
        s = _s(rho)
        omss = 1.0 - s * s
        inside = omss > 1.5e-3  # exp(-1/omss) underflows well before this
        out = np.zeros_like(rho)
        safe = np.where(inside, omss, 1.0)
        out = np.where(inside, np.exp(-1.0 / safe), 0.0)
        return out

    def fp(rho):
        rho = np.asarray(rho, dtype=float)
        s = _s(rho)
        omss = 1.0 - s * s
        inside = omss > 1.5e-3
        safe = np.where(inside, omss, 1.0)
        val = np.exp(-1.0 / safe) * (-4.0 * s) / (width * safe * safe)
        return np.where(inside, val, 0.0)

    return InitialDatum(f, fp, DatumClass.ANNULUS_BUMP, lam_m, lam_p, dimension)


def surface_area(d: int) -> float:
    """Area of the unit sphere S^{d-1}: 2 pi^{d/2} / Gamma(d/2); equals 2 for d=1."""
    return 2.0 * math.pi ** (d / 2.0) / gamma_fn(d / 2.0)


# ---------------------------------------------------------------------------
# per-mode evolution


def kappa(idx: FractionalIndices, rho, t):
    """kappa = rho^2 t^alpha exp(-i pi beta/2); vectorized in rho and t."""
    rho = np.asarray(rho, dtype=float)
    t_a = np.asarray(t, dtype=float) ** idx.alpha
    return rho * rho * t_a * minus_i_pow(idx.beta)


def propagate_mode(idx: FractionalIndices, datum: InitialDatum, rho, t):
    """Evolved Fourier mode  E_{alpha,1}(kappa(rho,t)) * f(rho)."""
    return ml_eval((idx.alpha, 1.0), kappa(idx, rho, t)) * datum.f(rho)


def grad_mode(idx: FractionalIndices, datum: InitialDatum, rho, t):
    """Radial derivative of the evolved mode.

    d/drho [E_{a,1}(kappa) f] = (2/a) w t^a rho E_{a,a}(kappa) f + E_{a,1}(kappa) f'
    with w = (-i)^beta, since dkappa/drho = 2 w t^a rho.
    """
    a = idx.alpha
    rho = np.asarray(rho, dtype=float)
    kap = kappa(idx, rho, t)
    w = minus_i_pow(idx.beta)
    t_a = np.asarray(t, dtype=float) ** a
    term_grow = (2.0 / a) * w * t_a * rho * ml_eval((a, a), kap) * datum.f(rho)
    return term_grow + ml_eval((a, 1.0), kap) * datum.f_prime(rho)


@dataclass(frozen=True)
class ModeState:
    rho: float
    t: float
    u_hat: complex
    du_hat_drho: complex


def mode_state(idx: FractionalIndices, datum: InitialDatum, rho: float,
               t: float) -> ModeState:
    return ModeState(
        rho=float(rho),
        t=float(t),
        u_hat=complex(propagate_mode(idx, datum, rho, t)),
        du_hat_drho=complex(grad_mode(idx, datum, rho, t)),
    )


# ---------------------------------------------------------------------------
# radial norms


def _moment_window(datum: InitialDatum, power: float):
    lo, hi = datum.support()
    if datum.class_tag is DatumClass.GAUSSIAN_SCHWARTZ and power > 0.0:
        # keep rho^power e^{-rho^2} truncation below the quadrature tolerances
        hi = max(hi, math.sqrt(power / 2.0) + 5.0)
    return lo, hi


def radial_moment(datum: InitialDatum, power: float = 0.0, deriv: bool = False,
                  rel_tol: float = 1e-12) -> float:
    """sigma_{d-1} * int rho^power g(rho)^2 rho^{d-1} drho with g = f or f'."""
    lo, hi = _moment_window(datum, power)
    d = datum.dimension
    g = datum.f_prime if deriv else datum.f

    def integrand(rho):
        return rho**power * g(rho) ** 2 * rho ** (d - 1)

    val, _ = quadrature.integrate_adaptive(integrand, lo, hi, rel_tol=rel_tol)
    return surface_area(d) * val


def datum_norm_sq(datum: InitialDatum) -> float:
    """||u0_hat||^2; finite and positive for every catalog datum."""
    return radial_moment(datum, 0.0)


@dataclass(frozen=True)
class InterpCheck:
    lhs: float
    rhs: float
    ok: bool


def sobolev_interp_check(datum: InitialDatum, alpha: float) -> InterpCheck:
    """Interpolation inequality  ||rho^2 f|| <= alpha ||rho^{2/alpha} f|| + (1-alpha) ||f||.

    This is the Young-inequality form of the continuous embedding of the
    rho^{2/alpha} graph norm into the rho^2 one; equality holds at alpha = 1.
    """
    if not 0.0 < alpha <= 1.0:
        raise ValueError("alpha must lie in (0,1]")
    lhs = math.sqrt(radial_moment(datum, 4.0))
    rhs = alpha * math.sqrt(radial_moment(datum, 4.0 / alpha))
    rhs += (1.0 - alpha) * math.sqrt(radial_moment(datum, 0.0))
    return InterpCheck(lhs=lhs, rhs=rhs, ok=lhs <= rhs * (1.0 + 1e-10))


# ---------------------------------------------------------------------------
# norm envelopes


def _graph_norm(idx: FractionalIndices, datum: InitialDatum, t: float) -> float:
    """sqrt(||u_hat||^2 + ||rho^2 u_hat||^2) at time t by radial quadrature."""
    lo, hi = datum.support()
    d = datum.dimension

    def integrand(rho):
        mode = ml_eval((idx.alpha, 1.0), kappa(idx, rho, t)) * datum.f(rho)
        mag2 = np.abs(mode) ** 2
        return (1.0 + rho**4) * mag2 * rho ** (d - 1)

    panels = 1
    if idx.alpha >= idx.beta and t > 0.0:
        # resolve the oscillation exp(-i sin(pi beta/(2 alpha)) rho^{2/alpha} t)
        s = math.sin(math.pi * idx.beta / (2.0 * idx.alpha))
        du = hi ** (2.0 / idx.alpha) - lo ** (2.0 / idx.alpha)
        panels = int(min(4.0 * s * t * du / (2.0 * math.pi) + 8.0, 4000))
    val, _ = quadrature.integrate_adaptive(integrand, lo, hi, rel_tol=1e-9,
                                           initial_panels=panels)
    return math.sqrt(surface_area(d) * val)


@dataclass(frozen=True)
class NormEnvelopeReport:
    regime: Regime
    times: np.ndarray
    values: np.ndarray
    initial_norm: float
    ratio_sup: float
    damped_sup: float
    slope: float
    slope_bracket: tuple
    ok: bool


def norm_envelope_check(idx: FractionalIndices, datum: InitialDatum, T: float,
                        n_samples: int = 30) -> NormEnvelopeReport:
    """Sample the graph norm g(t) on a uniform grid and test its envelope.

    beta >= alpha: g stays bounded by a constant multiple of g(0); the check
    asserts sup g/g(0) < 10.  beta < alpha: g grows at most like
    exp(cos(pi beta/(2 alpha)) Lambda_+^{2/alpha} t); the damped supremum must
    stop increasing (within 5%) beyond the first tenth of the horizon and the
    fitted log-slope over [T/3, T] must fall inside the
    [Lambda_-, Lambda_+] rate bracket, 5% slack on both ends.
    """
    if T <= 0.0:
        raise ValueError("T must be positive")
    if n_samples < 10:
        raise ValueError("n_samples must be at least 10")
    growth = idx.regime() is Regime.EXPONENTIAL_GROWTH
    if growth and datum.class_tag is not DatumClass.ANNULUS_BUMP:
        raise WrongRegimeError("beta < alpha requires a compactly supported datum")

    times = np.linspace(T / n_samples, T, n_samples)
    values = np.array([_graph_norm(idx, datum, t) for t in times])
    g0 = math.sqrt(radial_moment(datum, 0.0) + radial_moment(datum, 4.0))

    ratio_sup = float(np.max(values) / g0)
    damped_sup = math.nan
    slope = math.nan
    bracket = (math.nan, math.nan)
    if not growth:
        ok = ratio_sup < 10.0
    else:
        c = math.cos(math.pi * idx.beta / (2.0 * idx.alpha))
        r_minus = c * datum.lambda_minus ** (2.0 / idx.alpha)
        r_plus = c * datum.lambda_plus ** (2.0 / idx.alpha)
        bracket = (r_minus, r_plus)
        damped = values * np.exp(-r_plus * times)
        damped_sup = float(np.max(damped))
        late = times >= T / 10.0
        dl = damped[late]
        monotone = bool(np.all(dl[1:] <= dl[:-1] * 1.05))
        window = times >= T / 3.0
        slope = float(np.polyfit(times[window], np.log(values[window]), 1)[0])
        ok = monotone and (0.95 * r_minus <= slope <= 1.05 * r_plus)
    return NormEnvelopeReport(
        regime=idx.regime(),
        times=times,
        values=values,
        initial_norm=g0,
        ratio_sup=ratio_sup,
        damped_sup=damped_sup,
        slope=slope,
        slope_bracket=bracket,
        ok=ok,
    )
