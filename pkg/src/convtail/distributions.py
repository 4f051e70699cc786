"""Catalog of non-negative continuous distributions.

Each distribution provides vectorized density evaluation, a
boundary-smoothness class at zero (how many leading derivatives of the
density vanish there), and, for the chi-squared and Levy families, the
exact law of sums needed for validation.

Density formulas that contain a Bessel factor (Rice, kappa-mu) are
evaluated in log space and exponentiated at the end, so they stay
finite at large arguments.
"""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass

import numpy as np
from scipy.special import erfcinv as _erfcinv

from .special_functions import DomainError, erfc, ln_bessel_i, ln_gamma, reg_lower_gamma


class ParameterError(ValueError):
    """Invalid distribution parameters."""


class UnsupportedSamplingError(ValueError):
    """No sampling transform implemented for this distribution."""


class DistKind(enum.Enum):
    RAYLEIGH = "rayleigh"
    NAKAGAMI_M = "nakagami"
    RICE = "rice"
    WEIBULL = "weibull"
    LOG_NORMAL = "lognormal"
    GENERALIZED_GAMMA = "gengamma"
    KAPPA_MU = "kappamu"
    CHI_SQUARED = "chisq"
    LEVY = "levy"


@dataclass(frozen=True)
class Distribution:
    """An immutable (kind, parameters) pair; build via the factories."""

    kind: DistKind
    params: tuple[tuple[str, float], ...]

    def param(self, name: str) -> float:
        for key, value in self.params:
            if key == name:
                return value
        raise KeyError(name)

    @property
    def params_dict(self) -> dict[str, float]:
        return dict(self.params)

    def __str__(self) -> str:
        args = ",".join(f"{k}={v:g}" for k, v in self.params)
        return f"{self.kind.value}({args})"


@dataclass(frozen=True)
class BoundaryClass:
    """Number of leading derivatives of the density vanishing at zero.

    ``vanishing_order is None`` means every derivative vanishes (an
    essential zero, as for the log-normal and Levy densities).  Order 0
    means the density itself does not vanish at 0+.
    """

    vanishing_order: int | None

    @property
    def all_derivatives_vanish(self) -> bool:
        return self.vanishing_order is None

    @property
    def needs_endpoint_rule(self) -> bool:
        return self.vanishing_order is not None and self.vanishing_order <= 1


ALL_DERIVATIVES_VANISH = BoundaryClass(None)


def _positive(name: str, value: float) -> float:
    value = float(value)
    if not value > 0 or not math.isfinite(value):
        raise ParameterError(f"{name} must be a positive finite number, got {value}")
    return value


def rayleigh(omega: float = 1.0) -> Distribution:
    return Distribution(DistKind.RAYLEIGH, (("omega", _positive("omega", omega)),))


def nakagami(m: float, omega: float = 1.0) -> Distribution:
    return Distribution(
        DistKind.NAKAGAMI_M,
        (("m", _positive("m", m)), ("omega", _positive("omega", omega))),
    )


def rice(nu: float) -> Distribution:
    return Distribution(DistKind.RICE, (("nu", _positive("nu", nu)),))


def weibull(k: float, omega: float = 1.0) -> Distribution:
    return Distribution(
        DistKind.WEIBULL,
        (("k", _positive("k", k)), ("omega", _positive("omega", omega))),
    )


def lognormal(mu: float, sigma: float) -> Distribution:
    if not math.isfinite(float(mu)):
        raise ParameterError(f"mu must be finite, got {mu}")
    return Distribution(
        DistKind.LOG_NORMAL,
        (("mu", float(mu)), ("sigma", _positive("sigma", sigma))),
    )


def generalized_gamma(p: float, d: float, omega: float = 1.0) -> Distribution:
    return Distribution(
        DistKind.GENERALIZED_GAMMA,
        (
            ("p", _positive("p", p)),
            ("d", _positive("d", d)),
            ("omega", _positive("omega", omega)),
        ),
    )


def kappa_mu(kappa: float, mu: float, omega: float = 1.0) -> Distribution:
    return Distribution(
        DistKind.KAPPA_MU,
        (
            ("kappa", _positive("kappa", kappa)),
            ("mu", _positive("mu", mu)),
            ("omega", _positive("omega", omega)),
        ),
    )


def chi_squared(df: int) -> Distribution:
    df_f = float(df)
    if df_f != int(df_f) or int(df_f) < 1:
        raise ParameterError(f"df must be a positive integer, got {df}")
    return Distribution(DistKind.CHI_SQUARED, (("df", df_f),))


def levy(c: float, location: float = 0.0) -> Distribution:
    if float(location) != 0.0:
        raise ParameterError(
            "levy location must be 0 (non-negative support is required), "
            f"got {location}"
        )
    return Distribution(
        DistKind.LEVY,
        (("c", _positive("c", c)), ("location", 0.0)),
    )


# density kernels on x > 0 --------------------------------------------------


def _pdf_rayleigh(p: dict[str, float], x: np.ndarray) -> np.ndarray:
    om = p["omega"]
    return np.exp(math.log(2.0 / om) + np.log(x) - (x * x) / om)


def _pdf_nakagami(p: dict[str, float], x: np.ndarray) -> np.ndarray:
    m, om = p["m"], p["omega"]
    lead = math.log(2.0) + m * math.log(m / om) - ln_gamma(m)
    return np.exp(lead + (2.0 * m - 1.0) * np.log(x) - (m / om) * x * x)


def _rice_k_omega(p: dict[str, float]) -> tuple[float, float]:
    nu = p["nu"]
    return nu * nu / 2.0, nu * nu + 2.0


def _pdf_rice(p: dict[str, float], x: np.ndarray) -> np.ndarray:
    big_k, om = _rice_k_omega(p)
    b = 2.0 * math.sqrt(big_k * (big_k + 1.0) / om)
    ln_f = (
        math.log(2.0 * (big_k + 1.0) / om)
        + np.log(x)
        - big_k
        - (big_k + 1.0) / om * x * x
        + ln_bessel_i(0.0, b * x)
    )
    return np.exp(ln_f)


def _pdf_weibull(p: dict[str, float], x: np.ndarray) -> np.ndarray:
    k, om = p["k"], p["omega"]
    beta = math.exp(ln_gamma(1.0 + 1.0 / k))
    ln_f = math.log(k) + k * math.log(beta / om) + (k - 1.0) * np.log(x)
    return np.exp(ln_f - (x * beta / om) ** k)


def _pdf_lognormal(p: dict[str, float], x: np.ndarray) -> np.ndarray:
    mu, sigma = p["mu"], p["sigma"]
    log_x = np.log(x)
    z = log_x - mu
    lead = -math.log(sigma) - 0.5 * math.log(2.0 * math.pi)
    return np.exp(lead - (z * z) / (2.0 * sigma * sigma) - log_x)


def _pdf_generalized_gamma(p: dict[str, float], x: np.ndarray) -> np.ndarray:
    pw, d, om = p["p"], p["d"], p["omega"]
    beta = math.exp(ln_gamma((d + 1.0) / pw) - ln_gamma(d / pw))
    lead = math.log(pw) + d * math.log(beta / om) - ln_gamma(d / pw)
    return np.exp(lead + (d - 1.0) * np.log(x) - (beta / om * x) ** pw)


def _pdf_kappa_mu(p: dict[str, float], x: np.ndarray) -> np.ndarray:
    kap, mu, om = p["kappa"], p["mu"], p["omega"]
    b = 2.0 * mu * math.sqrt(kap * (kap + 1.0) / om)
    lead = (
        math.log(2.0 * mu)
        + (1.0 + mu) / 2.0 * math.log(kap + 1.0)
        - (1.0 + mu) / 2.0 * math.log(om)
        - (mu - 1.0) / 2.0 * math.log(kap)
        - mu * kap
    )
    ln_f = lead + mu * np.log(x) - (kap + 1.0) * mu / om * x * x + ln_bessel_i(mu - 1.0, b * x)
    return np.exp(ln_f)


def _pdf_chi_squared(p: dict[str, float], x: np.ndarray) -> np.ndarray:
    df = p["df"]
    lead = -(df / 2.0) * math.log(2.0) - ln_gamma(df / 2.0)
    return np.exp(lead + (df / 2.0 - 1.0) * np.log(x) - x / 2.0)


def _pdf_levy(p: dict[str, float], x: np.ndarray) -> np.ndarray:
    c = p["c"]
    lead = 0.5 * math.log(c / (2.0 * math.pi))
    return np.exp(lead - c / (2.0 * x) - 1.5 * np.log(x))


_PDF_POSITIVE = {
    DistKind.RAYLEIGH: _pdf_rayleigh,
    DistKind.NAKAGAMI_M: _pdf_nakagami,
    DistKind.RICE: _pdf_rice,
    DistKind.WEIBULL: _pdf_weibull,
    DistKind.LOG_NORMAL: _pdf_lognormal,
    DistKind.GENERALIZED_GAMMA: _pdf_generalized_gamma,
    DistKind.KAPPA_MU: _pdf_kappa_mu,
    DistKind.CHI_SQUARED: _pdf_chi_squared,
    DistKind.LEVY: _pdf_levy,
}


# leading behaviour f(x) ~ C * x^a as x -> 0+ -------------------------------


def _leading_power(dist: Distribution) -> float | None:
    """Exponent of the leading power of x at zero; None for an essential
    zero (every derivative vanishes)."""
    p = dist.params_dict
    kind = dist.kind
    if kind is DistKind.RAYLEIGH or kind is DistKind.RICE:
        return 1.0
    if kind is DistKind.NAKAGAMI_M:
        return 2.0 * p["m"] - 1.0
    if kind is DistKind.WEIBULL:
        return p["k"] - 1.0
    if kind is DistKind.GENERALIZED_GAMMA:
        return p["d"] - 1.0
    if kind is DistKind.KAPPA_MU:
        return 2.0 * p["mu"] - 1.0
    if kind is DistKind.CHI_SQUARED:
        return p["df"] / 2.0 - 1.0
    return None  # lognormal, levy


def _limit_at_zero(dist: Distribution) -> float:
    """Right limit f(0+); may be +inf for densities singular at zero."""
    a = _leading_power(dist)
    if a is None:
        return 0.0
    if a > 0:
        return 0.0
    if a < 0:
        return math.inf
    p = dist.params_dict
    kind = dist.kind
    if kind is DistKind.NAKAGAMI_M:
        m, om = p["m"], p["omega"]
        return math.exp(math.log(2.0) + m * math.log(m / om) - ln_gamma(m))
    if kind is DistKind.WEIBULL:
        k, om = p["k"], p["omega"]
        beta = math.exp(ln_gamma(1.0 + 1.0 / k))
        return k * (beta / om) ** k
    if kind is DistKind.GENERALIZED_GAMMA:
        pw, d, om = p["p"], p["d"], p["omega"]
        beta = math.exp(ln_gamma((d + 1.0) / pw) - ln_gamma(d / pw))
        return math.exp(math.log(pw) + d * math.log(beta / om) - ln_gamma(d / pw))
    if kind is DistKind.KAPPA_MU:
        kap, mu, om = p["kappa"], p["mu"], p["omega"]
        b = 2.0 * mu * math.sqrt(kap * (kap + 1.0) / om)
        ln_c = (
            math.log(2.0 * mu)
            + (1.0 + mu) / 2.0 * math.log(kap + 1.0)
            - (1.0 + mu) / 2.0 * math.log(om)
            - (mu - 1.0) / 2.0 * math.log(kap)
            - mu * kap
            + (mu - 1.0) * math.log(b / 2.0)
            - ln_gamma(mu)
        )
        return math.exp(ln_c)
    if kind is DistKind.CHI_SQUARED:  # df == 2
        return 0.5
    raise AssertionError(f"unreachable limit case for {dist}")


def pdf(dist: Distribution, x) -> float | np.ndarray:
    """Density at x >= 0; at x = 0 the right limit f(0+) is returned."""
    scalar = np.isscalar(x)
    arr = np.asarray(x, dtype=np.float64)
    if np.any(arr < 0):
        raise DomainError("pdf requires x >= 0")
    out = np.zeros(arr.shape, dtype=np.float64)
    pos = arr > 0
    if np.any(pos):
        with np.errstate(under="ignore", over="ignore"):
            out[pos] = _PDF_POSITIVE[dist.kind](dist.params_dict, arr[pos])
    if np.any(~pos):
        out[~pos] = _limit_at_zero(dist)
    return float(out) if scalar else out


def boundary_class(dist: Distribution) -> BoundaryClass:
    """Smoothness class at zero, derived from the leading power of x.

    For f ~ C x^a: a <= 0 gives order 0 (the density does not vanish),
    and a > 0 gives order ceil(a), the count of derivatives that vanish
    at 0 before one is non-zero or fails to exist.
    """
    a = _leading_power(dist)
    if a is None:
        return ALL_DERIVATIVES_VANISH
    if a <= 0:
        return BoundaryClass(0)
    return BoundaryClass(math.ceil(a))


def exact_sum_cdf(dist: Distribution, n: int, gamma: float) -> float | None:
    """CDF at gamma for the sum of n i.i.d. copies, where a closed form
    exists (chi-squared and Levy); None otherwise."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not gamma > 0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    if dist.kind is DistKind.CHI_SQUARED:
        return reg_lower_gamma(n * dist.param("df") / 2.0, gamma / 2.0)
    if dist.kind is DistKind.LEVY:
        return erfc(n * math.sqrt(dist.param("c") / (2.0 * gamma)))
    return None


def sample(dist: Distribution, size: int, rng: np.random.Generator) -> np.ndarray:
    """Draw i.i.d. samples; supported for chi-squared, Levy, log-normal."""
    p = dist.params_dict
    if dist.kind is DistKind.CHI_SQUARED:
        return rng.chisquare(p["df"], size)
    if dist.kind is DistKind.LOG_NORMAL:
        return rng.lognormal(p["mu"], p["sigma"], size)
    if dist.kind is DistKind.LEVY:
        # inverse-CDF transform: F(x) = erfc(sqrt(c/(2x)))
        u = rng.random(size)
        with np.errstate(divide="ignore"):
            t = _erfcinv(u)
            return p["c"] / (2.0 * t * t)
    raise UnsupportedSamplingError(f"no sampling transform for {dist.kind.value}")


# CLI specification grammar: name(param=value,...) ---------------------------

_FACTORIES = {
    "rayleigh": rayleigh,
    "nakagami": nakagami,
    "rice": rice,
    "weibull": weibull,
    "lognormal": lognormal,
    "gengamma": generalized_gamma,
    "generalized_gamma": generalized_gamma,
    "kappamu": kappa_mu,
    "kappa_mu": kappa_mu,
    "chisq": chi_squared,
    "levy": levy,
}

_SPEC_RE = re.compile(r"^\s*([A-Za-z_][A-Za-z0-9_]*)\s*\(\s*(.*?)\s*\)\s*$")


def parse_distribution(text: str) -> Distribution:
    """Parse a specification string such as ``levy(c=0.1)``.

    Names are case-insensitive; parameters are decimal ``name=value``
    pairs separated by commas.
    """
    m = _SPEC_RE.match(text)
    if m is None:
        raise ParameterError(f"invalid distribution spec {text!r}; expected name(param=value,...)")
    name = m.group(1).lower()
    factory = _FACTORIES.get(name)
    if factory is None:
        raise ParameterError(f"unknown distribution {name!r}; choose from {sorted(set(_FACTORIES))}")
    kwargs: dict[str, float] = {}
    body = m.group(2)
    if body:
        for item in body.split(","):
            if "=" not in item:
                raise ParameterError(f"bad parameter {item!r} in {text!r}; expected name=value")
            key, _, value = item.partition("=")
            try:
                kwargs[key.strip().lower()] = float(value)
            except ValueError:
                raise ParameterError(f"bad numeric value {value!r} in {text!r}") from None
    if factory is chi_squared and "df" in kwargs:
        kwargs["df"] = int(kwargs["df"]) if kwargs["df"] == int(kwargs["df"]) else kwargs["df"]
    try:
        return factory(**kwargs)
    except TypeError as exc:
        raise ParameterError(f"bad parameters for {name}: {exc}") from None


def split_spec_list(text: str) -> list[str]:
    """Split comma-separated specs at top level, ignoring commas inside
    parentheses."""
    parts: list[str] = []
    depth = 0
    current = []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(current))
            current = []
        else:
            current.append(ch)
    parts.append("".join(current))
    return [p for p in (s.strip() for s in parts) if p]
