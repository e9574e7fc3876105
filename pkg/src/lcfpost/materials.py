"""Scalar material chain from elastic von Mises stress to deterministic life.

The chain is Neuber shakedown (elastic to elastic-plastic stress),
Ramberg-Osgood (stress amplitude to strain amplitude), and the
Coffin-Manson-Basquin equation solved for the cycle count.  Both root
solves exploit monotonicity and convexity of their residuals, so the
safeguarded Newton iterations converge monotonically from a one-sided
start; each array entry iterates independently of the batch it arrives
in, which keeps results bit-identical across batch compositions.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

__all__ = [
    "RambergOsgoodParams", "CMBParams", "MaterialParams",
    "ramberg_osgood_strain", "neuber_shakedown",
    "cmb_strain", "cmb_life", "life_scale_from_elastic_stress",
    "load_material", "save_material", "MATERIAL_KEYS",
]

MIN_LIFE = 0.25     # cycles; strain amplitudes above the curve clamp here

MATERIAL_KEYS = ("E", "nu", "K", "n_ro", "sigma_f", "b", "eps_f", "c",
                 "m_weibull", "K_t")


@dataclass(frozen=True)
class RambergOsgoodParams:
    """Cyclic stress-strain curve: hardening coefficient and exponent."""

    K: float
    n: float
    E: float

    def __post_init__(self):
        if not self.K > 0:
            raise ValueError(f"hardening coefficient must be positive, got {self.K}")
        if not 0.0 < self.n < 1.0:
            raise ValueError(f"hardening exponent must lie in (0, 1), got {self.n}")
        if not self.E > 0:
            raise ValueError(f"Young's modulus must be positive, got {self.E}")


@dataclass(frozen=True)
class CMBParams:
    """Strain-life curve coefficients and exponents."""

    sigma_f: float
    b: float
    eps_f: float
    c: float
    E: float

    def __post_init__(self):
        if not self.sigma_f >= 0:
            raise ValueError(f"fatigue strength coefficient must be >= 0, "
                             f"got {self.sigma_f}")
        if not self.eps_f >= 0:
            raise ValueError(f"fatigue ductility coefficient must be >= 0, "
                             f"got {self.eps_f}")
        if not self.sigma_f + self.eps_f > 0:
            raise ValueError("strain-life curve needs at least one positive "
                             "coefficient")
        if self.sigma_f > 0 and not self.b < 0:
            raise ValueError(f"fatigue strength exponent must be negative, got {self.b}")
        if self.eps_f > 0 and not self.c < 0:
            raise ValueError(f"fatigue ductility exponent must be negative, got {self.c}")
        if not self.E > 0:
            raise ValueError(f"Young's modulus must be positive, got {self.E}")


@dataclass(frozen=True)
class MaterialParams:
    """Complete parameter set for the life model and the hazard shape."""

    E: float
    nu: float
    K: float
    n_ro: float
    sigma_f: float
    b: float
    eps_f: float
    c: float
    m_weibull: float
    K_t: float = 1.0

    def __post_init__(self):
        # delegate range checks to the sub-parameter constructors
        self.ramberg_osgood
        self.cmb
        if not -1.0 < self.nu < 0.5:
            raise ValueError(f"Poisson ratio must lie in (-1, 0.5), got {self.nu}")
        if not self.m_weibull > 0:
            raise ValueError(f"Weibull shape must be positive, got {self.m_weibull}")
        if not self.K_t >= 1.0:
            raise ValueError(f"notch factor must be >= 1, got {self.K_t}")

    @property
    def ramberg_osgood(self):
        return RambergOsgoodParams(K=self.K, n=self.n_ro, E=self.E)

    @property
    def cmb(self):
        return CMBParams(sigma_f=self.sigma_f, b=self.b, eps_f=self.eps_f,
                         c=self.c, E=self.E)


def _as_array(x, name):
    a = np.asarray(x, dtype=float)
    if np.any(a < 0):
        raise ValueError(f"{name} must be non-negative")
    return a, a.ndim == 0


def ramberg_osgood_strain(stress, params):
    """Total strain amplitude for a stress amplitude.

    Evaluates stress/E + (stress/K)**(1/n); strictly increasing.
    Accepts scalars or arrays; negative input raises ValueError.
    """
    s, scalar = _as_array(stress, "stress amplitude")
    out = s / params.E + np.power(s / params.K, 1.0 / params.n)
    return float(out) if scalar else out


def neuber_shakedown(elastic_stress, K_t, params):
    """Elastic-plastic von Mises stress from the elastic solution.

    Solves (K_t * s_e)**2 / E = s**2 / E + s * (s/K)**(1/n) for the
    unique root s in [0, K_t * s_e].  The residual is convex and
    increasing in s, so Newton from the elastic value converges
    monotonically downward; iteration stops when the relative residual
    drops below 1e-13.

    Raises
    ------
    ValueError
        On negative input.
    RuntimeError
        If the iteration fails to converge (does not occur for valid
        parameters; guarded against regardless).
    """
    se, scalar = _as_array(elastic_stress, "elastic stress")
    target = np.square(K_t * se) / params.E
    x = np.array(K_t * se, dtype=float, copy=True, ndmin=1)
    tgt = np.atleast_1d(target)
    active = x > 0.0
    p = 1.0 / params.n
    kpow = params.K ** (-p)
    for _ in range(100):
        if not active.any():
            break
        xa = x[active]
        plastic = kpow * np.power(xa, p)
        resid = xa * xa / params.E + xa * plastic - tgt[active]
        deriv = 2.0 * xa / params.E + (1.0 + p) * plastic
        step = resid / deriv
        xa = xa - step
        x[active] = xa
        done = np.abs(resid) <= 1e-13 * tgt[active]
        idx = np.flatnonzero(active)
        active[idx[done]] = False
    if active.any():
        worst = int(np.flatnonzero(active)[0])
        raise RuntimeError(
            f"Neuber iteration failed to converge for elastic stress "
            f"{np.atleast_1d(se).ravel()[worst]!r}")
    out = x if not scalar else float(x[0])
    return out


def cmb_strain(n_cycles, params):
    """Strain amplitude on the strain-life curve at a cycle count.

    Evaluates (sigma_f/E) * (2N)**b + eps_f * (2N)**c; infinite life
    maps to zero strain.  Accepts scalars or arrays.
    """
    n, scalar = _as_array(n_cycles, "cycle count")
    if np.any(n <= 0):
        raise ValueError("cycle count must be positive")
    with np.errstate(invalid="ignore"):
        two_n = 2.0 * n
        out = (params.sigma_f / params.E) * np.power(two_n, params.b)
        if params.eps_f > 0:
            out = out + params.eps_f * np.power(two_n, params.c)
    out = np.where(np.isinf(n), 0.0, out)
    return float(out) if scalar else out


def cmb_life(strain, params, warn=True):
    """Deterministic life: invert the strain-life curve.

    Solves strain = (sigma_f/E) * (2N)**b + eps_f * (2N)**c for N.  In
    log(2N) the residual is a convex decreasing sum of exponentials, so
    Newton from the larger of the two single-term inversions (both lower
    bounds on the root) converges monotonically upward.  Single-term
    curves use the closed form directly.

    Strain amplitudes above the curve's value at N = 0.25 clamp to
    N = 0.25; ``warn=True`` emits a warning when that happens.

    Raises
    ------
    ValueError
        If any strain amplitude is not positive.
    """
    eps, scalar = _as_array(strain, "strain amplitude")
    if np.any(eps <= 0):
        raise ValueError("strain amplitude must be positive")
    a = params.sigma_f / params.E
    bb = params.b
    be = params.eps_f
    cc = params.c
    eps1 = np.atleast_1d(np.asarray(eps, dtype=float))
    if be == 0.0:
        y = np.log(eps1 / a) / bb            # log(2N), single-term closed form
    elif a == 0.0:
        y = np.log(eps1 / be) / cc
    else:
        y = np.maximum(np.log(eps1 / a) / bb, np.log(eps1 / be) / cc)
        active = np.ones(y.shape, dtype=bool)
        for _ in range(100):
            if not active.any():
                break
            ya = y[active]
            ta = a * np.exp(bb * ya)
            tb = be * np.exp(cc * ya)
            resid = ta + tb - eps1[active]
            deriv = bb * ta + cc * tb
            step = resid / deriv
            y[active] = ya - step
            done = np.abs(resid) <= 1e-14 * eps1[active]
            idx = np.flatnonzero(active)
            active[idx[done]] = False
        if active.any():
            worst = int(np.flatnonzero(active)[0])
            raise RuntimeError(
                f"life solve failed to converge for strain {eps1[worst]!r}")
    n = 0.5 * np.exp(y)
    low = n < MIN_LIFE
    if low.any():
        if warn:
            warnings.warn(
                f"{int(low.sum())} strain amplitude(s) above the curve at "
                f"N = {MIN_LIFE}; life clamped", stacklevel=2)
        n = np.where(low, MIN_LIFE, n)
    return float(n[0]) if scalar else n


def life_scale_from_elastic_stress(elastic_stress, params,
                                   halve_before_shakedown=True, warn=True):
    """Deterministic life from the elastic von Mises stress.

    Chains Neuber shakedown, Ramberg-Osgood, and the strain-life
    inversion.  ``halve_before_shakedown`` selects where the
    range-to-amplitude factor 1/2 enters: before the Neuber inversion
    (default, the literal reading) or after it.  Zero stress returns the
    infinite-life sentinel (``inf``), whose negative Weibull power is
    exactly zero in the hazard integral.
    """
    se, scalar = _as_array(elastic_stress, "elastic stress")
    se1 = np.atleast_1d(np.asarray(se, dtype=float))
    out = np.full(se1.shape, np.inf)
    pos = se1 > 0.0
    if pos.any():
        if halve_before_shakedown:
            sa = neuber_shakedown(0.5 * se1[pos], params.K_t, params.ramberg_osgood)
        else:
            sa = 0.5 * neuber_shakedown(se1[pos], params.K_t, params.ramberg_osgood)
        ea = ramberg_osgood_strain(sa, params.ramberg_osgood)
        out[pos] = cmb_life(ea, params.cmb, warn=warn)
    return float(out[0]) if scalar else out


# ---------------------------------------------------------------------------
# parameter file

def load_material(path):
    """Read material parameters from a flat key-value text file.

    Records are ``key value`` or ``key = value``, one per line; ``#``
    starts a comment.  Keys: E, nu, K, n_ro, sigma_f, b, eps_f, c,
    m_weibull, K_t (K_t optional, default 1).
    """
    values = {}
    with open(path) as handle:
        for lineno, raw in enumerate(handle, start=1):
            text = raw.split("#", 1)[0].strip()
            if not text:
                continue
            parts = text.replace("=", " ").split()
            if len(parts) != 2:
                raise ValueError(
                    f"{path}: line {lineno}: expected 'key value', got {text!r}")
            key, val = parts
            if key not in MATERIAL_KEYS:
                raise ValueError(f"{path}: line {lineno}: unknown key {key!r}")
            if key in values:
                raise ValueError(f"{path}: line {lineno}: duplicate key {key!r}")
            try:
                values[key] = float(val)
            except ValueError:
                raise ValueError(
                    f"{path}: line {lineno}: bad number {val!r} for {key!r}")
    missing = [k for k in MATERIAL_KEYS if k != "K_t" and k not in values]
    if missing:
        raise ValueError(f"{path}: missing material key(s): {', '.join(missing)}")
    return MaterialParams(**values)


def save_material(params, path):
    """Write material parameters in the flat key-value format."""
    with open(path, "w") as handle:
        for key in MATERIAL_KEYS:
            handle.write(f"{key} = {getattr(params, key)!r}\n")
