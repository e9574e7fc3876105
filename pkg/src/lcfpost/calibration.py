"""Maximum-likelihood calibration from strain-controlled specimen tests.

Each specimen contributes a Weibull likelihood term with scale
eta_i = N_det(strain_i) * area_i^{-1/m}: the gauge section is loaded
homogeneously, so the surface hazard integral collapses to the gauge
area times the pointwise hazard.  The controlled strain enters the
strain-life curve directly; no Neuber step is involved, so the
Ramberg-Osgood parameters never affect the likelihood and are excluded
from the fitted subset.

The optimizer is a derivative-free simplex search in a transformed
space (logs of the positive parameters, logs of the negated exponents,
log of m - 1), which turns the sign constraints into an unconstrained
problem.  Restarts from perturbed starts guard against bad simplices;
the best final likelihood wins.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import minimize

from .materials import MaterialParams, cmb_life

__all__ = ["SpecimenRecord", "FitResult", "load_specimens", "save_specimens",
           "specimen_eta", "log_likelihood", "fit_mle", "DEFAULT_FREE"]

SPECIMEN_HEADER = "n_cycles,strain_amplitude,gauge_area"

DEFAULT_FREE = ("sigma_f", "b", "eps_f", "c", "m_weibull")

# parameters that cannot be estimated from strain-controlled data
_UNFITTABLE = ("K", "n_ro", "E", "nu", "K_t")


@dataclass(frozen=True)
class SpecimenRecord:
    """One strain-controlled LCF test: cycles to crack initiation."""

    n_cycles: float
    strain_amplitude: float
    gauge_area: float

    def __post_init__(self):
        for name in ("n_cycles", "strain_amplitude", "gauge_area"):
            v = float(getattr(self, name))
            if not (np.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be positive and finite, got {v}")
            object.__setattr__(self, name, v)


@dataclass(frozen=True)
class FitResult:
    """Fitted parameters with optimizer diagnostics."""

    params: MaterialParams
    log_likelihood: float
    iterations: int
    converged: bool
    best_restart: int


def load_specimens(path):
    """Read specimen records from CSV with the documented header."""
    out = []
    with open(path) as handle:
        header = handle.readline().strip()
        if header != SPECIMEN_HEADER:
            raise ValueError(
                f"{path}: expected header {SPECIMEN_HEADER!r}, got {header!r}")
        for lineno, line in enumerate(handle, start=2):
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != 3:
                raise ValueError(
                    f"{path}: line {lineno}: expected 3 fields, got {len(parts)}")
            try:
                record = SpecimenRecord(n_cycles=float(parts[0]),
                                        strain_amplitude=float(parts[1]),
                                        gauge_area=float(parts[2]))
            except ValueError as exc:
                raise ValueError(f"{path}: line {lineno}: {exc}")
            out.append(record)
    if not out:
        raise ValueError(f"{path}: no specimen records")
    return out


def save_specimens(records, path):
    """Write specimen records as CSV."""
    with open(path, "w") as handle:
        handle.write(SPECIMEN_HEADER + "\n")
        for r in records:
            handle.write(f"{r.n_cycles!r},{r.strain_amplitude!r},{r.gauge_area!r}\n")


def specimen_eta(record, params):
    """Weibull scale of one specimen: N_det(strain) * area^{-1/m}."""
    n_det = cmb_life(record.strain_amplitude, params.cmb, warn=False)
    return n_det * record.gauge_area ** (-1.0 / params.m_weibull)


def _arrays(records):
    n = np.array([r.n_cycles for r in records])
    eps = np.array([r.strain_amplitude for r in records])
    area = np.array([r.gauge_area for r in records])
    return n, eps, area


def _log_likelihood_arrays(n, eps, area, params):
    m = params.m_weibull
    n_det = cmb_life(eps, params.cmb, warn=False)
    eta = n_det * np.power(area, -1.0 / m)
    log_ratio = np.log(n) - np.log(eta)
    ll = np.sum(np.log(m) - np.log(eta) + (m - 1.0) * log_ratio
                - np.exp(m * log_ratio))
    return float(ll) if np.isfinite(ll) else -np.inf


def log_likelihood(records, params):
    """Sum of Weibull log-density terms over the specimen records.

    Returns -inf instead of raising when the evaluation overflows, so
    optimizers can reject bad regions without exception handling.
    """
    if not records:
        raise ValueError("no specimen records")
    return _log_likelihood_arrays(*_arrays(records), params)


_LOG_POSITIVE = ("sigma_f", "eps_f")
_LOG_NEGATED = ("b", "c")


def _to_transformed(params, free):
    z = []
    for name in free:
        v = getattr(params, name)
        if name in _LOG_NEGATED:
            z.append(np.log(-v))
        elif name == "m_weibull":
            if not v > 1.0:
                raise ValueError(
                    f"initial m_weibull must exceed 1 to be fitted, got {v}")
            z.append(np.log(v - 1.0))
        else:
            if not v > 0:
                raise ValueError(
                    f"initial {name} must be positive to be fitted, got {v}")
            z.append(np.log(v))
    return np.array(z)


def _from_transformed(z, params, free):
    updates = {}
    for name, v in zip(free, z):
        if name in _LOG_NEGATED:
            updates[name] = -float(np.exp(v))
        elif name == "m_weibull":
            updates[name] = 1.0 + float(np.exp(v))
        else:
            updates[name] = float(np.exp(v))
    return replace(params, **updates)


def fit_mle(records, initial, free=DEFAULT_FREE, seed=0, restarts=5,
            max_iter=20000):
    """Maximize the specimen likelihood over the chosen free parameters.

    ``initial`` supplies both the starting point and the fixed values;
    ``free`` names the fitted subset (default: the strain-life
    coefficients and the Weibull shape).  The Ramberg-Osgood parameters
    do not enter the likelihood and are rejected if requested.  The fit
    restarts from ``restarts`` perturbed starting points; identical
    seeds give identical results.

    Raises
    ------
    ValueError
        On unfittable parameter names or unusable starting values.
    RuntimeError
        If no restart converges, with per-restart diagnostics.
    """
    if not records:
        raise ValueError("no specimen records")
    bad = [name for name in free if name in _UNFITTABLE]
    if bad:
        raise ValueError(
            f"parameter(s) {bad} cannot be estimated from strain-controlled "
            f"data; supply them as fixed values")
    unknown = [name for name in free if not hasattr(initial, name)]
    if unknown:
        raise ValueError(f"unknown parameter name(s) {unknown}")
    n, eps, area = _arrays(records)
    levels = np.unique(eps).size
    if len(records) < 3 or levels < 2:
        warnings.warn(
            f"under-determined fit: {len(records)} record(s) on {levels} "
            f"strain level(s)", stacklevel=2)
    if np.unique(n).size == 1:
        warnings.warn(
            "all specimens failed at the same cycle count; the Weibull shape "
            "is unbounded above on such data", stacklevel=2)

    def objective(z):
        try:
            params = _from_transformed(z, initial, free)
        except (ValueError, OverflowError):
            return np.inf
        with np.errstate(over="ignore", invalid="ignore"):
            ll = _log_likelihood_arrays(n, eps, area, params)
        return -ll if np.isfinite(ll) else np.inf

    z0 = _to_transformed(initial, free)
    rng = np.random.default_rng(seed)
    attempts = []
    for r in range(restarts):
        start = z0 if r == 0 else z0 + 0.25 * rng.standard_normal(z0.size)
        res = minimize(objective, start, method="Nelder-Mead",
                       options={"maxiter": max_iter, "maxfev": max_iter,
                                "xatol": 1e-10, "fatol": 1e-12})
        attempts.append(res)
    converged = [res for res in attempts if res.success and np.isfinite(res.fun)]
    if not converged:
        detail = "; ".join(
            f"restart {i}: {res.message} (fun={res.fun!r})"
            for i, res in enumerate(attempts))
        raise RuntimeError(f"no restart converged: {detail}")
    best_idx = min(range(len(attempts)),
                   key=lambda i: attempts[i].fun if attempts[i].success else np.inf)
    best = attempts[best_idx]
    params = _from_transformed(best.x, initial, free)
    return FitResult(params=params, log_likelihood=-float(best.fun),
                     iterations=int(best.nit), converged=True,
                     best_restart=best_idx)
