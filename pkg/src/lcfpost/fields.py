"""Displacement, strain, stress, and von Mises fields from nodal data.

Symmetric tensors are stored as 6-vectors in the order
(11, 22, 33, 12, 13, 23) with tensor (not engineering) shear
components.  Units are not enforced; the stress unit of E must match
the units of the material parameters used downstream.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .mesh import shape_functions, shape_gradients, transform_jacobian

__all__ = ["ElasticConstants", "displacement_at", "strain_at",
           "stress_from_strain", "von_mises", "voigt_to_tensor",
           "tensor_to_voigt"]


@dataclass(frozen=True)
class ElasticConstants:
    """Isotropic linear elasticity: Young's modulus and Poisson ratio."""

    E: float
    nu: float

    def __post_init__(self):
        if not self.E > 0:
            raise ValueError(f"Young's modulus must be positive, got {self.E}")
        if not -1.0 < self.nu < 0.5:
            raise ValueError(f"Poisson ratio must lie in (-1, 0.5), got {self.nu}")

    @property
    def lam(self):
        """First Lame coefficient."""
        return self.E * self.nu / ((1.0 + self.nu) * (1.0 - 2.0 * self.nu))

    @property
    def mu(self):
        """Shear modulus."""
        return self.E / (2.0 * (1.0 + self.nu))


def voigt_to_tensor(v):
    """Expand (..., 6) component vectors to symmetric (..., 3, 3) tensors."""
    v = np.asarray(v, dtype=float)
    t = np.empty(v.shape[:-1] + (3, 3))
    t[..., 0, 0] = v[..., 0]
    t[..., 1, 1] = v[..., 1]
    t[..., 2, 2] = v[..., 2]
    t[..., 0, 1] = t[..., 1, 0] = v[..., 3]
    t[..., 0, 2] = t[..., 2, 0] = v[..., 4]
    t[..., 1, 2] = t[..., 2, 1] = v[..., 5]
    return t


def tensor_to_voigt(t):
    """Store symmetric (..., 3, 3) tensors as (..., 6) component vectors."""
    t = np.asarray(t, dtype=float)
    sym = 0.5 * (t + np.swapaxes(t, -1, -2))
    return np.stack([sym[..., 0, 0], sym[..., 1, 1], sym[..., 2, 2],
                     sym[..., 0, 1], sym[..., 0, 2], sym[..., 1, 2]], axis=-1)


def displacement_at(element, mesh, xhat, displacements=None):
    """Interpolated displacement at reference point(s).

    ``displacements`` overrides the mesh's stored nodal values when
    given (an (n_sh, 3) array).  Returns (3,) for a single point,
    (n, 3) for a batch.
    """
    if displacements is None:
        displacements = mesh.element_displacements(element)
    psi = shape_functions(element.kind, xhat)
    return psi @ displacements


def strain_at(element, mesh, xhat, displacements=None, gradients=None,
              jacobian=None):
    """Linearized strain tensor at reference point(s), in 6-vector form.

    Differentiates the displacement interpolant in reference
    coordinates, maps through the inverse transformation Jacobian, and
    symmetrizes.  Exact for displacement fields in the element's
    polynomial space.  Returns (6,) or (n, 6).  ``gradients`` may carry
    precomputed ``shape_gradients`` for the same points; ``jacobian``
    may carry the matching ``transform_jacobian`` result, which is then
    assumed to be already degeneracy-checked.

    Raises
    ------
    DegenerateElementError
        If the transformation Jacobian is singular at a supplied point.
    """
    if displacements is None:
        displacements = mesh.element_displacements(element)
    x = np.asarray(xhat, dtype=float)
    single = x.ndim == 1
    pts = np.atleast_2d(x)
    if gradients is None:
        g = np.asarray(shape_gradients(element.kind, pts))   # (n, n_sh, 3)
    else:
        g = np.asarray(gradients, dtype=float)
        if g.ndim == 2:
            g = g[None]
    if jacobian is None:
        jac = transform_jacobian(element, mesh, pts, gradients=g)  # (n, 3, 3)
    else:
        jac = np.asarray(jacobian, dtype=float)
        if jac.ndim == 2:
            jac = jac[None]
    # du_i/dxhat_j, then du/dx = (du/dxhat) J^{-1} via solving J^T X^T = G^T
    ref_grad = np.einsum("ki,nkj->nij", displacements, g)
    grad = np.linalg.solve(np.swapaxes(jac, 1, 2), np.swapaxes(ref_grad, 1, 2))
    grad = np.swapaxes(grad, 1, 2)
    out = tensor_to_voigt(grad)
    return out[0] if single else out


def stress_from_strain(strain, constants):
    """Isotropic linear stress from strain, both in 6-vector form.

    Applies sigma = lambda tr(eps) I + 2 mu eps componentwise.
    """
    e = np.asarray(strain, dtype=float)
    lam, mu = constants.lam, constants.mu
    trace = e[..., 0] + e[..., 1] + e[..., 2]
    s = 2.0 * mu * e
    s[..., :3] += lam * trace[..., None]
    return s


def von_mises(stress):
    """Von Mises equivalent stress from 6-vector or 3x3 tensor input.

    Computed from the second deviatoric invariant sqrt(3/2 s:s), which
    equals the principal-stress form without an eigenvalue solve.
    Accepts (..., 6) or (..., 3, 3) arrays; returns the matching scalar
    or (...)-shaped array, always >= 0.
    """
    s = np.asarray(stress, dtype=float)
    if s.ndim >= 2 and s.shape[-2:] == (3, 3):
        s = tensor_to_voigt(s)
    mean = (s[..., 0] + s[..., 1] + s[..., 2]) / 3.0
    d0 = s[..., 0] - mean
    d1 = s[..., 1] - mean
    d2 = s[..., 2] - mean
    ss = (d0 * d0 + d1 * d1 + d2 * d2
          + 2.0 * (s[..., 3] ** 2 + s[..., 4] ** 2 + s[..., 5] ** 2))
    out = np.sqrt(1.5 * ss)
    return float(out) if out.ndim == 0 else out
