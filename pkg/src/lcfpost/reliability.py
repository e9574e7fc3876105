"""Component-level Weibull failure model assembled from boundary faces.

Integrates the local hazard density N_det^{-m} over the component
surface, face by face, giving the Weibull scale eta of the cycles-to-
crack-initiation distribution, per-face contributions, crack-count
probabilities, and multi-segment aggregation.

Summation order is fixed (ascending element id, then face index) and
compensated, so totals are bit-identical across runs and worker counts.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .fields import ElasticConstants, stress_from_strain, tensor_to_voigt, von_mises
from .materials import MIN_LIFE, life_scale_from_elastic_stress
from .mesh import (FACE_CORNERS, DegenerateElementError, ElementKind,
                   extract_boundary_faces, face_chart, face_chart_matrix,
                   shape_gradients, transform_jacobian)
from .quadrature import tensor_square, triangle_rule

__all__ = [
    "FaceContribution", "ReliabilityResult", "FaceShare",
    "integrate_hazard", "weibull_scale", "pof", "failure_density",
    "crack_count_probability", "aggregate_segments", "top_faces_report",
    "write_pof_csv", "read_pof_csv", "write_faces_csv", "read_faces_csv",
    "write_density_vtk", "read_density_vtk",
]


@dataclass(frozen=True)
class FaceContribution:
    """One boundary face's share of the surface hazard integral."""

    element_id: int
    face_index: int
    hazard: float       # integral of N_det^{-m} over the face, area/cycles^m
    area: float
    density: float      # hazard per unit area
    eta_face: float     # Weibull scale of the face alone


@dataclass(frozen=True)
class ReliabilityResult:
    """Weibull scale and shape plus the per-face breakdown."""

    eta: float
    m: float
    total: float
    contributions: tuple
    skipped_elements: tuple     # element ids dropped as degenerate


@dataclass(frozen=True)
class FaceShare:
    """Ranked-face report row: cumulative hazard share and combined PoF."""

    contribution: FaceContribution
    share: float            # cumulative hazard fraction of the total
    combined_pof: float     # PoF of the top faces up to this row


def _neumaier(values):
    """Compensated sum preserving low-order bits in a fixed order."""
    total = 0.0
    comp = 0.0
    for v in values:
        t = total + v
        if abs(total) >= abs(v):
            comp += (total - t) + v
        else:
            comp += (v - t) + total
        total = t
    return total + comp


def _face_rule(kind, lq):
    if kind is ElementKind.HEX20:
        return tensor_square(lq)
    return triangle_rule(2 * lq - 1)


def _element_faces_hazard(mesh, element, faces, params, lq,
                          halve_before_shakedown):
    """Raw hazard and area for each boundary face of one element.

    Returns a list of (face, hazard, area, clamped point count) tuples,
    or None when the element is degenerate at an integration point.
    """
    constants = params  # MaterialParams carries E and nu
    disp = mesh.element_displacements(element)
    rule = _face_rule(element.kind, lq)
    out = []
    for face in faces:
        xhat = face_chart(element.kind, face.face_index, rule.points)
        g = shape_gradients(element.kind, xhat)
        try:
            jac = transform_jacobian(element, mesh, xhat, gradients=g)
        except DegenerateElementError:
            return None
        d = face_chart_matrix(element.kind, face.face_index)
        tang = jac @ d
        e11 = (tang[:, :, 0] * tang[:, :, 0]).sum(axis=1)
        e12 = (tang[:, :, 0] * tang[:, :, 1]).sum(axis=1)
        e22 = (tang[:, :, 1] * tang[:, :, 1]).sum(axis=1)
        root_g = np.sqrt(e11 * e22 - e12 * e12)
        ref_grad = np.einsum("ki,nkj->nij", disp, g)
        grad = np.swapaxes(
            np.linalg.solve(np.swapaxes(jac, 1, 2), np.swapaxes(ref_grad, 1, 2)),
            1, 2)
        strain = tensor_to_voigt(grad)
        sigma = stress_from_strain(strain, ElasticConstants(constants.E, constants.nu))
        sv = von_mises(sigma)
        n_det = life_scale_from_elastic_stress(
            sv, params, halve_before_shakedown=halve_before_shakedown, warn=False)
        clamped = int(np.count_nonzero(n_det == MIN_LIFE))
        with np.errstate(divide="ignore"):
            inv = np.power(n_det, -params.m_weibull)
        hazard = math.fsum(root_g * inv * rule.weights)
        area = math.fsum(root_g * rule.weights)
        out.append((face, hazard, area, clamped))
    return out


def integrate_hazard(mesh, params, lq=4, *, workers=1, life_scale=1.0,
                     halve_before_shakedown=True):
    """Surface integral of the local hazard over all boundary faces.

    For every boundary face, evaluates the elastic strain field at the
    face quadrature points, chains it through von Mises, Neuber
    shakedown, Ramberg-Osgood, and the strain-life inversion to the
    deterministic life, and accumulates sqrt(g) * N_det^{-m} * weight.
    Hex faces use the l_q x l_q tensor rule, tet faces a triangle rule
    of matching order 2*l_q - 1.

    Elements whose Jacobian determinant drops to the degeneracy
    tolerance at any face integration point are skipped with a warning
    and reported in the result.  ``life_scale`` multiplies every
    deterministic life (and hence eta) exactly; ``workers`` > 1
    evaluates elements concurrently with an unchanged, deterministic
    reduction order.

    Raises
    ------
    RuntimeError
        If every element carrying boundary faces is degenerate.
    """
    faces = extract_boundary_faces(mesh)
    m = params.m_weibull
    if not faces:
        warnings.warn("mesh has no boundary faces; hazard total is zero",
                      stacklevel=2)
        return ReliabilityResult(eta=math.inf, m=m, total=0.0,
                                 contributions=(), skipped_elements=())
    by_element = {}
    for face in faces:
        by_element.setdefault(face.element_id, []).append(face)
    elements = {e.id: e for e in mesh.elements}
    tasks = sorted(by_element.items())

    def run(item):
        eid, efaces = item
        return eid, _element_faces_hazard(
            mesh, elements[eid], efaces, params, lq, halve_before_shakedown)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, tasks))
    else:
        results = [run(t) for t in tasks]

    skipped = []
    rows = []
    clamped_total = 0
    for eid, got in results:
        if got is None:
            skipped.append(eid)
            continue
        for face, hazard, area, clamped in got:
            rows.append((face, hazard, area))
            clamped_total += clamped
    if skipped and not rows:
        raise RuntimeError(
            f"all {len(skipped)} boundary element(s) degenerate; "
            "nothing to integrate")
    if skipped:
        warnings.warn(
            f"skipped {len(skipped)} degenerate element(s): "
            f"{skipped[:10]}{'...' if len(skipped) > 10 else ''}", stacklevel=2)
    if clamped_total:
        warnings.warn(
            f"{clamped_total} integration point(s) above the strain-life "
            f"curve at N = {MIN_LIFE}; life clamped", stacklevel=2)

    rows.sort(key=lambda r: (r[0].element_id, r[0].face_index))
    base_total = _neumaier(r[1] for r in rows)
    scale_m = life_scale ** (-m)
    contributions = []
    for face, hazard, area in rows:
        base_eta = hazard ** (-1.0 / m) if hazard > 0.0 else math.inf
        contributions.append(FaceContribution(
            element_id=face.element_id,
            face_index=face.face_index,
            hazard=scale_m * hazard,
            area=area,
            density=scale_m * hazard / area,
            eta_face=life_scale * base_eta))
    eta = life_scale * weibull_scale(base_total, m)
    return ReliabilityResult(eta=eta, m=m, total=scale_m * base_total,
                             contributions=tuple(contributions),
                             skipped_elements=tuple(skipped))


def weibull_scale(total, m):
    """Weibull scale eta = total^{-1/m} of the component distribution.

    A zero total (no loaded surface) gives infinite eta, meaning PoF is
    identically zero.
    """
    if total < 0:
        raise ValueError(f"hazard total must be non-negative, got {total}")
    if total == 0.0:
        return math.inf
    return total ** (-1.0 / m)


def pof(n, eta, m):
    """Probability of at least one crack initiation by cycle n.

    Weibull law 1 - exp(-(n/eta)^m), evaluated via expm1 so small
    probabilities keep full precision.  Accepts scalars or arrays.
    """
    n = np.asarray(n, dtype=float)
    if np.any(n < 0):
        raise ValueError("cycle count must be non-negative")
    with np.errstate(divide="ignore"):
        z = np.power(np.divide(n, eta), m)
    out = -np.expm1(-z)
    return float(out) if out.ndim == 0 else out


def failure_density(n, eta, m):
    """Probability density of the cycles-to-initiation distribution."""
    n = np.asarray(n, dtype=float)
    if np.any(n < 0):
        raise ValueError("cycle count must be non-negative")
    with np.errstate(divide="ignore", invalid="ignore"):
        r = np.divide(n, eta)
        out = (m / eta) * np.power(r, m - 1.0) * np.exp(-np.power(r, m))
        out = np.where(np.isinf(eta) | np.isinf(n), 0.0, out)
    return float(out) if out.ndim == 0 else out


def crack_count_probability(q, z):
    """Poisson probability of exactly q crack initiations.

    ``z`` is the expected count, (n/eta)^m for a region observed to
    cycle n.  Evaluated in log space for stability at large q.
    """
    if q < 0 or q != int(q):
        raise ValueError(f"crack count must be a non-negative integer, got {q}")
    if z < 0:
        raise ValueError(f"expected count must be non-negative, got {z}")
    q = int(q)
    if z == 0.0:
        return 1.0 if q == 0 else 0.0
    return float(np.exp(-z + q * np.log(z) - gammaln(q + 1.0)))


def aggregate_segments(p_single, count):
    """Failure probability of ``count`` independent identical segments.

    Returns 1 - (1 - p)^count, computed through log1p/expm1 so small
    per-segment probabilities keep precision.
    """
    if not 0.0 <= p_single <= 1.0:
        raise ValueError(f"probability must lie in [0, 1], got {p_single}")
    if count < 1 or count != int(count):
        raise ValueError(f"segment count must be a positive integer, got {count}")
    if p_single == 1.0:
        return 1.0
    return -math.expm1(count * math.log1p(-p_single))


def top_faces_report(contributions, n, m):
    """Faces ranked by crack-initiation density, with cumulative effect.

    Each row reports the cumulative share of the hazard total carried by
    the densest faces so far and the combined PoF those faces alone
    would give at cycle n.  Ties are broken by (element id, face index).
    """
    ranked = sorted(contributions,
                    key=lambda c: (-c.density, c.element_id, c.face_index))
    total = math.fsum(c.hazard for c in ranked)
    rows = []
    running = 0.0
    nm = n ** m
    for c in ranked:
        running += c.hazard
        share = running / total if total > 0.0 else 0.0
        rows.append(FaceShare(contribution=c, share=share,
                              combined_pof=-math.expm1(-nm * running)))
    return rows


# ---------------------------------------------------------------------------
# file output (and readers for round-trip checks)

def write_pof_csv(path, n_values, pof_values):
    """Write the PoF curve as CSV with header ``n,pof``."""
    with open(path, "w") as handle:
        handle.write("n,pof\n")
        for n, p in zip(n_values, pof_values):
            handle.write(f"{float(n)!r},{float(p)!r}\n")


def read_pof_csv(path):
    """Read a PoF curve written by ``write_pof_csv``."""
    with open(path) as handle:
        header = handle.readline().strip()
        if header != "n,pof":
            raise ValueError(f"{path}: expected header 'n,pof', got {header!r}")
        n = []
        p = []
        for line in handle:
            line = line.strip()
            if not line:
                continue
            a, b = line.split(",")
            n.append(float(a))
            p.append(float(b))
    return np.array(n), np.array(p)


_FACES_HEADER = "element_id,face,area,hazard,density,eta_face"


def write_faces_csv(path, contributions):
    """Write the per-face report as CSV."""
    with open(path, "w") as handle:
        handle.write(_FACES_HEADER + "\n")
        for c in contributions:
            handle.write(f"{c.element_id},{c.face_index},{c.area!r},"
                         f"{c.hazard!r},{c.density!r},{c.eta_face!r}\n")


def read_faces_csv(path):
    """Read a per-face report written by ``write_faces_csv``."""
    out = []
    with open(path) as handle:
        header = handle.readline().strip()
        if header != _FACES_HEADER:
            raise ValueError(
                f"{path}: expected header {_FACES_HEADER!r}, got {header!r}")
        for line in handle:
            line = line.strip()
            if not line:
                continue
            eid, face, area, hazard, density, eta_face = line.split(",")
            out.append(FaceContribution(
                element_id=int(eid), face_index=int(face), area=float(area),
                hazard=float(hazard), density=float(density),
                eta_face=float(eta_face)))
    return out


def write_density_vtk(path, mesh, contributions, reference_cycles, m):
    """Export the face densities as a legacy-VTK polygon file.

    Faces become flat corner polygons (mid-edge curvature is dropped for
    viewing).  Two cell scalars are written: ``hazard_density`` (hazard
    per unit area) and ``crack_density``, the expected crack-initiation
    count per unit area at ``reference_cycles`` cycles, which is the
    hazard density times reference_cycles^m.
    """
    elements = {e.id: e for e in mesh.elements}
    point_index = {}
    points = []
    polys = []
    for c in contributions:
        e = elements[c.element_id]
        corners = FACE_CORNERS[e.kind][c.face_index - 1]
        ids = [e.node_ids[i] for i in corners]
        for nid in ids:
            if nid not in point_index:
                point_index[nid] = len(points)
                points.append(mesh.nodes[nid].coords)
        polys.append([point_index[nid] for nid in ids])
    nm = reference_cycles ** m if math.isfinite(reference_cycles) else 0.0
    with open(path, "w") as handle:
        handle.write("# vtk DataFile Version 2.0\n")
        handle.write("crack initiation density on boundary faces\n")
        handle.write("ASCII\nDATASET POLYDATA\n")
        handle.write(f"POINTS {len(points)} double\n")
        for x, y, z in points:
            handle.write(f"{x!r} {y!r} {z!r}\n")
        size = sum(len(p) + 1 for p in polys)
        handle.write(f"POLYGONS {len(polys)} {size}\n")
        for p in polys:
            handle.write(" ".join(str(v) for v in [len(p)] + p) + "\n")
        handle.write(f"CELL_DATA {len(polys)}\n")
        handle.write("SCALARS hazard_density double 1\nLOOKUP_TABLE default\n")
        for c in contributions:
            handle.write(f"{c.density!r}\n")
        handle.write("SCALARS crack_density double 1\nLOOKUP_TABLE default\n")
        for c in contributions:
            handle.write(f"{c.density * nm!r}\n")


def read_density_vtk(path):
    """Read points, polygons, and cell scalars from a legacy-VTK file."""
    with open(path) as handle:
        lines = [ln.rstrip("\n") for ln in handle]
    idx = 0
    points = []
    polys = []
    scalars = {}
    while idx < len(lines):
        line = lines[idx].strip()
        if line.startswith("POINTS"):
            count = int(line.split()[1])
            for k in range(count):
                points.append([float(v) for v in lines[idx + 1 + k].split()])
            idx += count
        elif line.startswith("POLYGONS"):
            count = int(line.split()[1])
            for k in range(count):
                vals = [int(v) for v in lines[idx + 1 + k].split()]
                polys.append(tuple(vals[1:1 + vals[0]]))
            idx += count
        elif line.startswith("SCALARS"):
            name = line.split()[1]
            count = len(polys)
            values = [float(lines[idx + 2 + k]) for k in range(count)]
            scalars[name] = np.array(values)
            idx += count + 1
        idx += 1
    return np.array(points), polys, scalars
