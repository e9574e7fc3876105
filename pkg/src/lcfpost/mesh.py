"""Mesh model: serendipity hexahedra and quadratic tetrahedra.

Holds FEA output (nodes, connectivity, nodal displacements), evaluates
shape functions and geometric transformations on the reference cells,
and identifies boundary faces by corner-node-set uniqueness.

Reference cells
---------------
Hex20 lives on the unit brick [0,1]^3, Tet10 on the unit simplex
{x, y, z >= 0, x + y + z <= 1}.  Node ordering follows the de-facto
commercial convention:

Hex20 (C3D20 style)::

       7 ---14--- 6
      /|         /|          corners 0..7: bottom quad (z=0) counter-
    15 19       13 18        clockwise, then top quad (z=1);
    /  |        /  |         nodes  8..11: bottom edge midpoints
   4 ---12--- 5    |                       (0-1, 1-2, 2-3, 3-0);
   |   3 ---10|--- 2         nodes 12..15: top edge midpoints
   16 /       17  /                        (4-5, 5-6, 6-7, 7-4);
   | 11       | 9            nodes 16..19: vertical edge midpoints
   |/         |/                           (0-4, 1-5, 2-6, 3-7).
   0 --- 8--- 1

Tet10 (C3D10 style): corners 0 (origin), 1 (x), 2 (y), 3 (z); then
midpoints of edges 0-1, 1-2, 0-2, 0-3, 1-3, 2-3.

Boundary faces carry a local face index j in {1..6} (hex) or {1..4}
(tet); the face chart maps s in [0,1]^2, resp. the unit triangle, to
reference-cell coordinates by fixing one coordinate (hex faces 1/2:
first coordinate 0/1, faces 3/4: second, faces 5/6: third; tet faces
1/2/3: one coordinate 0, face 4: the inclined plane x + y + z = 1).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

__all__ = [
    "ElementKind", "Node", "Element", "Mesh", "BoundaryFace",
    "MeshParseError", "DegenerateElementError", "DegenerateFaceError",
    "reference_nodes", "shape_functions", "shape_gradients",
    "geometric_transform", "transform_jacobian",
    "extract_boundary_faces", "face_chart", "face_chart_matrix",
    "face_chart_gram", "read_mesh", "write_mesh",
]

DEGENERACY_RTOL = 1e-12     # det(J) must exceed this times h^3


class MeshParseError(Exception):
    """Raised on malformed mesh files; message carries the line number."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class DegenerateElementError(Exception):
    """Jacobian determinant at or below tolerance somewhere in an element."""

    def __init__(self, element_id, det, tol):
        super().__init__(
            f"element {element_id}: Jacobian determinant {det:.3e} "
            f"below tolerance {tol:.3e}")
        self.element_id = element_id
        self.det = det
        self.tol = tol


class DegenerateFaceError(Exception):
    """Non-positive Gram determinant on a boundary face."""

    def __init__(self, element_id, face_index, gram):
        super().__init__(
            f"element {element_id} face {face_index}: "
            f"non-positive Gram determinant {gram:.3e}")
        self.element_id = element_id
        self.face_index = face_index


class ElementKind(Enum):
    HEX20 = "HEX20"
    TET10 = "TET10"

    @property
    def n_sh(self):
        return 20 if self is ElementKind.HEX20 else 10

    @property
    def n_faces(self):
        return 6 if self is ElementKind.HEX20 else 4


@dataclass(frozen=True)
class Node:
    """FEA node: label, position, and displacement vector."""

    id: int
    coords: tuple
    displacement: tuple = (0.0, 0.0, 0.0)

    def __post_init__(self):
        c = tuple(float(v) for v in self.coords)
        u = tuple(float(v) for v in self.displacement)
        if len(c) != 3 or len(u) != 3:
            raise ValueError(f"node {self.id}: coords and displacement must be 3-vectors")
        if not all(np.isfinite(c)) or not all(np.isfinite(u)):
            raise ValueError(f"node {self.id}: non-finite coordinates or displacement")
        object.__setattr__(self, "coords", c)
        object.__setattr__(self, "displacement", u)


@dataclass(frozen=True)
class Element:
    """Finite element: label, kind, ordered node labels."""

    id: int
    kind: ElementKind
    node_ids: tuple

    def __post_init__(self):
        ids = tuple(int(i) for i in self.node_ids)
        if len(ids) != self.kind.n_sh:
            raise ValueError(
                f"element {self.id}: {self.kind.value} needs "
                f"{self.kind.n_sh} nodes, got {len(ids)}")
        object.__setattr__(self, "node_ids", ids)


@dataclass
class Mesh:
    """Node and element collections; treat as read-only after construction."""

    nodes: dict
    elements: list
    _coords_cache: dict = field(default_factory=dict, repr=False, compare=False)
    _disp_cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if not self.elements:
            raise ValueError("mesh has no elements")
        seen = set()
        for e in self.elements:
            if e.id in seen:
                raise ValueError(f"duplicate element id {e.id}")
            seen.add(e.id)
            missing = [i for i in e.node_ids if i not in self.nodes]
            if missing:
                raise ValueError(
                    f"element {e.id} references unknown node(s) {missing}")

    def element_coords(self, element):
        """Node coordinates of one element as an (n_sh, 3) array."""
        got = self._coords_cache.get(element.id)
        if got is None:
            got = np.array([self.nodes[i].coords for i in element.node_ids])
            got.flags.writeable = False
            self._coords_cache[element.id] = got
        return got

    def element_displacements(self, element):
        """Nodal displacements of one element as an (n_sh, 3) array."""
        got = self._disp_cache.get(element.id)
        if got is None:
            got = np.array([self.nodes[i].displacement for i in element.node_ids])
            got.flags.writeable = False
            self._disp_cache[element.id] = got
        return got


@dataclass(frozen=True)
class BoundaryFace:
    """A face whose corner-node set occurs in exactly one element."""

    element_id: int
    face_index: int     # 1-based local face index
    corner_ids: tuple   # global node labels of the face corners


# ---------------------------------------------------------------------------
# reference nodes and shape functions

def _hex20_reference():
    corners = [(0, 0, 0), (1, 0, 0), (1, 1, 0), (0, 1, 0),
               (0, 0, 1), (1, 0, 1), (1, 1, 1), (0, 1, 1)]
    edges = [(0, 1), (1, 2), (2, 3), (3, 0),
             (4, 5), (5, 6), (6, 7), (7, 4),
             (0, 4), (1, 5), (2, 6), (3, 7)]
    pts = [np.array(c, dtype=float) for c in corners]
    for a, b in edges:
        pts.append(0.5 * (pts[a] + pts[b]))
    return np.array(pts)


def _tet10_reference():
    corners = [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)]
    edges = [(0, 1), (1, 2), (0, 2), (0, 3), (1, 3), (2, 3)]
    pts = [np.array(c, dtype=float) for c in corners]
    for a, b in edges:
        pts.append(0.5 * (pts[a] + pts[b]))
    return np.array(pts)


_REF_NODES = {ElementKind.HEX20: _hex20_reference(),
              ElementKind.TET10: _tet10_reference()}
for _v in _REF_NODES.values():
    _v.flags.writeable = False

# corner signs in t = 2*xhat - 1 coordinates, and mid-edge zero axes
_HEX_T = 2.0 * _REF_NODES[ElementKind.HEX20] - 1.0
_HEX_EDGE_AXIS = [int(np.flatnonzero(_HEX_T[k] == 0.0)[0]) for k in range(8, 20)]
# mid-edge nodes grouped by bubble axis, and the two remaining axes
_HEX_EDGES_ON_AXIS = tuple(
    np.array([k for k in range(8, 20) if _HEX_EDGE_AXIS[k - 8] == a])
    for a in range(3))
_OTHER_AXES = ((1, 2), (0, 2), (0, 1))

# face corner tables (local 0-based node indices, listed per face index 1..n)
FACE_CORNERS = {
    ElementKind.HEX20: ((0, 3, 7, 4), (1, 2, 6, 5), (0, 1, 5, 4),
                        (3, 2, 6, 7), (0, 1, 2, 3), (4, 5, 6, 7)),
    ElementKind.TET10: ((0, 2, 3), (0, 1, 3), (0, 1, 2), (1, 2, 3)),
}

# chart definition: (fixed axis, fixed value) or None for the inclined tet face
_FACE_FIX = {
    ElementKind.HEX20: ((0, 0.0), (0, 1.0), (1, 0.0), (1, 1.0), (2, 0.0), (2, 1.0)),
    ElementKind.TET10: ((0, 0.0), (1, 0.0), (2, 0.0), None),
}


def reference_nodes(kind):
    """Reference-cell node coordinates, shape (n_sh, 3), in storage order."""
    return _REF_NODES[kind]


def _check_domain(kind, x, tol=1e-9):
    if kind is ElementKind.HEX20:
        bad = (x < -tol) | (x > 1.0 + tol)
        if bad.any():
            raise ValueError("reference point outside the unit brick")
    else:
        if (x < -tol).any() or (x.sum(axis=-1) > 1.0 + tol).any():
            raise ValueError("reference point outside the reference tetrahedron")


def _as_points(xhat):
    x = np.asarray(xhat, dtype=float)
    single = x.ndim == 1
    return np.atleast_2d(x), single


def _hex20_shape(t):
    n = t.shape[0]
    psi = np.empty((n, 20))
    # corners: 1/8 * prod(1 + t_j T_j) * (sum t_j T_j - 2)
    f = 1.0 + t[:, None, :] * _HEX_T[None, :8, :]           # (n, 8, 3)
    s = (t[:, None, :] * _HEX_T[None, :8, :]).sum(axis=2)   # (n, 8)
    psi[:, :8] = 0.125 * f[:, :, 0] * f[:, :, 1] * f[:, :, 2] * (s - 2.0)
    # mid-edge: 1/4 * (1 - t_a^2) * prod over the other axes of (1 + t_j T_j)
    for a in range(3):
        idx = _HEX_EDGES_ON_AXIS[a]
        b, c = _OTHER_AXES[a]
        psi[:, idx] = (0.25 * (1.0 - t[:, a] ** 2)[:, None]
                       * (1.0 + t[:, b, None] * _HEX_T[idx, b])
                       * (1.0 + t[:, c, None] * _HEX_T[idx, c]))
    return psi


# monomial exponents spanning the serendipity space, in t coordinates
_HEX_MONOMIALS = ((0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1),
                  (1, 1, 0), (1, 0, 1), (0, 1, 1), (1, 1, 1),
                  (2, 0, 0), (0, 2, 0), (0, 0, 2),
                  (2, 1, 0), (2, 0, 1), (1, 2, 0), (0, 2, 1),
                  (1, 0, 2), (0, 1, 2),
                  (2, 1, 1), (1, 2, 1), (1, 1, 2))


def _hex20_grad_coefficients():
    """Monomial coefficients of all shape-function gradients, (20, 60).

    Solves the integer interpolation system at the reference nodes; the
    true coefficients are exact eighths, so they are snapped after the
    inversion.  Column 3k + j holds d(psi_k)/d(t_j); one matrix product
    then evaluates every gradient component at once.
    """
    expo = np.array(_HEX_MONOMIALS)
    vander = np.prod(_HEX_T[:, None, :] ** expo[None, :, :], axis=2)
    coeff = np.round(8.0 * np.linalg.inv(vander)) / 8.0
    cols = np.empty((20, 60))
    index = {e: i for i, e in enumerate(_HEX_MONOMIALS)}
    for j in range(3):
        deriv = np.zeros((20, 20))      # d/dt_j in the monomial basis
        for i, e in enumerate(_HEX_MONOMIALS):
            if e[j]:
                lower = list(e)
                lower[j] -= 1
                deriv[i, index[tuple(lower)]] = e[j]
        cols[:, j::3] = deriv.T @ coeff
    return cols


_HEX_GRAD_COEFF = _hex20_grad_coefficients()


def _hex20_monomials(t):
    x, y, z = t[:, 0], t[:, 1], t[:, 2]
    xx, yy, zz = x * x, y * y, z * z
    xy, xz, yz = x * y, x * z, y * z
    return np.column_stack([np.ones_like(x), x, y, z,
                            xy, xz, yz, xy * z,
                            xx, yy, zz,
                            xx * y, xx * z, x * yy, yy * z, x * zz, y * zz,
                            xx * yz, yy * xz, zz * xy])


def _hex20_grad(t):
    g = _hex20_monomials(t) @ _HEX_GRAD_COEFF
    # d/dxhat = 2 d/dt
    return 2.0 * g.reshape(t.shape[0], 20, 3)

_TET_EDGES = ((0, 1), (1, 2), (0, 2), (0, 3), (1, 3), (2, 3))


def _tet10_bary(x):
    lam = np.empty((x.shape[0], 4))
    lam[:, 0] = 1.0 - x.sum(axis=1)
    lam[:, 1:] = x
    return lam

# gradients of the barycentric coordinates w.r.t. xhat
_TET_DLAM = np.array([[-1.0, -1.0, -1.0],
                      [1.0, 0.0, 0.0],
                      [0.0, 1.0, 0.0],
                      [0.0, 0.0, 1.0]])


def _tet10_shape(x):
    lam = _tet10_bary(x)
    psi = np.empty((x.shape[0], 10))
    psi[:, :4] = lam * (2.0 * lam - 1.0)
    for k, (a, b) in enumerate(_TET_EDGES, start=4):
        psi[:, k] = 4.0 * lam[:, a] * lam[:, b]
    return psi


def _tet10_grad(x):
    lam = _tet10_bary(x)
    g = np.empty((x.shape[0], 10, 3))
    for i in range(4):
        g[:, i, :] = (4.0 * lam[:, i, None] - 1.0) * _TET_DLAM[i]
    for k, (a, b) in enumerate(_TET_EDGES, start=4):
        g[:, k, :] = 4.0 * (lam[:, a, None] * _TET_DLAM[b]
                            + lam[:, b, None] * _TET_DLAM[a])
    return g


def shape_functions(kind, xhat):
    """Shape-function values at reference point(s).

    Parameters
    ----------
    kind : ElementKind
    xhat : array_like, shape (3,) or (n, 3)
        Point(s) inside the reference cell.

    Returns
    -------
    ndarray, shape (n_sh,) or (n, n_sh)
        Values of the Lagrange basis; each row sums to 1 and the basis
        interpolates (value delta_ij at reference node j).

    Raises
    ------
    ValueError
        If a point lies outside the reference cell.
    """
    x, single = _as_points(xhat)
    _check_domain(kind, x)
    if kind is ElementKind.HEX20:
        psi = _hex20_shape(2.0 * x - 1.0)
    else:
        psi = _tet10_shape(x)
    return psi[0] if single else psi


def shape_gradients(kind, xhat):
    """Reference-coordinate gradients of the shape functions.

    Returns an (n_sh, 3) matrix for a single point, (n, n_sh, 3) for a
    batch; row k holds the gradient of shape function k.  Rows sum to
    the zero vector (derivative of the partition of unity).
    """
    x, single = _as_points(xhat)
    _check_domain(kind, x)
    if kind is ElementKind.HEX20:
        g = _hex20_grad(2.0 * x - 1.0)
    else:
        g = _tet10_grad(x)
    return g[0] if single else g


# ---------------------------------------------------------------------------
# geometric transformation

def geometric_transform(element, mesh, xhat):
    """Map reference point(s) to physical coordinates.

    The transformation is the shape-function interpolation of the
    element's node coordinates; reference nodes map to element nodes
    exactly.
    """
    coords = mesh.element_coords(element)
    psi = shape_functions(element.kind, xhat)
    return psi @ coords


def characteristic_length(coords):
    """Largest pairwise distance between the rows of a coordinate array."""
    d = coords[:, None, :] - coords[None, :, :]
    return float(np.sqrt((d * d).sum(axis=2)).max())


def _det3(jac):
    """Cofactor determinants of stacked 3x3 matrices.

    Cheaper than the batched LU in ``np.linalg.det`` and accurate to a
    few ulp, which is plenty for a threshold comparison.
    """
    a, b, c = jac[..., 0, 0], jac[..., 0, 1], jac[..., 0, 2]
    d, e, f = jac[..., 1, 0], jac[..., 1, 1], jac[..., 1, 2]
    g, h, i = jac[..., 2, 0], jac[..., 2, 1], jac[..., 2, 2]
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)


def jacobian_from_coords(coords, kind, xhat, gradients=None):
    """Jacobian matrices of the geometric map, without degeneracy checks.

    Returns (3, 3) for a single point, (n, 3, 3) for a batch;
    entry (i, j) is the derivative of physical coordinate i with respect
    to reference coordinate j.  ``gradients`` may carry precomputed
    ``shape_gradients(kind, xhat)`` to skip re-evaluating the basis.
    """
    g = shape_gradients(kind, xhat) if gradients is None else gradients
    if g.ndim == 2:
        return coords.T @ g
    return np.tensordot(g, coords, axes=(1, 0)).swapaxes(1, 2)


def transform_jacobian(element, mesh, xhat, gradients=None):
    """Jacobian of the geometric transformation, with degeneracy check.

    ``gradients`` may carry precomputed ``shape_gradients`` for the same
    points.

    Raises
    ------
    DegenerateElementError
        If the determinant at any supplied point does not exceed
        ``DEGENERACY_RTOL`` times the cubed element diameter.
    """
    coords = mesh.element_coords(element)
    jac = jacobian_from_coords(coords, element.kind, xhat, gradients)
    det = _det3(jac)
    tol = DEGENERACY_RTOL * characteristic_length(coords) ** 3
    worst = float(np.min(det))
    if worst <= tol:
        raise DegenerateElementError(element.id, worst, tol)
    return jac


# ---------------------------------------------------------------------------
# boundary faces and charts

def extract_boundary_faces(mesh):
    """Faces whose corner-node set occurs in exactly one element.

    Corner nodes only take part in the sharing test; mid-edge nodes are
    ignored.  Result order is deterministic: mesh element order, then
    local face index.
    """
    counts = {}
    for e in mesh.elements:
        for corners in FACE_CORNERS[e.kind]:
            key = frozenset(e.node_ids[i] for i in corners)
            counts[key] = counts.get(key, 0) + 1
    over = sum(1 for c in counts.values() if c > 2)
    if over:
        warnings.warn(f"{over} face(s) shared by more than two elements",
                      stacklevel=2)
    out = []
    for e in mesh.elements:
        for j, corners in enumerate(FACE_CORNERS[e.kind], start=1):
            ids = tuple(e.node_ids[i] for i in corners)
            if counts[frozenset(ids)] == 1:
                out.append(BoundaryFace(element_id=e.id, face_index=j,
                                        corner_ids=ids))
    return out


def face_chart(kind, face_index, s):
    """Map face parameters s to reference-cell coordinates.

    ``s`` has shape (2,) or (n, 2); hex faces take s in [0,1]^2, tet
    faces in the unit triangle.  Hex faces 1/2 fix the first reference
    coordinate to 0/1, faces 3/4 the second, faces 5/6 the third; tet
    faces 1-3 fix one coordinate to 0 and face 4 maps onto the inclined
    plane.
    """
    s2, single = _as_points(s)
    fix = _FACE_FIX[kind][face_index - 1]
    x = np.empty((s2.shape[0], 3))
    if fix is None:                      # inclined tet face
        x[:, 0] = s2[:, 0]
        x[:, 1] = s2[:, 1]
        x[:, 2] = 1.0 - s2[:, 0] - s2[:, 1]
    else:
        axis, value = fix
        free = [j for j in range(3) if j != axis]
        x[:, axis] = value
        x[:, free[0]] = s2[:, 0]
        x[:, free[1]] = s2[:, 1]
    return x[0] if single else x


def face_chart_matrix(kind, face_index):
    """Constant 3x2 Jacobian of the reference-cell chart."""
    fix = _FACE_FIX[kind][face_index - 1]
    d = np.zeros((3, 2))
    if fix is None:
        d[0, 0] = 1.0
        d[1, 1] = 1.0
        d[2, :] = -1.0
    else:
        axis, _ = fix
        free = [j for j in range(3) if j != axis]
        d[free[0], 0] = 1.0
        d[free[1], 1] = 1.0
    return d


def face_chart_gram(face, mesh, s, jacobian=None):
    """Square root of the Gram determinant of the composed face chart.

    The chart is the geometric transformation composed with the face's
    reference chart; its 3x2 Jacobian is the element Jacobian times the
    constant chart matrix (chain rule, no finite differences).

    Returns a scalar for a single parameter point, an (n,) array for a
    batch.  ``jacobian`` may carry precomputed element Jacobians at the
    chart images of ``s`` to skip re-evaluating the basis.

    Raises
    ------
    DegenerateFaceError
        If the Gram determinant is not strictly positive somewhere.
    """
    element = next(e for e in mesh.elements if e.id == face.element_id)
    s2, single = _as_points(s)
    if jacobian is None:
        xhat = face_chart(element.kind, face.face_index, s2)
        coords = mesh.element_coords(element)
        jac = jacobian_from_coords(coords, element.kind, xhat)
    else:
        jac = np.asarray(jacobian, dtype=float)
        if jac.ndim == 2:
            jac = jac[None]
    d = face_chart_matrix(element.kind, face.face_index)
    tang = jac @ d                       # (n, 3, 2) tangent vectors
    e11 = (tang[:, :, 0] * tang[:, :, 0]).sum(axis=1)
    e12 = (tang[:, :, 0] * tang[:, :, 1]).sum(axis=1)
    e22 = (tang[:, :, 1] * tang[:, :, 1]).sum(axis=1)
    gram = e11 * e22 - e12 * e12
    if np.min(gram) <= 0.0:
        raise DegenerateFaceError(face.element_id, face.face_index,
                                  float(np.min(gram)))
    root = np.sqrt(gram)
    return float(root[0]) if single else root


# ---------------------------------------------------------------------------
# neutral file format

_KIND_TAGS = {"HEX20": ElementKind.HEX20, "TET10": ElementKind.TET10}


def read_mesh(path):
    """Read a mesh from the neutral text format.

    The file has three sections introduced by the header lines ``NODES``,
    ``ELEMENTS``, and ``DISPLACEMENTS`` (the last one optional; missing
    displacements default to zero).  Records are whitespace-separated::

        NODES
        <id> <x> <y> <z>
        ELEMENTS
        <id> HEX20|TET10 <node id> ... (20 or 10 labels)
        DISPLACEMENTS
        <node id> <ux> <uy> <uz>

    ``#`` starts a comment that runs to the end of the line.

    Raises
    ------
    MeshParseError
        On malformed content; the message names the offending line.
    """
    nodes = {}
    raw_elements = []       # (line, id, kind, node ids)
    disp = {}
    section = None
    with open(path) as handle:
        for lineno, raw in enumerate(handle, start=1):
            text = raw.split("#", 1)[0].strip()
            if not text:
                continue
            upper = text.upper()
            if upper in ("NODES", "ELEMENTS", "DISPLACEMENTS"):
                section = upper
                continue
            if section is None:
                raise MeshParseError(f"data before any section header: {text!r}",
                                     line=lineno)
            tokens = text.split()
            if section == "NODES":
                if len(tokens) != 4:
                    raise MeshParseError(
                        f"node record needs 4 fields, got {len(tokens)}", line=lineno)
                try:
                    nid = int(tokens[0])
                    xyz = tuple(float(v) for v in tokens[1:])
                except ValueError as exc:
                    raise MeshParseError(f"bad node record: {exc}", line=lineno)
                if nid in nodes:
                    raise MeshParseError(f"duplicate node id {nid}", line=lineno)
                nodes[nid] = xyz
            elif section == "ELEMENTS":
                if len(tokens) < 2:
                    raise MeshParseError("element record needs id and kind tag",
                                         line=lineno)
                kind = _KIND_TAGS.get(tokens[1].upper())
                if kind is None:
                    raise MeshParseError(f"unknown element kind {tokens[1]!r}",
                                         line=lineno)
                if len(tokens) != 2 + kind.n_sh:
                    raise MeshParseError(
                        f"{kind.value} element needs {kind.n_sh} node ids, "
                        f"got {len(tokens) - 2}", line=lineno)
                try:
                    eid = int(tokens[0])
                    ids = tuple(int(v) for v in tokens[2:])
                except ValueError as exc:
                    raise MeshParseError(f"bad element record: {exc}", line=lineno)
                raw_elements.append((lineno, eid, kind, ids))
            else:
                if len(tokens) != 4:
                    raise MeshParseError(
                        f"displacement record needs 4 fields, got {len(tokens)}",
                        line=lineno)
                try:
                    nid = int(tokens[0])
                    u = tuple(float(v) for v in tokens[1:])
                except ValueError as exc:
                    raise MeshParseError(f"bad displacement record: {exc}",
                                         line=lineno)
                if nid not in nodes:
                    raise MeshParseError(
                        f"displacement for unknown node {nid}", line=lineno)
                disp[nid] = u
    if not raw_elements:
        raise MeshParseError("mesh has no elements")
    node_objs = {}
    for nid, xyz in nodes.items():
        try:
            node_objs[nid] = Node(id=nid, coords=xyz,
                                  displacement=disp.get(nid, (0.0, 0.0, 0.0)))
        except ValueError as exc:
            raise MeshParseError(str(exc))
    elements = []
    seen = set()
    for lineno, eid, kind, ids in raw_elements:
        if eid in seen:
            raise MeshParseError(f"duplicate element id {eid}", line=lineno)
        seen.add(eid)
        missing = [i for i in ids if i not in node_objs]
        if missing:
            raise MeshParseError(
                f"element {eid} references unknown node(s) {missing}", line=lineno)
        elements.append(Element(id=eid, kind=kind, node_ids=ids))
    return Mesh(nodes=node_objs, elements=elements)


def write_mesh(mesh, path):
    """Write a mesh in the neutral text format (see ``read_mesh``)."""
    with open(path, "w") as handle:
        handle.write("# neutral mesh format: NODES / ELEMENTS / DISPLACEMENTS\n")
        handle.write("NODES\n")
        for node in mesh.nodes.values():
            x, y, z = node.coords
            handle.write(f"{node.id} {x!r} {y!r} {z!r}\n")
        handle.write("ELEMENTS\n")
        for e in mesh.elements:
            ids = " ".join(str(i) for i in e.node_ids)
            handle.write(f"{e.id} {e.kind.value} {ids}\n")
        handle.write("DISPLACEMENTS\n")
        for node in mesh.nodes.values():
            ux, uy, uz = node.displacement
            handle.write(f"{node.id} {ux!r} {uy!r} {uz!r}\n")
