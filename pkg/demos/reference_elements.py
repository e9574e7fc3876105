"""Tour of the two reference elements: shape functions, boundary faces,
and surface measure.

Run as a script; prints a short narrative and writes
output/reference_elements.png.
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from lcfpost.mesh import (Element, ElementKind, Mesh, Node,
                          extract_boundary_faces, face_chart_gram,
                          reference_nodes, shape_functions)
from lcfpost.quadrature import tensor_square, triangle_rule

OUT = Path(__file__).parent / "output"


def reference_mesh(kind):
    """Single element sitting exactly on its reference cell."""
    nodes = {i + 1: Node(id=i + 1, coords=tuple(x))
             for i, x in enumerate(reference_nodes(kind))}
    element = Element(id=1, kind=kind, node_ids=tuple(sorted(nodes)))
    return Mesh(nodes=nodes, elements=[element])


def main():
    OUT.mkdir(exist_ok=True)
    rng = np.random.default_rng(0)

    print("== shape functions ==")
    for kind in (ElementKind.HEX20, ElementKind.TET10):
        if kind is ElementKind.HEX20:
            points = rng.random((2000, 3))
        else:
            points = rng.dirichlet((1.0, 1.0, 1.0, 1.0), 2000)[:, :3]
        values = shape_functions(kind, points)
        worst = np.max(np.abs(values.sum(axis=1) - 1.0))
        print(f"{kind.value}: {values.shape[1]} functions, "
              f"partition-of-unity deviation {worst:.2e} over 2000 points")

    print()
    print("== boundary faces and surface area ==")
    for kind, n_faces in ((ElementKind.HEX20, 6), (ElementKind.TET10, 4)):
        mesh = reference_mesh(kind)
        faces = extract_boundary_faces(mesh)
        print(f"{kind.value}: {len(faces)} boundary faces "
              f"(expected {n_faces})")
        area = 0.0
        for face in faces:
            if kind is ElementKind.HEX20:
                rule = tensor_square(4)
            else:
                rule = triangle_rule(7)
            grams = face_chart_gram(face, mesh, rule.points)
            area += float(rule.weights @ grams)
        print(f"  total surface area by face integration: {area:.12f}")

    # profile two hex shape functions along the edge (t, 0, 0): the
    # corner function is quadratic with a dip, the mid-edge one a bump
    t = np.linspace(0.0, 1.0, 200)
    edge = np.column_stack([t, np.zeros_like(t), np.zeros_like(t)])
    hex_values = shape_functions(ElementKind.HEX20, edge)
    fig, axes = plt.subplots(1, 2, figsize=(9, 3.5))
    axes[0].plot(t, hex_values[:, 0], label="corner N1")
    axes[0].plot(t, hex_values[:, 8], label="mid-edge N9")
    axes[0].set_title("hex20 along edge (t, 0, 0)")
    axes[0].set_xlabel("t")
    axes[0].legend()

    bary = np.column_stack([t, np.zeros_like(t), np.zeros_like(t)])
    tet_values = shape_functions(ElementKind.TET10, bary)
    axes[1].plot(t, tet_values[:, 0], label="corner at origin")
    axes[1].plot(t, tet_values[:, 1], label="corner at x=1")
    axes[1].plot(t, tet_values[:, 4], label="mid-edge")
    axes[1].set_title("tet10 along edge (t, 0, 0)")
    axes[1].set_xlabel("t")
    axes[1].legend()
    fig.tight_layout()
    path = OUT / "reference_elements.png"
    fig.savefig(path, dpi=150)
    print()
    print(f"wrote {path}")


if __name__ == "__main__":
    main()
