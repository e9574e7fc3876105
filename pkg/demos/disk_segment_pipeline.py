"""Full pipeline on a curved disk segment, driven through the CLI.

Builds one curved Hex20 element spanning an annular sector, writes the
mesh and material files, runs `lcfpost analyze` with a 44-segment
aggregation, and reads the artifacts back.  Writes
output/disk_segment_pipeline.png.
"""

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from lcfpost.cli import main as lcfpost_main
from lcfpost.materials import MaterialParams, save_material
from lcfpost.mesh import (Element, ElementKind, Mesh, Node, reference_nodes,
                          write_mesh)
from lcfpost.reliability import read_faces_csv, read_pof_csv

OUT = Path(__file__).parent / "output"

MATERIAL = MaterialParams(E=200000.0, nu=0.3, K=1000.0, n_ro=0.1,
                          sigma_f=1800.0, b=-0.1, eps_f=0.5, c=-0.6,
                          m_weibull=2.5)


def sector_point(x):
    """Map the unit cube to an annular sector (r 1..2, 30 degrees)."""
    r = 1.0 + x[0]
    phi = (math.pi / 6.0) * (x[1] - 0.5)
    return np.array([r * math.cos(phi), r * math.sin(phi), 0.3 * x[2]])


def displacement(x):
    """Smooth displacement field over the sector; strains near 1e-3."""
    x1, x2, x3 = x
    return 1e-3 * np.array([
        1.2 * x1 + 0.4 * x2 - 0.3 * x3 + 0.8 * x1 * x1 + 0.5 * x2 * x3,
        -0.6 * x1 + 0.9 * x2 + 0.2 * x3 - 0.7 * x2 * x2 + 0.3 * x1 * x3,
        0.5 * x1 - 0.2 * x2 + 1.1 * x3 + 0.6 * x3 * x3 - 0.4 * x1 * x2,
    ])


def sector_mesh():
    nodes = {}
    for i, ref in enumerate(reference_nodes(ElementKind.HEX20)):
        x = sector_point(np.asarray(ref))
        nodes[i + 1] = Node(id=i + 1, coords=tuple(x),
                            displacement=tuple(displacement(x)))
    element = Element(id=1, kind=ElementKind.HEX20,
                      node_ids=tuple(sorted(nodes)))
    return Mesh(nodes=nodes, elements=[element])


def main():
    OUT.mkdir(exist_ok=True)
    mesh_path = OUT / "sector.mesh"
    write_mesh(sector_mesh(), mesh_path)
    material_path = OUT / "sector_material.txt"
    save_material(MATERIAL, material_path)
    run_dir = OUT / "sector_run"

    print("== running the CLI ==")
    args = ["analyze", "--mesh", str(mesh_path),
            "--material", str(material_path),
            "--segments", "44", "--out", str(run_dir)]
    print("lcfpost " + " ".join(args))
    code = lcfpost_main(args)
    print(f"exit code {code}")
    assert code == 0

    print()
    print("== summary excerpt ==")
    lines = (run_dir / "summary.txt").read_text().splitlines()
    for line in lines[:14]:
        print(f"  {line}")
    print("  ...")

    contributions = read_faces_csv(run_dir / "faces.csv")
    print()
    print(f"faces.csv: {len(contributions)} boundary faces; "
          f"highest-hazard face is face "
          f"{max(contributions, key=lambda c: c.hazard).face_index}")

    n_grid, pof_grid = read_pof_csv(run_dir / "pof.csv")
    fig, ax = plt.subplots(figsize=(5.5, 3.8))
    ax.semilogx(n_grid, pof_grid)
    ax.set_xlabel("cycles")
    ax.set_ylabel("PoF")
    ax.set_title("single-segment initiation probability")
    ax.grid(True, which="both", lw=0.3)
    fig.tight_layout()
    path = OUT / "disk_segment_pipeline.png"
    fig.savefig(path, dpi=150)
    print()
    print(f"wrote {path}")


if __name__ == "__main__":
    main()
