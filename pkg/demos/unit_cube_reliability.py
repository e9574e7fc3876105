"""Reliability of a uniformly strained unit cube, against closed forms.

A single cube element under uniform uniaxial strain has the same
deterministic life N everywhere, so the surface hazard integral is
area * N**-m and the characteristic life is eta = N * 6**(-1/m).
Prints the comparison and writes output/unit_cube_reliability.png.
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from lcfpost.fields import ElasticConstants, stress_from_strain, von_mises
from lcfpost.materials import MaterialParams, life_scale_from_elastic_stress
from lcfpost.mesh import Element, ElementKind, Mesh, Node, reference_nodes
from lcfpost.reliability import (crack_count_probability, integrate_hazard,
                                 pof)

OUT = Path(__file__).parent / "output"

MATERIAL = MaterialParams(E=200000.0, nu=0.3, K=1000.0, n_ro=0.1,
                          sigma_f=1800.0, b=-0.1, eps_f=0.5, c=-0.6,
                          m_weibull=2.5)
ALPHA = 0.0039      # uniaxial strain amplitude


def unit_cube():
    nodes = {}
    for i, x in enumerate(reference_nodes(ElementKind.HEX20)):
        u = (ALPHA * x[0], 0.0, 0.0)
        nodes[i + 1] = Node(id=i + 1, coords=tuple(x), displacement=u)
    element = Element(id=1, kind=ElementKind.HEX20,
                      node_ids=tuple(sorted(nodes)))
    return Mesh(nodes=nodes, elements=[element])


def main():
    OUT.mkdir(exist_ok=True)
    mesh = unit_cube()
    result = integrate_hazard(mesh, MATERIAL)

    strain = np.array([ALPHA, 0.0, 0.0, 0.0, 0.0, 0.0])
    vm = float(von_mises(stress_from_strain(
        strain, ElasticConstants(MATERIAL.E, MATERIAL.nu))))
    n_det = life_scale_from_elastic_stress(vm, MATERIAL)
    closed_eta = n_det * 6.0 ** (-1.0 / MATERIAL.m_weibull)

    print("== hazard integral on the unit cube ==")
    print(f"uniform von Mises stress     {vm:.6f}")
    print(f"deterministic life N         {n_det:.6f}")
    print(f"integrated total hazard      {result.total:.12e}")
    print(f"closed form 6 * N**-m        {6.0 * n_det ** -MATERIAL.m_weibull:.12e}")
    print(f"characteristic life eta      {result.eta:.6f}")
    print(f"closed form N * 6**(-1/m)    {closed_eta:.6f}")
    print(f"relative difference          {abs(result.eta / closed_eta - 1.0):.2e}")
    print()
    print("face contributions (all six faces carry equal hazard):")
    for c in result.contributions:
        print(f"  face {c.face_index}: area {c.area:.6f}  "
              f"hazard {c.hazard:.6e}")

    print()
    print("== probability of initiation ==")
    for ratio in (0.1, 0.5, 1.0, 2.0):
        n = ratio * result.eta
        print(f"n = {ratio:4.1f} eta: PoF = {pof(n, result.eta, result.m):.6f}")

    fig, axes = plt.subplots(1, 2, figsize=(9, 3.6))
    grid = np.logspace(np.log10(result.eta) - 3.0,
                       np.log10(result.eta) + 0.7, 300)
    axes[0].semilogx(grid, [pof(n, result.eta, result.m) for n in grid])
    axes[0].axvline(result.eta, color="gray", ls="--", lw=0.8)
    axes[0].set_xlabel("cycles")
    axes[0].set_ylabel("PoF")
    axes[0].set_title("crack initiation probability")

    z = 1.0     # expected count at n = eta
    counts = np.arange(0, 7)
    probs = [crack_count_probability(q, z) for q in counts]
    axes[1].bar(counts, probs)
    axes[1].set_xlabel("crack count at n = eta")
    axes[1].set_ylabel("probability")
    axes[1].set_title("Poisson crack counts")
    fig.tight_layout()
    path = OUT / "unit_cube_reliability.png"
    fig.savefig(path, dpi=150)
    print()
    print(f"wrote {path}")


if __name__ == "__main__":
    main()
