"""The deterministic life chain, one stage at a time.

Elastic von Mises stress -> Neuber shakedown -> Ramberg-Osgood strain
-> strain-life inversion.  Prints sample values along the chain and
writes output/material_chain.png with the three constitutive curves.
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from lcfpost.materials import (MaterialParams, cmb_life, cmb_strain,
                               life_scale_from_elastic_stress,
                               neuber_shakedown, ramberg_osgood_strain)

OUT = Path(__file__).parent / "output"

MATERIAL = MaterialParams(E=200000.0, nu=0.3, K=1000.0, n_ro=0.1,
                          sigma_f=1800.0, b=-0.1, eps_f=0.5, c=-0.6,
                          m_weibull=2.5)


def main():
    OUT.mkdir(exist_ok=True)
    ro = MATERIAL.ramberg_osgood
    cmb = MATERIAL.cmb

    print("== cyclic stress-strain (Ramberg-Osgood) ==")
    for stress in (200.0, 500.0, 800.0):
        strain = ramberg_osgood_strain(stress, ro)
        plastic = strain - stress / ro.E
        print(f"stress {stress:7.1f}  strain {strain:.6f}  "
              f"plastic part {plastic:.2e}")

    print()
    print("== Neuber shakedown ==")
    print("elastic input -> elastic-plastic stress (K_t = 1)")
    for se in (300.0, 600.0, 1200.0, 2400.0):
        sigma = neuber_shakedown(se, 1.0, ro)
        print(f"  {se:7.1f} -> {sigma:9.3f}   "
              f"(reduction {100.0 * (1.0 - sigma / se):5.2f}%)")

    print()
    print("== strain-life curve ==")
    for n in (1e2, 1e4, 1e6):
        eps = cmb_strain(n, cmb)
        back = cmb_life(eps, cmb)
        print(f"N {n:10.0f}  strain amplitude {eps:.6f}  "
              f"re-inverted N {back:14.3f}")

    print()
    print("== full chain: elastic stress to deterministic life ==")
    print("(the stress range is halved before the shakedown inversion)")
    for se in (400.0, 600.0, 900.0):
        n_det = life_scale_from_elastic_stress(se, MATERIAL)
        print(f"elastic vM {se:6.1f} -> N_det {n_det:.6g} cycles")

    # figures: the three stages on their natural axes
    fig, axes = plt.subplots(1, 3, figsize=(12, 3.6))
    stress = np.linspace(1.0, 900.0, 300)
    axes[0].plot(ramberg_osgood_strain(stress, ro), stress)
    axes[0].plot(stress / ro.E, stress, "--", label="elastic")
    axes[0].set_xlabel("strain amplitude")
    axes[0].set_ylabel("stress amplitude")
    axes[0].set_title("cyclic stress-strain")
    axes[0].legend()

    se = np.linspace(1.0, 2400.0, 300)
    axes[1].plot(se, neuber_shakedown(se, 1.0, ro))
    axes[1].plot(se, se, "--", label="no correction")
    axes[1].set_xlabel("elastic von Mises")
    axes[1].set_ylabel("shakedown stress")
    axes[1].set_title("Neuber correction")
    axes[1].legend()

    lives = np.logspace(0.0, 7.0, 300)
    axes[2].loglog(lives, cmb_strain(lives, cmb))
    axes[2].set_xlabel("cycles to initiation")
    axes[2].set_ylabel("strain amplitude")
    axes[2].set_title("strain-life")
    fig.tight_layout()
    path = OUT / "material_chain.png"
    fig.savefig(path, dpi=150)
    print()
    print(f"wrote {path}")


if __name__ == "__main__":
    main()
