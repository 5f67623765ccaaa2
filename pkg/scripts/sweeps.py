"""Equilibrium versus R, beta and M, for one and two antennas.

Each sweep is written once per intensity convention as
<out>/sweep_{parameter}_M{m}_{convention}.csv. Set CSS_DIFFUSION_THREADS to
parallelize the points.
"""

import argparse
from dataclasses import replace
from pathlib import Path

import numpy as np

from css_diffusion import Scenario, parameter_sweep
from css_diffusion.comparative import write_sweep

SWEEPS = {
    "R_range": [round(v, 2) for v in np.arange(0.5, 5.01, 0.25)],
    "beta": [round(v, 2) for v in np.arange(0.5, 0.99, 0.02)] + [0.99],
    "M": [1, 2, 3, 4, 5],
}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="results")
    ap.add_argument("--freeze-couplings", action="store_true")
    args = ap.parse_args()
    out = Path(args.out)

    for conv in ("paper_literal", "density"):
        base = Scenario(intensity_convention=conv)
        for parameter, values in SWEEPS.items():
            variants = [(1, base), (2, replace(base, antennas=2))]
            if parameter == "M":
                # independent vs correlated shadowing
                variants = [("rho0", replace(base, rho=0.0)), ("coupled", base)]
            for tag, sc in variants:
                rows = parameter_sweep(sc, parameter, values, couple=not args.freeze_couplings)
                name = f"sweep_{parameter}_{'M' + str(tag) if isinstance(tag, int) else tag}_{conv}.csv"
                write_sweep(out / name, rows)
                xs = [r.x_star for r in rows]
                print(f"{name:40s} x* {xs[0]:.3g} .. {xs[-1]:.3g}")


if __name__ == "__main__":
    main()
