"""Cooperation over time for two network sizes, mean-field and ABM side by side.

Writes <out>/dynamics_n{n}_{convention}.csv (mean-field iteration) and
<out>/dynamics_n{n}_{convention}.abm.csv (one seeded ABM run).
"""

import argparse
from pathlib import Path

from css_diffusion import Scenario, iterate_fixed_point, run_abm
from css_diffusion.csvio import write_csv

CASES = [(18, 2.0), (40, 1.25)]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="results")
    ap.add_argument("--x0", type=float, default=0.2)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--population", type=int, default=None, help="ABM size (default: n)")
    args = ap.parse_args()
    out = Path(args.out)

    for conv in ("paper_literal", "density"):
        for n, r in CASES:
            cfg = Scenario(n=n, comm_range=r, intensity_convention=conv).game_config()
            traj = iterate_fixed_point(cfg, args.x0)
            stem = out / f"dynamics_n{n}_{conv}"
            traj.to_csv(stem.with_suffix(".csv"))
            res = run_abm(cfg, args.population or n, 100, args.seed, args.x0)
            write_csv(stem.with_suffix(".abm.csv"), ("t", "x", "xi"), zip(res.t, res.x_hat, res.xi_hat))
            print(f"{conv:14s} n={n:3d} R={r:<5g} steps={traj.iterations:3d} "
                  f"x: {traj.x[0]:.4g} -> {traj.final_x:.4g}  xi -> {traj.final_xi:.4g}")


if __name__ == "__main__":
    main()
