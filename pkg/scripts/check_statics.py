"""Grid checks of the comparative statics and the uniqueness claim.

Prints one line per check. Path-loss dominance is reported, not asserted,
since the ordering of the cost laws flips at x = c.
"""

import argparse
from dataclasses import replace

import numpy as np

from css_diffusion import Scenario, compare_conduciveness, find_all_fixed_points
from css_diffusion.comparative import path_loss_dominance

CHANGES = [
    ("beta 0.95 -> 0.9", dict(beta=0.9), "more_conducive"),
    ("M 1 -> 2", dict(antennas=2), "more_conducive"),
    ("rho auto -> 0.999", dict(rho=0.999), "less_conducive"),
    ("c 2 -> 4", dict(prop_const=4.0), "less_conducive"),
]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--grid-points", type=int, default=1001)
    args = ap.parse_args()

    for conv in ("paper_literal", "density"):
        base = Scenario(intensity_convention=conv)
        cfg = base.game_config()
        interior = [r for r in find_all_fixed_points(cfg) if r > 0]
        print(f"[{conv}] positive fixed points: {interior}")
        for label, change, expected in CHANGES:
            v = compare_conduciveness(cfg, replace(base, **change).game_config(), args.grid_points)
            status = "ok" if v.relation == expected else "UNEXPECTED"
            print(f"[{conv}] {label:20s} {v.relation:15s} max_gap={v.max_gap:.3g} {status}")
        for a, b in [(2.0, 2.5), (2.5, 4.0)]:
            grid = np.logspace(-8, 3, 2000)
            d = path_loss_dominance(base, a, b, grid)
            print(f"[{conv}] cost law alpha {a} vs {b}: {d.relation} (witness {d.witness})")


if __name__ == "__main__":
    main()
