"""Saturated law on a 1.5 m workspace with 0.05 m/s and 0.5 rad/s limits."""

import numpy as np

from fwunicycle.scenario import load_scenario
from fwunicycle.sim import run

from _common import SCENARIOS, parse_args, save


def main():
    args = parse_args(__doc__)
    sc = load_scenario(SCENARIOS / "fig3_saturated.yaml")
    log = run(sc, decimate=args.decimate)
    save(log, args.out_dir, "fig3-saturated")
    print(f"  max |nu| {np.abs(log['nu']).max():.4f} m/s, max |omega| {np.abs(log['omega']).max():.4f} rad/s")


if __name__ == "__main__":
    main()
