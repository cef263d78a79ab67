"""Stationary beacons: four starting corners under the unsaturated law."""

from fwunicycle.scenario import load_overrides, load_scenario
from fwunicycle.sim import sweep

from _common import SCENARIOS, parse_args, save


def main():
    args = parse_args(__doc__)
    base = load_scenario(SCENARIOS / "fig1_stationary.yaml")
    for log in sweep(base, load_overrides(SCENARIOS / "fig1_starts.yaml"), decimate=args.decimate):
        save(log, args.out_dir, f"fig1-{log.scenario.label}")


if __name__ == "__main__":
    main()
