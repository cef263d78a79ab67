"""Desk-scale rerun of the moving-beacon experiment (0.05 m/s drift, 39 s)."""

from fwunicycle.scenario import load_scenario
from fwunicycle.sim import run

from _common import SCENARIOS, parse_args, save


def main():
    args = parse_args(__doc__)
    log = run(load_scenario(SCENARIOS / "fig4_moving_experiment.yaml"), decimate=args.decimate)
    save(log, args.out_dir, "fig4-moving-experiment")


if __name__ == "__main__":
    main()
