"""Beacons translating at (0.1, 0.1) m/s tracked by the compensated law."""

from fwunicycle.scenario import load_scenario
from fwunicycle.sim import run

from _common import SCENARIOS, parse_args, save


def main():
    args = parse_args(__doc__)
    log = run(load_scenario(SCENARIOS / "fig2_moving.yaml"), decimate=args.decimate)
    save(log, args.out_dir, "fig2-moving")
    f = log.final
    print(f"  phi at end: ({f['phi_x']:.5f}, {f['phi_y']:.5f})")


if __name__ == "__main__":
    main()
