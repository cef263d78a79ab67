import argparse
from pathlib import Path

from fwunicycle.logio import read_log, write_log
from fwunicycle.plotting import plot_log

ROOT = Path(__file__).resolve().parents[1]
SCENARIOS = ROOT / "scenarios"


def parse_args(description):
    p = argparse.ArgumentParser(description=description)
    p.add_argument("--out-dir", default=str(ROOT / "results"))
    p.add_argument("--decimate", type=int, default=10)
    return p.parse_args()


def save(log, out_dir, name):
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / f"{name}.csv"
    write_log(log, csv_path)
    paths = plot_log(read_log(csv_path), out_dir / f"{name}.svg")
    print(f"{name}: {log.outcome.value} at t={log.outcome_time:.2f} s, final error {log.final_error:.3e} m")
    for p in [csv_path, *paths]:
        print(f"  {p}")
