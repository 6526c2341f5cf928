"""Run every bench config in configs/ and write records plus curve data.

Usage: python3 scripts/run_sweeps.py [--out results] [--workers N] [configs...]
"""
import argparse
from pathlib import Path

from intsparse.bench import emit_csv, emit_plot_data, format_summary, run_experiment
from intsparse.io import load_config

ROOT = Path(__file__).resolve().parent.parent


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("configs", nargs="*", type=Path)
    parser.add_argument("--out", type=Path, default=ROOT / "results")
    parser.add_argument("--workers", type=int)
    args = parser.parse_args()
    configs = args.configs or sorted((ROOT / "configs").glob("*.json"))
    args.out.mkdir(parents=True, exist_ok=True)
    for path in configs:
        result = run_experiment(load_config(path), workers=args.workers)
        emit_csv(result.records, args.out / f"{path.stem}.csv")
        emit_plot_data(result.summary, args.out / f"{path.stem}_curve.csv")
        print(f"== {path.name}")
        print(format_summary(result))


if __name__ == "__main__":
    main()
