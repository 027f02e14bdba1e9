"""Write the figure CSVs and, with --plot, a PNG per figure.

Usage: python scripts/make_figures.py [--out figures] [--points 2000] [--plot]
"""
import argparse
import os
from pathlib import Path

import numpy as np

from ginocchio import cli


def _load(path):
    with open(path) as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    header = lines[0].strip().split(",")
    data = np.array([[float(v.replace("INF", "inf")) for v in ln.strip().split(",")]
                     for ln in lines[1:]])
    return header, data


def plot(paths, target):
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, axes = plt.subplots(1, len(paths), figsize=(4.5 * len(paths), 3.5), squeeze=False)
    for ax, path in zip(axes[0], paths):
        header, data = _load(path)
        for j, name in enumerate(header[1:], start=1):
            ax.plot(data[:, 0], data[:, j], label=name)
        y = data[:, 1:]
        if header[0] == "E" and np.nanmax(np.abs(y)) > 1e3:
            ax.set_yscale("log" if np.nanmin(y) > 0 else "symlog")
        ax.set_xlabel(header[0])
        ax.set_title(path.stem)
        ax.legend(fontsize="small")
    fig.tight_layout()
    fig.savefig(target, dpi=120)
    plt.close(fig)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="figures")
    ap.add_argument("--points", type=int, default=2000)
    ap.add_argument("--parallel", type=int, default=os.cpu_count() or 1)
    ap.add_argument("--plot", action="store_true", help="also render PNGs (needs matplotlib)")
    args = ap.parse_args()
    for name in cli.FIGURES:
        paths = cli.cmd_figure(name, args.out, args.parallel, args.points)
        print("\n".join(str(p) for p in paths))
        if args.plot:
            target = Path(args.out) / f"{name}.png"
            plot(paths, target)
            print(target)


if __name__ == "__main__":
    main()
