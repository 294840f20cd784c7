"""Write the three latency-comparison curves and the crossover table, and plot them if matplotlib is available."""

import argparse
from pathlib import Path

from swarmauth.latency import crossover_table, latency_curves, load_model, write_curve_csv


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="figs")
    ap.add_argument("--max-threshold", type=int, default=100)
    ap.add_argument("--max-drones", type=int, default=200)
    ap.add_argument("--swarm-threshold", type=int, default=5)
    ap.add_argument("--model", help="latency model override (JSON)")
    ap.add_argument("--no-plot", action="store_true")
    args = ap.parse_args()

    model = load_model(args.model)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    curves = latency_curves(args.max_threshold, args.max_drones, args.swarm_threshold, model)
    for curve in curves.values():
        write_curve_csv(curve, out / f"{curve.name}.csv")
    for name, k in crossover_table(model, args.swarm_threshold).items():
        print(f"{name}={k}")

    if args.no_plot:
        return
    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        print("matplotlib not installed; CSVs only")
        return
    labels = {"auth_latency": "NR authentication", "swarm_latency": "NR authentication", "handover_latency": "NR handover"}
    for curve in curves.values():
        fig, ax = plt.subplots(figsize=(5, 3.5))
        ax.plot(curve.points, curve.proposed_ms, label="group authentication")
        ax.plot(curve.points, curve.nr_ms, "--", label=labels[curve.name])
        ax.set_xlabel(curve.variable)
        ax.set_ylabel("latency (ms)")
        ax.legend()
        fig.tight_layout()
        fig.savefig(out / f"{curve.name}.png", dpi=120)
        plt.close(fig)
    print(f"plots written to {out}/")


if __name__ == "__main__":
    main()
