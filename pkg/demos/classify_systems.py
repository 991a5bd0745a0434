"""Tell Lorenz from Rossler with shape histograms, then with chaos numbers.

Generates a small randomized set of labeled trajectories, runs leave-one-out
1-NN classification twice on the very same instances (150-number shape
features with chi-squared distance, then the 10-number Lyapunov/correlation
baseline with L2), and prints both confusion matrices side by side.
Run with: python3 demos/classify_systems.py
"""

from phaseshape import classification_experiment, synthetic_instances


def show(report):
    conf = report.artifacts["confusion"]
    labels = conf["labels"]
    counts = conf["counts"]
    width = max(6, max(len(s) for s in labels))
    header = " ".join(f"{s:>{width}}" for s in labels)
    print(f"  {'true/pred':>{width}} {header}")
    for label, row in zip(labels, counts):
        cells = " ".join(f"{c:>{width}d}" for c in row)
        print(f"  {label:>{width}} {cells}")
    print(f"  accuracy {report.metrics['accuracy']:.4f} on {report.metrics['total']} trajectories")


def main():
    print("generating 4 trajectories per system (random ic, random length)...")
    instances = synthetic_instances(per_class=4, root_seed=7, jobs=2)
    for inst in instances:
        print(f"  {inst.id:>12}  n = {inst.series.n}")

    print("\nshape features (3 channels x 50 bins, chi2 distance):")
    shape = classification_experiment(instances=instances, n_samples=4000, jobs=2)
    show(shape)

    print("\nchaos baseline (lambda1, corr dim, 8 correlation integrals; L2):")
    chaos = classification_experiment(instances=instances, features="chaos", jobs=2)
    show(chaos)

    # Both reach perfect accuracy on clean simulated data this separable;
    # the interesting comparisons start when lengths shrink or noise is
    # added, where the histogram features degrade far more gracefully.


if __name__ == "__main__":
    main()
