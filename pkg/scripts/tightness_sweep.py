"""Long-horizon tightness sweep for the two-state chain.

Computes P(sum = 0) exactly over a doubling n grid for several spectral
parameters, prints the gap-adjusted normalization p0 * sqrt((1-lam) n / (1+lam))
(which should flatten near sqrt(2/pi) ~ 0.7979), and writes the CSV report.

    python scripts/tightness_sweep.py [--n-max 4096] [--out tightness.csv]
"""

import argparse

from smallball.cli import ExperimentConfig, run


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--n-max", type=int, default=1024)
    parser.add_argument("--lambdas", default="0,0.3,0.6,0.9")
    parser.add_argument("--out", default="tightness.csv")
    args = parser.parse_args()

    n_list = []
    n = 64
    while n <= args.n_max:
        n_list.append(n)
        n *= 2
    config = ExperimentConfig(
        kind="tightness", n_list=n_list,
        lambda_list=[float(x) for x in args.lambdas.split(",")],
        out=args.out)
    raise SystemExit(run(config))


if __name__ == "__main__":
    main()
