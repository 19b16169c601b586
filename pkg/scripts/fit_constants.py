"""Re-derive every fitted constant and refresh the committed data file.

Run from the repository root:

    python scripts/fit_constants.py [--out src/smallball/data/fitted_constants.json]

The fit is deterministic; a diff against the committed file means a family
definition changed and the family version tag should be bumped.
"""

import argparse
import time

from smallball.bounds import load_constants, save_constants
from smallball.fitting import FITTERS

DEFAULT_OUT = "src/smallball/data/fitted_constants.json"


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--out", default=DEFAULT_OUT)
    args = parser.parse_args()

    committed = load_constants()
    fitted = {}
    for name, fitter in FITTERS.items():
        t0 = time.perf_counter()
        fitted[name] = fitter()
        drift = ""
        if name in committed:
            rel = abs(fitted[name].value - committed[name].value) / committed[name].value
            drift = f"  (drift vs committed: {rel:.2e})"
        print(f"{name:10s} = {fitted[name].value!r}"
              f"  [{time.perf_counter() - t0:.1f}s]{drift}")
    save_constants(fitted, args.out)
    print(f"written to {args.out}")


if __name__ == "__main__":
    main()
