#!/usr/bin/env python3
"""One-off generator for tests/golden/model_golden.json.

Recomputes the project/select/sort cost models from scratch (no shared code
with the C++ implementation) for both bundled hardware profiles. Run from the
repo root:

    python3 tests/tools/make_model_golden.py > tests/golden/model_golden.json
"""

import json

PROFILES = {
    "table2-cpu": {"read_bw": 53e9, "write_bw": 55e9},
    "table2-gpu": {"read_bw": 880e9, "write_bw": 880e9},
}

SIZES = [0, 2**20, 2**29]


def project_ms(n, p):
    return (8 * n / p["read_bw"] + 4 * n / p["write_bw"]) * 1e3


def select_ms(n, sigma, p):
    return (4 * n / p["read_bw"] + 4 * sigma * n / p["write_bw"]) * 1e3


def sort_ms(n, passes, p):
    per_pass = 4 * n / p["read_bw"] + 8 * n / p["read_bw"] + 8 * n / p["write_bw"]
    return passes * per_pass * 1e3


def main():
    entries = []
    for label, prof in PROFILES.items():
        for n in SIZES:
            entries.append(
                {"model": "project", "profile": label, "n": n,
                 "total_ms": project_ms(n, prof)})
            for sigma in (0.0, 0.5, 1.0):
                entries.append(
                    {"model": "select", "profile": label, "n": n, "sigma": sigma,
                     "total_ms": select_ms(n, sigma, prof)})
            for passes in (1, 4):
                entries.append(
                    {"model": "sort", "profile": label, "n": n, "passes": passes,
                     "total_ms": sort_ms(n, passes, prof)})
    print(json.dumps({"entries": entries}, indent=1))


if __name__ == "__main__":
    main()
