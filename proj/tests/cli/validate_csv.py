# Copyright 2026 The robustjde Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Structural checks for CSV artifacts written by the rjde command."""

import csv
import math
import sys

# Required leading columns per artifact name.
EXPECTED_HEADERS = {
    "policy.csv": ["x", "delta", "est1", "postvar1", "est0", "postvar0"],
    "policy_nominal.csv": ["x", "delta", "est1", "postvar1", "est0", "postvar0"],
    "performance.csv": ["scenario", "alpha0", "alpha1", "mse0", "mse1", "mse", "j"],
    "results.csv": ["scenario", "alpha0", "alpha1", "mse", "j", "se_alpha0",
                    "se_alpha1", "se_mse", "se_j"],
    "trace.csv": ["iter", "objective", "eta", "reset_flag"],
    "np_trace.csv": ["outer_iter", "lambda0", "lambda1", "alpha0", "alpha1",
                     "objective"],
    "lfd_h0.csv": ["theta", "x", "value"],
    "lfd_h1.csv": ["theta", "x", "value"],
    "lfds.csv": ["family", "theta", "x", "value"],
}

TEXT_COLUMNS = {"scenario", "family"}


def validate(path):
    """Returns a list of problems found in one CSV file."""
    problems = []
    name = path.rsplit("/", 1)[-1]
    with open(path, newline="") as f:
        rows = list(csv.reader(f))
    if not rows:
        return [f"{name}: empty file"]
    header = rows[0]
    want = EXPECTED_HEADERS.get(name)
    if want and header[: len(want)] != want:
        problems.append(f"{name}: header {header} does not start with {want}")
    if len(rows) < 2:
        problems.append(f"{name}: no data rows")
    for i, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            problems.append(f"{name}:{i}: {len(row)} fields, header has {len(header)}")
            continue
        for col, value in zip(header, row):
            if col in TEXT_COLUMNS:
                continue
            try:
                v = float(value)
            except ValueError:
                problems.append(f"{name}:{i}: {col}={value!r} is not a number")
                continue
            if not math.isfinite(v):
                problems.append(f"{name}:{i}: {col} is not finite")
            elif col in ("alpha0", "alpha1", "delta") and not 0.0 <= v <= 1.0:
                problems.append(f"{name}:{i}: {col}={v} outside [0, 1]")
    return problems


if __name__ == "__main__":
    found = [p for path in sys.argv[1:] for p in validate(path)]
    for p in found:
        print(p)
    sys.exit(1 if found else 0)
