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
"""End-to-end checks of the rjde command: exit codes, determinism, CSVs.

Usage: test_cli.py RJDE_BINARY CONFIG_DIR WORK_DIR
"""

import filecmp
import os
import shutil
import subprocess
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))
import validate_csv  # noqa: E402

# Coarse grids keep each solve to a few seconds.
SMALL = ["--set", "grids.n_theta=11", "--set", "grids.m_x=441"]

failures = []


def run(args):
    proc = subprocess.run([BINARY] + args, capture_output=True, text=True)
    return proc.returncode, proc.stdout + proc.stderr


def expect_exit(label, args, code):
    rc, out = run(args)
    ok = rc == code
    print(f"{'PASS' if ok else 'FAIL'} {label}: exit {rc} (want {code})")
    if not ok:
        failures.append(label)
        print(out)
    return out


def csv_files(d):
    return sorted(f for f in os.listdir(d) if f.endswith(".csv"))


def main():
    cfg = os.path.join(CONFIGS, "bayes.cfg")
    np_cfg = os.path.join(CONFIGS, "np.cfg")
    shutil.rmtree(WORK, ignore_errors=True)
    os.makedirs(WORK)
    out = lambda name: os.path.join(WORK, name)  # noqa: E731

    expect_exit("missing config file", ["solve-bayes", "--config",
                                        out("absent.cfg")], 2)
    expect_exit("unknown option", ["solve-bayes", "--bogus"], 2)
    expect_exit("unknown config key", ["solve-bayes", "--set", "no.key=1"], 2)
    expect_exit("infeasible band", ["solve-bayes", "--config", cfg, "--out",
                                    out("bad_band"), "--set", "band.c_lo=1.1"], 3)
    expect_exit("zero runs", ["simulate", "--config", cfg, "--runs", "0",
                              "--out", out("zero")], 2)
    expect_exit("infeasible levels",
                ["solve-np", "--config", np_cfg, "--out", out("bad_np"),
                 "--set", "cost.alpha0_max=0.001", "--set",
                 "cost.alpha1_max=0.01"] + SMALL, 3)
    expect_exit("simulate without artifacts",
                ["simulate", "--out", out("nothing")], 2)
    msg = expect_exit("bad value names the key",
                      ["solve-bayes", "--set", "solver.decay=2"], 2)
    if "solver.decay" not in msg:
        failures.append("bad value message")
        print("FAIL bad value message does not name solver.decay")

    # Determinism: identical seeds give byte-identical artifacts regardless
    # of the worker count.
    for name, threads in (("run_a", "1"), ("run_b", "4")):
        base = ["--config", cfg, "--out", out(name), "--threads", threads] + SMALL
        expect_exit(f"solve-bayes {name}", ["solve-bayes"] + base, 0)
        expect_exit(f"simulate {name}",
                    ["simulate", "--runs", "50000", "--seed", "7"] + base, 0)
        expect_exit(f"export-figures {name}", ["export-figures"] + base, 0)
    files = csv_files(out("run_a"))
    match, mismatch, errors = filecmp.cmpfiles(out("run_a"), out("run_b"), files,
                                               shallow=False)
    ok = not mismatch and not errors and len(match) == len(files)
    print(f"{'PASS' if ok else 'FAIL'} deterministic artifacts ({len(match)} files)")
    if not ok:
        failures.append("determinism")
        print("differing:", mismatch, errors)

    expect_exit("solve-np", ["solve-np", "--config", np_cfg, "--out", out("np")]
                + SMALL, 0)
    expect_exit("simulate np", ["simulate", "--config", np_cfg, "--out",
                                out("np"), "--runs", "50000"] + SMALL, 0)

    problems = []
    for d in (out("run_a"), out("np")):
        for f in csv_files(d):
            problems += validate_csv.validate(os.path.join(d, f))
    print(f"{'PASS' if not problems else 'FAIL'} CSV validation")
    for p in problems:
        print("   ", p)
    if problems:
        failures.append("csv")

    print(f"{len(failures)} failure(s)")
    return 1 if failures else 0


if __name__ == "__main__":
    BINARY, CONFIGS, WORK = sys.argv[1:4]
    sys.exit(main())
