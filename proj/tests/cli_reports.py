"""Run the dualcorr binary, validate every JSON report against the schema and
check exit codes and byte-identical reruns."""

import json
import os
import subprocess
import sys

import jsonschema

BINARY, SCHEMA = sys.argv[1], sys.argv[2]

# (arguments, expected exit code)
CASES = [
    (["compute", "--state", "ghz", "--n", "3", "--p", "0.5", "--measure", "dtc"], 0),
    (["compute", "--state", "ghz", "--n", "3", "--p", "0.5", "--measure", "jn", "--matching", "canonical"], 0),
    (["compute", "--state", "orthogonal-product", "--n", "3", "--d", "3", "--measure", "dtc"], 0),
    (["compute", "--state", "random", "--dims", "2,2", "--measure", "jn", "--seed", "11"], 0),
    (["compute", "--state", "ghz", "--n", "4", "--measure", "jn", "--route", "factored"], 0),
    (["counterexample", "--n", "3", "--p", "0.5", "--exhaustive"], 0),
    (["counterexample", "--n", "2", "--p", "0.3"], 0),
    (["counterexample", "--n", "4", "--samples", "30", "--seed", "5"], 0),
    (["counterexample", "--n", "6"], 0),
    (["sweep", "--n", "3"], 0),
    (["proptest", "--suite", "all", "--trials", "20", "--seed", "7"], 0),
    (["proptest", "--suite", "ptrace-mono", "--trials", "10", "--seed", "7"], 0),
    (["proptest", "--suite", "klein", "--replay-seed", "42"], 0),
]


def run(args, env=None):
    return subprocess.run([BINARY, *args, "--no-timestamp"], capture_output=True, text=True, env=env)


def main():
    with open(SCHEMA) as f:
        schema = json.load(f)
    validator = jsonschema.Draft202012Validator(schema)
    failures = 0
    for args, code in CASES:
        first = run(args)
        second = run(args)
        label = " ".join(args)
        problems = []
        if first.returncode != code:
            problems.append(f"exit {first.returncode}, expected {code}: {first.stderr.strip()}")
        if first.stdout != second.stdout:
            problems.append("output differs between identical runs")
        try:
            report = json.loads(first.stdout)
            errors = sorted(validator.iter_errors(report), key=lambda e: list(e.path))
            problems += [f"schema: {'/'.join(map(str, e.path))}: {e.message}" for e in errors[:5]]
            if "generated_at" in report:
                problems.append("generated_at present despite --no-timestamp")
        except json.JSONDecodeError as e:
            problems.append(f"invalid JSON: {e}")
        print(("FAIL " if problems else "ok   ") + label)
        for p in problems:
            print("     " + p)
        failures += bool(problems)

    # The timestamp appears when not suppressed and still validates.
    stamped = subprocess.run([BINARY, "compute"], capture_output=True, text=True)
    report = json.loads(stamped.stdout)
    if "generated_at" not in report or list(validator.iter_errors(report)):
        print("FAIL timestamped report")
        failures += 1

    # DUALCORR_SEED stands in for --seed.
    env = dict(os.environ, DUALCORR_SEED="11")
    from_env = json.loads(run(["compute", "--state", "random", "--dims", "2,2"], env).stdout)
    from_flag = json.loads(run(["compute", "--state", "random", "--dims", "2,2", "--seed", "11"]).stdout)
    if from_env["result"] != from_flag["result"] or from_env["config"]["seed_source"] != "env":
        print("FAIL DUALCORR_SEED fallback")
        failures += 1

    # The schema itself must reject a non-portable infinity.
    broken = json.loads(run(["compute", "--measure", "jn"]).stdout)
    broken["result"]["value"] = "inf"
    if validator.is_valid(broken):
        print("FAIL schema accepted value \"inf\"")
        failures += 1

    print(f"{len(CASES) + 3 - failures}/{len(CASES) + 3} checks passed")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
