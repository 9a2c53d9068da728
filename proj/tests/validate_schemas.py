# Copyright 2026 The catlink Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Runs the catlink binary and validates every emitted document.

    python3 validate_schemas.py CATLINK_BINARY SOURCE_DIR
"""

import json
import pathlib
import subprocess
import sys
import tempfile

import jsonschema


def load(path):
    with open(path, encoding="utf-8") as f:
        return json.load(f)


def main():
    binary, source = sys.argv[1], pathlib.Path(sys.argv[2])
    schemas = {name: load(source / "schemas" / f"{name}.schema.json")
               for name in ("run_report", "suite_report", "trajectory")}
    for schema in schemas.values():
        jsonschema.Draft202012Validator.check_schema(schema)

    printed = json.loads(subprocess.run([binary, "schema"], check=True, capture_output=True, text=True).stdout)
    assert printed == schemas, "schema command disagrees with the published files"

    with tempfile.TemporaryDirectory() as tmp:
        tmp = pathlib.Path(tmp)
        scenario = tmp / "mc.ini"
        scenario.write_text("[run]\nmonte_carlo_samples = 300\nseed = 5\n")
        runs = [
            ["run", "--scenario", str(scenario), "--out", str(tmp / "run.json"),
             "--trajectories", str(tmp / "traj.jsonl")],
            ["run", "--scenario", str(source / "scenarios" / "ideal.ini"), "--beta", "0.3,-0.2",
             "--out", str(tmp / "ideal_run.json")],
            ["suite", "--scenario", str(scenario), "--out", str(tmp / "suite.json")],
            ["suite", "--scenario", str(source / "scenarios" / "lossy.ini"), "--out", str(tmp / "lossy.json")],
        ]
        for args in runs:
            subprocess.run([binary, *args], check=True)

        checked = 0
        for name in ("run.json", "ideal_run.json"):
            jsonschema.validate(load(tmp / name), schemas["run_report"],
                                cls=jsonschema.Draft202012Validator)
            checked += 1
        for name in ("suite.json", "lossy.json"):
            jsonschema.validate(load(tmp / name), schemas["suite_report"],
                                cls=jsonschema.Draft202012Validator)
            checked += 1
        for line in (tmp / "traj.jsonl").read_text().splitlines():
            jsonschema.validate(json.loads(line), schemas["trajectory"], cls=jsonschema.Draft202012Validator)
            checked += 1
    print(f"validated {checked} documents")


if __name__ == "__main__":
    main()
