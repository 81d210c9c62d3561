# Copyright 2026 The Chronolapse Authors.
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

"""End-to-end checks of the chronolapse command line tool.

Usage: cli_test.py <chronolapse binary> <source dir>
"""

import filecmp
import json
import os
import subprocess
import sys
import tempfile
import unittest

import jsonschema

CLI = None
SRC = None


def data(*parts):
    return os.path.join(SRC, "data", *parts)


def load(path):
    with open(path, encoding="utf-8") as f:
        return json.load(f)


def run(*args, check=True, env=None):
    proc = subprocess.run([CLI, *args], capture_output=True, text=True, env=env)
    if check and proc.returncode != 0:
        raise AssertionError(f"{args[0]} failed ({proc.returncode}): {proc.stderr}")
    return proc


class CliTest(unittest.TestCase):
    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory(prefix="chronolapse-cli-")
        self.tmp = self._tmp.name

    def tearDown(self):
        self._tmp.cleanup()

    def path(self, name):
        return os.path.join(self.tmp, name)

    def plan(self, out, seed=7, stages="ivt"):
        run("plan", "--scene", data("scenes", "tutorial.json"),
            "--space", data("spaces", "reduced.json"), "--seed", str(seed),
            "--stages", stages, "--out", out, "--report", out + ".report.json")

    def render(self, params, out, *extra):
        run("render", "--scene", data("scenes", "tutorial.json"), "--params", params,
            "--out", out, "--width", "48", "--height", "27", *extra)

    def test_plan_is_deterministic(self):
        self.plan(self.path("a.json"))
        self.plan(self.path("b.json"))
        self.assertTrue(filecmp.cmp(self.path("a.json"), self.path("b.json"), shallow=False))
        ra = load(self.path("a.json.report.json"))
        rb = load(self.path("b.json.report.json"))
        ra.pop("wall_time_s")
        rb.pop("wall_time_s")
        self.assertEqual(ra, rb)
        self.assertEqual([s["stage"] for s in ra["stages"]], ["image", "video", "time"])

    def test_render_is_deterministic(self):
        params = os.path.join(SRC, "tests", "data", "tutorial_params.json")
        for name in ("r1", "r2"):
            self.render(params, self.path(name), "--jitter", "0.1", "--seed", "3")
        cmp = filecmp.dircmp(self.path("r1"), self.path("r2"))
        self.assertEqual(len(cmp.left_only) + len(cmp.right_only), 0)
        _, mismatch, errors = filecmp.cmpfiles(self.path("r1"), self.path("r2"),
                                               sorted(os.listdir(self.path("r1"))),
                                               shallow=False)
        self.assertEqual(mismatch, [])
        self.assertEqual(errors, [])
        self.assertEqual(len(os.listdir(self.path("r1"))), 241 + 1)

    def test_full_pipeline(self):
        params = self.path("params.json")
        self.plan(params, seed=11)
        self.render(params, self.path("raw"), "--jitter", "0.1", "--seed", "5", "--score")
        proc = run("deflicker", "--frames", self.path("raw"), "--out", self.path("clean"))
        self.assertIn("flicker", proc.stderr)
        run("assess", "--frames", self.path("clean"), "--out", self.path("score.json"))
        score = load(self.path("score.json"))
        q = score["quality"]
        self.assertAlmostEqual(q["total"], (q["q_i"] + q["q_v"] + q["q_t"]) / 3, places=12)

        # Assessing the raw frames reproduces the score stored at render time.
        raw_score = json.loads(run("assess", "--frames", self.path("raw")).stdout)
        manifest = load(os.path.join(self.path("raw"), "manifest.json"))
        self.assertEqual(raw_score["quality"], manifest["score"]["quality"])

        run("export", "--scene", data("scenes", "tutorial.json"), "--params", params,
            "--out", self.path("plan.json"))
        schema = load(os.path.join(SRC, "docs", "robot_plan.schema.json"))
        plan = load(self.path("plan.json"))
        jsonschema.validate(plan, schema)
        self.assertEqual(len(plan["waypoints"]), 16)

    def test_schema_accepts_golden_and_rejects_broken_plans(self):
        schema = load(os.path.join(SRC, "docs", "robot_plan.schema.json"))
        golden = load(os.path.join(SRC, "tests", "data", "tutorial_plan.json"))
        jsonschema.validate(golden, schema)
        broken = json.loads(json.dumps(golden))
        broken["waypoints"][0]["gimbal_yaw_deg"] = 360.0
        with self.assertRaises(jsonschema.ValidationError):
            jsonschema.validate(broken, schema)
        broken = json.loads(json.dumps(golden))
        broken["capture"]["start"] = "2024-06-22 01:00:00"
        with self.assertRaises(jsonschema.ValidationError):
            jsonschema.validate(broken, schema)

    def test_exit_codes(self):
        proc = run("plan", "--scene", data("scenes", "tutorial.json"), check=False)
        self.assertEqual(proc.returncode, 2)
        proc = run("frobnicate", check=False)
        self.assertNotEqual(proc.returncode, 0)
        proc = run("render", "--scene", "/nonexistent.json", "--params", "x.json",
                   "--out", self.path("x"), check=False)
        self.assertEqual(proc.returncode, 1)
        self.assertTrue(proc.stderr.startswith("chronolapse: "))
        self.assertEqual(len(proc.stderr.strip().splitlines()), 1)
        params = os.path.join(SRC, "tests", "data", "tutorial_params.json")
        proc = run("export", "--scene", data("scenes", "tutorial.json"), "--params", params,
                   "--lat0", "95", check=False)
        self.assertEqual(proc.returncode, 1)
        self.assertIn("lat0", proc.stderr)
        proc = run("deflicker", "--frames", self.path("missing"), "--out", self.path("o"),
                   check=False)
        self.assertEqual(proc.returncode, 1)

    def test_scene_from_environment(self):
        env = dict(os.environ, CHRONO_SCENE=data("scenes", "tutorial.json"))
        proc = run("plan", "--space", data("spaces", "reduced.json"), "--stages", "",
                   "--out", self.path("p.json"), env=env)
        self.assertEqual(proc.returncode, 0)
        self.assertTrue(os.path.exists(self.path("p.json")))

    def test_version(self):
        self.assertIn("1.0.0", run("--version").stdout)


if __name__ == "__main__":
    CLI = os.path.abspath(sys.argv[1])
    SRC = os.path.abspath(sys.argv[2])
    unittest.main(argv=sys.argv[:1], verbosity=2)
