"""End-to-end checks of stackel_cli: exit codes, report schema, determinism, CSV and SVG output.

usage: cli_integration.py <stackel_cli> <report.schema.json>
"""

import json
import subprocess
import sys
import tempfile
import unittest
from pathlib import Path

import jsonschema

CLI = ""
SCHEMA = {}


def run(*args, cwd):
    return subprocess.run([CLI, *map(str, args)], cwd=cwd, capture_output=True, text=True, timeout=600)


def strip_timing(report):
    report = json.loads(json.dumps(report))
    report.pop("timing")
    for section in report["sections"]:
        section.pop("seconds")
    return report


class CliTest(unittest.TestCase):
    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory()
        self.tmp = Path(self._tmp.name)

    def tearDown(self):
        self._tmp.cleanup()

    def load(self, out):
        return json.loads((self.tmp / out / "report.json").read_text())

    def test_verify_report_is_valid_and_deterministic(self):
        args = ["verify", "--all", "-n", "3", "--samples", "3", "-T", "2", "--seed", "7"]
        first = run(*args, "--out", "a", cwd=self.tmp)
        second = run(*args, "--out", "b", cwd=self.tmp)
        self.assertEqual(first.returncode, 0, first.stdout + first.stderr)
        self.assertEqual(second.returncode, 0, second.stderr)
        ra, rb = self.load("a"), self.load("b")
        jsonschema.validate(ra, SCHEMA)
        self.assertTrue(ra["summary"]["ok"])
        self.assertEqual(ra["summary"]["unexpected"], 0)
        self.assertEqual(ra["config"]["a"], ["1", "2", "4", "7"])
        self.assertEqual(strip_timing(ra), strip_timing(rb))
        areas = {s["area"] for s in ra["sections"]}
        self.assertEqual(areas, {"classical", "stackel", "curvature", "quantum", "flow", "projective"})
        self.assertTrue((self.tmp / "a" / "report.md").read_text().startswith("# stackel verify report"))

    def test_all_skips_quantum_below_three(self):
        res = run("verify", "--all", "-n", "2", "--samples", "2", "-T", "1", "--out", "r", cwd=self.tmp)
        self.assertEqual(res.returncode, 0, res.stderr)
        report = self.load("r")
        jsonschema.validate(report, SCHEMA)
        self.assertNotIn("quantum", {s["area"] for s in report["sections"]})

    def test_config_file_and_rational_axes(self):
        (self.tmp / "c.json").write_text(json.dumps(
            {"a": ["1/2", "3", "5"], "systems": ["dual-moser"], "checks": ["classical", "stackel"], "samples": 2}))
        res = run("verify", "--config", "c.json", "--out", "r", cwd=self.tmp)
        self.assertEqual(res.returncode, 0, res.stderr)
        report = self.load("r")
        jsonschema.validate(report, SCHEMA)
        self.assertEqual(report["config"]["a"], ["1/2", "3", "5"])
        self.assertEqual(report["config"]["n"], 2)
        self.assertEqual(report["config"]["systems"], ["dual-moser"])

    def test_jacobi_moser_conformal_fails_as_expected(self):
        res = run("quantum", "--system", "jacobi-moser", "-n", "3", "--points", "2", "--tests", "2",
                  "--out", "q", cwd=self.tmp)
        self.assertEqual(res.returncode, 0, res.stdout + res.stderr)
        report = self.load("q")
        jsonschema.validate(report, SCHEMA)
        checks = {c["name"]: c for s in report["sections"] for c in s["checks"]}
        conformal = checks["jacobi-moser.quantum.conformal"]
        self.assertEqual(conformal["verdict"], "FAIL")
        self.assertEqual(conformal["expected"], "FAIL")
        self.assertTrue(conformal["as_expected"])
        self.assertEqual(checks["jacobi-moser.quantum.carter"]["verdict"], "PASS")

    def test_simulate_and_plot(self):
        res = run("simulate", "--system", "dual-moser", "-n", "3", "-T", "3", "--samples", "50",
                  "--csv", "t.csv", cwd=self.tmp)
        self.assertEqual(res.returncode, 0, res.stderr)
        self.assertIn("drift H", res.stdout)
        lines = (self.tmp / "t.csv").read_text().splitlines()
        self.assertEqual(lines[0], "t,q0,q1,q2,q3,v0,v1,v2,v3,H,F0,F1,F2,F3,J")
        self.assertEqual(len(lines), 1 + 51)  # header, t = 0 and 50 samples
        res = run("plot", "t.csv", "--out", "svg", cwd=self.tmp)
        self.assertEqual(res.returncode, 0, res.stderr)
        for name in ("drift.svg", "trace.svg"):
            self.assertTrue((self.tmp / "svg" / name).read_text().startswith("<svg"))

    def test_plot_single_row(self):
        (self.tmp / "one.csv").write_text("t,q0,q1,v0,v1,H,F0,F1,J\n0,1,0,0,1,0.5,1,2,3\n")
        res = run("plot", "one.csv", "--out", "svg", cwd=self.tmp)
        self.assertEqual(res.returncode, 0, res.stderr)

    def test_configuration_errors_exit_2(self):
        (self.tmp / "empty.csv").write_text("")
        (self.tmp / "bad.csv").write_text("t,q0,q1\n0,1\n")
        (self.tmp / "bad.json").write_text('{"colour": 3}')
        cases = [
            ("plot", "empty.csv"),
            ("plot", "bad.csv"),
            ("plot", "missing.csv"),
            ("verify", "--a", "1,x,3"),
            ("verify", "--a", "1,3,2"),
            ("verify", "--a", "1,2,2"),
            ("verify", "-n", "3", "--a", "1,2,4"),
            ("verify", "--systems", "kepler"),
            ("verify", "--config", "bad.json"),
            ("quantum", "-n", "2"),
            ("verify", "-n", "2", "--checks", "quantum"),
            ("simulate", "--system", "neumann"),
            ("verify", "--samples", "many"),
            ("frobnicate",),
        ]
        for args in cases:
            with self.subTest(args=args):
                res = run(*args, cwd=self.tmp)
                self.assertEqual(res.returncode, 2, res.stdout + res.stderr)


if __name__ == "__main__":
    CLI = str(Path(sys.argv[1]).resolve())
    SCHEMA = json.loads(Path(sys.argv[2]).read_text())
    unittest.main(argv=sys.argv[:1], verbosity=2)
