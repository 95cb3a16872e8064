#!/usr/bin/env python3
"""End-to-end checks of the skillmap command line and its JSON schemas.

Usage: cli_test.py --cli path/to/skillmap --repo path/to/source
"""
import argparse
import json
import os
import signal
import subprocess
import sys
import tempfile
import unittest
import urllib.error
import urllib.request
from pathlib import Path

try:
    import jsonschema
except ImportError:  # pragma: no cover
    jsonschema = None

CLI = None
REPO = None


def run(*args, **kw):
    return subprocess.run([CLI, *args], capture_output=True, text=True, timeout=120, **kw)


def schema(name):
    return json.loads((REPO / "schema" / f"{name}.schema.json").read_text())


def check_schema(doc, name):
    s = schema(name)
    if jsonschema is not None:
        jsonschema.Draft202012Validator(s).validate(doc)
        return
    # Fallback: required keys at the top level only.
    missing = [k for k in s.get("required", []) if k not in doc]
    if missing:
        raise AssertionError(f"{name}: missing {missing}")


class IndexBuild(unittest.TestCase):
    def test_skills_index(self):
        with tempfile.TemporaryDirectory() as d:
            out = Path(d) / "skills.vidx"
            r = run("index", "build", "--skills", str(REPO / "data/skills.csv"), "--out", str(out))
            self.assertEqual(r.returncode, 0, r.stderr)
            self.assertIn("indexed 234 skills, dim 256", r.stdout)
            self.assertTrue(out.stat().st_size > 234 * 256 * 4)

    def test_courses_index(self):
        with tempfile.TemporaryDirectory() as d:
            out = Path(d) / "courses.vidx"
            r = run("index", "build", "--courses", str(REPO / "data/courses.csv"), "--out", str(out))
            self.assertEqual(r.returncode, 0, r.stderr)
            self.assertIn("courses, dim 256", r.stdout)

    def test_malformed_csv_names_the_row(self):
        with tempfile.TemporaryDirectory() as d:
            bad = Path(d) / "bad.csv"
            bad.write_text("id,label,alt_labels,description\nS1,one,,first\nS2,\"two,,second\n")
            r = run("index", "build", "--skills", str(bad), "--out", str(Path(d) / "x.vidx"))
            self.assertEqual(r.returncode, 2, r.stderr)
            self.assertIn("row 3", r.stderr)

    def test_unwritable_output(self):
        r = run("index", "build", "--skills", str(REPO / "data/skills.csv"),
                "--out", "/nonexistent/dir/skills.vidx")
        self.assertEqual(r.returncode, 3, r.stderr)

    def test_prebuilt_index_gives_same_analysis(self):
        sample = str(REPO / "data/sample/greening_freight_transport.txt")
        with tempfile.TemporaryDirectory() as d:
            out = Path(d) / "skills.vidx"
            self.assertEqual(run("index", "build", "--skills", str(REPO / "data/skills.csv"),
                                 "--out", str(out)).returncode, 0)
            fresh = run("analyze", sample)
            prebuilt = run("analyze", sample, "--skill-index", str(out))
            self.assertEqual(prebuilt.returncode, 0, prebuilt.stderr)
            self.assertEqual(fresh.stdout, prebuilt.stdout)


class Analyze(unittest.TestCase):
    sample = None

    @classmethod
    def setUpClass(cls):
        cls.sample = str(REPO / "data/sample/greening_freight_transport.txt")

    def test_json_matches_schema(self):
        r = run("analyze", self.sample, "--format", "json", "--timings", "--debug")
        self.assertEqual(r.returncode, 0, r.stderr)
        doc = json.loads(r.stdout)
        check_schema(doc, "analysis_result")
        self.assertEqual(len(doc["sdgs"]), 17)
        self.assertTrue(doc["skills"])
        self.assertIn("timings", doc)

    def test_output_is_deterministic(self):
        a = run("analyze", self.sample)
        b = run("analyze", self.sample)
        self.assertEqual(a.returncode, 0, a.stderr)
        self.assertEqual(a.stdout, b.stdout)
        self.assertNotIn("timings", json.loads(a.stdout))

    def test_table_output(self):
        r = run("analyze", self.sample, "--format", "table")
        self.assertEqual(r.returncode, 0, r.stderr)
        for heading in ("SKILLS", "OCCUPATIONS", "COURSES", "SDGS"):
            self.assertIn(heading, r.stdout)
        with self.assertRaises(json.JSONDecodeError):
            json.loads(r.stdout)

    def test_empty_document(self):
        with tempfile.NamedTemporaryFile("w", suffix=".txt", delete=False) as f:
            f.write("  \n\t\n")
        try:
            r = run("analyze", f.name)
            self.assertEqual(r.returncode, 2)
            self.assertIn("empty document", r.stderr)
        finally:
            os.unlink(f.name)

    def test_missing_file(self):
        r = run("analyze", "/nonexistent/doc.txt")
        self.assertEqual(r.returncode, 2, r.stderr)

    def test_html_input(self):
        with tempfile.NamedTemporaryFile("w", suffix=".html", delete=False) as f:
            f.write("<html><body><p>Plan freight routes and manage budgets.</p></body></html>")
        try:
            r = run("analyze", f.name)
            self.assertEqual(r.returncode, 0, r.stderr)
            check_schema(json.loads(r.stdout), "analysis_result")
        finally:
            os.unlink(f.name)

    def test_unknown_input_format(self):
        r = run("analyze", self.sample, "--input-format", "pdf")
        self.assertEqual(r.returncode, 2, r.stderr)


class Validate(unittest.TestCase):
    def test_table_rows(self):
        r = run("validate", "--suite", "skills", "--seed", "1")
        self.assertEqual(r.returncode, 0, r.stderr)
        rows = [line.split()[0] for line in r.stdout.splitlines() if line.strip()]
        for kind in ("explicit", "implicit", "overall"):
            self.assertIn(kind, rows)

    def test_assertions(self):
        ok = run("validate", "--suite", "skills", "--seed", "1", "--assert", "overall_f1>=0.5")
        self.assertEqual(ok.returncode, 0, ok.stderr)
        bad = run("validate", "--suite", "skills", "--seed", "1", "--assert", "overall_f1>=1.01")
        self.assertEqual(bad.returncode, 1)
        self.assertIn("overall_f1", bad.stderr)

    def test_report_is_reproducible_and_valid(self):
        with tempfile.TemporaryDirectory() as d:
            for suite in ("skills", "sdg"):
                paths = [Path(d) / f"{suite}{i}.json" for i in range(2)]
                for p in paths:
                    r = run("validate", "--suite", suite, "--seed", "7", "--report", str(p))
                    self.assertEqual(r.returncode, 0, r.stderr)
                self.assertEqual(paths[0].read_bytes(), paths[1].read_bytes())
                report = json.loads(paths[0].read_text())
                check_schema(report, "validation_report")
                self.assertEqual(report["suite"], suite)
                self.assertEqual(report["seed"], 7)

    def test_chart(self):
        with tempfile.TemporaryDirectory() as d:
            chart = Path(d) / "chart.html"
            r = run("validate", "--suite", "sdg", "--seed", "1", "--chart", str(chart))
            self.assertEqual(r.returncode, 0, r.stderr)
            self.assertIn("<svg", chart.read_text())

    def test_unknown_suite(self):
        self.assertEqual(run("validate", "--suite", "nope").returncode, 2)


class Serve(unittest.TestCase):
    def start(self, *extra):
        proc = subprocess.Popen([CLI, "serve", "--port", "0", "--host", "127.0.0.1", *extra],
                                stdout=subprocess.PIPE, stderr=subprocess.PIPE, text=True)
        line = proc.stdout.readline()
        self.assertTrue(line.startswith("listening on http://127.0.0.1:"), line)
        return proc, line.strip().split("listening on ")[1]

    def get(self, url):
        try:
            with urllib.request.urlopen(url, timeout=30) as res:
                return res.status, json.loads(res.read())
        except urllib.error.HTTPError as e:
            return e.code, json.loads(e.read())

    def wait_ready(self, base):
        import time
        deadline = time.time() + 60
        while time.time() < deadline:
            status, body = self.get(base + "/api/health")
            if status == 200:
                return body
            self.assertEqual(status, 503)
            check_schema(body, "health")
            time.sleep(0.05)
        self.fail("service never became ready")

    def test_health_analyze_and_sigint(self):
        proc, base = self.start()
        try:
            health = self.wait_ready(base)
            check_schema(health, "health")
            self.assertEqual(health["catalog_sizes"]["skills"], 234)

            text = (REPO / "data/sample/greening_freight_transport.txt").read_text()
            req = urllib.request.Request(base + "/api/analyze", method="POST",
                                         data=json.dumps({"name": "s.txt", "text": text}).encode(),
                                         headers={"Content-Type": "application/json"})
            with urllib.request.urlopen(req, timeout=60) as res:
                self.assertEqual(res.status, 200)
                check_schema(json.loads(res.read()), "analysis_result")

            status, sdg = self.get(base + "/api/sdg/13")
            self.assertEqual(status, 200)
            check_schema(sdg, "sdg")
            status, err = self.get(base + "/api/sdg/99")
            self.assertEqual(status, 404)
            check_schema(err, "error")
        finally:
            proc.send_signal(signal.SIGINT)
            rc = proc.wait(timeout=30)
            proc.stdout.close()
            proc.stderr.close()
        self.assertEqual(rc, 0)

    def test_missing_skill_index(self):
        r = run("serve", "--port", "0", "--skill-index", "/nonexistent/skills.vidx")
        self.assertEqual(r.returncode, 3, r.stderr)
        self.assertIn("/nonexistent/skills.vidx", r.stderr)


class ConfigShow(unittest.TestCase):
    def test_text_and_json(self):
        text = run("config", "show")
        self.assertEqual(text.returncode, 0, text.stderr)
        self.assertIn("[extraction]", text.stdout)
        as_json = run("config", "show", "--json")
        self.assertEqual(as_json.returncode, 0, as_json.stderr)
        self.assertEqual(json.loads(as_json.stdout)["extraction"]["tau"], 0.35)

    def test_layers(self):
        with tempfile.NamedTemporaryFile("w", suffix=".toml", delete=False) as f:
            f.write("[extraction]\ntau = 0.4\n[mapping]\ntop_courses = 3\n")
        try:
            env = dict(os.environ, SKILLMAP_MAPPING_TOP_COURSES="4")
            r = run("config", "show", "--json", "--config", f.name, "--set", "extraction.tau=0.5", env=env)
            self.assertEqual(r.returncode, 0, r.stderr)
            cfg = json.loads(r.stdout)
            self.assertEqual(cfg["extraction"]["tau"], 0.5)
            self.assertEqual(cfg["mapping"]["top_courses"], 4)
        finally:
            os.unlink(f.name)

    def test_bad_override(self):
        self.assertEqual(run("config", "show", "--set", "extraction.tau=lots").returncode, 2)

    def test_shipped_example_config_loads(self):
        r = run("config", "show", "--json", "--config", str(REPO / "config/skillmap.toml"))
        self.assertEqual(r.returncode, 0, r.stderr)
        self.assertEqual(json.loads(r.stdout), json.loads(run("config", "show", "--json").stdout))


def main():
    global CLI, REPO
    parser = argparse.ArgumentParser()
    parser.add_argument("--cli", required=True)
    parser.add_argument("--repo", required=True)
    args, rest = parser.parse_known_args()
    CLI = os.path.abspath(args.cli)
    REPO = Path(args.repo).resolve()
    unittest.main(argv=[sys.argv[0], *rest], verbosity=2)


if __name__ == "__main__":
    main()
