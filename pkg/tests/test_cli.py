import json
import subprocess
import sys
from pathlib import Path

import pytest
from conftest import make_e1

from chaoslab import cli
from chaoslab.errors import ParseError, UnknownSuite, UnsupportedCommandForKind, ValidationError
from chaoslab.instances import fixture, fixtures_dir, parse_instance, parse_text, validate

GOLDEN = Path(__file__).parent / "golden"
ALL_FIXTURES = sorted(p.relative_to(fixtures_dir()).as_posix() for p in fixtures_dir().rglob("*.json"))


def e1_doc(**changes):
    raw = json.loads(fixture("e1.json").read_text())
    raw.update(changes)
    return raw


class TestParsing:
    def test_minimal_identity(self):
        doc = parse_instance(fixture("identity.json"))
        assert doc.kind == "finite-action" and doc.model.phase == 2

    def test_e1_matches_hand_built(self):
        doc = parse_instance(fixture("e1.json"))
        ref = make_e1()
        assert doc.model.act == ref.act
        assert doc.model.semigroup.compose == ref.semigroup.compose

    def test_missing_row(self):
        raw = e1_doc(act=[[0, 0], [1, 0]])
        with pytest.raises(ValidationError) as info:
            validate(raw)
        assert info.value.path == "body.act[2]"

    def test_unknown_field(self):
        with pytest.raises(ValidationError) as info:
            validate(e1_doc(colour="red"))
        assert info.value.path == "body.colour"

    def test_bad_schema(self):
        with pytest.raises(ValidationError):
            validate(e1_doc(schema=2))

    def test_kind_alias(self):
        raw = {"schema": 1, "kind": "translation-action", "rank": 1, "coefficients": [2]}
        assert validate(raw).kind == "translation"

    def test_bad_ideal(self):
        with pytest.raises(ValidationError) as info:
            validate(e1_doc(ideals=[{"kappa": 3}]))
        assert info.value.path == "ideals[0].kappa"

    def test_parse_error_position(self):
        with pytest.raises(ParseError) as info:
            parse_text('{\n  "schema": 1,\n  oops\n}')
        assert info.value.line == 3

    @pytest.mark.parametrize("name", ALL_FIXTURES)
    def test_round_trip(self, name):
        doc = parse_instance(fixture(name))
        again = parse_text(doc.dumps())
        assert again == doc
        assert again.dumps() == doc.dumps()


class TestAnalysis:
    def test_e1_prox(self):
        report = cli.run_analysis(parse_instance(fixture("e1.json")), ["prox"])
        assert report["results"]["prox"]["pairs"] == [[0, 0], [0, 1], [1, 0], [1, 1], [2, 2]]

    def test_z_times_r_verdicts(self):
        report = cli.run_analysis(parse_instance(fixture("paper-example.json")), ["chaotic"])
        entries = report["results"]["chaotic"]
        assert [e["verdict"] for e in entries] == [True, False]
        assert all("stabilizer formula" in e["criterion"] for e in entries)

    def test_finite_criterion_is_brute_force(self):
        report = cli.run_analysis(parse_instance(fixture("e1.json")), ["chaotic"])
        assert all("brute force" in e["criterion"] for e in report["results"]["chaotic"])

    @pytest.mark.parametrize("name", ["iterated/merge-and-cycle.json", "iterated/rational-metric.json"])
    def test_iterated_claims(self, name):
        report = cli.run_analysis(parse_instance(fixture(name)), ["claims"])
        assert report["results"]["claims"]["holds"]

    def test_unsupported(self):
        with pytest.raises(UnsupportedCommandForKind):
            cli.run_analysis(parse_instance(fixture("e1.json")), ["oracle"])
        with pytest.raises(UnsupportedCommandForKind):
            cli.run_analysis(parse_instance(fixture("e1.json")), ["dance"])

    def test_unknown_suite(self):
        with pytest.raises(UnknownSuite):
            cli.run_verify("nope")


class TestMain:
    def run(self, *argv, capsys):
        code = cli.main(list(argv))
        return code, capsys.readouterr()

    def test_golden_text(self, capsys):
        code, out = self.run("analyze", str(fixture("e1.json")), "--ops", "prox,asym,scrambled,max-scrambled",
                             capsys=capsys)
        assert code == 0
        assert out.out == (GOLDEN / "e1-analysis.txt").read_text(encoding="utf-8")

    def test_golden_json(self, capsys):
        code, out = self.run("analyze", str(fixture("paper-example.json")), "--ops", "chaotic",
                             "--format", "json", capsys=capsys)
        assert code == 0
        assert out.out == (GOLDEN / "paper-example-chaotic.json").read_text(encoding="utf-8")

    def test_deterministic(self, capsys):
        args = ("analyze", str(fixture("s3.json")), "--ops", "prox,co-decompose,classes", "--format", "json")
        first = self.run(*args, capsys=capsys)
        second = self.run(*args, capsys=capsys)
        assert first == second

    def test_verify_seeded(self, capsys):
        a = self.run("verify", "section3", "--seed", "7", "--budget", "20", "--format", "json", capsys=capsys)
        b = self.run("verify", "section3", "--seed", "7", "--budget", "20", "--format", "json", capsys=capsys)
        assert a == b and a[0] == 0
        assert json.loads(a[1].out)["passed"]

    def test_oracle_command(self, capsys):
        code, out = self.run("oracle", str(fixture("translations/a2-0.json")), "--window", "30", "--bound", "5",
                             "--format", "json", capsys=capsys)
        assert code == 0 and json.loads(out.out)["results"]["oracle"]["agrees"]

    def test_timing_is_opt_in(self, capsys):
        _, out = self.run("analyze", str(fixture("e1.json")), "--format", "json", capsys=capsys)
        assert "timing_seconds" not in json.loads(out.out)
        _, out = self.run("analyze", str(fixture("e1.json")), "--format", "json", "--timing", capsys=capsys)
        assert "timing_seconds" in json.loads(out.out)

    def test_input_errors_exit_two(self, capsys, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{")
        assert self.run("analyze", str(bad), capsys=capsys)[0] == 2
        assert self.run("analyze", str(tmp_path / "missing.json"), capsys=capsys)[0] == 2
        assert self.run("analyze", str(fixture("e1.json")), "--ops", "claims", capsys=capsys)[0] == 2
        assert self.run("analyze", str(fixture("e1.json")), "--ideal", "9", capsys=capsys)[0] == 2
        assert self.run("verify", "nope", capsys=capsys)[0] == 2

    def test_counterexample_exits_one(self, capsys, monkeypatch):
        def failing(suite, seed, budget):
            return {"suite": suite, "seed": seed, "budget": budget, "passed": False, "results": []}
        monkeypatch.setattr(cli, "run_verify", failing)
        assert self.run("verify", "section3", capsys=capsys)[0] == 1

    def test_console_entry_point(self):
        proc = subprocess.run([sys.executable, "-m", "chaoslab", "analyze", str(fixture("identity.json")),
                               "--format", "json"], capture_output=True, text=True, check=True)
        assert json.loads(proc.stdout)["results"]["prox"]["pairs"] == [[0, 0], [1, 1]]
