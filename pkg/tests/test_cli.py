"""Tests for the command-line entry point."""

import json

import pytest
from pydantic import ValidationError

from app.main import main, parse_request
from app.models.schemas import BinomialDoc, CommandRequest, OutputFormat


class TestParsing:
    """Tests for argument parsing and request validation."""

    def test_defaults(self):
        """Test the shared flags default to JSON and no prime."""
        request = parse_request(["e3-base", "--group", "PSU", "--n", "4"])
        assert request.subcommand == "e3-base"
        assert request.format is OutputFormat.JSON
        assert request.prime is None

    def test_theta_set(self):
        """Test the index set is parsed from a comma list."""
        request = parse_request(["theta", "--n", "8", "--set", "1,2,4"])
        assert request.index_set == [1, 2, 4]

    @pytest.mark.parametrize("argv", [
        ["theta", "--n", "8"],
        ["e3-base", "--n", "4"],
        ["modp", "--group", "PSU", "--n", "4"],
        ["binomial"],
        ["theta", "--n", "8", "--set", "1,x"],
        ["unknown-command"],
    ])
    def test_usage_errors(self, argv):
        """Test invalid command lines exit with status 2."""
        with pytest.raises(SystemExit) as excinfo:
            parse_request(argv)
        assert excinfo.value.code == 2

    def test_integral_set_without_prime(self):
        """Test the integral characteristic set needs no prime."""
        request = CommandRequest(subcommand="charpolys", group="PSU", n=4, kind="integral")
        assert request.prime is None

    def test_mod_p_set_needs_prime(self):
        """Test the mod-p characteristic set needs a prime."""
        with pytest.raises(ValidationError):
            CommandRequest(subcommand="charpolys", group="PSU", n=4)

    def test_set_only_for_theta(self):
        """Test an index set is rejected outside theta."""
        with pytest.raises(ValidationError):
            CommandRequest(subcommand="binomial", n=8, index_set=[1, 2])

    def test_document_header_alias(self):
        """Test documents accept the field name and dump the schema alias."""
        doc = BinomialDoc(schema_version="9", command="binomial", n=2, b=[2, 1], ratios={}, partition={})
        assert doc.model_dump(by_alias=True)["schema"] == "9"
        assert BinomialDoc.model_validate(doc.model_dump(by_alias=True)).schema_version == "9"

    def test_request_example(self):
        """Test the request schema carries its example."""
        schema = CommandRequest.model_json_schema()
        assert schema["example"]["subcommand"] == "e3-base"


class TestCommands:
    """Tests for running subcommands end to end."""

    def test_theta_text(self, capsys):
        """Test theta(gamma_{1,2,4}) for n = 8."""
        assert main(["theta", "--n", "8", "--set", "1,2,4", "--format", "text"]) == 0
        assert capsys.readouterr().out.strip() == "2·ρ3·ρ7"

    def test_e3_base_json(self, capsys):
        """Test the JSON document header and torsion of E3^(*,0)(PSU(4))."""
        assert main(["e3-base", "--group", "PSU", "--n", "4", "--max-degree", "10"]) == 0
        document = json.loads(capsys.readouterr().out)
        assert document["schema"] == "1"
        assert document["command"] == "e3-base"
        torsion = {d["degree"]: d["torsion"] for d in document["group"]["degrees"]}
        assert torsion == {0: [], 2: [4], 4: [2], 6: [2]}

    def test_latex_output(self, capsys):
        """Test the LaTeX emitter for a presentation."""
        assert main(["e3-base", "--group", "PSU", "--n", "4", "--format", "latex"]) == 0
        assert capsys.readouterr().out.startswith(r"\begin{aligned}")

    def test_unknown_group(self, capsys):
        """Test a domain error exits with status 1 and names the error."""
        assert main(["cartan", "--group", "G2"]) == 1
        assert "error: RootDataError" in capsys.readouterr().err

    def test_charpolys_integral(self, capsys):
        """Test the integral set of PSU(4) runs without a prime."""
        assert main(["charpolys", "--group", "PSU", "--n", "4", "--kind", "integral"]) == 0
        document = json.loads(capsys.readouterr().out)
        assert [form["label"] for form in document["forms"]] == ["gamma3", "gamma5", "gamma7"]

    def test_output_file(self, tmp_path, capsys):
        """Test --output writes the document instead of standard output."""
        target = tmp_path / "binomial.json"
        assert main(["binomial", "--n", "12", "--output", str(target)]) == 0
        assert capsys.readouterr().out == ""
        document = json.loads(target.read_text(encoding="utf-8"))
        assert document["b"][:4] == [12, 6, 2, 1]

    def test_verify_single_check(self, capsys):
        """Test one criterion of the battery."""
        assert main(["verify", "--check", "binomials", "--format", "text"]) == 0
        out = capsys.readouterr().out
        assert out.startswith("[PASS] binomials")
        assert "OK in" in out

    def test_verify_unknown_check(self, capsys):
        """Test an unknown check name exits with status 1."""
        assert main(["verify", "--check", "nonexistent"]) == 1
        assert "error: VerificationError" in capsys.readouterr().err
