"""Instance files, reports, configuration and the command-line surface."""

import logging
from fractions import Fraction

import pytest
import yaml

from linfrep import cli
from linfrep.core.config import SessionConfig
from linfrep.core.errors import InstanceFormatError
from linfrep.core.linfty import LInfinityAlgebra, check_jacobi
from linfrep.core.repcat import Intertwiner, Representation, is_representation
from linfrep.services.checks import CheckRegistry, run_check
from linfrep.services.instances import instance_to_dict, load_instance, save_instance
from linfrep.utils.common import parse_rational
from linfrep.utils.suite_config import SuiteConfigManager

BROKEN_SL2 = """
kind: algebra
name: broken
basis:
  - {label: e, degree: 0}
  - {label: f, degree: 0}
  - {label: h, degree: 0}
brackets:
  2:
    - {inputs: [e, f], output: [{label: h, coeff: 1}]}
    - {inputs: [e, h], output: [{label: e, coeff: -3}]}
    - {inputs: [f, h], output: [{label: f, coeff: 2}]}
"""

DOUBLING = """
kind: intertwiner
name: double
algebra: sl2.yaml
source: adjoint
target: adjoint
degree: 0
components:
  "1":
    - {inputs: [e], output: [{label: e, coeff: 2}]}
"""


def write(path, text):
    path.write_text(text)
    return path


@pytest.fixture
def sl2_copy(tmp_path, fixture_dir):
    return write(tmp_path / "sl2.yaml", (fixture_dir / "sl2.yaml").read_text())


# ============================================================================
# Instance files
# ============================================================================

def test_load_algebra_fixture(fixture_dir):
    alg = load_instance(fixture_dir / "sl2.yaml")
    assert isinstance(alg, LInfinityAlgebra)
    assert alg.space.labels == ("e", "f", "h")
    assert alg.bracket(2).evaluate(("h", "e")) == {("e",): 2}


def test_load_representation_fixture(fixture_dir):
    rep = load_instance(fixture_dir / "sl2_fundamental.yaml")
    assert isinstance(rep, Representation)
    assert is_representation(rep).passed


def test_algebra_round_trip(tmp_path, fixture_dir):
    alg = load_instance(fixture_dir / "string_lie2.yaml")
    saved = save_instance(alg, tmp_path / "copy.yaml")
    again = load_instance(saved)
    assert again.space == alg.space
    for i in alg.brackets:
        assert again.bracket(i).entries == alg.bracket(i).entries
    assert instance_to_dict(again) == instance_to_dict(alg)


def test_representation_round_trip(tmp_path, sl2_copy, fixture_dir):
    rep = load_instance(fixture_dir / "sl2_fundamental.yaml")
    saved = save_instance(rep, tmp_path / "V2.yaml", algebra_ref="sl2.yaml")
    again = load_instance(saved)
    assert instance_to_dict(again, "sl2.yaml") == instance_to_dict(rep, "sl2.yaml")


def test_degree_inconsistent_entry(tmp_path):
    path = write(tmp_path / "bad.yaml", """
kind: algebra
name: bad
basis: [{label: a, degree: 1}, {label: b, degree: 1}]
brackets:
  2:
    - {inputs: [a, b], output: [{label: a, coeff: 1}]}
""")
    with pytest.raises(InstanceFormatError) as info:
        load_instance(path)
    assert info.value.entry["inputs"] == ["a", "b"]


def test_empty_brackets_give_an_abelian_algebra(tmp_path):
    path = write(tmp_path / "flat.yaml", "kind: algebra\nname: flat\nbasis: [{label: x, degree: 0}]\n")
    alg = load_instance(path)
    assert alg.top_arity == 0
    assert check_jacobi(alg).passed


def test_malformed_rational(tmp_path):
    path = write(tmp_path / "bad.yaml", BROKEN_SL2.replace("coeff: 2", "coeff: '2.5'"))
    with pytest.raises(InstanceFormatError):
        load_instance(path)


def test_missing_algebra_reference(tmp_path):
    path = write(tmp_path / "rep.yaml", "kind: representation\nname: V\nbasis: []\n")
    with pytest.raises(InstanceFormatError, match="algebra"):
        load_instance(path)


def test_non_canonical_inputs_warn(tmp_path, caplog, monkeypatch):
    monkeypatch.setattr(logging.getLogger("linfrep"), "propagate", True)
    path = write(tmp_path / "sl2.yaml", BROKEN_SL2.replace("[e, h]", "[h, e]").replace("-3", "3"))
    with caplog.at_level(logging.WARNING, logger="linfrep.services.instances"):
        alg = load_instance(path)
    assert "normalised" in caplog.text
    assert alg.bracket(2).evaluate(("e", "h")) == {("e",): -3}


def test_parse_rational():
    assert parse_rational("3/4") == Fraction(3, 4)
    assert parse_rational(-2) == Fraction(-2)
    for bad in ("1.5", 0.5, True, "1/0", "x"):
        with pytest.raises(ValueError):
            parse_rational(bad)


# ============================================================================
# Reports and configuration
# ============================================================================

def test_reports_are_deterministic(fixture_dir):
    config = SessionConfig(seed=9)
    first = run_check("jacobi", [fixture_dir / "sl2.yaml"], config)
    second = run_check("jacobi", [fixture_dir / "sl2.yaml"], config)
    first.wall_time = second.wall_time = 0.0
    assert first.render_structured() == second.render_structured()
    assert first.passed
    assert first.caps["arity_cap"] == 4
    assert len(first.inputs[str(fixture_dir / "sl2.yaml")]) == 64


def test_poisson_check_on_fixtures():
    report = run_check("poisson", [], SessionConfig())
    assert report.passed
    assert {v.name for v in report.verdicts} == {
        "maurer_cartan[sl2_casimir]", "maurer_cartan[string_lie2-poisson]", "maurer_cartan[central_casimir]",
    }


def test_suite_config_falls_back_to_builtins(tmp_path):
    manager = SuiteConfigManager(tmp_path / "missing.yaml")
    assert manager.get_suite("dg_category")["instances"] == 200
    assert manager.get_suite("ce_pairs")["instances"] == 100
    assert manager.get_suite("braiding") == {"arity_cap": 2}
    with pytest.raises(ValueError):
        manager.get_suite("nonexistent")


def test_suite_overrides(tmp_path):
    manager = SuiteConfigManager(tmp_path / "missing.yaml")
    manager.set_user_overrides({"monoidal": {"instances": 5, "arity_cap": 0}})
    assert manager.get_suite("monoidal") == {"instances": 5, "arity_cap": 4}


def test_session_config_validation():
    with pytest.raises(ValueError):
        SessionConfig(arity_cap=0)
    with pytest.raises(ValueError):
        SessionConfig(degree_min=3, degree_max=1)


def test_check_registry():
    assert CheckRegistry.list_checks() == ["axioms", "braiding", "ce", "jacobi", "poisson", "rep"]
    with pytest.raises(ValueError, match="Available"):
        CheckRegistry.get_check("hexagon")


# ============================================================================
# Command line
# ============================================================================

def test_cli_check_passes(fixture_dir, capsys):
    assert cli.main(["check", "jacobi", str(fixture_dir / "sl2.yaml")]) == cli.EXIT_PASS
    assert "[PASS] jacobi[sl2]" in capsys.readouterr().out


def test_cli_check_fails_on_broken_algebra(tmp_path, capsys):
    path = write(tmp_path / "broken.yaml", BROKEN_SL2)
    assert cli.main(["check", "jacobi", str(path), "--format", "structured"]) == cli.EXIT_FAIL
    out = capsys.readouterr().out
    assert '"passed": false' in out


def test_cli_missing_file(tmp_path, capsys):
    assert cli.main(["check", "jacobi", str(tmp_path / "nope.yaml")]) == cli.EXIT_USAGE
    assert "Error:" in capsys.readouterr().out


def test_cli_invalid_cap(fixture_dir, capsys):
    assert cli.main(["check", "jacobi", str(fixture_dir / "sl2.yaml"), "--arity-cap", "0"]) == cli.EXIT_USAGE


def test_cli_unknown_check():
    with pytest.raises(SystemExit):
        cli.main(["check", "hexagon"])


def test_cli_braiding_on_fixture_files(fixture_dir):
    args = ["check", "braiding", str(fixture_dir / "sl2.yaml"), str(fixture_dir / "sl2_casimir.yaml"),
            "--arity-cap", "2", "--reps", "adjoint,trivial,adjoint"]
    assert cli.main(args) == cli.EXIT_PASS


def test_cli_compose(tmp_path, sl2_copy):
    f = write(tmp_path / "double.yaml", DOUBLING)
    out = tmp_path / "composite.yaml"
    assert cli.main(["op", "compose", str(f), str(f), "-o", str(out)]) == cli.EXIT_PASS
    composite = load_instance(out)
    assert isinstance(composite, Intertwiner)
    assert composite.evaluate(1, (), ("e",)) == {("e",): 4}


def test_cli_ce_export(tmp_path, fixture_dir):
    out = tmp_path / "ce.yaml"
    assert cli.main(["ce", "export", str(fixture_dir / "sl2.yaml"), "-W", "4", "-o", str(out)]) == cli.EXIT_PASS
    data = yaml.safe_load(out.read_text())
    assert data["word_cap"] == 4
    assert data["delta"]["e"] == [{"monomial": ["e", "h"], "output": [], "coeff": "-2"}]


def test_cli_generates_loadable_instances(tmp_path):
    out = tmp_path / "generated"
    assert cli.main(["gen", "random", "--representations", "2", "--seed", "3", "-o", str(out)]) == cli.EXIT_PASS
    files = sorted(out.glob("*.yaml"))
    assert len(files) == 3
    loaded = [load_instance(p) for p in files]
    reps = [x for x in loaded if isinstance(x, Representation)]
    assert len(reps) == 2
    assert all(is_representation(rep).passed for rep in reps)
