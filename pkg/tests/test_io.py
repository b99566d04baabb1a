import json

import numpy as np
import pytest
from pydantic import ValidationError

from perqwalk.errors import ConfigError
from perqwalk.experiments.run_config import RunConfig, lattice_from_parts
from perqwalk.io.initial_state import parse_amplitude, parse_initial_state
from perqwalk.io.persistence import (
    AttractorReportRecord,
    DistributionRecord,
    RunMetadata,
    distribution_csv,
    distribution_record,
    read_distribution,
    read_record,
    render,
    write_result,
)
from perqwalk.walk.lattice import LatticeSpec
from perqwalk.walk.states import PositionDistribution

R2 = "0.70710678118654752"


@pytest.mark.parametrize(
    "text, value",
    [("0.5", 0.5), ("-0.5i", -0.5j), ("0.5+0.5i", 0.5 + 0.5j), ("1e-1-2e-1i", 0.1 - 0.2j), ("1", 1.0)],
)
def test_parse_amplitude(text, value):
    assert parse_amplitude(text) == value


@pytest.mark.parametrize("text", ["", "abc", "0.5j", "inf", "0.5 + 0.5i"])
def test_parse_amplitude_rejects(text):
    with pytest.raises(ConfigError):
        parse_amplitude(text)


def test_parse_initial_state(torus3):
    psi = parse_initial_state(f"1,2:L={R2},D={R2}i", torus3)
    assert psi.is_normalized(1e-12)
    assert psi.amplitudes[4 * (1 * 3 + 2)] == pytest.approx(float(R2))
    assert psi.amplitudes[4 * (1 * 3 + 2) + 1] == pytest.approx(1j * float(R2))
    named = parse_initial_state("0,0:@uniform", torus3)
    assert np.allclose(named.amplitudes[:4], 0.5)


@pytest.mark.parametrize(
    "text",
    [
        "1,1:L=0.5,D=0.5",          # not normalized
        "1,1:L=1,L=0",              # repeated direction
        "1,1:X=1",                  # unknown direction
        "5,5:L=1",                  # off the lattice
        "1;1:L=1",                  # bad site
        "1,1",                      # no components
        "1,1:@nothing",             # unknown preset
    ],
)
def test_parse_initial_state_rejects(text, torus3):
    with pytest.raises(ConfigError):
        parse_initial_state(text, torus3)


def test_run_config_defaults_and_normalisation():
    cfg = RunConfig(lattice="3X4:Open,Periodic")
    assert cfg.lattice == "3x4:open,periodic"
    assert cfg.coin == "hadamard2d" and cfg.method == "auto" and cfg.format == "json"
    assert lattice_from_parts("15x16", "periodic", "open") == "15x16:periodic,open"


@pytest.mark.parametrize(
    "fields",
    [
        {"lattice": "3x3:open,open", "colour": "red"},
        {"lattice": "3x3:open,open", "p": 1.5},
        {"lattice": "3x3:open,open", "mode": "fast"},
        {"lattice": "3x3:open,open", "trials": 0},
        {"lattice": "2x3:open,open"},
        {"lattice": "3x3:open,open", "coin": "custom"},
        {"lattice": "3x3:open,open", "coin": "grover", "coin_file": "c.json"},
        {"lattice": "3x3:open,open", "initial": "0,0:L=0.5"},
    ],
)
def test_run_config_rejects(fields):
    with pytest.raises(ValidationError):
        RunConfig(**fields)


def test_run_config_is_frozen():
    cfg = RunConfig(lattice="3x3:open,open")
    with pytest.raises(ValidationError):
        cfg.p = 0.3


def _record(stderr=False):
    spec = LatticeSpec.parse("3x3:open,open")
    probs = np.full((3, 3), 1.0 / 9)
    err = np.full((3, 3), 1e-3) if stderr else None
    meta = RunMetadata(command="evolve", lattice=str(spec), coin="grover", p=0.5, steps=3,
                       mode="mc" if stderr else "exact", tool_version="0.1.0")
    return distribution_record(PositionDistribution(spec, probs, err), meta)


def test_csv_layout():
    lines = distribution_csv(_record()).splitlines()
    assert lines[0] == "s,t,P"
    assert lines[1] == f"0,0,{1.0 / 9:.17g}"
    assert lines[4].startswith("1,0,")
    assert len(lines) == 10
    assert distribution_csv(_record(stderr=True)).splitlines()[0] == "s,t,P,stderr"


def test_json_round_trip_and_sorted_keys(tmp_path):
    record = _record(stderr=True)
    path = write_result(record, "json", tmp_path / "out" / "dist.json")
    text = path.read_text()
    data = json.loads(text)
    assert data["schema"] == 1
    assert list(data) == sorted(data)
    loaded = read_distribution(path)
    assert loaded == record
    # rendering is a pure function of the record
    assert render(loaded, "json") == text


def test_reader_rejects_unknown_fields_and_schema(tmp_path):
    data = json.loads(render(_record(), "json"))
    data["extra"] = 1
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(data))
    with pytest.raises(ConfigError):
        read_distribution(path)
    data.pop("extra")
    data["schema"] = 2
    path.write_text(json.dumps(data))
    with pytest.raises(ConfigError, match="schema"):
        read_distribution(path)
    path.write_text(json.dumps({"schema": 1, "metadata": data["metadata"]}))
    with pytest.raises(ConfigError):
        read_record(path, AttractorReportRecord)


def test_csv_refused_for_reports():
    meta = _record().metadata
    report = AttractorReportRecord(metadata=meta, analytic_count=17, numeric_count=17, match=True, closed_form=True)
    with pytest.raises(ConfigError):
        render(report, "csv")
    assert isinstance(report, AttractorReportRecord)
    assert not isinstance(report, DistributionRecord)
