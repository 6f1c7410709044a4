import json

import pytest

from rmoments import cli
from rmoments.observables import observable_to_json
from rmoments.paulis import PAULIS

I, X, Y, Z = PAULIS


def run(args):
    return cli.main(args)


def odet_doc():
    return observable_to_json([[X, X], [Y, Y], [Z, Z]])


def test_state_gen_and_invariants(tmp_path):
    state = tmp_path / "bell.json"
    assert run(["state-gen", "--kind", "bell", "--qubits", "2",
                "--out", str(state)]) == 0
    out = tmp_path / "inv.json"
    assert run(["invariants", "--state", str(state), "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["invariants"]["I1"] == pytest.approx(-1.0)
    assert doc["negativity"] == pytest.approx(0.5)


def test_state_gen_matrix_roundtrip(tmp_path):
    state = tmp_path / "mixed.json"
    assert run(["state-gen", "--kind", "mixed", "--seed", "4",
                "--format", "matrix", "--out", str(state)]) == 0
    out = tmp_path / "inv.json"
    assert run(["invariants", "--state", str(state), "--out", str(out)]) == 0
    assert "I14" in json.loads(out.read_text())["invariants"]


def test_classify_pauli_sum(tmp_path):
    obs = tmp_path / "odet.json"
    obs.write_text(json.dumps(odet_doc()))
    out = tmp_path / "cls.json"
    assert run(["classify", "--observable", str(obs), "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["rank"] == 3
    assert doc["det_prefactor"] == pytest.approx(1.0)


def test_twirl_subcommand(tmp_path):
    obs = tmp_path / "odet.json"
    obs.write_text(json.dumps(odet_doc()))
    state = tmp_path / "bell.json"
    run(["state-gen", "--kind", "bell", "--out", str(state)])
    out = tmp_path / "twirl.json"
    assert run(["twirl", "--observable", str(obs), "--state", str(state),
                "--t", "3", "--gauge", "reduced", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["moment"] == pytest.approx(-1.0)
    assert doc["decomposition"]["coefficients"]["I1"] == pytest.approx(1.0)


def test_mc_subcommand(tmp_path):
    obs = tmp_path / "odet.json"
    obs.write_text(json.dumps(odet_doc()))
    state = tmp_path / "bell.json"
    run(["state-gen", "--kind", "bell", "--out", str(state)])
    out = tmp_path / "mc.json"
    assert run(["mc", "--observable", str(obs), "--state", str(state),
                "--t", "3", "--samples", "20000", "--seed", "3",
                "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert abs(doc["mean"] + 1.0) <= 4 * doc["stderr"]


def test_simulate_exact_and_csv(tmp_path):
    state = tmp_path / "bell.json"
    run(["state-gen", "--kind", "bell", "--out", str(state)])
    out = tmp_path / "rep.json"
    csv = tmp_path / "trace.csv"
    assert run(["simulate", "--state", str(state), "--invariant", "det",
                "--exact", "--unitaries", "50", "--shots", "20",
                "--csv", str(csv), "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["estimate"] == pytest.approx(-1.0, abs=1e-8)
    lines = csv.read_text().strip().splitlines()
    assert lines[0] == "unitary_index,setting_index,estimate"
    assert len(lines) == 1 + 50 * 3


def test_simulate_kempe_exact(tmp_path):
    state = tmp_path / "ghz.json"
    run(["state-gen", "--kind", "ghz", "--qubits", "3", "--out", str(state)])
    out = tmp_path / "rep.json"
    assert run(["simulate", "--state", str(state), "--invariant", "kempe",
                "--exact", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["estimate"] == pytest.approx(0.25, abs=1e-8)
    assert doc["settings_used"] == 2


def test_verify_single_claim(tmp_path, capsys):
    out = tmp_path / "report.json"
    code = run(["verify", "--claim", "gram_values", "--seed", "7",
                "--json", str(out)])
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["passed"] is True


def test_malformed_json_exit_code(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(["invariants", "--state", str(bad)]) == cli.EXIT_BAD_INPUT


def test_dimension_mismatch_exit_code(tmp_path):
    obs = tmp_path / "odet.json"
    obs.write_text(json.dumps(odet_doc()))
    state = tmp_path / "ghz.json"
    run(["state-gen", "--kind", "ghz", "--qubits", "3", "--out", str(state)])
    assert run(["mc", "--observable", str(obs), "--state", str(state),
                "--t", "2"]) == cli.EXIT_DIMENSION


def test_seeded_output_is_byte_identical(tmp_path):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    for path in (a, b):
        run(["state-gen", "--kind", "mixed", "--seed", "12", "--out", str(path)])
    assert a.read_bytes() == b.read_bytes()


def test_state_gen_accepted_everywhere(tmp_path):
    # round-trip: generated states feed every state-consuming subcommand
    state = tmp_path / "s.json"
    run(["state-gen", "--kind", "pure", "--seed", "3", "--out", str(state)])
    obs = tmp_path / "o.json"
    obs.write_text(json.dumps(odet_doc()))
    assert run(["invariants", "--state", str(state)]) == 0
    assert run(["twirl", "--observable", str(obs), "--state", str(state), "--t", "2"]) == 0
    assert run(["mc", "--observable", str(obs), "--state", str(state),
                "--t", "2", "--samples", "1000"]) == 0
    assert run(["simulate", "--state", str(state), "--invariant", "I2", "--exact"]) == 0
