"""Round-trips, strict parsing, digests, CLI exit codes, determinism."""

import json

import pytest

from elemop.classify import classify, generate
from elemop.cli import main
from elemop.errors import FormatError
from elemop.exact import Matrix, scalar, vector
from elemop.operators import ElementaryOperator
from elemop.serialize import (
    instance_digest,
    instance_from_json,
    instance_to_json,
    matrix_from_json,
    matrix_to_json,
    operator_from_json,
    operator_to_json,
    scalar_from_json,
    scalar_to_json,
    space_from_json,
    space_to_json,
    vector_from_json,
    vector_to_json,
    verdict_from_json,
    verdict_to_json,
)
from elemop.spaces import reduce_basis
from conftest import specimen_form_ii, unit


def test_scalar_round_trip():
    values = [scalar("2/3", "-1/7"), scalar(-5), scalar(0, "9/4"), scalar(0)]
    for s in values:
        assert scalar_from_json(scalar_to_json(s), "t") == s


def test_scalar_rejects_decimals_and_numbers():
    with pytest.raises(FormatError) as err:
        scalar_from_json(["0.5", "0"], "entry")
    assert "0.5" in str(err.value)
    with pytest.raises(FormatError):
        scalar_from_json([0.5, "0"], "entry")
    with pytest.raises(FormatError):
        scalar_from_json(["1/0", "0"], "entry")


def test_matrix_round_trip_preserves_fractions():
    m = Matrix.from_rows([["1/3", ("2/5", "-7/11")], [0, 100]])
    data = matrix_to_json(m)
    assert matrix_from_json(data, "m") == m
    assert data[0][0] == ["1/3", "0"]


def test_vector_round_trip():
    v = vector(["1/2", -3, 0])
    assert vector_from_json(vector_to_json(v), "v") == v


def test_operator_round_trip():
    phi = specimen_form_ii()
    assert operator_from_json(operator_to_json(phi)) == phi


def test_space_round_trip():
    space = reduce_basis([unit(2, 0, 0), unit(2, 0, 1)])
    again = space_from_json(space_to_json(space))
    assert again.basis == space.basis and again.ambient_dim == 2


def test_verdict_round_trip():
    phi = specimen_form_ii()
    verdict = classify(phi)
    data = verdict_to_json(verdict, phi.dim)
    back = verdict_from_json(data, phi.dim)
    assert back.status == verdict.status and back.form == verdict.form
    assert back.representation.u == verdict.representation.u
    assert back.representation.v == verdict.representation.v
    assert back.parameters == verdict.parameters
    assert back.evidence == verdict.evidence


def test_instance_round_trip_and_zero_operator():
    phi = specimen_form_ii()
    data = instance_to_json(phi, {"note": "x"})
    back, metadata = instance_from_json(data)
    assert back == phi and metadata == {"note": "x"}
    zero_data = {"schema_version": "1", "operator": {"dim": 3, "pairs": []}}
    zero_phi, _ = instance_from_json(zero_data)
    assert zero_phi.is_zero and zero_phi.dim == 3


def test_instance_rejects_unknown_fields_and_versions():
    phi = specimen_form_ii()
    data = instance_to_json(phi)
    data["extra"] = 1
    with pytest.raises(FormatError):
        instance_from_json(data)
    data = instance_to_json(phi)
    data["schema_version"] = "2"
    with pytest.raises(FormatError):
        instance_from_json(data)


def test_digest_ignores_metadata_but_not_operator():
    phi = specimen_form_ii()
    d1 = instance_digest(instance_to_json(phi, {"a": 1}))
    d2 = instance_digest(instance_to_json(phi, {"b": 2}))
    assert d1 == d2
    other = ElementaryOperator.from_pairs(3, [(Matrix.identity(3), Matrix.identity(3))])
    assert instance_digest(instance_to_json(other)) != d1


# -- CLI ------------------------------------------------------------------


def _generate_file(tmp_path, form, dim, seed=1, n=3):
    path = tmp_path / f"{form}_{dim}_{seed}.json"
    code = main(
        ["generate", "--form", form, "--n", str(n), "--dim", str(dim), "--seed", str(seed), str(path)]
    )
    assert code == 0
    return path


def test_cli_generate_deterministic_bytes(tmp_path):
    p1 = tmp_path / "a.json"
    p2 = tmp_path / "b.json"
    for p in (p1, p2):
        assert main(["generate", "--form", "ii", "--n", "3", "--dim", "4", "--seed", "9", str(p)]) == 0
    assert p1.read_bytes() == p2.read_bytes()


def test_cli_generate_infeasible(tmp_path):
    code = main(["generate", "--form", "ii", "--dim", "2", str(tmp_path / "x.json")])
    assert code == 2


def test_cli_analyze_specimen(tmp_path, capsys):
    path = tmp_path / "specimen.json"
    path.write_text(json.dumps(instance_to_json(specimen_form_ii())))
    assert main(["analyze", str(path)]) == 0
    out = capsys.readouterr().out
    assert "length: 3" in out
    assert "L(phi): dim 3, local dim 3" in out
    assert "V(phi): dim 2" in out
    assert "sum b_i a_i: zero" in out


def test_cli_analyze_json_mode(tmp_path, capsys):
    path = _generate_file(tmp_path, "ii", 3)
    capsys.readouterr()
    assert main(["analyze", str(path), "--json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["length"] == 3
    assert report["spaces"]["L"]["dim"] == 3


def test_cli_analyze_zero_operator(tmp_path, capsys):
    path = tmp_path / "zero.json"
    path.write_text(json.dumps({"schema_version": "1", "operator": {"dim": 2, "pairs": []}}))
    assert main(["analyze", str(path)]) == 0
    out = capsys.readouterr().out
    assert "length: 0" in out


def test_cli_analyze_rejects_decimal_entry(tmp_path, capsys):
    data = instance_to_json(specimen_form_ii())
    data["operator"]["pairs"][0]["a"][0][0] = ["0.5", "0"]
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(data))
    assert main(["analyze", str(path)]) == 2
    err = capsys.readouterr().err
    assert "0.5" in err and "pairs[0].a[0][0]" in err


def test_cli_classify_exit_codes(tmp_path):
    lqn = _generate_file(tmp_path, "ii", 3, seed=3)
    assert main(["classify", str(lqn), "--out", str(tmp_path / "c1.json")]) == 0
    bad = tmp_path / "identity.json"
    eye_op = ElementaryOperator.from_pairs(2, [(Matrix.identity(2), Matrix.identity(2))])
    bad.write_text(json.dumps(instance_to_json(eye_op)))
    assert main(["classify", str(bad), "--out", str(tmp_path / "c2.json")]) == 1
    long_op = generate("i", 4, 6, seed=2)
    longer = tmp_path / "long.json"
    longer.write_text(json.dumps(instance_to_json(long_op)))
    assert main(["classify", str(longer), "--out", str(tmp_path / "c3.json")]) == 4
    assert main(["classify", str(tmp_path / "missing.json")]) == 2


def test_cli_generated_near_miss_classifies_refuted(tmp_path):
    inst = _generate_file(tmp_path, "remark45", 4, seed=1)
    assert main(["classify", str(inst), "--out", str(tmp_path / "c.json")]) == 1


def test_cli_classify_unknown_exit_code(tmp_path):
    # a refutable instance with the witness search budget forced to zero
    # cannot conclude either way: exit 3
    inst = _generate_file(tmp_path, "remark45", 4, seed=2)
    code = main(["classify", str(inst), "--out", str(tmp_path / "c.json"), "--trials", "0"])
    assert code == 3


def test_cli_classify_verify_round_trip(tmp_path):
    inst = _generate_file(tmp_path, "iii", 4, seed=6)
    cert = tmp_path / "cert.json"
    assert main(["classify", str(inst), "--out", str(cert)]) == 0
    assert main(["verify", str(inst), str(cert)]) == 0


def test_cli_verify_rejects_tampered_witness(tmp_path, capsys):
    bad = tmp_path / "identity.json"
    eye_op = ElementaryOperator.from_pairs(2, [(Matrix.identity(2), Matrix.identity(2))])
    bad.write_text(json.dumps(instance_to_json(eye_op)))
    cert = tmp_path / "cert.json"
    assert main(["classify", str(bad), "--out", str(cert)]) == 1
    data = json.loads(cert.read_text())
    data["verdict"]["witness"] = matrix_to_json(Matrix.zeros(2))
    cert.write_text(json.dumps(data))
    assert main(["verify", str(bad), str(cert)]) == 1
    assert "witness" in capsys.readouterr().err


def test_cli_verify_rejects_digest_mismatch(tmp_path, capsys):
    inst = _generate_file(tmp_path, "ii", 3, seed=4)
    cert = tmp_path / "cert.json"
    assert main(["classify", str(inst), "--out", str(cert)]) == 0
    other = _generate_file(tmp_path, "ii", 3, seed=5)
    assert main(["verify", str(other), str(cert)]) == 1
    assert "digest" in capsys.readouterr().err


def test_cli_oracle_identity_pair(tmp_path, capsys):
    bad = tmp_path / "identity.json"
    eye_op = ElementaryOperator.from_pairs(2, [(Matrix.identity(2), Matrix.identity(2))])
    bad.write_text(json.dumps(instance_to_json(eye_op)))
    assert main(["oracle", str(bad), "--trials", "20"]) == 1
    out = capsys.readouterr().out
    assert "witness found at trial 1" in out


def test_cli_oracle_pattern_instance_finds_nothing(tmp_path, capsys):
    inst = _generate_file(tmp_path, "i", 4, seed=11)
    assert main(["oracle", str(inst), "--trials", "40"]) == 0
    assert "no witness" in capsys.readouterr().out


def test_cli_oracle_near_miss_reports_char_poly(tmp_path, capsys):
    inst = _generate_file(tmp_path, "remark45", 4, seed=12)
    capsys.readouterr()
    assert main(["oracle", str(inst), "--trials", "100", "--json"]) == 1
    data = json.loads(capsys.readouterr().out)
    assert data["witness"] is not None
    assert data["char_poly"]
