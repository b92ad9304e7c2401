import json

from ainfty.cli import main
from ainfty.io_json import SCHEMA_ALGEBRA, parse_terms

KT = {
    "schema": SCHEMA_ALGEBRA,
    "field": "rational",
    "kind": "dga",
    "generators": [["e1", 1], ["e2", 1], ["e3", 1], ["e4", 1]],
    "differential": {"e4": "e1*e2"},
}

T4_SYMPLECTIC = {
    "schema": SCHEMA_ALGEBRA,
    "field": "rational",
    "kind": "symplectic",
    "generators": [["e1", 1], ["e2", 1], ["e3", 1], ["e4", 1]],
    "differential": {},
    "omega": "e1*e2+e3*e4",
}

S3S3_PD = {
    "schema": SCHEMA_ALGEBRA,
    "field": "rational",
    "kind": "ainf",
    "basis": {"0": ["one"], "3": ["a", "b"], "6": ["mu"]},
    "unit": "one",
    "operations": {"2": [
        [["one", "one"], {"one": "1"}],
        [["one", "a"], {"a": "1"}], [["a", "one"], {"a": "1"}],
        [["one", "b"], {"b": "1"}], [["b", "one"], {"b": "1"}],
        [["one", "mu"], {"mu": "1"}], [["mu", "one"], {"mu": "1"}],
        [["a", "b"], {"mu": "1"}], [["b", "a"], {"mu": "-1"}],
    ]},
    "pd": {"mu": "mu", "connectivity": 2},
}


def write(tmp_path, name, doc):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return str(p)


def test_parse_terms():
    from fractions import Fraction
    assert parse_terms("e1*e2+e3*e4") == [(1, ["e1", "e2"]), (1, ["e3", "e4"])]
    assert parse_terms("-1/2*w^2") == [(Fraction(-1, 2), ["w", "w"])]
    assert parse_terms("0") == []


def test_check_passes_and_fails(tmp_path, capsys):
    path = write(tmp_path, "kt.json", KT)
    assert main(["check", path]) == 0
    bad = dict(KT)
    bad["differential"] = {"e1": "e3*e4", "e3": "e1*e2"}
    path2 = write(tmp_path, "bad.json", bad)
    assert main(["check", path2]) == 1     # d^2 != 0 is a mathematical finding
    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    assert main(["check", str(broken)]) == 2
    assert main(["check", str(tmp_path / "missing.json")]) == 2


def test_cohomology_kt(tmp_path, capsys):
    path = write(tmp_path, "kt.json", KT)
    out = tmp_path / "betti.json"
    assert main(["cohomology", path, "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["betti"] == {"0": 1, "1": 3, "2": 4, "3": 3, "4": 1}


def test_transfer_kt_reports_m3(tmp_path):
    path = write(tmp_path, "kt.json", KT)
    out = tmp_path / "transfer.json"
    assert main(["transfer", path, "--pmax", "4", "--strict-unital",
                 "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["report"]["ok"]
    assert 3 in doc["nonzero_arities"]


def test_transfer_formal_certificate(tmp_path):
    cp2 = {
        "schema": SCHEMA_ALGEBRA, "field": "rational", "kind": "dga",
        "generators": [["w", 2]], "differential": {}, "truncation": 4,
    }
    path = write(tmp_path, "cp2.json", cp2)
    out = tmp_path / "t.json"
    assert main(["transfer", path, "--pmax", "5", "--strict-unital",
                 "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["nonzero_arities"] == [2]
    assert doc["vanishing"]["certified_vanishing_from"] == 3


def test_extend_command(tmp_path):
    path = write(tmp_path, "t4.json", {
        "schema": SCHEMA_ALGEBRA, "field": "rational", "kind": "dga",
        "generators": [["e%d" % i, 1] for i in range(1, 5)],
        "differential": {},
    })
    out = tmp_path / "ext.json"
    assert main(["extend", path, "--omega", "e1*e2+e3*e4",
                 "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["total_dim"] == 32 and doc["theta_degree"] == 1
    assert main(["extend", path, "--omega", "e1"]) == 2   # odd omega


def test_tty_command(tmp_path):
    path = write(tmp_path, "t4s.json", T4_SYMPLECTIC)
    out = tmp_path / "tty.json"
    assert main(["tty", path, "--level", "0", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["complex_dims"] == {"0": 1, "1": 4, "2": 5, "3": 5, "4": 4, "5": 1}
    assert doc["betti_tty"] == doc["betti_extension"]


def test_pdcorrect_command(tmp_path):
    path = write(tmp_path, "s3s3.json", S3S3_PD)
    out = tmp_path / "pd.json"
    assert main(["pdcorrect", path, "--l", "3", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["report"]["ok"]
    assert doc["delta_lm1"] == [] and doc["delta_l"] == []


def test_witness_commands(tmp_path):
    out = tmp_path / "torus.json"
    assert main(["torus-witness", "--n", "2", "--pmax", "5",
                 "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["nonformality_established"]
    out2 = tmp_path / "cpn.json"
    assert main(["cpn-witness", "--n", "1", "--pmax", "5",
                 "--out", str(out2)]) == 0
    doc2 = json.loads(out2.read_text())
    assert doc2["formality_established"]


def test_determinism_byte_identical(tmp_path):
    path = write(tmp_path, "kt.json", KT)
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["transfer", path, "--pmax", "4", "--out", str(a)]) == 0
    assert main(["transfer", path, "--pmax", "4", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_jobs_flag_validation(tmp_path):
    path = write(tmp_path, "kt.json", KT)
    assert main(["check", path, "--jobs", "0"]) == 2
    assert main(["check", path, "--jobs", "2"]) == 0
