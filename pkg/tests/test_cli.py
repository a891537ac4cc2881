import json

import pytest

from pisot_ifs import fixtures
from pisot_ifs.cli import main
from pisot_ifs.errors import InvalidSystem, NotInDualLattice
from pisot_ifs.serialization import load_system, parse_system, system_hash, system_to_json


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_roundtrip_all_fixtures(data_dir):
    for name in ("plastic", "plastic_23", "golden_degenerate", "uniform2", "fixed_point", "mus00"):
        S, _ = load_system(data_dir / f"{name}.json")
        T, _ = parse_system(system_to_json(S))
        assert system_hash(S) == system_hash(T)
    assert system_hash(load_system(data_dir / "plastic.json")[0]) == system_hash(fixtures.plastic_system())


def test_unknown_keys_rejected():
    base = system_to_json(fixtures.plastic_system())
    with pytest.raises(InvalidSystem):
        parse_system({**base, "colour": "blue"})
    with pytest.raises(InvalidSystem):
        parse_system({**base, "pisot": {"min_poly": [-1, -1, 0], "extra": 1}})


def test_corrupted_translation(data_dir):
    with pytest.raises(NotInDualLattice):
        load_system(data_dir / "corrupted_mu.json")


def test_mhat_headline(capsys, data_dir):
    code, out, err = run(capsys, "mhat", "--system", str(data_dir / "plastic.json"))
    assert code == 0
    res = json.loads(out)
    assert res["radius"] <= 1e-8 and res["k_anchor"] == -1
    assert abs(complex(res["re"], res["im"]) - fixtures.HEADLINE_M_HAT) <= res["radius"]
    assert "wall_time_s" in err


def test_mhat_n0_and_endpoint(capsys, data_dir):
    _, out, _ = run(capsys, "mhat", "--system", str(data_dir / "plastic.json"), "--n", "0")
    assert json.loads(out)["re"] == 1
    _, out, _ = run(capsys, "mhat", "--system", str(data_dir / "plastic.json"), "--p", "0,1")
    res = json.loads(out)
    assert abs(res["re"] - 1) <= res["radius"] + 1e-12


def test_mhat_output_is_byte_identical(capsys, data_dir):
    args = ("mhat", "--system", str(data_dir / "plastic.json"), "--p", "1/3,2/3")
    assert run(capsys, *args)[1] == run(capsys, *args)[1]


def test_analyze(capsys, data_dir):
    code, out, _ = run(capsys, "analyze", "--system", str(data_dir / "plastic.json"))
    rep = json.loads(out)
    assert code == 0
    assert round(rep["similarity_dimension"]["value"], 2) == 1.64
    assert abs(rep["dimension_thresholds"]["low"]["value"] - 0.2034749) < 1e-6
    assert rep["m0"] == 0 and rep["common_fixed_point"] is None


def test_analyze_degenerate(capsys, data_dir):
    _, out, _ = run(capsys, "analyze", "--system", str(data_dir / "mus00.json"))
    rep = json.loads(out)
    assert rep["common_fixed_point"] == {"num": [0, 0, 0], "den": 1}
    assert rep["degenerate_limit"] == "0/1"


def test_analyze_generic(capsys, data_dir):
    _, out, _ = run(capsys, "analyze", "--system", str(data_dir / "generic_m.json"))
    assert json.loads(out)["uniqueness"] == "M_set_certified"


def test_exit_codes(capsys, data_dir, tmp_path):
    code, _, err = run(capsys, "analyze", "--system", str(data_dir / "bad_p.json"))
    assert code == 2 and json.loads(err)["error"] == "InvalidSystem"
    code, _, err = run(capsys, "mhat", "--system", str(data_dir / "corrupted_mu.json"))
    assert code == 3 and json.loads(err)["error"] == "NotInDualLattice"
    bad = tmp_path / "broken.json"
    bad.write_text("{not json")
    assert run(capsys, "analyze", "--system", str(bad))[0] == 2
    assert run(capsys, "mhat", "--system", str(data_dir / "plastic.json"), "--tol", "-1")[0] == 2
    assert run(capsys, "sweep", "--system", str(data_dir / "plastic.json"), "--grid", "0:2:3")[0] == 2
    notpisot = tmp_path / "np.json"
    notpisot.write_text(json.dumps({**system_to_json(fixtures.plastic_system()), "pisot": {"min_poly": [-2, 0]}}))
    assert run(capsys, "analyze", "--system", str(notpisot))[0] in (2, 3)


def test_sweep_csv(capsys, data_dir, tmp_path):
    out = tmp_path / "s.csv"
    code, _, _ = run(capsys, "sweep", "--system", str(data_dir / "plastic.json"),
                     "--grid", "0:1:2", "--format", "csv", "--out", str(out))
    assert code == 0
    lines = out.read_text().splitlines()
    meta = json.loads(lines[0][2:])
    assert meta["grid"] == "0:1:2" and meta["n"] == 1 and "system_hash" in meta
    assert lines[1] == "index,p_0,p_1,re,im,abs,radius,status"
    assert len(lines) == 4


def test_sweep_json(capsys, data_dir):
    code, out, _ = run(capsys, "sweep", "--system", str(data_dir / "plastic.json"), "--grid", "1/4:3/4:3")
    doc = json.loads(out)
    assert code == 0 and len(doc["rows"]) == 3
    assert all("radius" in r for r in doc["rows"])


def test_nuhat(capsys, data_dir):
    code, out, _ = run(capsys, "nuhat", "--system", str(data_dir / "plastic.json"), "--k", "0")
    res = json.loads(out)
    assert code == 0 and set(res) == {"t", "re", "im", "radius"}


def test_verify_corrupted_fixture(capsys, data_dir):
    code, out, _ = run(capsys, "verify", "--system", str(data_dir / "corrupted_mu.json"))
    assert code == 5
    assert "DualLatticeViolation" in json.loads(out)["checks"][0]["detail"]


def test_verify_user_system(capsys, data_dir):
    code, out, _ = run(capsys, "verify", "--system", str(data_dir / "golden_degenerate.json"))
    assert code == 0 and json.loads(out)["passed"]
