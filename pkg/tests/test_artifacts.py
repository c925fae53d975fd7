import json

from degenwave.models.schemas import DecayReport, NormSweepRow
from degenwave.services.artifacts import dump_json, write_csv


def test_json_floats_use_seventeen_digits():
    report = DecayReport(initial_energy=0.1, final_energy=1e-20, ratio=1.0 / 3.0, control_modes=4)
    text = dump_json(report)
    assert '"initial_energy": 0.10000000000000001' in text
    assert '"ratio": 0.33333333333333331' in text
    assert '"control_modes": 4' in text
    assert '"below_threshold": false' in text
    parsed = json.loads(text)
    assert parsed["initial_energy"] == 0.1
    assert parsed["ratio"] == 1.0 / 3.0


def test_json_keys_are_sorted_and_nested_rows_keep_digits():
    sweep = [NormSweepRow(control_modes=8, control_norm=0.2)]
    report = DecayReport(initial_energy=1.0, final_energy=0.0, ratio=0.0, norm_sweep=sweep)
    text = dump_json(report)
    keys = list(json.loads(text))
    assert keys == sorted(keys)
    assert '"control_norm": 0.20000000000000001' in text
    assert text.endswith("}\n")


def test_json_and_csv_agree_on_digits(tmp_path):
    path = write_csv(tmp_path / "values.csv", ("v",), [(0.1,)])
    assert path.read_text(encoding="utf-8").splitlines()[1] == "0.10000000000000001"
