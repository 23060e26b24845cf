import json

import numpy as np
import pytest

from nhent.cli import main
from nhent.config import ConfigError, parse_config


def write_config(tmp_path, doc, name="run.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc), encoding="utf-8")
    return str(path)


BASE = {
    "model": {"family": "nh_ssh",
              "params": {"N_cells": 6, "omega": 1.0, "upsilon": 0.4, "u": 0.3},
              "bc": "periodic"},
    "filling": "1/2",
    "policy": "real_part",
    "partitions": [{"type": "half"}],
}


class TestConfigValidation:
    def test_unknown_top_level_key(self):
        with pytest.raises(ConfigError, match="unknown keys"):
            parse_config({**BASE, "partions": []})

    def test_unknown_model_family(self):
        doc = {**BASE, "model": {"family": "xy_chain", "params": {}}}
        with pytest.raises(ConfigError, match="family"):
            parse_config(doc)

    def test_missing_model_parameter(self):
        doc = {**BASE, "model": {"family": "nh_ssh",
                                 "params": {"N_cells": 6, "omega": 1.0}}}
        with pytest.raises(ConfigError, match="missing parameters"):
            parse_config(doc)

    def test_sweep_parameter_must_belong_to_family(self):
        doc = {**BASE, "sweep": {"parameter": "V", "values": [0.1]}}
        with pytest.raises(ConfigError, match="sweep parameter"):
            parse_config(doc)

    def test_sweep_values_deduplicated(self):
        doc = {**BASE, "sweep": {"parameter": "u", "values": [0.1, 0.1, 0.2]}}
        config = parse_config(doc)
        assert config.sweep["values"] == [0.1, 0.2]

    def test_bad_policy(self):
        with pytest.raises(ConfigError, match="policy"):
            parse_config({**BASE, "policy": "alphabetical"})

    def test_unknown_tolerance(self):
        with pytest.raises(ConfigError, match="tolerance"):
            parse_config({**BASE, "tolerances": {"fudge": 1.0}})

    def test_partition_types(self):
        doc = {**BASE, "partitions": [
            {"type": "range", "start": 0, "stop": 4},
            {"type": "central_half"},
            {"type": "indices", "indices": [0, 2, 4]},
        ]}
        config = parse_config(doc)
        assert [p.size for p in config.partitions] == [4, 6, 3]

    def test_size_scan_expands(self):
        doc = {**BASE, "partitions": [
            {"type": "size_scan", "min": 2, "max": 6, "step": 2}]}
        config = parse_config(doc)
        assert [p.size for p in config.partitions] == [2, 4, 6]


class TestCommands:
    def test_model_list(self, capsys):
        assert main(["model-list"]) == 0
        out = capsys.readouterr().out
        assert "nh_ssh" in out and "hatano_nelson" in out

    def test_entanglement_outputs_and_determinism(self, tmp_path):
        cfg = write_config(tmp_path, BASE)
        out1 = tmp_path / "a"
        out2 = tmp_path / "b"
        out1.mkdir(), out2.mkdir()
        assert main(["entanglement", "--config", cfg, "--out", str(out1)]) == 0
        assert main(["entanglement", "--config", cfg, "--out", str(out2)]) == 0
        csv1 = (out1 / "entanglement.csv").read_bytes()
        csv2 = (out2 / "entanglement.csv").read_bytes()
        assert csv1 == csv2
        assert csv1.decode().splitlines()[0].startswith("sweep_value,partition")
        reports = json.loads((out1 / "reports.json").read_text())
        assert reports[0]["entropy_vn"]["re"] > 0
        manifest = json.loads((out1 / "manifest.json").read_text())
        assert manifest["points"][0]["status"] == "ok"

    def test_sweep_workers_deterministic(self, tmp_path):
        doc = {**BASE, "sweep": {"parameter": "u",
                                 "values": [0.0, 0.1, 0.2, 0.3]}}
        cfg = write_config(tmp_path, doc)
        out1 = tmp_path / "w1"
        out2 = tmp_path / "w2"
        out1.mkdir(), out2.mkdir()
        assert main(["entanglement", "--config", cfg, "--out", str(out1),
                     "--workers", "1"]) == 0
        assert main(["entanglement", "--config", cfg, "--out", str(out2),
                     "--workers", "2"]) == 0
        assert (out1 / "entanglement.csv").read_bytes() == \
            (out2 / "entanglement.csv").read_bytes()

    def test_config_error_exit_code(self, tmp_path):
        cfg = write_config(tmp_path, {**BASE, "unknown_key": 1})
        assert main(["entanglement", "--config", cfg,
                     "--out", str(tmp_path)]) == 1

    def test_invalid_json_reports_line(self, tmp_path, capsys):
        path = tmp_path / "broken.json"
        path.write_text('{"model": }', encoding="utf-8")
        assert main(["entanglement", "--config", str(path),
                     "--out", str(tmp_path)]) == 1
        assert "line" in capsys.readouterr().err

    def test_tolerance_override_parsing(self, tmp_path):
        cfg = write_config(tmp_path, BASE)
        assert main(["entanglement", "--config", cfg, "--out", str(tmp_path),
                     "--tolerance", "midgap=0.2"]) == 0
        assert main(["entanglement", "--config", cfg, "--out", str(tmp_path),
                     "--tolerance", "bogus=1"]) == 1

    def test_fit_command(self, tmp_path):
        rows = ["L_A,Re_S,Im_S"]
        for la in range(4, 61):
            s = (1.0 / 3) * np.log(np.sin(np.pi * la / 64)) + 1.5
            rows.append(f"{la},{s},0")
        series = tmp_path / "series.csv"
        series.write_text("\n".join(rows) + "\n", encoding="utf-8")
        cfg = write_config(tmp_path, {"fit": {"geometry": "chord",
                                              "length": 64}})
        assert main(["fit", "--config", cfg, "--series", str(series),
                     "--out", str(tmp_path)]) == 0
        fit = json.loads((tmp_path / "fit.json").read_text())
        assert abs(fit["c"] - 1.0) < 1e-9
        assert abs(fit["intercept"] - 1.5) < 1e-9

    def test_dynamics_command(self, tmp_path):
        doc = {
            "model": {"family": "measurement_chain",
                      "params": {"L": 12, "t": 1.0, "Gamma": 0.4},
                      "bc": "open"},
            "dynamics": {"t_grid": {"start": 0.0, "stop": 4.0, "num": 5},
                         "initial_state": "staggered",
                         "partition": {"type": "half"}},
        }
        cfg = write_config(tmp_path, doc)
        assert main(["dynamics", "--config", cfg, "--out", str(tmp_path)]) == 0
        lines = (tmp_path / "dynamics.csv").read_text().splitlines()
        assert lines[0] == "time,Re_S,Im_S,trace_residual"
        assert len(lines) == 6
        assert float(lines[-1].split(",")[3]) < 1e-9

    def test_duality_command(self, tmp_path):
        cfg = write_config(tmp_path, BASE)
        assert main(["duality", "--config", cfg, "--out", str(tmp_path)]) == 0
        payload = json.loads((tmp_path / "duality.json").read_text())
        assert payload[0]["max_mismatch"] < 1e-9

    def test_oracle_command_passes(self, tmp_path):
        cfg = write_config(tmp_path, {"oracle": {"n_cases": 3, "n_modes": 6,
                                                 "subsystem": 3}})
        assert main(["oracle", "--config", cfg, "--out", str(tmp_path)]) == 0
        payload = json.loads((tmp_path / "oracle.json").read_text())
        assert payload["passed"] is True

    def test_oracle_failure_exit_code(self, tmp_path):
        cfg = write_config(tmp_path, {"oracle": {"n_cases": 2, "n_modes": 6,
                                                 "subsystem": 3}})
        assert main(["oracle", "--config", cfg, "--out", str(tmp_path),
                     "--tolerance", "oracle=1e-30"]) == 2
