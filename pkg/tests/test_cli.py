from __future__ import annotations

import csv
import io
import json

import pytest

import main as entry
from entanglement.report import REPORT_FIELDS


@pytest.fixture(autouse=True)
def quiet_logging(monkeypatch: pytest.MonkeyPatch, cache_env) -> None:
    # Keep pytest's capture handlers in place.
    monkeypatch.setattr(entry, "_configure_logging", lambda: None)


@pytest.mark.asyncio
async def test_steady_prints_a_json_document(capsys) -> None:
    code = await entry.main(["steady"])
    assert code == 0

    document = json.loads(capsys.readouterr().out)
    assert document["report"]["stable"] is True
    assert document["report"]["e_ac"] > 0
    assert document["modes"] == ["C", "M", "A"]
    assert len(document["covariance"]) == 6
    assert document["rates"]["kappa"] == pytest.approx(4.709e7, rel=1e-3)


@pytest.mark.asyncio
async def test_steady_with_config_file_and_outputs(tmp_path, capsys) -> None:
    config = tmp_path / "point.conf"
    config.write_text("# warmer point\ntemperature = 5e-5\nOmega_hz = 3e6\n", encoding="utf-8")
    prefix = tmp_path / "out" / "point"
    cov_path = tmp_path / "v.txt"

    code = await entry.main(["steady", "--config", str(config), "--set", "chi=90", "--set", "zeta=90", "--out", str(prefix), "--covariance", str(cov_path)])
    assert code == 0
    assert capsys.readouterr().out == ""

    document = json.loads((tmp_path / "out" / "point.json").read_text(encoding="utf-8"))
    assert document["params"]["temperature"] == 5e-5
    assert document["params"]["chi"] == 90.0

    with (tmp_path / "out" / "point.csv").open(newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    assert tuple(rows[0]) == REPORT_FIELDS
    assert cov_path.read_text(encoding="utf-8").startswith("# modes: C M A")


@pytest.mark.asyncio
async def test_steady_reports_unstable_points(capsys) -> None:
    code = await entry.main(["steady", "--set", "detuning=-1.9e7"])
    assert code == 0
    document = json.loads(capsys.readouterr().out)
    assert document["report"]["stable"] is False
    assert document["report"]["e_ac"] is None
    assert "covariance" not in document


@pytest.mark.asyncio
async def test_bad_parameter_file_exits_with_usage_code(tmp_path, capsys) -> None:
    config = tmp_path / "bad.conf"
    config.write_text("chi = 1\nflux_capacitor = 3\n", encoding="utf-8")
    code = await entry.main(["steady", "--config", str(config)])
    assert code == 2
    err = capsys.readouterr().err
    assert "bad.conf:2" in err
    assert "flux_capacitor" in err


@pytest.mark.asyncio
async def test_sweep_from_spec_file(tmp_path, capsys) -> None:
    spec = tmp_path / "scan.json"
    spec.write_text(
        json.dumps({"axes": [{"name": "zeta", "start": 80, "stop": 120, "points": 3}], "fields": ["e_ac", "e_mc"]}),
        encoding="utf-8",
    )
    code = await entry.main(["sweep", "--spec", str(spec), "--no-cache"])
    assert code == 0

    rows = list(csv.reader(io.StringIO(capsys.readouterr().out, newline="")))
    assert rows[0] == ["zeta", "e_ac", "e_mc", "error"]
    assert len(rows) == 4
    assert [float(r[0]) for r in rows[1:]] == [80.0, 100.0, 120.0]


@pytest.mark.asyncio
async def test_sweep_needs_exactly_one_source(capsys) -> None:
    assert await entry.main(["sweep"]) == 2
    assert "exactly one" in capsys.readouterr().err


@pytest.mark.asyncio
async def test_stability_map(tmp_path) -> None:
    prefix = tmp_path / "map"
    code = await entry.main(["stability-map", "--points", "3", "--out", str(prefix)])
    assert code == 0

    data = json.loads((tmp_path / "map.json").read_text(encoding="utf-8"))
    assert data["columns"] == ["detuning", "chi", "stable", "stability_margin", "static_threshold", "error"]
    assert len(data["rows"]) == 9
    assert data["rows"][0]["stable"] is False


@pytest.mark.asyncio
async def test_probe_with_gain_check(capsys) -> None:
    code = await entry.main(["probe", "--gain-check"])
    assert code == 0
    document = json.loads(capsys.readouterr().out)
    assert abs(document["e_inferred"] - document["e_ac"]) <= 1e-12
    assert document["e_probe"] < document["e_ac"]
    assert document["validity"]["adiabatic_ok"] is True
    assert document["gain_check"]["gain_factor"] == 1.1


@pytest.mark.asyncio
async def test_verify_refuses_small_ensembles(capsys) -> None:
    assert await entry.main(["verify", "--trajectories", "50"]) == 2
    assert "at least 100" in capsys.readouterr().err


@pytest.mark.asyncio
async def test_probe_infers_entanglement_from_records(tmp_path, capsys, fig2_covariance) -> None:
    import numpy as np

    from langevin.records import RecordHeader, create_records

    rng = np.random.default_rng(1)
    samples = rng.multivariate_normal(np.zeros(6), fig2_covariance.matrix, size=500_000)
    path = tmp_path / "gaussian.qrec"
    records = create_records(path, RecordHeader(n_trajectories=500, n_samples=1000, n_dims=6, sample_dt=1e-9))
    records[:] = samples.reshape(500, 1000, 6)
    records.flush()

    # A long detection window raises the gain so the vacuum kick barely matters.
    code = await entry.main(["probe", "--records", str(path), "--noise-seed", "2", "--set", "tau_m=1"])
    assert code == 0
    document = json.loads(capsys.readouterr().out)
    assert document["valid"] is True
    assert document["records"]["path"] == str(path)
    assert document["records"]["relative_error"] < 0.1
    assert document["records"]["e_inferred"] == pytest.approx(document["e_ac"], rel=0.1)
    assert len(document["records"]["measured_covariance"]) == 4


@pytest.mark.asyncio
async def test_probe_rejects_records_with_wrong_width(tmp_path, capsys) -> None:
    from langevin.records import RecordHeader, create_records

    path = tmp_path / "narrow.qrec"
    records = create_records(path, RecordHeader(n_trajectories=2, n_samples=3, n_dims=4, sample_dt=1e-9))
    records.flush()
    assert await entry.main(["probe", "--records", str(path)]) == 2
    assert "expected 6 quadratures" in capsys.readouterr().err


@pytest.mark.asyncio
async def test_cache_stats_and_clear(tmp_path, capsys) -> None:
    prefix = tmp_path / "map"
    assert await entry.main(["stability-map", "--points", "3", "--out", str(prefix)]) == 0
    assert await entry.main(["stability-map", "--points", "3", "--out", str(prefix)]) == 0
    capsys.readouterr()

    assert await entry.main(["cache", "stats"]) == 0
    stats = json.loads(capsys.readouterr().out)
    assert stats["entries"] == 1
    assert stats["total_hits"] == 1
    (entry_row,) = stats["sweeps"]
    assert entry_row["name"] == "stability-map"
    assert entry_row["n_points"] == 9

    assert await entry.main(["cache", "stats", "--key", entry_row["cache_key"]]) == 0
    assert json.loads(capsys.readouterr().out)["hits"] == 1

    assert await entry.main(["cache", "clear"]) == 0
    assert json.loads(capsys.readouterr().out) == {"removed": 1}
    assert await entry.main(["cache", "stats", "--key", entry_row["cache_key"]]) == 2
    assert "no cached sweep" in capsys.readouterr().err


def test_non_finite_document_is_a_numerical_error() -> None:
    from handlers.common import emit_document
    from model.errors import NumericalError

    with pytest.raises(NumericalError, match="non-finite"):
        emit_document({"max_abs_z": float("inf")}, None)
