"""Pipeline command, CLI client, and HTTP service contracts."""

import json
import threading
from pathlib import Path

import pytest
from click.testing import CliRunner
from fastapi.testclient import TestClient

from chronoline.api import TimelineResponse, create_app
from chronoline.cli import main
from chronoline.config import load_config

from chronoline.layout import is_independent
from chronoline.pipeline import PipelineError, run_pipeline

GOLDEN = Path(__file__).parent / "golden"
DATA = Path(__file__).parent.parent / "data"

@pytest.fixture(scope="module")
def client(built_engine):
    return TestClient(create_app(built_engine))

def _write_config(tmp_path, **overrides):
    cfg = {
        "triples": str(DATA / "triples.tsv"),
        "templates": str(DATA / "templates.tsv"),
        "importance": str(DATA / "importance.tsv"),
        "names": str(DATA / "names.tsv"),
        "documents": str(DATA / "docs.jsonl"),
        "cooc_store": str(tmp_path / "cooc.jsonl"),
        "candidate_store": str(tmp_path / "store"),
        "reports_dir": str(tmp_path / "reports"),
        "cvt_predicates": json.loads((DATA / "config.json").read_text())["cvt_predicates"],
        "existence_start_predicates": ["/people/person/date_of_birth", "/music/band/formed"],
        "existence_end_predicates": ["/people/person/date_of_death"],
        "vertical_predicate": "/type/vertical",
        "min_candidate_events": 10,
    }
    cfg.update(overrides)
    path = tmp_path / "config.json"
    path.write_text(json.dumps(cfg))
    return path


class TestPipelineCommand:
    def test_store_counts_match_golden(self, built_store):
        index = json.loads((built_store.candidate_store / "index.json").read_text())
        counts = {e: m["count"] for e, m in index["entities"].items()}
        golden = json.loads((GOLDEN / "pipeline_counts.json").read_text())
        assert counts == golden

    def test_empty_kb(self, tmp_path):
        empty = tmp_path / "empty.tsv"
        empty.write_text("")
        cfg = _write_config(tmp_path, triples=str(empty), documents=None)
        runner = CliRunner()
        result = runner.invoke(main, ["pipeline", "--config", str(cfg)])
        assert result.exit_code == 0, result.output
        assert "0 entities" in result.output

    def test_missing_template_file_names_path(self, tmp_path):
        cfg = _write_config(tmp_path, templates=str(tmp_path / "missing.tsv"))
        runner = CliRunner()
        result = runner.invoke(main, ["pipeline", "--config", str(cfg)])
        assert result.exit_code != 0
        assert "missing.tsv" in result.output

    def test_stage_tagged_error(self, tmp_path):
        cfg = _write_config(tmp_path, templates=str(tmp_path / "missing.tsv"))
        with pytest.raises(PipelineError, match=r"\[inputs\]"):
            run_pipeline(load_config(cfg))

    def test_reports_written(self, built_store):
        report = (built_store.reports_dir / "filter_report.jsonl").read_text()
        rows = [json.loads(line) for line in report.splitlines()]
        assert {"path", "N", "C", "ratio", "decision", "filter"} <= set(rows[0])
        dropped = {r["path"] for r in rows if r["decision"] == "drop"}
        assert "/people/person/nationality./location/country/date_founded" in dropped
        assert "/people/person/parent./people/person/date_of_birth" in dropped
        coverage = (built_store.reports_dir / "coverage.csv").read_text().splitlines()
        assert coverage[0] == "X,count_simple,count_all"


class TestCliTimeline:
    def _invoke(self, built_store, *args):
        runner = CliRunner()
        return runner.invoke(
            main, ["timeline", "--config", str(built_store.base_dir / "config.json"), *args]
        )

    def test_golden_timeline(self, built_store):
        result = self._invoke(built_store, "--entity", "/m/act_000", "--variant", "Full")
        assert result.exit_code == 0, result.output
        got = json.loads(result.output)
        golden = json.loads((GOLDEN / "timeline_act000_full.json").read_text())
        assert got == golden

    def test_unknown_entity(self, built_store):
        result = self._invoke(built_store, "--entity", "/m/never")
        assert result.exit_code != 0
        assert "entity not found" in result.output

    def test_base_and_full_differ_but_stay_independent(self, built_store, built_engine):
        full = json.loads(self._invoke(built_store, "--entity", "/m/act_000", "--variant", "Full").output)
        base = json.loads(self._invoke(built_store, "--entity", "/m/act_000", "--variant", "Base").output)
        assert full["events"] != base["events"]
        for payload in (full, base):
            from chronoline.kb_graph import Timestamp

            days = [Timestamp.from_iso(e["timestamp"]).days for e in payload["events"]]
            t_w = payload["spec"]["t_w"]
            assert is_independent(days, t_w, payload["spec"]["n"])

    def test_span_flags_echoed(self, built_store):
        result = self._invoke(
            built_store, "--entity", "/m/act_000", "--start", "1990-01-01", "--end", "2000-01-01"
        )
        payload = json.loads(result.output)
        assert payload["span"] == {"start": "1990-01-01", "end": "2000-01-01"}


class TestCoverageCommand:
    def test_csv_output(self, built_store):
        runner = CliRunner()
        result = runner.invoke(
            main, ["coverage", "--config", str(built_store.base_dir / "config.json")]
        )
        assert result.exit_code == 0
        lines = result.output.strip().splitlines()
        assert lines[0] == "X,count_simple,count_all"
        rows = [tuple(int(v) for v in line.split(",")) for line in lines[1:]]
        for (x1, s1, a1), (x2, s2, a2) in zip(rows, rows[1:]):
            assert s1 >= s2 and a1 >= a2
        for _, s, a in rows:
            assert a >= s


class TestHttpService:
    def test_healthz(self, client):
        assert client.get("/healthz").status_code == 200

    def test_timeline_schema_valid(self, client):
        response = client.get("/api/timeline", params={"entity": "/m/act_000"})
        assert response.status_code == 200
        TimelineResponse.model_validate(response.json())

    def test_unknown_entity_404(self, client):
        response = client.get("/api/timeline", params={"entity": "/m/never"})
        assert response.status_code == 404
        body = response.json()
        assert body["code"] == 404 and "error" in body

    def test_zoom_echoes_requested_span(self, client):
        response = client.get(
            "/api/timeline",
            params={"entity": "/m/act_000", "start": "1990-01-01", "end": "2000-01-01"},
        )
        assert response.json()["span"] == {"start": "1990-01-01", "end": "2000-01-01"}

    def test_malformed_params_400_names_field(self, client):
        response = client.get(
            "/api/timeline", params={"entity": "/m/act_000", "width": "wide"}
        )
        assert response.status_code == 400
        assert "width" in response.json()["error"]

    def test_bad_date_400(self, client):
        response = client.get(
            "/api/timeline",
            params={"entity": "/m/act_000", "start": "199x", "end": "2000-01-01"},
        )
        assert response.status_code == 400

    def test_reversed_span_400(self, client):
        response = client.get(
            "/api/timeline",
            params={"entity": "/m/act_000", "start": "2005-01-01", "end": "2000-01-01"},
        )
        assert response.status_code == 400

    def test_entity_info(self, client):
        response = client.get("/api/entity//m/act_000")
        assert response.status_code == 200
        body = response.json()
        assert set(body) == {"name", "existence", "candidate_count"}
        assert client.get("/api/entity//m/never").status_code == 404

    def test_search_prefix(self, client, built_engine):
        some_name = built_engine.meta["/m/act_000"].name
        response = client.get("/api/search", params={"q": some_name[:4]})
        assert response.status_code == 200
        hits = response.json()
        assert any(h["id"] == "/m/act_000" for h in hits)
        for h in hits:
            assert h["name"].lower().startswith(some_name[:4].lower())

    def test_cors_header_present(self, client):
        response = client.get(
            "/healthz", headers={"Origin": "http://localhost:5173"}
        )
        assert response.headers.get("access-control-allow-origin") == "*"

    def test_concurrent_identical_requests_identical_bodies(self, client):
        results = []

        def hit():
            results.append(
                client.get("/api/timeline", params={"entity": "/m/act_003"}).text
            )

        threads = [threading.Thread(target=hit) for _ in range(8)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert len(set(results)) == 1

    def test_cli_and_api_event_lists_identical(self, client, built_store):
        runner = CliRunner()
        cli_out = runner.invoke(
            main,
            [
                "timeline",
                "--config",
                str(built_store.base_dir / "config.json"),
                "--entity",
                "/m/act_001",
                "--variant",
                "Full",
            ],
        )
        api_out = client.get(
            "/api/timeline", params={"entity": "/m/act_001", "variant": "Full"}
        )
        cli_events = json.loads(cli_out.output)["events"]
        api_events = api_out.json()["events"]
        assert cli_events == api_events


class TestAblateCommand:
    def test_full_vs_fullcd_distinct_paths(self, built_engine):
        entities = sorted(e for e, m in built_engine.meta.items() if m.rich)[:10]
        report = built_engine.ablate(entities, "Full", "Full-CD")
        total_a = sum(r["diff"]["distinct_entity_paths"]["a"] for r in report["reports"])
        total_b = sum(r["diff"]["distinct_entity_paths"]["b"] for r in report["reports"])
        assert total_a >= total_b

    def test_identical_variants_zero_diff(self, built_engine):
        report = built_engine.ablate(["/m/act_000"], "Full", "Full")
        diff = report["reports"][0]["diff"]
        assert diff["event_count"]["a"] == diff["event_count"]["b"]
        assert diff["shared_events"] == diff["event_count"]["a"]

    def test_full_vs_base_covers_all_entities(self, built_store):
        runner = CliRunner()
        result = runner.invoke(
            main,
            [
                "ablate",
                "--config",
                str(built_store.base_dir / "config.json"),
                "--entity", "/m/act_000",
                "--entity", "/m/mus_000",
                "--variant", "Full",
                "--variant", "Base",
            ],
        )
        assert result.exit_code == 0, result.output
        report = json.loads(result.output)
        assert [r["entity"] for r in report["reports"]] == ["/m/act_000", "/m/mus_000"]
        for r in report["reports"]:
            assert set(r["diff"]) >= {
                "shared_events",
                "distinct_entities",
                "distinct_entity_paths",
                "temporal_spread_days",
            }

    def test_variant_pair_required(self, built_store):
        runner = CliRunner()
        result = runner.invoke(
            main,
            [
                "ablate",
                "--config", str(built_store.base_dir / "config.json"),
                "--entity", "/m/act_000",
                "--variant", "Full",
            ],
        )
        assert result.exit_code != 0


class TestEngineWarnings:
    def test_below_minimum_entity_warns_but_serves(self, built_engine, caplog):
        poor = sorted(e for e, m in built_engine.meta.items() if not m.rich)
        assert poor, "fixture KB should include sparse entities"
        with caplog.at_level("WARNING"):
            timeline = built_engine.timeline(poor[0])
        assert "best-effort" in caplog.text
        assert timeline.subject == poor[0]


class TestStoreFormat:
    def test_one_event_per_line_with_all_fields(self, built_store):
        files = sorted(built_store.candidate_store.glob("*.jsonl"))
        assert files
        line = next(
            line for f in files for line in f.read_text().splitlines() if line.strip()
        )
        record = json.loads(line)
        assert set(record) == {
            "subject", "related_entity", "timestamp", "path_to_re", "path_to_ts", "kind",
        }

    def test_cooc_records_carry_counts_and_domains(self, built_store):
        lines = built_store.cooc_store.read_text().splitlines()
        header = json.loads(lines[0])
        assert header["kind"] == "totals" and header["ee"] > 0
        record = json.loads(lines[1])
        assert {"kind", "a", "b", "count", "domains", "npmi"} <= set(record)
        assert record["domains"] >= 5 and record["npmi"] > 0


class TestPipelineDeterminism:
    def test_two_builds_produce_identical_bytes(self, tmp_path):
        digests = []
        for run in ("a", "b"):
            out = tmp_path / run
            out.mkdir()
            cfg = _write_config(
                out,
                cooc_store=str(out / "cooc.jsonl"),
                candidate_store=str(out / "store"),
                reports_dir=str(out / "reports"),
            )
            run_pipeline(load_config(cfg))
            blob = b""
            for path in sorted(out.rglob("*")):
                if path.is_file() and path.name != "config.json":
                    blob += path.name.encode() + path.read_bytes()
            digests.append(blob)
        assert digests[0] == digests[1]


class TestPartialSpan:
    def test_only_start_given_fills_end_from_default(self, built_engine):
        default = built_engine.timeline("/m/act_000")
        half = built_engine.timeline("/m/act_000", start="1990-01-01")
        assert half.span.start.iso == "1990-01-01"
        assert half.span.end == default.span.end


class TestEnvOverrides:
    def test_config_scalar_override(self, built_store, monkeypatch):
        monkeypatch.setenv("CHRONO_MIN_CANDIDATE_EVENTS", "999")
        config = load_config(built_store.base_dir / "config.json")
        assert config.min_candidate_events == 999

    def test_cli_flag_from_environment(self, built_store, monkeypatch):
        monkeypatch.setenv("CHRONO_TIMELINE_ENTITY", "/m/act_000")
        runner = CliRunner()
        result = runner.invoke(
            main,
            ["timeline", "--config", str(built_store.base_dir / "config.json")],
            auto_envvar_prefix="CHRONO",
        )
        assert result.exit_code == 0, result.output
        assert json.loads(result.output)["subject"] == "/m/act_000"
