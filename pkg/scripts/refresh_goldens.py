#!/usr/bin/env python3
"""Rebuild the golden files under tests/golden/ from the bundled KB.

Run only when an intentional behavior change invalidates the committed
goldens; review the diff before committing.
"""

from __future__ import annotations

import json
from pathlib import Path

from chronoline.config import load_config
from chronoline.engine import TimelineEngine
from chronoline.pipeline import run_pipeline

ROOT = Path(__file__).resolve().parents[1]
GOLDEN = ROOT / "tests" / "golden"


def main() -> None:
    GOLDEN.mkdir(parents=True, exist_ok=True)
    config = load_config(ROOT / "data" / "config.json")
    run_pipeline(config)

    index = json.loads((config.candidate_store / "index.json").read_text())
    counts = {e: m["count"] for e, m in sorted(index["entities"].items())}
    (GOLDEN / "pipeline_counts.json").write_text(
        json.dumps(counts, indent=1, sort_keys=True) + "\n"
    )

    engine = TimelineEngine.load(config)
    timeline = engine.timeline("/m/act_000", variant="Full")
    (GOLDEN / "timeline_act000_full.json").write_text(
        json.dumps(timeline.to_json_dict(), indent=2) + "\n"
    )

    timeline_zoom = engine.timeline(
        "/m/act_000", start="1985-01-01", end="2005-01-01", variant="Full"
    )
    (GOLDEN / "timeline_act000_zoom.json").write_text(
        json.dumps(timeline_zoom.to_json_dict(), indent=2) + "\n"
    )
    print(f"golden files written to {GOLDEN}")


if __name__ == "__main__":
    main()
