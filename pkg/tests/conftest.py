"""Shared fixtures: tiny graphs, random instances, and the built store."""

from __future__ import annotations

import io
import random

import pytest

from chronoline.config import load_config
from chronoline.engine import TimelineEngine
from chronoline.event_gen import KIND_SIMPLE_2HOP, Event
from chronoline.kb_graph import Timestamp, collapse_cvt_nodes, load_triples
from chronoline.pipeline import run_pipeline
from chronoline.relevance import CooccurrenceStore, ImportanceStore, RelevanceModel

DATA_CONFIG = "data/config.json"


def graph_from_text(
    text: str,
    cvt_predicates=(),
    existence_predicates=None,
    collapse: bool = True,
):
    g, errors = load_triples(io.StringIO(text), cvt_predicates, existence_predicates)
    assert not errors, errors
    return collapse_cvt_nodes(g) if collapse else g


@pytest.fixture(scope="session")
def film_graph():
    """Two actors sharing a film through performance CVTs, plus extras."""
    return graph_from_text(
        """\
/m/a1\t/act/in\t/cvt/p1
/cvt/p1\t/perf/film\t/m/film1
/cvt/p1\t/perf/char\t/m/char1
/m/a2\t/act/in\t/cvt/p2
/cvt/p2\t/perf/film\t/m/film1
/cvt/p2\t/perf/char\t/m/char2
/m/a3\t/act/in\t/cvt/p3
/cvt/p3\t/perf/film\t/m/film1
/m/film1\t/film/released\t@2012-04-11
/m/a1\t/born\t@1965-04-04
/m/a2\t/born\t@1948-12-21
""",
        cvt_predicates={"/act/in"},
        existence_predicates={"start": "/born"},
    )


def make_event(
    subject: str,
    re: str,
    days: int,
    path: str = "/p/q",
    leaf: str = "/p/when",
    kind: str = KIND_SIMPLE_2HOP,
) -> Event:
    return Event(
        subject=subject,
        related_entity=re,
        timestamp=Timestamp(days),
        path_to_re=(path,),
        path_to_ts=(path, leaf),
        kind=kind,
    )


class RandomInstance:
    """A synthetic selection problem: events plus scoring stores."""

    def __init__(self, subject, events, model, cooc, imp, t_w, n):
        self.subject = subject
        self.events = events
        self.model = model
        self.cooc = cooc
        self.imp = imp
        self.t_w = t_w
        self.n = n


def random_instance(
    rng: random.Random,
    n_events: int,
    n: int,
    *,
    distinct_entities: bool = True,
    variant=None,
    day_range: int = 120,
    t_w: int | None = None,
) -> RandomInstance:
    subject = "/m/subject"
    paths = [f"/path/{i}" for i in range(max(2, n_events // 3))]
    leaves = ["/when/a", "/when/b"]
    events = []
    for i in range(n_events):
        re = f"/m/re{i}" if distinct_entities else f"/m/re{rng.randrange(max(2, n_events // 2))}"
        path = rng.choice(paths)
        events.append(
            Event(
                subject=subject,
                related_entity=re,
                timestamp=Timestamp(rng.randrange(day_range)),
                path_to_re=(path,),
                path_to_ts=(path, rng.choice(leaves)),
                kind=KIND_SIMPLE_2HOP,
            )
        )
    ee = {}
    ed = {}
    imp_scores = {}
    for e in events:
        key = (subject, e.related_entity) if subject <= e.related_entity else (e.related_entity, subject)
        ee.setdefault(key, round(rng.random(), 6))
        ed.setdefault((subject, e.timestamp.days), round(rng.random(), 6))
        imp_scores.setdefault(e.related_entity, round(rng.random(), 6))
    cooc = CooccurrenceStore(ee, ed)
    imp = ImportanceStore(imp_scores)
    path_avg_e2e = {p: round(rng.random() * 0.5, 6) for p in paths}
    path_avg_e2d = {
        tp: round(rng.random() * 0.5, 6)
        for tp in {e.time_path for e in events}
    }
    if variant is None:
        model = RelevanceModel(path_avg_e2e=path_avg_e2e, path_avg_e2d=path_avg_e2d)
    else:
        model = variant.model(path_avg_e2e, path_avg_e2d)
    window = t_w if t_w is not None else rng.choice([7, 13, 20, 31])
    return RandomInstance(subject, events, model, cooc, imp, window, n)


@pytest.fixture(scope="session")
def built_store(tmp_path_factory):
    """Pipeline output over the bundled KB, built once per test session."""
    import json
    from pathlib import Path

    out = tmp_path_factory.mktemp("store")
    data_dir = Path(__file__).resolve().parent.parent / "data"
    src = json.loads((data_dir / "config.json").read_text())
    for key in ("triples", "templates", "importance", "names", "documents"):
        src[key] = str(data_dir / src[key])
    src["cooc_store"] = str(out / "cooc.jsonl")
    src["candidate_store"] = str(out / "store")
    src["reports_dir"] = str(out / "reports")
    config_path = out / "config.json"
    config_path.write_text(json.dumps(src))
    config = load_config(config_path)
    run_pipeline(config)
    return config


@pytest.fixture(scope="session")
def built_engine(built_store):
    return TimelineEngine.load(built_store)
