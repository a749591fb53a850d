#!/usr/bin/env python3
"""Generate the bundled synthetic knowledge base under data/.

Deterministic (fixed seed): four person verticals (actors, musicians,
politicians, athletes) with films, bands, albums, elections, offices, teams,
games and award shows, reified (CVT) facts for performances, memberships,
marriages and offices, plus the two pathological path types the filters
exist for: a country-founding date shared by 60+ subjects and parent birth
dates that precede every subject's own birth.

Writes: triples.tsv, names.tsv, importance.tsv, templates.tsv, docs.jsonl,
config.json.
"""

from __future__ import annotations

import json
import random
from pathlib import Path

OUT_DIR = Path(__file__).resolve().parents[1] / "data"
SEED = 20240601

FIRST = [
    "Alden", "Bria", "Cole", "Dara", "Elio", "Fern", "Gwen", "Hale", "Iris",
    "Joss", "Kael", "Lena", "Miro", "Nola", "Orin", "Pia", "Quill", "Rhea",
    "Soren", "Tess", "Ugo", "Vada", "Wren", "Xavi", "Yara", "Zeno",
]
LAST = [
    "Ashford", "Birch", "Calloway", "Deering", "Ellison", "Fairbank", "Grove",
    "Hollis", "Ingram", "Jarvis", "Kessler", "Lockwood", "Marsh", "North",
    "Overton", "Pryor", "Quimby", "Rowan", "Slate", "Thorne", "Underhill",
    "Vance", "Whitfield", "Yates",
]
FILM_WORDS = [
    "Crimson", "Hollow", "Silent", "Iron", "Golden", "Broken", "Distant",
    "Electric", "Midnight", "Paper", "Scarlet", "Winter", "Atomic", "Velvet",
]
FILM_NOUNS = [
    "Harbor", "Signal", "Empire", "Garden", "Protocol", "Horizon", "Letters",
    "Crossing", "Engine", "Reckoning", "Parallel", "Voyage", "Frontier", "Cipher",
]
BAND_NAMES = [
    "The Lantern Choir", "Static Meadow", "Glass Parade", "Northern Relay",
    "Echo Cartel", "Velvet Dynamo", "Orchid Assembly", "Tidal Union",
]
ALBUM_WORDS = [
    "Embers", "Orbit", "Monsoon", "Aurora", "Gravity", "Harvest", "Mirrors",
    "Thunder", "Lighthouse", "Meridian", "Cascade", "Polaris", "Satellites", "Riverbed",
]
DOMAINS = [
    "news-a.example", "news-b.example", "mag-c.example", "wiki-d.example",
    "blog-e.example", "tv-f.example", "radio-g.example", "zine-h.example",
    "daily-i.example", "portal-j.example",
]

P = {
    "vertical": "/type/vertical",
    "name_stub": "/type/object/name",
    "birth": "/people/person/date_of_birth",
    "death": "/people/person/date_of_death",
    "parent": "/people/person/parent",
    "nationality": "/people/person/nationality",
    "founded": "/location/country/date_founded",
    "marriage": "/people/person/marriage",
    "spouse": "/people/marriage/spouse",
    "wedding": "/people/marriage/wedding_date",
    "perf": "/film/actor/film",
    "perf_film": "/film/performance/film",
    "perf_char": "/film/performance/character",
    "release": "/film/film/release_date",
    "dvd": "/film/film/dvd_release_date",
    "won_award": "/award/winner/ceremony",
    "award_date": "/award/ceremony/date",
    "member": "/music/artist/member_of",
    "mem_band": "/music/membership/band",
    "mem_role": "/music/membership/role",
    "mem_from": "/music/membership/from",
    "formed": "/music/band/formed",
    "album": "/music/artist/album",
    "album_release": "/music/album/release_date",
    "election": "/gov/politician/election",
    "election_date": "/gov/election/date",
    "office": "/gov/politician/office",
    "office_title": "/gov/office_position/title",
    "office_from": "/gov/office_position/from",
    "team_cvt": "/sports/athlete/team",
    "team": "/sports/membership/team",
    "team_from": "/sports/membership/from",
    "games": "/sports/athlete/competed_in",
    "games_date": "/sports/games/date",
}

PREDICATE_NAMES = {
    P["birth"]: "was born",
    P["death"]: "died",
    P["parent"]: "parent",
    P["nationality"]: "nationality",
    P["founded"]: "founded",
    P["marriage"]: "marriage",
    P["spouse"]: "spouse",
    P["wedding"]: "wedding date",
    P["perf"]: "acted in",
    P["perf_film"]: "film",
    P["perf_char"]: "character",
    P["release"]: "release date",
    P["dvd"]: "DVD release",
    P["won_award"]: "won at",
    P["award_date"]: "ceremony date",
    P["member"]: "member of",
    P["mem_band"]: "band",
    P["mem_role"]: "role",
    P["mem_from"]: "joined",
    P["formed"]: "formed",
    P["album"]: "released album",
    P["album_release"]: "album release date",
    P["election"]: "ran in",
    P["election_date"]: "election date",
    P["office"]: "held office",
    P["office_title"]: "office",
    P["office_from"]: "taking office",
    P["team_cvt"]: "plays for",
    P["team"]: "team",
    P["team_from"]: "signing date",
    P["games"]: "competed in",
    P["games_date"]: "games date",
}


def main() -> None:
    rng = random.Random(SEED)
    OUT_DIR.mkdir(parents=True, exist_ok=True)

    triples: list[tuple[str, str, str]] = []
    names: dict[str, str] = {}
    verticals: dict[str, str] = {}
    importance: dict[str, float] = {}
    person_birth: dict[str, tuple[int, int, int]] = {}
    cvt_counter = [0]

    def add(s: str, p: str, o: str) -> None:
        triples.append((s, p, o))

    def date(y: int, m: int, d: int) -> str:
        return f"@{y:04d}-{m:02d}-{d:02d}"

    def new_cvt() -> str:
        cvt_counter[0] += 1
        return f"/cvt/{cvt_counter[0]:04d}"

    def person(idx: int, prefix: str, vertical: str) -> str:
        eid = f"/m/{prefix}_{idx:03d}"
        salt = sum(prefix.encode())
        names[eid] = f"{FIRST[(idx * 7 + salt) % len(FIRST)]} {LAST[(idx * 5 + salt * 3) % len(LAST)]}"
        verticals[eid] = vertical
        y = rng.randint(1935, 1985)
        m, d = rng.randint(1, 12), rng.randint(1, 28)
        person_birth[eid] = (y, m, d)
        add(eid, P["birth"], date(y, m, d))
        if rng.random() < 0.18 and y + 45 <= 2014:
            dy = rng.randint(y + 45, 2014)
            add(eid, P["death"], date(dy, rng.randint(1, 12), rng.randint(1, 28)))
        add(eid, P["vertical"], vertical)
        return eid

    actors = [person(i, "act", "actor") for i in range(44)]
    musicians = [person(i, "mus", "musician") for i in range(24)]
    politicians = [person(i, "pol", "politician") for i in range(18)]
    athletes = [person(i, "ath", "athlete") for i in range(18)]
    people = actors + musicians + politicians + athletes

    # Countries; 60 people share the same nationality, whose founding date is
    # centuries before any of them existed.
    usa = "/m/country_usa"
    names[usa] = "United Vales"
    add(usa, P["founded"], "@1776-07-04")
    importance[usa] = 0.95
    for p in people[:60]:
        add(p, P["nationality"], usa)

    # Parents: every parent's birth precedes every subject's existence
    # (subjects are born 1935 at the earliest).
    parents = []
    for i in range(14):
        eid = f"/m/parent_{i:03d}"
        names[eid] = f"{FIRST[(i * 11 + 5) % len(FIRST)]} {LAST[(i * 3 + 7) % len(LAST)]} Sr."
        add(eid, P["birth"], date(1900 + i, rng.randint(1, 12), rng.randint(1, 28)))
        parents.append(eid)
    for k, subject in enumerate(people[::4][:28]):
        add(subject, P["parent"], parents[k % len(parents)])

    # Films with release (and often DVD) dates; performances via CVTs.
    films = []
    for i in range(26):
        fid = f"/m/film_{i:03d}"
        names[fid] = f"{FILM_WORDS[i % len(FILM_WORDS)]} {FILM_NOUNS[(i * 3) % len(FILM_NOUNS)]}"
        y = rng.randint(1975, 2014)
        m, d = rng.randint(1, 12), rng.randint(1, 28)
        add(fid, P["release"], date(y, m, d))
        if i % 2 == 0:
            add(fid, P["dvd"], date(y if m <= 6 else y + 1, (m + 5) % 12 + 1, rng.randint(1, 28)))
        films.append(fid)
    characters = []
    for i in range(20):
        cid = f"/m/char_{i:03d}"
        names[cid] = f"{FIRST[(i * 13 + 2) % len(FIRST)]} the {FILM_NOUNS[(i * 7) % len(FILM_NOUNS)]}"
        characters.append(cid)
    film_cast: dict[str, list[str]] = {f: [] for f in films}
    for actor in actors:
        for fid in rng.sample(films, rng.randint(2, 5)):
            cvt = new_cvt()
            add(actor, P["perf"], cvt)
            add(cvt, P["perf_film"], fid)
            add(cvt, P["perf_char"], rng.choice(characters))
            film_cast[fid].append(actor)

    # Award shows: a handful of winners each, well under the heavy-pair bar.
    for i in range(6):
        aid = f"/m/awards_{i:03d}"
        names[aid] = f"Meridian Prize {1990 + 4 * i}"
        add(aid, P["award_date"], date(1990 + 4 * i, 2, rng.randint(10, 25)))
        for winner in rng.sample(actors + musicians, 6):
            add(winner, P["won_award"], aid)

    # Bands: founding members share the formation date through their
    # membership CVTs; later members join on their own dates.
    bands = []
    for i, bname in enumerate(BAND_NAMES):
        bid = f"/m/band_{i:03d}"
        names[bid] = bname
        y = rng.randint(1965, 2000)
        m, d = rng.randint(1, 12), rng.randint(1, 28)
        add(bid, P["formed"], date(y, m, d))
        bands.append((bid, (y, m, d)))
    roles = []
    for i, role in enumerate(["Singer", "Guitarist", "Drummer", "Bassist"]):
        rid = f"/m/role_{i:03d}"
        names[rid] = role
        roles.append(rid)
    member_count = {b: 0 for b, _ in bands}
    for k, musician in enumerate(musicians):
        bid, (fy, fm, fd) = bands[k % len(bands)]
        cvt = new_cvt()
        add(musician, P["member"], cvt)
        add(cvt, P["mem_band"], bid)
        add(cvt, P["mem_role"], roles[member_count[bid] % len(roles)])
        if member_count[bid] < 2:
            add(cvt, P["mem_from"], date(fy, fm, fd))
        else:
            add(cvt, P["mem_from"], date(fy + rng.randint(1, 8), rng.randint(1, 12), rng.randint(1, 28)))
        member_count[bid] += 1

    # Albums, some co-credited.
    for i in range(24):
        alid = f"/m/album_{i:03d}"
        names[alid] = f"{ALBUM_WORDS[i % len(ALBUM_WORDS)]} {ALBUM_WORDS[(i * 5 + 3) % len(ALBUM_WORDS)]}"
        y = rng.randint(1980, 2014)
        add(alid, P["album_release"], date(y, rng.randint(1, 12), rng.randint(1, 28)))
        owner = musicians[i % len(musicians)]
        add(owner, P["album"], alid)
        if i % 3 == 0:
            other = musicians[(i * 7 + 5) % len(musicians)]
            if other != owner:
                add(other, P["album"], alid)

    # Elections connect rival politicians through a shared date.
    for i in range(9):
        elid = f"/m/election_{i:03d}"
        names[elid] = f"General Election {1982 + 4 * i}"
        add(elid, P["election_date"], date(1982 + 4 * i, 11, rng.randint(1, 8)))
        for pol in rng.sample(politicians, 3):
            add(pol, P["election"], elid)

    # Offices via CVTs (title + start date).
    offices = []
    for i, title in enumerate(["Governor", "Senator", "Mayor", "Minister", "Chancellor"]):
        oid = f"/m/office_{i:03d}"
        names[oid] = title
        offices.append(oid)
    for k, pol in enumerate(politicians):
        if k % 2 == 0:
            cvt = new_cvt()
            add(pol, P["office"], cvt)
            add(cvt, P["office_title"], offices[k % len(offices)])
            by = person_birth[pol][0]
            add(cvt, P["office_from"], date(by + rng.randint(30, 45), 1, rng.randint(2, 28)))

    # Teams (CVT) and shared games for athletes.
    teams = []
    for i in range(6):
        tid = f"/m/team_{i:03d}"
        names[tid] = f"{FILM_WORDS[(i * 5 + 1) % len(FILM_WORDS)]} {LAST[(i * 9 + 4) % len(LAST)]}s"
        teams.append(tid)
    for k, ath in enumerate(athletes):
        cvt = new_cvt()
        add(ath, P["team_cvt"], cvt)
        add(cvt, P["team"], teams[k % len(teams)])
        by = person_birth[ath][0]
        add(cvt, P["team_from"], date(by + rng.randint(18, 24), rng.randint(1, 12), rng.randint(1, 28)))
    for i in range(5):
        gid = f"/m/games_{i:03d}"
        names[gid] = f"Continental Games {1988 + 6 * i}"
        add(gid, P["games_date"], date(1988 + 6 * i, 7, rng.randint(10, 25)))
        for ath in rng.sample(athletes, 8):
            add(ath, P["games"], gid)

    # Marriages: directed CVTs per spouse.
    marriage_pool = rng.sample(actors, 10) + rng.sample(musicians, 6)
    for i in range(0, len(marriage_pool) - 1, 2):
        a, b = marriage_pool[i], marriage_pool[i + 1]
        wy = max(person_birth[a][0], person_birth[b][0]) + rng.randint(20, 35)
        wd = date(wy, rng.randint(1, 12), rng.randint(1, 28))
        for s, t in ((a, b), (b, a)):
            cvt = new_cvt()
            add(s, P["marriage"], cvt)
            add(cvt, P["spouse"], t)
            add(cvt, P["wedding"], wd)

    # Importance: deterministic popularity by position within each group.
    for group, base in ((actors, 0.85), (musicians, 0.8), (politicians, 0.75), (athletes, 0.7)):
        for rank, eid in enumerate(group):
            importance[eid] = round(base - 0.012 * rank, 4)
    for rank, fid in enumerate(films):
        importance[fid] = round(0.65 - 0.015 * rank, 4)
    for rank, (bid, _) in enumerate(bands):
        importance[bid] = round(0.6 - 0.02 * rank, 4)
    for eid in names:
        importance.setdefault(eid, 0.05)

    docs = _make_docs(rng, triples, people, films, bands, person_birth)

    _write_files(triples, names, importance, docs)


def _make_docs(rng, triples, people, films, bands, person_birth):
    """Co-mention documents: strong pairs appear across many domains."""
    by_subject: dict[str, list[tuple[str, str, str]]] = {}
    for s, p, o in triples:
        by_subject.setdefault(s, []).append((s, p, o))

    docs = []

    def emit(domain: str, mentions: list[dict]) -> None:
        docs.append({"domain": domain, "mentions": mentions})

    # Actor-film pairs: importance decays with cast order so stars dominate.
    film_release: dict[str, str] = {}
    for s, p, o in triples:
        if p == P["release"]:
            film_release[s] = o[1:]
    cast_pairs = []
    for s, p, o in triples:
        if p == P["perf_film"]:
            cvt = s
            actor = next((a for a, q, t in triples if q == P["perf"] and t == cvt), None)
            if actor is not None:
                cast_pairs.append((actor, o))
    for k, (actor, film) in enumerate(sorted(set(cast_pairs))):
        strength = 5 + (k * 3) % 4  # 5..8 domains: always retained
        for j in range(strength):
            mentions = [
                {"pos": 0, "kind": "entity", "id": actor},
                {"pos": 40 + (j * 7) % 50, "kind": "entity", "id": film},
            ]
            if film in film_release and j % 2 == 0:
                mentions.append({"pos": 80, "kind": "date", "id": film_release[film]})
            emit(DOMAINS[(k + j) % len(DOMAINS)], mentions)

    # Musician dates: album and band-formation dates co-mentioned widely.
    for s, p, o in triples:
        if p == P["album"]:
            album = o
            release = next((t[1:] for a, q, t in triples if a == album and q == P["album_release"]), None)
            if release is None:
                continue
            stable = sum(album.encode())
            for j in range(6):
                emit(
                    DOMAINS[(stable + j) % len(DOMAINS)],
                    [
                        {"pos": 0, "kind": "entity", "id": s},
                        {"pos": 30, "kind": "entity", "id": album},
                        {"pos": 70, "kind": "date", "id": release},
                    ],
                )

    # Weak pairs: only four domains, never retained.
    weak = rng.sample(people, 12)
    for k in range(0, len(weak) - 1, 2):
        for j in range(4):
            emit(
                DOMAINS[j],
                [
                    {"pos": 0, "kind": "entity", "id": weak[k]},
                    {"pos": 90, "kind": "entity", "id": weak[k + 1]},
                ],
            )

    # Out-of-window noise: same doc, too far apart to count.
    for k in range(30):
        a, b = rng.sample(people, 2)
        emit(
            DOMAINS[k % len(DOMAINS)],
            [
                {"pos": 0, "kind": "entity", "id": a},
                {"pos": 101 + k, "kind": "entity", "id": b},
            ],
        )

    rng.shuffle(docs)
    return docs


def _write_files(triples, names, importance, docs) -> None:
    with open(OUT_DIR / "triples.tsv", "w", encoding="utf-8") as fh:
        fh.write("# synthetic knowledge base (generated by scripts/make_synthetic_kb.py)\n")
        for s, p, o in triples:
            fh.write(f"{s}\t{p}\t{o}\n")

    with open(OUT_DIR / "names.tsv", "w", encoding="utf-8") as fh:
        for eid in sorted(names):
            fh.write(f"{eid}\t{names[eid]}\n")
        for pid in sorted(PREDICATE_NAMES):
            fh.write(f"{pid}\t{PREDICATE_NAMES[pid]}\n")

    with open(OUT_DIR / "importance.tsv", "w", encoding="utf-8") as fh:
        for eid in sorted(importance):
            fh.write(f"{eid}\t{importance[eid]}\n")

    perf_path = f"{P['perf']}.{P['perf_film']}"
    mem_from = f"{P['member']}.{P['mem_from']}"
    band_formed = f"{P['mem_band']}"
    templates = [
        (perf_path, f"{perf_path}.{P['release']}", "{sub} starred in {re}, released on {date}"),
        (perf_path, f"{perf_path}.{P['dvd']}", "{sub} starred in {re}, out on video on {date}"),
        ("self", P["birth"], "{sub} was born on {date}"),
        ("self", P["death"], "{sub} died on {date}"),
        (P["marriage"], f"{P['marriage']}.{P['wedding']}", "{sub} married {re} on {date}"),
        (P["member"], mem_from, "{sub} joined {re} on {date}"),
        (f"{P['member']}.{band_formed}", f"{P['member']}.{band_formed}.{P['formed']}", "{sub}'s band {re} was formed on {date}"),
        (P["album"], f"{P['album']}.{P['album_release']}", "{sub} released the album {re} on {date}"),
        (P["election"], f"{P['election']}.{P['election_date']}", "{sub} ran in {re}, held on {date}"),
        (P["office"], f"{P['office']}.{P['office_from']}", "{sub} took office as {re} on {date}"),
        (P["team_cvt"], f"{P['team_cvt']}.{P['team_from']}", "{sub} signed with {re} on {date}"),
        (P["games"], f"{P['games']}.{P['games_date']}", "{sub} competed in {re} on {date}"),
        (P["won_award"], f"{P['won_award']}.{P['award_date']}", "{sub} won at {re} on {date}"),
    ]
    with open(OUT_DIR / "templates.tsv", "w", encoding="utf-8") as fh:
        for re_path, ts_path, pattern in templates:
            fh.write(f"{re_path}\t{ts_path}\t{pattern}\n")

    with open(OUT_DIR / "docs.jsonl", "w", encoding="utf-8") as fh:
        for doc in docs:
            fh.write(json.dumps(doc) + "\n")

    config = {
        "triples": "triples.tsv",
        "templates": "templates.tsv",
        "importance": "importance.tsv",
        "names": "names.tsv",
        "documents": "docs.jsonl",
        "cooc_store": "../build/cooc.jsonl",
        "candidate_store": "../build/store",
        "reports_dir": "../build/reports",
        "cvt_predicates": [P["perf"], P["member"], P["office"], P["team_cvt"], P["marriage"]],
        "existence_start_predicates": [P["birth"], P["formed"]],
        "existence_end_predicates": [P["death"]],
        "vertical_predicate": P["vertical"],
        "min_candidate_events": 10,
        "filter": {"theta1": 50, "theta2": 0.5, "theta3": 0.5, "drop_pre_existence_instances": True},
        "layout": {"screen_width": 1000, "screen_height": 100, "box_width": 100, "box_height": 50},
        "default_variant": "Full",
    }
    with open(OUT_DIR / "config.json", "w", encoding="utf-8") as fh:
        json.dump(config, fh, indent=2)
        fh.write("\n")

    print(f"entities: {len(names)}  triples: {len(triples)}  docs: {len(docs)}")


if __name__ == "__main__":
    main()
