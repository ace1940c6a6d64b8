#!/usr/bin/env python3
"""Generate the synthetic interaction replay log in fixtures/replay/events.jsonl.

The log is built so that compute_metrics reproduces these per-study figures
exactly (every rate is a ratio of integers chosen below):

    sessions per user      700 / 250  = 2.8
    mean query length     1442 / 700  = 2.06   (42 three-token + 658 two-token queries)
    article tab views     3052 / 700  = 4.36   (sessions 0..251 view 5 times, the rest 4)
    connections views     2247 / 700  = 3.21   (every session 3, first 147 sessions once more)
    company list views    1848 / 700  = 2.64   (every session 2, first 448 once more)
    officer list views     553 / 700  = 0.79   (first 553 sessions once)
    clickthroughs          448 / 700  = 0.64   (first 448 sessions once)

Users u000..u199 own three sessions each and u200..u249 own two, giving 700
sessions over 250 users. Web tab views (one per session) and expand events are
included for realism; they do not enter the figures above.

Event order inside a session is query, tab views, clickthrough, expand; sessions
are interleaved with a seeded shuffle so the file is not trivially sorted. The
output is deterministic for a given --seed.
"""

import argparse
import datetime as dt
import json
import random
from pathlib import Path

TWO_TOKEN = [
    "acme corp", "mars lander", "right repair", "historic scotland", "trade deal",
    "aircraft maker", "beta industries", "jane doe", "planning appeal", "council contract",
]
THREE_TOKEN = ["gamma aerospace ltd", "health safety executive", "twitter misinformation flagging"]
ENTITIES = ["ORG:acme corp", "PER:jane doe", "LOC:glasgow", "ORG:beta industries"]
DOCS = ["art-001", "art-002", "co-001", "web-001", "off-001"]


def build_sessions():
    sessions = []
    index = 0
    for u in range(250):
        for _ in range(3 if u < 200 else 2):
            sessions.append({"id": f"r-{index:04d}", "user": f"u{u:03d}", "n": index})
            index += 1
    assert len(sessions) == 700
    return sessions


def session_events(s, rng):
    n = s["n"]
    query = THREE_TOKEN[n % len(THREE_TOKEN)] if n < 42 else TWO_TOKEN[n % len(TWO_TOKEN)]
    events = [("query", {"text": query})]
    tabs = (["articles"] * (5 if n < 252 else 4)
            + ["connections"] * (4 if n < 147 else 3)
            + ["companies"] * (3 if n < 448 else 2)
            + ["officers"] * (1 if n < 553 else 0)
            + ["web"])
    rng.shuffle(tabs)
    events += [("tab_view", {"tab": t}) for t in tabs]
    if n < 448:
        events.append(("clickthrough", {"doc_id": DOCS[n % len(DOCS)]}))
    if n % 3 == 0:
        events.append(("expand", {"entity": ENTITIES[n % len(ENTITIES)]}))
    return events


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", default=Path(__file__).resolve().parent.parent / "fixtures/replay/events.jsonl")
    parser.add_argument("--seed", type=int, default=20210604)
    args = parser.parse_args()

    rng = random.Random(args.seed)
    queues = []
    for s in build_sessions():
        queues.append((s, session_events(s, rng)))

    start = dt.datetime(2021, 3, 1, 9, 0, 0, tzinfo=dt.timezone.utc)
    clock = 0
    lines = []
    # Round-robin over a shuffled set of live sessions keeps each session's own order intact.
    live = [[s, evs, 0] for s, evs in queues]
    while live:
        slot = rng.randrange(len(live))
        s, evs, pos = live[slot]
        kind, payload = evs[pos]
        ts = (start + dt.timedelta(seconds=clock)).strftime("%Y-%m-%dT%H:%M:%SZ")
        clock += 7
        lines.append(json.dumps({"session": s["id"], "user": s["user"], "kind": kind, "ts": ts,
                                 "payload": payload}, separators=(",", ":")))
        live[slot][2] += 1
        if live[slot][2] == len(evs):
            live.pop(slot)

    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"wrote {len(lines)} events to {out}")


if __name__ == "__main__":
    main()
