#!/usr/bin/env python3
"""Time every query template against a fact directory (or the built-in
synthetic universe) and print one line per template.

Usage:
    python scripts/bench_queries.py              # synthetic universe
    python scripts/bench_queries.py --facts DIR  # a real export
    python scripts/bench_queries.py --repeat 5
"""

from __future__ import annotations

import argparse
import time

from tracelens import queries
from tracelens.factbase import load_facts
from tracelens.synthetic import generate, pick_endpoints


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--facts", help="fact directory (default: synthetic universe)")
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    if args.facts:
        fb = load_facts(args.facts)
    else:
        fb = generate(seed=args.seed)
    print(
        f"universe: {len(fb.nodes)} nodes, {len(fb.edges)} edges, "
        f"{len(fb.sources)} sources, {len(fb.sinks)} sinks, {len(fb.apis)} apis"
    )

    ep = pick_endpoints(fb)
    requests = {
        "whyflow": {"source": ep.flow_source, "sink": ep.flow_sink},
        "whynot": {"source": ep.missing_source, "sink": ep.missing_sink},
        "affected-sinks": {"source": ep.flow_source, "api": ep.sanitizer_api},
        "divergent-sinks": {
            "source": ep.flow_source, "sinkA": ep.flow_sink, "sinkB": ep.second_sink,
        },
        "divergent-sources": {
            "sourceA": ep.merge_source_a, "sourceB": ep.merge_source_b,
            "sink": ep.merge_sink,
        },
        "global-impact": {"source": ep.flow_source, "sink": ep.flow_sink},
        "branch-points": {},
        "count-paths": {"source": ep.flow_source, "sink": ep.flow_sink},
        "count-apis": {"source": ep.flow_source, "sink": ep.flow_sink},
    }

    print(f"{'template':<18} {'best':>9} {'worst':>9}  params")
    for qtype, params in requests.items():
        samples = []
        for _ in range(args.repeat):
            started = time.perf_counter()
            queries.run_query(fb, qtype, params)
            samples.append(time.perf_counter() - started)
        print(
            f"{qtype:<18} {min(samples) * 1000:>7.1f}ms {max(samples) * 1000:>7.1f}ms  {params}"
        )


if __name__ == "__main__":
    main()
