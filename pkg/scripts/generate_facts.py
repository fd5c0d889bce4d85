#!/usr/bin/env python3
"""Write a synthetic fact directory at production-export scale.

Usage: python scripts/generate_facts.py OUTDIR [--seed N]
"""

from __future__ import annotations

import argparse

from tracelens.factbase import write_facts
from tracelens.synthetic import generate, pick_endpoints


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("outdir")
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args()

    fb = generate(seed=args.seed)
    write_facts(fb, args.outdir)
    ep = pick_endpoints(fb)
    print(
        f"wrote {len(fb.nodes)} nodes, {len(fb.edges)} edges, "
        f"{len(fb.sources)} sources, {len(fb.sinks)} sinks, {len(fb.apis)} apis "
        f"to {args.outdir}"
    )
    print(f"flow pair: source {ep.flow_source} -> sink {ep.flow_sink}")
    print(f"missing-flow pair: source {ep.missing_source} -> sink {ep.missing_sink}")
    print(f"sanitizer candidate: api {ep.sanitizer_api}")


if __name__ == "__main__":
    main()
