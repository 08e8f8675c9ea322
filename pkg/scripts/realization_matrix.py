"""Realize a list of groups over a list of triples and tabulate the results.

    python scripts/realization_matrix.py --groups trivial C2 S3 Q8 --triples 4,6,12 2,4,9 \
        --out runs/
"""

import argparse
import time
from dataclasses import dataclass, field
from pathlib import Path

from dessinaut.catalog import load_group
from dessinaut.pipeline import PipelineError, RealizeOptions, emit, realize
from dessinaut.triangle import Triple


@dataclass
class MatrixConfig:
    groups: list[str] = field(default_factory=lambda: ["trivial", "C2", "C3", "C5", "S3",
                                                       "D4", "Q8"])
    triples: list[Triple] = field(default_factory=lambda: [Triple(4, 6, 12), Triple(2, 4, 9)])
    seed: int = 0
    out: Path | None = None


def run(cfg: MatrixConfig) -> list[dict]:
    rows = []
    for name in cfg.groups:
        a = load_group(name)
        for t in cfg.triples:
            s = time.perf_counter()
            try:
                r = realize(a, RealizeOptions(triple=t, seed=cfg.seed))
            except PipelineError as exc:
                rows.append({"group": name, "triple": t, "error": str(exc)})
                continue
            secs = time.perf_counter() - s
            c = r.certificate
            if cfg.out is not None:
                emit(r, cfg.out / ("%s_%d_%d_%d" % (name, *t)), timings=True)
            rows.append({
                "group": name, "triple": t, "q": c["q"], "g": c["base"]["genus_formula"],
                "darts": c["cover"]["darts"], "genus": c["cover"]["genus_euler"],
                "aut": c["cover"]["aut_order"], "order": a.order,
                "verdict": c["verdict"], "seconds": secs,
            })
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--groups", nargs="+")
    ap.add_argument("--triples", nargs="+")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", type=Path)
    args = ap.parse_args()
    cfg = MatrixConfig(seed=args.seed, out=args.out)
    if args.groups:
        cfg.groups = args.groups
    if args.triples:
        cfg.triples = [Triple.parse(t) for t in args.triples]
    print("%-8s %-10s %5s %3s %6s %6s %4s %-5s %7s"
          % ("group", "triple", "q", "g", "darts", "genus", "aut", "ok", "sec"))
    for r in run(cfg):
        if "error" in r:
            print("%-8s %-10s error: %s" % (r["group"], r["triple"], r["error"]))
            continue
        print("%-8s %-10s %5d %3d %6d %6d %4d %-5s %7.2f"
              % (r["group"], r["triple"], r["q"], r["g"], r["darts"], r["genus"], r["aut"],
                 r["verdict"], r["seconds"]))


if __name__ == "__main__":
    main()
