"""Genus growth of the two variants: the A4 coset action of PSL(2, q) and
the S_p action on cosets of AGL(1, p).

    python scripts/remark_variants.py
"""

import json

from dessinaut.pipeline import remark3_plan, remark4_plan
from dessinaut.triangle import Triple


def main():
    print("A4 cosets")
    for t in [Triple(7, 11, 13), Triple(7, 7, 7), Triple(5, 5, 7)]:
        try:
            r = remark3_plan(t, q_bound=5000)
        except ValueError as exc:
            print("  %s: %s" % (t, exc))
            continue
        keys = ["q", "degree", "genus", "genus_exceeds_cubic_bound", "constructed"]
        if r["constructed"]:
            keys += ["semiregular", "genus_euler"]
        print("  %s %s %s" % (t, r["classification"]["certified_by"],
                              json.dumps({k: r[k] for k in keys})))
    print("S_p on AGL(1, p) cosets")
    for p in (7, 11, 13, 17):
        r = remark4_plan(p, degree_cap=5040)
        keys = ["triple", "fixed_points", "degree", "genus", "constructed"]
        if r["constructed"]:
            keys += ["index", "semiregular", "genus_euler"]
        print("  p=%-3d %s" % (p, json.dumps({k: r[k] for k in keys})))


if __name__ == "__main__":
    main()
