#!/usr/bin/env python3
"""Build a (dv, dc)-regular parity-check matrix by progressive edge growth
and write it in alist format.

Used once to produce crates/core/data/reg36_204x102.alist:

    python3 tools/make_regular_code.py 204 3 6 --seed 484 > crates/core/data/reg36_204x102.alist
"""
import argparse
import random
import sys


def peg(n, dv, dc, rng):
    m = n * dv // dc
    var_adj = [[] for _ in range(n)]
    chk_adj = [[] for _ in range(m)]
    for v in range(n):
        for e in range(dv):
            open_checks = [c for c in range(m) if len(chk_adj[c]) < dc and c not in var_adj[v]]
            if e == 0:
                cands = open_checks
            else:
                # breadth-first expansion from v; prefer checks not yet reached
                reached = set(var_adj[v])
                frontier_v = {v}
                seen_v = {v}
                last_unreached = None
                while True:
                    unreached = [c for c in open_checks if c not in reached]
                    if unreached:
                        last_unreached = unreached
                    new_checks = set()
                    for u in frontier_v:
                        for c in var_adj[u]:
                            new_checks.add(c)
                    next_v = set()
                    for c in new_checks:
                        for u in chk_adj[c]:
                            if u not in seen_v:
                                next_v.add(u)
                    grow = set()
                    for u in next_v:
                        grow.update(var_adj[u])
                    if not next_v or grow <= reached:
                        break
                    reached |= grow
                    seen_v |= next_v
                    frontier_v = next_v
                unreached = [c for c in open_checks if c not in reached]
                cands = unreached if unreached else (last_unreached or open_checks)
            low = min(len(chk_adj[c]) for c in cands)
            c = rng.choice([c for c in cands if len(chk_adj[c]) == low])
            var_adj[v].append(c)
            chk_adj[c].append(v)
    return m, var_adj, chk_adj


def has_four_cycle(chk_adj):
    seen = set()
    for row in chk_adj:
        r = sorted(row)
        for a in range(len(r)):
            for b in range(a + 1, len(r)):
                if (r[a], r[b]) in seen:
                    return True
                seen.add((r[a], r[b]))
    return False


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("n", type=int)
    ap.add_argument("dv", type=int)
    ap.add_argument("dc", type=int)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    for _ in range(100):
        m, var_adj, chk_adj = peg(args.n, args.dv, args.dc, rng)
        if all(len(r) == args.dc for r in chk_adj) and not has_four_cycle(chk_adj):
            break
    else:
        sys.exit("no regular 4-cycle-free matrix found")
    out = sys.stdout
    out.write(f"{args.n} {m}\n{args.dv} {args.dc}\n")
    out.write(" ".join(str(args.dv) for _ in range(args.n)) + "\n")
    out.write(" ".join(str(args.dc) for _ in range(m)) + "\n")
    for col in var_adj:
        out.write(" ".join(str(c + 1) for c in sorted(col)) + "\n")
    for row in chk_adj:
        out.write(" ".join(str(v + 1) for v in sorted(row)) + "\n")


if __name__ == "__main__":
    main()
