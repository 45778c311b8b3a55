#!/usr/bin/env python3
"""Independent whale-flip check.

Tallies 3 x (100,0,0,0) + 1 x (0,0,0,400) by direct summation, then runs
`govlab compare --population whale` and checks its winners, share deltas
and whale line against the same arithmetic.
"""

import csv
import math
import subprocess
import sys
import tempfile
from pathlib import Path

BALLOTS = [[100, 0, 0, 0]] * 3 + [[0, 0, 0, 400]]
EQUAL = [[100, 0, 0, 0]] * 3 + [[0, 0, 0, 100]]


def tally(ballots, quadratic):
    scores = [0.0] * len(ballots[0])
    for b in ballots:
        for j, x in enumerate(b):
            scores[j] += math.sqrt(x) if quadratic else x
    best = max(scores)
    winners = [j + 1 for j, s in enumerate(scores) if abs(s - best) <= 1e-12 * max(1.0, best)]
    return scores, winners


def shares(scores):
    total = sum(scores)
    return [s / total for s in scores]


def main():
    failures = []

    def expect(ok, what):
        if not ok:
            failures.append(what)

    wq, ww = tally(BALLOTS, True), tally(BALLOTS, False)
    expect(ww[1] == [4], f"weighted winner {ww[1]}")
    expect(wq[1] == [1], f"quadratic winner {wq[1]}")
    expect(wq[0] == [30.0, 0.0, 0.0, 20.0], f"quadratic scores {wq[0]}")

    if len(sys.argv) > 1:
        govlab = sys.argv[1]
        with tempfile.TemporaryDirectory() as out:
            subprocess.run([govlab, "compare", "--population", "whale", "--out", out], check=True,
                           stdout=subprocess.DEVNULL)
            rows = list(csv.DictReader(open(Path(out) / "compare.csv")))
        winners = {r["key"]: [int(v) for v in r["value"].split()] for r in rows if r["section"] == "winner"}
        eq_q, eq_w = tally(EQUAL, True), tally(EQUAL, False)
        expect(winners.get("weighted+20/80") == ww[1], f"cli weighted+20/80 {winners.get('weighted+20/80')}")
        expect(winners.get("quadratic+20/80") == wq[1], f"cli quadratic+20/80 {winners.get('quadratic+20/80')}")
        expect(winners.get("weighted+equal") == eq_w[1], f"cli weighted+equal {winners.get('weighted+equal')}")
        expect(winners.get("quadratic+equal") == eq_q[1], f"cli quadratic+equal {winners.get('quadratic+equal')}")
        want = {"equal": [a - b for a, b in zip(shares(eq_q[0]), shares(eq_w[0]))],
                "20/80": [a - b for a, b in zip(shares(wq[0]), shares(ww[0]))]}
        for r in rows:
            if r["section"] == "share_delta":
                got, ref = float(r["value"]), want[r["key"]][int(r["option"]) - 1]
                expect(abs(got - ref) < 1e-9, f"share delta {r['key']} option {r['option']}: {got} vs {ref}")
        whale = {r["key"]: float(r["value"]) for r in rows if r["section"] == "whale"}
        expect(whale.get("tokens") == 400 and whale.get("quadratic_votes") == 20 and
               whale.get("weighted_votes") == 400, f"whale line {whale}")

    for f in failures:
        print("FAIL", f)
    print("brute-force tally:", "OK" if not failures else f"{len(failures)} mismatches")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
