#!/usr/bin/env python3
"""Scan Riesz-weight schedules tau(x) and report normalized mean sizes.

Runs the three built-in schedules (constant, inv-log: tau = c/log x,
iterated-log: tau = c log log x / log log log log x) over a shared log grid
and prints, per schedule, CSV rows of M_tau(x) alongside M_tau(x)/sqrt(x)
and the x^(tau/2)-normalized variant, ending with a per-schedule summary of
the worst normalized magnitude (small values mean square-root-size
cancellation survives that much smoothing).  The iterated-log schedule only
becomes defined once the fourth iterated logarithm is positive (x > 3.8e6);
rows below that carry status "undefined", which is the point of the scan:
the theoretically mandated weight is enormous at any computational scale.

    python3 scripts/tau_regimes.py --x-start 100 --x-stop 1e7 --points 9 --c 1.0
"""

import argparse
import math
import sys
import time

from mrl.moebius import CheckpointCache, TauSchedule, tau_regime_scan

COLUMNS = ("x", "schedule", "c", "status", "tau", "m_tau",
           "m_over_sqrt", "m_tau32_over_sqrt", "growth_factor")
SCHEDULES = ("constant", "inv-log", "iterated-log")


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--x-start", type=float, default=100.0)
    ap.add_argument("--x-stop", type=float, default=1e7)
    ap.add_argument("--points", type=int, default=9)
    ap.add_argument("--c", type=float, default=1.0)
    args = ap.parse_args(argv)

    t0 = time.time()
    cache = CheckpointCache()
    lo, hi = math.log(args.x_start), math.log(args.x_stop)
    xs = [
        math.exp(lo + (hi - lo) * i / max(args.points - 1, 1))
        for i in range(args.points)
    ]

    print(",".join(COLUMNS))
    worst: dict[str, float] = {}
    for kind in SCHEDULES:
        rows = tau_regime_scan(xs, TauSchedule(kind=kind, c=args.c), cache)
        for row in rows:
            print(",".join(repr(row[c]) if isinstance(row[c], float) else str(row[c])
                           for c in COLUMNS))
            if row["status"] == "ok":
                worst[kind] = max(worst.get(kind, 0.0), abs(row["m_over_sqrt"]))

    print("\nworst |M_tau(x)|/sqrt(x) per schedule:", file=sys.stderr)
    for kind in SCHEDULES:
        print(f"  {kind:13s}: {worst.get(kind, math.nan):.6f}", file=sys.stderr)
    print(f"total {time.time() - t0:.1f}s", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
