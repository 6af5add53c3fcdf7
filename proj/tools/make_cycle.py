#!/usr/bin/env python3
"""Generate the bundled 1800 s class-3-style drive cycle (data/wltp_class3.csv).

The official trace is not redistributed here; this synthetic cycle matches the
format and the headline kinematics (four phases of 589/433/455/323 s, 131.3
km/h peak, ~23 km total) so that consumption results are representative. The
generator is deterministic; the file checksum is recorded in the README.
"""

import io
import os

DT = 1.0


def build_phase(ops, target_s):
    """ops: list of ("ramp", v_kmh, a_mps2) / ("hold", seconds). Hold times are
    scaled once so the phase lands close to target_s."""

    def render(scale):
        speeds = []
        cur = ops_state[0]
        for op in ops:
            if op[0] == "ramp":
                tgt = op[1] / 3.6
                a = op[2] if tgt > cur else -abs(op[2])
                while abs(tgt - cur) > abs(a) * DT:
                    cur += a * DT
                    speeds.append(max(cur, 0.0))
                cur = tgt
                speeds.append(cur)
            else:
                for _ in range(max(1, round(op[1] * scale))):
                    speeds.append(cur)
        return speeds, cur

    ops_state = [0.0]
    base, _ = render(1.0)
    hold_total = sum(op[1] for op in ops if op[0] == "hold")
    ramp_total = len(base) - sum(max(1, round(op[1])) for op in ops if op[0] == "hold")
    scale = max(0.1, (target_s - ramp_total) / max(hold_total, 1))
    speeds, cur = render(scale)
    return speeds, cur


LOW = [
    ("hold", 32), ("ramp", 28, 0.9), ("hold", 12), ("ramp", 0, 1.0), ("hold", 30),
    ("ramp", 42, 0.9), ("hold", 18), ("ramp", 18, 0.9), ("hold", 8),
    ("ramp", 50, 0.8), ("hold", 14), ("ramp", 0, 1.0), ("hold", 38),
    ("ramp", 35, 1.0), ("hold", 14), ("ramp", 56, 0.7), ("hold", 14),
    ("ramp", 25, 1.0), ("hold", 8), ("ramp", 0, 1.0), ("hold", 34),
    ("ramp", 45, 0.9), ("hold", 18), ("ramp", 0, 1.1), ("hold", 30),
    ("ramp", 31, 1.0), ("hold", 10), ("ramp", 0, 1.0), ("hold", 28),
]
MEDIUM = [
    ("ramp", 40, 0.9), ("hold", 12), ("ramp", 61, 0.7), ("hold", 22),
    ("ramp", 45, 0.8), ("hold", 10), ("ramp", 76, 0.6), ("hold", 24),
    ("ramp", 0, 1.0), ("hold", 26),
    ("ramp", 60, 0.8), ("hold", 12), ("ramp", 70, 0.5), ("hold", 18),
    ("ramp", 35, 0.9), ("hold", 8), ("ramp", 64, 0.7), ("hold", 14),
    ("ramp", 0, 1.0), ("hold", 30),
]
HIGH = [
    ("ramp", 50, 0.8), ("hold", 10), ("ramp", 78, 0.6), ("hold", 22),
    ("ramp", 97, 0.5), ("hold", 30), ("ramp", 60, 0.6), ("hold", 14),
    ("ramp", 95, 0.4), ("hold", 22), ("ramp", 50, 0.7), ("hold", 10),
    ("ramp", 88, 0.5), ("hold", 16), ("ramp", 0, 0.9), ("hold", 18),
]
EXTRA_HIGH = [
    ("ramp", 70, 0.8), ("hold", 8), ("ramp", 100, 0.5), ("hold", 16),
    ("ramp", 120, 0.4), ("hold", 20), ("ramp", 95, 0.5), ("hold", 10),
    ("ramp", 131.3, 0.35), ("hold", 18), ("ramp", 110, 0.5), ("hold", 8),
    ("ramp", 0, 0.9), ("hold", 8),
]


def main():
    speeds = []
    for ops, target in ((LOW, 589), (MEDIUM, 433), (HIGH, 455), (EXTRA_HIGH, 323)):
        phase, _ = build_phase(ops, target)
        speeds.extend(phase)
    if len(speeds) > 1800:
        speeds = speeds[:1800]
        # make sure the trace ends at standstill
        v = 0.0
        for j in range(len(speeds) - 1, -1, -1):
            if speeds[j] <= v + 1.2:
                break
            speeds[j] = v
            v += 1.2
    while len(speeds) < 1800:
        speeds.append(0.0)

    dist = sum(speeds) * DT
    out = io.StringIO()
    out.write("t_s,v_mps\n")
    for t, v in enumerate(speeds):
        out.write("%d,%.4f\n" % (t, v))
    path = os.path.join(os.path.dirname(__file__), "..", "data", "wltp_class3.csv")
    with open(path, "w") as f:
        f.write(out.getvalue())
    print("samples=%d distance_km=%.3f vmax_kmh=%.1f avg_kmh=%.1f" %
          (len(speeds), dist / 1000, max(speeds) * 3.6, dist / len(speeds) * 3.6))


if __name__ == "__main__":
    main()
