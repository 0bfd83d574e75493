#!/usr/bin/env python3
"""Regenerate the bundled levels, traces and test fixtures.

Run from the repository root: python3 tools/make_fixtures.py
"""

import json
import math
import random
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent

PALETTE = {
    "background": "#FFFFFF",
    "route": "#1F4E79",
    "chair": "#000000",
    "obstacle": "#5A5A5A",
    "reward": "#8A4500",
}


def box(xmin, ymin, xmax, ymax):
    return [
        [xmin, ymin, xmax, ymin],
        [xmax, ymin, xmax, ymax],
        [xmax, ymax, xmin, ymax],
        [xmin, ymax, xmin, ymin],
    ]


def straight_corridor():
    return {
        "id": "straight_corridor",
        "walls": [[-1.0, -1.5, 13.0, -1.5], [-1.0, 1.5, 13.0, 1.5], [-1.0, -1.5, -1.0, 1.5], [13.0, -1.5, 13.0, 1.5]],
        "route": [[0.0, 0.0], [12.0, 0.0]],
        "corridor_half_width": 0.75,
        "start": [0.0, 0.0, 0.0],
        "goal": [10.0, 0.0, 0.6],
        "waypoints": [[5.0, 0.0, 0.5]],
        "palette": PALETTE,
        "decoration_count": 2,
    }


def l_turn():
    return {
        "id": "l_turn",
        "walls": [
            [-1.0, -1.5, 9.5, -1.5],
            [9.5, -1.5, 9.5, 9.0],
            [-1.0, 1.5, 6.5, 1.5],
            [6.5, 1.5, 6.5, 9.0],
            [-1.0, -1.5, -1.0, 1.5],
            [6.5, 9.0, 9.5, 9.0],
        ],
        "route": [[0.0, 0.0], [8.0, 0.0], [8.0, 8.0]],
        "corridor_half_width": 0.8,
        "start": [0.0, 0.0, 0.0],
        "goal": [8.0, 7.0, 0.6],
        "waypoints": [[8.0, 0.0, 0.6]],
        "palette": PALETTE,
        "decoration_count": 3,
    }


def slalom():
    return {
        "id": "slalom",
        "walls": box(-1.0, -3.5, 17.0, 3.5),
        "circles": [[4.0, -1.2, 0.4], [8.0, 1.2, 0.4], [12.0, -1.2, 0.4]],
        "route": [[0.0, 0.0], [4.0, 1.5], [8.0, -1.5], [12.0, 1.5], [16.0, 0.0]],
        "corridor_half_width": 1.0,
        "start": [0.0, 0.0, 0.0],
        "goal": [15.5, 0.0, 0.6],
        "waypoints": [[4.0, 1.5, 0.6], [8.0, -1.5, 0.6], [12.0, 1.5, 0.6]],
        "palette": PALETTE,
        "decoration_count": 4,
    }


def obstacle_dense():
    rng = random.Random(7)
    start = (1.0, 1.0)
    circles, rects = [], []
    while len(circles) < 30:
        cx, cy, r = rng.uniform(0.5, 9.5), rng.uniform(0.5, 9.5), rng.uniform(0.15, 0.5)
        if math.hypot(cx - start[0], cy - start[1]) > r + 1.0:
            circles.append([round(cx, 3), round(cy, 3), round(r, 3)])
    while len(rects) < 10:
        x, y = rng.uniform(0.5, 9.0), rng.uniform(0.5, 9.0)
        w, h = rng.uniform(0.2, 1.0), rng.uniform(0.2, 1.0)
        cx = min(max(start[0], x), x + w)
        cy = min(max(start[1], y), y + h)
        if math.hypot(cx - start[0], cy - start[1]) > 1.0:
            rects.append([round(x, 3), round(y, 3), round(x + w, 3), round(y + h, 3)])
    walls = box(0.0, 0.0, 10.0, 10.0)
    walls += [[2.0, 4.0, 4.5, 4.0], [6.0, 6.5, 6.0, 9.0], [7.0, 2.0, 9.0, 3.5]]
    return {
        "id": "obstacle_dense",
        "walls": walls,
        "circles": circles,
        "rects": rects,
        "route": [[1.0, 1.0], [9.0, 1.0], [9.0, 9.0], [1.0, 9.0]],
        "corridor_half_width": 1.2,
        "start": [1.0, 1.0, 0.0],
        "goal": [1.5, 9.0, 0.5],
        "palette": PALETTE,
        "decoration_count": 0,
    }


def write_json(path, obj):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(obj, indent=2) + "\n")


def write_trace(path, rows):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("".join(json.dumps({"t": round(t, 6), "axes": axes}) + "\n" for t, axes in rows))


def main():
    for level in (straight_corridor(), l_turn(), slalom(), obstacle_dense()):
        write_json(ROOT / "levels" / f"{level['id']}.level.json", level)

    write_trace(ROOT / "traces" / "straight_full_forward.jsonl", [(i / 60.0, [512, 1023]) for i in range(600)])

    # forward along x, stop, spin left on the spot, stop, forward up the second leg
    rows = []
    for i in range(60 * 25):
        t = i / 60.0
        if t < 5.3:
            axes = [512, 1023]
        elif t < 6.8:
            axes = [512, 512]
        elif t < 8.1:
            axes = [0, 512]
        elif t < 9.6:
            axes = [512, 512]
        else:
            axes = [512, 1023]
        rows.append((t, axes))
    write_trace(ROOT / "traces" / "l_turn_drive.jsonl", rows)

    rng = random.Random(11)
    rows, t, axes = [], 0.0, [512, 512]
    while t < 30.0:
        if rng.random() < 0.05:
            axes = [rng.randint(0, 1023), rng.randint(0, 1023)]
        rows.append((t, axes))
        t += 1.0 / 60.0
    write_trace(ROOT / "traces" / "wander.jsonl", rows)

    write_json(
        ROOT / "traces" / "calibration.json",
        {"device_id": "hybrid-joystick-10bit", "center": [510, 515], "deadzone": 0.08, "gain": [1.0, 1.0], "invert": [False, False]},
    )

    fx = ROOT / "tests" / "fixtures"
    bad = straight_corridor()
    bad["id"] = "low_contrast"
    bad["palette"] = dict(PALETTE, route="#777777")
    write_json(fx / "low_contrast.level.json", bad)

    bad = straight_corridor()
    bad["id"] = "cluttered"
    bad["decoration_count"] = 6
    write_json(fx / "cluttered.level.json", bad)

    bad = straight_corridor()
    bad["id"] = "start_in_wall"
    bad["start"] = [0.0, 1.3, 0.0]
    bad["corridor_half_width"] = 1.5
    write_json(fx / "start_in_wall.level.json", bad)

    bad = straight_corridor()
    del bad["route"]
    write_json(fx / "missing_route.level.json", bad)

    (fx / "not_json.level.json").write_text('{"id": "broken",\n  "route": [[0, 0], [1, 0]\n')


if __name__ == "__main__":
    main()
