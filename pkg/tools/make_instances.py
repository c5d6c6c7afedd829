#!/usr/bin/env python3
"""Regenerate the bundled synthetic benchmark instances.

Each instance is produced deterministically by the library's seeded
synthesizer; this script only fixes names, sizes and window-tightness
parameters, mirroring the difficulty spread of the classic rc_* TSPTW
series (the upstream data is not vendored, so the bundled files are
synthetic stand-ins with matching city counts and hardness ordering).

Run from the repository root:  python tools/make_instances.py
"""

from __future__ import annotations

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from pareto_nrpa.metrics import hypervolume_2d  # noqa: E402
from pareto_nrpa.problems import (  # noqa: E402
    brute_force_front,
    serialize_instance,
    synthesize_instance,
)
from pareto_nrpa.problems.synth import mean_window_width  # noqa: E402

OUT_DIR = Path(__file__).resolve().parent.parent / "src" / "pareto_nrpa" / "instances"

# name -> (n, seed, window_low, window_high, depot_slack)
SPECS = {
    "rc_206.1": (4, 206_136, 80.0, 250.0, 500.0),
    "rc_207.4": (6, 207_406, 60.0, 220.0, 450.0),
    "rc_202.2": (14, 202_201, 50.0, 200.0, 400.0),
    "rc_205.1": (14, 205_101, 60.0, 250.0, 500.0),
    "rc_204.3": (24, 204_301, 350.0, 1100.0, 2200.0),
    "rc_201.3": (32, 201_307, 25.0, 100.0, 350.0),
    "rc_204.1": (46, 204_101, 60.0, 240.0, 600.0),
}


def main() -> None:
    OUT_DIR.mkdir(parents=True, exist_ok=True)
    for name, (n, seed, lo, hi, slack) in SPECS.items():
        instance = synthesize_instance(n, seed=seed, window_low=lo, window_high=hi,
                                       depot_slack=slack)
        header = (
            f"# {name}: synthetic bi-objective TSPTW instance, {n} cities\n"
            f"# generator seed {seed}, window draw [{lo}, {hi}], depot slack {slack}\n"
        )
        path = OUT_DIR / f"{name}.txt"
        path.write_text(header + serialize_instance(instance))
        note = f"mean window width {mean_window_width(instance):.0f}"
        if n <= 8:
            front = brute_force_front(instance)
            feasible = all(s.violations == 0 for s in front)
            distinct = {s.objectives for s in front}
            # >= 3 distinct points keep the union-max reference point from
            # collapsing the normalized hypervolume to 0/0
            ref = tuple(max(v[i] for v in distinct) for i in range(2))
            hv = hypervolume_2d(list(distinct), ref)
            assert feasible and len(distinct) >= 3 and hv > 0, name
            note += f", oracle front {len(front)} points ({len(distinct)} distinct), hv_max {hv:.1f}"
        print(f"{name}: n={n}, {note}")


if __name__ == "__main__":
    main()
