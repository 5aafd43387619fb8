"""Regenerate the frontend's CSV fixtures from the acceptance configurations.

Usage: python3 scripts/make_fixtures.py [outdir]   (default frontend/fixtures)
"""

import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from hypbergman.harness import (  # noqa: E402
    SweepConfig,
    build_model,
    run_count_study,
    run_diag_study,
    run_sweep,
)

SEED = 20260810


def main(outdir: str) -> None:
    os.makedirs(outdir, exist_ok=True)
    bolza = build_model("bolza")
    modular = build_model("modular")

    sweep_cfg = SweepConfig(
        model="bolza", k_values=[3, 4, 6, 8, 12], deltas=[1.6, 1.95, 2.3, 2.75],
        count=5, radius=6.5, seed=SEED, cache=False,
        out=os.path.join(outdir, "bolza_mid_sweep.csv"),
    )
    run_sweep(sweep_cfg, model=bolza)

    diag_cfg = SweepConfig(
        model="bolza", k_values=list(range(3, 13)), deltas=[0.0], count=1,
        radius=6.5, seed=SEED, cache=False,
        out=os.path.join(outdir, "bolza_diag.csv"),
    )
    run_diag_study(diag_cfg, model=bolza)

    count_cfg = SweepConfig(
        model="modular", k_values=[3, 6], deltas=[0.0, 0.6, 1.2], count=2,
        radius=7.0, seed=SEED, cache=False,
        out=os.path.join(outdir, "modular_count.csv"),
    )
    run_count_study(count_cfg, model=modular)

    for name in ("bolza_mid_sweep.csv", "bolza_diag.csv", "modular_count.csv"):
        path = os.path.join(outdir, name)
        rows = sum(1 for _ in open(path)) - 2
        print(f"{path}: {rows} data rows")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else os.path.join("frontend", "fixtures"))
