#!/usr/bin/env python3
"""Generate the three figure-preset CSVs (plus manifests) into results/.

Usage: python scripts/make_figure_data.py [outdir]
"""

import sys
from pathlib import Path

from udw_qfi.cli import main as cli_main

PRESETS = ("fig2", "fig3", "fig4")


def run(outdir: Path) -> int:
    outdir.mkdir(parents=True, exist_ok=True)
    for preset in PRESETS:
        out = outdir / f"{preset}.csv"
        code = cli_main(["sweep", "--preset", preset, "--out", str(out)])
        if code != 0:
            print(f"preset {preset} failed with exit code {code}", file=sys.stderr)
            return code
    return 0


if __name__ == "__main__":
    target = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("results")
    sys.exit(run(target))
