"""Render sweep CSVs into line-plot images.

Reads only the CSV contract emitted by the udw-qfi sweep presets and does no
numerical work of its own. The CSV header must match the chosen preset's
expected columns; anything else aborts without writing an image.

Invocation: render --input <csv> --preset <name> --out <image>
The image format follows the output extension (png, pdf, svg, ...).
"""

import argparse
import re
import sys
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

PRESETS = ("fig2", "fig3", "fig4")

_DEFAULT_XLABELS = {
    "fig2": "proper time tau",
    "fig3": "proper time tau",
    "fig4": "mirror angle alpha (rad)",
}

_NUMBER = r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?"


class RenderError(Exception):
    """Malformed input or header mismatch; no image is produced."""


@dataclass(frozen=True)
class PlotJob:
    input_path: str
    preset: str
    output_path: str
    xlabel: str | None = None
    ylabel: str | None = None
    title: str | None = None

    def __post_init__(self):
        if self.preset not in PRESETS:
            raise RenderError(f"unknown preset {self.preset!r}; expected one of {PRESETS}")


def load_csv(path: str) -> tuple[list[str], list[list[float]]]:
    """Header and float rows; '#' comment lines are skipped."""
    try:
        with open(path) as handle:
            lines = [line.rstrip("\n") for line in handle if line.strip()]
    except OSError as exc:
        raise RenderError(f"cannot read {path}: {exc}") from exc
    lines = [line for line in lines if not line.startswith("#")]
    if not lines:
        raise RenderError(f"{path} has no header row")
    header = lines[0].split(",")
    rows = []
    for index, line in enumerate(lines[1:], start=2):
        cells = line.split(",")
        if len(cells) != len(header):
            raise RenderError(f"{path}:{index}: expected {len(header)} cells, got {len(cells)}")
        try:
            rows.append([float(cell) for cell in cells])
        except ValueError as exc:
            raise RenderError(f"{path}:{index}: non-numeric cell") from exc
    if not rows:
        raise RenderError(f"{path} has no data rows")
    return header, rows


def validate_header(preset: str, header: list[str]) -> None:
    if preset == "fig4":
        if header != ["alpha", "F"]:
            raise RenderError(f"fig4 expects header alpha,F; got {','.join(header)}")
        return
    if not header or header[0] != "tau" or len(header) < 2:
        raise RenderError(f"{preset} expects a tau column plus curve columns; got {','.join(header)}")
    pattern = re.compile(rf"^a={_NUMBER}$" if preset == "fig2" else rf"^(R={_NUMBER}|unbounded)$")
    for name in header[1:]:
        if not pattern.match(name):
            raise RenderError(f"{preset} does not accept column {name!r}")


def render(job: PlotJob) -> None:
    """Write the line-plot image for a validated CSV."""
    header, rows = load_csv(job.input_path)
    validate_header(job.preset, header)
    xs = [row[0] for row in rows]

    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for col in range(1, len(header)):
        ax.plot(xs, [row[col] for row in rows], label=header[col], linewidth=1.5)
    ax.set_xlabel(job.xlabel or _DEFAULT_XLABELS[job.preset])
    ax.set_ylabel(job.ylabel or "QFI")
    if job.title:
        ax.set_title(job.title)
    if len(header) > 2:
        ax.legend(frameon=False, fontsize=9)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    try:
        fig.savefig(job.output_path)
    finally:
        plt.close(fig)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="render", description="Render a udw-qfi sweep CSV into a line plot"
    )
    parser.add_argument("--input", required=True, help="input CSV path")
    parser.add_argument("--preset", required=True, choices=PRESETS)
    parser.add_argument("--out", required=True, help="output image path (format by extension)")
    parser.add_argument("--xlabel", help="x-axis label override")
    parser.add_argument("--ylabel", help="y-axis label override")
    parser.add_argument("--title", help="plot title")
    args = parser.parse_args(argv)
    try:
        render(
            PlotJob(
                input_path=args.input,
                preset=args.preset,
                output_path=args.out,
                xlabel=args.xlabel,
                ylabel=args.ylabel,
                title=args.title,
            )
        )
    except RenderError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
