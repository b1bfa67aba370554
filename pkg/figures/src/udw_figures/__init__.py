"""Plotting for udw-qfi sweep output. Consumes the CSV contract only."""

from .render import PlotJob, render

__version__ = "0.1.0"

__all__ = ["PlotJob", "render"]
