"""Static figure rendering for slrt CSV outputs."""

from .render import FigureJob, render

__all__ = ["FigureJob", "render"]
