"""Figure rendering for trustnet CSV artifacts."""

from trustnet_figures.render import FigureSpec, render

__all__ = ["FigureSpec", "render"]
