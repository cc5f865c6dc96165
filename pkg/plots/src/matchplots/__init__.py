"""Figure renderer for spatialmatch experiment CSV outputs."""

from .render import EmptyDataError, MissingColumnError, PlotSpec, render

__version__ = "0.1.0"
