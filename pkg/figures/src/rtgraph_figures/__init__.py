"""Figure rendering over the pipeline's emitted CSV/GeoJSON files."""

__version__ = "0.1.0"


class FigureInputError(Exception):
    """Missing or unusable figure input (bad community, empty table)."""


class FigureDataError(Exception):
    """Input values outside their documented range."""
