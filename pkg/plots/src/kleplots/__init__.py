"""Rendering of kle CSV artifacts as publication-style figures.

Each figure family is a pure read-transform-plot pipeline: all numbers
come from the input CSVs, the renderer only applies axis transforms.
"""

__version__ = "1.0.0"
