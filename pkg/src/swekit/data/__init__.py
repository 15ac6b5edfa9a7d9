"""Data access layer: file formats, paths, tabular validation, toy data."""
