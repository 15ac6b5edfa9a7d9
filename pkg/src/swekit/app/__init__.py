"""Command-line entrypoint, configuration and artifact provenance."""
