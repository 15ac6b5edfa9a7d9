"""Schema helpers: column contracts for the TSV inputs."""
