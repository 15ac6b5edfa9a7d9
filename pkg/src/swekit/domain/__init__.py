"""Domain layer: one subpackage per pipeline stage."""
