"""File-level helpers shared by every stage."""
