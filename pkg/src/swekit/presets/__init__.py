"""Named parameter presets (presets.json)."""
