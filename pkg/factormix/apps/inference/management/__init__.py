"""Management commands for the inference app."""
