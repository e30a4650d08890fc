"""Management commands for the estimation app."""
