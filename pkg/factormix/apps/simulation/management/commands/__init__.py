"""Management commands for the simulation app."""
