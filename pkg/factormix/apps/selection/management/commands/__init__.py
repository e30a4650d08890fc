"""Management commands for the selection app."""
