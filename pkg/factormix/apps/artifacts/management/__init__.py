"""Shared base of the factormix management commands."""
