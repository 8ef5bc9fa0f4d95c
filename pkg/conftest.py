"""Anchors pytest's rootdir so `tests.*` helper imports resolve."""
