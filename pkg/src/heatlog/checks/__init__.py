"""Checker plugins for heatlog."""
