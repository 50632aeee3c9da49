"""Core functionality for heatlog."""
