"""Test suite for heatlog."""
