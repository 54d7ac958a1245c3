"""Tests for the flat-band dissipation simulator."""
