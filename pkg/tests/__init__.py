"""Tests for aware-stl."""
