"""Tests for lie-cohomology."""
