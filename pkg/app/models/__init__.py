"""Pydantic requests and emitted documents."""
