"""Attribute access to the generators of a graded ring, for writing table entries."""

from typing import Dict

from app.services.polynomials import GradedRing, Polynomial


class Symbols:
    """
    Namespace exposing each generator of a ring as an attribute.

    Table entries are written as `lambda g: 4 * g.w2**2 - g.c2`.
    """

    def __init__(self, ring: GradedRing):
        self._ring = ring
        self._cache: Dict[str, Polynomial] = {}

    @property
    def ring(self) -> GradedRing:
        return self._ring

    def __getattr__(self, name: str) -> Polynomial:
        if name.startswith("_"):
            raise AttributeError(name)
        if name not in self._cache:
            self._cache[name] = self._ring.gen(name)
        return self._cache[name]

    def const(self, value: int) -> Polynomial:
        return self._ring.constant(value)
