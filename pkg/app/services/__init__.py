"""Computation services: polynomials, linear algebra, flag manifolds and cohomology."""
