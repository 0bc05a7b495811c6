"""Curated published data: relations, characteristic polynomials and ring presentations."""
