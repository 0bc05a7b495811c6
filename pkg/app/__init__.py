"""Lie Cohomology - Schubert calculus toolkit for the cohomology of PSU(n), PSp(n), PE6 and PE7"""

__version__ = "1.0.0"
