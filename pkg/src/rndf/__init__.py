"""Numerical toolkit for the quadratic-phase curve and its tangents."""
