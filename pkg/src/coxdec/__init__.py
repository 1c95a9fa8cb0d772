"""Coxeter decompositions of hyperbolic simplices."""
