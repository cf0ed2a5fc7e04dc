"""Exact computation of Atiyah classes, Chern characters and boundary-bulk maps
for matrix factorizations of isolated quasi-homogeneous singularities."""

__version__ = "0.1.0"
