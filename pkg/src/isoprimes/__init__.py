"""Finite supersets of isogeny primes for quadratic and Galois number fields."""
