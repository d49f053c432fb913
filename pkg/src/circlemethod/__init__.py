"""Explicit-constant circle-method toolkit for ternary Goldbach."""
