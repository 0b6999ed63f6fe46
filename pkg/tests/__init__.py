"""Unit test package for zpygate."""
