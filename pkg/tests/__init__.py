"""Test suite for convexhd."""
