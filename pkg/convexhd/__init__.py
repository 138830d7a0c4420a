"""convexhd - combinatorial convex surfaces, tight Heegaard splittings and their open books."""

__version__ = "0.1.0"
