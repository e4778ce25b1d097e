"""Exact counting and enumeration of contours on rooted trees."""
