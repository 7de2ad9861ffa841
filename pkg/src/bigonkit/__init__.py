"""Exact curves, bigons and braids in the punctured plane."""
