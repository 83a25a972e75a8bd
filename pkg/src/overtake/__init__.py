"""Desk-scale experiments on polynomial-time machines, fast-growing bounds and small Busy Beavers."""
