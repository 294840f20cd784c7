"""Threshold group authentication for drone swarms."""
