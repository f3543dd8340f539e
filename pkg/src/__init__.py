"""Hybrid cavity entanglement toolkit source package."""
