"""Probe-beam readout and inference of the cavity/atom entanglement."""
