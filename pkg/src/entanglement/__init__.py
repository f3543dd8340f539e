"""Symplectic spectra and entanglement measures of Gaussian states."""
