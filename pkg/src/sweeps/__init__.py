"""Parameter sweeps, figure presets and their cached output."""

# Part of every cache key; bump when numerical results change.
CODE_VERSION = "1.0.0"
