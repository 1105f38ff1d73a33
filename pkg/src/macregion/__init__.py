"""Capacity regions of i.i.d. finite-state MACs with quantized causal CSI at the encoders."""

__version__ = "0.1.0"
