"""kernelsweep: evolutionary kernel-search harness and scientific-compute benchmark."""

__version__ = "0.1.0"
