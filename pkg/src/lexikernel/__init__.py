"""Structure of dictionaries: kernels, cores, satellites, grounding sets."""

__version__ = "0.1.0"
