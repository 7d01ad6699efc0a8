"""Ray class field invariants of imaginary biquadratic fields from Siegel function values."""
__version__ = "0.1.0"
