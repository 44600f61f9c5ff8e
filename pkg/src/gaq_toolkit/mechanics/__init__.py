"""Exact symbolic math: group laws, extensions, polarizations, operators and Virasoro — pure math, no I/O."""
