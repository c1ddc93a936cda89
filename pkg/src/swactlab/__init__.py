"""Gate-level workbench for signed-format multiplier circuits.

Builds encoder and multiplier netlists over a small standard-cell library,
estimates dynamic power through a fan-out-transistor-weighted switching
activity model under clipped-Gaussian stimuli, and improves circuits with a
guided random-walk rewrite search on an and-inverter graph.
"""

__version__ = "0.1.0"
