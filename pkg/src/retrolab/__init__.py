"""Polarization lab bench.

Simulates beams and single photons through polarizing cubes, plays the
preparation and absorption control games against discrete and continuous
opponents, runs discrete hidden-variable models of the channel statistics,
and audits experiment records for time-reversal symmetry.
"""

__version__ = "0.1.0"
