"""
spinbatt: collective atomic-spin quantum battery simulator.
Capacity, coherence and entropy analysis of a polarized alkali vapor, plus the
dissipative ground-state dynamics and the measurement protocols built on them.
"""

__version__ = "1.0.0"
