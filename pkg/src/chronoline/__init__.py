"""Entity timeline engine.

Mines timestamped candidate events from a knowledge base by graph traversal,
filters statistically irrelevant path types, and selects a relevant,
temporally and content-diverse subset by greedy submodular maximization
under a screen-layout constraint, re-solving on zoom.
"""

__version__ = "0.1.0"
