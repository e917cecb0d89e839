"""seqgrid: distributed sequence alignment.

Lane-parallel striped Smith-Waterman plus scalar global/semi-global kernels,
executed either in-process or as a map + top-K job over partitioned reference
databases by a master-worker runtime with a memory-tier partition cache.
"""

__version__ = "0.1.0"
