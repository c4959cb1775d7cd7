"""Toolkit for word co-occurrence networks enriched with embedding-based
virtual edges, and for two statistical properties of their metrics:
informativeness against shuffled baselines and the syntax-vs-semantics
variability ratio.
"""

import os

# Pin BLAS to one thread before numpy loads it.  The pipeline parallelizes
# at the task level, and a fixed thread count keeps matrix reductions
# byte-identical across worker counts.
for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS",
             "NUMEXPR_NUM_THREADS", "VECLIB_MAXIMUM_THREADS"):
    os.environ.setdefault(_var, "1")

__version__ = "0.1.0"
