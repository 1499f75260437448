"""Partition a small clustered graph and look at the result.

Run with ``python3 demos/quickstart.py``.
"""
# %%
import tempfile
from pathlib import Path

import numpy as np

from twops import PlantedConfig, RunConfig, generate_planted, read_assignment, run

work = Path(tempfile.mkdtemp())

# %% A planted graph: 16 dense groups of 30 vertices, sparse links between them.
stream = generate_planted(PlantedConfig(16, 30, 0.4, 0.005, seed=1), work / "graph.bin")
print("edges:", stream.edge_count, "max vertex id:", stream.max_vertex_id)

# %% Split it into 8 parts with at most 5% imbalance.
result = run(RunConfig(k=8, alpha=1.05), stream.path, work / "graph.parts")
print(result.report.to_text())
print("verified:", result.verification.ok)

# %% The output is (first, second, partition) triples, one per input edge.
triples = read_assignment(work / "graph.parts")
print(triples[:5])
print("edges per partition:", np.bincount(triples[:, 2]))
