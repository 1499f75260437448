"""Replication factor of the four partitioners on the same clustered graphs.

Run with ``python3 demos/compare_algorithms.py``.
"""
# %%
import numpy as np

from twops import EdgeStream, PlantedConfig, RunConfig, partition_stream
from twops.synthgen import planted_edges

ALGORITHMS = ["dbh", "hdrf", "2ps-l", "2ps-hdrf"]

# %% Ten seeds of a 64-cluster graph, 32 partitions each.
rfs = {alg: [] for alg in ALGORITHMS}
for seed in range(10):
    stream = EdgeStream.from_array(planted_edges(PlantedConfig(64, 40, 0.3, 0.003, seed=seed)))
    for alg in ALGORITHMS:
        report = partition_stream(stream, RunConfig(k=32, algorithm=alg, seed=seed)).report
        rfs[alg].append(report.replication_factor)

# %% Lower is better. DBH ignores structure entirely; the clustering-guided
# variants keep most of each dense group on one partition.
for alg in ALGORITHMS:
    print(f"{alg:>9}  mean RF {np.mean(rfs[alg]):.3f}  (sd {np.std(rfs[alg]):.3f})")
