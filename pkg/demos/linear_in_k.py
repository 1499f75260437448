"""Why 2PS-L does not slow down as k grows.

HDRF scores every partition for every edge; 2PS-L only looks at the two
partitions holding the endpoints' clusters. The score-evaluation counter
makes the difference visible without a stopwatch.
Run with ``python3 demos/linear_in_k.py`` (generates a ~1M edge graph).
"""
# %%
import tempfile
import time
from pathlib import Path

from twops import PlantedConfig, RunConfig, generate_planted, open_stream, partition_stream

path = Path(tempfile.mkdtemp()) / "big.bin"
generate_planted(PlantedConfig(100, 200, 0.46, 0.0005, seed=7), path)
stream = open_stream(path)
print("edges:", stream.edge_count)
partition_stream(stream, RunConfig(k=4))  # compile kernels

# %%
for alg in ("2ps-l", "hdrf"):
    for k in (4, 32, 256):
        t = time.perf_counter()
        report = partition_stream(stream, RunConfig(k=k, algorithm=alg)).report
        dt = time.perf_counter() - t
        print(f"{alg:>6} k={k:<4} {report.score_evaluations:>12,d} score evals  "
              f"{dt:6.2f}s  RF {report.replication_factor:.3f}")
