"""Extra clustering passes over the same stream.

Each pass starts from the clusters left by the previous one, so later passes
can only refine them. Run with ``python3 demos/restreaming.py``.
"""
# %%
from twops import (EdgeStream, PlantedConfig, RunConfig, compute_degrees,
                   default_volume_cap, partition_stream, run_clustering)
from twops.synthgen import planted_edges

stream = EdgeStream.from_array(planted_edges(PlantedConfig(32, 50, 0.25, 0.002, seed=4)))
degrees = compute_degrees(stream)
max_vol = default_volume_cap(stream.edge_count, k=16)


# %% Watch the clustering after every pass.
def show(i, state):
    problems = state.check()
    sizes = [len(m) for m in state.members().values()]
    print(f"pass {i}: {len(sizes)} clusters, largest {max(sizes)} vertices, "
          f"bookkeeping {'ok' if not problems else problems}")


run_clustering(stream, degrees, max_vol, passes=4, on_pass=show)

# %% And the effect on the final partitioning.
for passes in (1, 2, 4):
    rf = partition_stream(stream, RunConfig(k=16, passes=passes)).report.replication_factor
    print(f"passes={passes}: RF {rf:.3f}")
