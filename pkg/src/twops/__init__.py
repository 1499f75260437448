"""Out-of-core streaming edge partitioning: 2PS-L plus DBH, HDRF and 2PS-HDRF baselines."""
from .baselines import HdrfState, dbh_assign, dbh_partition, hdrf_partition, hdrf_score, run_2ps_hdrf
from .cli import partition_stream, run
from .clustering import ClusterState, cluster_edge, default_volume_cap, run_clustering
from .config import ConfigError, RunConfig
from .edge_stream import (
    EdgeFormatError,
    EdgeStream,
    EdgeStreamError,
    VertexRangeError,
    compute_degrees,
    convert_text,
    for_each_edge,
    open_stream,
    read_assignment,
    write_assignment,
    write_edges,
)
from .metrics import PartitionReport, replication_factor, verify_assignment
from .partitioning import (
    PartitionAssignment,
    PartitionRun,
    PartitionState,
    map_clusters_to_partitions,
    partition_capacity,
    partition_remaining,
    prepartition_edges,
    run_2psl,
    score,
)
from .synthgen import PlantedConfig, generate_planted, generate_uniform

__version__ = "0.1.0"
