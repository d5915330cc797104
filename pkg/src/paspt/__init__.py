"""Fault-tolerant shortest-path trees and distance oracles for failures of
consecutive edges on a root path."""
from .evaluation import (ExperimentConfig, ReportRow, StretchBoundError, brute_force_distances,
                         gen_ba, gen_er, gen_grid, run_experiment, sample_failure)
from .general import AuxGraph, build_aux_graph, build_paspt
from .graph import UNREACHABLE, ParameterError, WeightedGraph, dijkstra, parse_dimacs, parse_edge_list, read_graph
from .oracle import (OracleCompact, OracleConst, QueryAnswer, build_oracle_compact, build_oracle_const,
                     load_oracle, query_compact, query_distance_const, query_path_const)
from .spanner import SmallDistanceOracle, build_small_oracle, build_spanner, oracle_distance, oracle_path
from .structure import FtStructure, PathFailure, loads_structure, path_failure, structure_distance
from .tree import LcaIndex, ShortestPathTree, build_spt, decompose, lca, restricted_spt
from .twopath import CompactPath, Oracle2, SwapEdgeTable, build_easpt3, build_oracle2, build_paspt2, first_last, query2

__all__ = [
    "AuxGraph", "CompactPath", "ExperimentConfig", "FtStructure", "LcaIndex", "Oracle2", "OracleCompact",
    "OracleConst", "ParameterError", "PathFailure", "QueryAnswer", "ReportRow", "ShortestPathTree",
    "SmallDistanceOracle", "StretchBoundError", "SwapEdgeTable", "UNREACHABLE", "WeightedGraph",
    "brute_force_distances", "build_aux_graph", "build_easpt3", "build_oracle2", "build_oracle_compact",
    "build_oracle_const", "build_paspt", "build_paspt2", "build_small_oracle", "build_spanner", "build_spt",
    "decompose", "dijkstra", "first_last", "gen_ba", "gen_er", "gen_grid", "lca", "load_oracle",
    "loads_structure", "oracle_distance", "oracle_path", "parse_dimacs", "parse_edge_list", "path_failure",
    "query2", "query_compact", "query_distance_const", "query_path_const", "read_graph", "restricted_spt",
    "run_experiment", "sample_failure", "structure_distance",
]
