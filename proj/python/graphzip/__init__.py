"""Structural graph compression and MDL model selection."""

try:
    from . import _graphzip as _impl  # installed package layout
except ImportError:  # in-tree build: extension on PYTHONPATH
    import _graphzip as _impl

CoderStats = _impl.CoderStats
ConfigError = _impl.ConfigError
DecodeError = _impl.DecodeError
DomainError = _impl.DomainError
Graph = _impl.Graph
ParseError = _impl.ParseError
SolverError = _impl.SolverError
compress = _impl.compress
decompress = _impl.decompress
degree_histogram = _impl.degree_histogram
dempster_complete = _impl.dempster_complete
f1_score = _impl.f1_score
generate = _impl.generate
generate_precision = _impl.generate_precision
graph_from_precision = _impl.graph_from_precision
graphical_lasso = _impl.graphical_lasso
is_isomorphic_small = _impl.is_isomorphic_small
labeled_iid_bits = _impl.labeled_iid_bits
load_edge_list = _impl.load_edge_list
predictive_mdl = _impl.predictive_mdl
sample_gaussian = _impl.sample_gaussian
select_model = _impl.select_model
to_edge_list = _impl.to_edge_list
train = _impl.train

__all__ = [
    "CoderStats", "ConfigError", "DecodeError", "DomainError", "Graph",
    "ParseError", "SolverError", "compress", "decompress", "degree_histogram",
    "dempster_complete", "f1_score", "generate", "generate_precision",
    "graph_from_precision", "graphical_lasso", "is_isomorphic_small",
    "labeled_iid_bits", "load_edge_list", "predictive_mdl", "sample_gaussian",
    "select_model", "to_edge_list", "train",
]

__version__ = "0.1.0"
