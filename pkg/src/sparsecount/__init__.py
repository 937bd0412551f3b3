"""Near-linear homomorphism and subgraph counting on sparse host graphs.

The pipeline: orient the pattern-labeled product host by degeneracy,
close out-out wedges into weighted fraternal extension layers, decompose
each pattern extension into a width-1 hub tree, and count with the
generalized tree DP. Subgraph counts come from the exact rational
spasm combination of homomorphism counts.
"""

from .counting import (CountDict, HomMap, NoWidth1Decomposition,
                       brute_force_hom, brute_force_hom_wl, brute_force_sub,
                       bressan_count, count_hom_extension,
                       count_homomorphisms, count_subgraphs,
                       enumerate_root_homs)
from .degeneracy import DegeneracyOrder, degeneracy_order, degeneracy_orient
from .fraternal import (ExtensionBlowupError, FraternalExtension,
                        enumerate_pattern_extensions, extension_edges,
                        optimal_extension, validate_fraternity)
from .graph_core import (ArcLayer, DirWLGraph, EdgeSet, GraphFormatError,
                         UndirectedGraph, dump_weighted, induced_subgraph,
                         load_edge_list, max_outdegree, out_neighbors,
                         save_edge_list)
from .harness import (RunReport, cli_main, generate_bounded_degeneracy,
                      generate_double_subdivision, generate_gnp,
                      generate_subdivision, run_count_hom)
from .hub_decomp import (HubTree, URGraph, find_width1_decomposition, hubset,
                         reach, unique_reachability_graph,
                         validate_decomposition)
from .pattern_tools import (PatternProfile, SpasmEntry, acyclic_orientations,
                            automorphism_count, canonical_form,
                            connected_components, licl, min_extension_depth,
                            pattern_profile, spasm)
from .product import (LabeledPattern, ProductHost, label_pattern,
                      pattern_product)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
