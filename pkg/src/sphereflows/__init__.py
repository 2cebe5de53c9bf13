"""Census engine for codimension-1 gradient flows on the 2-sphere.

Spherical graphs are encoded as combinatorial maps; their marked variants
enumerate the saddle-node and saddle-connection bifurcation structures, and
each class realizes to a separatrix diagram.
"""

from .combmap import (CanonicalCode, CombinatorialMap, InvalidMarkError,
                      KindMismatchError, ValidationResult, are_equivalent,
                      perm_from_cycles)
from .generate import (EdgeCountOutOfRangeError, GenerationConfig,
                       generate_maps, generate_maps_with_degree3_vertex)
from .marks import (MarkedMap, NotReversibleError, SaddleConnectionCensus,
                    SaddleCountOutOfRangeError, SaddleNodeCensus, SinkMark,
                    SourceMark, TMark, enumerate_sink_marks,
                    enumerate_source_marks, enumerate_t_marks,
                    marked_map_from_code, reverse, saddle_connection_census,
                    saddle_node_census, t_connection_category)
from .realize import (Separatrix, SeparatrixDiagram, SingularPoint,
                      diagram_census_check, realize)

__version__ = "0.1.0"

__all__ = [
    "CanonicalCode", "CombinatorialMap", "InvalidMarkError",
    "KindMismatchError", "ValidationResult", "are_equivalent",
    "perm_from_cycles",
    "EdgeCountOutOfRangeError", "GenerationConfig", "generate_maps",
    "generate_maps_with_degree3_vertex",
    "MarkedMap", "NotReversibleError", "SaddleConnectionCensus",
    "SaddleCountOutOfRangeError", "SaddleNodeCensus", "SinkMark",
    "SourceMark", "TMark", "enumerate_sink_marks", "enumerate_source_marks",
    "enumerate_t_marks", "marked_map_from_code", "reverse",
    "saddle_connection_census", "saddle_node_census", "t_connection_category",
    "Separatrix", "SeparatrixDiagram", "SingularPoint",
    "diagram_census_check", "realize",
    "__version__",
]
