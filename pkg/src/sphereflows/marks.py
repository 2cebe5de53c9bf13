"""Marked spherical maps: the three selections that encode a codimension-1 flow.

A map with E edges stands for the Morse flow whose sources are the vertices,
saddles the edge interiors and sinks the faces.  The degenerate flows are
encoded by one extra selection:

* ``SourceMark`` -- a non-loop edge together with one endpoint (the saddle
  merging into a source); stored as the dart leaving that endpoint.
* ``SinkMark`` -- an edge together with one of its two faces, which must be
  distinct (the saddle merging into a sink); stored as the dart whose left
  face is the chosen one.
* ``TMark`` -- a degree-3 vertex with no incident loop whose marked dart is
  the perpendicular leg of the letter T (a saddle connection); the other
  two darts are the collinear pair.

Under orientation reversal a dart keeps its edge and endpoint but its left
and right faces swap, so a sink mark transports to the partner dart
``alpha(d)`` when the reversed rotation is traced.  Source and T marks
transport unchanged.  This convention is what makes duality carry sink-mark
classes bijectively onto source-mark classes of the dual map.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .combmap import CombinatorialMap, InvalidMarkError, MapMark
from .generate import GenerationConfig, generate_maps

T_MIN_SADDLES = 2
SN_MIN_SADDLES = 1
MAX_SADDLES = 4


class SaddleCountOutOfRangeError(ValueError):
    """Saddle count outside the supported range."""


class NotReversibleError(ValueError):
    """Flow reversal is only defined for saddle-node marks."""


@dataclass(frozen=True)
class SourceMark(MapMark):
    """Selects edge(dart) and its endpoint vertex(dart); edge must not be a loop."""

    dart: int
    kind = "source"

    def validate_on(self, m):
        if m.is_loop(self.dart):
            raise InvalidMarkError("a source mark cannot sit on a loop edge")

    def trace_value(self, labels, alpha, reflected):
        return labels[self.dart]


@dataclass(frozen=True)
class SinkMark(MapMark):
    """Selects edge(dart) and face(dart); the edge's two faces must differ."""

    dart: int
    kind = "sink"

    def validate_on(self, m):
        if m.is_bridge(self.dart):
            raise InvalidMarkError(
                "a sink mark needs an edge bordering two distinct faces")

    def trace_value(self, labels, alpha, reflected):
        # reversal swaps the sides of the edge; alpha(d) designates the same
        # geometric face in the mirrored rotation system
        return labels[alpha[self.dart]] if reflected else labels[self.dart]


@dataclass(frozen=True)
class TMark(MapMark):
    """Selects the perpendicular dart at a T-vertex.

    The vertex must have degree 3 and no incident loop; the two remaining
    darts are the collinear pair, left implicit.
    """

    dart: int
    kind = "t"

    def validate_on(self, m):
        orbit = m.vertex_orbits[m.vertex_of(self.dart)]
        if len(orbit) != 3:
            raise InvalidMarkError("a T-mark needs a vertex of degree 3")
        if any(m.alpha[d] in orbit for d in orbit):
            raise InvalidMarkError("a T-vertex must have no incident loop")

    def trace_value(self, labels, alpha, reflected):
        return labels[self.dart]


Mark = SourceMark | SinkMark | TMark


@dataclass(frozen=True)
class MarkedMap:
    """A valid map with exactly one mark; encodes one codimension-1 flow."""

    map: CombinatorialMap
    mark: Mark

    def __post_init__(self):
        self.map.require_valid()
        self.mark.check_on(self.map)
        self.mark.validate_on(self.map)

    @property
    def n_saddles(self) -> int:
        """Saddle count of the encoded flow: E for saddle-node marks, E-1 for T."""
        e = self.map.n_edges
        return e - 1 if self.mark.kind == "t" else e

    @property
    def n_singular_points(self) -> int:
        n = self.n_saddles
        return 2 * n + 2 if self.mark.kind == "t" else 2 * n + 1

    def canonical_code(self, allow_reflection: bool = True):
        return self.map.canonical_code(self.mark, allow_reflection)

    def reversed_flow(self) -> "MarkedMap":
        return reverse(self)


def marked_map_from_code(code) -> MarkedMap:
    """Rebuild the canonical representative of a marked-map class."""
    if code.mark is None:
        raise ValueError("code carries no mark")
    kind, label = code.mark
    cls = {"source": SourceMark, "sink": SinkMark, "t": TMark}.get(kind)
    if cls is None:
        raise ValueError(f"unknown mark kind {kind!r}")
    from .combmap import renormalize

    sigma, alpha, relabel = renormalize(code.sigma_images, code.alpha_images)
    return MarkedMap(CombinatorialMap(sigma, alpha), cls(relabel[label]))


def _dedupe(candidates, allow_reflection):
    classes = {}
    for mm in candidates:
        classes.setdefault(mm.canonical_code(allow_reflection), mm)
    return [classes[code] for code in sorted(classes)]


def enumerate_source_marks(m: CombinatorialMap, *, allow_reflection: bool = True):
    """One marked map per class of (m, source mark), ordered by code."""
    m.require_valid()
    candidates = (MarkedMap(m, SourceMark(d)) for d in range(m.n_darts)
                  if not m.is_loop(d))
    return _dedupe(candidates, allow_reflection)


def enumerate_sink_marks(m: CombinatorialMap, *, allow_reflection: bool = True):
    """One marked map per class of (m, sink mark), ordered by code."""
    m.require_valid()
    candidates = (MarkedMap(m, SinkMark(d)) for d in range(m.n_darts)
                  if not m.is_bridge(d))
    return _dedupe(candidates, allow_reflection)


def _t_candidates(m: CombinatorialMap):
    for orbit in m.vertex_orbits:
        if len(orbit) == 3 and not any(m.alpha[d] in orbit for d in orbit):
            for p in orbit:
                yield MarkedMap(m, TMark(p))


def enumerate_t_marks(n_saddles: int, *, allow_reflection: bool = True,
                      jobs: int = 1):
    """All saddle-connection flows with the given saddle count, one per class.

    The underlying maps have ``n_saddles + 1`` edges; the marked vertex is
    the lower saddle of the connection.
    """
    if not (T_MIN_SADDLES <= n_saddles <= MAX_SADDLES):
        raise SaddleCountOutOfRangeError(
            f"saddle connections need {T_MIN_SADDLES}..{MAX_SADDLES} saddles, "
            f"got {n_saddles}")
    cfg = GenerationConfig(n_saddles + 1, allow_reflection, jobs)
    out = []
    for m in generate_maps(cfg):
        out.extend(_dedupe(_t_candidates(m), allow_reflection))
    out.sort(key=lambda mm: mm.canonical_code(allow_reflection).sort_key)
    return out


def reverse(mm: MarkedMap) -> MarkedMap:
    """The reversed flow: the dual map with the mark of the opposite kind.

    Dart ids are stable under ``dual``, so a source mark at dart d becomes
    the sink mark at d designating the dual face that was the marked vertex,
    and vice versa.  An exact involution.  Saddle-connection flows are not
    handled; reversing them is out of scope.
    """
    if mm.mark.kind == "source":
        return MarkedMap(mm.map.dual(), SinkMark(mm.mark.dart))
    if mm.mark.kind == "sink":
        return MarkedMap(mm.map.dual(), SourceMark(mm.mark.dart))
    raise NotReversibleError("saddle-connection flows have no defined reversal")


# ---------------------------------------------------------------------------
# censuses

@dataclass(frozen=True)
class SaddleNodeCensusRow:
    map_code: str
    n_vertices: int
    n_faces: int
    n_source: int
    n_sink: int


@dataclass(frozen=True)
class SaddleNodeCensus:
    """Class counts of saddle-node flows with a given saddle count."""

    n_saddles: int
    singular_points: int
    rows: tuple
    total_source: int
    total_sink: int

    @property
    def total(self) -> int:
        return self.total_source + self.total_sink

    def source_by_vertex_count(self) -> dict:
        out: dict = {}
        for row in self.rows:
            out[row.n_vertices] = out.get(row.n_vertices, 0) + row.n_source
        return out

    def sink_by_vertex_count(self) -> dict:
        out: dict = {}
        for row in self.rows:
            out[row.n_vertices] = out.get(row.n_vertices, 0) + row.n_sink
        return out


def saddle_node_census(n_saddles: int, *, allow_reflection: bool = True,
                       jobs: int = 1) -> SaddleNodeCensus:
    """Count source- and sink-marked classes over all maps with n edges."""
    if not (SN_MIN_SADDLES <= n_saddles <= MAX_SADDLES):
        raise SaddleCountOutOfRangeError(
            f"saddle-node flows need {SN_MIN_SADDLES}..{MAX_SADDLES} saddles, "
            f"got {n_saddles}")
    cfg = GenerationConfig(n_saddles, allow_reflection, jobs)
    rows = []
    for m in generate_maps(cfg):
        rows.append(SaddleNodeCensusRow(
            map_code=m.canonical_code(allow_reflection=allow_reflection).token(),
            n_vertices=m.n_vertices,
            n_faces=m.n_faces,
            n_source=len(enumerate_source_marks(m, allow_reflection=allow_reflection)),
            n_sink=len(enumerate_sink_marks(m, allow_reflection=allow_reflection)),
        ))
    return SaddleNodeCensus(
        n_saddles=n_saddles,
        singular_points=2 * n_saddles + 1,
        rows=tuple(rows),
        total_source=sum(r.n_source for r in rows),
        total_sink=sum(r.n_sink for r in rows),
    )


CONNECTED_AFTER_CUT = "perpendicular-cut-keeps-edges-connected"
FAR_SIDE_ONE_EDGE = "perpendicular-cut-far-side-1-edge"
FAR_SIDE_TWO_EDGES = "perpendicular-cut-far-side-2-edges"


def t_connection_category(mm: MarkedMap) -> str:
    """Where the perpendicular edge sits: cut it and look at the far side.

    Cutting the marked edge either leaves all remaining edges in one
    component (including the case of a pendant perpendicular edge), or
    separates a far component, away from the T-vertex, carrying one or two
    edges.
    """
    if mm.mark.kind != "t":
        raise InvalidMarkError("category applies to saddle-connection marks")
    m = mm.map
    p = mm.mark.dart
    removed = {p, m.alpha[p]}
    remaining = [d for d in range(m.n_darts) if d not in removed]
    if not remaining:
        return CONNECTED_AFTER_CUT

    def sigma_skip(d):
        nxt = m.sigma[d]
        while nxt in removed:
            nxt = m.sigma[nxt]
        return nxt

    far_vertex = m.vertex_of(m.alpha[p])
    far_darts = [d for d in m.vertex_orbits[far_vertex] if d not in removed]
    if not far_darts:
        return CONNECTED_AFTER_CUT
    seen = {far_darts[0]}
    stack = [far_darts[0]]
    while stack:
        d = stack.pop()
        for x in (sigma_skip(d), m.alpha[d]):
            if x not in seen:
                seen.add(x)
                stack.append(x)
    if len(seen) == len(remaining):
        return CONNECTED_AFTER_CUT
    far_edges = len(seen) // 2
    return FAR_SIDE_ONE_EDGE if far_edges == 1 else FAR_SIDE_TWO_EDGES


@dataclass(frozen=True)
class SaddleConnectionCensus:
    """Class counts of saddle-connection flows with a given saddle count."""

    n_saddles: int
    singular_points: int
    total: int
    by_category: dict = field(compare=False)


def saddle_connection_census(n_saddles: int, *, allow_reflection: bool = True,
                             jobs: int = 1) -> SaddleConnectionCensus:
    classes = enumerate_t_marks(n_saddles, allow_reflection=allow_reflection,
                                jobs=jobs)
    by_category = {CONNECTED_AFTER_CUT: 0, FAR_SIDE_ONE_EDGE: 0,
                   FAR_SIDE_TWO_EDGES: 0}
    for mm in classes:
        by_category[t_connection_category(mm)] += 1
    return SaddleConnectionCensus(
        n_saddles=n_saddles,
        singular_points=2 * n_saddles + 2,
        total=len(classes),
        by_category=by_category,
    )
