"""Catalogs, the census comparison report, and file exports.

Catalog files are single JSON documents with a schema version and entries
sorted by canonical code token, so they are stable, diffable artifacts.
The census report compares every computed class count with the value stated
in the published classification and never asserts: disagreements are
reported with per-category deltas and explanatory notes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from typing import Optional

from .combmap import CanonicalCode, CombinatorialMap
from .generate import GenerationConfig, generate_maps
from .marks import (CONNECTED_AFTER_CUT, FAR_SIDE_ONE_EDGE,
                    FAR_SIDE_TWO_EDGES, MAX_SADDLES, MarkedMap,
                    SN_MIN_SADDLES, SaddleCountOutOfRangeError,
                    enumerate_sink_marks, enumerate_source_marks,
                    enumerate_t_marks, marked_map_from_code,
                    saddle_connection_census, saddle_node_census)
from .realize import realize

SCHEMA_VERSION = 1

# class counts stated by the published census (conclusion table plus the
# nine- and ten-point sub-breakdowns); keys of the flow table are numbers of
# singular points
PAPER_EXPECTED_MAPS = {1: 2, 2: 4, 3: 14, 4: 38}
PAPER_EXPECTED_FLOWS = {3: 2, 4: 0, 5: 10, 6: 4, 7: 56, 8: 20, 9: 217, 10: 160}
PAPER_EXPECTED_SN4 = {"high_vertex_source": 64, "three_vertex_source": 89}
PAPER_EXPECTED_SC4 = {CONNECTED_AFTER_CUT: 130, FAR_SIDE_TWO_EDGES: 16,
                      FAR_SIDE_ONE_EDGE: 14}


class UnknownCodeError(KeyError):
    """A code token does not resolve in the given catalog."""


class UnsupportedFormatError(ValueError):
    """An export format outside json / dot / diagram-json."""


class InternalInvariantError(RuntimeError):
    """An enumerated object failed its own structural checks."""


def load_paper_labels() -> dict:
    """The hand-curated map from code tokens to published names."""
    text = resources.files("sphereflows.data").joinpath(
        "paper_labels.json").read_text()
    return json.loads(text)["labels"]


@dataclass(frozen=True)
class CatalogEntry:
    code: str
    n_edges: int
    n_vertices: int
    n_faces: int
    degree_sequence: tuple
    mark: Optional[dict] = None
    singular_points: dict = field(default_factory=dict)
    paper_label: Optional[str] = None

    def to_dict(self) -> dict:
        return {
            "code": self.code,
            "n_edges": self.n_edges,
            "n_vertices": self.n_vertices,
            "n_faces": self.n_faces,
            "degree_sequence": list(self.degree_sequence),
            "mark": dict(self.mark) if self.mark else None,
            "singular_points": dict(self.singular_points),
            "paper_label": self.paper_label,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CatalogEntry":
        return cls(
            code=d["code"],
            n_edges=d["n_edges"],
            n_vertices=d["n_vertices"],
            n_faces=d["n_faces"],
            degree_sequence=tuple(d["degree_sequence"]),
            mark=dict(d["mark"]) if d.get("mark") else None,
            singular_points=dict(d["singular_points"]),
            paper_label=d.get("paper_label"),
        )


def entry_for_map(m: CombinatorialMap, labels: Optional[dict] = None,
                  allow_reflection: bool = True) -> CatalogEntry:
    """Catalog entry of an unmarked map; the point summary is its Morse flow."""
    code = m.canonical_code(allow_reflection=allow_reflection).token()
    labels = load_paper_labels() if labels is None else labels
    return CatalogEntry(
        code=code,
        n_edges=m.n_edges,
        n_vertices=m.n_vertices,
        n_faces=m.n_faces,
        degree_sequence=m.degree_sequence(),
        mark=None,
        singular_points={"source": m.n_vertices, "saddle": m.n_edges,
                         "sink": m.n_faces},
        paper_label=labels.get(code),
    )


def entry_for_marked(mm: MarkedMap, labels: Optional[dict] = None,
                     allow_reflection: bool = True) -> CatalogEntry:
    code_obj = mm.canonical_code(allow_reflection)
    diagram = realize(mm)
    issues = diagram.check()
    if issues or diagram.n_points != mm.n_singular_points:
        raise InternalInvariantError(
            f"diagram of {code_obj.token()} violates invariants: {issues}")
    labels = load_paper_labels() if labels is None else labels
    kind, label = code_obj.mark
    return CatalogEntry(
        code=code_obj.token(),
        n_edges=mm.map.n_edges,
        n_vertices=mm.map.n_vertices,
        n_faces=mm.map.n_faces,
        degree_sequence=mm.map.degree_sequence(),
        mark={"kind": kind, "dart": label},
        singular_points=diagram.point_counts(),
        paper_label=labels.get(code_obj.token()),
    )


@dataclass(frozen=True)
class Catalog:
    kind: str
    params: dict
    entries: tuple

    def to_json_doc(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "catalog": self.kind,
            "params": dict(self.params),
            "entries": [e.to_dict() for e in self.entries],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json_doc(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json_doc(cls, doc: dict) -> "Catalog":
        return cls(
            kind=doc["catalog"],
            params=dict(doc["params"]),
            entries=tuple(CatalogEntry.from_dict(d) for d in doc["entries"]),
        )

    @classmethod
    def loads(cls, text: str) -> "Catalog":
        return cls.from_json_doc(json.loads(text))

    def entry(self, code: str) -> CatalogEntry:
        for e in self.entries:
            if e.code == code:
                return e
        raise UnknownCodeError(code)


def build_map_catalog(cfg: GenerationConfig, strategy: str = "auto") -> Catalog:
    labels = load_paper_labels()
    entries = [entry_for_map(m, labels, cfg.allow_reflection)
               for m in generate_maps(cfg, strategy)]
    return Catalog(
        kind="maps",
        params={"n_edges": cfg.n_edges, "allow_reflection": cfg.allow_reflection},
        entries=tuple(entries),
    )


def build_bifurcation_catalog(kind: str, n_saddles: int,
                              allow_reflection: bool = True,
                              jobs: int = 1) -> Catalog:
    """Marked-map catalog: both saddle-node kinds together, or T marks."""
    labels = load_paper_labels()
    if kind == "saddle-node":
        if not (SN_MIN_SADDLES <= n_saddles <= MAX_SADDLES):
            raise SaddleCountOutOfRangeError(
                f"saddle-node flows need {SN_MIN_SADDLES}..{MAX_SADDLES} "
                f"saddles, got {n_saddles}")
        classes = []
        for m in generate_maps(GenerationConfig(n_saddles, allow_reflection, jobs)):
            classes.extend(enumerate_source_marks(m, allow_reflection=allow_reflection))
            classes.extend(enumerate_sink_marks(m, allow_reflection=allow_reflection))
    elif kind == "saddle-connection":
        classes = enumerate_t_marks(n_saddles, allow_reflection=allow_reflection,
                                    jobs=jobs)
    else:
        raise ValueError(f"unknown bifurcation kind {kind!r}")
    entries = [entry_for_marked(mm, labels, allow_reflection) for mm in classes]
    entries.sort(key=lambda e: CanonicalCode.from_token(e.code).sort_key)
    return Catalog(
        kind=kind,
        params={"n_saddles": n_saddles, "allow_reflection": allow_reflection},
        entries=tuple(entries),
    )


def resolve_marked(entry: CatalogEntry) -> MarkedMap:
    return marked_map_from_code(CanonicalCode.from_token(entry.code))


# ---------------------------------------------------------------------------
# census report

@dataclass(frozen=True)
class ReportRow:
    section: str
    label: str
    computed: int
    expected: Optional[int] = None
    note: str = ""

    @property
    def match(self) -> Optional[bool]:
        return None if self.expected is None else self.computed == self.expected

    def to_dict(self) -> dict:
        return {"section": self.section, "label": self.label,
                "computed": self.computed, "expected": self.expected,
                "match": self.match, "note": self.note}


@dataclass(frozen=True)
class CensusReport:
    allow_reflection: bool
    rows: tuple
    parity: dict
    notes: tuple

    def to_json_doc(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "catalog": "paper-census",
            "params": {"allow_reflection": self.allow_reflection},
            "rows": [r.to_dict() for r in self.rows],
            "parity": dict(self.parity),
            "notes": list(self.notes),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json_doc(), indent=2, sort_keys=True) + "\n"

    def rows_in(self, section: str):
        return [r for r in self.rows if r.section == section]

    def to_text(self) -> str:
        lines = []
        width = max(len(r.label) for r in self.rows) + 2
        current = None
        for r in self.rows:
            if r.section != current:
                current = r.section
                lines.append("")
                lines.append(f"== {current} ==")
            if r.expected is None:
                status = "computed"
                exp = "-"
            else:
                status = "MATCH" if r.match else f"MISMATCH (delta {r.computed - r.expected:+d})"
                exp = str(r.expected)
            lines.append(f"{r.label:<{width}} computed {r.computed:>4}   "
                         f"published {exp:>4}   {status}")
        lines.append("")
        lines.append("== duality parity check (9 singular points) ==")
        for k, v in self.parity.items():
            lines.append(f"{k}: {v}")
        if self.notes:
            lines.append("")
            lines.append("== notes ==")
            for n in self.notes:
                lines.append(f"- {n}")
        return "\n".join(lines) + "\n"


def build_census_report(allow_reflection: bool = True, jobs: int = 1) -> CensusReport:
    """Run the whole n <= 4 census suite and compare with the published table."""
    rows = []
    notes = []

    map_counts = {}
    for e in range(1, 6):
        maps = generate_maps(GenerationConfig(e, allow_reflection, jobs))
        map_counts[e] = len(maps)
        rows.append(ReportRow("spherical maps", f"{e}-edge maps", len(maps),
                              PAPER_EXPECTED_MAPS.get(e)))
    if map_counts[4] != PAPER_EXPECTED_MAPS[4]:
        notes.append(
            "the four-edge catalog is closed under duality and its rooted count "
            "matches the exact rooted-map enumeration; the published list of "
            "38 four-edge graphs is incomplete")

    sn = {n: saddle_node_census(n, allow_reflection=allow_reflection, jobs=jobs)
          for n in range(1, 5)}
    sc = {n: saddle_connection_census(n, allow_reflection=allow_reflection,
                                      jobs=jobs) for n in range(2, 5)}

    flows = {
        3: ("saddle-node flows, 1 saddle", sn[1].total),
        4: ("flows with four singular points (impossible)", 0),
        5: ("saddle-node flows, 2 saddles", sn[2].total),
        6: ("saddle-connection flows, 2 saddles", sc[2].total),
        7: ("saddle-node flows, 3 saddles", sn[3].total),
        8: ("saddle-connection flows, 3 saddles", sc[3].total),
        9: ("saddle-node flows, 4 saddles", sn[4].total),
        10: ("saddle-connection flows, 4 saddles", sc[4].total),
    }
    for pts in sorted(flows):
        label, computed = flows[pts]
        rows.append(ReportRow("flows by singular points",
                              f"{pts} points: {label}", computed,
                              PAPER_EXPECTED_FLOWS[pts]))

    src_v = sn[4].source_by_vertex_count()
    high = sum(v for k, v in src_v.items() if k >= 4)
    rows.append(ReportRow(
        "9 points breakdown", "source classes on maps with >= 4 vertices",
        high, PAPER_EXPECTED_SN4["high_vertex_source"]))
    rows.append(ReportRow(
        "9 points breakdown", "source classes on maps with 3 vertices",
        src_v.get(3, 0), PAPER_EXPECTED_SN4["three_vertex_source"]))
    rows.append(ReportRow(
        "9 points breakdown", "source classes, all maps", sn[4].total_source))
    rows.append(ReportRow(
        "9 points breakdown", "sink classes, all maps", sn[4].total_sink))
    rows.append(ReportRow(
        "9 points breakdown", "total, flow distinct from its reverse",
        sn[4].total_source + sn[4].total_sink))
    rows.append(ReportRow(
        "9 points breakdown", "total, flow identified with its reverse",
        sn[4].total_source))

    cat_labels = {
        CONNECTED_AFTER_CUT: "perpendicular edge keeps the rest connected",
        FAR_SIDE_TWO_EDGES: "perpendicular edge cuts off two edges",
        FAR_SIDE_ONE_EDGE: "perpendicular edge cuts off one edge",
    }
    for cat in (CONNECTED_AFTER_CUT, FAR_SIDE_TWO_EDGES, FAR_SIDE_ONE_EDGE):
        rows.append(ReportRow("10 points breakdown", cat_labels[cat],
                              sc[4].by_category[cat], PAPER_EXPECTED_SC4[cat]))

    maps4 = generate_maps(GenerationConfig(4, allow_reflection, jobs))
    duality_ok = all(
        len(enumerate_sink_marks(m, allow_reflection=allow_reflection))
        == len(enumerate_source_marks(m.dual(), allow_reflection=allow_reflection))
        for m in maps4)
    parity = {
        "source_classes": sn[4].total_source,
        "sink_classes": sn[4].total_sink,
        "per_map_duality_bijection_verified": duality_ok,
        "n_maps_checked": len(maps4),
    }

    if sn[3].total != PAPER_EXPECTED_FLOWS[7]:
        notes.append(
            f"7 points: computed {sn[3].total} = {sn[3].total_source} source + "
            f"{sn[3].total_sink} sink classes; exhaustive isomorphism search over "
            "the complete three-edge catalog confirms the source count")
    if sc[3].total != PAPER_EXPECTED_FLOWS[8]:
        nonsplit = sc[3].by_category[CONNECTED_AFTER_CUT]
        split = sc[3].total - nonsplit
        notes.append(
            f"8 points: computed {sc[3].total} = {nonsplit} classes whose "
            f"perpendicular edge keeps the rest connected plus {split} "
            "disconnecting classes; the published 20 equals the first category")
    if sn[4].total != PAPER_EXPECTED_FLOWS[9]:
        notes.append(
            "9 points: duality pairs source and sink classes one to one, so the "
            "total is even; the published 217 is odd and unreachable under the "
            "mark-preserving equivalence")
    if sc[4].by_category[FAR_SIDE_TWO_EDGES] == PAPER_EXPECTED_SC4[FAR_SIDE_TWO_EDGES] \
            and sc[4].by_category[FAR_SIDE_ONE_EDGE] == PAPER_EXPECTED_SC4[FAR_SIDE_ONE_EDGE]:
        notes.append(
            "10 points: both disconnecting categories match the published 16 "
            "and 14 exactly; the delta sits in the connected category")

    return CensusReport(allow_reflection=allow_reflection, rows=tuple(rows),
                        parity=parity, notes=tuple(notes))


# ---------------------------------------------------------------------------
# exports

def entry_to_dot(entry: CatalogEntry) -> str:
    """Undirected DOT graph; mark data in the attribute key ``mark``.

    No geometric embedding is implied: nodes are vertex orbits, one edge
    line per map edge.
    """
    code = CanonicalCode.from_token(entry.code)
    if code.mark is None:
        m = code.to_map()
        mark_kind, mark_dart = None, None
    else:
        mm = marked_map_from_code(code)
        m, mark_kind, mark_dart = mm.map, mm.mark.kind, mm.mark.dart
    lines = [f'graph "{entry.code}" {{']
    for i, orbit in enumerate(m.vertex_orbits):
        attrs = f"degree={len(orbit)}"
        if mark_kind == "t" and i == m.vertex_of(mark_dart):
            attrs += ', mark="t-vertex"'
        if mark_kind == "source" and i == m.vertex_of(mark_dart):
            attrs += ', mark="source endpoint"'
        lines.append(f"  v{i} [{attrs}];")
    for e in range(m.n_edges):
        d = 2 * e
        attrs = f"edge={e}"
        if mark_dart is not None and mark_dart in (d, m.alpha[d]):
            if mark_kind == "source":
                attrs += f', mark="source endpoint=v{m.vertex_of(mark_dart)}"'
            elif mark_kind == "sink":
                attrs += f', mark="sink face=f{m.face_of(mark_dart)}"'
            else:
                attrs += f', mark="t perpendicular, vertex=v{m.vertex_of(mark_dart)}"'
        lines.append(f"  v{m.vertex_of(d)} -- v{m.vertex_of(m.alpha[d])} [{attrs}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def diagram_to_dict(mm: MarkedMap) -> dict:
    dia = realize(mm)
    return {
        "points": [{"id": p.id, "kind": p.kind,
                    "origin": {"cell": p.origin[0], "dart": p.origin[1]}}
                   for p in dia.points],
        "separatrices": [{"from": a.source, "to": a.target, "anchor": a.anchor}
                         for a in dia.separatrices],
        "saddle_connection": list(dia.saddle_connection)
        if dia.saddle_connection else None,
    }


def export_entries(entries, fmt: str) -> str:
    """Serialize catalog entries as json, dot or diagram-json text."""
    if fmt == "json":
        doc = [e.to_dict() for e in entries]
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if fmt == "dot":
        return "".join(entry_to_dot(e) for e in entries)
    if fmt == "diagram-json":
        doc = []
        for e in entries:
            if e.mark is None:
                raise UnsupportedFormatError(
                    f"diagram-json needs marked entries; {e.code} has no mark")
            doc.append({"code": e.code, "diagram": diagram_to_dict(resolve_marked(e))})
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    raise UnsupportedFormatError(f"unsupported export format {fmt!r}")
