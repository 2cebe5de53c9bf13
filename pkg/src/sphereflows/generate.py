"""Isomorph-free generation of connected spherical maps with 1..5 edges.

Two strategies produce the identical catalog:

* ``brute`` -- the reference: alpha fixed in pair normal form, every
  permutation of the darts tried as sigma, invalid rotation systems
  filtered, survivors deduplicated by canonical code.
* ``grow`` -- the default: maps with E edges are built from maps with E-1
  edges by inserting an edge between two corners of a common face or
  hanging a pendant edge in a corner.  Every connected map has an edge
  that is either non-separating or pendant, so this reaches everything;
  candidates are still validated and deduplicated by canonical code.

The returned representatives are rebuilt from their canonical codes, so the
output is byte-identical across strategies, run order and worker counts.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import islice, permutations

from .combmap import (CanonicalCode, CombinatorialMap, MapMark,
                      canonical_code_for, normal_alpha, perm_orbits)

MIN_EDGES = 1
MAX_EDGES = 5


class EdgeCountOutOfRangeError(ValueError):
    """Edge count outside the supported range 1..5."""


@dataclass(frozen=True)
class GenerationConfig:
    """Parameters of a generation run.

    ``jobs`` is a worker-count hint; results do not depend on it.
    """

    n_edges: int
    allow_reflection: bool = True
    jobs: int = 1

    def __post_init__(self):
        if not (MIN_EDGES <= self.n_edges <= MAX_EDGES):
            raise EdgeCountOutOfRangeError(
                f"n_edges must be in {MIN_EDGES}..{MAX_EDGES}, got {self.n_edges}")
        if self.jobs < 1:
            raise ValueError("jobs must be >= 1")


def _sigma_is_valid(sigma, alpha) -> bool:
    """Connected and spherical; alpha is a normal-form involution here."""
    n = len(sigma)
    seen = bytearray(n)
    stack = [0]
    seen[0] = 1
    count = 1
    while stack:
        d = stack.pop()
        for x in (sigma[d], alpha[d]):
            if not seen[x]:
                seen[x] = 1
                count += 1
                stack.append(x)
    if count != n:
        return False
    v = len(perm_orbits(sigma))
    phi = tuple(sigma[alpha[d]] for d in range(n))
    f = len(perm_orbits(phi))
    return v - n // 2 + f == 2


def _brute_chunk(n_edges: int, allow_reflection: bool, start: int, stop: int):
    alpha = normal_alpha(n_edges)
    codes = set()
    for sigma in islice(permutations(range(2 * n_edges)), start, stop):
        if _sigma_is_valid(sigma, alpha):
            codes.add(canonical_code_for(sigma, alpha, None, allow_reflection))
    return codes


def _child_sigmas(m: CombinatorialMap):
    """All ways to add one edge to ``m`` (new darts appended at the end).

    The corner after dart ``c`` means the gap between ``c`` and ``sigma(c)``
    at the source vertex of ``c``.
    """
    n = m.n_darts
    sigma = m.sigma
    x, y = n, n + 1
    darts = range(n)
    for c1 in darts:
        # pendant edge in the corner after c1
        s = list(sigma) + [0, y]
        s[c1], s[x] = x, sigma[c1]
        yield tuple(s)
        for c2 in darts:
            if c1 == c2:
                # both ends of a loop in one corner, both nestings
                s = list(sigma) + [y, sigma[c1]]
                s[c1] = x
                yield tuple(s)
                s = list(sigma) + [sigma[c1], x]
                s[c1] = y
                yield tuple(s)
            else:
                s = list(sigma) + [sigma[c1], sigma[c2]]
                s[c1], s[c2] = x, y
                yield tuple(s)


def _grow_chunk(parent_tokens, allow_reflection: bool):
    codes = set()
    for token in parent_tokens:
        parent = CanonicalCode.from_token(token).to_map()
        alpha = normal_alpha(parent.n_edges + 1)
        for sigma in _child_sigmas(parent):
            if _sigma_is_valid(sigma, alpha):
                codes.add(canonical_code_for(sigma, alpha, None, allow_reflection))
    return codes


def _chunked(items, n_chunks):
    items = list(items)
    size = max(1, math.ceil(len(items) / n_chunks))
    return [items[i:i + size] for i in range(0, len(items), size)]


def _run_sharded(worker, arg_chunks, jobs):
    if jobs <= 1 or len(arg_chunks) <= 1:
        results = [worker(*args) for args in arg_chunks]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(worker, *zip(*arg_chunks)))
    merged = set()
    for r in results:
        merged |= r
    return merged


_cache = {}


def generate_maps(cfg: GenerationConfig, strategy: str = "auto"):
    """All connected spherical maps with ``cfg.n_edges`` edges, one per class.

    The list is sorted by canonical code and deterministic across runs,
    strategies and worker counts.
    """
    if strategy == "auto":
        strategy = "grow"
    if strategy not in ("brute", "grow"):
        raise ValueError(f"unknown strategy {strategy!r}")
    key = (cfg.n_edges, cfg.allow_reflection, strategy)
    if key not in _cache:
        if strategy == "brute":
            total = math.factorial(2 * cfg.n_edges)
            n_chunks = 1 if cfg.jobs <= 1 else cfg.jobs * 4
            bounds = [(total * i // n_chunks, total * (i + 1) // n_chunks)
                      for i in range(n_chunks)]
            chunks = [(cfg.n_edges, cfg.allow_reflection, lo, hi)
                      for lo, hi in bounds]
            codes = _run_sharded(_brute_chunk, chunks, cfg.jobs)
        elif cfg.n_edges == 1:
            segment = CombinatorialMap((0, 1))
            loop = CombinatorialMap((1, 0))
            codes = {m.canonical_code(allow_reflection=cfg.allow_reflection)
                     for m in (segment, loop)}
        else:
            parents = generate_maps(
                GenerationConfig(cfg.n_edges - 1, cfg.allow_reflection, cfg.jobs),
                strategy="grow")
            tokens = [m.canonical_code(allow_reflection=cfg.allow_reflection).token()
                      for m in parents]
            n_chunks = 1 if cfg.jobs <= 1 else min(len(tokens), cfg.jobs * 4)
            chunks = [(chunk, cfg.allow_reflection)
                      for chunk in _chunked(tokens, n_chunks)]
            codes = _run_sharded(_grow_chunk, chunks, cfg.jobs)
        _cache[key] = tuple(code.to_map() for code in sorted(codes))
    return list(_cache[key])


@dataclass(frozen=True)
class VertexSelection(MapMark):
    """A pseudo-mark distinguishing a vertex orbit, for pair deduplication."""

    darts: tuple
    kind = "vertex"

    def check_on(self, m):
        if any(not 0 <= d < m.n_darts for d in self.darts):
            raise ValueError("vertex selection outside the dart range")

    def trace_value(self, labels, alpha, reflected):
        return min(labels[d] for d in self.darts)


def generate_maps_with_degree3_vertex(cfg: GenerationConfig, strategy: str = "auto"):
    """Pairs (map, degree-3 vertex orbit) with no loop at the vertex.

    One representative per equivalence class of the pair, ordered by the
    pair's canonical code.  These are the places a T-vertex can sit.
    """
    pairs = {}
    for m in generate_maps(cfg, strategy):
        for orbit in m.vertex_orbits:
            if len(orbit) != 3:
                continue
            if any(m.alpha[d] in orbit for d in orbit):
                continue
            code = m.canonical_code(VertexSelection(tuple(sorted(orbit))),
                                    allow_reflection=cfg.allow_reflection)
            pairs.setdefault(code, (m, orbit))
    return [pairs[code] for code in sorted(pairs)]
