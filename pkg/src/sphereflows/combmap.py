"""Spherical graphs as combinatorial maps (rotation systems).

A map is a pair of permutations of the dart ids ``0..2E-1``: ``sigma`` gives
the counterclockwise successor of a dart around its source vertex, ``alpha``
swaps the two darts of each edge.  Vertices are the orbits of ``sigma``,
edges the orbits of ``alpha`` and faces the orbits of ``phi = sigma∘alpha``
(``phi(d) = sigma(alpha(d))``, the face to the left of ``d``).  A valid map
is connected and satisfies Euler's formula ``V - E + F = 2``, i.e. it
encodes a graph embedded in the 2-sphere up to orientation-preserving
homeomorphism.

Identification up to *all* homeomorphisms (the default everywhere in this
package) additionally quotients by orientation reversal, which on rotation
systems is ``sigma -> sigma^-1``.  Equivalence is decided through canonical
codes: the lexicographic minimum, over all start darts and (if allowed) both
orientations, of a breadth-first relabeling trace.  Codes serialize to the
text token ``E:<n>;s:<...>;a:<...>;m:<kind,label|->`` used as catalog key.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional, Sequence


class InvalidMarkError(ValueError):
    """A mark does not fit the map it is attached to."""


class KindMismatchError(TypeError):
    """Equivalence was asked between objects of different mark kinds."""


# ---------------------------------------------------------------------------
# permutation helpers

def perm_inverse(p: Sequence[int]) -> tuple:
    inv = [0] * len(p)
    for i, v in enumerate(p):
        inv[v] = i
    return tuple(inv)


def perm_orbits(p: Sequence[int]) -> tuple:
    """Orbits of a permutation, each in cycle order starting at its minimum."""
    n = len(p)
    seen = bytearray(n)
    out = []
    for d in range(n):
        if not seen[d]:
            orb = []
            x = d
            while not seen[x]:
                seen[x] = 1
                orb.append(x)
                x = p[x]
            out.append(tuple(orb))
    return tuple(out)


def perm_from_cycles(n: int, cycles: Iterable[Sequence[int]]) -> tuple:
    """Permutation of 0..n-1 from a list of cycles; unlisted points are fixed."""
    p = list(range(n))
    for cyc in cycles:
        for i, d in enumerate(cyc):
            p[d] = cyc[(i + 1) % len(cyc)]
    return tuple(p)


def normal_alpha(n_edges: int) -> tuple:
    """The involution (0 1)(2 3)...(2E-2 2E-1)."""
    return tuple(d + 1 if d % 2 == 0 else d - 1 for d in range(2 * n_edges))


def _is_permutation(p) -> bool:
    n = len(p)
    seen = bytearray(n)
    for v in p:
        if not isinstance(v, int) or v < 0 or v >= n or seen[v]:
            return False
        seen[v] = 1
    return True


def _is_fpf_involution(p) -> bool:
    return all(p[d] != d and p[p[d]] == d for d in range(len(p)))


def _is_transitive(sigma, alpha) -> bool:
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
    return count == n


def renormalize(sigma: Sequence[int], alpha: Sequence[int]):
    """Relabel darts so that alpha becomes the pair normal form.

    Edges are renumbered in order of their first dart.  Returns
    ``(sigma', alpha', relabel)`` where ``relabel[old] = new``.  If alpha is
    not a fixed-point-free involution the input is returned unchanged (the
    map will then fail validation).
    """
    sigma = tuple(sigma)
    alpha = tuple(alpha)
    if not _is_fpf_involution(alpha):
        return sigma, alpha, tuple(range(len(sigma)))
    n = len(sigma)
    relabel = [-1] * n
    nxt = 0
    for d in range(n):
        if relabel[d] < 0:
            relabel[d] = nxt
            relabel[alpha[d]] = nxt + 1
            nxt += 2
    new_sigma = [0] * n
    for d in range(n):
        new_sigma[relabel[d]] = relabel[sigma[d]]
    return tuple(new_sigma), normal_alpha(n // 2), tuple(relabel)


# ---------------------------------------------------------------------------
# validation

@dataclass(frozen=True)
class ValidationResult:
    """Outcome of the three structural checks on a map.

    ``failures`` is a subset of ``{"NotInvolution", "NotConnected",
    "NotSpherical"}`` naming the violated invariants.
    """

    ok: bool
    failures: tuple = ()

    def __bool__(self) -> bool:
        return self.ok


class MapMark:
    """Base class for selections attached to a map.

    Concrete marks live in the :mod:`sphereflows.marks` module.  A mark
    contributes one value to the canonical trace via :meth:`trace_value`
    and says there how it transports under orientation reversal.
    """

    kind = "?"

    def check_on(self, m: "CombinatorialMap") -> None:
        dart = getattr(self, "dart", None)
        if dart is not None and not (0 <= dart < m.n_darts):
            raise InvalidMarkError(
                f"mark dart {dart} outside dart range 0..{m.n_darts - 1}")

    def validate_on(self, m: "CombinatorialMap") -> None:
        """Raise InvalidMarkError unless the mark is legal on ``m``."""

    def trace_value(self, labels, alpha, reflected: bool) -> int:
        raise NotImplementedError


# ---------------------------------------------------------------------------
# canonical codes

_KIND_RANK = {None: 0, "source": 1, "sink": 2, "t": 3, "vertex": 4}


@dataclass(frozen=True)
class CanonicalCode:
    """Total-order key identifying a (marked) map up to homeomorphism.

    ``sigma_images[i]`` and ``alpha_images[i]`` are the canonical labels of
    the rotation successor and edge partner of the dart with label ``i``.
    ``mark`` is ``(kind, label)`` or ``None``.
    """

    n_edges: int
    sigma_images: tuple
    alpha_images: tuple
    mark: Optional[tuple] = None

    @property
    def sort_key(self):
        kind, label = self.mark if self.mark else (None, -1)
        return (self.n_edges, self.sigma_images, self.alpha_images,
                _KIND_RANK[kind], label)

    def __lt__(self, other):
        return self.sort_key < other.sort_key

    def __le__(self, other):
        return self.sort_key <= other.sort_key

    def token(self) -> str:
        """Serialize to the catalog key ``E:..;s:..;a:..;m:..``."""
        s = ",".join(map(str, self.sigma_images))
        a = ",".join(map(str, self.alpha_images))
        m = "-" if self.mark is None else f"{self.mark[0]},{self.mark[1]}"
        return f"E:{self.n_edges};s:{s};a:{a};m:{m}"

    def __str__(self) -> str:
        return self.token()

    @classmethod
    def from_token(cls, token: str) -> "CanonicalCode":
        try:
            fields = dict(part.split(":", 1) for part in token.split(";"))
            n_edges = int(fields["E"])
            sigma = tuple(int(x) for x in fields["s"].split(","))
            alpha = tuple(int(x) for x in fields["a"].split(","))
            mark = None
            if fields["m"] != "-":
                kind, label = fields["m"].split(",")
                mark = (kind, int(label))
        except (KeyError, ValueError) as exc:
            raise ValueError(f"malformed code token: {token!r}") from exc
        return cls(n_edges, sigma, alpha, mark)

    def to_map(self) -> "CombinatorialMap":
        """Rebuild the canonical representative map (unmarked)."""
        return CombinatorialMap(self.sigma_images, self.alpha_images)


def _bfs_trace(sig, alpha, start, n):
    """Breadth-first relabeling from ``start``: returns (labels, trace).

    Labels are assigned in first-visit order; from each labeled dart the
    rotation successor is visited before the edge partner.  The trace lists,
    for labels 0..n-1, the pair (label of successor, label of partner).
    """
    labels = [-1] * n
    labels[start] = 0
    order = [start]
    for d in order:
        s = sig[d]
        if labels[s] < 0:
            labels[s] = len(order)
            order.append(s)
        a = alpha[d]
        if labels[a] < 0:
            labels[a] = len(order)
            order.append(a)
    trace = []
    for d in order:
        trace.append(labels[sig[d]])
        trace.append(labels[alpha[d]])
    return labels, trace


def canonical_code_for(sigma, alpha, mark: Optional[MapMark] = None,
                       allow_reflection: bool = True) -> CanonicalCode:
    """Canonical code of the (marked) map given by raw permutations.

    The code is the lexicographic minimum over all start darts and, with
    ``allow_reflection``, both orientations of the BFS relabeling trace,
    followed by the mark's trace value when a mark is present.
    """
    n = len(sigma)
    orientations = [(False, tuple(sigma))]
    if allow_reflection:
        orientations.append((True, perm_inverse(sigma)))
    best = None
    for reflected, sig in orientations:
        for start in range(n):
            labels, trace = _bfs_trace(sig, alpha, start, n)
            if mark is not None:
                trace.append(mark.trace_value(labels, alpha, reflected))
            trace = tuple(trace)
            if best is None or trace < best:
                best = trace
    if mark is None:
        pairs, mark_field = best, None
    else:
        pairs, mark_field = best[:-1], (mark.kind, best[-1])
    return CanonicalCode(n // 2, pairs[0::2], pairs[1::2], mark_field)


# ---------------------------------------------------------------------------
# the map class

class CombinatorialMap:
    """An embedded spherical graph, immutable after construction.

    ``alpha`` may be any fixed-point-free involution at the boundary; darts
    are relabeled on construction so that it becomes the pair normal form
    ``(0 1)(2 3)...``.  All operations are pure; instances are safe to share
    between threads.

    >>> segment = CombinatorialMap((0, 1), (1, 0))
    >>> loop = CombinatorialMap((1, 0), (1, 0))
    >>> segment.n_vertices, segment.n_faces
    (2, 1)
    >>> loop.n_vertices, loop.n_faces
    (1, 2)
    """

    def __init__(self, sigma: Sequence[int], alpha: Optional[Sequence[int]] = None):
        sigma = tuple(sigma)
        n = len(sigma)
        alpha = normal_alpha(n // 2) if alpha is None else tuple(alpha)
        if n < 2 or n % 2 != 0:
            raise ValueError("a map needs an even number of darts, at least 2")
        if len(alpha) != n:
            raise ValueError("sigma and alpha must permute the same dart set")
        if not _is_permutation(sigma) or not _is_permutation(alpha):
            raise ValueError("sigma and alpha must be permutations of 0..2E-1")
        self._sigma, self._alpha, _ = renormalize(sigma, alpha)
        self._code_cache = {}

    # -- basic data

    @property
    def sigma(self) -> tuple:
        return self._sigma

    @property
    def alpha(self) -> tuple:
        return self._alpha

    @cached_property
    def sigma_inv(self) -> tuple:
        return perm_inverse(self._sigma)

    @property
    def n_darts(self) -> int:
        return len(self._sigma)

    @property
    def n_edges(self) -> int:
        return len(self._sigma) // 2

    def phi(self, d: int) -> int:
        """Face successor: ``sigma(alpha(d))``."""
        return self._sigma[self._alpha[d]]

    # -- validation

    def validate(self) -> ValidationResult:
        """Check involution, connectivity and sphericity; report failures."""
        failures = []
        if not _is_fpf_involution(self._alpha):
            failures.append("NotInvolution")
        if not _is_transitive(self._sigma, self._alpha):
            failures.append("NotConnected")
        phi = tuple(self._sigma[self._alpha[d]] for d in range(self.n_darts))
        euler = (len(perm_orbits(self._sigma)) - self.n_edges
                 + len(perm_orbits(phi)))
        if euler != 2:
            failures.append("NotSpherical")
        return ValidationResult(not failures, tuple(failures))

    def require_valid(self) -> "CombinatorialMap":
        res = self.validate()
        if not res.ok:
            raise ValueError(f"invalid map: {', '.join(res.failures)}")
        return self

    # -- cells

    @cached_property
    def vertex_orbits(self) -> tuple:
        return perm_orbits(self._sigma)

    @cached_property
    def face_orbits(self) -> tuple:
        phi = tuple(self._sigma[self._alpha[d]] for d in range(self.n_darts))
        return perm_orbits(phi)

    @cached_property
    def edge_orbits(self) -> tuple:
        return tuple((2 * e, 2 * e + 1) for e in range(self.n_edges))

    def orbits(self, which: str) -> tuple:
        try:
            return {"vertices": self.vertex_orbits,
                    "edges": self.edge_orbits,
                    "faces": self.face_orbits}[which]
        except KeyError:
            raise ValueError(f"unknown orbit kind {which!r}") from None

    @property
    def n_vertices(self) -> int:
        return len(self.vertex_orbits)

    @property
    def n_faces(self) -> int:
        return len(self.face_orbits)

    @cached_property
    def _vertex_index(self) -> tuple:
        idx = [0] * self.n_darts
        for i, orb in enumerate(self.vertex_orbits):
            for d in orb:
                idx[d] = i
        return tuple(idx)

    @cached_property
    def _face_index(self) -> tuple:
        idx = [0] * self.n_darts
        for i, orb in enumerate(self.face_orbits):
            for d in orb:
                idx[d] = i
        return tuple(idx)

    def vertex_of(self, d: int) -> int:
        """Index into ``vertex_orbits`` of the vertex the dart leaves."""
        return self._vertex_index[d]

    def face_of(self, d: int) -> int:
        """Index into ``face_orbits`` of the face to the left of the dart."""
        return self._face_index[d]

    def is_loop(self, d: int) -> bool:
        """Whether the dart's edge has both ends at the same vertex."""
        return self._vertex_index[d] == self._vertex_index[self._alpha[d]]

    def is_bridge(self, d: int) -> bool:
        """Whether the dart's edge has the same face on both sides."""
        return self._face_index[d] == self._face_index[self._alpha[d]]

    def degree_sequence(self) -> tuple:
        return tuple(sorted((len(o) for o in self.vertex_orbits), reverse=True))

    def face_degree_sequence(self) -> tuple:
        return tuple(sorted((len(o) for o in self.face_orbits), reverse=True))

    # -- derived maps

    def dual(self) -> "CombinatorialMap":
        """The dual map: vertices and faces swap, edges stay.

        With the rotation ``sigma* = sigma∘alpha`` the operation is an exact
        involution on encodings, and dart ids are stable, so marks transport
        by keeping their dart.
        """
        phi = tuple(self._sigma[self._alpha[d]] for d in range(self.n_darts))
        return CombinatorialMap(phi, self._alpha)

    def relabel(self, pi: Sequence[int]) -> "CombinatorialMap":
        """The same map with darts renamed by the permutation ``pi``.

        The constructor renormalizes alpha afterwards, so the final dart
        names are ``pi`` composed with that pair renumbering; use a ``pi``
        that commutes with alpha when dart identities must be tracked
        across the relabeling (marks, for instance).
        """
        if not _is_permutation(tuple(pi)) or len(pi) != self.n_darts:
            raise ValueError("relabeling must be a permutation of the darts")
        n = self.n_darts
        sigma = [0] * n
        alpha = [0] * n
        for d in range(n):
            sigma[pi[d]] = pi[self._sigma[d]]
            alpha[pi[d]] = pi[self._alpha[d]]
        return CombinatorialMap(sigma, alpha)

    def mirror(self) -> "CombinatorialMap":
        """The orientation-reversed map (rotations inverted)."""
        return CombinatorialMap(self.sigma_inv, self._alpha)

    # -- identification

    def canonical_code(self, mark: Optional[MapMark] = None,
                       allow_reflection: bool = True) -> CanonicalCode:
        if mark is not None:
            mark.check_on(self)
        key = (mark, allow_reflection)
        code = self._code_cache.get(key)
        if code is None:
            code = canonical_code_for(self._sigma, self._alpha, mark,
                                      allow_reflection)
            self._code_cache[key] = code
        return code

    # -- dunder

    def __eq__(self, other):
        return (isinstance(other, CombinatorialMap)
                and self._sigma == other._sigma and self._alpha == other._alpha)

    def __hash__(self):
        return hash((self._sigma, self._alpha))

    def __repr__(self):
        cycles = "".join("(" + " ".join(map(str, orb)) + ")"
                         for orb in self.vertex_orbits)
        return f"CombinatorialMap({cycles!r}, edges={self.n_edges})"


def are_equivalent(a, b, *, allow_reflection: bool = True) -> bool:
    """Whether two maps, or two marked maps, are topologically equivalent.

    Marked and unmarked objects never compare, nor do marks of different
    kinds; such a comparison raises :class:`KindMismatchError`.
    """
    mark_a = getattr(getattr(a, "mark", None), "kind", None)
    mark_b = getattr(getattr(b, "mark", None), "kind", None)
    if mark_a != mark_b:
        raise KindMismatchError(
            f"cannot compare mark kind {mark_a!r} with {mark_b!r}")
    return (a.canonical_code(allow_reflection=allow_reflection)
            == b.canonical_code(allow_reflection=allow_reflection))
