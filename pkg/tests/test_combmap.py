import random

import pytest

from sphereflows import (CanonicalCode, CombinatorialMap, GenerationConfig,
                         InvalidMarkError, KindMismatchError, MarkedMap,
                         SinkMark, SourceMark, are_equivalent, generate_maps)
from sphereflows.combmap import normal_alpha

from oracles import maps_isomorphic


def all_maps(max_edges=3, reflection=True):
    out = []
    for e in range(1, max_edges + 1):
        out.extend(generate_maps(GenerationConfig(e, reflection)))
    return out


class TestValidation:
    def test_segment_is_valid(self):
        m = CombinatorialMap((0, 1), (1, 0))
        assert m.validate().ok
        assert (m.n_vertices, m.n_faces) == (2, 1)

    def test_loop_is_valid(self):
        m = CombinatorialMap((1, 0), (1, 0))
        assert m.validate().ok
        assert (m.n_vertices, m.n_faces) == (1, 2)

    def test_two_disjoint_segments_not_connected(self):
        res = CombinatorialMap((0, 1, 2, 3), (1, 0, 3, 2)).validate()
        assert not res.ok
        assert "NotConnected" in res.failures

    def test_interleaved_loops_not_spherical(self):
        # two loops at one vertex with alternating rotation close up a torus
        res = CombinatorialMap((2, 3, 1, 0), (1, 0, 3, 2)).validate()
        assert not res.ok
        assert "NotSpherical" in res.failures

    def test_alpha_with_fixed_point_reports_not_involution(self):
        res = CombinatorialMap((1, 0), (0, 1)).validate()
        assert "NotInvolution" in res.failures

    def test_non_permutation_rejected(self):
        with pytest.raises(ValueError):
            CombinatorialMap((0, 0), (1, 0))

    def test_zero_edges_rejected(self):
        with pytest.raises(ValueError):
            CombinatorialMap((), ())


class TestOrbits:
    def test_loop_orbits(self):
        loop = CombinatorialMap((1, 0))
        assert loop.orbits("vertices") == ((0, 1),)
        assert loop.orbits("faces") == ((0,), (1,))

    def test_segment_orbits(self):
        seg = CombinatorialMap((0, 1))
        assert seg.orbits("vertices") == ((0,), (1,))
        assert seg.orbits("faces") == ((0, 1),)

    def test_theta_has_three_faces(self, named):
        assert named["theta"].n_faces == 3

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            CombinatorialMap((0, 1)).orbits("corners")

    @pytest.mark.parametrize("e", [1, 2, 3, 4])
    def test_orbit_partition_and_euler(self, e):
        for m in generate_maps(GenerationConfig(e)):
            darts = sorted(d for orb in m.vertex_orbits for d in orb)
            assert darts == list(range(m.n_darts))
            assert m.n_vertices + m.n_faces == m.n_edges + 2

    def test_faces_are_phi_orbits(self, named):
        for m in named.values():
            for orbit in m.face_orbits:
                assert all(m.phi(d) in orbit for d in orbit)
                assert m.face_of(m.phi(orbit[0])) == m.face_of(orbit[0])


class TestDual:
    def test_segment_loop_duality(self, named):
        assert are_equivalent(named["segment"].dual(), named["loop"])
        assert are_equivalent(named["loop"].dual(), named["segment"])

    def test_dual_is_exact_involution(self):
        for m in all_maps(3):
            assert m.dual().dual() == m

    def test_dual_swaps_counts(self):
        for m in all_maps(3):
            d = m.dual()
            assert (d.n_vertices, d.n_faces) == (m.n_faces, m.n_vertices)
            assert d.n_edges == m.n_edges

    def test_dual_degrees_are_face_degrees(self):
        for m in generate_maps(GenerationConfig(4)):
            assert m.dual().degree_sequence() == m.face_degree_sequence()


class TestCanonicalCode:
    def test_segment_loop_codes_differ(self, named):
        assert named["segment"].canonical_code() != named["loop"].canonical_code()

    def test_two_edge_codes_distinct(self):
        codes = {m.canonical_code().token()
                 for m in generate_maps(GenerationConfig(2))}
        assert len(codes) == 4

    def test_relabel_invariance(self):
        rng = random.Random(7)
        for m in all_maps(3):
            pi = list(range(m.n_darts))
            for _ in range(5):
                rng.shuffle(pi)
                assert m.relabel(pi).canonical_code() == m.canonical_code()

    def test_scrambled_alpha_is_renormalized(self):
        # a valid 3-edge map with edges paired as (0,3)(1,4)(2,5)
        m = CombinatorialMap((1, 2, 0, 5, 4, 3), (3, 4, 5, 0, 1, 2))
        assert m.alpha == normal_alpha(3)
        assert m.validate().ok
        assert sum(are_equivalent(m, other) for other in all_maps(3)) == 1

    def test_token_round_trip(self):
        for m in all_maps(3):
            code = m.canonical_code()
            assert CanonicalCode.from_token(code.token()) == code
            assert code.to_map().canonical_code() == code

    def test_marked_token_round_trip(self, named):
        mm = MarkedMap(named["chain2"], SourceMark(1))
        code = mm.canonical_code()
        parsed = CanonicalCode.from_token(code.token())
        assert parsed == code
        assert parsed.mark[0] == "source"

    def test_malformed_token(self):
        with pytest.raises(ValueError):
            CanonicalCode.from_token("E:1;bogus")

    def test_invalid_mark_dart(self, named):
        with pytest.raises(InvalidMarkError):
            named["segment"].canonical_code(SourceMark(5))

    def test_mirror_equivalent_by_default(self):
        for e in (1, 2, 3, 4):
            for m in generate_maps(GenerationConfig(e)):
                assert are_equivalent(m, m.mirror())

    def test_reflection_flag_can_distinguish(self):
        # chiral maps first appear at four edges
        sensed = generate_maps(GenerationConfig(4, allow_reflection=False))
        unsensed = generate_maps(GenerationConfig(4))
        assert len(sensed) > len(unsensed)
        chiral = [m for m in sensed
                  if not are_equivalent(m, m.mirror(), allow_reflection=False)]
        assert chiral
        assert all(are_equivalent(m, m.mirror()) for m in chiral)


class TestAreEquivalent:
    def test_reflexive(self):
        for m in all_maps(2):
            assert are_equivalent(m, m)

    def test_chain_vs_segment_loop(self, named):
        assert not are_equivalent(named["chain2"], named["segment_loop"])

    def test_kind_mismatch_marked_vs_plain(self, named):
        mm = MarkedMap(named["chain2"], SourceMark(0))
        with pytest.raises(KindMismatchError):
            are_equivalent(mm, named["chain2"])

    def test_kind_mismatch_source_vs_sink(self, named):
        a = MarkedMap(named["segment_loop"], SourceMark(0))
        b = MarkedMap(named["segment_loop"], SinkMark(2))
        with pytest.raises(KindMismatchError):
            are_equivalent(a, b)


class TestCompleteInvariant:
    """Code equality must coincide with exhaustive isomorphism search."""

    @pytest.mark.parametrize("e", [1, 2, 3])
    def test_catalog_pairwise(self, e):
        maps = generate_maps(GenerationConfig(e))
        for i, a in enumerate(maps):
            for b in maps[i:]:
                expected = maps_isomorphic(a, b)
                got = are_equivalent(a, b)
                assert got == expected
                assert got == (a is b)

    def test_random_relabels_against_oracle(self):
        rng = random.Random(11)
        for m in generate_maps(GenerationConfig(2)):
            pi = list(range(m.n_darts))
            for _ in range(3):
                rng.shuffle(pi)
                other = m.relabel(pi)
                assert maps_isomorphic(m, other)
                assert are_equivalent(m, other)
