import pytest

from sphereflows import CombinatorialMap, perm_from_cycles


def build_named_maps():
    """The hand-built graphs named in the published census, by description."""
    maps = {
        "segment": CombinatorialMap((0, 1)),
        "loop": CombinatorialMap((1, 0)),
        "double_edge": CombinatorialMap((2, 3, 0, 1)),
        "chain2": CombinatorialMap((0, 2, 1, 3)),
        "segment_loop": CombinatorialMap((0, 2, 3, 1)),
        "two_loops": CombinatorialMap((1, 2, 3, 0)),
        "chain3": CombinatorialMap((0, 2, 1, 4, 3, 5)),
        "star3": CombinatorialMap((2, 1, 4, 3, 0, 5)),
        "triangle": CombinatorialMap(perm_from_cycles(6, [(0, 5), (1, 2), (3, 4)])),
        "chain_end_loop": CombinatorialMap((0, 2, 1, 4, 5, 3)),
        "bigon_tail": CombinatorialMap(perm_from_cycles(6, [(0, 2), (1, 3, 4)])),
        "midloop_lobe": CombinatorialMap(perm_from_cycles(6, [(4, 5, 1, 2)])),
        "midloop_split": CombinatorialMap(perm_from_cycles(6, [(4, 1, 5, 2)])),
    }
    maps["theta"] = maps["triangle"].dual()
    for name, m in maps.items():
        assert m.validate().ok, name
    return maps


@pytest.fixture(scope="session")
def named():
    return build_named_maps()
