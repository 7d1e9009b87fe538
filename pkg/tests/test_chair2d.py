import copy

import numpy as np
import pytest

from tilehull.chair2d import (
    LETTERS,
    BlockSubstitution,
    Patch2D,
    block_substitution_from_config,
    chair_consistency,
    check_rotation_equivariance,
    export_region,
    generate_region,
    is_power_of_two,
    is_primitive,
    occurrences_2d,
    return_lattice,
    supertile_patch_2d,
)
from tilehull.config import read_json
from tilehull.errors import ChairRuleError, IllegalPatchError


@pytest.fixture(scope="module")
def chair_data() -> dict:
    data, _ = read_json("chair")
    return data


@pytest.fixture(scope="module")
def chair(chair_data) -> BlockSubstitution:
    return block_substitution_from_config(chair_data)


def test_bundled_rule_is_valid(chair):
    assert check_rotation_equivariance(chair.rule) == []
    assert is_primitive(chair)
    assert chair.abelianization.column(LETTERS.index("NE")) == (2, 1, 0, 1)


def test_region_sizes(chair):
    assert generate_region(chair, "NE", 0).tolist() == [[LETTERS.index("NE")]]
    assert generate_region(chair, "SW", 5).shape == (32, 32)


def test_aligned_blocks_are_images(chair):
    parent = generate_region(chair, "NE", 2)
    child = generate_region(chair, "NE", 3)
    for i in range(4):
        for j in range(4):
            want = chair.block(LETTERS[parent[i, j]])
            assert np.array_equal(child[2 * i:2 * i + 2, 2 * j:2 * j + 2], want)


@pytest.mark.parametrize("n", [4, 8])
def test_regions_are_chair_consistent(chair, n):
    report = chair_consistency(generate_region(chair, "NE", n))
    assert report.ok, report.diagnostics()
    assert report.triominoes > 0


def test_inconsistent_region_is_reported():
    region = np.full((4, 4), LETTERS.index("SE"), dtype=np.int8)
    report = chair_consistency(region)
    assert not report.ok
    assert any("incoming arrows" in line for line in report.diagnostics())


def test_rotation_diagnostics(chair_data):
    bad = copy.deepcopy(chair_data)
    bad["rule"]["NW"]["NE"] = "SE"
    with pytest.raises(ChairRuleError) as exc:
        block_substitution_from_config(bad)
    assert any(line.startswith("rotation") for line in exc.value.diagnostics)


def test_malformed_rules(chair_data):
    with pytest.raises(ChairRuleError):
        block_substitution_from_config({"rule": {"NE": {}}})
    with pytest.raises(ChairRuleError):
        block_substitution_from_config({"letters": ["N", "S"], "rule": chair_data["rule"]})
    with pytest.raises(ChairRuleError):
        block_substitution_from_config({"name": "chair"})


def test_single_arrows_give_rank_two(chair):
    for x in LETTERS:
        rep = return_lattice(chair, Patch2D.from_rows([[x]]), 6)
        assert rep.rank == 2


@pytest.mark.parametrize("k", [1, 2])
def test_supertile_indices_are_powers_of_two(chair, k):
    for x in LETTERS:
        rep = return_lattice(chair, supertile_patch_2d(chair, x, k), 8)
        assert rep.rank == 2
        assert is_power_of_two(rep.index)


def test_missing_patch(chair):
    with pytest.raises(IllegalPatchError):
        return_lattice(chair, supertile_patch_2d(chair, "NE", 2), 1)


def test_masked_occurrences(chair):
    region = generate_region(chair, "NE", 3)
    full = occurrences_2d(region, Patch2D.from_rows([[LETTERS[region[0, 0]]]]))
    corner = Patch2D.from_cells({(0, 0): LETTERS[region[0, 0]], (1, 1): LETTERS[region[1, 1]]})
    assert corner.describe().count(".") == 2
    hits = occurrences_2d(region, corner)
    assert [0, 0] in hits.tolist()
    assert len(hits) <= len(full)


def test_export_region(chair):
    text = export_region(generate_region(chair, "NE", 2))
    lines = text.splitlines()
    assert len(lines) == 4 and all(len(line) == 4 for line in lines)


def test_is_power_of_two():
    assert is_power_of_two(1) and is_power_of_two(64)
    assert not is_power_of_two(12)
    assert not is_power_of_two(None)
