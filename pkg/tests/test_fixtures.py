import pytest

from matroid_circuits.errors import UnknownFixture
from matroid_circuits.fixtures import (
    fixture_names,
    load_fixture,
    random_composite,
    suite_fixtures,
    wheel_edges,
)
from matroid_circuits.matroid import enumerate_bases, same_bases
from matroid_circuits.oracles import kirchhoff_count
from matroid_circuits.tree import CographicLeaf, DeltaSum, GraphicLeaf, R10Leaf, ground_of, recompose, validate_tree


class TestRegistry:
    def test_names(self):
        names = fixture_names(seed=4)
        assert {"r10", "r12", "f7", "c4-2sum", "k4-dsum-k4", "wheel"} <= set(names)
        assert "k7-cographic" in names
        assert names[-1] == "random-composite-4"

    def test_lookup_is_normalized(self):
        fx = load_fixture("  R10 ")
        assert fx.name == "r10"
        assert fx.tree == R10Leaf()
        assert len(enumerate_bases(fx.matroid)) == 162

    @pytest.mark.parametrize("name, bases", [("k4-graphic", 16), ("k4-cographic", 16), ("c4-2sum", 4), ("k4-dsum-k4", 12), ("wheel", 45)])
    def test_basis_counts(self, name, bases):
        fx = load_fixture(name)
        assert len(enumerate_bases(fx.matroid)) == bases
        assert same_bases(recompose(fx.tree), fx.matroid)

    def test_unknown(self):
        with pytest.raises(UnknownFixture, match="try one of: k3-graphic"):
            load_fixture("k9-graphic")

    def test_suite_fixtures(self):
        names = [fx.name for fx in suite_fixtures(10)]
        assert "r12" in names
        assert names[-3:] == ["random-composite-10", "random-composite-11", "random-composite-12"]
        assert all(fx.tree is not None for fx in suite_fixtures(10))


class TestR12:
    def test_split(self):
        tree = load_fixture("r12").tree
        assert isinstance(tree, DeltaSum)
        assert isinstance(tree.left, CographicLeaf)
        assert isinstance(tree.right, GraphicLeaf)
        assert len(ground_of(tree)) == 12

    def test_recomposes(self):
        fx = load_fixture("r12")
        assert same_bases(recompose(fx.tree), fx.matroid)


class TestRandomComposites:
    @pytest.mark.parametrize("seed", range(1, 9))
    def test_valid(self, seed):
        tree = random_composite(seed)
        validate_tree(tree)
        assert all(label.startswith(f"s{seed}") for label in ground_of(tree))

    def test_seeded(self):
        assert random_composite(6) == random_composite(6)


def test_wheel_is_k5_minus_two_edges():
    assert len(wheel_edges()) == 8
    assert kirchhoff_count(wheel_edges()) == 45
