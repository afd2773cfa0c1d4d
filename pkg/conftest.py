from dataclasses import fields

import pytest

from matroid_circuits import settings
from matroid_circuits.fixtures import c4_two_sum, complete_graph, k4_dsum_k4
from matroid_circuits.matroid import Matroid
from matroid_circuits.tree import GraphicLeaf, f7_matroid, r10_matroid


@pytest.fixture(autouse=True)
def restore_settings():
    # --max-n and load_settings() mutate the shared settings object
    saved = {f.name: getattr(settings, f.name) for f in fields(settings)}
    yield
    for name, value in saved.items():
        setattr(settings, name, value)


@pytest.fixture
def k3():
    return Matroid.from_graph(complete_graph(3, ["a", "b", "c"]), "K3")


@pytest.fixture
def k4_edges():
    return complete_graph(4)


@pytest.fixture
def k4(k4_edges):
    return Matroid.from_graph(k4_edges, "K4")


@pytest.fixture
def k4_leaf(k4_edges):
    return GraphicLeaf(k4_edges)


@pytest.fixture
def c4_tree():
    return c4_two_sum()


@pytest.fixture
def k4_delta_tree():
    return k4_dsum_k4()


@pytest.fixture
def r10():
    return r10_matroid()


@pytest.fixture
def f7():
    return f7_matroid()


@pytest.fixture
def u24():
    # U_{2,4}: not binary
    return Matroid.from_bases("wxyz", [set(p) for p in ("wx", "wy", "wz", "xy", "xz", "yz")], "U24")
