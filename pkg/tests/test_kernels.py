import importlib

import pytest

from homopoly import _kernels_py, kernels
from homopoly.graphs import enumerate_graphs, find_homomorphism, make_family

BACKENDS = [_kernels_py]
try:
    BACKENDS.append(importlib.import_module("homopoly._kernels"))
except ImportError:  # extension not built: only the fallback is tested
    pass

TARGETS = [make_family("edge"), make_family("complete", 3), make_family("cycle", 5),
           make_family("single_looped_vertex"), make_family("edgeless", 2), make_family("path", 3)]


@pytest.fixture(params=BACKENDS, ids=lambda m: m.__name__.rsplit(".", 1)[-1])
def backend(request):
    return request.param


@pytest.mark.parametrize("H", TARGETS, ids=str)
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_hom_indicator_matches_backtracking(backend, H, n):
    got = backend.hom_indicator(n, H.adjacency_masks())
    want = [int(find_homomorphism(G, H) is not None) for G in enumerate_graphs(n)]
    assert list(got) == want


def test_component_indicator_small(backend):
    # n = 3, mask order: bit 2 = {1,2}, bit 1 = {1,3}, bit 0 = {2,3}
    bip = list(backend.component_indicator(3, 0))
    clique = list(backend.component_indicator(3, 1))
    assert bip[0] == kernels.EMPTY and clique[0] == kernels.EMPTY
    assert bip[0b111] == 0 and clique[0b111] == 1
    assert bip[0b110] == 1 and clique[0b110] == 0


def test_backends_agree_at_n5():
    if len(BACKENDS) < 2:
        pytest.skip("compiled extension not built")
    py, cy = BACKENDS
    for H in TARGETS:
        assert bytes(py.hom_indicator(5, H.adjacency_masks())) == bytes(cy.hom_indicator(5, H.adjacency_masks()))
    for kind in (0, 1):
        assert bytes(py.component_indicator(5, kind)) == bytes(cy.component_indicator(5, kind))


def test_backend_is_reported():
    assert kernels.BACKEND in ("compiled", "python")
