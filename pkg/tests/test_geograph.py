import json
import math

import numpy as np
import pytest

from geomod import (DegenerateGraph, Domain, InvalidArgument, Kernel, UniformDensity,
                    build_graph, s_alpha, sample)
from geomod.domain import SampleCloud
from geomod.geograph import brute_force_weights

import oracles


def _cloud(points, lo=-5.0, hi=5.0):
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    dom = Domain.box([lo] * pts.shape[1], [hi] * pts.shape[1])
    return SampleCloud(pts, dom, UniformDensity(dom), 0)


def test_far_pair_has_no_edge():
    g = build_graph(_cloud([[0.0, 0.0], [1.5, 0.0]]), Kernel("indicator", 2), 1.0)
    assert g.nnz == 0 and g.two_m == 0.0


def test_three_point_example(three_points):
    W = three_points.dense()
    assert W[0, 1] == 0.5 and W[1, 2] == 0.5 and W[0, 2] == 0.0
    assert np.array_equal(three_points.degrees, [0.5, 1.0, 0.5])
    assert three_points.two_m == 2.0


def test_s_alpha_examples(three_points):
    g = three_points
    assert s_alpha(g, 0.0) == 3
    assert s_alpha(g, 1.0) == g.two_m
    assert s_alpha(g, 2.0) == pytest.approx(1.5, abs=1e-15)


def test_s_alpha_isolated_vertex():
    g = build_graph(_cloud([[0.0], [0.5], [3.0]]), Kernel("indicator", 1), 1.0)
    assert s_alpha(g, 0.0) == 3
    assert s_alpha(g, 1.0) == 1.0
    with pytest.raises(DegenerateGraph):
        s_alpha(g, -1.0)


def test_rejects_bad_eps():
    with pytest.raises(InvalidArgument):
        build_graph(_cloud([[0.0], [0.5]]), Kernel("indicator", 1), 0.0)


def test_against_literal_construction():
    dom = Domain.box([0, 0], [1, 1])
    cloud = sample(dom, UniformDensity(dom), 200, 4)
    eps = 0.15
    g = build_graph(cloud, Kernel("indicator", 2), eps)
    ref = oracles.indicator_weights(cloud.points, eps)
    W = g.dense()
    assert np.array_equal(W > 0, ref > 0)
    assert np.allclose(W, ref, rtol=1e-14, atol=0)
    assert sorted(W[W > 0]) == pytest.approx(sorted(ref[ref > 0]), rel=1e-14)


@pytest.mark.parametrize("seed", range(20))
def test_grid_equals_brute_force(seed):
    rng = np.random.default_rng(seed)
    d = int(rng.integers(1, 4))
    n = int(rng.integers(2, 501))
    prof = ["indicator", "cone", "epanechnikov"][seed % 3]
    dom = Domain.box([0.0] * d, list(rng.uniform(0.5, 2.0, d)))
    cloud = sample(dom, UniformDensity(dom), n, seed)
    eps = float(rng.uniform(0.05, 0.6))
    k = Kernel(prof, d)
    g = build_graph(cloud, k, eps)
    assert np.array_equal(g.dense(), brute_force_weights(cloud, k, eps))


def test_structure_invariants():
    dom = Domain.box([0, 0], [1, 1])
    cloud = sample(dom, UniformDensity(dom), 800, 9)
    g = build_graph(cloud, Kernel("cone", 2), 0.1)
    W = g.weights
    assert (W != W.T).nnz == 0
    assert np.all(W.diagonal() == 0)
    assert np.all(W.data > 0)
    assert g.two_m == pytest.approx(W.data.sum(), rel=1e-9)
    assert g.two_m == float(np.sum(g.degrees))
    assert g.two_m == pytest.approx(math.fsum(g.degrees), rel=1e-13)
    for i in range(0, g.n, 97):
        idx, _ = g.neighbors(i)
        assert np.all(np.diff(idx) > 0)


def test_scale_multiplies_weights():
    dom = Domain.box([0, 0], [1, 1])
    cloud = sample(dom, UniformDensity(dom), 300, 2)
    k = Kernel("indicator", 2)
    g1 = build_graph(cloud, k, 0.2)
    g3 = build_graph(cloud, k, 0.2, scale=3.0)
    assert np.allclose(g3.dense(), 3 * g1.dense(), rtol=1e-15)
    assert np.allclose(g3.degrees, 3 * g1.degrees, rtol=1e-14)
    assert g3.two_m == pytest.approx(3 * g1.two_m, rel=1e-13)


def test_edge_list_export(three_points):
    text = three_points.edge_list_csv().splitlines()
    assert text == ["i,j,weight", "0,1,0.5", "1,2,0.5"]
    head = json.loads(three_points.header_json())
    assert head["n"] == 3 and head["two_m"] == 2.0 and head["eps"] == 1.0
    assert head["kernel"] == {"profile": "indicator", "dimension": 1}


def test_build_deterministic():
    dom = Domain.box([0, 0, 0], [1, 1, 1])
    cloud = sample(dom, UniformDensity(dom), 2000, 1)
    a = build_graph(cloud, Kernel("indicator", 3), 0.2)
    b = build_graph(cloud, Kernel("indicator", 3), 0.2)
    assert a.edge_list_csv() == b.edge_list_csv()
