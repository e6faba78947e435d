import math

import numpy as np
import pytest

import nwidths


def test_hilbert_widths_match_singular_values():
    d = np.array([1.0, 0.5, 0.25])
    w = nwidths.widths(d, 2.0, 2.0, 1, restarts=4)
    for key in ("kolmogorov", "gelfand", "linear"):
        assert w[key].upper == pytest.approx(0.5, rel=1e-6)
    assert nwidths.svd_oracle(d, 2).upper == 0.25


def test_duality_gap():
    r = nwidths.duality_check(np.array([1.0, 0.6, 0.3]), 1.5, 3.0, 1, restarts=4)
    assert r["gelfand_gap"] <= 0.03
    assert r["linear_gap"] <= 0.03


def test_sweep_and_fit():
    seq = nwidths.MultiplierSequence.exponential(1.0, 1.0)
    s = nwidths.sweep(seq, 2.0, 2.0, [8, 16, 32, 64])
    assert s["regime"] == "SuperHigh"
    assert s["verdict"]
    for n, u in zip(s["n"], s["upper"]):
        assert u == pytest.approx(math.exp(-(n + 1)), rel=1e-12)
    f = nwidths.fit([9.0, 17.0, 33.0, 65.0], [x ** -1.0 for x in (9.0, 17.0, 33.0, 65.0)])
    assert f["slope"] == pytest.approx(-1.0)


def test_classifier_and_errors():
    assert nwidths.regime_classify(nwidths.MultiplierSequence.sobolev(0.4), 1.5, 2.0) == "Small"
    with pytest.raises(ValueError):
        nwidths.widths(np.array([0.5, 1.0]), 2.0, 2.0, 1)


def test_strict_gap_chain():
    facets = np.array(
        [[1, 0, 0], [-1, 0, 0], [0, 1, 0], [0, -1, 0], [0, 0, 1], [0, 0, -1], [1, -1, 0], [-1, 1, 0]],
        dtype=float,
    )
    d = np.ones(3)
    r = nwidths.extension_chain(d, 1.0, space="polytope", facets=facets, n=1, restarts=4)
    assert r["chain"][0].upper - r["chain"][1].upper > 0.04
    c = nwidths.certify_rank_one_gap(d, facets)
    assert c["margin"] > 0.085
