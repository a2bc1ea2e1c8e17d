import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from cssbp.channel import PauliPrior, relabel_prior, unrelabel_prior
from cssbp.css_code import CssCode, PauliError, Syndromes, syndrome
from cssbp.decoders import _graph as g
from cssbp.decoders.decisions import TIE_RTOL, argmax_first
from cssbp.equivalence import run_paired
from cssbp.oracle import weight_p2, weight_p4

probs = st.floats(0.01, 1.0, allow_nan=False)


@st.composite
def messages(draw, d, k=2):
    m = draw(arrays(np.float64, (d, k), elements=probs))
    return m / m.sum(axis=1, keepdims=True)


@st.composite
def priors(draw, n):
    t = draw(arrays(np.float64, (n, 2, 2), elements=st.floats(0.0, 1.0)))
    t[:, 0, 0] += 0.01
    return PauliPrior(t / t.sum(axis=(1, 2), keepdims=True))


@st.composite
def small_codes(draw):
    n = draw(st.integers(2, 6))
    rows = st.lists(st.integers(0, n - 1), min_size=1, max_size=n, unique=True).map(lambda r: tuple(sorted(r)))
    hx = draw(st.lists(rows, min_size=1, max_size=3, unique=True))
    dual = [v for v in range(1, 1 << n) if all(bin(v & sum(1 << j for j in r)).count("1") % 2 == 0 for r in hx)]
    picks = draw(st.lists(st.sampled_from(dual), min_size=1, max_size=3, unique=True)) if dual else []
    hz = [tuple(j for j in range(n) if v >> j & 1) for v in picks]
    return CssCode(n, tuple(hx), tuple(hz))


@given(st.integers(1, 6).flatmap(lambda d: st.tuples(messages(d), st.just(d))))
def test_syndrome_flip_swaps_check_messages(data):
    msgs, d = data
    lx, _ = g.layouts(CssCode(d, (tuple(range(d)),), ()))
    a = g.parity_check_probs(lx, msgs, np.array([0]))
    b = g.parity_check_probs(lx, msgs, np.array([1]))
    np.testing.assert_array_equal(a, b[:, ::-1])
    np.testing.assert_allclose(a.sum(1), 1.0)


@given(st.integers(1, 6).flatmap(lambda d: st.tuples(messages(d), st.just(d))))
def test_boxplus_matches_probability_rule(data):
    msgs, d = data
    lx, _ = g.layouts(CssCode(d, (tuple(range(d)),), ()))
    p = g.parity_check_probs(lx, msgs, np.array([1]))
    llr = g.boxplus_llr(lx, g.probs_to_llr(msgs), np.array([1]), None)
    np.testing.assert_allclose(g.llr_to_probs(llr), p, atol=1e-9)


@st.composite
def partitions(draw, n_edges=10):
    order = draw(st.permutations(range(n_edges)))
    cuts = sorted(draw(st.lists(st.integers(0, n_edges), min_size=1, max_size=4)))
    bounds = [0, *cuts, n_edges]
    return [list(order[a:b]) for a, b in zip(bounds, bounds[1:])]


@given(partitions(), arrays(np.float64, (10, 3), elements=st.floats(0.1, 2.0)))
def test_slots_scan_matches_naive(groups, vals):
    slots = g.Slots.build(groups, 10)
    excl, tot = slots.scan(np.multiply, vals, 1.0)
    for gi, grp in enumerate(groups):
        np.testing.assert_allclose(tot[gi], np.prod(vals[grp], axis=0) if grp else np.ones(3))
        for e in grp:
            others = [k for k in grp if k != e]
            np.testing.assert_allclose(excl[e], np.prod(vals[others], axis=0) if others else np.ones(3))


@given(st.integers(1, 8).flatmap(priors))
def test_relabel_roundtrip(prior):
    np.testing.assert_array_equal(unrelabel_prior(relabel_prior(prior)).tables, prior.tables)


@settings(max_examples=40, deadline=None)
@given(small_codes().flatmap(lambda c: st.tuples(st.just(c), priors(c.n), st.integers(0, 4 ** c.n - 1),
                                                 st.integers(0, 4 ** c.n - 1))))
def test_relabeled_weights_equal(data):
    code, prior, a, b = data
    bits = np.arange(code.n)
    syn = syndrome(code, PauliError((a >> 2 * bits) & 1, (a >> (2 * bits + 1)) & 1))
    labels = (b >> (2 * np.arange(code.n))) & 3
    err = PauliError(labels & 1, labels >> 1)
    assert weight_p4(code, relabel_prior(prior), labels, syn) == weight_p2(code, prior, err, syn)


@settings(max_examples=20, deadline=None)
@given(small_codes().flatmap(lambda c: st.tuples(st.just(c), priors(c.n), st.integers(0, 4 ** c.n - 1))))
def test_paired_decoders_agree(data):
    code, prior, a = data
    bits = np.arange(code.n)
    err = PauliError((a >> 2 * bits) & 1, (a >> (2 * bits + 1)) & 1)
    if weight_p2(code, prior, err, syndrome(code, err)) == 0.0:
        return
    rep = run_paired(code, prior, syndrome(code, err), 6)
    assert rep.max_belief_deviation <= 1e-10 and rep.hard_decisions_agree


@given(arrays(np.float64, (5, 4), elements=st.floats(0.0, 1.0)))
def test_argmax_first_picks_lowest_tied_index(v):
    idx = argmax_first(v)
    top = v.max(axis=1)
    for r in range(5):
        assert v[r, idx[r]] >= top[r] * (1 - TIE_RTOL)
        assert all(v[r, k] < top[r] * (1 - TIE_RTOL) for k in range(idx[r]))


@given(st.integers(0, 2 ** 32), st.integers(1, 30))
def test_syndrome_is_linear(seed, n):
    code = CssCode(n, ((0,),), ((n - 1,),)) if n > 1 else CssCode(1, (), ())
    rng = np.random.default_rng(seed)
    e1 = PauliError(rng.integers(0, 2, n), rng.integers(0, 2, n))
    e2 = PauliError(rng.integers(0, 2, n), rng.integers(0, 2, n))
    assert syndrome(code, e1 + e2) == (syndrome(code, e1) ^ syndrome(code, e2))
    assert isinstance(syndrome(code, e1), Syndromes)
