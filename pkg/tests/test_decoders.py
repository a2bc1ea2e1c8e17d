import numpy as np
import pytest

from conftest import product_prior, random_prior

from cssbp.channel import PauliPrior, depolarizing_prior, sample_error, y_only_prior
from cssbp.css_code import PauliError, ResidualClass, Syndromes, syndrome
from cssbp.decoders import (
    DECODERS,
    DecoderConfig,
    DecoderFault,
    JointBpState,
    SeparateBpState,
    decode,
    decode_batch,
    hard_decision_joint,
    joint_beliefs,
    joint_iterate,
    separate_decode,
)
from cssbp.decoders import _graph as g
from cssbp.decoders.decisions import marginal_estimates
from cssbp.oracle import exact_marginals


def zero_syn(code):
    return Syndromes(np.zeros(code.mx, np.uint8), np.zeros(code.mz, np.uint8))


def table(row):
    """Label-order 4-vector -> one-qubit belief table (1, 2, 2)."""
    return PauliPrior.from_label_order([row]).tables


# -- joint BP ---------------------------------------------------------------

def test_init_uniform_check_messages(paper24):
    st = JointBpState(paper24, depolarizing_prior(24, 0.3), zero_syn(paper24))
    assert np.all(st.nu_hat == 0.5) and np.all(st.mu_hat == 0.5)
    np.testing.assert_allclose(st.mu, np.tile([0.8, 0.2], (st.mu.shape[0], 1)), atol=1e-15)
    np.testing.assert_allclose(st.nu, np.tile([0.8, 0.2], (st.nu.shape[0], 1)), atol=1e-15)


def test_init_dimension_mismatch(paper24):
    with pytest.raises(ValueError):
        JointBpState(paper24, depolarizing_prior(23, 0.3), zero_syn(paper24))
    with pytest.raises(ValueError):
        JointBpState(paper24, depolarizing_prior(24, 0.3), Syndromes(np.zeros(7), np.zeros(8)))


def test_uniform_messages_give_prior(paper24):
    prior = random_prior(np.random.default_rng(0), 24)
    st = JointBpState(paper24, prior, zero_syn(paper24))
    np.testing.assert_allclose(joint_beliefs(st), prior.tables, atol=1e-15)


def test_noiseless_prior_point_mass(paper24):
    st = JointBpState(paper24, depolarizing_prior(24, 0.0), zero_syn(paper24))
    for _ in range(3):
        joint_iterate(st)
    b = st.beliefs()
    assert np.all(b[:, 0, 0] == 1.0)


def test_tree_two_iterations_exact(tree_code):
    prior = depolarizing_prior(4, 0.3)
    st = JointBpState(tree_code, prior, zero_syn(tree_code))
    joint_iterate(joint_iterate(st))
    np.testing.assert_allclose(st.beliefs(), exact_marginals(tree_code, prior, zero_syn(tree_code)), atol=1e-10)


def test_normalization_invariant(paper24):
    rng = np.random.default_rng(4)
    prior = random_prior(rng, 24)
    st = JointBpState(paper24, prior, syndrome(paper24, sample_error(prior, 1)))
    for _ in range(10):
        st.iterate()
        for m in (st.nu, st.mu, st.nu_hat, st.mu_hat):
            assert np.all(m >= 0) and np.allclose(m.sum(-1), 1.0, atol=1e-12)
        assert np.allclose(st.beliefs().sum(axis=(1, 2)), 1.0, atol=1e-12)


def test_parity_symmetry(paper24):
    prior = random_prior(np.random.default_rng(9), 24)
    syn = syndrome(paper24, sample_error(prior, 3))
    flipped_sz = syn.sz.copy()
    flipped_sz[2] ^= 1
    a = JointBpState(paper24, prior, syn)
    b = JointBpState(paper24, prior, Syndromes(flipped_sz, syn.sx))
    a._check_update()
    b._check_update()
    rows = a.lx.edge_row
    np.testing.assert_array_equal(b.nu_hat[rows == 2], a.nu_hat[rows == 2][:, ::-1])
    np.testing.assert_array_equal(b.nu_hat[rows != 2], a.nu_hat[rows != 2])


def test_exact_zero_messages_survive(paper24):
    prior = random_prior(np.random.default_rng(5), 24, zeros=True)
    st = JointBpState(paper24, prior, syndrome(paper24, sample_error(prior, 2)))
    for _ in range(5):
        st.iterate()
    b = st.beliefs()
    assert np.all(b[prior.tables == 0.0] == 0.0)


def test_impossible_syndrome_faults():
    from cssbp.css_code import CssCode

    code = CssCode(2, ((0,),), ((1,),))
    prior = PauliPrior(np.array([[[1.0, 0.0], [0.0, 0.0]]] * 2))  # noiseless
    st = JointBpState(code, prior, Syndromes([1], [0]))
    st.iterate()
    with pytest.raises(DecoderFault):
        st.beliefs()


# -- hard decisions ---------------------------------------------------------

@pytest.mark.parametrize(
    "row, expect",
    [([0.7, 0.1, 0.1, 0.1], (0, 0)), ([0.25] * 4, (0, 0)), ([0.1, 0.4, 0.4, 0.1], (1, 0)),
     ([0.1, 0.2, 0.3, 0.4], (1, 1)), ([0.1, 0.1, 0.45, 0.35], (0, 1))],
)
def test_hard_decision_joint(row, expect):
    e = hard_decision_joint(table(row))
    assert (int(e.x[0]), int(e.z[0])) == expect


def test_marginal_estimate_differs_from_joint():
    b = table([0.1, 0.35, 0.35, 0.2])
    joint = hard_decision_joint(b)
    marg = marginal_estimates(b)
    assert (joint.x[0], joint.z[0]) == (1, 0)  # most likely single state
    assert (marg.x[0], marg.z[0]) == (1, 1)  # each marginal puts 0.55 on a flip
    b = table([0.3, 0.1, 0.1, 0.5])
    assert (marginal_estimates(b).x[0], marginal_estimates(b).z[0]) == (1, 1)


# -- separate BP ------------------------------------------------------------

def test_separate_initial_belief_is_marginal(paper24):
    st = SeparateBpState(paper24, depolarizing_prior(24, 0.3), zero_syn(paper24))
    np.testing.assert_allclose(st.x.beliefs(), np.tile([0.8, 0.2], (24, 1)), atol=1e-15)


def test_product_prior_joint_equals_separate(paper24):
    rng = np.random.default_rng(21)
    prior = product_prior(rng, 24)
    syn = syndrome(paper24, sample_error(prior, 8))
    joint = JointBpState(paper24, prior, syn)
    sep = SeparateBpState(paper24, prior, syn)
    for _ in range(20):
        np.testing.assert_allclose(joint.mu, sep.x.v, atol=1e-12, rtol=0)
        np.testing.assert_allclose(joint.nu, sep.z.v, atol=1e-12, rtol=0)
        joint.iterate()
        sep.iterate()
        np.testing.assert_allclose(joint.mu_hat, sep.x.c, atol=1e-12, rtol=0)
        np.testing.assert_allclose(joint.nu_hat, sep.z.c, atol=1e-12, rtol=0)


def test_y_only_joint_differs_from_separate(paper24):
    prior = PauliPrior.from_label_order([[0.7, 0.0, 0.0, 0.3]] * 24)
    differs = False
    for seed in range(10):
        syn = syndrome(paper24, sample_error(prior, seed))
        j = JointBpState(paper24, prior, syn)
        s = SeparateBpState(paper24, prior, syn)
        for _ in range(3):
            j.iterate()
            s.iterate()
        differs |= not np.allclose(j.beliefs(), s.beliefs(), atol=1e-6)
    assert differs


def test_separate_decode_components(paper24):
    prior = depolarizing_prior(24, 0.05)
    err = PauliError.from_supports(24, x=[2], z=[8])  # both with unique syndromes
    rx, rz = separate_decode(paper24, prior, syndrome(paper24, err))
    assert rx.converged and rz.converged
    assert not rx.decision.z.any() and not rz.decision.x.any()
    assert rx.beliefs.shape == (24, 2)


def test_separate_decode_dimension_mismatch(paper24):
    with pytest.raises(ValueError):
        separate_decode(paper24, depolarizing_prior(5, 0.1), zero_syn(paper24))


# -- driver -----------------------------------------------------------------

@pytest.mark.parametrize("decoder", DECODERS)
def test_zero_syndrome_converges_at_one(paper24, decoder):
    res = decode(paper24, depolarizing_prior(24, 0.3), zero_syn(paper24), decoder=decoder)
    assert res.converged and res.iterations == 1 and res.decision.is_zero()


@pytest.mark.parametrize("decoder", DECODERS)
def test_zero_iterations_prior_only(paper24, decoder):
    syn = syndrome(paper24, PauliError.from_supports(24, z=[9]))
    res = decode(paper24, depolarizing_prior(24, 0.1), syn, DecoderConfig(max_iterations=0), decoder)
    assert res.iterations == 0 and not res.converged and res.decision.is_zero()
    res = decode(paper24, depolarizing_prior(24, 0.1), zero_syn(paper24), DecoderConfig(max_iterations=0), decoder)
    assert res.converged


def _twins(cols):
    return {j for j, c in enumerate(cols) if sum(c == o for o in cols) > 1}


def test_single_errors(paper24):
    # Qubits whose check column is shared with another qubit give identical
    # syndromes for different single flips; per-qubit argmax cannot pick one.
    # Every single flip with a unique syndrome must decode.
    prior = depolarizing_prior(24, 0.05)
    twin_z, twin_x = _twins(paper24.hx_cols), _twins(paper24.hz_cols)
    assert len(twin_z) + len(twin_x) == 30
    decoded = 0
    for j in range(24):
        for err, twinned, cols in ((PauliError.from_supports(24, x=[j]), j in twin_x, paper24.hz_cols),
                                   (PauliError.from_supports(24, z=[j]), j in twin_z, paper24.hx_cols)):
            syn = syndrome(paper24, err)
            if twinned:
                k = next(k for k in range(24) if k != j and cols[k] == cols[j])
                other = PauliError.from_supports(24, x=[k]) if err.x.any() else PauliError.from_supports(24, z=[k])
                assert syndrome(paper24, other) == syn
                continue
            res = decode(paper24, prior, syn, decoder="joint", true_error=err)
            assert res.converged and res.residual is ResidualClass.EXACT
            decoded += 1
    assert decoded == 18


def test_z10_decision_matches_syndrome(paper24):
    # qubit 10 shares its X-check pair, so use the low-noise regime where BP settles on one twin
    syn = syndrome(paper24, PauliError.from_supports(24, z=[9]))
    res = decode(paper24, depolarizing_prior(24, 0.01), syn)
    assert res.converged
    assert (np.flatnonzero(syndrome(paper24, res.decision).sz) + 1).tolist() == [1, 5]


def test_fixed_iteration_mode(paper24):
    res = decode(paper24, depolarizing_prior(24, 0.1), zero_syn(paper24),
                 DecoderConfig(max_iterations=7, early_stop=False))
    assert res.iterations == 7 and res.converged


def test_joint_extra_estimates(paper24):
    res = decode(paper24, depolarizing_prior(24, 0.1), zero_syn(paper24))
    assert isinstance(res.componentwise, PauliError) and isinstance(res.marginal, PauliError)


def test_unknown_decoder(paper24):
    with pytest.raises(ValueError):
        decode(paper24, depolarizing_prior(24, 0.1), zero_syn(paper24), decoder="nope")


@pytest.mark.parametrize(
    "kwargs",
    [dict(max_iterations=-1), dict(epsilon=0.01), dict(check_rule="x"), dict(minsum_scale=0.0), dict(damping=1.0)],
)
def test_config_validation(kwargs):
    with pytest.raises(ValueError):
        DecoderConfig(**kwargs)


def test_config_dict_roundtrip():
    cfg = DecoderConfig(max_iterations=12, damping=0.2)
    assert DecoderConfig.from_dict(cfg.to_dict()) == cfg
    with pytest.raises(ValueError):
        DecoderConfig.from_dict({"bogus": 1})


def test_damping_and_epsilon_keep_normalization(paper24):
    prior = depolarizing_prior(24, 0.1)
    syn = syndrome(paper24, sample_error(prior, 4))
    st = JointBpState(paper24, prior, syn, DecoderConfig(damping=0.4, epsilon=1e-4))
    for _ in range(5):
        st.iterate()
    assert np.allclose(st.nu_hat.sum(-1), 1.0, atol=1e-12) and st.nu_hat.min() >= 1e-4 / 2


# -- batch path -------------------------------------------------------------

@pytest.mark.parametrize("decoder", DECODERS)
@pytest.mark.parametrize("prior_kind", ["depolarizing", "y-only"])
def test_batch_matches_single(paper24, decoder, prior_kind):
    prior = depolarizing_prior(24, 0.1) if prior_kind == "depolarizing" else y_only_prior(24, 0.1)
    errs = [sample_error(prior, s) for s in range(40)]
    syns = [syndrome(paper24, e) for e in errs]
    cfg = DecoderConfig(max_iterations=30)
    batch = decode_batch(paper24, prior, np.array([s.sz for s in syns]), np.array([s.sx for s in syns]), cfg, decoder)
    for k, syn in enumerate(syns):
        res = decode(paper24, prior, syn, cfg, decoder)
        assert np.array_equal(res.decision.x, batch.x[k]) and np.array_equal(res.decision.z, batch.z[k])
        assert res.iterations == batch.iterations[k] and res.converged == batch.converged[k]


def test_batched_state_matches_per_instance(paper24):
    prior = random_prior(np.random.default_rng(2), 24)
    syns = [syndrome(paper24, sample_error(prior, s)) for s in range(5)]
    batch = JointBpState(paper24, prior, Syndromes(np.array([s.sz for s in syns]), np.array([s.sx for s in syns])))
    singles = [JointBpState(paper24, prior, s) for s in syns]
    for _ in range(6):
        batch.iterate()
        for st in singles:
            st.iterate()
    for k, st in enumerate(singles):
        np.testing.assert_allclose(batch.beliefs()[k], st.beliefs(), atol=1e-15, rtol=0)
    sub = batch.take(np.array([3, 1]))
    np.testing.assert_array_equal(sub.beliefs()[0], batch.beliefs()[3])


def test_batch_mismatched_counts(paper24):
    with pytest.raises(ValueError):
        decode_batch(paper24, depolarizing_prior(24, 0.1), np.zeros((3, 8)), np.zeros((2, 8)))


# -- kernels ----------------------------------------------------------------

def test_slots_scan_exclusive_product():
    slots = g.Slots.build([[0, 1, 2], [3]], 4)
    vals = np.array([[2.0], [3.0], [5.0], [7.0]])
    excl, tot = slots.scan(np.multiply, vals, 1.0)
    assert excl[:, 0].tolist() == [15.0, 10.0, 6.0, 1.0]
    assert tot[:, 0].tolist() == [30.0, 7.0]


def test_parity_check_probs_formula():
    from cssbp.css_code import CssCode

    lx, _ = g.layouts(CssCode(3, ((0, 1, 2),), ()))
    msgs = np.array([[0.9, 0.1], [0.6, 0.4], [0.3, 0.7]])
    out = g.parity_check_probs(lx, msgs, np.array([1], np.uint8))
    d = 0.2 * -0.4  # other edges of edge 0
    np.testing.assert_allclose(out[0], [(1 - d) / 2, (1 + d) / 2])
