import numpy as np
import pytest

from bettiq import (
    HodgeOperator,
    PEConfig,
    TraceEstimate,
    block_encode_density,
    block_encode_hermitian,
    block_encode_projector,
    block_encode_state_mixture,
    build_clique_complex,
    copy_register,
    grover_prep_cost,
    hodge_laplacian,
    hoeffding_sample_count,
    p_one,
    p_zero,
    partial_trace,
    phase_estimation_unitary,
    phase_zero_probability,
    prepare_phi,
    reduced_density,
    slot_rank,
    slot_words,
    tensor_block_encoding,
    trace_estimate,
    zero_phase_weight,
    zero_phase_weights,
)
from helpers import complete_graph, cycle_graph, empty_graph, octahedron_graph, path_graph

IDEAL = PEConfig.ideal()


def c4_complex(max_dim=2):
    return build_clique_complex(cycle_graph(4), max_dim)


def flag_one_observable(rho):
    proj = np.zeros((rho.phase_dim * rho.slot_dim,) * 2)
    proj[: rho.slot_dim, : rho.slot_dim] = np.eye(rho.slot_dim)
    return np.kron(proj, np.diag([0.0, 1.0]))


class TestPreparePhi:
    def test_c4_amplitudes_and_flags(self):
        state = prepare_phi(c4_complex(), 1)
        amp = state.amplitudes
        assert amp.shape == (6, 2)
        root = 1 / np.sqrt(6)
        flags = amp[:, 1] > 0
        # membership pattern over the value-ordered slots {01,02,12,03,13,23}
        assert list(flags) == [True, False, True, True, False, True]
        assert np.allclose(amp[amp > 0], root)

    def test_complete_graph_all_flagged(self):
        c = build_clique_complex(complete_graph(4), 3)
        state = prepare_phi(c, 2)
        assert (state.amplitudes[:, 1] > 0).all()
        assert not state.amplitudes[:, 0].any()

    def test_empty_level_all_unflagged(self):
        c = build_clique_complex(empty_graph(3), 1)
        state = prepare_phi(c, 1)
        assert not state.amplitudes[:, 1].any()


class TestCopyRegister:
    def test_norm_preserved(self):
        copied = copy_register(prepare_phi(c4_complex(), 1))
        assert copied.copied
        assert np.linalg.norm(copied.amplitudes) == pytest.approx(1.0, abs=1e-12)

    def test_double_copy_rejected(self):
        copied = copy_register(prepare_phi(c4_complex(), 1))
        with pytest.raises(ValueError):
            copy_register(copied)

    def test_tracing_copy_dephases_slots(self):
        state = prepare_phi(c4_complex(), 1)
        copied = copy_register(state)
        vec = copied.vector()
        rho = np.outer(vec, vec.conj())
        reduced = partial_trace(rho, [6, 2, 6], keep=[0, 1])
        expected = np.zeros((12, 12))
        for i in range(6):
            f = int(state.amplitudes[i, 1] > 0)
            pos = 2 * i + f
            expected[pos, pos] = 1 / 6
        assert np.allclose(reduced, expected, atol=1e-12)

    def test_tracing_copy_and_flag_gives_uniform_mixture(self):
        copied = copy_register(prepare_phi(c4_complex(), 1))
        vec = copied.vector()
        reduced = partial_trace(np.outer(vec, vec.conj()), [6, 2, 6], keep=[0])
        assert np.allclose(reduced, np.eye(6) / 6, atol=1e-12)


class TestPhaseZeroProbability:
    def test_exact_values(self):
        assert phase_zero_probability(0.0, 3) == 1.0
        assert phase_zero_probability(np.pi, 1) == pytest.approx(0.0, abs=1e-30)
        # t=1: F(phi) = cos^2(phi/2)
        phi = 0.7
        assert phase_zero_probability(phi, 1) == pytest.approx(np.cos(phi / 2) ** 2)

    def test_nonincreasing_in_t(self):
        grid = np.linspace(1e-3, 2 * np.pi - 1e-3, 500)
        prev = phase_zero_probability(grid, 1)
        for t in range(2, 9):
            cur = phase_zero_probability(grid, t)
            assert (cur <= prev + 1e-12).all()
            prev = cur


class TestZeroPhaseWeights:
    def test_kernel_slot_is_exactly_one_any_t(self):
        c = c4_complex()
        op = hodge_laplacian(c, 1, "restricted")
        diag_word = 0b0101  # off-complex slot: a zero row, eigenphase 0
        for cfg in (IDEAL, PEConfig.bits(t=1), PEConfig.bits(t=5)):
            assert zero_phase_weight(op, cfg, diag_word) == 1.0

    def test_eigenphase_pi_one_bit_reads_zero_never(self):
        op = HodgeOperator(k=0, matrix=np.diag([0.0, 2.0]), convention="restricted",
                           support_size=2, n=2, complex_slot_indices=(0, 1))
        cfg = PEConfig.bits(t=1, tau=np.pi / 2)
        assert zero_phase_weight(op, cfg, 0b10) == pytest.approx(0.0, abs=1e-15)
        assert zero_phase_weight(op, cfg, 0b01) == 1.0

    def test_c4_edge_kernel_overlap(self):
        c = c4_complex()
        op = hodge_laplacian(c, 1)
        for word in c.words(1):
            assert zero_phase_weight(op, IDEAL, word) == pytest.approx(0.25, abs=1e-10)

    def test_bad_word_rejected(self):
        op = hodge_laplacian(c4_complex(), 1)
        with pytest.raises(ValueError):
            zero_phase_weight(op, IDEAL, 0b0111)

    def test_matches_pe_unitary_columns(self):
        c = c4_complex()
        op = hodge_laplacian(c, 1)
        cfg = PEConfig.bits(t=3)
        u_pe = phase_estimation_unitary(op, cfg)
        weights = zero_phase_weights(op, cfg)
        c_total = op.dim
        for s in range(c_total):
            col = u_pe[:, s]  # input (phase=0, slot=s)
            direct = float((np.abs(col[:c_total]) ** 2).sum())  # phase register reads 0
            assert direct == pytest.approx(weights[s], abs=1e-12)

    def test_tau_too_large_rejected(self):
        op = hodge_laplacian(c4_complex(), 1)
        with pytest.raises(ValueError):
            zero_phase_weights(op, PEConfig.bits(t=2, tau=10.0))


class TestPhaseEstimationUnitary:
    @pytest.mark.parametrize("cfg", [IDEAL, PEConfig.bits(t=1), PEConfig.bits(t=3)])
    def test_unitarity(self, cfg):
        op = hodge_laplacian(c4_complex(), 1)
        u = phase_estimation_unitary(op, cfg)
        assert np.abs(u.conj().T @ u - np.eye(u.shape[0])).max() < 1e-10

    def test_finite_bits_p0_converges_monotonically(self):
        # path vertex Laplacian has eigenphases {pi/3, pi}: non-dyadic leakage
        c = build_clique_complex(path_graph(3), 1)
        op = hodge_laplacian(c, 0)
        ideal = p_zero(c, 0, op, IDEAL)
        assert ideal == pytest.approx(1 / 3, abs=1e-10)
        diffs = [p_zero(c, 0, op, PEConfig.bits(t=t)) - ideal for t in range(1, 9)]
        assert all(d >= -1e-12 for d in diffs)
        assert all(diffs[i + 1] <= diffs[i] + 1e-12 for i in range(len(diffs) - 1))
        assert diffs[-1] < 1e-3


class TestReducedDensity:
    def test_trace_and_psd(self):
        c = c4_complex()
        op = hodge_laplacian(c, 1)
        for cfg in (IDEAL, PEConfig.bits(t=2)):
            rho = reduced_density(c, 1, op, cfg)
            report = rho.validate()
            assert report["ok"], report

    def test_flagged_zero_phase_expectation(self):
        c = c4_complex()
        op = hodge_laplacian(c, 1)
        rho = reduced_density(c, 1, op, IDEAL)
        value = rho.expectation(flag_one_observable(rho))
        assert value == pytest.approx(1 / 6, abs=1e-10)
        weights = zero_phase_weights(op, IDEAL)
        member = [slot_rank(w) for w in c.words(1)]
        assert value == pytest.approx(weights[member].sum() / 6, abs=1e-12)

    def test_equals_partial_trace_of_copied_state(self):
        # build the full pure state on phase x slot x flag x copy and trace the copy
        c = build_clique_complex(complete_graph(3), 2)
        k = 1
        op = hodge_laplacian(c, k)
        cfg = PEConfig.bits(t=2)
        rho = reduced_density(c, k, op, cfg)
        u_pe = phase_estimation_unitary(op, cfg)
        c_total = op.dim
        p_dim = u_pe.shape[0] // c_total
        full = np.zeros(p_dim * c_total * 2 * c_total, dtype=complex)
        for s, word in enumerate(slot_words(c.n, k)):
            flag = np.zeros(2)
            flag[int(c.contains_word(k, word))] = 1.0
            copy = np.zeros(c_total)
            copy[s] = 1.0
            full += np.kron(np.kron(u_pe[:, s], flag), copy) / np.sqrt(c_total)
        traced = partial_trace(np.outer(full, full.conj()), [p_dim, c_total, 2, c_total],
                               keep=[0, 1, 2])
        assert np.abs(traced - rho.matrix()).max() < 1e-12

    def test_mismatched_operator_rejected(self):
        c = c4_complex()
        op = hodge_laplacian(c, 0)
        with pytest.raises(ValueError):
            reduced_density(c, 1, op, IDEAL)


class TestPZeroPOne:
    def test_c4(self):
        c = c4_complex()
        op = hodge_laplacian(c, 1)
        assert p_zero(c, 1, op, IDEAL) == pytest.approx(0.25, abs=1e-10)
        comp = p_one(c, 1, op, IDEAL)
        assert comp.trace == pytest.approx(2.0, abs=1e-9)
        assert comp.per_slot == pytest.approx(1.0, abs=1e-9)

    def test_octahedron_k2(self):
        c = build_clique_complex(octahedron_graph(), 3)
        op = hodge_laplacian(c, 2)
        assert p_zero(c, 2, op, IDEAL) == pytest.approx(1 / 8, abs=1e-10)

    def test_k4_no_holes(self):
        c = build_clique_complex(complete_graph(4), 2)
        op = hodge_laplacian(c, 1)
        assert p_zero(c, 1, op, IDEAL) == pytest.approx(0.0, abs=1e-10)
        assert p_one(c, 1, op, IDEAL).per_slot is None  # dense level: no off-complex slots

    def test_c4_dual_p1_by_diagonalization(self):
        c = c4_complex()
        op = hodge_laplacian(c, 1, "dual")
        comp = p_one(c, 1, op, IDEAL)
        # complement block is the edge Laplacian of two disjoint edges: no kernel
        assert comp.trace == pytest.approx(0.0, abs=1e-10)

    def test_empty_level_rejected(self):
        c = build_clique_complex(empty_graph(3), 2)
        op = hodge_laplacian(c, 1)
        with pytest.raises(ValueError):
            p_zero(c, 1, op, IDEAL)


class TestBlockEncodeProjector:
    def test_action_on_basis(self):
        enc = block_encode_projector(2, 6)
        block = enc.encoded_block()
        for j in range(6):
            e = np.zeros(12)
            e[j] = 1.0
            assert np.allclose(block @ e, e)  # phase 0: preserved
            e2 = np.zeros(12)
            e2[6 + j] = 1.0
            assert np.allclose(block @ e2, 0.0)  # phase 1: annihilated

    def test_idempotent_and_explicit_form(self):
        enc = block_encode_projector(4, 3)
        block = enc.encoded_block()
        assert np.allclose(block @ block, block)
        expected = np.kron(np.diag([1.0, 0, 0, 0]), np.eye(3))
        assert np.allclose(block, expected)
        assert enc.verify()["ok"]


class TestBlockEncodeHermitian:
    @pytest.mark.parametrize("seed", range(4))
    def test_random_contractions(self, seed):
        rng = np.random.default_rng(seed)
        raw = rng.normal(size=(2, 2))
        m = (raw + raw.T) / 2
        m /= 1.1 * np.abs(np.linalg.eigvalsh(m)).max()
        enc = block_encode_hermitian(m)
        assert enc.verify()["ok"]
        assert np.allclose(enc.encoded_block(), m, atol=1e-12)

    def test_norm_above_one_rejected(self):
        with pytest.raises(ValueError):
            block_encode_hermitian(np.diag([1.5, 0.0]))


class TestTensorBlockEncoding:
    def test_projector_times_flag(self):
        proj = block_encode_projector(2, 6)
        flag = block_encode_hermitian(np.diag([0.0, 1.0]))
        enc = tensor_block_encoding([proj, flag])
        assert enc.verify()["ok"]
        expected = np.kron(proj.target, flag.target)
        assert np.allclose(enc.encoded_block(), expected, atol=1e-12)
        assert enc.ancilla_dim == 4 and enc.system_dim == 24

    def test_identity_targets(self):
        ident = block_encode_hermitian(np.eye(2))
        enc = tensor_block_encoding([ident, ident])
        assert np.allclose(enc.encoded_block(), np.eye(4), atol=1e-12)

    @pytest.mark.parametrize("seed", range(3))
    def test_random_pairs_match_kron(self, seed):
        rng = np.random.default_rng(100 + seed)
        encs = []
        for _ in range(2):
            raw = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
            m = (raw + raw.conj().T) / 2
            m /= 1.2 * np.abs(np.linalg.eigvalsh(m)).max()
            encs.append(block_encode_hermitian(m))
        enc = tensor_block_encoding(encs)
        assert enc.verify()["ok"]
        assert np.abs(enc.encoded_block() - np.kron(encs[0].target, encs[1].target)).max() < 1e-9


class TestBlockEncodeMixture:
    def test_pure_zero_state(self):
        enc = block_encode_state_mixture(np.array([[1.0, 0.0]]))
        assert np.allclose(enc.encoded_block(), np.diag([1.0, 0.0]), atol=1e-12)
        assert enc.verify()["ok"]

    def test_maximally_mixed(self):
        enc = block_encode_state_mixture(np.eye(2))
        assert np.allclose(enc.encoded_block(), np.eye(2) / 2, atol=1e-12)

    def test_pipeline_density_small(self):
        c = build_clique_complex(complete_graph(3), 2)
        op = hodge_laplacian(c, 1)
        rho = reduced_density(c, 1, op, PEConfig.bits(t=1))
        enc = block_encode_density(rho)
        assert enc.dense is not None  # 3 * 12 * 12 = 432 fits the dense cap
        report = enc.verify()
        assert report["unitarity_deviation"] <= 1e-10
        assert report["block_deviation"] <= 1e-9
        assert np.abs(enc.encoded_block() - rho.matrix()).max() < 1e-9

    def test_structured_matches_dense_path(self):
        c = build_clique_complex(complete_graph(3), 2)
        rho = reduced_density(c, 1, hodge_laplacian(c, 1), PEConfig.ideal())
        enc = block_encode_density(rho)
        d = enc.system_dim
        cols = np.zeros((enc.dim, d), dtype=complex)
        cols[np.arange(d), np.arange(d)] = 1.0
        structured_block = enc.apply_fn(cols)[:d]
        assert np.abs(structured_block - enc.dense[:d, :d]).max() < 1e-12

    def test_structured_only_large_mixture(self):
        rng = np.random.default_rng(5)
        raw = rng.normal(size=(4, 40)) + 1j * rng.normal(size=(4, 40))
        states = raw / np.linalg.norm(raw, axis=1, keepdims=True)
        enc = block_encode_state_mixture(states)
        assert enc.dense is None and enc.dim == 4 * 40 * 40
        expected = states.T @ states.conj() / 4
        assert np.abs(enc.encoded_block() - expected).max() < 1e-9
        assert enc.unitarity_deviation() < 1e-12
        # isometry spot check on a random vector
        x = rng.normal(size=enc.dim) + 1j * rng.normal(size=enc.dim)
        assert np.linalg.norm(enc.apply(x)) == pytest.approx(np.linalg.norm(x), rel=1e-12)


class TestTraceEstimate:
    def test_sample_count_formula(self):
        # range-2 outcomes: 4x the [0,1]-outcome count
        assert hoeffding_sample_count(0.5, 0.95) == 30
        assert hoeffding_sample_count(0.01, 0.95) == 73778
        assert hoeffding_sample_count(0.01, 0.95, outcome_range=1.0) == 18445

    def test_invariant_floor_enforced(self):
        with pytest.raises(ValueError):
            TraceEstimate(value=0.0, additive_err=0.05, confidence=0.95,
                          samples_used=10, seed={"entropy": 0, "spawn_key": []})

    def test_identity_observable_is_exact(self):
        c = c4_complex()
        rho = reduced_density(c, 1, hodge_laplacian(c, 1), IDEAL)
        est = trace_estimate(np.eye(rho.dim), rho, delta=0.1, confidence=0.95, seed=1)
        assert est.value == 1.0

    def test_deterministic_per_seed(self):
        c = c4_complex()
        rho = reduced_density(c, 1, hodge_laplacian(c, 1), IDEAL)
        obs = flag_one_observable(rho)
        a = trace_estimate(obs, rho, 0.05, 0.95, seed=123)
        b = trace_estimate(obs, rho, 0.05, 0.95, seed=123)
        other = trace_estimate(obs, rho, 0.05, 0.95, seed=124)
        assert a.value == b.value
        assert a.value != other.value  # different stream

    def test_c4_flag_observable_hits_truth(self):
        c = c4_complex()
        rho = reduced_density(c, 1, hodge_laplacian(c, 1), IDEAL)
        est = trace_estimate(flag_one_observable(rho), rho, delta=0.01, confidence=0.95, seed=0)
        assert est.samples_used == 73778
        assert abs(est.value - 1 / 6) <= 0.01

    def test_norm_above_one_rejected(self):
        c = c4_complex()
        rho = reduced_density(c, 1, hodge_laplacian(c, 1), IDEAL)
        with pytest.raises(ValueError):
            trace_estimate(2.0 * np.eye(rho.dim), rho, 0.1, 0.95, seed=0)


class TestGroverCost:
    def test_values(self):
        assert grover_prep_cost(4, 1, 4) == pytest.approx(4 * np.sqrt(6 / 4))
        assert grover_prep_cost(10, 2, 30) == pytest.approx(40.0)
        assert grover_prep_cost(5, 2, 10) == pytest.approx(5 * 2)  # S_k = C: plain n*k

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            grover_prep_cost(4, 1, 0)
