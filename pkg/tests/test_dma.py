import numpy as np
import pytest

from dmabeam import channel, dma


def small_geometry(n_rows=2, n_cols=3):
    return channel.ArrayGeometry(
        n_rows=n_rows,
        n_cols=n_cols,
        d_x=5e-3,
        d_y=5e-3,
        aperture_side=n_cols * 5e-3,
        gain_exponent=2.0,
    )


def random_state(rng, n_rows=2, n_cols=3, lorentzian=False, attenuated=False):
    geo = small_geometry(n_rows, n_cols)
    n = geo.n_elements
    if lorentzian:
        q = dma.random_lorentzian_weights(n, rng)
    else:
        q = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    kw = {}
    if attenuated:
        kw = dict(
            element_offsets=np.tile(np.arange(n_cols) * 5e-3, n_rows),
            alpha=np.full(n_rows, 3.0),
            beta=np.full(n_rows, 200.0),
        )
    return dma.DmaState(geometry=geo, weights=q, lorentzian=lorentzian, **kw)


class TestDmaState:
    def test_block_diagonal_materialization(self):
        rng = np.random.default_rng(0)
        st = random_state(rng)
        q_mat = st.weight_matrix()
        geo = st.geometry
        for n in range(geo.n_elements):
            for i in range(geo.n_rows):
                if i == n // geo.n_cols:
                    assert q_mat[n, i] == st.weights[n]
                else:
                    assert q_mat[n, i] == 0.0

    def test_structural_index_map_matches_vec(self):
        from dmabeam.numerics import vec

        rng = np.random.default_rng(1)
        st = random_state(rng)
        flat = vec(st.weight_matrix())
        nz = st.structural_nonzero_indices()
        assert np.array_equal(flat[nz], st.weights)
        mask = np.ones(flat.size, dtype=bool)
        mask[nz] = False
        assert np.all(flat[mask] == 0.0)

    def test_waveguide_magnitudes(self):
        rng = np.random.default_rng(2)
        st = random_state(rng, attenuated=True)
        assert np.all(np.abs(st.waveguide_diag) <= 1.0)
        with pytest.raises(ValueError):
            dma.DmaState(
                geometry=small_geometry(),
                weights=np.ones(6),
                waveguide_diag=np.full(6, 2.0),
            )

    def test_lorentzian_flag_validated(self):
        with pytest.raises(ValueError):
            dma.DmaState(
                geometry=small_geometry(), weights=np.ones(6), lorentzian=True
            )


class TestTransmitVector:
    def test_unit_weights_indicator(self):
        geo = small_geometry()
        st = dma.DmaState(geometry=geo, weights=np.ones(6))
        out = dma.transmit_vector(st, np.array([1.0, 0.0]))
        assert np.allclose(out, [1, 1, 1, 0, 0, 0])

    def test_zero_weights(self):
        st = dma.DmaState(geometry=small_geometry(), weights=np.zeros(6))
        assert np.allclose(dma.transmit_vector(st, np.ones(2)), 0.0)

    def test_matches_dense_product(self):
        rng = np.random.default_rng(3)
        for _ in range(10):
            st = random_state(rng, attenuated=True)
            w = rng.standard_normal(2) + 1j * rng.standard_normal(2)
            dense = np.diag(st.waveguide_diag) @ st.weight_matrix() @ w
            fast = dma.transmit_vector(st, w)
            assert np.allclose(fast, dense, atol=1e-12)

    def test_length_mismatch(self):
        st = dma.DmaState(geometry=small_geometry(), weights=np.ones(6))
        with pytest.raises(ValueError):
            dma.transmit_vector(st, np.ones(3))


class TestLorentzianProjection:
    def test_fixed_points(self):
        assert dma.lorentzian_project(1j) == pytest.approx(1j)
        assert dma.lorentzian_project(0.0) == pytest.approx(0.0, abs=1e-15)

    def test_reference_value(self):
        # oracle: dense phase grid, frozen value
        q = dma.lorentzian_project(1.0 + 0.0j)
        assert q == pytest.approx(0.4472135954999579 + 0.27639320225002106j, rel=1e-9)

    def test_center_tie(self):
        q, tie = dma.lorentzian_project(0.5j, return_ties=True)
        assert tie
        assert q == pytest.approx(1j)
        assert dma.lorentzian_phase(q) == pytest.approx(np.pi / 2)

    def test_on_circle_exactly(self):
        rng = np.random.default_rng(4)
        z = rng.standard_normal(1000) + 1j * rng.standard_normal(1000)
        q = dma.lorentzian_project(z)
        assert np.abs(np.abs(q - 0.5j) - 0.5).max() < 1e-15

    def test_idempotent(self):
        rng = np.random.default_rng(5)
        z = 3 * (rng.standard_normal(500) + 1j * rng.standard_normal(500))
        q = dma.lorentzian_project(z)
        assert np.abs(dma.lorentzian_project(q) - q).max() <= 1e-12

    def test_grid_optimality(self):
        rng = np.random.default_rng(6)
        phis = np.linspace(0.0, 2 * np.pi, 100_000, endpoint=False)
        circle = (1j + np.exp(1j * phis)) / 2
        for z in rng.standard_normal(50) + 1j * rng.standard_normal(50):
            q = dma.lorentzian_project(z)
            assert abs(z - q) <= np.abs(z - circle).min() + 1e-9

    def test_amplitude_phase_coupling(self):
        phis = np.linspace(0, 2 * np.pi, 256, endpoint=False)
        q = (1j + np.exp(1j * phis)) / 2
        assert np.abs(np.abs(q - 0.5j) - 0.5).max() < 1e-15
        # |q| = |cos((phi - pi/2)/2)|: amplitude locked to phase
        assert np.allclose(np.abs(q), np.abs(np.cos((phis - np.pi / 2) / 2)), atol=1e-12)

    def test_phase_roundtrip(self):
        phis = np.linspace(0, 2 * np.pi, 64, endpoint=False)
        q = (1j + np.exp(1j * phis)) / 2
        assert np.allclose(dma.lorentzian_phase(q), phis, atol=1e-9)


class TestScaleFit:
    def test_identity_in_candidate_set(self):
        rng = np.random.default_rng(7)
        q = dma.random_lorentzian_weights(16, rng)  # already on the circle
        beta, theta = dma.fit_circle_scale(q)
        assert np.sum(dma.circle_distance(beta * np.exp(1j * theta) * q) ** 2) <= 1e-20

    def test_recovers_on_grid_scale_exactly(self):
        rng = np.random.default_rng(8)
        q = dma.random_lorentzian_weights(24, rng)
        # rotation on the 64-point search grid: recoverable to golden precision
        scaled = 3.7 * np.exp(-1j * (2 * np.pi * 5 / 64)) * q
        beta, theta = dma.fit_circle_scale(scaled)
        fitted = beta * np.exp(1j * theta) * scaled
        assert np.sum(dma.circle_distance(fitted) ** 2) <= 1e-16

    def test_off_grid_scale_still_improves(self):
        rng = np.random.default_rng(81)
        q = dma.random_lorentzian_weights(24, rng)
        scaled = 3.7 * np.exp(0.9j) * q
        beta, theta = dma.fit_circle_scale(scaled)
        fitted = beta * np.exp(1j * theta) * scaled
        # bounded by the theta grid resolution, far better than no fit
        assert np.sum(dma.circle_distance(fitted) ** 2) <= 0.05 * q.size
        assert np.sum(dma.circle_distance(fitted) ** 2) < np.sum(
            dma.circle_distance(scaled) ** 2
        )

    def test_zero_input(self):
        beta, theta = dma.fit_circle_scale(np.zeros(4, dtype=complex))
        assert beta == 1.0 and theta == 0.0


class TestWeightSdpData:
    def test_transmit_power_cross_check(self):
        # lifted quadratic form vs direct aperture-power evaluation
        rng = np.random.default_rng(9)
        for _ in range(8):
            st = random_state(rng, attenuated=True)
            w = [rng.standard_normal(2) + 1j * rng.standard_normal(2) for _ in range(2)]
            g = [rng.standard_normal(6) + 1j * rng.standard_normal(6) for _ in range(2)]
            data = dma.build_weight_sdp(st, w, g)
            q = st.weights
            qq = np.outer(q, q.conj())
            for m in range(2):
                direct = np.linalg.norm(
                    np.diag(st.waveguide_diag) @ st.weight_matrix() @ w[m]
                ) ** 2
                lifted = np.real(np.trace(data.b_tilde[m] @ qq))
                assert lifted == pytest.approx(direct, rel=1e-10)

    def test_received_amplitude_cross_check(self):
        rng = np.random.default_rng(10)
        for _ in range(8):
            st = random_state(rng, attenuated=True)
            w = [rng.standard_normal(2) + 1j * rng.standard_normal(2) for _ in range(2)]
            g = [rng.standard_normal(6) + 1j * rng.standard_normal(6) for _ in range(2)]
            data = dma.build_weight_sdp(st, w, g)
            q = st.weights
            qq = np.outer(q, q.conj())
            for k in range(2):
                for m in range(2):
                    direct = np.vdot(
                        g[k], np.diag(st.waveguide_diag) @ st.weight_matrix() @ w[m]
                    )
                    via_c = np.vdot(data.c_tilde[k, m], q)
                    assert via_c == pytest.approx(direct, rel=1e-10)
                    lifted = np.real(np.trace(data.big_c_tilde[k, m] @ qq))
                    assert lifted == pytest.approx(abs(direct) ** 2, rel=1e-10)

    def test_matches_dense_kron_reduction(self):
        rng = np.random.default_rng(11)
        st = random_state(rng, attenuated=True)
        w = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        g = rng.standard_normal(6) + 1j * rng.standard_normal(6)
        data = dma.build_weight_sdp(st, [w, w], [g, g])
        reduced = dma.dense_weight_reduction(st, w)  # (N, N) dense aperture map
        b_dense = reduced.conj().T @ reduced
        assert np.allclose(b_dense, data.b_tilde[0], atol=1e-12)
        row = dma.dense_weight_reduction(st, w, channel=g)
        assert np.allclose(row.conj(), data.c_tilde[0, 0], atol=1e-12)

    def test_big_c_rank_one(self):
        rng = np.random.default_rng(12)
        st = random_state(rng)
        w = [rng.standard_normal(2) + 1j * rng.standard_normal(2)]
        g = [rng.standard_normal(6) + 1j * rng.standard_normal(6)]
        data = dma.build_weight_sdp(st, w, g)
        vals = np.linalg.eigvalsh(data.big_c_tilde[0, 0])
        assert vals[-2] <= 1e-10 * vals[-1]

    def test_zero_precoders(self):
        rng = np.random.default_rng(13)
        st = random_state(rng)
        data = dma.build_weight_sdp(st, [np.zeros(2)], [np.ones(6)])
        assert np.all(data.b_tilde == 0)
        assert np.all(data.c_tilde == 0)

    def test_beam_count_enforced(self):
        rng = np.random.default_rng(14)
        st = random_state(rng)
        with pytest.raises(ValueError):
            dma.build_weight_sdp(st, [np.ones(2)], [np.ones(6), np.ones(6)])


class TestExtractWeights:
    def test_shared_contract(self):
        rng = np.random.default_rng(15)
        q = rng.standard_normal(6) + 1j * rng.standard_normal(6)
        vec_out, ratio = dma.extract_weight_vector(np.outer(q, q.conj()))
        assert ratio <= 1e-9
        assert np.allclose(np.abs(vec_out), np.abs(q), atol=1e-9)
