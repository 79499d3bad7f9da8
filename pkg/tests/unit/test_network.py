"""
Unit tests for network module.
"""

from dataclasses import replace

import numpy as np
import pytest
from scipy.stats import ks_2samp

from src.channel_model.propagation import pathloss_los, pathloss_nlos
from src.common.errors import ConfigurationError, InvalidArgumentError, OutputError
from src.monte_carlo.rng import substream
from src.network import (
    allocate_pilots,
    assign_serving_bs,
    bs_grid,
    copilot_mask,
    copilot_set,
    drop_ues,
    dump_network,
    grid_side,
    realize_network,
    world_size,
    wrap_displacement,
)


class TestLayout:
    """Test the wrap-around grid."""

    def test_grid_side(self):
        """Test perfect squares."""
        assert grid_side(1) == 1
        assert grid_side(16) == 4

    def test_non_square_rejected(self):
        """Test non-square cell counts."""
        with pytest.raises(ConfigurationError):
            grid_side(5)

    def test_bs_positions(self, small_config):
        """Test BS j sits in row j // side, column j % side."""
        bs = bs_grid(small_config)
        assert bs.shape == (4, 2)
        assert np.allclose(bs[0], [125.0, 125.0])
        assert np.allclose(bs[1], [375.0, 125.0])
        assert np.allclose(bs[2], [125.0, 375.0])
        assert world_size(small_config) == pytest.approx(500.0)

    def test_wrap_shortens_distance(self):
        """Test the shifted copy across the border wins."""
        d, angle = wrap_displacement([10.0, 10.0], [490.0, 10.0], 500.0)
        assert d == pytest.approx(20.0)
        assert angle == pytest.approx(np.pi)

    def test_direct_distance_kept(self):
        """Test nearby points are not wrapped."""
        d, angle = wrap_displacement([100.0, 100.0], [100.0, 150.0], 500.0)
        assert d == pytest.approx(50.0)
        assert angle == pytest.approx(np.pi / 2)

    def test_wrap_bounded_by_half_diagonal(self):
        """Test no wrap distance exceeds half the world diagonal."""
        rng = np.random.default_rng(0)
        a = rng.uniform(0, 500, size=(200, 2))
        b = rng.uniform(0, 500, size=(200, 2))
        d, _ = wrap_displacement(a, b, 500.0)
        assert d.shape == (200,)
        assert np.all(d <= 250.0 * np.sqrt(2) + 1e-9)

    def test_broadcast_table(self, small_config):
        """Test an (L, N) table from broadcasting BSs against UEs."""
        bs = bs_grid(small_config)
        ues = np.array([[10.0, 20.0], [260.0, 300.0], [499.0, 1.0]])
        d, angle = wrap_displacement(bs[:, np.newaxis, :], ues[np.newaxis, :, :], 500.0)
        assert d.shape == angle.shape == (4, 3)
        d01, _ = wrap_displacement(bs[0], ues[1], 500.0)
        assert d[0, 1] == pytest.approx(d01)

    def test_drop_respects_minimum_distance(self, small_config):
        """Test every UE is at least 35 m from its own BS and inside its cell."""
        rng = np.random.default_rng(1)
        bs = bs_grid(small_config)
        for _ in range(20):
            ues = drop_ues(small_config, rng)
            assert ues.shape == (8, 2)
            own = bs[np.arange(8) // 2]
            d, _ = wrap_displacement(own, ues, world_size(small_config))
            assert np.all(d >= 35.0)
            assert np.all(np.abs(ues - own) <= 125.0)

    def test_drop_uniform_around_center(self, small_config):
        """Test the mean offset from the cell center vanishes."""
        rng = np.random.default_rng(2)
        bs = bs_grid(small_config)
        offsets = np.concatenate([drop_ues(small_config, rng) - bs[np.arange(8) // 2] for _ in range(500)])
        # uniform on +-125 has std ~72; 4000 samples give a standard error ~1.2 m
        assert np.all(np.abs(offsets.mean(axis=0)) < 6.0)


class TestAssignment:
    """Test serving-BS assignment and pilot allocation."""

    def test_argmax(self):
        """Test the strongest BS serves."""
        table = np.array([[-80.0, -90.0], [-70.0, -95.0]])
        assert assign_serving_bs(table).tolist() == [1, 0]

    def test_tie_goes_to_lowest_index(self):
        """Test ties."""
        assert assign_serving_bs(np.array([[-70.0], [-70.0]])).tolist() == [0]

    def test_matches_brute_force(self):
        """Test against an explicit scan."""
        rng = np.random.default_rng(3)
        table = rng.normal(-100, 10, size=(9, 30))
        serving = assign_serving_bs(table)
        for ue in range(30):
            best = 0
            for bs in range(9):
                if table[bs, ue] > table[best, ue]:
                    best = bs
            assert serving[ue] == best

    def test_common_offset_keeps_assignment(self):
        """Test adding one constant to every dB entry changes nothing."""
        table = np.random.default_rng(6).normal(-100, 10, size=(9, 30))
        serving = assign_serving_bs(table)
        for offset in (-40.0, 0.5, 37.5):
            assert np.array_equal(assign_serving_bs(table + offset), serving)

    def test_wrong_rank_rejected(self):
        """Test a 1-D table."""
        with pytest.raises(InvalidArgumentError):
            assign_serving_bs(np.zeros(3))

    def test_pilots_distinct_within_cell(self):
        """Test no intra-cell pilot collisions."""
        rng = np.random.default_rng(4)
        pilots = allocate_pilots(16, 10, 10, rng)
        assert pilots.shape == (160,)
        for cell in range(16):
            assert sorted(pilots[cell * 10:(cell + 1) * 10]) == list(range(10))

    def test_pilots_in_range(self):
        """Test indices lie in [0, tau_p)."""
        pilots = allocate_pilots(4, 2, 5, np.random.default_rng(5))
        assert pilots.min() >= 0 and pilots.max() < 5
        for cell in range(4):
            assert pilots[2 * cell] != pilots[2 * cell + 1]

    def test_pilot_marginal_uniform(self):
        """Test every pilot index is used with probability 1/tau_p."""
        rng = np.random.default_rng(7)
        draws = 20_000
        tau_p = 5
        pilots = np.stack([allocate_pilots(1, 2, tau_p, rng) for _ in range(draws)])
        tolerance = 5 * np.sqrt((1 / tau_p) * (1 - 1 / tau_p) / draws)
        for position in range(2):
            frequencies = np.bincount(pilots[:, position], minlength=tau_p) / draws
            assert np.all(np.abs(frequencies - 1 / tau_p) <= tolerance)

    def test_too_many_ues_rejected(self):
        """Test K > tau_p."""
        with pytest.raises(ConfigurationError):
            allocate_pilots(4, 3, 2, np.random.default_rng(0))

    def test_copilot_mask_and_set(self):
        """Test copilot sets contain the UE itself and its pilot sharers."""
        pilots = np.array([0, 1, 1, 0, 0, 1])
        assert copilot_mask(pilots, 0).tolist() == [True, False, False, True, True, False]
        assert copilot_set(pilots, 1, 2) == frozenset({(0, 1), (1, 0), (2, 1)})

    def test_copilot_out_of_range(self):
        """Test an invalid UE index."""
        with pytest.raises(InvalidArgumentError):
            copilot_mask(np.array([0, 1]), 2)


class TestNetworkRealization:
    """Test realize_network and the realization views."""

    def test_shapes(self, small_network):
        """Test table shapes."""
        net = small_network
        assert net.distances.shape == (4, 8)
        assert net.beta_los_db.shape == net.beta_nlos_db.shape == (4, 8)
        assert net.serving.shape == net.pilots.shape == net.powers.shape == (8,)
        assert np.allclose(net.powers, 10.0)

    def test_read_only(self, small_network):
        """Test stored arrays are immutable."""
        with pytest.raises(ValueError):
            small_network.serving[0] = 3

    def test_own_cell_distance(self, small_network):
        """Test the minimum distance to the drop cell's BS."""
        own = np.arange(8) // 2
        assert np.all(small_network.distances[own, np.arange(8)] >= 35.0)

    def test_gains_follow_shadow(self, small_network, small_config):
        """Test both gain tables use the stored shadow variables."""
        net = small_network
        assert np.allclose(net.beta_los_db, pathloss_los(net.distances, small_config.shadow_std_los_db * net.shadow))
        assert np.allclose(net.beta_nlos_db, pathloss_nlos(net.distances, small_config.shadow_std_nlos_db * net.shadow))

    def test_serving_is_strongest_nlos(self, small_network):
        """Test the default assignment basis."""
        assert np.array_equal(small_network.serving, np.argmax(small_network.beta_nlos_db, axis=0))

    def test_serving_distance_same_in_every_cell(self, small_config):
        """Test wrap-around makes the serving-distance distribution cell independent."""
        K = small_config.ues_per_cell
        per_cell = [[] for _ in range(small_config.num_cells)]
        for drop in range(300):
            net = realize_network(small_config, substream(8, drop, 0))
            distances = net.distances[net.serving, np.arange(net.num_ues)]
            for ue, distance in enumerate(distances):
                per_cell[ue // K].append(distance)
        for cell in range(1, small_config.num_cells):
            assert ks_2samp(per_cell[0], per_cell[cell]).pvalue > 1e-3

    def test_los_basis(self, small_config):
        """Test assignment on the LoS table."""
        net = realize_network(small_config, substream(3, 0, 0), assignment_basis='los')
        assert np.array_equal(net.serving, np.argmax(net.beta_los_db, axis=0))

    def test_unknown_basis_rejected(self, small_config):
        """Test invalid assignment basis."""
        with pytest.raises(InvalidArgumentError):
            realize_network(small_config, substream(3, 0, 0), assignment_basis='power')

    def test_deterministic(self, small_config):
        """Test identical substreams give identical drops."""
        a = realize_network(small_config, substream(9, 2, 0), drop_id=2)
        b = realize_network(small_config, substream(9, 2, 0), drop_id=2)
        assert a.geometry_digest(include_means=True) == b.geometry_digest(include_means=True)
        c = realize_network(small_config, substream(9, 3, 0), drop_id=2)
        assert not np.array_equal(a.ue_positions, c.ue_positions)

    def test_links_cached(self, small_network):
        """Test per-BS link statistics are built once."""
        assert small_network.links_at(1) is small_network.links_at(1)
        assert small_network.links_at(1).shape == (8, 4)

    def test_link_view(self, small_network):
        """Test single-link access."""
        link = small_network.link(2, 5)
        assert link.beta_nlos_db == pytest.approx(small_network.beta_nlos_db[2, 5])
        assert np.allclose(np.diag(link.cov).real, 10 ** (small_network.beta_nlos_db[2, 5] / 10))

    def test_bs_out_of_range(self, small_network):
        """Test invalid BS index."""
        with pytest.raises(InvalidArgumentError):
            small_network.links_at(4)

    def test_with_fading_shares_geometry(self, small_network):
        """Test Rician and Rayleigh views of a drop differ only in the LoS means."""
        rayleigh = small_network.with_fading(True)
        assert rayleigh.geometry_digest() == small_network.geometry_digest()
        assert rayleigh.geometry_digest(include_means=True) != small_network.geometry_digest(include_means=True)
        assert np.allclose(rayleigh.links_at(0).means, 0.0)
        assert np.allclose(rayleigh.links_at(0).covs, small_network.links_at(0).covs)

    def test_with_antennas(self, small_network):
        """Test changing M keeps the drop."""
        bigger = small_network.with_antennas(16)
        assert bigger.config.num_antennas == 16
        assert bigger.links_at(0).shape == (8, 16)
        assert np.array_equal(bigger.serving, small_network.serving)
        assert np.array_equal(bigger.pilots, small_network.pilots)

    def test_ue_id_and_served_by(self, small_network):
        """Test UE labelling and the per-BS served lists."""
        assert small_network.ue_id(5) == (2, 1)
        served = np.concatenate([small_network.served_by(bs) for bs in range(4)])
        assert sorted(served.tolist()) == list(range(8))

    def test_copilot_sets(self, small_network):
        """Test full pilot reuse puts one UE per cell in every copilot set."""
        sets = small_network.copilot_sets()
        assert len(sets) == 8
        for ue, members in enumerate(sets):
            assert small_network.ue_id(ue) in members
            assert len(members) == 4
            assert sorted(cell for cell, _ in members) == [0, 1, 2, 3]

    def test_invalid_arrays_rejected(self, small_network):
        """Test validation of pilots."""
        with pytest.raises(InvalidArgumentError):
            replace(small_network, pilots=np.full(8, 7))


class TestDump:
    """Test the text dump."""

    def test_records(self, small_network, tmp_path):
        """Test record counts and column layout."""
        path = dump_network(small_network, tmp_path / "dump" / "drop.txt")
        lines = path.read_text(encoding="utf-8").splitlines()
        kinds = [line.split()[0] for line in lines if not line.startswith("#")]
        assert kinds.count("BS") == 4
        assert kinds.count("UE") == 8
        assert kinds.count("LINK") == 32
        ue_line = next(line for line in lines if line.startswith("UE 5 "))
        fields = ue_line.split()
        assert fields[2:4] == ["2", "1"]
        assert int(fields[6]) == small_network.serving[5]
        assert int(fields[7]) == small_network.pilots[5]

    def test_unwritable_path(self, small_network, tmp_path):
        """Test write failures raise OutputError with the path."""
        blocker = tmp_path / "file"
        blocker.write_text("x")
        with pytest.raises(OutputError) as excinfo:
            dump_network(small_network, blocker / "drop.txt")
        assert excinfo.value.path == blocker / "drop.txt"
