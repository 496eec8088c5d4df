import numpy as np
import pytest

from harmsync import analysis
from harmsync.analysis import test_connected_B, test_general
from harmsync.exceptions import DimensionError, DomainError, PreconditionError, StructuralError
from harmsync.graphs import CouplingGraph
from harmsync.models import NetworkSpec, SyncMethod

from .conftest import NONSYNC_SPECTRUM, SYNC_SPECTRUM


def _net(q, inertial=(), dissipative=(), restorative=(), m0=1.0, k0=1.0):
    return NetworkSpec(
        inertial=CouplingGraph.from_edges(q, inertial),
        dissipative=CouplingGraph.from_edges(q, dissipative),
        restorative=CouplingGraph.from_edges(q, restorative),
        m0=m0,
        k0=k0,
    )


def _graph(q, *edges):
    return CouplingGraph.from_edges(q, edges)


class TestComplexLaplacian:
    def test_structure(self, sync_net):
        cl = analysis.build_lambda(sync_net)
        assert np.allclose(cl.matrix, cl.d + 1j * cl.r - 1j * cl.omega0_sq * np.eye(6), atol=1e-10)
        assert np.allclose(cl.matrix @ np.ones(6), 0.0, atol=1e-9)
        assert np.allclose(cl.matrix, cl.matrix.T, atol=1e-10)
        assert cl.omega0_sq == 1.0

    def test_spectrum_in_closed_right_half_plane(self, sync_net, nonsync_net):
        for net in (sync_net, nonsync_net):
            spectrum = analysis.test_general(net).spectrum
            assert np.all(spectrum.values.real >= 0.0)


class TestGeneral:
    def test_synchronizing_six_tanks(self, sync_net):
        verdict = analysis.test_general(sync_net)
        assert verdict.synchronizes
        assert verdict.method is SyncMethod.GENERAL
        assert verdict.parameter_dependent
        assert len(verdict.spectrum) == 6
        for computed, expected in zip(verdict.spectrum.values, SYNC_SPECTRUM):
            assert abs(computed.real - expected.real) <= 5e-4
            assert abs(computed.imag - expected.imag) <= 5e-4
        assert verdict.margin == pytest.approx(0.0078, abs=5e-4)

    def test_non_synchronizing_six_tanks(self, nonsync_net):
        verdict = analysis.test_general(nonsync_net)
        assert not verdict.synchronizes
        assert verdict.lambda2.real == 0.0
        assert abs(verdict.spectrum.raw_nth(2).real) <= analysis.sync_tolerance(analysis.build_lambda(nonsync_net).matrix)
        assert abs(verdict.lambda2 - 3.0j) <= 1e-6
        for computed, expected in zip(verdict.spectrum.values[2:], NONSYNC_SPECTRUM[2:]):
            assert abs(computed.real - expected.real) <= 5e-4
            assert abs(computed.imag - expected.imag) <= 5e-4

    def test_same_frequency_opposite_verdicts(self, sync_net, nonsync_net):
        assert sync_net.omega0 == nonsync_net.omega0 == 1.0
        assert analysis.test_general(sync_net).synchronizes
        assert not analysis.test_general(nonsync_net).synchronizes

    def test_single_oscillator(self):
        verdict = analysis.test_general(_net(1))
        assert verdict.synchronizes
        assert verdict.lambda2 is None
        assert verdict.margin is None

    def test_two_nodes_with_damper(self):
        assert analysis.test_general(_net(2, dissipative=[(1, 2, 1.0)])).synchronizes

    def test_edgeless_network_does_not_synchronize(self):
        verdict = analysis.test_general(_net(3))
        assert not verdict.synchronizes
        assert verdict.margin == 0.0


class TestVelocityOnly:
    def test_path(self):
        verdict = analysis.test_velocity_only(_graph(3, (1, 2, 1.0), (2, 3, 1.0)), 1.0, 1.0)
        assert verdict.synchronizes
        assert verdict.lambda2 == pytest.approx(1.0)

    def test_single_edge_on_three_nodes(self):
        verdict = analysis.test_velocity_only(_graph(3, (1, 2, 1.0)), 1.0, 1.0)
        assert not verdict.synchronizes
        assert verdict.margin == 0.0

    def test_complete_graph(self):
        verdict = analysis.test_velocity_only(_graph(3, (1, 2, 1.0), (1, 3, 1.0), (2, 3, 1.0)), 1.0, 1.0)
        assert verdict.synchronizes
        assert verdict.lambda2 == pytest.approx(3.0)

    def test_rejects_bad_parameters(self):
        with pytest.raises(DomainError):
            analysis.test_velocity_only(_graph(2, (1, 2, 1.0)), 0.0, 1.0)


class TestPositionVelocity:
    def test_equal_graphs(self):
        path = _graph(3, (1, 2, 1.0), (2, 3, 1.0))
        assert analysis.test_position_velocity(path, path, 1.0, 1.0).synchronizes

    def test_position_coupling_alone(self):
        verdict = analysis.test_position_velocity(
            CouplingGraph.edgeless(3), _graph(3, (1, 2, 1.0), (2, 3, 1.0)), 1.0, 1.0
        )
        assert not verdict.synchronizes
        assert verdict.margin == 0.0

    def test_mixed_chain_matches_general(self):
        b = _graph(3, (1, 2, 1.0))
        k = _graph(3, (2, 3, 1.0))
        verdict = analysis.test_position_velocity(b, k, 1.0, 1.0)
        general = analysis.test_general(NetworkSpec(CouplingGraph.edgeless(3), b, k, 1.0, 1.0))
        assert verdict.synchronizes == general.synchronizes
        assert verdict.synchronizes

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            analysis.test_position_velocity(CouplingGraph.edgeless(2), CouplingGraph.edgeless(3), 1.0, 1.0)


class TestAccelVelocity:
    def test_inertial_coupling_alone(self):
        verdict = analysis.test_accel_velocity(_graph(3, (1, 2, 1.0), (2, 3, 1.0)), CouplingGraph.edgeless(3), 1.0, 1.0)
        assert not verdict.synchronizes

    def test_damping_alone(self):
        verdict = analysis.test_accel_velocity(CouplingGraph.edgeless(3), _graph(3, (1, 2, 1.0), (2, 3, 1.0)), 1.0, 1.0)
        assert verdict.synchronizes

    def test_mixed_chain_matches_general(self):
        m = _graph(3, (2, 3, 1.0))
        b = _graph(3, (1, 2, 1.0))
        verdict = analysis.test_accel_velocity(m, b, 1.0, 1.0)
        for m0, k0 in ((1.0, 1.0), (0.3, 7.0), (4.0, 0.5)):
            general = analysis.test_general(NetworkSpec(m, b, CouplingGraph.edgeless(3), m0, k0))
            assert general.synchronizes == verdict.synchronizes


class TestEdgeIsolated:
    def test_disjoint_pairs_without_damping(self):
        net = _net(4, inertial=[(1, 2, 1.0)], restorative=[(3, 4, 1.0)])
        verdict = analysis.test_edge_isolated(net)
        assert not verdict.synchronizes
        assert np.allclose(verdict.spectrum.values, [0.0, 0.0, -2.0j, 2.0j], atol=1e-10)

    def test_reduces_to_damping_test(self):
        verdict = analysis.test_edge_isolated(_net(2, dissipative=[(1, 2, 1.0)]))
        assert verdict.synchronizes
        assert verdict.lambda2 == pytest.approx(2.0)

    def test_requires_edge_isolation(self, sync_net):
        with pytest.raises(StructuralError, match="graphs not edge-isolated"):
            analysis.test_edge_isolated(sync_net)

    def test_parameter_independent(self):
        net = _net(5, inertial=[(1, 2, 0.7)], dissipative=[(2, 3, 1.3), (4, 5, 0.4)], restorative=[(3, 4, 2.0), (4, 5, 1.0)])
        structural = analysis.test_edge_isolated(net).synchronizes
        for m0, k0 in ((1.0, 1.0), (0.2, 9.0), (6.0, 0.3), (2.5, 2.5)):
            general = analysis.test_general(net.with_parameters(m0, k0))
            assert general.synchronizes == structural
            assert not general.parameter_dependent


class TestConnectedB:
    def test_connected_damping_is_conclusive(self):
        net = _net(3, inertial=[(1, 3, 2.0)], dissipative=[(1, 2, 1.0), (2, 3, 1.0)], restorative=[(1, 2, 4.0)])
        verdict = analysis.test_connected_B(net)
        assert verdict.synchronizes
        assert verdict.conclusive

    def test_disconnected_damping_defers(self, sync_net):
        verdict = analysis.test_connected_B(sync_net)
        assert not verdict.conclusive
        assert verdict.method is SyncMethod.CONNECTED_B_SUFFICIENT

    def test_single_oscillator(self):
        verdict = analysis.test_connected_B(_net(1))
        assert verdict.synchronizes
        assert verdict.conclusive


class TestKernelOracle:
    def test_witness_for_non_synchronizing_six_tanks(self, nonsync_net):
        witness = analysis.kernel_oracle(nonsync_net)
        assert witness is not None
        assert witness.omega == pytest.approx(2.0, abs=1e-8)
        assert witness.mu == pytest.approx(3.0, abs=1e-8)
        assert witness.residual_pencil <= 1e-8
        assert witness.residual_b <= 1e-8
        assert witness.distance_from_consensus >= 1e-6

        ma, ka = nonsync_net.augmented()
        _, b, _ = nonsync_net.laplacians()
        assert np.linalg.norm((ka - 4.0 * ma) @ witness.xi) <= 1e-7
        assert np.linalg.norm(b @ witness.xi) <= 1e-8

    def test_no_witness_when_synchronizing(self, sync_net):
        assert analysis.kernel_oracle(sync_net) is None

    def test_isolated_node_oscillates_at_natural_frequency(self):
        witness = analysis.kernel_oracle(_net(3, dissipative=[(1, 2, 1.0)], m0=1.0, k0=4.0))
        assert witness is not None
        assert witness.omega == pytest.approx(2.0)
        assert witness.mu == pytest.approx(0.0, abs=1e-9)

    def test_trivial_cases(self):
        assert analysis.kernel_oracle(_net(1)) is None
        assert analysis.kernel_oracle(_net(3, dissipative=[(1, 2, 1.0), (2, 3, 1.0)])) is None


class TestStructure:
    def test_six_tanks(self, sync_net):
        structure = analysis.structure_report(sync_net)
        assert not structure.b_connected
        assert not structure.m_k_edge_isolated
        assert structure.union_connected
        assert structure.applicable_tests == (SyncMethod.GENERAL,)
        assert structure.recommendation is SyncMethod.GENERAL

    def test_connected_damping_recommends_shortcut(self):
        structure = analysis.structure_report(_net(3, dissipative=[(1, 2, 1.0), (2, 3, 1.0)]))
        assert structure.b_connected
        assert structure.recommendation is SyncMethod.CONNECTED_B_SUFFICIENT
        assert SyncMethod.VELOCITY_ONLY in structure.applicable_tests

    def test_edgeless_graphs_are_edge_isolated(self):
        structure = analysis.structure_report(_net(3))
        assert not structure.b_connected
        assert not structure.union_connected
        assert structure.m_k_edge_isolated
        assert structure.recommendation is SyncMethod.EDGE_ISOLATED


class TestAnalyze:
    def test_synchronizing_report(self, sync_net):
        report = analysis.analyze(sync_net)
        assert report.synchronizes
        assert report.witness is None
        assert report.general.synchronizes
        assert not report.verdict(SyncMethod.CONNECTED_B_SUFFICIENT).conclusive
        assert len(report.spectrum) == 6
        with pytest.raises(KeyError):
            report.verdict(SyncMethod.VELOCITY_ONLY)

    def test_non_synchronizing_report(self, nonsync_net):
        report = analysis.analyze(nonsync_net)
        assert not report.synchronizes
        assert report.witness is not None
        assert report.witness.omega == pytest.approx(2.0, abs=1e-8)

    def test_runs_every_applicable_shortcut(self):
        report = analysis.analyze(_net(3, dissipative=[(1, 2, 1.0), (2, 3, 1.0)]))
        methods = {verdict.method for verdict in report.verdicts}
        assert methods == {
            SyncMethod.GENERAL,
            SyncMethod.CONNECTED_B_SUFFICIENT,
            SyncMethod.VELOCITY_ONLY,
            SyncMethod.POSITION_VELOCITY,
            SyncMethod.ACCEL_VELOCITY,
            SyncMethod.EDGE_ISOLATED,
        }
        assert all(verdict.synchronizes for verdict in report.verdicts)

    def test_zero_mode_is_consensus(self, sync_net):
        cl = analysis.build_lambda(sync_net)
        assert analysis.zero_mode_alignment(cl.matrix) == pytest.approx(1.0, abs=1e-8)


class TestPQSplitting:
    def test_generated_instances_split(self):
        for seed in range(100):
            p, q = analysis.make_pq_split_instance(seed, 2 + seed % 7)
            assert np.allclose(p @ q, 0.0, atol=1e-12)
            tol = 1e-8 * max(1.0, np.linalg.norm(p - q))
            for check in analysis.pq_splitting_residuals(p, q):
                assert check.residual_p <= tol
                assert check.residual_q <= tol

    def test_sign_cases(self):
        p = np.diag([2.0, 0.0, 0.0])
        q = np.diag([0.0, 3.0, 0.0])
        signs = [check.sign for check in analysis.pq_splitting_residuals(p, q)]
        assert signs == [-1, 0, 1]

    def test_needs_two_indices(self):
        with pytest.raises(PreconditionError):
            analysis.make_pq_split_instance(0, 1)


def test_verdict_functions_imported_by_name_are_not_collected(sync_net):
    for fn in (test_general, analysis.test_velocity_only, analysis.test_position_velocity,
               analysis.test_accel_velocity, analysis.test_edge_isolated, test_connected_B):
        assert fn.__test__ is False
    assert test_general(sync_net).synchronizes
