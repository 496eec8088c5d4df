"""Randomized cross-checks between the synchronization tests."""

from collections import OrderedDict
from dataclasses import dataclass
from typing import Dict

import numpy as np
from tqdm import tqdm

from . import analysis
from .generators import random_network, random_parameters
from .linalg import scale_of
from .utils import logger, time_operation

PARAMETER_PAIRS = 5


@dataclass
class CheckTally:
    passed: int = 0
    total: int = 0

    def record(self, ok: bool) -> None:
        self.total += 1
        self.passed += bool(ok)

    @property
    def ok(self) -> bool:
        return self.passed == self.total


def _witness_valid(net, witness) -> bool:
    ma, ka = net.augmented()
    _, b, _ = net.laplacians()
    scale = max(scale_of(ka), scale_of(ma), scale_of(b))
    return (
        witness.residual_pencil <= 1e-8 * scale
        and witness.residual_b <= 1e-8 * scale
        and witness.distance_from_consensus >= 1e-6
        and witness.omega > 0.0
    )


@time_operation("verify")
def run_verification(samples: int = 100, seed: int = 2024, progress: bool = False) -> Dict[str, CheckTally]:
    """Run every randomized agreement check on ``samples`` seeded instances each.

    The oracle-equivalence check uses twice as many networks as the others.
    """
    rng = np.random.default_rng(seed)
    tallies: Dict[str, CheckTally] = OrderedDict(
        (name, CheckTally()) for name in (
            "oracle_equivalence", "witness_residuals", "position_velocity_reduction",
            "velocity_only_reduction", "connected_b_soundness", "edge_isolated_equivalence",
            "edge_isolated_parameter_independence", "pq_splitting",
        )
    )

    with tqdm(total=7 * samples, desc="verify", unit="case", disable=not progress) as bar:
        for _ in range(2 * samples):
            net = random_network(rng)
            verdict = analysis.test_general(net)
            witness = analysis.kernel_oracle(net)
            tallies["oracle_equivalence"].record((witness is None) == verdict.synchronizes)
            if witness is not None:
                tallies["witness_residuals"].record(_witness_valid(net, witness))
            bar.update(1)

        for _ in range(samples):
            net = random_network(rng, edgeless_inertial=True)
            reduced = analysis.test_position_velocity(net.dissipative, net.restorative, net.m0, net.k0)
            tallies["position_velocity_reduction"].record(
                reduced.synchronizes == analysis.test_general(net).synchronizes
            )

            net = random_network(rng, edgeless_inertial=True, edgeless_restorative=True)
            reduced = analysis.test_velocity_only(net.dissipative, net.m0, net.k0)
            tallies["velocity_only_reduction"].record(
                reduced.synchronizes == analysis.test_general(net).synchronizes
            )

            net = random_network(rng, connected_dissipative=True)
            tallies["connected_b_soundness"].record(analysis.test_general(net).synchronizes)

            net = random_network(rng, edge_isolated=True)
            structural = analysis.test_edge_isolated(net).synchronizes
            outcomes = set()
            for _ in range(PARAMETER_PAIRS):
                m0, k0 = random_parameters(rng)
                general = analysis.test_general(net.with_parameters(m0, k0)).synchronizes
                tallies["edge_isolated_equivalence"].record(general == structural)
                outcomes.add(general)
            tallies["edge_isolated_parameter_independence"].record(len(outcomes) == 1)

            q = int(rng.integers(2, 9))
            p, qm = analysis.make_pq_split_instance(int(rng.integers(0, 2**31)), q)
            tol = 1e-8 * scale_of(p - qm)
            tallies["pq_splitting"].record(all(
                check.residual_p <= tol and check.residual_q <= tol
                for check in analysis.pq_splitting_residuals(p, qm)
            ))
            bar.update(5)

    for name, tally in tallies.items():
        log = logger.info if tally.ok else logger.error
        log(f"{name}: {tally.passed}/{tally.total}")
    return tallies
