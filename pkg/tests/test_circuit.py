from fractions import Fraction

import numpy as np
import pytest

from harmsync.circuit import (
    format_node_equation,
    netlist_to_network,
    network_to_netlist,
    node_equations,
    uncoupled_frequency,
    validate_netlist,
)
from harmsync.exceptions import NetlistError
from harmsync.models import Coupler, CouplerKind, Netlist, Tank


def test_three_tank_node_equations(three_tank_netlist):
    equations = node_equations(netlist_to_network(three_tank_netlist))
    c0, inv_l0 = Fraction(2), Fraction(2)
    c31, g23, inv_l12 = Fraction(1, 4), Fraction(1, 4), Fraction(2)

    # c0 x1'' + x1/l0 + c31 (x1'' - x3'') + (x1 - x2)/l12 = 0
    assert equations[0] == {
        "acc": {1: c0 + c31, 3: -c31},
        "vel": {},
        "pos": {1: inv_l0 + inv_l12, 2: -inv_l12},
    }
    # c0 x2'' + x2/l0 + (x2' - x3')/r23 + (x2 - x1)/l12 = 0
    assert equations[1] == {
        "acc": {2: c0},
        "vel": {2: g23, 3: -g23},
        "pos": {2: inv_l0 + inv_l12, 1: -inv_l12},
    }
    # c0 x3'' + x3/l0 + c31 (x3'' - x1'') + (x3' - x2')/r23 = 0
    assert equations[2] == {
        "acc": {3: c0 + c31, 1: -c31},
        "vel": {3: g23, 2: -g23},
        "pos": {3: inv_l0},
    }


def test_format_node_equation(three_tank_netlist):
    equations = node_equations(netlist_to_network(three_tank_netlist))
    assert format_node_equation(equations[0]) == "9/4 x1'' - 1/4 x3'' + 4 x1 - 2 x2 = 0"
    assert format_node_equation(equations[1]) == "2 x2'' + 1/4 x2' - 1/4 x3' - 2 x1 + 4 x2 = 0"


def test_tank_maps_to_oscillator_parameters():
    net = netlist_to_network(Netlist(q=2, tank=Tank(c0=2.0, l0=0.5)))
    assert (net.m0, net.k0) == (2.0, 2.0)
    assert net.omega0 == 1.0


def test_six_tank_netlist_reproduces_coupling_laplacians(six_tank_netlist, sync_net):
    net = netlist_to_network(six_tank_netlist)
    for ours, expected in zip(net.laplacians(), sync_net.laplacians()):
        assert np.allclose(ours, expected, rtol=0.0, atol=1e-12)
    assert (net.m0, net.k0) == (2.0, 2.0)


@pytest.mark.parametrize("c0, l0, omega0", [(2.0, 0.5, 1.0), (1.0, 1.0, 1.0), (4.0, 1.0, 0.5)])
def test_uncoupled_frequency(c0, l0, omega0):
    assert uncoupled_frequency(Netlist(q=1, tank=Tank(c0=c0, l0=l0))) == pytest.approx(omega0)


def test_round_trip_is_exact(three_tank_netlist):
    couplers = network_to_netlist(netlist_to_network(three_tank_netlist)).couplers
    emitted = {(c.kind, min(c.i, c.j), max(c.i, c.j)): c.value for c in couplers}
    expected = {(c.kind, min(c.i, c.j), max(c.i, c.j)): c.value for c in three_tank_netlist.couplers}
    assert emitted == expected


@pytest.mark.parametrize("coupler, message", [
    (Coupler(CouplerKind.RESISTOR, 1, 2, 0.0), "positive value"),
    (Coupler(CouplerKind.INDUCTOR, 1, 1, 1.0), "to itself"),
    (Coupler(CouplerKind.CAPACITOR, 1, 4, 1.0), "outside"),
])
def test_invalid_couplers(coupler, message):
    with pytest.raises(NetlistError, match=message):
        validate_netlist(Netlist(q=3, tank=Tank(1.0, 1.0), couplers=(coupler,)))


def test_parallel_couplers_of_one_kind_are_rejected():
    nl = Netlist(q=2, tank=Tank(1.0, 1.0), couplers=(
        Coupler(CouplerKind.RESISTOR, 1, 2, 1.0),
        Coupler(CouplerKind.RESISTOR, 2, 1, 2.0),
    ))
    with pytest.raises(NetlistError, match="More than one R"):
        netlist_to_network(nl)


def test_different_kinds_on_one_pair_are_allowed():
    nl = Netlist(q=2, tank=Tank(1.0, 1.0), couplers=(
        Coupler(CouplerKind.RESISTOR, 1, 2, 1.0),
        Coupler(CouplerKind.INDUCTOR, 1, 2, 1.0),
    ))
    net = netlist_to_network(nl)
    assert len(net.dissipative.edges) == len(net.restorative.edges) == 1


def test_invalid_tank():
    with pytest.raises(NetlistError, match="c0"):
        validate_netlist(Netlist(q=1, tank=Tank(c0=0.0, l0=1.0)))
