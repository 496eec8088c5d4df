import json

import pytest

from harmsync.generators import six_tank_network
from harmsync.models import Coupler, CouplerKind, Netlist, Tank
from harmsync.reports import dumps, netlist_to_dict, network_to_dict

# Six tanks that synchronize for (m0, k0) = (2, 2) and not for (1, 1)
SYNC_SPECTRUM = [
    0.0,
    0.0078 - 0.1409j,
    0.0088 + 1.5747j,
    0.0434 + 1.9338j,
    0.4452 + 0.1386j,
    0.4947 + 1.4484j,
]
NONSYNC_SPECTRUM = [
    0.0,
    3.0j,
    0.0107 - 0.2436j,
    0.0996 + 3.8647j,
    0.8666 + 0.2996j,
    1.0230 + 2.7936j,
]


@pytest.fixture
def sync_net():
    return six_tank_network(2.0, 2.0)


@pytest.fixture
def nonsync_net():
    return six_tank_network(1.0, 1.0)


@pytest.fixture
def three_tank_netlist():
    """Capacitor 3-1, resistor 2-3, inductor 1-2 on identical tanks.

    Values are powers of two so every coefficient is an exact binary fraction.
    """
    return Netlist(
        q=3,
        tank=Tank(c0=2.0, l0=0.5),
        couplers=(
            Coupler(CouplerKind.CAPACITOR, 3, 1, 0.25),
            Coupler(CouplerKind.RESISTOR, 2, 3, 4.0),
            Coupler(CouplerKind.INDUCTOR, 1, 2, 0.5),
        ),
    )


@pytest.fixture
def six_tank_netlist():
    return Netlist(
        q=6,
        tank=Tank(c0=2.0, l0=0.5),
        couplers=(
            Coupler(CouplerKind.CAPACITOR, 2, 3, 0.375),
            Coupler(CouplerKind.RESISTOR, 4, 5, 1.0),
            Coupler(CouplerKind.INDUCTOR, 1, 2, 0.5),
            Coupler(CouplerKind.INDUCTOR, 3, 4, 0.5),
            Coupler(CouplerKind.INDUCTOR, 5, 6, 2.0 / 3.0),
        ),
    )


@pytest.fixture
def network_file(tmp_path, sync_net):
    path = tmp_path / "lc_tanks6.json"
    path.write_text(dumps(network_to_dict(sync_net)), encoding="utf-8")
    return path


@pytest.fixture
def netlist_file(tmp_path, six_tank_netlist):
    path = tmp_path / "lc_tanks6_netlist.json"
    path.write_text(json.dumps(netlist_to_dict(six_tank_netlist)), encoding="utf-8")
    return path
