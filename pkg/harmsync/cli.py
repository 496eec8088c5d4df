"""Command implementations behind ``python -m harmsync``.

Each command writes its document to ``out`` (standard output by default)
and returns the process exit code: 0 on success or synchronization, 3 on a
clean non-synchronizing verdict. Errors propagate as :class:`HarmsyncError`
and are mapped to exit code 1 by the entry point.
"""

import sys
from pathlib import Path
from typing import Optional, Sequence, TextIO

import numpy as np

from .analysis import analyze, kernel_oracle, structure_report
from .circuit import netlist_to_network
from .exceptions import PreconditionError, SchemaError
from .models import NetworkSpec
from .reports import (
    dumps,
    network_to_dict,
    parse_netlist,
    parse_network,
    render_markdown,
    report_to_dict,
    structure_to_dict,
)
from .simulate import (
    classify_trajectory,
    disagreement_ratio,
    make_sim_config,
    simulate,
    witness_initial_state,
    write_trajectory_csv,
)
from .utils import logger
from .verify import run_verification

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NONSYNC = 3


def _emit(text: str, out: Optional[TextIO]) -> None:
    (sys.stdout if out is None else out).write(text)


def read_document(path: str) -> str:
    """Read UTF-8 text from ``path``, or standard input for ``-``."""
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def load_network(path: str, m0: Optional[float] = None, k0: Optional[float] = None) -> NetworkSpec:
    net = parse_network(read_document(path), source=path)
    if m0 is not None or k0 is not None:
        try:
            net = net.with_parameters(m0, k0)
        except Exception as e:
            raise SchemaError(f"invalid override: {e}") from e
        logger.debug(f"Overriding oscillator parameters: m0={net.m0:g}, k0={net.k0:g}")
    return net


def cmd_analyze(path: str, m0: Optional[float] = None, k0: Optional[float] = None,
                report_format: str = "json", digits: int = 17, out: Optional[TextIO] = None) -> int:
    report = analyze(load_network(path, m0, k0))
    if report_format == "md":
        _emit(render_markdown(report), out)
    else:
        _emit(dumps(report_to_dict(report), digits), out)
    return EXIT_OK if report.synchronizes else EXIT_NONSYNC


def cmd_structure(path: str, m0: Optional[float] = None, k0: Optional[float] = None,
                  digits: int = 17, out: Optional[TextIO] = None) -> int:
    net = load_network(path, m0, k0)
    document = structure_to_dict(structure_report(net))
    # an empty dissipative graph leaves null(B) the whole space
    document["trivially_nonsync"] = net.q >= 2 and net.dissipative.is_edgeless
    _emit(dumps(document, digits), out)
    return EXIT_OK


def cmd_netlist(path: str, digits: int = 17, out: Optional[TextIO] = None) -> int:
    netlist = parse_netlist(read_document(path), source=path)
    _emit(dumps(network_to_dict(netlist_to_network(netlist)), digits), out)
    return EXIT_OK


def cmd_simulate(path: str, csv_path: str, x0: Optional[Sequence[float]] = None,
                 v0: Optional[Sequence[float]] = None, witness: bool = False,
                 dt: Optional[float] = None, t_end: float = 2000.0, record_stride: int = 10,
                 seed: int = 0, m0: Optional[float] = None, k0: Optional[float] = None,
                 digits: int = 17, progress: bool = False, out: Optional[TextIO] = None) -> int:
    net = load_network(path, m0, k0)
    cfg = make_sim_config(net, dt=dt, t_end=t_end, record_stride=record_stride)

    if witness:
        mode = kernel_oracle(net)
        if mode is None:
            raise PreconditionError("network synchronizes; there is no kernel witness to excite")
        x_init, v_init = witness_initial_state(mode)
        logger.info(f"Exciting persistent mode at omega={mode.omega:.6g} rad/s")
    else:
        if x0 is None:
            x_init = np.random.default_rng(seed).uniform(-1.0, 1.0, net.q)
        else:
            x_init = np.asarray(x0, dtype=float)
        v_init = np.zeros(net.q) if v0 is None else np.asarray(v0, dtype=float)

    traj = simulate(net, x_init, v_init, cfg, progress=progress)
    write_trajectory_csv(traj, csv_path, digits)
    label = classify_trajectory(traj)
    logger.info(f"Wrote {len(traj.times)} samples to {csv_path}; W_late/W_early = {disagreement_ratio(traj):.4g}")
    _emit(f"classification={label.value}\n", out)
    return EXIT_OK


def cmd_verify(samples: int = 100, seed: int = 2024, digits: int = 17,
               progress: bool = False, out: Optional[TextIO] = None) -> int:
    tallies = run_verification(samples, seed, progress)
    document = {
        name: {"passed": tally.passed, "total": tally.total} for name, tally in tallies.items()
    }
    _emit(dumps(document, digits), out)
    return EXIT_OK if all(tally.ok for tally in tallies.values()) else EXIT_ERROR
