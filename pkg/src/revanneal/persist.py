"""Atomic file output and the CSV/JSON schemas shared by the CLI.

Every float is printed with 17 significant digits so identical runs produce
byte-identical files.  Writers stage a temporary file next to the target and
rename it into place, so no failure path leaves a partial file behind.
"""

from __future__ import annotations

import json
import os
import tempfile
from typing import Iterable

import numpy as np

from .model import Trajectory
from .phase_diagram import PhaseDiagram


def fmt(v) -> str:
    return f"{float(v):.17g}"


def atomic_write_text(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=".tmp-", dir=directory)
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_csv(path: str, header: Iterable[str], rows: Iterable[Iterable]) -> None:
    lines = [",".join(header)]
    lines.extend(",".join(fmt(v) for v in row) for row in rows)
    atomic_write_text(path, "\n".join(lines) + "\n")


def write_json(path: str, payload: dict) -> None:
    atomic_write_text(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")


def trajectory_to_csv(traj: Trajectory, path: str,
                      extra_cols: tuple[str, ...] = ()) -> None:
    header = ["t", "s", "lambda", "m_u", "m_d", "e", *extra_cols]
    cols = [traj.t, traj.s, traj.lam, traj.m_u, traj.m_d, traj.e]
    cols.extend(traj.extras[name] for name in extra_cols)
    write_csv(path, header, zip(*cols))


def landscape_grid_to_csv(m_u: np.ndarray, m_d: np.ndarray,
                          phi: np.ndarray, path: str) -> None:
    rows = ((m_u[i], m_d[j], phi[i, j])
            for i in range(len(m_u)) for j in range(len(m_d)))
    write_csv(path, ["m_u", "m_d", "phi"], rows)


def reduced_to_csv(m_d: np.ndarray, phi: np.ndarray,
                   m_u_argmin: np.ndarray, path: str) -> None:
    write_csv(path, ["m_d", "phi", "m_u_argmin"], zip(m_d, phi, m_u_argmin))


def diagram_to_csv(diagram: PhaseDiagram, path: str) -> None:
    rows = ((diagram.s_values[i], diagram.lam_values[j], diagram.m_grid[j, i])
            for i in range(diagram.resolution) for j in range(diagram.resolution))
    write_csv(path, ["s", "lambda", "m"], rows)


def edges_to_csv(diagram: PhaseDiagram, path: str) -> None:
    rows = ((s1, l1, s2, l2) for (s1, l1, s2, l2) in diagram.edge_list())
    write_csv(path, ["s1", "lambda1", "s2", "lambda2"], rows)


def diagram_from_csv(path: str):
    """Rebuild (s values, lambda values, m grid) from a diagram CSV."""
    data = np.loadtxt(path, delimiter=",", skiprows=1)
    s = np.unique(data[:, 0])
    lam = np.unique(data[:, 1])
    res = len(s)
    if len(lam) != res or len(data) != res * res:
        raise ValueError(f"{path}: not a square s,lambda,m grid")
    m = np.empty((res, res))
    si = np.searchsorted(s, data[:, 0])
    lj = np.searchsorted(lam, data[:, 1])
    m[lj, si] = data[:, 2]
    return s, lam, m
