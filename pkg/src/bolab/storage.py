"""Trajectory container serialization.

Layout of the ``.bot`` container (all integers and floats little-endian):

    magic    8 bytes   b"BOTRAJ01"
    hlen     uint64    length of the JSON header in bytes
    header   hlen bytes of UTF-8 JSON:
             {"format": "bo-trajectory", "version": 1,
              "n_modes": N, "dealias_fraction": ...,
              "config": {... SolverConfig fields ...},
              "n_snapshots": S}
    then S records, each:
             t        float64
             coeffs   2*N float64 values, re/im interleaved in FFT order

Numbers round-trip exactly (no text formatting is involved).
"""

from __future__ import annotations

import json
import struct
from dataclasses import asdict
from pathlib import Path

import numpy as np

from .solver import SolverConfig, Trajectory
from .spectral import GridSpec, SpectralField

_MAGIC = b"BOTRAJ01"


class ContainerError(ValueError):
    """Malformed trajectory container."""


def save_trajectory(path, traj: Trajectory) -> None:
    header = {
        "format": "bo-trajectory",
        "version": 1,
        "n_modes": traj.grid.n_modes,
        "dealias_fraction": traj.grid.dealias_fraction,
        "config": asdict(traj.config),
        "n_snapshots": len(traj),
    }
    blob = json.dumps(header, sort_keys=True).encode("utf-8")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(struct.pack("<Q", len(blob)))
        fh.write(blob)
        for t, u in zip(traj.times, traj.states):
            fh.write(struct.pack("<d", float(t)))
            inter = np.empty(2 * traj.grid.n_modes)
            inter[0::2] = u.coeffs.real
            inter[1::2] = u.coeffs.imag
            fh.write(inter.astype("<f8").tobytes())


def load_trajectory(path) -> Trajectory:
    with open(path, "rb") as fh:
        if fh.read(8) != _MAGIC:
            raise ContainerError(f"{path}: not a trajectory container")
        (hlen,) = struct.unpack("<Q", fh.read(8))
        header = json.loads(fh.read(hlen).decode("utf-8"))
        if header.get("format") != "bo-trajectory" or header.get("version") != 1:
            raise ContainerError(f"{path}: unsupported container header")
        n = int(header["n_modes"])
        grid = GridSpec(n, float(header["dealias_fraction"]))
        config = SolverConfig(**header["config"])
        times = []
        states = []
        rec = 8 + 16 * n
        for _ in range(int(header["n_snapshots"])):
            buf = fh.read(rec)
            if len(buf) != rec:
                raise ContainerError(f"{path}: truncated snapshot record")
            (t,) = struct.unpack("<d", buf[:8])
            inter = np.frombuffer(buf[8:], dtype="<f8")
            coeffs = inter[0::2] + 1j * inter[1::2]
            times.append(t)
            states.append(SpectralField(grid, coeffs, is_real=True,
                                        mean_zero=bool(coeffs[0] == 0.0)))
    return Trajectory(grid=grid, times=np.array(times), states=states, config=config)
