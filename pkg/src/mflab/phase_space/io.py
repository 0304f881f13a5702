"""Flat binary container with a JSON header for grids and grid data.

Layout: 8-byte magic ``MFLABC1\\n``, 8-byte little-endian header length,
UTF-8 JSON header, then the raw array bytes.  Arrays are stored C-order
(row-major by (x_1..x_j, v_1..v_j) for phase functions), little-endian,
and the header records grid metadata so files are self-describing.
"""

import json
import struct

import numpy as np

from .grids import PhaseGrid, PhaseFunction
from .operators import DensityOperator

MAGIC = b"MFLABC1\n"
FORMAT_VERSION = 1


def _grid_meta(grid):
    return {
        "particles": grid.particles,
        "points_per_axis": grid.points_per_axis,
        "period": grid.period,
        "velocity_cutoff": grid.velocity_cutoff,
    }


def _grid_from_meta(meta):
    return PhaseGrid(
        meta["particles"],
        meta["points_per_axis"],
        meta["period"],
        meta["velocity_cutoff"],
    )


def _write(path, header, array):
    array = np.ascontiguousarray(array)
    if array.dtype.byteorder == ">":
        array = array.astype(array.dtype.newbyteorder("<"))
    header = dict(header)
    header["format_version"] = FORMAT_VERSION
    header["endianness"] = "little"
    header["layout"] = "row-major (x_1..x_j, v_1..v_j)"
    header["dtype"] = array.dtype.str
    header["shape"] = list(array.shape)
    blob = json.dumps(header, sort_keys=True).encode()
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<Q", len(blob)))
        fh.write(blob)
        fh.write(array.tobytes())


def _read(path):
    with open(path, "rb") as fh:
        magic = fh.read(8)
        if magic != MAGIC:
            raise ValueError(f"{path}: not a mflab container")
        (hlen,) = struct.unpack("<Q", fh.read(8))
        header = json.loads(fh.read(hlen).decode())
        if header.get("format_version") != FORMAT_VERSION:
            raise ValueError(f"unsupported container version {header.get('format_version')}")
        data = np.frombuffer(fh.read(), dtype=np.dtype(header["dtype"]))
    return header, data.reshape(header["shape"])


def save_phase_function(path, f, extra=None):
    header = {"kind": "phase_function", "grid": _grid_meta(f.grid)}
    if extra:
        header["extra"] = extra
    _write(path, header, f.values)


def load_phase_function(path):
    header, data = _read(path)
    if header["kind"] != "phase_function":
        raise ValueError(f"container holds {header['kind']}, not phase_function")
    return PhaseFunction(_grid_from_meta(header["grid"]), data)


def save_density_operator(path, D, extra=None):
    header = {
        "kind": "density_operator",
        "hbar": D.hbar,
        "period": D.period,
        "particles": D.particles,
        "points_per_axis": D.n,
    }
    if extra:
        header["extra"] = extra
    _write(path, header, D.kernel)


def load_density_operator(path):
    header, data = _read(path)
    if header["kind"] != "density_operator":
        raise ValueError(f"container holds {header['kind']}, not density_operator")
    return DensityOperator(data, header["hbar"], header["period"])
