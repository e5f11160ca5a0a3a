"""Flat-file formats shared by the CLI: JSON states and frames, CSV cells.

State files:
    {"m": 2, "n": 2, "re": [[...], ...], "im": [[...], ...]}
with re/im nested row-major lists of the (m*n) x (m*n) matrix parts.
Unitary files use {"d": ..., "re": ..., "im": ...} and frame-pair files
wrap two of them as {"u": {...}, "v": {...}}.
"""

from __future__ import annotations

import json

import numpy as np

from .qstate import TAU_UNIT, BipartiteDims, DensityMatrix, validate_density

FLOAT_FMT = ".15g"


def fmt(value) -> str:
    """Render one CSV cell: 15 significant digits for floats, true/false
    for booleans, empty string for missing values."""
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return format(float(value), FLOAT_FMT)
    return str(value)


def dump_json(obj) -> str:
    """Canonical JSON rendering: sorted keys, two-space indent, trailing
    newline.  Byte-identical across runs for equal inputs."""
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _matrix_parts(mat: np.ndarray) -> tuple[list, list]:
    arr = np.asarray(mat)
    re = [[float(v) for v in row] for row in arr.real]
    im = [[float(v) for v in row] for row in arr.imag]
    return re, im


def _parts_matrix(obj: dict, side: int, what: str) -> np.ndarray:
    try:
        re = np.asarray(obj["re"], dtype=float)
        im = np.asarray(obj["im"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"{what}: expected numeric 're' and 'im' entries") from exc
    if re.shape != (side, side) or im.shape != (side, side):
        raise ValueError(
            f"{what}: 're'/'im' must be {side}x{side} nested lists, "
            f"got {re.shape} and {im.shape}"
        )
    return re + 1j * im


def state_to_dict(rho: DensityMatrix) -> dict:
    re, im = _matrix_parts(rho.matrix)
    return {"m": rho.dims.m, "n": rho.dims.n, "re": re, "im": im}


def dict_to_state(obj: dict) -> DensityMatrix:
    """Parse and fully validate a state object (raises on any failed
    density-matrix invariant, naming it)."""
    try:
        m = int(obj["m"])
        n = int(obj["n"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError("state: expected integer 'm' and 'n' entries") from exc
    mat = _parts_matrix(obj, m * n, "state")
    return validate_density(mat, BipartiteDims(m, n))


def load_state(path: str) -> DensityMatrix:
    with open(path) as fp:
        obj = json.load(fp)
    return dict_to_state(obj)


def save_state(path: str, rho: DensityMatrix) -> None:
    with open(path, "w", newline="") as fp:
        fp.write(dump_json(state_to_dict(rho)))


def operator_to_dict(op: np.ndarray) -> dict:
    """Serialize a rectangular operator (rows x cols) to re/im lists."""
    arr = np.asarray(op)
    re, im = _matrix_parts(arr)
    return {"rows": int(arr.shape[0]), "cols": int(arr.shape[1]), "re": re, "im": im}


def unitary_to_dict(u: np.ndarray) -> dict:
    re, im = _matrix_parts(u)
    return {"d": int(u.shape[0]), "re": re, "im": im}


def dict_to_unitary(obj: dict, what: str = "unitary") -> np.ndarray:
    try:
        d = int(obj["d"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"{what}: expected an integer 'd' entry") from exc
    mat = _parts_matrix(obj, d, what)
    residue = float(np.max(np.abs(mat @ mat.conj().T - np.eye(d))))
    if residue > TAU_UNIT:
        raise ValueError(f"{what}: UNITARITY failed (residue {residue:.3e})")
    return mat


def load_unitary_pair(path: str) -> tuple[np.ndarray, np.ndarray]:
    with open(path) as fp:
        obj = json.load(fp)
    if "u" not in obj or "v" not in obj:
        raise ValueError("frame file: expected 'u' and 'v' entries")
    return dict_to_unitary(obj["u"], "u"), dict_to_unitary(obj["v"], "v")


def save_unitary_pair(path: str, u: np.ndarray, v: np.ndarray) -> None:
    with open(path, "w", newline="") as fp:
        fp.write(dump_json({"u": unitary_to_dict(u), "v": unitary_to_dict(v)}))
