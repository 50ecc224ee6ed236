"""On-disk cache for :class:`LambdaTable` records.

File layout (all little-endian)::

    b"LAMTAB\\n"                  magic
    <header JSON>\\n              {"format_version", "omega", "tol", "p_max",
                                  "cumulative_mass", "sha256"}
    float64[p_max + 1]           entries

The checksum covers the raw entry bytes.  Writes go to a temporary file in
the cache directory and are moved into place with an atomic rename.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import tempfile
from pathlib import Path

import numpy as np

from .partition import LambdaTable, build_lambda_table

FORMAT_VERSION = 1
MAGIC = b"LAMTAB\n"

log = logging.getLogger(__name__)


class CacheFormatError(ValueError):
    pass


def cache_key(omega: float, tol: float) -> str:
    return f"lambda_omega{omega:.12g}_tol{tol:.6g}.lamtab"


def table_checksum(table: LambdaTable) -> str:
    return hashlib.sha256(np.ascontiguousarray(table.entries, dtype="<f8").tobytes()).hexdigest()


def write_table(table: LambdaTable, path) -> Path:
    path = Path(path)
    payload = np.ascontiguousarray(table.entries, dtype="<f8").tobytes()
    header = {
        "format_version": FORMAT_VERSION,
        "omega": table.omega,
        "tol": table.tol,
        "p_max": table.p_max,
        "cumulative_mass": table.cumulative_mass,
        "sha256": hashlib.sha256(payload).hexdigest(),
    }
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".lamtab-", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(MAGIC)
            fh.write(json.dumps(header, sort_keys=True).encode() + b"\n")
            fh.write(payload)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def read_table(path) -> LambdaTable:
    raw = Path(path).read_bytes()
    if not raw.startswith(MAGIC):
        raise CacheFormatError(f"{path}: bad magic")
    end = raw.find(b"\n", len(MAGIC))
    if end < 0:
        raise CacheFormatError(f"{path}: truncated header")
    try:
        header = json.loads(raw[len(MAGIC) : end])
    except json.JSONDecodeError as exc:
        raise CacheFormatError(f"{path}: unreadable header") from exc
    if header.get("format_version") != FORMAT_VERSION:
        raise CacheFormatError(f"{path}: unsupported format_version {header.get('format_version')!r}")
    payload = raw[end + 1 :]
    if hashlib.sha256(payload).hexdigest() != header.get("sha256"):
        raise CacheFormatError(f"{path}: checksum mismatch")
    entries = np.frombuffer(payload, dtype="<f8").astype(float)
    if len(entries) != header["p_max"] + 1:
        raise CacheFormatError(f"{path}: expected {header['p_max'] + 1} entries, found {len(entries)}")
    return LambdaTable(
        omega=float(header["omega"]),
        tol=float(header["tol"]),
        entries=entries,
        cumulative_mass=float(header["cumulative_mass"]),
    )


def cache_lambda(omega: float, tol: float, directory):
    """Load the table for ``(omega, tol)`` from ``directory``, building it on a miss.

    Returns ``(table, path, hit)``.  A corrupt file is rebuilt with a warning.
    """
    directory = Path(directory)
    path = directory / cache_key(omega, tol)
    if path.exists():
        try:
            table = read_table(path)
        except (CacheFormatError, OSError, KeyError) as exc:
            log.warning("rebuilding corrupt Lambda cache %s: %s", path, exc)
        else:
            if f"{table.omega:.12g}" == f"{omega:.12g}" and table.tol == tol:
                return table, path, True
            log.warning("cache %s holds Omega=%r tol=%r; rebuilding", path, table.omega, table.tol)
    table = build_lambda_table(omega, tol)
    write_table(table, path)
    return table, path, False
