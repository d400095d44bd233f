"""Plain-text exchange format for LP instances.

Layout: a magic line, a counts line, then the sections OBJ / EQ / LE /
BOUNDS (and an optional NAMES section). OBJ and matrix sections hold
``row col value`` triplets; within EQ/LE, ``col == -1`` carries the row's
right-hand side. BOUNDS lines read ``col lo hi`` with ``inf`` / ``-inf``
tokens. Values are written with full precision so a dump/load round trip
is exact.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
import scipy.sparse as sp

from ..errors import MalformedRow
from .instance import LpInstance

_MAGIC = "H2STACK-LP 1"


def write_instance(instance: LpInstance, path: str | Path) -> None:
    path = Path(path)
    lines = [_MAGIC,
             f"NVARS {instance.n_vars} NEQ {instance.n_eq} NLE {instance.n_le}"]
    lines.append("OBJ")
    for j in np.flatnonzero(instance.c):
        lines.append(f"0 {j} {float(instance.c[j])!r}")

    for header, mat, rhs in (("EQ", instance.a_eq, instance.b_eq),
                             ("LE", instance.a_le, instance.b_le)):
        lines.append(header)
        coo = mat.tocoo()
        for i, j, v in zip(coo.row, coo.col, coo.data):
            lines.append(f"{i} {j} {float(v)!r}")
        for i, v in enumerate(rhs):
            lines.append(f"{i} -1 {float(v)!r}")

    lines.append("BOUNDS")
    for j in range(instance.n_vars):
        lines.append(f"{j} {float(instance.lo[j])!r} {float(instance.hi[j])!r}")
    if instance.names:
        lines.append("NAMES")
        for j, name in enumerate(instance.names):
            lines.append(f"{j} {name}")
    path.write_text("\n".join(lines) + "\n")


def read_instance(path: str | Path) -> LpInstance:
    path = Path(path)
    lines = path.read_text().splitlines()
    if not lines or lines[0].strip() != _MAGIC:
        raise MalformedRow(f"{path}: not an LP dump (missing '{_MAGIC}')")
    counts = lines[1].split()
    try:
        n = int(counts[1])
        n_eq = int(counts[3])
        n_le = int(counts[5])
    except (IndexError, ValueError):
        raise MalformedRow(f"{path}: malformed counts line {lines[1]!r}") from None

    c = np.zeros(n)
    lo = np.zeros(n)
    hi = np.full(n, np.inf)
    b_eq = np.zeros(n_eq)
    b_le = np.zeros(n_le)
    triplets: dict[str, list[tuple[int, int, float]]] = {"EQ": [], "LE": []}
    names: dict[int, str] = {}

    section = None
    for lineno, raw in enumerate(lines[2:], start=3):
        line = raw.strip()
        if not line:
            continue
        if line in ("OBJ", "EQ", "LE", "BOUNDS", "NAMES"):
            section = line
            continue
        parts = line.split()
        try:
            if section == "OBJ":
                c[int(parts[1])] = float(parts[2])
            elif section in ("EQ", "LE"):
                i, j, v = int(parts[0]), int(parts[1]), float(parts[2])
                if j == -1:
                    (b_eq if section == "EQ" else b_le)[i] = v
                else:
                    triplets[section].append((i, j, v))
            elif section == "BOUNDS":
                j = int(parts[0])
                lo[j] = float(parts[1])
                hi[j] = float(parts[2])
            elif section == "NAMES":
                names[int(parts[0])] = parts[1]
            else:
                raise ValueError("content before any section header")
        except (IndexError, ValueError) as exc:
            raise MalformedRow(f"{path}:{lineno}: {exc}") from None

    def to_csr(entries: list[tuple[int, int, float]], rows: int) -> sp.csr_matrix:
        if entries:
            i, j, v = zip(*entries)
            return sp.csr_matrix((v, (i, j)), shape=(rows, n))
        return sp.csr_matrix((rows, n))

    name_tuple = tuple(names.get(j, f"x{j}") for j in range(n)) if names else ()
    return LpInstance(c=c, a_eq=to_csr(triplets["EQ"], n_eq), b_eq=b_eq,
                      a_le=to_csr(triplets["LE"], n_le), b_le=b_le,
                      lo=lo, hi=hi, names=name_tuple)
