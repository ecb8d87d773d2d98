"""State, certificate and report file formats.

All files are JSON. Floats are written with 17 significant digits so every
double survives a write/read cycle bit for bit; complex numbers are
``[re, im]`` pairs and matrices are row-major nested lists.
"""

from __future__ import annotations

import csv
import io
import json
import math
import sys
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from .certificate import KINDS, Certificate, CertificateTerm
from .errors import HSBisepError
from .linalg import Cut

CERTIFICATE_VERSION = "1"


class ParseError(HSBisepError, ValueError):
    pass


def fmt_float(x: float) -> str:
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"cannot serialise non-finite number {x}")
    text = format(x, ".17g")
    # Keep a float marker so "-0" does not come back as the integer 0.
    return text if any(c in text for c in ".en") else text + ".0"


def _is_scalar(x) -> bool:
    return x is None or isinstance(x, (bool, int, float, str, np.floating, np.integer, np.bool_))


def _scalar(x) -> str:
    if x is None:
        return "null"
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return fmt_float(x)
    return json.dumps(x)


def dumps(obj: Any, indent: int = 0) -> str:
    """JSON text with 17-digit floats; lists of scalars (and of [re, im] pairs) stay on one line."""
    pad = "  " * indent
    if _is_scalar(obj):
        return _scalar(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f'{pad}  {json.dumps(str(k))}: {dumps(v, indent + 1)}' for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + f"\n{pad}}}"
    seq = list(obj)
    flat = all(_is_scalar(x) for x in seq) or all(
        isinstance(x, (list, tuple)) and all(_is_scalar(y) for y in x) and len(x) <= 2 for x in seq
    )
    if flat:
        return "[" + ", ".join(dumps(x) for x in seq) + "]"
    return "[\n" + ",\n".join(f"{pad}  {dumps(x, indent + 1)}" for x in seq) + f"\n{pad}]"


def matrix_to_pairs(m: np.ndarray) -> list:
    m = np.asarray(m, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def pairs_to_matrix(data, shape: tuple[int, int] | None = None) -> np.ndarray:
    try:
        arr = np.array(data, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"matrix entries must be [re, im] number pairs: {exc}") from None
    if arr.ndim != 3 or arr.shape[2] != 2:
        raise ParseError(f"matrix must be a 2-D array of [re, im] pairs, got shape {arr.shape}")
    if shape is not None and arr.shape[:2] != shape:
        raise ParseError(f"expected a {shape[0]}x{shape[1]} matrix, got {arr.shape[0]}x{arr.shape[1]}")
    out = np.empty(arr.shape[:2], dtype=complex)
    # assign parts separately; re + 1j * im would turn -0.0 into 0.0
    out.real = arr[..., 0]
    out.imag = arr[..., 1]
    return out


def _read_text(source: "str | Path") -> str:
    if str(source) == "-":
        return sys.stdin.read()
    try:
        return Path(source).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {source}: {exc}") from None


def _write_text(text: str, dest: "str | Path | None") -> None:
    if dest is None or str(dest) == "-":
        sys.stdout.write(text)
    else:
        Path(dest).write_text(text)


def _load_json(text: str, what: str) -> dict:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{what} is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise ParseError(f"{what} must be a JSON object")
    return data


# -- states -------------------------------------------------------------------


def state_to_text(rho: np.ndarray) -> str:
    return dumps({"n_qubits": 3, "matrix": matrix_to_pairs(rho)}) + "\n"


def state_from_text(text: str) -> np.ndarray:
    """Parse a state file; the matrix is returned unvalidated."""
    data = _load_json(text, "state file")
    if data.get("n_qubits") != 3:
        raise ParseError(f"n_qubits must be 3, got {data.get('n_qubits')!r}")
    if "matrix" not in data:
        raise ParseError("state file has no 'matrix'")
    return pairs_to_matrix(data["matrix"], (8, 8))


def write_state(rho: np.ndarray, dest: "str | Path | None") -> None:
    _write_text(state_to_text(rho), dest)


def read_state(source: "str | Path") -> np.ndarray:
    return state_from_text(_read_text(source))


# -- certificates -------------------------------------------------------------


def certificate_to_dict(cert: Certificate) -> dict:
    terms = []
    for t in cert.terms:
        entry = {"weight": t.weight, "kind": t.kind}
        if t.cut is not None:
            entry["cut"] = str(t.cut)
        entry["factors"] = [matrix_to_pairs(f) for f in t.factors]
        terms.append(entry)
    cut = cert.cut
    return {
        "version": CERTIFICATE_VERSION,
        "bipartition": None if cut is None else str(cut),
        "tolerance": cert.tol,
        "target_digest": cert.target_digest,
        "meta": cert.meta,
        "terms": terms,
    }


def certificate_to_text(cert: Certificate) -> str:
    return dumps(certificate_to_dict(cert)) + "\n"


def certificate_from_text(text: str) -> Certificate:
    data = _load_json(text, "certificate file")
    if str(data.get("version")) != CERTIFICATE_VERSION:
        raise ParseError(f"unsupported certificate version {data.get('version')!r}")
    raw_terms = data.get("terms")
    if not isinstance(raw_terms, list):
        raise ParseError("certificate has no 'terms' list")
    terms = []
    for i, entry in enumerate(raw_terms):
        try:
            kind = entry["kind"]
            weight = float(entry["weight"])
            factors = [pairs_to_matrix(f) for f in entry["factors"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"term {i} is malformed: {exc}") from None
        if kind not in KINDS:
            raise ParseError(f"term {i} has unknown kind {kind!r}")
        cut = None
        if entry.get("cut") is not None:
            try:
                cut = Cut.parse(entry["cut"])
            except ValueError as exc:
                raise ParseError(f"term {i}: {exc}") from None
        terms.append(CertificateTerm(weight, kind, tuple(factors), cut))
    try:
        tol = float(data.get("tolerance", 1e-10))
    except (TypeError, ValueError):
        raise ParseError("tolerance must be a number") from None
    return Certificate(tuple(terms), str(data.get("target_digest", "")), tol, dict(data.get("meta") or {}))


def write_certificate(cert: Certificate, dest: "str | Path | None") -> None:
    _write_text(certificate_to_text(cert), dest)


def read_certificate(source: "str | Path") -> Certificate:
    return certificate_from_text(_read_text(source))


# -- reports ------------------------------------------------------------------


def rows_to_csv(columns: Sequence[str], rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_scalar(x) for x in row])
    return buf.getvalue()


def rows_to_table(columns: Sequence[str], rows: Sequence[Sequence], digits: int = 6) -> str:
    def cell(x):
        if isinstance(x, (bool, np.bool_)):
            return "yes" if x else "no"
        if isinstance(x, (float, np.floating)):
            return f"{x:.{digits}f}"
        return str(x)

    body = [[cell(x) for x in row] for row in rows]
    widths = [max(len(c), *(len(r[i]) for r in body)) if body else len(c) for i, c in enumerate(columns)]
    lines = ["  ".join(c.rjust(w) for c, w in zip(columns, widths))]
    lines.append("  ".join("-" * w for w in widths))
    lines.extend("  ".join(v.rjust(w) for v, w in zip(r, widths)) for r in body)
    return "\n".join(lines) + "\n"
