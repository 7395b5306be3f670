"""
Reading and writing matrices and Jordan chains.

Two matrix formats are understood: Matrix Market (``array`` and
``coordinate``, ``real``/``integer``/``complex`` fields, ``general``
symmetry) and a small JSON layout::

    {"rows": n, "cols": n, "entries": [[re, im], ...]}   # row-major

Complex numbers are always serialised as ``[re, im]`` pairs.
"""

import json
from pathlib import Path

import numpy as np

from .chain_rotation import JordanChain


class MatrixParseError(ValueError):
    """Malformed matrix or chain file; carries the 1-based line and column."""

    def __init__(self, message, line=None, column=None, path=None):
        self.line = line
        self.column = column
        self.path = path
        where = []
        if path is not None:
            where.append(str(path))
        if line is not None:
            where.append(f"line {line}")
        if column is not None:
            where.append(f"column {column}")
        prefix = ":".join(where)
        super().__init__(f"{prefix}: {message}" if prefix else message)


def cpair(z):
    z = complex(z)
    return [z.real, z.imag]


def from_pair(p):
    if isinstance(p, (int, float)):
        return complex(p)
    if not isinstance(p, (list, tuple)) or len(p) != 2:
        raise ValueError(f"expected [re, im], got {p!r}")
    return complex(float(p[0]), float(p[1]))


def matrix_to_json(A):
    A = np.asarray(A, dtype=np.complex128)
    return {"rows": int(A.shape[0]), "cols": int(A.shape[1]),
            "entries": [cpair(z) for z in A.reshape(-1)]}


def matrix_from_json(obj, path=None):
    try:
        rows, cols, entries = int(obj["rows"]), int(obj["cols"]), obj["entries"]
    except (KeyError, TypeError, ValueError) as exc:
        raise MatrixParseError(f"missing or invalid field: {exc}", path=path) from exc
    if rows < 1 or cols < 1:
        raise MatrixParseError(f"dimensions must be positive, got {rows}x{cols}", path=path)
    if len(entries) != rows * cols:
        raise MatrixParseError(
            f"'entries' has {len(entries)} values, expected rows*cols = {rows * cols}", path=path)
    try:
        vals = [from_pair(p) for p in entries]
    except ValueError as exc:
        raise MatrixParseError(str(exc), path=path) from exc
    return np.array(vals, dtype=np.complex128).reshape(rows, cols)


def _load_json(path):
    text = Path(path).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise MatrixParseError(exc.msg, exc.lineno, exc.colno, path) from exc


def read_json_matrix(path):
    return matrix_from_json(_load_json(path), path)


def write_json_matrix(path, A):
    Path(path).write_text(json.dumps(matrix_to_json(A)) + "\n")


def _tokens(line):
    """Whitespace tokens with their 1-based start columns."""
    out, i = [], 0
    while i < len(line):
        if line[i].isspace():
            i += 1
            continue
        j = i
        while j < len(line) and not line[j].isspace():
            j += 1
        out.append((line[i:j], i + 1))
        i = j
    return out


def _number(tok, col, lineno, path, integer=False):
    try:
        return int(tok) if integer else float(tok)
    except ValueError:
        kind = "integer" if integer else "number"
        raise MatrixParseError(f"expected {kind}, got {tok!r}", lineno, col, path) from None


def read_matrix_market(path):
    lines = Path(path).read_text().splitlines()
    if not lines:
        raise MatrixParseError("empty file", 1, 1, path)
    head = lines[0].split()
    if len(head) != 5 or head[0].lower() != "%%matrixmarket" or head[1].lower() != "matrix":
        raise MatrixParseError("expected '%%MatrixMarket matrix <format> <field> <symmetry>'",
                               1, 1, path)
    layout, fld, symmetry = (h.lower() for h in head[2:])
    if layout not in ("array", "coordinate"):
        raise MatrixParseError(f"unsupported format {head[2]!r}", 1, None, path)
    if fld not in ("real", "integer", "complex"):
        raise MatrixParseError(f"unsupported field {head[3]!r}", 1, None, path)
    if symmetry != "general":
        raise MatrixParseError(f"unsupported symmetry {head[4]!r}; only 'general'", 1, None, path)
    per_value = 2 if fld == "complex" else 1

    body = [(k + 1, ln) for k, ln in enumerate(lines) if k > 0 and ln.strip() and not ln.lstrip().startswith("%")]
    if not body:
        raise MatrixParseError("missing size line", len(lines), None, path)
    lineno, size_line = body[0]
    toks = _tokens(size_line)
    want = 2 if layout == "array" else 3
    if len(toks) != want:
        raise MatrixParseError(f"size line needs {want} integers", lineno, 1, path)
    dims = [_number(t, c, lineno, path, integer=True) for t, c in toks]
    rows, cols = dims[0], dims[1]
    if rows < 1 or cols < 1:
        raise MatrixParseError("dimensions must be positive", lineno, 1, path)
    A = np.zeros((rows, cols), dtype=np.complex128)
    entries = body[1:]

    if layout == "array":
        if len(entries) != rows * cols:
            raise MatrixParseError(f"found {len(entries)} entries, expected {rows * cols}",
                                   entries[-1][0] if entries else lineno, None, path)
        flat = []
        for ln, text in entries:
            toks = _tokens(text)
            if len(toks) != per_value:
                raise MatrixParseError(f"expected {per_value} value(s) per line", ln, 1, path)
            v = [_number(t, c, ln, path) for t, c in toks]
            flat.append(complex(v[0], v[1] if per_value == 2 else 0.0))
        # array layout is column-major
        A[:] = np.array(flat, dtype=np.complex128).reshape(cols, rows).T
        return A

    nnz = dims[2]
    if len(entries) != nnz:
        raise MatrixParseError(f"found {len(entries)} entries, expected {nnz}",
                               entries[-1][0] if entries else lineno, None, path)
    for ln, text in entries:
        toks = _tokens(text)
        if len(toks) != 2 + per_value:
            raise MatrixParseError(f"expected 'i j value{' imag' if per_value == 2 else ''}'", ln, 1, path)
        i = _number(*toks[0], ln, path, integer=True)
        j = _number(*toks[1], ln, path, integer=True)
        if not (1 <= i <= rows):
            raise MatrixParseError(f"row index {i} outside 1..{rows}", ln, toks[0][1], path)
        if not (1 <= j <= cols):
            raise MatrixParseError(f"column index {j} outside 1..{cols}", ln, toks[1][1], path)
        v = [_number(t, c, ln, path) for t, c in toks[2:]]
        A[i - 1, j - 1] += complex(v[0], v[1] if per_value == 2 else 0.0)
    return A


def write_matrix_market(path, A, layout="array"):
    """Write with 17 significant digits, so doubles survive the round trip."""
    A = np.asarray(A, dtype=np.complex128)
    is_complex = bool(np.any(A.imag != 0))
    fld = "complex" if is_complex else "real"

    def fmt(z):
        return f"{z.real:.17g} {z.imag:.17g}" if is_complex else f"{z.real:.17g}"

    rows, cols = A.shape
    out = [f"%%MatrixMarket matrix {layout} {fld} general"]
    if layout == "array":
        out.append(f"{rows} {cols}")
        out.extend(fmt(z) for z in A.T.reshape(-1))
    elif layout == "coordinate":
        nz = np.argwhere(A != 0)
        out.append(f"{rows} {cols} {len(nz)}")
        out.extend(f"{i + 1} {j + 1} {fmt(A[i, j])}" for i, j in nz)
    else:
        raise ValueError(f"unknown layout {layout!r}")
    Path(path).write_text("\n".join(out) + "\n")


def guess_format(path):
    suffix = Path(path).suffix.lower()
    if suffix == ".json":
        return "json"
    if suffix in (".mtx", ".mm"):
        return "matrix-market"
    with open(path) as fh:
        first = fh.readline()
    return "matrix-market" if first.startswith("%%MatrixMarket") else "json"


def read_matrix(path, format=None):
    """Read a square or rectangular matrix as complex128.

    ``format`` is ``"matrix-market"``, ``"json"`` or ``None`` (by extension,
    then by content).
    """
    fmt = format or guess_format(path)
    if fmt in ("matrix-market", "mm", "mtx"):
        return read_matrix_market(path)
    if fmt == "json":
        return read_json_matrix(path)
    raise ValueError(f"unknown matrix format {format!r}")


def chain_to_json(chain):
    return {"side": chain.side, "eigenvalue": cpair(chain.eigenvalue),
            "vectors": [[cpair(z) for z in v] for v in chain.vectors]}


def chain_from_json(obj, path=None):
    try:
        return JordanChain(obj.get("side", "right"), from_pair(obj["eigenvalue"]),
                           [[from_pair(p) for p in v] for v in obj["vectors"]])
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise MatrixParseError(f"invalid chain: {exc}", path=path) from exc


def read_chain(path):
    return chain_from_json(_load_json(path), path)
