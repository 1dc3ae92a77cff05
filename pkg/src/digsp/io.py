"""File formats: Matrix Market coordinate files, signal CSVs, and the CSV
export schemes for bases and spectra.

All float output uses %.17g so that write/read round-trips are exact for
float64 and reruns are byte-identical.
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .basis import GftBasis
from .errors import ValidationError
from .graphs import Digraph

_MM_FIELDS = ("real", "integer", "complex")


def _fmt(x: float) -> str:
    return "%.17g" % x


def mm_write(matrix: np.ndarray, path) -> None:
    """Write a dense matrix as a Matrix Market coordinate file (1-based indices).

    Complex dtypes are written as ``coordinate complex general`` with two value
    columns, everything else as ``coordinate real general``.  Exact zeros are
    omitted; the size line restores the shape on read.
    """
    matrix = np.asarray(matrix)
    if matrix.ndim != 2:
        raise ValidationError("can only write 2-D matrices")
    is_complex = np.iscomplexobj(matrix)
    rows, cols = np.nonzero(matrix)
    lines = [
        f"%%MatrixMarket matrix coordinate {'complex' if is_complex else 'real'} general",
        f"{matrix.shape[0]} {matrix.shape[1]} {len(rows)}",
    ]
    for i, j in zip(rows, cols):
        v = matrix[i, j]
        if is_complex:
            lines.append(f"{i + 1} {j + 1} {_fmt(v.real)} {_fmt(v.imag)}")
        else:
            lines.append(f"{i + 1} {j + 1} {_fmt(float(v))}")
    Path(path).write_text("\n".join(lines) + "\n")


def mm_read(path) -> np.ndarray:
    """Read a Matrix Market coordinate file written by :func:`mm_write`.

    Accepts real, integer, and complex general matrices; rejects malformed
    headers, out-of-range indices, and duplicate entries.
    """
    text = Path(path).read_text()
    lines = iter(text.splitlines())
    try:
        header = next(lines)
    except StopIteration:
        raise ValidationError(f"{path}: empty file") from None
    parts = header.split()
    if (
        len(parts) != 5
        or parts[0] != "%%MatrixMarket"
        or parts[1] != "matrix"
        or parts[2] != "coordinate"
        or parts[3] not in _MM_FIELDS
        or parts[4] != "general"
    ):
        raise ValidationError(f"{path}: malformed Matrix Market header: {header!r}")
    is_complex = parts[3] == "complex"
    size_line = None
    for line in lines:
        if line.startswith("%") or not line.strip():
            continue
        size_line = line
        break
    if size_line is None:
        raise ValidationError(f"{path}: missing size line")
    try:
        nrows, ncols, nnz = (int(tok) for tok in size_line.split())
    except ValueError:
        raise ValidationError(f"{path}: bad size line: {size_line!r}") from None
    matrix = np.zeros((nrows, ncols), dtype=complex if is_complex else float)
    seen = set()
    count = 0
    values_per_entry = 4 if is_complex else 3
    for line in lines:
        if line.startswith("%") or not line.strip():
            continue
        tok = line.split()
        if len(tok) != values_per_entry:
            raise ValidationError(f"{path}: bad entry line: {line!r}")
        i, j = int(tok[0]) - 1, int(tok[1]) - 1
        if not (0 <= i < nrows and 0 <= j < ncols):
            raise ValidationError(f"{path}: index ({tok[0]}, {tok[1]}) out of bounds")
        if (i, j) in seen:
            raise ValidationError(f"{path}: duplicate entry at ({tok[0]}, {tok[1]})")
        seen.add((i, j))
        if is_complex:
            matrix[i, j] = complex(float(tok[2]), float(tok[3]))
        else:
            matrix[i, j] = float(tok[2])
        count += 1
    if count != nnz:
        raise ValidationError(f"{path}: expected {nnz} entries, found {count}")
    return matrix


def write_matrix_market(g: Digraph, path) -> None:
    """Write a digraph's adjacency as a Matrix Market file."""
    mm_write(g.adjacency, path)


def read_matrix_market(path) -> Digraph:
    """Read a digraph from a Matrix Market file; weights must be real and >= 0."""
    matrix = mm_read(path)
    if np.iscomplexobj(matrix):
        raise ValidationError(f"{path}: graph files must be real")
    return Digraph(matrix)


def write_signal_csv(x: np.ndarray, path) -> None:
    """Write a signal as ``node_id,value`` rows with a header."""
    x = np.asarray(x, dtype=float).reshape(-1)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["node_id", "value"])
        for i, v in enumerate(x):
            w.writerow([i, _fmt(v)])


def read_signal_csv(path, n: int) -> np.ndarray:
    """Read a signal written by :func:`write_signal_csv`; requires exactly the
    node ids 0..n-1, each once."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValidationError(f"{path}: empty signal file") from None
        if header != ["node_id", "value"]:
            raise ValidationError(f"{path}: expected header node_id,value")
        x = np.full(n, np.nan)
        seen = set()
        for row in reader:
            if not row:
                continue
            if len(row) != 2:
                raise ValidationError(f"{path}: bad row {row!r}")
            i = int(row[0])
            if not 0 <= i < n:
                raise ValidationError(f"{path}: node id {i} out of range 0..{n - 1}")
            if i in seen:
                raise ValidationError(f"{path}: duplicate node id {i}")
            seen.add(i)
            x[i] = float(row[1])
    if len(seen) != n:
        missing = sorted(set(range(n)) - seen)
        raise ValidationError(f"{path}: missing node ids {missing[:5]}")
    if not np.all(np.isfinite(x)):
        raise ValidationError(f"{path}: non-finite signal values")
    return x


def write_basis_csv(basis: GftBasis, path) -> None:
    """One row per basis column: ``rank,eig_real,eig_imag,frequency``."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["rank", "eig_real", "eig_imag", "frequency"])
        for r in range(basis.n):
            lam = complex(basis.eigenvalues[r])
            w.writerow([r, _fmt(lam.real), _fmt(lam.imag), _fmt(basis.frequencies[r])])


def write_basis_vectors(basis: GftBasis, path) -> None:
    """Basis vectors as Matrix Market; complex only for intrinsically complex kinds."""
    if basis.is_complex:
        mm_write(basis.vectors.astype(complex), path)
    else:
        mm_write(basis.vectors.real.astype(float), path)


def write_spectrum_csv(spectrum: np.ndarray, basis: GftBasis, path) -> None:
    """Spectrum rows ``rank,coeff_real,coeff_imag,eig_real,eig_imag,frequency``."""
    spectrum = np.asarray(spectrum, dtype=complex).reshape(-1)
    if spectrum.shape[0] != basis.n:
        raise ValidationError(
            f"spectrum length {spectrum.shape[0]} != basis size {basis.n}"
        )
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(
            ["rank", "coeff_real", "coeff_imag", "eig_real", "eig_imag", "frequency"]
        )
        for r in range(basis.n):
            c = complex(spectrum[r])
            lam = complex(basis.eigenvalues[r])
            w.writerow(
                [
                    r,
                    _fmt(c.real),
                    _fmt(c.imag),
                    _fmt(lam.real),
                    _fmt(lam.imag),
                    _fmt(basis.frequencies[r]),
                ]
            )


def write_values_csv(values: np.ndarray, path, value_column: str = "value") -> None:
    """Generic ``rank,<value_column>`` CSV (singular values, eigenvalue moduli...)."""
    values = np.asarray(values)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        if np.iscomplexobj(values):
            w.writerow(["rank", f"{value_column}_real", f"{value_column}_imag"])
            for r, v in enumerate(values):
                w.writerow([r, _fmt(v.real), _fmt(v.imag)])
        else:
            w.writerow(["rank", value_column])
            for r, v in enumerate(values):
                w.writerow([r, _fmt(float(v))])
