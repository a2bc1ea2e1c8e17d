"""Binary CSS check-matrix pairs: parsing, validation, syndromes, GF(2) helpers.

Indices are 0-based internally. The css-support text format and anything
printed for users is 1-based.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "CssCode",
    "CssFormatError",
    "PauliError",
    "ResidualClass",
    "Syndromes",
    "ValidationReport",
    "classify_residual",
    "format_css_support_table",
    "in_rowspace_gf2",
    "load_alist_pair",
    "load_code",
    "paper_code_24",
    "parse_alist",
    "parse_css_support_table",
    "syndrome",
    "validate_css",
]


class CssFormatError(ValueError):
    """Raised for malformed css-support or alist input."""


def _as_bits(v, n: int | None = None, what: str = "vector", batch: bool = False) -> np.ndarray:
    arr = np.asarray(v, dtype=np.uint8)
    arr = np.atleast_1d(arr) if batch else arr.ravel()
    if n is not None and arr.shape[-1] != n:
        raise ValueError(f"{what} has length {arr.shape[-1]}, expected {n}")
    if np.any(arr > 1):
        raise ValueError(f"{what} must be binary")
    return arr


def _transpose(rows: Sequence[Sequence[int]], n: int) -> tuple[tuple[int, ...], ...]:
    cols: list[list[int]] = [[] for _ in range(n)]
    for i, row in enumerate(rows):
        for j in row:
            cols[j].append(i)
    return tuple(tuple(c) for c in cols)


@dataclass(frozen=True)
class CssCode:
    """A pair of sparse binary check matrices (HX, HZ) on ``n`` qubits.

    ``hx_rows[i]`` is the sorted column support of X-type check ``i``; these
    checks constrain the z-component of an error. ``hz_rows`` likewise
    constrain the x-component. Column neighbourhoods are derived.
    """

    n: int
    hx_rows: tuple[tuple[int, ...], ...]
    hz_rows: tuple[tuple[int, ...], ...]
    name: str = ""
    hx_cols: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)
    hz_cols: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("n must be positive")
        hx = tuple(self._check_row(r, "HX", i) for i, r in enumerate(self.hx_rows))
        hz = tuple(self._check_row(r, "HZ", i) for i, r in enumerate(self.hz_rows))
        object.__setattr__(self, "hx_rows", hx)
        object.__setattr__(self, "hz_rows", hz)
        object.__setattr__(self, "hx_cols", _transpose(hx, self.n))
        object.__setattr__(self, "hz_cols", _transpose(hz, self.n))

    def _check_row(self, row: Iterable[int], kind: str, i: int) -> tuple[int, ...]:
        cols = [int(j) for j in row]
        if len(set(cols)) != len(cols):
            raise CssFormatError(f"{kind} row {i + 1}: duplicate column index")
        for j in cols:
            if not 0 <= j < self.n:
                raise CssFormatError(f"{kind} row {i + 1}: column {j + 1} out of range 1..{self.n}")
        return tuple(sorted(cols))

    @property
    def mx(self) -> int:
        return len(self.hx_rows)

    @property
    def mz(self) -> int:
        return len(self.hz_rows)

    @classmethod
    def from_matrices(cls, hx, hz, name: str = "") -> CssCode:
        hx = np.atleast_2d(np.asarray(hx, dtype=np.uint8))
        hz = np.atleast_2d(np.asarray(hz, dtype=np.uint8))
        if hx.shape[1] != hz.shape[1]:
            raise ValueError("HX and HZ must have the same number of columns")
        rows_x = [np.flatnonzero(r).tolist() for r in hx if hx.size]
        rows_z = [np.flatnonzero(r).tolist() for r in hz if hz.size]
        return cls(hx.shape[1], tuple(map(tuple, rows_x)), tuple(map(tuple, rows_z)), name)

    def dense(self) -> tuple[np.ndarray, np.ndarray]:
        return self.hx_dense, self.hz_dense

    @cached_property
    def hx_dense(self) -> np.ndarray:
        return _dense(self.hx_rows, self.n)

    @cached_property
    def hz_dense(self) -> np.ndarray:
        return _dense(self.hz_rows, self.n)

    @cached_property
    def _hx_basis(self) -> list[int]:
        return _echelon([_to_int(r) for r in self.hx_rows])

    @cached_property
    def _hz_basis(self) -> list[int]:
        return _echelon([_to_int(r) for r in self.hz_rows])


def _dense(rows: Sequence[Sequence[int]], n: int) -> np.ndarray:
    h = np.zeros((len(rows), n), dtype=np.uint8)
    for i, row in enumerate(rows):
        h[i, list(row)] = 1
    return h


@dataclass(frozen=True)
class PauliError:
    x: np.ndarray
    z: np.ndarray

    def __post_init__(self) -> None:
        x = _as_bits(self.x, what="x")
        z = _as_bits(self.z, len(x), what="z")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "z", z)

    @property
    def n(self) -> int:
        return self.x.shape[0]

    @classmethod
    def zeros(cls, n: int) -> PauliError:
        return cls(np.zeros(n, np.uint8), np.zeros(n, np.uint8))

    @classmethod
    def from_supports(cls, n: int, x: Iterable[int] = (), z: Iterable[int] = ()) -> PauliError:
        """Build from 0-based supports of the two components."""
        e = cls.zeros(n)
        e.x[list(x)] = 1
        e.z[list(z)] = 1
        return e

    def __add__(self, other: PauliError) -> PauliError:
        return PauliError(self.x ^ other.x, self.z ^ other.z)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PauliError):
            return NotImplemented
        return np.array_equal(self.x, other.x) and np.array_equal(self.z, other.z)

    def is_zero(self) -> bool:
        return not (self.x.any() or self.z.any())


@dataclass(frozen=True)
class Syndromes:
    """``sz`` are outcomes of the X-type checks (detect z); ``sx`` of Z-type checks.

    Either may carry leading batch axes (one syndrome pair per row); the
    decoders then run all instances at once.
    """

    sz: np.ndarray
    sx: np.ndarray

    def __post_init__(self) -> None:
        sz = _as_bits(self.sz, what="sZ", batch=True)
        sx = _as_bits(self.sx, what="sX", batch=True)
        if sz.shape[:-1] != sx.shape[:-1]:
            raise ValueError("sZ and sX batch shapes differ")
        object.__setattr__(self, "sz", sz)
        object.__setattr__(self, "sx", sx)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Syndromes):
            return NotImplemented
        return np.array_equal(self.sz, other.sz) and np.array_equal(self.sx, other.sx)

    def __xor__(self, other: Syndromes) -> Syndromes:
        return Syndromes(self.sz ^ other.sz, self.sx ^ other.sx)

    def is_zero(self) -> bool:
        return not (self.sz.any() or self.sx.any())

    def check(self, code: CssCode) -> None:
        if self.sz.shape[-1] != code.mx or self.sx.shape[-1] != code.mz:
            raise ValueError(
                f"syndrome lengths ({self.sz.shape[-1]}, {self.sx.shape[-1]}) "
                f"do not match check counts ({code.mx}, {code.mz})"
            )


@dataclass(frozen=True)
class ValidationReport:
    orthogonal: bool
    col_weights_x: dict[int, int]
    col_weights_z: dict[int, int]
    row_weights_x: dict[int, int]
    row_weights_z: dict[int, int]
    intersection_census: dict[int, int]

    def to_dict(self) -> dict:
        return {
            "orthogonal": self.orthogonal,
            "col_weights_x": self.col_weights_x,
            "col_weights_z": self.col_weights_z,
            "row_weights_x": self.row_weights_x,
            "row_weights_z": self.row_weights_z,
            "intersection_census": self.intersection_census,
        }


class ResidualClass(str, enum.Enum):
    EXACT = "exact"
    STABILIZER = "stabilizer"
    LOGICAL = "logical"
    SYNDROME_MISMATCH = "mismatch"


# --------------------------------------------------------------------------
# css-support v1 and alist I/O
# --------------------------------------------------------------------------

_HEADER = "css-support v1"


def parse_css_support_table(text: str, name: str = "") -> CssCode:
    """Parse the css-support v1 format. Orthogonality is not checked here."""
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines or lines[0] != _HEADER:
        raise CssFormatError(f"first line must be {_HEADER!r}")
    dims = {}
    for lineno, key in zip((1, 2, 3), ("n", "mX", "mZ")):
        if lineno >= len(lines):
            raise CssFormatError(f"missing {key} line")
        parts = lines[lineno].split()
        if len(parts) != 2 or parts[0] != key:
            raise CssFormatError(f"expected '{key} <int>', got {lines[lineno]!r}")
        try:
            dims[key] = int(parts[1])
        except ValueError:
            raise CssFormatError(f"bad integer in {lines[lineno]!r}") from None
        if dims[key] < 0 or (key == "n" and dims[key] == 0):
            raise CssFormatError(f"{key} out of range")

    n = dims["n"]
    body = lines[4:]
    rows: dict[str, list[tuple[int, ...]]] = {"HX": [], "HZ": []}
    expected = {"HX": dims["mX"], "HZ": dims["mZ"]}
    for ln in body:
        head, sep, rest = ln.partition(":")
        parts = head.split()
        if not sep or len(parts) != 2 or parts[0] not in rows:
            raise CssFormatError(f"malformed row line {ln!r}")
        kind = parts[0]
        try:
            idx = int(parts[1])
            cols = [int(t) for t in rest.split()]
        except ValueError:
            raise CssFormatError(f"bad integer in {ln!r}") from None
        if idx != len(rows[kind]) + 1:
            raise CssFormatError(f"{kind} rows out of order: got {idx}, expected {len(rows[kind]) + 1}")
        if idx > expected[kind]:
            raise CssFormatError(f"too many {kind} rows (declared {expected[kind]})")
        if len(set(cols)) != len(cols):
            raise CssFormatError(f"{kind} row {idx}: duplicate column index")
        for j in cols:
            if not 1 <= j <= n:
                raise CssFormatError(f"{kind} row {idx}: column {j} out of range 1..{n}")
        rows[kind].append(tuple(j - 1 for j in cols))
    for kind in ("HX", "HZ"):
        if len(rows[kind]) != expected[kind]:
            raise CssFormatError(f"missing {kind} rows: got {len(rows[kind])}, declared {expected[kind]}")
    return CssCode(n, tuple(rows["HX"]), tuple(rows["HZ"]), name)


def format_css_support_table(code: CssCode) -> str:
    out = [_HEADER, f"n {code.n}", f"mX {code.mx}", f"mZ {code.mz}"]
    for kind, rows in (("HX", code.hx_rows), ("HZ", code.hz_rows)):
        for i, row in enumerate(rows, 1):
            out.append(f"{kind} {i}: " + " ".join(str(j + 1) for j in row))
    return "\n".join(out) + "\n"


def parse_alist(text: str) -> tuple[int, list[tuple[int, ...]]]:
    """Parse a MacKay alist matrix; returns ``(n_cols, row_supports)`` 0-based.

    Zero entries in the support lists are treated as padding.
    """
    try:
        tok = [int(t) for t in text.split()]
    except ValueError:
        raise CssFormatError("alist contains non-integer tokens") from None
    if len(tok) < 4:
        raise CssFormatError("alist too short")
    n, m = tok[0], tok[1]
    pos = 4
    col_w = tok[pos:pos + n]
    pos += n
    row_w = tok[pos:pos + m]
    pos += m
    if len(col_w) != n or len(row_w) != m:
        raise CssFormatError("alist truncated in weight lists")
    cols = []
    for j in range(n):
        cols.append(tok[pos:pos + col_w[j]])
        pos += col_w[j]
        # skip zero padding up to the declared max column weight
        while pos < len(tok) and tok[pos] == 0:
            pos += 1
    rows = []
    for i in range(m):
        r = tok[pos:pos + row_w[i]]
        if len(r) != row_w[i]:
            raise CssFormatError("alist truncated in row lists")
        rows.append(r)
        pos += row_w[i]
        while pos < len(tok) and tok[pos] == 0:
            pos += 1
    for i, r in enumerate(rows):
        for j in r:
            if not 1 <= j <= n:
                raise CssFormatError(f"alist row {i + 1}: column {j} out of range")
    # both halves must describe the same matrix
    from_cols = [sorted(i + 1 for i in range(m) if (j + 1) in rows[i]) for j in range(n)]
    if [sorted(c) for c in cols] != from_cols:
        raise CssFormatError("alist column lists disagree with row lists")
    return n, [tuple(j - 1 for j in r) for r in rows]


def load_alist_pair(hx_path: str | Path, hz_path: str | Path) -> CssCode:
    nx, hx = parse_alist(Path(hx_path).read_text())
    nz, hz = parse_alist(Path(hz_path).read_text())
    if nx != nz:
        raise CssFormatError(f"alist column counts differ: {nx} vs {nz}")
    return CssCode(nx, tuple(hx), tuple(hz), f"alist:{hx_path},{hz_path}")


def load_code(source: str) -> CssCode:
    """Resolve ``paper24``, ``alist:<hx>,<hz>`` or a css-support file path."""
    if source == "paper24":
        return paper_code_24()
    if source.startswith("alist:"):
        parts = source[len("alist:"):].split(",")
        if len(parts) != 2:
            raise CssFormatError("alist source must be alist:<hx_path>,<hz_path>")
        return load_alist_pair(*parts)
    return parse_css_support_table(Path(source).read_text(encoding="utf-8"), name=source)


# --------------------------------------------------------------------------
# The length-24 (2,6)-regular pair
# --------------------------------------------------------------------------

_PAPER24_HX = (
    (10, 14, 17, 19, 21, 22),
    (2, 3, 4, 7, 8, 24),
    (3, 4, 6, 9, 11, 16),
    (1, 5, 11, 12, 13, 18),
    (5, 9, 10, 12, 14, 17),
    (2, 6, 8, 15, 16, 20),
    (1, 7, 18, 20, 23, 24),
    (13, 15, 19, 21, 22, 23),
)
_PAPER24_HZ = (
    (5, 15, 17, 18, 20, 22),
    (2, 8, 12, 13, 14, 19),
    (1, 3, 4, 10, 14, 18),
    (4, 9, 10, 21, 23, 24),
    (3, 8, 9, 15, 17, 19),
    (1, 7, 11, 16, 20, 24),
    (2, 6, 7, 11, 13, 23),
    (5, 6, 12, 16, 21, 22),
)


def paper_code_24() -> CssCode:
    """The length-24 (2,6)-regular CSS pair with 8 X-type and 8 Z-type checks."""
    return CssCode(
        24,
        tuple(tuple(j - 1 for j in r) for r in _PAPER24_HX),
        tuple(tuple(j - 1 for j in r) for r in _PAPER24_HZ),
        "paper24",
    )


# --------------------------------------------------------------------------
# Validation, syndromes, residuals
# --------------------------------------------------------------------------

def validate_css(code: CssCode) -> ValidationReport:
    census: Counter[int] = Counter()
    zsets = [set(r) for r in code.hz_rows]
    for rx in code.hx_rows:
        sx = set(rx)
        for sz in zsets:
            census[len(sx & sz)] += 1
    return ValidationReport(
        orthogonal=all(size % 2 == 0 for size in census),
        col_weights_x=dict(sorted(Counter(len(c) for c in code.hx_cols).items())),
        col_weights_z=dict(sorted(Counter(len(c) for c in code.hz_cols).items())),
        row_weights_x=dict(sorted(Counter(len(r) for r in code.hx_rows).items())),
        row_weights_z=dict(sorted(Counter(len(r) for r in code.hz_rows).items())),
        intersection_census=dict(sorted(census.items())),
    )


def parity(h: np.ndarray, v: np.ndarray) -> np.ndarray:
    """``H v`` over GF(2); ``v`` may carry leading batch axes."""
    return ((np.asarray(v, dtype=np.intp) @ h.T.astype(np.intp)) & 1).astype(np.uint8)


def syndrome(code: CssCode, error: PauliError) -> Syndromes:
    if error.n != code.n:
        raise ValueError(f"error length {error.n} does not match n={code.n}")
    return Syndromes(parity(code.hx_dense, error.z), parity(code.hz_dense, error.x))


def _to_int(support: Iterable[int]) -> int:
    v = 0
    for j in support:
        v |= 1 << j
    return v


def _echelon(rows: list[int]) -> list[int]:
    """Reduce bitset rows to a basis with distinct leading bits."""
    basis: list[int] = []
    for r in rows:
        for b in basis:
            r = min(r, r ^ b)
        if r:
            basis.append(r)
            basis.sort(reverse=True)
    return basis


def _reduce(v: int, basis: list[int]) -> int:
    for b in basis:
        v = min(v, v ^ b)
    return v


def in_rowspace_gf2(rows: Sequence[Iterable[int]], v) -> bool:
    """True iff binary vector ``v`` is a GF(2) combination of ``rows`` (0-based supports)."""
    target = _to_int(np.flatnonzero(np.asarray(v)).tolist())
    return _reduce(target, _echelon([_to_int(r) for r in rows])) == 0


def classify_residual(code: CssCode, true_error: PauliError, estimate: PauliError) -> ResidualClass:
    if true_error.n != code.n or estimate.n != code.n:
        raise ValueError("error lengths do not match code")
    r = true_error + estimate
    if r.is_zero():
        return ResidualClass.EXACT
    if not syndrome(code, r).is_zero():
        return ResidualClass.SYNDROME_MISMATCH
    x_ok = _reduce(_to_int(np.flatnonzero(r.x).tolist()), code._hx_basis) == 0
    z_ok = _reduce(_to_int(np.flatnonzero(r.z).tolist()), code._hz_basis) == 0
    return ResidualClass.STABILIZER if x_ok and z_ok else ResidualClass.LOGICAL
