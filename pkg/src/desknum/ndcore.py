"""Dense matrix/vector kernel.

Row-major real-valued matrices and vectors with element-wise arithmetic,
reductions, naive and Strassen multiplication, transpose/reshape, vector
geometry, norms, and absolute/relative error metrics. Everything is a pure
function over immutable values; constructors reject non-finite entries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

from .errors import (
    DivisionByZero,
    EmptyInput,
    NonFinite,
    RelativeUndefined,
    ShapeMismatch,
    SizeMismatch,
    ZeroNorm,
)

# recursion switches to the cubic kernel below this size
STRASSEN_CUTOFF = 32


def _checked_floats(values: Iterable[float], what: str) -> list[float]:
    out = []
    for v in values:
        f = float(v)
        if not math.isfinite(f):
            raise NonFinite(f"{what} contains a non-finite entry: {v!r}")
        out.append(f)
    return out


class Matrix:
    """Dense rows x cols matrix stored row-major as float64."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows: int, cols: int, data: Sequence[float]):
        if rows < 1 or cols < 1:
            raise ShapeMismatch(f"matrix dims must be positive, got {rows}x{cols}")
        checked = _checked_floats(data, "matrix data")
        if len(checked) != rows * cols:
            raise SizeMismatch(
                f"data length {len(checked)} does not match {rows}x{cols}"
            )
        self.rows = rows
        self.cols = cols
        self.data = checked

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[float]]) -> "Matrix":
        if not rows:
            raise EmptyInput("matrix needs at least one row")
        ncols = len(rows[0])
        flat: list[float] = []
        for r in rows:
            if len(r) != ncols:
                raise ShapeMismatch("ragged rows in matrix literal")
            flat.extend(r)
        return cls(len(rows), ncols, flat)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        return cls(rows, cols, [0.0] * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        m = cls.zeros(n, n)
        for i in range(n):
            m.data[i * n + i] = 1.0
        return m

    def get(self, i: int, j: int) -> float:
        return self.data[i * self.cols + j]

    def row(self, i: int) -> list[float]:
        return self.data[i * self.cols : (i + 1) * self.cols]

    def col(self, j: int) -> list[float]:
        return self.data[j :: self.cols]

    def to_rows(self) -> list[list[float]]:
        return [self.row(i) for i in range(self.rows)]

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Matrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.data == other.data
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"Matrix({self.to_rows()!r})"


class Vector:
    """Real vector of length >= 1 with finite entries."""

    __slots__ = ("data",)

    def __init__(self, data: Sequence[float]):
        checked = _checked_floats(data, "vector data")
        if not checked:
            raise EmptyInput("vector needs at least one entry")
        self.data = checked

    def __len__(self) -> int:
        return len(self.data)

    def __iter__(self):
        return iter(self.data)

    def __getitem__(self, i):
        return self.data[i]

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Vector):
            return self.data == other.data
        return NotImplemented

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"Vector({self.data!r})"


@dataclass(frozen=True)
class ErrorPair:
    """Absolute and relative error of an approximation."""

    absolute: float
    relative: float


Scalar = Union[int, float]


def _vec(v: Union[Vector, Sequence[float]], what: str = "vector") -> list[float]:
    if isinstance(v, Vector):
        return v.data
    data = _checked_floats(v, what)
    if not data:
        raise EmptyInput(f"{what} must be nonempty")
    return data


def ew_binary(a: Matrix, b: Union[Matrix, Scalar], op: str) -> Matrix:
    """Element-wise add/sub/mul/div with scalar broadcasting on b."""
    if op not in ("add", "sub", "mul", "div"):
        raise ValueError(f"unknown element-wise op {op!r}")
    if isinstance(b, Matrix):
        if (a.rows, a.cols) != (b.rows, b.cols):
            raise ShapeMismatch(
                f"shape {a.rows}x{a.cols} does not match {b.rows}x{b.cols}"
            )
        bdata = b.data
    else:
        f = float(b)
        if not math.isfinite(f):
            raise NonFinite("scalar operand must be finite")
        bdata = [f] * len(a.data)
    if op == "div" and any(x == 0.0 for x in bdata):
        raise DivisionByZero("zero divisor entry")
    if op == "add":
        out = [x + y for x, y in zip(a.data, bdata)]
    elif op == "sub":
        out = [x - y for x, y in zip(a.data, bdata)]
    elif op == "mul":
        out = [x * y for x, y in zip(a.data, bdata)]
    else:
        out = [x / y for x, y in zip(a.data, bdata)]
    return Matrix(a.rows, a.cols, out)


def reduce(v: Union[Vector, Sequence[float]], kind: str) -> float:
    """Fold a vector down to one value: sum, mean, max, or min."""
    data = _vec(v)
    if kind == "sum":
        return math.fsum(data)
    if kind == "mean":
        return math.fsum(data) / len(data)
    if kind == "max":
        return max(data)
    if kind == "min":
        return min(data)
    raise ValueError(f"unknown reduction {kind!r}")


def _naive_ll(a: list[list[float]], b: list[list[float]]) -> list[list[float]]:
    # cubic kernel on list-of-lists; b is walked row-wise for locality
    n_rows, inner, n_cols = len(a), len(b), len(b[0])
    out = [[0.0] * n_cols for _ in range(n_rows)]
    for i in range(n_rows):
        arow = a[i]
        orow = out[i]
        for k in range(inner):
            aik = arow[k]
            if aik == 0.0:
                continue
            brow = b[k]
            for j in range(n_cols):
                orow[j] += aik * brow[j]
    return out


def _ll_add(a, b):
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def _ll_sub(a, b):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def _strassen_square(a: list[list[float]], b: list[list[float]]) -> list[list[float]]:
    n = len(a)
    if n < STRASSEN_CUTOFF:
        return _naive_ll(a, b)
    h = n // 2
    a11 = [row[:h] for row in a[:h]]
    a12 = [row[h:] for row in a[:h]]
    a21 = [row[:h] for row in a[h:]]
    a22 = [row[h:] for row in a[h:]]
    b11 = [row[:h] for row in b[:h]]
    b12 = [row[h:] for row in b[:h]]
    b21 = [row[:h] for row in b[h:]]
    b22 = [row[h:] for row in b[h:]]
    m1 = _strassen_square(_ll_add(a11, a22), _ll_add(b11, b22))
    m2 = _strassen_square(_ll_add(a21, a22), b11)
    m3 = _strassen_square(a11, _ll_sub(b12, b22))
    m4 = _strassen_square(a22, _ll_sub(b21, b11))
    m5 = _strassen_square(_ll_add(a11, a12), b22)
    m6 = _strassen_square(_ll_sub(a21, a11), _ll_add(b11, b12))
    m7 = _strassen_square(_ll_sub(a12, a22), _ll_add(b21, b22))
    c11 = _ll_add(_ll_sub(_ll_add(m1, m4), m5), m7)
    c12 = _ll_add(m3, m5)
    c21 = _ll_add(m2, m4)
    c22 = _ll_add(_ll_add(_ll_sub(m1, m2), m3), m6)
    out = [c11[i] + c12[i] for i in range(h)]
    out += [c21[i] + c22[i] for i in range(h)]
    return out


def _next_pow2(n: int) -> int:
    p = 1
    while p < n:
        p *= 2
    return p


def matmul(a: Matrix, b: Matrix, algo: str = "naive") -> Matrix:
    """Matrix product; algo is "naive" or "strassen" (zero-pad, recurse, crop)."""
    if a.cols != b.rows:
        raise ShapeMismatch(
            f"inner dims differ: {a.rows}x{a.cols} vs {b.rows}x{b.cols}"
        )
    if algo == "naive":
        out = _naive_ll(a.to_rows(), b.to_rows())
        return Matrix.from_rows(out)
    if algo != "strassen":
        raise ValueError(f"unknown matmul algorithm {algo!r}")
    size = _next_pow2(max(a.rows, a.cols, b.cols))
    pa = [[a.get(i, j) if i < a.rows and j < a.cols else 0.0 for j in range(size)] for i in range(size)]
    pb = [[b.get(i, j) if i < b.rows and j < b.cols else 0.0 for j in range(size)] for i in range(size)]
    full = _strassen_square(pa, pb)
    return Matrix.from_rows([row[: b.cols] for row in full[: a.rows]])


def transpose(a: Matrix) -> Matrix:
    out = [0.0] * (a.rows * a.cols)
    for i in range(a.rows):
        base = i * a.cols
        for j in range(a.cols):
            out[j * a.rows + i] = a.data[base + j]
    return Matrix(a.cols, a.rows, out)


def reshape(a: Matrix, r: int, c: int) -> Matrix:
    """Row-major reinterpretation; the flat data sequence is unchanged."""
    if r * c != a.rows * a.cols:
        raise SizeMismatch(f"cannot reshape {a.rows}x{a.cols} into {r}x{c}")
    return Matrix(r, c, a.data)


def dot(a: Union[Vector, Sequence[float]], b: Union[Vector, Sequence[float]]) -> float:
    va, vb = _vec(a), _vec(b)
    if len(va) != len(vb):
        raise ShapeMismatch(f"lengths differ: {len(va)} vs {len(vb)}")
    return math.fsum(x * y for x, y in zip(va, vb))


def cross3(a: Union[Vector, Sequence[float]], b: Union[Vector, Sequence[float]]) -> Vector:
    va, vb = _vec(a), _vec(b)
    if len(va) != 3 or len(vb) != 3:
        raise ShapeMismatch("cross product needs two length-3 vectors")
    return Vector(
        [
            va[1] * vb[2] - va[2] * vb[1],
            va[2] * vb[0] - va[0] * vb[2],
            va[0] * vb[1] - va[1] * vb[0],
        ]
    )


def _flat(x: Union[Matrix, Vector, Sequence[float]]) -> list[float]:
    if isinstance(x, Matrix):
        return x.data
    return _vec(x)


def norm(x: Union[Matrix, Vector, Sequence[float]], kind: str = "l2") -> float:
    """L1 or L2 norm of a vector; Frobenius norm of a matrix (= L2 of its data)."""
    data = _flat(x)
    if kind == "l1":
        return math.fsum(abs(v) for v in data)
    if kind in ("l2", "frobenius"):
        return math.sqrt(math.fsum(v * v for v in data))
    raise ValueError(f"unknown norm kind {kind!r}")


def cosine_similarity(a, b) -> float:
    va, vb = _vec(a), _vec(b)
    if len(va) != len(vb):
        raise ShapeMismatch(f"lengths differ: {len(va)} vs {len(vb)}")
    na, nb = norm(va, "l2"), norm(vb, "l2")
    if na == 0.0 or nb == 0.0:
        raise ZeroNorm("cosine similarity undefined for zero-norm input")
    return dot(va, vb) / (na * nb)


def euclidean_distance(a, b) -> float:
    va, vb = _vec(a), _vec(b)
    if len(va) != len(vb):
        raise ShapeMismatch(f"lengths differ: {len(va)} vs {len(vb)}")
    return math.sqrt(math.fsum((x - y) ** 2 for x, y in zip(va, vb)))


def error_metrics(exact: float, approx: float) -> ErrorPair:
    """Absolute error |exact - approx| and its value relative to |exact|."""
    absolute = abs(exact - approx)
    if exact == 0.0:
        raise RelativeUndefined("relative error undefined when exact value is 0")
    return ErrorPair(absolute=absolute, relative=absolute / abs(exact))
