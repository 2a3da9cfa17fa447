"""DFT/FFT engine with convolution and frequency-domain filtering.

Conventions: forward transform unscaled, inverse scaled by 1/n, so a
round trip is the identity. dft is the O(n^2) definition and doubles as
the correctness oracle for the iterative radix-2 fft. Public transforms
reject non-power-of-two lengths; only convolve_fft pads internally
(and crops back) by contract.
"""

from __future__ import annotations

import cmath
import functools
import math
from dataclasses import dataclass
from typing import Sequence

from .errors import (
    BadCutoff,
    BadKeep,
    NoPeak,
    NotPowerOfTwo,
    NonFinite,
    ShapeMismatch,
)
from .ndcore import Vector


class ComplexVec:
    """Complex sequence stored as parallel real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re: Sequence[float], im: Sequence[float]):
        re = [float(v) for v in re]
        im = [float(v) for v in im]
        if len(re) != len(im):
            raise ShapeMismatch(f"re has {len(re)} entries, im has {len(im)}")
        for v in re + im:
            if not math.isfinite(v):
                raise NonFinite("complex entries must be finite")
        self.re = re
        self.im = im

    @classmethod
    def from_real(cls, values: Sequence[float]) -> "ComplexVec":
        values = list(values)
        return cls(values, [0.0] * len(values))

    def __len__(self) -> int:
        return len(self.re)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, ComplexVec):
            return self.re == other.re and self.im == other.im
        return NotImplemented

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"ComplexVec({self.re!r}, {self.im!r})"


@dataclass(frozen=True)
class Spectrum:
    """FFT bins paired with their frequency axis."""

    bins: ComplexVec
    freqs: tuple[float, ...]
    sample_spacing: float


class Image2D:
    """Row-major real image with positive dimensions."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows: int, cols: int, data: Sequence[float]):
        if rows < 1 or cols < 1:
            raise ShapeMismatch("image dimensions must be positive")
        data = [float(v) for v in data]
        if len(data) != rows * cols:
            raise ShapeMismatch(f"expected {rows * cols} pixels, got {len(data)}")
        for v in data:
            if not math.isfinite(v):
                raise NonFinite("pixel values must be finite")
        self.rows = rows
        self.cols = cols
        self.data = data

    def get(self, r: int, c: int) -> float:
        return self.data[r * self.cols + c]


def _to_complex(x: ComplexVec) -> list[complex]:
    return [complex(a, b) for a, b in zip(x.re, x.im)]


def _from_complex(xs: Sequence[complex]) -> ComplexVec:
    return ComplexVec([z.real for z in xs], [z.imag for z in xs])


def _require_pow2(n: int) -> None:
    if n < 1 or n & (n - 1):
        raise NotPowerOfTwo(f"length {n} is not a power of two")


@functools.lru_cache(maxsize=None)
def _roots(n: int) -> tuple[complex, ...]:
    # e^{-2pi i k/n}; shared by dft (full table) and fft (strided)
    return tuple(cmath.exp(-2j * math.pi * k / n) for k in range(n))


def dft(x: ComplexVec) -> ComplexVec:
    """Direct O(n^2) transform from the definition."""
    xs = _to_complex(x)
    n = len(xs)
    table = _roots(n)
    out = []
    for k in range(n):
        acc = 0j
        for t, xt in enumerate(xs):
            acc += xt * table[(k * t) % n]
        out.append(acc)
    return _from_complex(out)


def _fft_inplace(a: list[complex], inverse: bool) -> None:
    n = len(a)
    j = 0
    for i in range(1, n):
        bit = n >> 1
        while j & bit:
            j ^= bit
            bit >>= 1
        j |= bit
        if i < j:
            a[i], a[j] = a[j], a[i]
    table = _roots(n)
    size = 2
    while size <= n:
        half = size // 2
        stride = n // size
        for start in range(0, n, size):
            for k in range(half):
                w = table[k * stride]
                if inverse:
                    w = w.conjugate()
                u = a[start + k]
                v = a[start + k + half] * w
                a[start + k] = u + v
                a[start + k + half] = u - v
        size *= 2
    if inverse:
        scale = 1.0 / n
        for i in range(n):
            a[i] *= scale


def fft(x: ComplexVec) -> ComplexVec:
    _require_pow2(len(x))
    a = _to_complex(x)
    _fft_inplace(a, inverse=False)
    return _from_complex(a)


def ifft(x: ComplexVec) -> ComplexVec:
    _require_pow2(len(x))
    a = _to_complex(x)
    _fft_inplace(a, inverse=True)
    return _from_complex(a)


def fft_freqs(n: int, d: float = 1.0) -> list[float]:
    if n < 1:
        raise ShapeMismatch("need n >= 1")
    if d <= 0:
        raise BadCutoff("sample spacing must be positive")
    split = (n + 1) // 2
    return [k / (n * d) if k < split else (k - n) / (n * d) for k in range(n)]


def fftshift(v: Sequence[float]) -> list[float]:
    v = list(v)
    k = len(v) // 2
    if k == 0:
        return v
    return v[-k:] + v[:-k]


def convolve_direct(f: Sequence[float], g: Sequence[float]) -> Vector:
    a = Vector(list(f)).data
    b = Vector(list(g)).data
    out = [0.0] * (len(a) + len(b) - 1)
    for i, fi in enumerate(a):
        for j, gj in enumerate(b):
            out[i + j] += fi * gj
    return Vector(out)


def convolve_fft(f: Sequence[float], g: Sequence[float]) -> Vector:
    a = Vector(list(f)).data
    b = Vector(list(g)).data
    m = len(a) + len(b) - 1
    size = 1
    while size < m:
        size *= 2
    fa = _to_complex(ComplexVec.from_real(a + [0.0] * (size - len(a))))
    fb = _to_complex(ComplexVec.from_real(b + [0.0] * (size - len(b))))
    _fft_inplace(fa, inverse=False)
    _fft_inplace(fb, inverse=False)
    prod = [p * q for p, q in zip(fa, fb)]
    _fft_inplace(prod, inverse=True)
    return Vector([z.real for z in prod[:m]])


def convolve_circular(f: Sequence[float], g: Sequence[float], n: int) -> Vector:
    a = Vector(list(f)).data
    b = Vector(list(g)).data
    if n < max(len(a), len(b)):
        raise ValueError("period n must cover both inputs")
    out = [0.0] * n
    for i, fi in enumerate(a):
        for j, gj in enumerate(b):
            out[(i + j) % n] += fi * gj
    return Vector(out)


def fft2(img: Image2D) -> list[ComplexVec]:
    """Separable transform: FFT each row, then each column."""
    _require_pow2(img.rows)
    _require_pow2(img.cols)
    grid = [
        [complex(img.get(r, c), 0.0) for c in range(img.cols)]
        for r in range(img.rows)
    ]
    return _fft2_grid(grid, inverse=False)


def ifft2(field: Sequence[ComplexVec]) -> list[ComplexVec]:
    rows = len(field)
    _require_pow2(rows)
    cols = len(field[0])
    _require_pow2(cols)
    for row in field:
        if len(row) != cols:
            raise ShapeMismatch("ragged field")
    grid = [_to_complex(row) for row in field]
    return _fft2_grid(grid, inverse=True)


def _fft2_grid(grid: list[list[complex]], inverse: bool) -> list[ComplexVec]:
    for row in grid:
        _fft_inplace(row, inverse)
    rows, cols = len(grid), len(grid[0])
    for c in range(cols):
        col = [grid[r][c] for r in range(rows)]
        _fft_inplace(col, inverse)
        for r in range(rows):
            grid[r][c] = col[r]
    return [_from_complex(row) for row in grid]


def lowpass1d(signal: Sequence[float], sample_rate: float, cutoff: float) -> Vector:
    """Zero every FFT bin whose frequency magnitude exceeds the cutoff,
    then transform back. Conjugate partners share one |freq|, so the
    mask keeps the output real."""
    data = Vector(list(signal)).data
    n = len(data)
    _require_pow2(n)
    if not 0 < cutoff < sample_rate / 2:
        raise BadCutoff("cutoff must lie in (0, sample_rate/2)")
    a = _to_complex(ComplexVec.from_real(data))
    _fft_inplace(a, inverse=False)
    freqs = fft_freqs(n, 1.0 / sample_rate)
    for k, fr in enumerate(freqs):
        if abs(fr) > cutoff:
            a[k] = 0j
    _fft_inplace(a, inverse=True)
    return Vector([z.real for z in a])


def spectral_pool2d(img: Image2D, keep: int) -> Image2D:
    if not 1 <= keep <= min(img.rows, img.cols):
        raise BadKeep(f"keep must be in [1, {min(img.rows, img.cols)}]")
    field = fft2(img)
    grid = [_to_complex(row) for row in field]
    for r in range(img.rows):
        for c in range(img.cols):
            if r >= keep or c >= keep:
                grid[r][c] = 0j
    back = _fft2_grid(grid, inverse=True)
    data = []
    for row in back:
        data.extend(row.re)
    return Image2D(img.rows, img.cols, data)


def spectrum(signal: Sequence[float], sample_spacing: float) -> Spectrum:
    data = Vector(list(signal)).data
    _require_pow2(len(data))
    if sample_spacing <= 0:
        raise BadCutoff("sample spacing must be positive")
    bins = fft(ComplexVec.from_real(data))
    freqs = tuple(fft_freqs(len(data), sample_spacing))
    return Spectrum(bins, freqs, sample_spacing)


def peak_frequency(signal: Sequence[float], sample_rate: float) -> float:
    """Frequency of the strongest non-DC bin on the nonnegative half."""
    data = Vector(list(signal)).data
    n = len(data)
    _require_pow2(n)
    bins = fft(ComplexVec.from_real(data))
    freqs = fft_freqs(n, 1.0 / sample_rate)
    best_k = -1
    best_mag = 0.0
    # ascending frequency scan, so exact ties keep the lowest frequency
    for k in range(1, (n + 1) // 2):
        mag = math.hypot(bins.re[k], bins.im[k])
        if mag > best_mag:
            best_k = k
            best_mag = mag
    floor = 1e-12 * max(1.0, math.hypot(bins.re[0], bins.im[0]))
    if best_k < 0 or best_mag <= floor:
        raise NoPeak("no non-DC spectral content")
    return freqs[best_k]
