"""
Exact scalars and dense exact linear algebra.

Two kinds of field are supported: the rationals (``fractions.Fraction`` under a
height cap) and prime fields F_p for large primes. Matrices store raw field
values (``Fraction`` or ``int``); ``FieldScalar`` pairs a value with its field
at API boundaries so mixing fields is caught.

Randomness comes from ``RandomSource``, a numpy ``Generator`` seeded through a
``SeedSequence``. Child streams are derived with ``spawn_seeds`` so a worker
for one prime can be replayed from the integer seed recorded in a report.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from sympy import nextprime

from exceptions import FieldMismatchError, HeightOverflowError, SamplingError

logger = logging.getLogger(__name__)

DEFAULT_HEIGHT_BITS = 1 << 16
DEFAULT_RATIONAL_WINDOW = 10_000
DEFAULT_PRIME_BITS = 62

_SEED_MASK = (1 << 64) - 1
_MAX_DRAW_SPAN = (1 << 63) - 1


@dataclass(frozen=True)
class ExactField:
    """
    The rationals (``modulus is None``) or the prime field F_modulus.

    ``height_bits`` bounds the bit length of numerators and denominators of
    rational values; it is ignored for prime fields.
    """

    modulus: Optional[int] = None
    height_bits: int = DEFAULT_HEIGHT_BITS

    @classmethod
    def rational(cls, height_bits: int = DEFAULT_HEIGHT_BITS) -> "ExactField":
        return cls(None, height_bits)

    @classmethod
    def modular(cls, prime: int) -> "ExactField":
        if prime < 3:
            raise ValueError(f"Prime modulus must be at least 3, got {prime}")
        return cls(int(prime))

    @property
    def is_rational(self) -> bool:
        return self.modulus is None

    @property
    def tag(self) -> str:
        return "QQ" if self.modulus is None else f"GF({self.modulus})"

    @property
    def zero(self) -> Any:
        return Fraction(0) if self.modulus is None else 0

    @property
    def one(self) -> Any:
        return Fraction(1) if self.modulus is None else 1

    def convert(self, value: Any) -> Any:
        """
        Bring an integer, Fraction or FieldScalar into this field.

        Raises:
            FieldMismatchError: If a FieldScalar of another field is passed, or
                a rational denominator is divisible by the modulus.
        """
        if isinstance(value, FieldScalar):
            if value.field != self:
                raise FieldMismatchError(
                    "Cannot use a scalar from another field",
                    details={"expected": self.tag, "got": value.field.tag}
                )
            return value.value
        if isinstance(value, float):
            raise TypeError("Floating-point values are not exact field elements")
        if self.modulus is None:
            return self._check(Fraction(value))
        p = self.modulus
        if isinstance(value, Fraction):
            if value.denominator % p == 0:
                raise FieldMismatchError(
                    "Rational value has no image modulo the prime",
                    details={"value": str(value), "modulus": p}
                )
            return value.numerator * pow(value.denominator, p - 2, p) % p
        return int(value) % p

    def _check(self, value: Fraction) -> Fraction:
        if (value.numerator.bit_length() > self.height_bits
                or value.denominator.bit_length() > self.height_bits):
            raise HeightOverflowError(
                "Rational value exceeds the height cap",
                details={"height_bits": self.height_bits}
            )
        return value

    def add(self, a: Any, b: Any) -> Any:
        if self.modulus is None:
            return self._check(a + b)
        return (a + b) % self.modulus

    def sub(self, a: Any, b: Any) -> Any:
        if self.modulus is None:
            return self._check(a - b)
        return (a - b) % self.modulus

    def mul(self, a: Any, b: Any) -> Any:
        if self.modulus is None:
            return self._check(a * b)
        return (a * b) % self.modulus

    def neg(self, a: Any) -> Any:
        if self.modulus is None:
            return -a
        return (-a) % self.modulus

    def inv(self, a: Any) -> Any:
        if not a:
            raise ZeroDivisionError("Zero has no inverse")
        if self.modulus is None:
            return 1 / a
        return pow(a, self.modulus - 2, self.modulus)

    def div(self, a: Any, b: Any) -> Any:
        return self.mul(a, self.inv(b))

    def is_zero(self, a: Any) -> bool:
        return not a


RATIONALS = ExactField.rational()


@dataclass(frozen=True)
class FieldScalar:
    """A field value tagged with its field; arithmetic refuses to mix fields."""

    value: Any
    field: ExactField

    def _other(self, other: Any) -> Any:
        if isinstance(other, FieldScalar):
            if other.field != self.field:
                raise FieldMismatchError(
                    "Arithmetic between different fields",
                    details={"left": self.field.tag, "right": other.field.tag}
                )
            return other.value
        if isinstance(other, (int, Fraction)):
            return self.field.convert(other)
        return NotImplemented

    def _wrap(self, value: Any) -> "FieldScalar":
        return FieldScalar(value, self.field)

    def __add__(self, other: Any) -> "FieldScalar":
        value = self._other(other)
        if value is NotImplemented:
            return NotImplemented
        return self._wrap(self.field.add(self.value, value))

    __radd__ = __add__

    def __sub__(self, other: Any) -> "FieldScalar":
        value = self._other(other)
        if value is NotImplemented:
            return NotImplemented
        return self._wrap(self.field.sub(self.value, value))

    def __rsub__(self, other: Any) -> "FieldScalar":
        value = self._other(other)
        if value is NotImplemented:
            return NotImplemented
        return self._wrap(self.field.sub(value, self.value))

    def __mul__(self, other: Any) -> "FieldScalar":
        value = self._other(other)
        if value is NotImplemented:
            return NotImplemented
        return self._wrap(self.field.mul(self.value, value))

    __rmul__ = __mul__

    def __truediv__(self, other: Any) -> "FieldScalar":
        value = self._other(other)
        if value is NotImplemented:
            return NotImplemented
        return self._wrap(self.field.div(self.value, value))

    def __neg__(self) -> "FieldScalar":
        return self._wrap(self.field.neg(self.value))

    def inverse(self) -> "FieldScalar":
        return self._wrap(self.field.inv(self.value))

    @property
    def is_zero(self) -> bool:
        return self.field.is_zero(self.value)

    def __str__(self) -> str:
        return str(self.value)


def scalar(value: Any, field: ExactField = RATIONALS) -> FieldScalar:
    """Build a FieldScalar from an int or Fraction."""
    return FieldScalar(field.convert(value), field)


def _echelon(
    field: ExactField,
    grid: Sequence[Sequence[Any]],
    cols: int,
    reduced: bool
) -> Tuple[List[List[Any]], List[int]]:
    """
    Gaussian elimination with the first nonzero entry of each column as pivot.

    Returns the nonzero rows of the (reduced) row echelon form and the pivot
    columns. Pivot rows are normalized to a leading 1.
    """
    work = [list(row) for row in grid]
    pivots: List[int] = []
    p = field.modulus
    rank = 0
    for col in range(cols):
        if rank == len(work):
            break
        pivot = next((i for i in range(rank, len(work)) if work[i][col]), None)
        if pivot is None:
            continue
        work[rank], work[pivot] = work[pivot], work[rank]
        inverse = field.inv(work[rank][col])
        head = work[rank]
        if p is None:
            head = head[:col] + [field.mul(inverse, x) for x in head[col:]]
        else:
            head = head[:col] + [inverse * x % p for x in head[col:]]
        work[rank] = head
        start = 0 if reduced else rank + 1
        for i in range(start, len(work)):
            if i == rank:
                continue
            row = work[i]
            factor = row[col]
            if not factor:
                continue
            if p is None:
                tail = [field.sub(a, field.mul(factor, b)) for a, b in zip(row[col:], head[col:])]
            else:
                tail = [(a - factor * b) % p for a, b in zip(row[col:], head[col:])]
            work[i] = row[:col] + tail
        pivots.append(col)
        rank += 1
    return work[:rank], pivots


@dataclass(frozen=True)
class ExactMatrix:
    """Dense matrix of raw values over one exact field."""

    field: ExactField
    rows: int
    cols: int
    entries: Tuple[Tuple[Any, ...], ...]

    @classmethod
    def from_rows(
        cls,
        field: ExactField,
        rows: Iterable[Sequence[Any]],
        cols: Optional[int] = None,
        *,
        convert: bool = True
    ) -> "ExactMatrix":
        """
        Build a matrix from row sequences.

        Args:
            field: Field of the entries
            rows: Row sequences (ints, Fractions, FieldScalars or raw values)
            cols: Column count, required when there are no rows
            convert: Set False when the entries are already raw field values

        Raises:
            ValueError: If rows have unequal lengths or no column count is known
        """
        if convert:
            grid = tuple(tuple(field.convert(x) for x in row) for row in rows)
        else:
            grid = tuple(tuple(row) for row in rows)
        if cols is None:
            if not grid:
                raise ValueError("Column count is required for a matrix without rows")
            cols = len(grid[0])
        if any(len(row) != cols for row in grid):
            raise ValueError(f"All rows must have {cols} entries")
        return cls(field, len(grid), cols, grid)

    @classmethod
    def zeros(cls, field: ExactField, rows: int, cols: int) -> "ExactMatrix":
        return cls(field, rows, cols, tuple((field.zero,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, field: ExactField, size: int) -> "ExactMatrix":
        grid = tuple(
            tuple(field.one if i == j else field.zero for j in range(size))
            for i in range(size)
        )
        return cls(field, size, size, grid)

    def entry(self, i: int, j: int) -> FieldScalar:
        return FieldScalar(self.entries[i][j], self.field)

    def _require_same_field(self, other: "ExactMatrix") -> None:
        if other.field != self.field:
            raise FieldMismatchError(
                "Matrices live over different fields",
                details={"left": self.field.tag, "right": other.field.tag}
            )

    def stack(self, other: "ExactMatrix") -> "ExactMatrix":
        """Rows of self followed by rows of other."""
        self._require_same_field(other)
        if other.cols != self.cols:
            raise ValueError(f"Cannot stack {self.cols} columns on {other.cols} columns")
        return ExactMatrix(self.field, self.rows + other.rows, self.cols, self.entries + other.entries)

    def transpose(self) -> "ExactMatrix":
        grid = tuple(tuple(self.entries[i][j] for i in range(self.rows)) for j in range(self.cols))
        return ExactMatrix(self.field, self.cols, self.rows, grid)

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._require_same_field(other)
        if self.cols != other.rows:
            raise ValueError(f"Shape mismatch: {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        f = self.field
        columns = other.transpose().entries
        grid = []
        for row in self.entries:
            out = []
            for column in columns:
                acc = f.zero
                for a, b in zip(row, column):
                    if a and b:
                        acc = f.add(acc, f.mul(a, b))
                out.append(acc)
            grid.append(tuple(out))
        return ExactMatrix(f, self.rows, other.cols, tuple(grid))

    def apply(self, vector: Sequence[Any]) -> Tuple[Any, ...]:
        """Matrix times a raw column vector."""
        f = self.field
        result = []
        for row in self.entries:
            acc = f.zero
            for a, b in zip(row, vector):
                if a and b:
                    acc = f.add(acc, f.mul(a, b))
            result.append(acc)
        return tuple(result)

    def select_rows(self, indices: Iterable[int]) -> "ExactMatrix":
        grid = tuple(self.entries[i] for i in indices)
        return ExactMatrix(self.field, len(grid), self.cols, grid)

    def is_zero(self) -> bool:
        return not any(x for row in self.entries for x in row)

    def is_symmetric(self) -> bool:
        return self.rows == self.cols and all(
            self.entries[i][j] == self.entries[j][i]
            for i in range(self.rows) for j in range(i + 1, self.cols)
        )

    def echelon(self, reduced: bool = False) -> Tuple[List[List[Any]], List[int]]:
        return _echelon(self.field, self.entries, self.cols, reduced)

    def rank(self) -> int:
        return len(self.echelon()[1])

    def row_basis(self) -> "ExactMatrix":
        """Independent rows spanning the row space (echelon form)."""
        rows, _ = self.echelon()
        return ExactMatrix(self.field, len(rows), self.cols, tuple(tuple(r) for r in rows))

    def kernel_basis(self) -> List[Tuple[Any, ...]]:
        return kernel_basis(self)


def rank(matrix: ExactMatrix) -> int:
    """Rank over the matrix's field."""
    return matrix.rank()


def kernel_basis(matrix: ExactMatrix) -> List[Tuple[Any, ...]]:
    """
    Basis of the right kernel, one raw vector per free column.

    The vector for free column c has a 1 at c, zeros at the other free columns
    and the negated reduced entries at the pivot columns.
    """
    field = matrix.field
    rows, pivots = _echelon(field, matrix.entries, matrix.cols, reduced=True)
    pivot_set = set(pivots)
    basis = []
    for free in range(matrix.cols):
        if free in pivot_set:
            continue
        vector = [field.zero] * matrix.cols
        vector[free] = field.one
        for row, pivot in zip(rows, pivots):
            vector[pivot] = field.neg(row[free])
        basis.append(tuple(vector))
    return basis


def row_space_meet(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    """
    Rows spanning the intersection of the row spaces of ``a`` and ``b``.

    Every kernel vector (x, y) of the stacked transposed bases gives the
    common vector x·A = -y·B; distinct kernel vectors give independent rows.
    """
    a._require_same_field(b)
    if a.cols != b.cols:
        raise ValueError(f"Column counts differ: {a.cols} vs {b.cols}")
    field = a.field
    basis_a = a.row_basis()
    basis_b = b.row_basis()
    if basis_a.rows == 0 or basis_b.rows == 0:
        return ExactMatrix(field, 0, a.cols, ())
    relations = kernel_basis(basis_a.stack(basis_b).transpose())
    meet = []
    for relation in relations:
        combo = [field.zero] * a.cols
        for coeff, row in zip(relation[:basis_a.rows], basis_a.entries):
            if not coeff:
                continue
            combo = [field.add(c, field.mul(coeff, x)) for c, x in zip(combo, row)]
        meet.append(tuple(combo))
    return ExactMatrix(field, len(meet), a.cols, tuple(meet))


class RandomSource:
    """
    Seeded stream of integers and field scalars.

    Identical (seed, field, window) gives an identical stream. ``position``
    counts the draws made so far.
    """

    def __init__(
        self,
        seed: int,
        field: Optional[ExactField] = None,
        window: int = DEFAULT_RATIONAL_WINDOW
    ) -> None:
        self.seed = int(seed) & _SEED_MASK
        self.field = field
        self.window = window
        self._sequence = np.random.SeedSequence(self.seed)
        self._generator = np.random.Generator(np.random.PCG64(self._sequence))
        self.position = 0

    def integer(self, low: int, high: int) -> int:
        """Uniform integer in [low, high)."""
        if high <= low:
            raise ValueError(f"Empty range [{low}, {high})")
        if high - low > _MAX_DRAW_SPAN:
            raise ValueError("Range too wide for a single 63-bit draw")
        self.position += 1
        return low + int(self._generator.integers(0, high - low, dtype=np.int64))

    def scalar_value(self) -> Any:
        """Raw random element of the configured field."""
        if self.field is None:
            raise ValueError("RandomSource has no field configured")
        if self.field.is_rational:
            return Fraction(self.integer(-self.window, self.window + 1))
        return self.integer(0, self.field.modulus)

    def choice(self, items: Sequence[Any]) -> Any:
        if not items:
            raise ValueError("Cannot choose from an empty sequence")
        return items[self.integer(0, len(items))]

    def spawn_seeds(self, count: int) -> List[int]:
        """Independent 64-bit child seeds derived from this stream's seed sequence."""
        children = self._sequence.spawn(count)
        return [int(child.generate_state(1, dtype=np.uint64)[0]) for child in children]

    def __repr__(self) -> str:
        tag = self.field.tag if self.field else "none"
        return f"RandomSource(seed={self.seed}, field={tag}, position={self.position})"


def random_scalar(rng: RandomSource) -> FieldScalar:
    """Uniform scalar in F_p, or an integer numerator in the window over Q."""
    return FieldScalar(rng.scalar_value(), rng.field)


def random_prime(rng: RandomSource, bits: int = DEFAULT_PRIME_BITS, exclude: Iterable[int] = ()) -> int:
    """
    Random prime with exactly ``bits`` bits.

    Raises:
        SamplingError: If no admissible prime is found
    """
    low, high = 1 << (bits - 1), 1 << bits
    excluded = set(exclude)
    for _ in range(64):
        candidate = int(nextprime(rng.integer(low, high - 1)))
        if candidate < high and candidate not in excluded:
            return candidate
    raise SamplingError("Could not draw a prime", details={"bits": bits})


def random_primes(rng: RandomSource, count: int, bits: int = DEFAULT_PRIME_BITS) -> List[int]:
    """``count`` distinct random primes of ``bits`` bits."""
    primes: List[int] = []
    for _ in range(count):
        primes.append(random_prime(rng, bits, exclude=primes))
    logger.debug("Drew primes %s", primes)
    return primes
