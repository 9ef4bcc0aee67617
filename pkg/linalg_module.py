from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, List, Optional, Sequence, Tuple

import galois
import numpy as np

from config import MAX_FIELD_DEGREE, BrauerForgeError
from logger import log_debug, log_error

# Matrices are plain 2-D np.uint8 arrays whose entries are field elements in
# galois' integer (polynomial basis) representation; vectors are 1-D rows.
FpMatrix = np.ndarray

WORD = 64


class ShapeError(BrauerForgeError):
    pass


class SingularMatrixError(ShapeError):
    pass


class SubspaceError(BrauerForgeError):
    pass


@dataclass(frozen=True)
class FieldSpec:
    """GF(2^degree) with full multiplication and inversion tables."""

    degree: int
    mul_table: np.ndarray = field(repr=False, compare=False)
    inv_table: np.ndarray = field(repr=False, compare=False)
    x_powers: np.ndarray = field(repr=False, compare=False)

    @property
    def order(self) -> int:
        return 2 ** self.degree

    @property
    def is_prime(self) -> bool:
        return self.degree == 1

    def mul(self, a: int, b: int) -> int:
        return int(self.mul_table[a, b])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return int(self.inv_table[a])

    def power(self, a: int, k: int) -> int:
        result = 1
        for _ in range(k):
            result = int(self.mul_table[result, a])
        return result

    def __str__(self) -> str:
        return f"GF({self.order})"


@lru_cache(maxsize=None)
def field_spec(degree: int = 1) -> FieldSpec:
    """Build (once) and verify the tables for GF(2^degree)."""
    if not 1 <= degree <= MAX_FIELD_DEGREE:
        raise ValueError(f"field degree must lie in 1..{MAX_FIELD_DEGREE}, got {degree}")
    q = 2 ** degree
    GF = galois.GF(q)
    values = GF(np.arange(q))
    mul_table = (values[:, None] * values[None, :]).view(np.ndarray).astype(np.uint8)
    inv_table = np.zeros(q, dtype=np.uint8)
    inv_table[1:] = np.reciprocal(values[1:]).view(np.ndarray).astype(np.uint8)
    # x^k for k < 2*degree - 1, used by the bit-plane product
    x = 2 if degree > 1 else 1
    x_powers = np.ones(max(2 * degree - 1, 1), dtype=np.uint8)
    for k in range(1, len(x_powers)):
        x_powers[k] = mul_table[x_powers[k - 1], x]
    for table in (mul_table, inv_table, x_powers):
        table.setflags(write=False)
    spec = FieldSpec(degree=degree, mul_table=mul_table, inv_table=inv_table, x_powers=x_powers)
    _check_field_axioms(spec)
    log_debug("Built %s tables", spec)
    return spec


def _check_field_axioms(spec: FieldSpec) -> None:
    q = spec.order
    mul = spec.mul_table.astype(np.int64)
    elems = np.arange(q)
    ok = (
        np.array_equal(mul, mul.T)
        and np.array_equal(mul[1], elems)
        and not mul[0].any()
        and all(np.array_equal(np.sort(mul[a, 1:]), elems[1:]) for a in range(1, q))
        and np.array_equal(mul[elems[1:], spec.inv_table[1:]], np.ones(q - 1, dtype=np.int64))
    )
    # distributivity over XOR and associativity, checked against a fixed element sample
    sample = elems if q <= 16 else elems[:: max(1, q // 16)]
    for a in sample:
        ok = ok and np.array_equal(mul[a][elems[:, None] ^ elems[None, :]], mul[a][:, None] ^ mul[a][None, :])
        ok = ok and np.array_equal(mul[mul[a]][:, elems], mul[a][mul])
    if not ok:
        log_error("Field tables for %s fail the field axioms", spec)
        raise AssertionError(f"field axioms fail for {spec}")


GF2 = field_spec(1)


def as_matrix(data, fld: FieldSpec = GF2) -> FpMatrix:
    A = np.asarray(data)
    if A.ndim != 2:
        raise ShapeError(f"expected a 2-D matrix, got shape {A.shape}")
    if A.size and (A.min() < 0 or A.max() >= fld.order):
        raise ValueError(f"entries outside {fld}")
    return A.astype(np.uint8, copy=True)


def identity(n: int) -> FpMatrix:
    return np.eye(n, dtype=np.uint8)


def zeros(rows: int, cols: int) -> FpMatrix:
    return np.zeros((rows, cols), dtype=np.uint8)


def add(A: FpMatrix, B: FpMatrix) -> FpMatrix:
    if A.shape != B.shape:
        raise ShapeError(f"cannot add {A.shape} and {B.shape}")
    return np.bitwise_xor(A, B)


def scale(c: int, A: FpMatrix, fld: FieldSpec = GF2) -> FpMatrix:
    return fld.mul_table[c][A]


def _gf2_product(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    # float32 sums are exact below 2^24, far above any inner dimension used here
    prod = A.astype(np.float32) @ B.astype(np.float32)
    return (prod.astype(np.int64) & 1).astype(np.uint8)


def multiply(A: FpMatrix, B: FpMatrix, fld: FieldSpec = GF2) -> FpMatrix:
    if A.ndim != 2 or B.ndim != 2 or A.shape[1] != B.shape[0]:
        raise ShapeError(f"cannot multiply {A.shape} by {B.shape}")
    if fld.is_prime:
        return _gf2_product(A, B)
    out = np.zeros((A.shape[0], B.shape[1]), dtype=np.uint8)
    a_planes = [((A >> i) & 1) for i in range(fld.degree)]
    b_planes = [((B >> j) & 1) for j in range(fld.degree)]
    for i, Ai in enumerate(a_planes):
        if not Ai.any():
            continue
        for j, Bj in enumerate(b_planes):
            if not Bj.any():
                continue
            out ^= _gf2_product(Ai, Bj) * fld.x_powers[i + j]
    return out


def mat_vec(A: FpMatrix, v: np.ndarray, fld: FieldSpec = GF2) -> np.ndarray:
    return multiply(A, v.reshape(-1, 1), fld)[:, 0]


def matrix_power(A: FpMatrix, k: int, fld: FieldSpec = GF2) -> FpMatrix:
    if A.shape[0] != A.shape[1]:
        raise ShapeError("matrix_power needs a square matrix")
    result = identity(A.shape[0])
    base = A
    while k:
        if k & 1:
            result = multiply(result, base, fld)
        base = multiply(base, base, fld)
        k >>= 1
    return result


def frobenius(A: FpMatrix, fld: FieldSpec = GF2) -> FpMatrix:
    """Entrywise squaring."""
    return A.copy() if fld.is_prime else fld.mul_table[A, A]


def trace(A: FpMatrix) -> int:
    return int(np.bitwise_xor.reduce(np.diagonal(A))) if A.shape[0] else 0


def _pack(M: np.ndarray) -> np.ndarray:
    packed = np.packbits(M, axis=1, bitorder="little")
    width = -(-packed.shape[1] // 8) * 8
    if width != packed.shape[1]:
        packed = np.hstack([packed, np.zeros((packed.shape[0], width - packed.shape[1]), dtype=np.uint8)])
    return np.ascontiguousarray(packed).view("<u8")


def _unpack(packed: np.ndarray, ncols: int) -> np.ndarray:
    return np.unpackbits(packed.view(np.uint8), axis=1, count=ncols, bitorder="little")


def _rref_gf2(A: np.ndarray, track: bool) -> Tuple[np.ndarray, int, Optional[np.ndarray]]:
    rows, cols = A.shape
    work = np.hstack([A, identity(rows)]) if track else A
    packed = _pack(work)
    r = 0
    for col in range(cols):
        if r == rows:
            break
        word, bit = divmod(col, WORD)
        column = (packed[:, word] >> np.uint64(bit)) & np.uint64(1)
        hits = np.flatnonzero(column[r:])
        if not len(hits):
            continue
        pivot = r + int(hits[0])
        if pivot != r:
            packed[[r, pivot]] = packed[[pivot, r]]
            column[[r, pivot]] = column[[pivot, r]]
        mask = column.astype(bool)
        mask[r] = False
        packed[mask] ^= packed[r]
        r += 1
    out = _unpack(packed, work.shape[1])
    return out[:, :cols].copy(), r, (out[:, cols:].copy() if track else None)


def _rref_table(A: np.ndarray, fld: FieldSpec, track: bool) -> Tuple[np.ndarray, int, Optional[np.ndarray]]:
    rows, cols = A.shape
    mul = fld.mul_table
    R = A.copy()
    T = identity(rows) if track else None
    r = 0
    for col in range(cols):
        if r == rows:
            break
        hits = np.flatnonzero(R[r:, col])
        if not len(hits):
            continue
        pivot = r + int(hits[0])
        if pivot != r:
            R[[r, pivot]] = R[[pivot, r]]
            if track:
                T[[r, pivot]] = T[[pivot, r]]
        inv = fld.inv_table[R[r, col]]
        R[r] = mul[inv][R[r]]
        factors = R[:, col].copy()
        factors[r] = 0
        R ^= mul[factors[:, None], R[r][None, :]]
        if track:
            T[r] = mul[inv][T[r]]
            T ^= mul[factors[:, None], T[r][None, :]]
        r += 1
    return R, r, T


def rref(A: FpMatrix, fld: FieldSpec = GF2, track: bool = True) -> Tuple[FpMatrix, int, Optional[FpMatrix]]:
    """Fully reduced row echelon form R, the rank, and an invertible T with T A = R."""
    if A.ndim != 2:
        raise ShapeError(f"rref needs a 2-D matrix, got shape {A.shape}")
    A = np.asarray(A, dtype=np.uint8)
    if A.shape[0] == 0 or A.shape[1] == 0:
        return A.copy(), 0, identity(A.shape[0]) if track else None
    if fld.is_prime:
        return _rref_gf2(A, track)
    return _rref_table(A, fld, track)


def pivot_columns(R: FpMatrix, rank: Optional[int] = None) -> List[int]:
    rank = R.shape[0] if rank is None else rank
    out = []
    for i in range(rank):
        nz = np.flatnonzero(R[i])
        if not len(nz):
            break
        out.append(int(nz[0]))
    return out


def rank(A: FpMatrix, fld: FieldSpec = GF2) -> int:
    return rref(A, fld, track=False)[1]


def kernel(A: FpMatrix, fld: FieldSpec = GF2) -> "Subspace":
    """Right null space {x : A x = 0} as a canonical Subspace."""
    cols = A.shape[1]
    R, r, _ = rref(A, fld, track=False)
    pivots = pivot_columns(R, r)
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = zeros(len(free), cols)
    for k, f in enumerate(free):
        basis[k, f] = 1
        # char 2: -R[i, f] = R[i, f]
        basis[k, pivots] = R[:r, f]
    return Subspace.from_rows(basis, cols, fld)


def solve(A: FpMatrix, b: np.ndarray, fld: FieldSpec = GF2) -> Optional[np.ndarray]:
    """Some x with A x = b (free variables zero), or None; b may be a vector or a matrix."""
    vector = b.ndim == 1
    B = b.reshape(-1, 1) if vector else b
    if A.shape[0] != B.shape[0]:
        raise ShapeError(f"cannot solve {A.shape} against {b.shape}")
    n = A.shape[1]
    R, _, _ = rref(np.hstack([A, B]).astype(np.uint8), fld, track=False)
    pivots = [p for p in pivot_columns(R) if p < n]
    r = len(pivots)
    if R[r:, n:].any():
        return None
    X = zeros(n, B.shape[1])
    X[pivots] = R[:r, n:]
    return X[:, 0] if vector else X


def inverse(A: FpMatrix, fld: FieldSpec = GF2) -> FpMatrix:
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ShapeError(f"inverse needs a square matrix, got {A.shape}")
    _, r, T = rref(A, fld)
    if r < A.shape[0]:
        raise SingularMatrixError(f"matrix of size {A.shape[0]} has rank {r}")
    return T


def is_invertible(A: FpMatrix, fld: FieldSpec = GF2) -> bool:
    return A.shape[0] == A.shape[1] and rank(A, fld) == A.shape[0]


@dataclass(frozen=True)
class Subspace:
    """A row space stored by its fully reduced echelon basis (so equal spaces have equal bases)."""

    ambient: int
    basis: np.ndarray = field(compare=False)
    fld: FieldSpec = GF2

    def __post_init__(self) -> None:
        if self.basis.shape[1:] != (self.ambient,):
            raise ShapeError(f"basis shape {self.basis.shape} does not match ambient {self.ambient}")
        self.basis.setflags(write=False)

    @classmethod
    def from_rows(cls, rows, ambient: int, fld: FieldSpec = GF2) -> "Subspace":
        M = np.asarray(rows, dtype=np.uint8).reshape(-1, ambient)
        R, r, _ = rref(M, fld, track=False)
        return cls(ambient, R[:r].copy(), fld)

    @classmethod
    def zero(cls, ambient: int, fld: FieldSpec = GF2) -> "Subspace":
        return cls(ambient, zeros(0, ambient), fld)

    @classmethod
    def full(cls, ambient: int, fld: FieldSpec = GF2) -> "Subspace":
        return cls(ambient, identity(ambient), fld)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def pivots(self) -> List[int]:
        return pivot_columns(self.basis)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient == other.ambient and self.fld == other.fld and np.array_equal(self.basis, other.basis)

    def __hash__(self) -> int:
        return hash((self.ambient, self.fld.degree, self.basis.tobytes()))

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ambient={self.ambient}, {self.fld})"

    def reduce(self, v: np.ndarray) -> np.ndarray:
        """v minus its component along the basis, read at the pivot columns."""
        if not self.dim:
            return np.asarray(v, dtype=np.uint8).copy()
        coeffs = np.asarray(v, dtype=np.uint8)[..., self.pivots]
        if coeffs.ndim == 1:
            return v ^ multiply(coeffs[None, :], self.basis, self.fld)[0]
        return v ^ multiply(coeffs, self.basis, self.fld)

    def contains_vector(self, v: np.ndarray) -> bool:
        return not self.reduce(v).any()

    def contains(self, other: "Subspace") -> bool:
        self._check_compatible(other)
        return not other.dim or not self.reduce(other.basis).any()

    def coordinates(self, v: np.ndarray) -> np.ndarray:
        """Coefficients of v (or of each row of v) in the basis; v must lie in the space."""
        return np.asarray(v, dtype=np.uint8)[..., self.pivots].copy()

    def sum(self, other: "Subspace") -> "Subspace":
        self._check_compatible(other)
        return Subspace.from_rows(np.vstack([self.basis, other.basis]), self.ambient, self.fld)

    def intersection(self, other: "Subspace") -> "Subspace":
        self._check_compatible(other)
        if not self.dim or not other.dim:
            return Subspace.zero(self.ambient, self.fld)
        # a U + b W = 0 solutions give a U in the intersection
        stacked = np.vstack([self.basis, other.basis]).T.copy()
        K = kernel(stacked, self.fld)
        if not K.dim:
            return Subspace.zero(self.ambient, self.fld)
        return Subspace.from_rows(multiply(K.basis[:, : self.dim], self.basis, self.fld), self.ambient, self.fld)

    def image(self, A: FpMatrix) -> "Subspace":
        """{A v : v in self} for column-vector action v -> A v."""
        if not self.dim:
            return Subspace.zero(A.shape[0], self.fld)
        return Subspace.from_rows(multiply(self.basis, A.T.copy(), self.fld), A.shape[0], self.fld)

    def is_invariant(self, A: FpMatrix) -> bool:
        return not self.dim or self.contains(self.image(A))

    def _check_compatible(self, other: "Subspace") -> None:
        if self.ambient != other.ambient or self.fld != other.fld:
            raise SubspaceError(f"incompatible subspaces: {self!r} vs {other!r}")


def column_space(A: FpMatrix, fld: FieldSpec = GF2) -> Subspace:
    return Subspace.from_rows(A.T.copy(), A.shape[0], fld)


@dataclass(frozen=True, eq=False)
class Quotient:
    """V/U with projection (dim V/U x ambient) and section rows spanning a complement of U in V."""

    projection: FpMatrix
    section: FpMatrix
    dimension: int

    def induced(self, A: FpMatrix, fld: FieldSpec = GF2) -> FpMatrix:
        """Matrix of v + U -> A v + U on the quotient, for A leaving V and U invariant."""
        if not self.dimension:
            return zeros(0, 0)
        return multiply(self.projection, multiply(A, self.section.T.copy(), fld), fld)


def quotient(V: Subspace, U: Subspace) -> Quotient:
    if not V.contains(U):
        raise SubspaceError(f"{U!r} is not contained in {V!r}")
    fld = V.fld
    k = V.dim
    v_pivots = V.pivots
    select_v = zeros(k, V.ambient)
    select_v[np.arange(k), v_pivots] = 1
    if U.dim:
        u_coords = Subspace.from_rows(V.coordinates(U.basis), k, fld)
        u_pivots = u_coords.pivots
        select_u = zeros(len(u_pivots), k)
        select_u[np.arange(len(u_pivots)), u_pivots] = 1
        reducer = add(identity(k), multiply(u_coords.basis.T.copy(), select_u, fld))
    else:
        u_pivots = []
        reducer = identity(k)
    complement = [c for c in range(k) if c not in set(u_pivots)]
    select_c = zeros(len(complement), k)
    select_c[np.arange(len(complement)), complement] = 1
    projection = multiply(multiply(select_c, reducer, fld), select_v, fld)
    section = V.basis[complement].copy()
    return Quotient(projection=projection, section=section, dimension=len(complement))


def quotient_map(V: Subspace, U: Subspace) -> Tuple[FpMatrix, int]:
    """Projection with kernel exactly U on V, onto the non-pivot completion coordinates."""
    q = quotient(V, U)
    return q.projection, q.dimension


class EchelonBasis:
    """Incrementally grown fully reduced echelon basis."""

    def __init__(self, ambient: int, fld: FieldSpec = GF2) -> None:
        self.ambient = ambient
        self.fld = fld
        self._rows = zeros(ambient, ambient)
        self._pivots: List[int] = []

    @property
    def dim(self) -> int:
        return len(self._pivots)

    def reduce(self, v: np.ndarray) -> np.ndarray:
        if not self._pivots:
            return np.asarray(v, dtype=np.uint8).copy()
        coeffs = v[self._pivots]
        if not coeffs.any():
            return v.copy()
        return v ^ multiply(coeffs[None, :], self._rows[: self.dim], self.fld)[0]

    def add(self, v: np.ndarray) -> bool:
        r = self.reduce(np.asarray(v, dtype=np.uint8))
        nz = np.flatnonzero(r)
        if not len(nz):
            return False
        p = int(nz[0])
        r = self.fld.mul_table[self.fld.inv_table[r[p]]][r]
        d = self.dim
        factors = self._rows[:d, p].copy()
        if factors.any():
            self._rows[:d] ^= self.fld.mul_table[factors[:, None], r[None, :]]
        self._rows[d] = r
        self._pivots.append(p)
        return True

    def subspace(self) -> Subspace:
        order = np.argsort(self._pivots, kind="stable")
        return Subspace(self.ambient, self._rows[: self.dim][order].copy(), self.fld)


def spin(vectors: Iterable[np.ndarray], actions: Sequence[FpMatrix], fld: FieldSpec = GF2, ambient: Optional[int] = None) -> Subspace:
    """Smallest subspace containing vectors and invariant under every v -> A v."""
    vectors = [np.asarray(v, dtype=np.uint8) for v in vectors]
    if ambient is None:
        if actions:
            ambient = actions[0].shape[0]
        elif vectors:
            ambient = len(vectors[0])
        else:
            raise ShapeError("spin needs vectors or actions to fix the ambient dimension")
    for A in actions:
        if A.shape != (ambient, ambient):
            raise ShapeError(f"action of shape {A.shape} on ambient {ambient}")
    ech = EchelonBasis(ambient, fld)
    found: List[np.ndarray] = []
    for v in vectors:
        if ech.add(v):
            found.append(v)
    pos = 0
    while pos < len(found):
        batch = np.array(found[pos:], dtype=np.uint8)
        pos = len(found)
        for A in actions:
            for w in multiply(batch, A.T.copy(), fld):
                if ech.add(w):
                    found.append(w)
        if ech.dim == ambient:
            break
    return ech.subspace()


def random_matrix(rows: int, cols: int, rng: np.random.Generator, fld: FieldSpec = GF2) -> FpMatrix:
    return rng.integers(0, fld.order, size=(rows, cols), dtype=np.uint8)


def random_invertible(n: int, rng: np.random.Generator, fld: FieldSpec = GF2, steps: Optional[int] = None) -> FpMatrix:
    """Identity scrambled by random row additions and swaps."""
    A = identity(n)
    if n < 2:
        return A
    for _ in range(steps if steps is not None else 4 * n):
        i, j = rng.choice(n, size=2, replace=False)
        c = int(rng.integers(1, fld.order))
        A[i] ^= fld.mul_table[c][A[j]]
        if rng.random() < 0.25:
            A[[i, j]] = A[[j, i]]
    return A


def random_subspace(ambient: int, dim: int, rng: np.random.Generator, fld: FieldSpec = GF2) -> Subspace:
    if dim > ambient:
        raise ShapeError(f"cannot fit dimension {dim} in ambient {ambient}")
    basis = random_invertible(ambient, rng, fld)[:dim]
    return Subspace.from_rows(basis, ambient, fld)


__all__ = [
    "FieldSpec",
    "FpMatrix",
    "Subspace",
    "Quotient",
    "EchelonBasis",
    "ShapeError",
    "SingularMatrixError",
    "SubspaceError",
    "GF2",
    "field_spec",
    "as_matrix",
    "identity",
    "zeros",
    "add",
    "scale",
    "multiply",
    "mat_vec",
    "matrix_power",
    "frobenius",
    "trace",
    "rref",
    "pivot_columns",
    "rank",
    "kernel",
    "solve",
    "inverse",
    "is_invertible",
    "column_space",
    "quotient",
    "quotient_map",
    "spin",
    "random_matrix",
    "random_invertible",
    "random_subspace",
]
