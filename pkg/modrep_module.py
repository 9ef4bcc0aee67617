from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from config import DEFAULT_SEED, ISO_ATTEMPTS, MAX_FIELD_DEGREE, MAX_MODULE_DIM, SPLIT_ATTEMPTS, BrauerForgeError, ResourceLimitError
from linalg_module import (
    GF2,
    EchelonBasis,
    FieldSpec,
    Quotient,
    ShapeError,
    Subspace,
    add,
    column_space,
    field_spec,
    identity,
    inverse,
    is_invertible,
    kernel,
    mat_vec,
    multiply,
    quotient,
    rank,
    spin,
    zeros,
)
from logger import log_debug, log_error, log_info, log_warning
from perm_module import GSet, Perm, Subgroup, coset_action, maximal_subgroups_2group, normalizer

# local-ring status of an endomorphism algebra
LOCAL = "local"
FIELD_EXTENSION = "field_extension"
SPLIT = "split"

RESTRICT_SCALARS_LIMIT = 480


class DecompositionError(BrauerForgeError):
    pass


class CertificationError(BrauerForgeError):
    pass


def perm_matrix(p: Perm) -> np.ndarray:
    """A e_i = e_{p(i)}, so perm_matrix(p∘q) = perm_matrix(p) perm_matrix(q)."""
    d = p.degree
    A = zeros(d, d)
    A[list(p.images), np.arange(d)] = 1
    return A


@dataclass(frozen=True, eq=False)
class Representation:
    """A left module: one invertible matrix per generator of ``group`` acting on column vectors."""

    group: Subgroup
    fld: FieldSpec
    dimension: int
    matrices: Tuple[np.ndarray, ...]
    gset: Optional[GSet] = field(default=None, compare=False, repr=False)
    name: str = ""
    _cache: Dict[int, np.ndarray] = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self) -> None:
        if len(self.matrices) != len(self.group.generators):
            raise ShapeError(f"{len(self.matrices)} matrices for {len(self.group.generators)} generators")
        for A in self.matrices:
            if A.shape != (self.dimension, self.dimension):
                raise ShapeError(f"matrix of shape {A.shape} in a module of dimension {self.dimension}")
            A.setflags(write=False)

    def __repr__(self) -> str:
        return f"Representation({self.name or 'anon'}, dim={self.dimension}, {self.fld}, |group|={self.group.order})"

    @property
    def is_zero(self) -> bool:
        return self.dimension == 0

    def matrix_of(self, g: int) -> np.ndarray:
        cached = self._cache.get(g)
        if cached is not None:
            return cached
        if g not in self.group:
            raise ValueError(f"element {g} does not lie in the acting group")
        if self.gset is not None and g in self.gset.group:
            A = perm_matrix(self.gset.action_of(g))
        else:
            A = identity(self.dimension)
            for pos in self.group.word(g):
                A = multiply(A, self.matrices[pos], self.fld)
        A.setflags(write=False)
        self._cache[g] = A
        return A

    def validate(self, rng: Optional[np.random.Generator] = None, samples: int = 100) -> bool:
        """Generators invertible and matrix_of multiplicative on sampled element pairs."""
        if not all(is_invertible(A, self.fld) for A in self.matrices):
            return False
        if self.dimension == 0 or self.group.order == 1:
            return True
        rng = rng if rng is not None else np.random.default_rng(DEFAULT_SEED)
        parent = self.group.parent
        elements = np.array(self.group.elements)
        for _ in range(samples):
            a, b = (int(e) for e in rng.choice(elements, size=2))
            expected = multiply(self.matrix_of(a), self.matrix_of(b), self.fld)
            if not np.array_equal(self.matrix_of(parent.mul(a, b)), expected):
                log_warning("Representation %s fails the relation check on (%s, %s)", self.name, a, b)
                return False
        return True


def _check_dim(d: int) -> None:
    if d > MAX_MODULE_DIM:
        raise ResourceLimitError(f"module dimension {d} exceeds {MAX_MODULE_DIM}")


def _check_acting(M: Representation, H: Subgroup) -> None:
    if H.parent is not M.group.parent or not H.is_subgroup_of(M.group):
        raise ValueError(f"{H.describe()} does not act on {M!r}")


def perm_module(gset: GSet, fld: FieldSpec = GF2, name: str = "") -> Representation:
    mats = tuple(perm_matrix(p) for p in gset.generator_images())
    _check_dim(gset.degree)
    return Representation(gset.group, fld, gset.degree, mats, gset=gset, name=name or f"k[G/H]({gset.degree})")


def trivial_module(group: Subgroup, fld: FieldSpec = GF2) -> Representation:
    return Representation(group, fld, 1, tuple(identity(1) for _ in group.generators), name="k")


def regular_module(group: Subgroup, fld: FieldSpec = GF2) -> Representation:
    return perm_module(coset_action(group, group.parent.trivial()), fld, name="kG")


def fixed_points(M: Representation, Q: Subgroup) -> Subspace:
    _check_acting(M, Q)
    d = M.dimension
    if not Q.generators or d == 0:
        return Subspace.full(d, M.fld)
    stacked = np.vstack([add(M.matrix_of(q), identity(d)) for q in Q.generators])
    return kernel(stacked, M.fld)


def relative_trace_image(M: Representation, R: Subgroup, Q: Subgroup, representatives: Optional[Sequence[int]] = None) -> Subspace:
    """Image of Tr_R^Q on M^R, summing g over left coset representatives of R in Q."""
    if not R.is_subgroup_of(Q):
        raise ValueError(f"{R.describe()} is not contained in {Q.describe()}")
    _check_acting(M, Q)
    reps = representatives if representatives is not None else coset_action(Q, R).representatives
    if len(reps) * R.order != Q.order:
        raise ValueError("wrong number of coset representatives")
    d = M.dimension
    T = zeros(d, d)
    for r in reps:
        T ^= M.matrix_of(r)
    return fixed_points(M, R).image(T)


def brauer_quotient(M: Representation, Q: Subgroup, N: Optional[Subgroup] = None) -> Tuple[Representation, Quotient]:
    """M(Q) = M^Q / sum of Tr_R^Q(M^R) over maximal R < Q, as a module for N_G(Q)."""
    _check_acting(M, Q)
    fld = M.fld
    MQ = fixed_points(M, Q)
    traces = Subspace.zero(M.dimension, fld)
    for R in maximal_subgroups_2group(Q):
        traces = traces.sum(relative_trace_image(M, R, Q))
    N = N if N is not None else normalizer(M.group, Q)
    quo = quotient(MQ, traces)
    mats = tuple(quo.induced(M.matrix_of(n), fld) for n in N.generators)
    log_debug("Brauer quotient at |Q|=%s: dim M^Q=%s, traces=%s, dim M(Q)=%s", Q.order, MQ.dim, traces.dim, quo.dimension)
    return Representation(N, fld, quo.dimension, mats, name=f"{M.name}(Q{Q.order})"), quo


def restrict(M: Representation, H: Subgroup) -> Representation:
    if H == M.group:
        return M
    _check_acting(M, H)
    mats = tuple(M.matrix_of(h) for h in H.generators)
    return Representation(H, M.fld, M.dimension, mats, gset=M.gset, name=f"Res({M.name})")


def direct_sum(A: Representation, B: Representation) -> Representation:
    if A.group != B.group or A.fld != B.fld:
        raise ValueError("direct_sum needs modules for the same group over the same field")
    a, b = A.dimension, B.dimension
    mats = []
    for X, Y in zip(A.matrices, B.matrices):
        Z = zeros(a + b, a + b)
        Z[:a, :a] = X
        Z[a:, a:] = Y
        mats.append(Z)
    return Representation(A.group, A.fld, a + b, tuple(mats), name=f"{A.name}+{B.name}")


def extend_scalars(M: Representation, degree: int) -> Representation:
    """The same matrices read over GF(2^degree)."""
    if not M.fld.is_prime:
        raise ValueError("extend_scalars starts from GF(2)")
    fld = field_spec(degree)
    mats = tuple(np.array(A, dtype=np.uint8) for A in M.matrices)
    return Representation(M.group, fld, M.dimension, mats, gset=M.gset, name=f"{M.name}@{fld}")


def change_basis(M: Representation, T: np.ndarray) -> Representation:
    """Module in the coordinates w = T v."""
    T_inv = inverse(T, M.fld)
    mats = tuple(multiply(multiply(T, A, M.fld), T_inv, M.fld) for A in M.matrices)
    return Representation(M.group, M.fld, M.dimension, mats, name=M.name)


def coinvariants_dimension(M: Representation) -> int:
    """dim M / I M where I is the augmentation ideal."""
    d = M.dimension
    if d == 0 or not M.matrices:
        return d
    columns = [row for A in M.matrices for row in add(A, identity(d)).T]
    return d - spin(columns, list(M.matrices), M.fld, ambient=d).dim


def _spin_tree(A: Representation) -> Tuple[List[np.ndarray], List[int], List[int], List[int]]:
    """Basis of A grown from standard vectors; parent -1 marks a seed whose label is its seed number."""
    d = A.dimension
    ech = EchelonBasis(d, A.fld)
    vectors: List[np.ndarray] = []
    parents: List[int] = []
    labels: List[int] = []
    seeds: List[int] = []
    for i in range(d):
        if ech.dim == d:
            break
        e = zeros(1, d)[0]
        e[i] = 1
        if not ech.add(e):
            continue
        vectors.append(e)
        parents.append(-1)
        labels.append(len(seeds))
        seeds.append(i)
        pos = len(vectors) - 1
        while pos < len(vectors):
            for k, X in enumerate(A.matrices):
                w = mat_vec(X, vectors[pos], A.fld)
                if ech.add(w):
                    vectors.append(w)
                    parents.append(pos)
                    labels.append(k)
            pos += 1
    return vectors, parents, labels, seeds


def hom_space(A: Representation, B: Representation) -> np.ndarray:
    """Canonical basis (h, dim B, dim A) of the module maps X with X A_g = B_g X."""
    if A.group != B.group or A.fld != B.fld:
        raise ValueError("hom_space needs modules for the same group over the same field")
    fld = A.fld
    dA, dB = A.dimension, B.dimension
    _check_dim(max(dA, dB))
    if dA == 0 or dB == 0:
        return np.zeros((0, dB, dA), dtype=np.uint8)
    vectors, parents, labels, seeds = _spin_tree(A)
    width = len(seeds) * dB
    # X b_j = Phi_j u where u stacks the images of the seeds
    Phi = np.zeros((dA, dB, width), dtype=np.uint8)
    for j in range(dA):
        if parents[j] < 0:
            s = labels[j]
            Phi[j][:, s * dB:(s + 1) * dB] = identity(dB)
        else:
            Phi[j] = multiply(B.matrices[labels[j]], Phi[parents[j]], fld)
    spin_basis = np.array(vectors, dtype=np.uint8).T.copy()
    spin_inv = inverse(spin_basis, fld)
    tree_edges = {(parents[j], labels[j]) for j in range(dA) if parents[j] >= 0}
    flat = Phi.reshape(dA, dB * width)
    stacked = Phi.transpose(1, 0, 2).reshape(dB, dA * width)
    blocks = []
    for k, (X, Y) in enumerate(zip(A.matrices, B.matrices)):
        keep = [j for j in range(dA) if (j, k) not in tree_edges]
        if not keep:
            continue
        C = multiply(spin_inv, multiply(X, spin_basis, fld), fld)
        left = multiply(C.T.copy(), flat, fld).reshape(dA, dB, width)
        right = multiply(Y, stacked, fld).reshape(dB, dA, width).transpose(1, 0, 2)
        blocks.append((left[keep] ^ right[keep]).reshape(-1, width))
    system = np.vstack(blocks) if blocks else zeros(0, width)
    K = kernel(system, fld)
    h = K.dim
    if not h:
        return np.zeros((0, dB, dA), dtype=np.uint8)
    images = multiply(flat.reshape(dA * dB, width), K.basis.T.copy(), fld).reshape(dA, dB, h).transpose(2, 1, 0)
    maps = multiply(np.ascontiguousarray(images).reshape(h * dB, dA), spin_inv, fld).reshape(h, dB, dA)
    canonical = Subspace.from_rows(maps.reshape(h, dB * dA), dB * dA, fld).basis.reshape(-1, dB, dA)
    for X, Y in zip(A.matrices, B.matrices):
        for Z in canonical:
            if not np.array_equal(multiply(Z, X, fld), multiply(Y, Z, fld)):
                log_error("hom_space produced a non-equivariant map")
                raise CertificationError("hom_space basis element is not a module map")
    return canonical


class FiniteAlgebra:
    """An associative unital algebra by structure constants: b_i b_j = sum_l c[i, j, l] b_l."""

    def __init__(self, fld: FieldSpec, constants: np.ndarray, one: np.ndarray) -> None:
        self.fld = fld
        self.c = np.asarray(constants, dtype=np.uint8)
        self.one = np.asarray(one, dtype=np.uint8)

    @property
    def dim(self) -> int:
        return self.c.shape[0]

    def left(self, x: np.ndarray) -> np.ndarray:
        """Matrix of y -> x y on coordinate columns."""
        h = self.dim
        return multiply(x[None, :], self.c.reshape(h, h * h), self.fld).reshape(h, h).T.copy()

    def product(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return mat_vec(self.left(x), y, self.fld)

    def is_commutative(self) -> bool:
        return np.array_equal(self.c, self.c.transpose(1, 0, 2))

    def quotient(self, ideal_rows: np.ndarray) -> "FiniteAlgebra":
        h = self.dim
        quo = quotient(Subspace.full(h, self.fld), Subspace.from_rows(ideal_rows, h, self.fld))
        q = quo.dimension
        c = np.zeros((q, q, q), dtype=np.uint8)
        for p in range(q):
            products = multiply(self.left(quo.section[p]), quo.section.T.copy(), self.fld)
            c[p] = multiply(quo.projection, products, self.fld).T
        return FiniteAlgebra(self.fld, c, mat_vec(quo.projection, self.one, self.fld) if q else zeros(1, 0)[0])

    def frobenius_fixed_dim(self) -> int:
        """dim of {x : x^q = x}, q = |field|; the number of simple factors of a commutative semisimple algebra."""
        h = self.dim
        F = zeros(h, h)
        for k in range(h):
            x = zeros(1, h)[0]
            x[k] = 1
            for _ in range(self.fld.degree):
                x = self.product(x, x)
            F[:, k] = x
        return h - rank(add(F, identity(h)), self.fld)

    def restrict_scalars(self) -> "FiniteAlgebra":
        """The same algebra over GF(2), basis x^a b_k at index k*m + a."""
        m, h = self.fld.degree, self.dim
        if h * m > RESTRICT_SCALARS_LIMIT:
            raise ResourceLimitError(f"scalar restriction to dimension {h * m} exceeds {RESTRICT_SCALARS_LIMIT}")
        xp = self.fld.x_powers[np.add.outer(np.arange(m), np.arange(m))]
        vals = self.fld.mul_table[xp[None, :, None, :, None], self.c[:, None, :, None, :]]
        bits = (vals[..., None] >> np.arange(m, dtype=np.uint8)) & 1
        c2 = bits.reshape(h * m, h * m, h * m).astype(np.uint8)
        one2 = ((self.one[:, None] >> np.arange(m, dtype=np.uint8)) & 1).reshape(-1).astype(np.uint8)
        return FiniteAlgebra(GF2, c2, one2)

    def radical_rows(self) -> np.ndarray:
        """Basis rows (coordinates) of the Jacobson radical."""
        if self.dim == 0:
            return zeros(0, 0)
        if self.fld.is_prime:
            return self._radical_gf2()
        m, h = self.fld.degree, self.dim
        rows2 = self.restrict_scalars()._radical_gf2()
        if not rows2.shape[0]:
            return zeros(0, h)
        weights = (1 << np.arange(m)).astype(np.int64)
        rows = (rows2.reshape(-1, h, m).astype(np.int64) * weights).sum(axis=2).astype(np.uint8)
        return Subspace.from_rows(rows, h, self.fld).basis.copy()

    def _radical_gf2(self) -> np.ndarray:
        # I_i = {a in I_{i-1} : g_i(ab) = 0 for all b}, g_i(a) = digit i of Tr(lift(L_a)^(2^i))
        h = self.dim
        cflat = self.c.reshape(h, h * h)
        left_flat = self.c.transpose(0, 2, 1).reshape(h, h * h)
        current = identity(h)
        levels = int(math.floor(math.log2(h))) if h > 1 else 0
        for i in range(levels + 1):
            r = current.shape[0]
            if not r:
                break
            lefts = multiply(current, left_flat).reshape(r, h, h)
            gamma = np.array([_trace_digit(L, i) for L in lefts], dtype=np.uint8)
            products = multiply(current, cflat).reshape(r, h, h)
            pivots = Subspace(h, current).pivots
            G = multiply(products[:, :, pivots].reshape(r * h, r), gamma.reshape(r, 1)).reshape(r, h)
            lam = kernel(G.T.copy())
            if lam.dim == r:
                continue
            current = Subspace.from_rows(multiply(lam.basis, current), h).basis.copy()
        return current


def _trace_digit(L: np.ndarray, i: int) -> int:
    modulus = 2 ** (i + 1)
    M = L.astype(np.float64)
    for _ in range(i):
        M = np.mod(M @ M, modulus)
    return (int(round(np.trace(M))) % modulus) >> i


@dataclass(frozen=True, eq=False)
class AlgebraBasis:
    """A matrix algebra (or ideal) stored by its canonical flattened echelon basis."""

    matrices: np.ndarray
    fld: FieldSpec = GF2
    _memo: Dict[str, Any] = field(default_factory=dict, compare=False, repr=False)

    @classmethod
    def from_matrices(cls, mats: np.ndarray, fld: FieldSpec = GF2, size: Optional[int] = None) -> "AlgebraBasis":
        mats = np.asarray(mats, dtype=np.uint8)
        d = mats.shape[1] if mats.ndim == 3 and mats.shape[0] else (size or 0)
        if not mats.shape[0]:
            return cls(np.zeros((0, d, d), dtype=np.uint8), fld)
        space = Subspace.from_rows(mats.reshape(mats.shape[0], d * d), d * d, fld)
        return cls(space.basis.reshape(-1, d, d).copy(), fld)

    @property
    def dim(self) -> int:
        return self.matrices.shape[0]

    @property
    def size(self) -> int:
        return self.matrices.shape[1]

    @property
    def pivots(self) -> List[int]:
        if "pivots" not in self._memo:
            self._memo["pivots"] = Subspace(self.size ** 2, self.matrices.reshape(self.dim, -1), self.fld).pivots
        return self._memo["pivots"]

    def coordinates(self, X: np.ndarray) -> np.ndarray:
        return np.asarray(X, dtype=np.uint8).reshape(-1)[self.pivots].copy()

    def contains(self, X: np.ndarray) -> bool:
        space = Subspace(self.size ** 2, self.matrices.reshape(self.dim, -1), self.fld)
        return space.contains_vector(np.asarray(X, dtype=np.uint8).reshape(-1))

    def element(self, coeffs: np.ndarray) -> np.ndarray:
        d = self.size
        return multiply(np.asarray(coeffs, dtype=np.uint8)[None, :], self.matrices.reshape(self.dim, d * d), self.fld).reshape(d, d)

    def structure(self) -> FiniteAlgebra:
        if "structure" not in self._memo:
            h, d = self.dim, self.size
            c = np.zeros((h, h, h), dtype=np.uint8)
            for k, p in enumerate(self.pivots):
                row, col = divmod(p, d)
                c[:, :, k] = multiply(self.matrices[:, row, :], self.matrices[:, :, col].T.copy(), self.fld)
            self._memo["structure"] = FiniteAlgebra(self.fld, c, self.coordinates(identity(d)))
        return self._memo["structure"]

    def is_closed(self) -> bool:
        for X in self.matrices:
            for Y in self.matrices:
                if not self.contains(multiply(X, Y, self.fld)):
                    return False
        return True

    def commutes_with(self, M: Representation) -> bool:
        return all(
            np.array_equal(multiply(X, A, self.fld), multiply(A, X, self.fld)) for X in self.matrices for A in M.matrices
        )


def _orbital_basis(gset: GSet) -> np.ndarray:
    """End of k[G/H]: one 0/1 matrix per H-orbit on the points (equivalently per double coset)."""
    n = gset.degree
    group = gset.group
    h_images = [p.images for p in (gset.action_of(h) for h in gset.stabilizer.generators)]
    orbit = np.full(n, -1, dtype=np.int64)
    count = 0
    for start in range(n):
        if orbit[start] >= 0:
            continue
        orbit[start] = count
        stack = [start]
        while stack:
            p = stack.pop()
            for images in h_images:
                nxt = images[p]
                if orbit[nxt] < 0:
                    orbit[nxt] = count
                    stack.append(nxt)
        count += 1
    labels = np.empty((n, n), dtype=np.int64)
    for j, r in enumerate(gset.representatives):
        back = gset.action_of(group.parent.inv(r))
        labels[:, j] = orbit[list(back.images)]
    return np.stack([(labels == o).astype(np.uint8) for o in range(count)])


def end_algebra(M: Representation) -> AlgebraBasis:
    """End_{kG}(M), orbital matrices for permutation modules and the spin method otherwise."""
    _check_dim(M.dimension)
    if M.gset is not None and M.group == M.gset.group:
        mats = _orbital_basis(M.gset)
    else:
        mats = hom_space(M, M)
    return AlgebraBasis.from_matrices(mats, M.fld, size=M.dimension)


def radical(A: AlgebraBasis) -> AlgebraBasis:
    """J(A), certified: basis elements nilpotent and A/J has zero radical."""
    if A.dim == 0:
        return A
    alg = A.structure()
    rows = alg.radical_rows()
    _certify_radical(alg, rows)
    if not rows.shape[0]:
        return AlgebraBasis(np.zeros((0, A.size, A.size), dtype=np.uint8), A.fld)
    mats = multiply(rows, A.matrices.reshape(A.dim, -1), A.fld).reshape(-1, A.size, A.size)
    return AlgebraBasis.from_matrices(mats, A.fld, size=A.size)


def _certify_radical(alg: FiniteAlgebra, rows: np.ndarray) -> None:
    h = alg.dim
    steps = max(1, math.ceil(math.log2(h))) if h > 1 else 1
    for x in rows:
        L = alg.left(x)
        for _ in range(steps):
            L = multiply(L, L, alg.fld)
        if L.any():
            log_error("Radical certificate failed: non-nilpotent element")
            raise CertificationError("radical basis element is not nilpotent")
    if rows.shape[0] and rows.shape[0] < h:
        top = alg.quotient(rows)
        if top.radical_rows().shape[0]:
            log_error("Radical certificate failed: A/J is not semisimple")
            raise CertificationError("quotient by the computed radical is not semisimple")


def local_status(E: AlgebraBasis) -> Tuple[str, Dict[str, Any]]:
    """Classify End(M)/J: the base field, a proper field extension, or something that splits M."""
    alg = E.structure()
    rows = alg.radical_rows()
    _certify_radical(alg, rows)
    top_dim = E.dim - rows.shape[0]
    cert: Dict[str, Any] = {"dim_end": E.dim, "dim_radical": int(rows.shape[0]), "dim_top": top_dim, "field": str(E.fld)}
    if top_dim == 1:
        return LOCAL, cert
    top = alg.quotient(rows)
    if not top.is_commutative():
        cert["reason"] = "End/J is not commutative"
        return SPLIT, cert
    factors = top.frobenius_fixed_dim()
    cert["top_factors"] = factors
    if factors > 1:
        cert["reason"] = f"End/J has {factors} simple factors"
        return SPLIT, cert
    cert["residue_field"] = f"GF(2^{E.fld.degree * top_dim})"
    return FIELD_EXTENSION, cert


def is_indecomposable(M: Representation, E: Optional[AlgebraBasis] = None) -> Tuple[bool, Dict[str, Any]]:
    """Absolute indecomposability with an End/J certificate; the zero module is not indecomposable."""
    if M.dimension == 0:
        return False, {"reason": "zero module"}
    E = E if E is not None else end_algebra(M)
    status, cert = local_status(E)
    if status == LOCAL:
        cert["method"] = "End/J is the base field"
        return True, cert
    if status == SPLIT:
        return False, cert
    s = cert["dim_top"]
    if M.fld.is_prime and s <= MAX_FIELD_DEGREE:
        extended = extend_scalars(M, s)
        ok, ext_cert = is_indecomposable(extended)
        cert["note"] = "indecomposable over base field, extends-scalars retry performed"
        cert["extended"] = ext_cert
        log_info("Scalar extension to GF(2^%s) for %s: indecomposable=%s", s, M.name, ok)
        return ok, cert
    cert["note"] = "indecomposable over base field only"
    return False, cert


@dataclass(frozen=True, eq=False)
class Summand:
    parent: Representation
    idempotent: np.ndarray
    rep: Representation
    inclusion: np.ndarray
    projection: np.ndarray
    certificate: Dict[str, Any] = field(default_factory=dict, compare=False)

    @property
    def dimension(self) -> int:
        return self.rep.dimension

    def image(self) -> Subspace:
        return column_space(self.inclusion, self.parent.fld)

    def check(self) -> None:
        fld = self.parent.fld
        e = self.idempotent
        problems = []
        if not np.array_equal(multiply(e, e, fld), e):
            problems.append("idempotent^2 != idempotent")
        if not all(np.array_equal(multiply(e, A, fld), multiply(A, e, fld)) for A in self.parent.matrices):
            problems.append("idempotent does not commute with the action")
        if not np.array_equal(multiply(self.inclusion, self.projection, fld), e):
            problems.append("inclusion∘projection != idempotent")
        if not np.array_equal(multiply(self.projection, self.inclusion, fld), identity(self.dimension)):
            problems.append("projection∘inclusion != identity")
        if problems:
            raise AssertionError("; ".join(problems))


def _sub_representation(M: Representation, W: Subspace, K: Subspace) -> Tuple[Representation, np.ndarray, np.ndarray]:
    fld = M.fld
    inc = W.basis.T.copy()
    T = np.hstack([inc, K.basis.T]).astype(np.uint8)
    proj = inverse(T, fld)[: W.dim]
    pivots = W.pivots
    mats = tuple(multiply(A, inc, fld)[pivots] for A in M.matrices)
    return Representation(M.group, fld, W.dim, mats, name=f"{M.name}|{W.dim}"), inc, proj


def _compress(E: AlgebraBasis, inc: np.ndarray, proj: np.ndarray) -> AlgebraBasis:
    fld = E.fld
    mats = np.array([multiply(multiply(proj, X, fld), inc, fld) for X in E.matrices], dtype=np.uint8)
    return AlgebraBasis.from_matrices(mats, fld, size=inc.shape[1])


def _fitting_split(M: Representation, candidates: Sequence[np.ndarray]) -> Optional[Tuple[Subspace, Subspace]]:
    d = M.dimension
    steps = max(1, math.ceil(math.log2(d))) if d > 1 else 1
    for X in candidates:
        Y = X
        for _ in range(steps):
            Y = multiply(Y, Y, M.fld)
        r = rank(Y, M.fld)
        if 0 < r < d:
            return column_space(Y, M.fld), kernel(Y, M.fld)
    return None


def _basis_candidates(E: AlgebraBasis) -> List[np.ndarray]:
    d = E.size
    out = []
    for X in E.matrices:
        out.append(X)
        out.append(add(X, identity(d)))
    return out


def _random_candidates(E: AlgebraBasis, rng: np.random.Generator, count: int) -> List[np.ndarray]:
    return [E.element(rng.integers(0, E.fld.order, size=E.dim, dtype=np.uint8)) for _ in range(count)]


def _split_into(M: Representation, E: AlgebraBasis, inclusion: np.ndarray, rng: np.random.Generator, leaves: List[Tuple[np.ndarray, Dict[str, Any]]]) -> None:
    split = _fitting_split(M, _basis_candidates(E))
    if split is None:
        status, cert = local_status(E)
        if status == LOCAL:
            cert["absolutely_indecomposable"] = True
            leaves.append((inclusion, cert))
            return
        if status == FIELD_EXTENSION:
            # no split over the base field; locality is settled over the extension
            ok, cert = is_indecomposable(M, E)
            cert["absolutely_indecomposable"] = ok
            if not ok:
                log_warning("Summand of dimension %s is indecomposable only over %s", M.dimension, M.fld)
            leaves.append((inclusion, cert))
            return
        split = _fitting_split(M, _random_candidates(E, rng, SPLIT_ATTEMPTS))
        if split is None:
            log_error("No splitting endomorphism for %s after %s attempts (%s)", M.name, SPLIT_ATTEMPTS, cert)
            raise DecompositionError(f"module of dimension {M.dimension} is decomposable ({cert.get('reason')}) but no split was found")
    W, K = split
    log_debug("Fitting split of dimension %s into %s + %s", M.dimension, W.dim, K.dim)
    for part, other in ((W, K), (K, W)):
        sub, inc, proj = _sub_representation(M, part, other)
        _split_into(sub, _compress(E, inc, proj), multiply(inclusion, inc, M.fld), rng, leaves)


def decompose(M: Representation, seed: int = DEFAULT_SEED, E: Optional[AlgebraBasis] = None) -> List[Summand]:
    """Krull-Schmidt decomposition by Fitting splitting; summands ordered by (dimension, basis)."""
    if M.dimension == 0:
        return []
    _check_dim(M.dimension)
    fld = M.fld
    d = M.dimension
    rng = np.random.default_rng(seed)
    E = E if E is not None else end_algebra(M)
    leaves: List[Tuple[np.ndarray, Dict[str, Any]]] = []
    _split_into(M, E, identity(d), rng, leaves)

    images = [column_space(inc, fld) for inc, _ in leaves]
    order = sorted(range(len(leaves)), key=lambda i: (images[i].dim, images[i].basis.tobytes()))
    inclusions = [images[i].basis.T.copy() for i in order]
    try:
        T_inv = inverse(np.hstack(inclusions), fld)
    except ShapeError as exc:
        log_error("Summand images of %s do not span: %s", M.name, exc)
        raise DecompositionError("summand images are not a direct sum decomposition") from exc

    summands: List[Summand] = []
    offset = 0
    total = zeros(d, d)
    for i, inc in zip(order, inclusions):
        k = inc.shape[1]
        proj = T_inv[offset:offset + k].copy()
        offset += k
        pivots = images[i].pivots
        mats = tuple(multiply(A, inc, fld)[pivots] for A in M.matrices)
        rep = Representation(M.group, fld, k, mats, name=f"{M.name}[{len(summands)}]")
        idem = multiply(inc, proj, fld)
        total ^= idem
        summand = Summand(M, idem, rep, inc, proj, certificate=leaves[i][1])
        summand.check()
        summands.append(summand)
    if not np.array_equal(total, identity(d)):
        raise DecompositionError("summand idempotents do not sum to the identity")
    log_info("Decomposed %s (dim %s) into dims %s", M.name, d, [s.dimension for s in summands])
    return summands


def modules_isomorphic(A: Representation, B: Representation, seed: int = DEFAULT_SEED) -> Optional[bool]:
    """True/False when certified, None when the bounded search is inconclusive."""
    if A.group != B.group or A.fld != B.fld:
        raise ValueError("modules_isomorphic needs modules for the same group over the same field")
    if A.dimension != B.dimension:
        return False
    if A.dimension == 0:
        return True
    fld = A.fld
    H = hom_space(A, B)
    if not H.shape[0]:
        return False
    E = end_algebra(A)
    if H.shape[0] != E.dim:
        return False
    for X in H:
        if is_invertible(X, fld):
            return True
    status, _ = local_status(E)
    if status != SPLIT:
        # with End(A) local the non-invertible maps form the proper subspace phi J
        return False
    rng = np.random.default_rng(seed)
    flat = H.reshape(H.shape[0], -1)
    for _ in range(ISO_ATTEMPTS):
        coeffs = rng.integers(0, fld.order, size=H.shape[0], dtype=np.uint8)
        X = multiply(coeffs[None, :], flat, fld).reshape(B.dimension, A.dimension)
        if is_invertible(X, fld):
            return True
    log_warning("Isomorphism test inconclusive after %s attempts", ISO_ATTEMPTS)
    return None


__all__ = [
    "Representation",
    "Summand",
    "AlgebraBasis",
    "FiniteAlgebra",
    "DecompositionError",
    "CertificationError",
    "perm_matrix",
    "perm_module",
    "trivial_module",
    "regular_module",
    "fixed_points",
    "relative_trace_image",
    "brauer_quotient",
    "restrict",
    "direct_sum",
    "extend_scalars",
    "change_basis",
    "coinvariants_dimension",
    "hom_space",
    "end_algebra",
    "radical",
    "local_status",
    "is_indecomposable",
    "decompose",
    "modules_isomorphic",
]
