"""Exact linear algebra over the integers.

Every canonical form in this package (homology groups, Tate groups,
invariants, induced maps) funnels through the Smith normal form computed
here, so this module is deliberately dependency-free, dense-matrix only,
and exact: entries are Python integers, which grow as needed.  Machine
words are never trusted; SNF intermediates overflow 64 bits even for
small inputs.

Conventions.  Matrices act on column vectors.  The "lattice" of a matrix
means the subgroup of Z^n generated by its columns.  A finitely
generated abelian group is always carried in canonical form: a free rank
plus a divisor chain of torsion orders (each >= 2, each dividing the
next).  Canonical coordinates list the torsion coordinates first, in
chain order, then the free coordinates.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from math import gcd

_DEBUG = os.environ.get("TORIDUAL_DEBUG", "") not in ("", "0")


class IntMatrix:
    """Dense integer matrix with explicit shape (rows may be empty)."""

    __slots__ = ("nrows", "ncols", "rows")

    def __init__(self, nrows: int, ncols: int, rows: list[list[int]] | None = None):
        if nrows < 0 or ncols < 0:
            raise ValueError("negative dimension")
        if rows is None:
            rows = [[0] * ncols for _ in range(nrows)]
        if len(rows) != nrows or any(len(r) != ncols for r in rows):
            raise ValueError("shape mismatch")
        self.nrows = nrows
        self.ncols = ncols
        self.rows = rows

    @classmethod
    def from_rows(cls, rows: list[list[int]]) -> "IntMatrix":
        nrows = len(rows)
        ncols = len(rows[0]) if rows else 0
        return cls(nrows, ncols, [list(r) for r in rows])

    @classmethod
    def from_cols(cls, cols: list[list[int]], nrows: int | None = None) -> "IntMatrix":
        if nrows is None:
            if not cols:
                raise ValueError("ambient dimension needed for an empty column list")
            nrows = len(cols[0])
        rows = [[c[i] for c in cols] for i in range(nrows)]
        return cls(nrows, len(cols), rows)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "IntMatrix":
        return cls(nrows, ncols)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def copy(self) -> "IntMatrix":
        return IntMatrix(self.nrows, self.ncols, [list(r) for r in self.rows])

    def col(self, j: int) -> list[int]:
        return [r[j] for r in self.rows]

    def cols(self) -> list[list[int]]:
        return [self.col(j) for j in range(self.ncols)]

    def transpose(self) -> "IntMatrix":
        return IntMatrix(self.ncols, self.nrows,
                         [[self.rows[i][j] for i in range(self.nrows)]
                          for j in range(self.ncols)])

    def mul(self, other: "IntMatrix") -> "IntMatrix":
        if self.ncols != other.nrows:
            raise ValueError("inner dimensions differ")
        out = [[0] * other.ncols for _ in range(self.nrows)]
        orows = other.rows
        for i, arow in enumerate(self.rows):
            orow = out[i]
            for k, a in enumerate(arow):
                if a:
                    brow = orows[k]
                    for j, b in enumerate(brow):
                        if b:
                            orow[j] += a * b
        return IntMatrix(self.nrows, other.ncols, out)

    def mul_vec(self, v: list[int]) -> list[int]:
        if self.ncols != len(v):
            raise ValueError("dimension mismatch")
        return [sum(a * b for a, b in zip(row, v) if a and b) for row in self.rows]

    def hstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.nrows != other.nrows:
            raise ValueError("row counts differ")
        return IntMatrix(self.nrows, self.ncols + other.ncols,
                         [ra + rb for ra, rb in zip(self.rows, other.rows)])

    def vstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.ncols != other.ncols:
            raise ValueError("column counts differ")
        return IntMatrix(self.nrows + other.nrows, self.ncols,
                         [list(r) for r in self.rows] + [list(r) for r in other.rows])

    def scale(self, k: int) -> "IntMatrix":
        return IntMatrix(self.nrows, self.ncols,
                         [[k * a for a in row] for row in self.rows])

    def add(self, other: "IntMatrix") -> "IntMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return IntMatrix(self.nrows, self.ncols,
                         [[a + b for a, b in zip(ra, rb)]
                          for ra, rb in zip(self.rows, other.rows)])

    def sub(self, other: "IntMatrix") -> "IntMatrix":
        return self.add(other.scale(-1))

    def submatrix_cols(self, js: list[int]) -> "IntMatrix":
        return IntMatrix(self.nrows, len(js),
                         [[row[j] for j in js] for row in self.rows])

    def is_zero(self) -> bool:
        return all(a == 0 for row in self.rows for a in row)

    def __eq__(self, other) -> bool:
        return (isinstance(other, IntMatrix) and self.shape == other.shape
                and self.rows == other.rows)

    def __hash__(self):
        return hash((self.nrows, self.ncols, tuple(tuple(r) for r in self.rows)))

    def __repr__(self) -> str:
        return f"IntMatrix({self.nrows}x{self.ncols}, {self.rows!r})"


@dataclass
class SmithDecomposition:
    """U*M*V = D with U, V unimodular and D diagonal in divisor-chain form.

    `divisors` lists the nonzero diagonal entries d_1 | d_2 | ... (1s
    included); the rest of the diagonal is zero.  U (and its tracked
    inverse) is present only when requested from snf().
    """

    nrows: int
    ncols: int
    rank: int
    divisors: list[int]
    u: IntMatrix | None = None
    v: IntMatrix | None = None
    uinv: IntMatrix | None = None
    vinv: IntMatrix | None = None

    @property
    def invariant_factors(self) -> list[int]:
        return list(self.divisors)

    def d_matrix(self) -> IntMatrix:
        d = IntMatrix.zeros(self.nrows, self.ncols)
        for i, di in enumerate(self.divisors):
            d.rows[i][i] = di
        return d


def snf(m: IntMatrix, want_u: bool = True, want_v: bool = True,
        want_uinv: bool = False, want_vinv: bool = False) -> SmithDecomposition:
    """Smith normal form by minimal-absolute-value pivoting.

    Total function: any shape, including empty, is accepted.  When
    TORIDUAL_DEBUG is set the identity U*M*V = D is re-verified on every
    call.
    """
    R, C = m.nrows, m.ncols
    a = [list(row) for row in m.rows]
    u = [[1 if i == j else 0 for j in range(R)] for i in range(R)] if (want_u or _DEBUG) else None
    v = [[1 if i == j else 0 for j in range(C)] for i in range(C)] if (want_v or _DEBUG) else None
    uinv = [[1 if i == j else 0 for j in range(R)] for i in range(R)] if want_uinv else None
    vinv = [[1 if i == j else 0 for j in range(C)] for i in range(C)] if want_vinv else None

    def row_swap(i, j):
        a[i], a[j] = a[j], a[i]
        if u is not None:
            u[i], u[j] = u[j], u[i]
        if uinv is not None:
            for r in uinv:
                r[i], r[j] = r[j], r[i]

    def col_swap(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        if v is not None:
            for r in v:
                r[i], r[j] = r[j], r[i]
        if vinv is not None:
            vinv[i], vinv[j] = vinv[j], vinv[i]

    def row_sub(i, t, q):
        # rows[i] -= q*rows[t]
        ai, at = a[i], a[t]
        for k in range(C):
            if at[k]:
                ai[k] -= q * at[k]
        if u is not None:
            ui, ut = u[i], u[t]
            for k in range(R):
                if ut[k]:
                    ui[k] -= q * ut[k]
        if uinv is not None:
            for r in uinv:
                if r[i]:
                    r[t] += q * r[i]

    def col_sub(j, t, q):
        # cols[j] -= q*cols[t]
        for r in a:
            if r[t]:
                r[j] -= q * r[t]
        if v is not None:
            for r in v:
                if r[t]:
                    r[j] -= q * r[t]
        if vinv is not None:
            vj, vt = vinv[j], vinv[t]
            for k in range(C):
                if vj[k]:
                    vt[k] += q * vj[k]

    def row_negate(i):
        a[i] = [-x for x in a[i]]
        if u is not None:
            u[i] = [-x for x in u[i]]
        if uinv is not None:
            for r in uinv:
                r[i] = -r[i]

    def col_negate(j):
        for r in a:
            r[j] = -r[j]
        if v is not None:
            for r in v:
                r[j] = -r[j]
        if vinv is not None:
            vinv[j] = [-x for x in vinv[j]]

    t = 0
    n = min(R, C)
    while t < n:
        # Minimal-absolute-value pivot in the trailing block.
        best = None
        bi = bj = -1
        for i in range(t, R):
            row = a[i]
            for j in range(t, C):
                e = row[j]
                if e:
                    e = -e if e < 0 else e
                    if best is None or e < best:
                        best, bi, bj = e, i, j
                        if e == 1:
                            break
            if best == 1:
                break
        if best is None:
            break
        if bi != t:
            row_swap(bi, t)
        if bj != t:
            col_swap(bj, t)
        if a[t][t] < 0:
            row_negate(t)

        # Eliminate; every restart strictly shrinks the (positive) pivot.
        while True:
            p = a[t][t]
            restart = False
            for i in range(t + 1, R):
                e = a[i][t]
                if e:
                    q = e // p
                    if q:
                        row_sub(i, t, q)
                    if a[i][t]:
                        row_swap(i, t)
                        restart = True
                        break
            if restart:
                continue
            for j in range(t + 1, C):
                e = a[t][j]
                if e:
                    q = e // p
                    if q:
                        col_sub(j, t, q)
                    if a[t][j]:
                        col_swap(j, t)
                        restart = True
                        break
            if not restart:
                break
        t += 1
    rank = t

    # Enforce the divisor chain on the nonzero diagonal.
    changed = True
    while changed:
        changed = False
        for i in range(rank - 1):
            di, dj = a[i][i], a[i + 1][i + 1]
            if dj % di:
                changed = True
                # Fold column i+1 into column i, then redo the 2x2 block.
                col_sub(i, i + 1, -1)
                while True:
                    p = a[i][i]
                    e = a[i + 1][i]
                    if e:
                        q = e // p
                        if q:
                            row_sub(i + 1, i, q)
                        if a[i + 1][i]:
                            row_swap(i + 1, i)
                            continue
                    e = a[i][i + 1]
                    if e:
                        q = e // p
                        if q:
                            col_sub(i + 1, i, q)
                        if a[i][i + 1]:
                            col_swap(i + 1, i)
                            continue
                    break
                if a[i][i] < 0:
                    row_negate(i)
                if a[i + 1][i + 1] < 0:
                    row_negate(i + 1)
    for i in range(rank):
        if a[i][i] < 0:
            row_negate(i)

    divisors = [a[i][i] for i in range(rank)]
    dec = SmithDecomposition(
        nrows=R, ncols=C, rank=rank, divisors=divisors,
        u=IntMatrix(R, R, u) if want_u and u is not None else None,
        v=IntMatrix(C, C, v) if want_v and v is not None else None,
        uinv=IntMatrix(R, R, uinv) if uinv is not None else None,
        vinv=IntMatrix(C, C, vinv) if vinv is not None else None,
    )
    if _DEBUG:
        du = IntMatrix(R, R, u)
        dv = IntMatrix(C, C, v)
        if du.mul(m).mul(dv) != dec.d_matrix():
            raise AssertionError("SNF identity U*M*V = D failed")
        for i in range(rank - 1):
            if divisors[i + 1] % divisors[i]:
                raise AssertionError("SNF divisor chain failed")
    return dec


@dataclass(frozen=True)
class FinAbGroup:
    """Canonical form of a finitely generated abelian group.

    torsion is a divisor chain (each entry >= 2, each dividing the
    next); canonical coordinates run over the torsion factors first,
    then free_rank unconstrained integers.
    """

    free_rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        for i, d in enumerate(self.torsion):
            if d < 2:
                raise ValueError("torsion orders must be >= 2")
            if i and d % self.torsion[i - 1]:
                raise ValueError("torsion must form a divisor chain")

    @property
    def ngens(self) -> int:
        return len(self.torsion) + self.free_rank

    def moduli(self) -> tuple[int, ...]:
        """Per-coordinate moduli; 0 marks a free coordinate."""
        return tuple(self.torsion) + (0,) * self.free_rank

    @property
    def is_trivial(self) -> bool:
        return self.ngens == 0

    def order(self) -> int | None:
        """Group order, or None when infinite."""
        if self.free_rank:
            return None
        n = 1
        for d in self.torsion:
            n *= d
        return n

    def exponent(self) -> int:
        """Smallest e > 0 killing the group; 0 when the group is infinite."""
        if self.free_rank:
            return 0
        return self.torsion[-1] if self.torsion else 1

    def reduce(self, coords) -> tuple[int, ...]:
        coords = list(coords)
        if len(coords) != self.ngens:
            raise ValueError("coordinate count mismatch")
        for i, d in enumerate(self.torsion):
            coords[i] %= d
        return tuple(coords)

    def canonical_str(self) -> str:
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return " x ".join(parts) if parts else "0"

    def __str__(self) -> str:
        return self.canonical_str()


def cokernel_structure(m: IntMatrix) -> "Subquotient":
    """Z^rows modulo the column span of m, with coordinate maps."""
    return quotient_group(m.nrows, None, m)


def kernel_basis(m: IntMatrix) -> IntMatrix:
    """Columns form a Z-basis of {x : m x = 0} (a saturated lattice)."""
    dec = snf(m, want_u=False, want_v=True)
    return dec.v.submatrix_cols(list(range(dec.rank, m.ncols)))


def solve(m: IntMatrix, b: list[int], moduli=None) -> list[int] | None:
    """Some x with m x = b, componentwise modulo `moduli` where given.

    moduli may be a single int applied to all rows or a per-row list;
    0 or None entries mean the row is exact.  Returns None when the
    system is unsolvable (a normal outcome, not an error).
    """
    if len(b) != m.nrows:
        raise ValueError("right-hand side has wrong length")
    work = m
    if moduli is not None:
        if isinstance(moduli, int):
            moduli = [moduli] * m.nrows
        if len(moduli) != m.nrows:
            raise ValueError("moduli count mismatch")
        extra = [[0] * m.nrows for _ in moduli]
        ncol = 0
        cols = []
        for i, md in enumerate(moduli):
            if md:
                col = [0] * m.nrows
                col[i] = md
                cols.append(col)
                ncol += 1
        if ncol:
            work = m.hstack(IntMatrix.from_cols(cols, m.nrows))
    dec = snf(work, want_u=True, want_v=True)
    c = dec.u.mul_vec(b)
    y = [0] * work.ncols
    for i in range(work.nrows):
        if i < dec.rank:
            if c[i] % dec.divisors[i]:
                return None
            y[i] = c[i] // dec.divisors[i]
        elif c[i]:
            return None
    x = dec.v.mul_vec(y)
    return x[: m.ncols]


def matrix_solve(m: IntMatrix, b: IntMatrix, moduli=None) -> IntMatrix | None:
    """Columnwise solve: X with m X = b (modulo per-row moduli); None if any column fails."""
    cols = []
    for j in range(b.ncols):
        x = solve(m, b.col(j), moduli)
        if x is None:
            return None
        cols.append(x)
    return IntMatrix.from_cols(cols, m.ncols)


def lattice_basis(gens: IntMatrix) -> IntMatrix:
    """A Z-basis (as columns) of the lattice generated by the columns of gens."""
    dec = snf(gens, want_u=False, want_v=True)
    prod = gens.mul(dec.v)
    return prod.submatrix_cols(list(range(dec.rank)))


def augment_with_moduli(m: IntMatrix, moduli) -> IntMatrix:
    """Append m_i * e_i columns for every nonzero modulus; lattice of a subgroup."""
    cols = []
    for i, md in enumerate(moduli):
        if md:
            col = [0] * m.nrows
            col[i] = md
            cols.append(col)
    if not cols:
        return m
    return m.hstack(IntMatrix.from_cols(cols, m.nrows))


def sublattice_leq(a: IntMatrix, b: IntMatrix) -> bool:
    """Is every column of a inside the lattice generated by b's columns?"""
    return matrix_solve(b, a) is not None


def sublattice_eq(a: IntMatrix, b: IntMatrix) -> bool:
    return sublattice_leq(a, b) and sublattice_leq(b, a)


def kernel_mod(m: IntMatrix, moduli) -> IntMatrix:
    """Generators (columns) of {x : m x = 0 modulo per-row moduli}."""
    work = augment_with_moduli(m, moduli)
    full = kernel_basis(work)
    top = IntMatrix(m.ncols, full.ncols,
                    [full.rows[i] for i in range(m.ncols)])
    return lattice_basis(top)


class Subquotient:
    """A subquotient N/D of some Z^n, with two-way coordinate maps.

    N is a sublattice of Z^n (the numerator), D a sublattice of N (the
    denominator); the group N/D is exposed in canonical form.  to_coords
    maps an ambient vector lying in N to canonical coordinates; rep maps
    canonical coordinates back to a representative ambient vector.
    """

    __slots__ = ("ambient_dim", "group", "basis", "_basis_dec", "_rel_dec",
                 "_slot_of_coord")

    def __init__(self, ambient_dim: int, num_gens: IntMatrix | None,
                 den_gens: IntMatrix):
        self.ambient_dim = ambient_dim
        if num_gens is None:
            self.basis = IntMatrix.identity(ambient_dim)
        else:
            if num_gens.nrows != ambient_dim:
                raise ValueError("numerator ambient dimension mismatch")
            self.basis = lattice_basis(num_gens)
        self._basis_dec = snf(self.basis, want_u=True, want_v=True)
        if den_gens.nrows != ambient_dim:
            raise ValueError("denominator ambient dimension mismatch")
        x = matrix_solve(self.basis, den_gens)
        if x is None:
            raise ValueError("denominator not contained in numerator")
        self._rel_dec = snf(x, want_u=True, want_v=False, want_uinv=True)
        r = self.basis.ncols
        torsion = []
        slots = []
        for i in range(r):
            if i < self._rel_dec.rank:
                d = self._rel_dec.divisors[i]
                if d > 1:
                    torsion.append(d)
                    slots.append(i)
            else:
                slots.append(i)
        free = r - self._rel_dec.rank
        self.group = FinAbGroup(free_rank=free, torsion=tuple(torsion))
        self._slot_of_coord = slots

    def _in_basis(self, vec: list[int]) -> list[int] | None:
        dec = self._basis_dec
        c = dec.u.mul_vec(vec)
        y = [0] * self.basis.ncols
        for i in range(len(c)):
            if i < dec.rank:
                if c[i] % dec.divisors[i]:
                    return None
                y[i] = c[i] // dec.divisors[i]
            elif c[i]:
                return None
        return dec.v.mul_vec(y)

    def contains(self, vec: list[int]) -> bool:
        return self._in_basis(vec) is not None

    def to_coords(self, vec: list[int]) -> tuple[int, ...]:
        """Canonical coordinates of an ambient vector; raises if outside N."""
        y = self._in_basis(vec)
        if y is None:
            raise ValueError("vector is not in the subgroup")
        z = self._rel_dec.u.mul_vec(y)
        return self.group.reduce([z[s] for s in self._slot_of_coord])

    def is_zero_class(self, vec: list[int]) -> bool:
        return all(c == 0 for c in self.to_coords(vec))

    def rep(self, coords) -> list[int]:
        """An ambient representative of the class with the given coordinates."""
        coords = list(coords)
        if len(coords) != self.group.ngens:
            raise ValueError("coordinate count mismatch")
        z = [0] * self.basis.ncols
        for c, s in zip(coords, self._slot_of_coord):
            z[s] = c
        y = self._rel_dec.uinv.mul_vec(z)
        return self.basis.mul_vec(y)

    def generator_reps(self) -> list[list[int]]:
        n = self.group.ngens
        return [self.rep([1 if i == j else 0 for j in range(n)]) for i in range(n)]

    def subgroup_lattice(self) -> IntMatrix:
        """Ambient lattice of the numerator (columns)."""
        return self.basis


def quotient_group(ambient_dim: int, num_gens: IntMatrix | None,
                   den_gens: IntMatrix) -> Subquotient:
    """N/D for column lattices D <= N <= Z^n; num_gens None means N = Z^n."""
    return Subquotient(ambient_dim, num_gens, den_gens)


def map_is_bijective(mat: IntMatrix, source: FinAbGroup, target: FinAbGroup) -> bool:
    """Is the map of canonical groups given by `mat` (columns = images of
    source generators) an isomorphism onto the target?"""
    if mat.nrows != target.ngens or mat.ncols != source.ngens:
        raise ValueError("matrix shape does not match the groups")
    tmod = target.moduli()
    smod = source.moduli()
    # Surjective: columns of mat together with target relations span Z^ngens.
    aug = augment_with_moduli(mat, tmod)
    if cokernel_structure(aug).group.ngens != 0:
        return False
    # Injective: any x with mat*x = 0 mod target relations lies in the
    # source relation lattice.
    ker = kernel_mod(mat, tmod)
    rel = augment_with_moduli(IntMatrix.zeros(source.ngens, 0), smod)
    return sublattice_leq(ker, rel)


def gcd_list(xs) -> int:
    g = 0
    for x in xs:
        g = gcd(g, x)
    return g
