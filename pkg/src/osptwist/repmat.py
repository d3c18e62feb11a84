"""Exact sparse matrices on Z2-graded vector spaces.

A :class:`GradedMatrix` is a square matrix over the exact scalar tower
(Fraction / Poly / LaurentSeries) together with the parity vector of the
space it acts on.  Ordinary matrix multiplication carries no signs; all of
the grading enters through :func:`kron`, whose entries pick up the Koszul
sign

    (A (x) B)[(i,k),(j,l)] = (-1)**((p[k]+p[l]) * p[j]) * A[i,j] * B[k,l],

i.e. the parity of the B-entry times the parity of the A-column.  That is
exactly the matrix of the operator ``a (x) b`` acting on ``v (x) w`` as
``(-1)**(p(b)p(v)) av (x) bw``, summed over homogeneous components, so it
remains correct for inhomogeneous factors.

Also here: the graded swap matrix, embedding of an operator into chosen
tensor legs (with the signs for sliding factors past untouched legs), and
terminating exponential/logarithm for nilpotent/unipotent matrices.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import LegMismatch, NotNilpotent
from .scalars import scalar_is_zero


class GradedMatrix:
    """Square sparse matrix with a parity vector ``pv`` (0/1 per index)."""

    __slots__ = ("pv", "entries")

    def __init__(self, pv, entries):
        pv = tuple(pv)
        d = len(pv)
        cleaned = {}
        for (i, j), c in entries.items():
            if not (0 <= i < d and 0 <= j < d):
                raise IndexError("entry (%d,%d) outside dim %d" % (i, j, d))
            if isinstance(c, int):
                c = Fraction(c)
            if scalar_is_zero(c):
                continue
            cleaned[(i, j)] = c
        object.__setattr__(self, "pv", pv)
        object.__setattr__(self, "entries", cleaned)

    def __setattr__(self, *a):
        raise AttributeError("GradedMatrix is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, pv) -> "GradedMatrix":
        return cls(pv, {})

    @classmethod
    def identity(cls, pv) -> "GradedMatrix":
        return cls(pv, {(i, i): Fraction(1) for i in range(len(pv))})

    @classmethod
    def unit(cls, pv, i: int, j: int, c=1) -> "GradedMatrix":
        """The elementary matrix c * E_{ij}."""
        return cls(pv, {(i, j): c})

    @classmethod
    def from_rows(cls, pv, rows) -> "GradedMatrix":
        entries = {}
        for i, row in enumerate(rows):
            for j, c in enumerate(row):
                entries[(i, j)] = c
        return cls(pv, entries)

    # -- basics ------------------------------------------------------------

    @property
    def dim(self) -> int:
        return len(self.pv)

    def __getitem__(self, ij):
        return self.entries.get(ij, Fraction(0))

    @property
    def is_zero(self) -> bool:
        return not self.entries

    def _check_space(self, other: "GradedMatrix"):
        if self.pv != other.pv:
            raise ValueError("matrices act on different graded spaces")

    def __add__(self, other):
        if not isinstance(other, GradedMatrix):
            return NotImplemented
        self._check_space(other)
        out = dict(self.entries)
        for ij, c in other.entries.items():
            out[ij] = out.get(ij, Fraction(0)) + c
        return GradedMatrix(self.pv, out)

    def __sub__(self, other):
        if not isinstance(other, GradedMatrix):
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        return GradedMatrix(self.pv, {ij: -c for ij, c in self.entries.items()})

    def scale(self, c) -> "GradedMatrix":
        if scalar_is_zero(c):
            return GradedMatrix.zero(self.pv)
        return GradedMatrix(self.pv, {ij: c * v for ij, v in self.entries.items()})

    def __rmul__(self, c):
        if isinstance(c, GradedMatrix):
            return NotImplemented
        return self.scale(c)

    def __mul__(self, other):
        if isinstance(other, GradedMatrix):
            return self.matmul(other)
        return self.scale(other)

    def __matmul__(self, other):
        return self.matmul(other)

    def matmul(self, other: "GradedMatrix") -> "GradedMatrix":
        """Plain matrix product (signs belong to kron, not to composition)."""
        self._check_space(other)
        by_row = {}
        for (k, j), c in other.entries.items():
            by_row.setdefault(k, []).append((j, c))
        out = {}
        for (i, k), a in self.entries.items():
            for j, b in by_row.get(k, ()):
                key = (i, j)
                cur = out.get(key)
                out[key] = a * b if cur is None else cur + a * b
        return GradedMatrix(self.pv, out)

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        out = GradedMatrix.identity(self.pv)
        base = self
        while n:
            if n & 1:
                out = out @ base
            base = base @ base
            n >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, GradedMatrix):
            return NotImplemented
        return self.pv == other.pv and self.entries == other.entries

    def __hash__(self):
        return hash((self.pv, frozenset(self.entries.items())))

    # -- graded structure ----------------------------------------------------

    def parity(self):
        """0 or 1 for a homogeneous matrix (zero counts as even), None if
        the matrix mixes parities."""
        seen = {(self.pv[i] + self.pv[j]) % 2 for (i, j) in self.entries}
        if not seen:
            return 0
        if len(seen) > 1:
            return None
        return seen.pop()

    def transpose(self) -> "GradedMatrix":
        return GradedMatrix(self.pv, {(j, i): c for (i, j), c in self.entries.items()})

    def supertrace(self):
        tot = Fraction(0)
        for (i, j), c in self.entries.items():
            if i == j:
                tot = tot + (-c if self.pv[i] else c)
        return tot

    def super_commutator(self, other: "GradedMatrix") -> "GradedMatrix":
        """[A,B] = AB - (-1)**(p(A)p(B)) BA for homogeneous A, B."""
        pa, pb = self.parity(), other.parity()
        if pa is None or pb is None:
            raise ValueError("super commutator needs homogeneous matrices")
        ab = self @ other
        ba = other @ self
        return ab + ba if (pa and pb) else ab - ba

    # -- nilpotent calculus ----------------------------------------------------

    def is_nilpotent(self) -> bool:
        p = self
        for _ in range(self.dim):
            if p.is_zero:
                return True
            p = p @ self
        return p.is_zero

    def exp_nilpotent(self) -> "GradedMatrix":
        """exp(A) for nilpotent A (raises NotNilpotent otherwise)."""
        acc = GradedMatrix.identity(self.pv)
        term = acc
        for k in range(1, self.dim + 1):
            term = (term @ self).scale(Fraction(1, k))
            if term.is_zero:
                return acc
            acc = acc + term
        raise NotNilpotent("matrix power A^%d is still nonzero" % (self.dim + 1))

    def log_unipotent(self) -> "GradedMatrix":
        """log(A) for A = 1 + N with N nilpotent."""
        n = self - GradedMatrix.identity(self.pv)
        acc = GradedMatrix.zero(self.pv)
        power = GradedMatrix.identity(self.pv)
        for k in range(1, self.dim + 1):
            power = power @ n
            if power.is_zero:
                return acc
            acc = acc + power.scale(Fraction((-1) ** (k + 1), k))
        raise NotNilpotent("matrix is not unipotent: (A-1)^%d != 0" % (self.dim + 1))

    # -- display -----------------------------------------------------------------

    def __str__(self):
        d = self.dim
        rows = []
        for i in range(d):
            rows.append(
                "[" + ", ".join(str(self[(i, j)]) for j in range(d)) + "]"
            )
        return "\n".join(rows)

    def __repr__(self):
        nz = len(self.entries)
        return "GradedMatrix(dim=%d, nonzero=%d)" % (self.dim, nz)


# --------------------------------------------------------------------------
# Graded tensor products and leg embeddings
# --------------------------------------------------------------------------


def kron(a: GradedMatrix, b: GradedMatrix) -> GradedMatrix:
    """Graded Kronecker product; see the module docstring for the sign."""
    da, db = a.dim, b.dim
    pv = tuple((pa + pb) % 2 for pa in a.pv for pb in b.pv)
    out = {}
    for (i, j), x in a.entries.items():
        col_par = a.pv[j]
        for (k, l), y in b.entries.items():
            sign = -1 if col_par and (b.pv[k] + b.pv[l]) % 2 else 1
            v = x * y
            out[(i * db + k, j * db + l)] = -v if sign < 0 else v
    return GradedMatrix(pv, out)


def kron_all(mats) -> GradedMatrix:
    mats = list(mats)
    if not mats:
        raise ValueError("kron_all needs at least one factor")
    acc = mats[0]
    for m in mats[1:]:
        acc = kron(acc, m)
    return acc


def graded_swap(pv) -> GradedMatrix:
    """P with P(v (x) w) = (-1)**(p(v)p(w)) w (x) v on the square of a space."""
    d = len(pv)
    pv2 = tuple((pa + pb) % 2 for pa in pv for pb in pv)
    entries = {}
    for i in range(d):
        for j in range(d):
            c = Fraction(-1 if pv[i] and pv[j] else 1)
            entries[(j * d + i, i * d + j)] = c
    return GradedMatrix(pv2, entries)


def _decode(flat: int, d: int, k: int):
    out = []
    for _ in range(k):
        out.append(flat % d)
        flat //= d
    out.reverse()
    return tuple(out)


def embed_legs(m: GradedMatrix, pv, legs, total: int) -> GradedMatrix:
    """Embed an operator on len(legs) copies of the space with parity ``pv``
    into ``total`` tensor legs (1-based, strictly increasing), acting as the
    identity elsewhere.

    The sign slides each factor of the operator past the untouched legs to
    its left: for every entry, factor t (sitting at leg ``legs[t]``) carries
    the parity of its own matrix entry, and it picks up that parity times
    the parity of each bypassed identity leg.
    """
    legs = tuple(legs)
    k = len(legs)
    if sorted(set(legs)) != list(legs):
        raise LegMismatch("legs must be strictly increasing, got %r" % (legs,))
    if not legs or legs[0] < 1 or legs[-1] > total:
        raise LegMismatch(
            "legs %r out of range for %d tensor factors" % (legs, total)
        )
    d = len(pv)
    if m.dim != d**k:
        raise LegMismatch(
            "operator dim %d does not match %d legs of dim %d"
            % (m.dim, k, d)
        )
    leg_set = set(l - 1 for l in legs)  # to 0-based positions
    free = [p for p in range(total) if p not in leg_set]
    pv_tot = tuple(
        sum(pv[ix] for ix in _decode(flat, d, total)) % 2
        for flat in range(d**total)
    )
    out = {}
    # enumerate diagonal assignments of the free positions
    free_assignments = [[]]
    for _ in free:
        free_assignments = [fa + [x] for fa in free_assignments for x in range(d)]
    for (flat_i, flat_j), c in m.entries.items():
        rows = _decode(flat_i, d, k)
        cols = _decode(flat_j, d, k)
        for fa in free_assignments:
            full_row = [0] * total
            full_col = [0] * total
            for pos, x in zip(free, fa):
                full_row[pos] = x
                full_col[pos] = x
            for t, leg in enumerate(legs):
                full_row[leg - 1] = rows[t]
                full_col[leg - 1] = cols[t]
            sgn = 0
            for t, leg in enumerate(legs):
                p_factor = (pv[rows[t]] + pv[cols[t]]) % 2
                if p_factor:
                    sgn += sum(pv[full_col[pos]] for pos in free if pos < leg - 1)
            fi = 0
            for x in full_row:
                fi = fi * d + x
            fj = 0
            for x in full_col:
                fj = fj * d + x
            val = -c if sgn % 2 else c
            cur = out.get((fi, fj))
            out[(fi, fj)] = val if cur is None else cur + val
    return GradedMatrix(pv_tot, out)
