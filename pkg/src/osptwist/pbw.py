"""Normal-ordered (Poincare-Birkhoff-Witt) calculus for the enveloping
algebra of osp(1|2n), and for its tensor powers.

Monomials are tuples of basis indices, kept weakly increasing in the
basis order fixed by :class:`~osptwist.algebra.OspAlgebra` (strictly
increasing at odd letters, whose square rewrites to half a bracket).
The rewriting engine turns an arbitrary word into a combination of such
monomials using the structure constants; results are memoized per word
on the algebra instance, and rewriting is iterative, so long words are
fine.

Truncation.  Infinite objects (exponentials of raising elements, inverses,
square roots) are handled by working in the quotient of the enveloping
algebra -- or of its tensor powers -- by the span of all monomials whose
*total principal grade* exceeds a chosen cap.  The principal grade (half
the sum of the root's eps-coefficients, stored doubled as ``g2``) is
additive under multiplication and preserved by rewriting, so that span is
a two-sided ideal and the quotient is an honest ring: every coefficient
kept is exact, none is polluted by discarded terms.  Since the grade of a
monomial never exceeds its degree, capping at grade D certifies in
particular every coefficient of degree <= D.

An element with ``g2cap=None`` is untruncated; caps combine by taking the
minimum.  All series operations require a finite cap (they do not
terminate otherwise) and a grade-positive argument.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import (
    ConstantTermPresent,
    DivisionByNonUnit,
    HeterogeneousOperand,
    IrrationalExpansionPoint,
    MixedAlgebra,
)
from .repmat import GradedMatrix, kron_all
from .scalars import (
    LaurentSeries,
    Poly,
    fraction_sqrt,
    scalar_is_zero,
    taylor_binomial,
)


def _fr_or_none(x):
    if isinstance(x, bool):
        return None
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, Fraction):
        return x
    return None


def scalar_inverse(c):
    """Multiplicative inverse within the scalar tower."""
    f = _fr_or_none(c)
    if f is not None:
        if f == 0:
            raise DivisionByNonUnit("scalar 0 has no inverse")
        return 1 / f
    if isinstance(c, Poly):
        return c.inverse()
    if isinstance(c, LaurentSeries):
        return c.invert()
    raise TypeError("cannot invert scalar %r" % (c,))


# --------------------------------------------------------------------------
# Word rewriting
# --------------------------------------------------------------------------


def _nf_cache(alg):
    cache = getattr(alg, "_pbw_nf_cache", None)
    if cache is None:
        cache = {}
        alg._pbw_nf_cache = cache
    return cache


def _first_violation(alg, word):
    for i in range(len(word) - 1):
        a, b = word[i], word[i + 1]
        if a > b:
            return i
        if a == b and alg.parity(a):
            return i
    return None


def normal_form(alg, word) -> dict:
    """Rewrite an arbitrary word of basis indices into normal-ordered
    monomials: {monomial: Fraction}.  Exact; memoized on the algebra.

    Terminates because each rewriting step either shortens the word or
    removes one adjacent inversion without changing the length.
    """
    word = tuple(word)
    cache = _nf_cache(alg)
    stack = [word]
    while stack:
        w = stack[-1]
        if w in cache:
            stack.pop()
            continue
        i = _first_violation(alg, w)
        if i is None:
            cache[w] = {w: Fraction(1)}
            stack.pop()
            continue
        x, y = w[i], w[i + 1]
        children = []
        if x == y:  # odd square: x*x = [x,x]/2
            for k, c in alg.bracket(x, x).items():
                children.append((c / 2, w[:i] + (k,) + w[i + 2 :]))
        else:
            sign = -1 if (alg.parity(x) and alg.parity(y)) else 1
            children.append((Fraction(sign), w[:i] + (y, x) + w[i + 2 :]))
            for k, c in alg.bracket(x, y).items():
                children.append((c, w[:i] + (k,) + w[i + 2 :]))
        missing = [cw for _, cw in children if cw not in cache]
        if missing:
            stack.extend(missing)
            continue
        acc: dict = {}
        for c, cw in children:
            for mono, cc in cache[cw].items():
                v = acc.get(mono, 0) + c * cc
                if v:
                    acc[mono] = v
                elif mono in acc:
                    del acc[mono]
        cache[w] = acc
        stack.pop()
    return cache[word]


def monomial_g2(alg, mono) -> int:
    cache = getattr(alg, "_pbw_g2_cache", None)
    if cache is None:
        cache = {}
        alg._pbw_g2_cache = cache
    v = cache.get(mono)
    if v is None:
        v = sum(alg.g2(ix) for ix in mono)
        cache[mono] = v
    return v


def monomial_parity(alg, mono) -> int:
    cache = getattr(alg, "_pbw_par_cache", None)
    if cache is None:
        cache = {}
        alg._pbw_par_cache = cache
    v = cache.get(mono)
    if v is None:
        v = sum(alg.parity(ix) for ix in mono) % 2
        cache[mono] = v
    return v


def format_monomial(alg, mono) -> str:
    if not mono:
        return "1"
    parts = []
    i = 0
    while i < len(mono):
        j = i
        while j < len(mono) and mono[j] == mono[i]:
            j += 1
        name = alg.name_of(mono[i])
        if not name[0].isalnum():
            name = "(%s)" % name
        parts.append(name if j - i == 1 else "%s^%d" % (name, j - i))
        i = j
    return "*".join(parts)


def _min_cap(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


# --------------------------------------------------------------------------
# Elements of the (grade-capped) enveloping algebra
# --------------------------------------------------------------------------


class UEElement:
    """A finite combination of normal-ordered monomials with coefficients
    in the exact scalar tower, living in the enveloping algebra modulo
    total grade > g2cap/2 (no truncation when g2cap is None)."""

    __slots__ = ("algebra", "terms", "g2cap")

    def __init__(self, algebra, terms, g2cap=None):
        cleaned = {}
        for mono, c in terms.items():
            mono = tuple(mono)
            if isinstance(c, int):
                c = Fraction(c)
            if scalar_is_zero(c):
                continue
            if g2cap is not None and monomial_g2(algebra, mono) > g2cap:
                continue
            cleaned[mono] = c
        self.algebra = algebra
        self.terms = cleaned
        self.g2cap = g2cap

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, algebra, g2cap=None):
        return cls(algebra, {}, g2cap)

    @classmethod
    def one(cls, algebra, g2cap=None):
        return cls(algebra, {(): Fraction(1)}, g2cap)

    @classmethod
    def generator(cls, algebra, name, g2cap=None):
        ix = algebra.generator_index(name) if isinstance(name, str) else name
        return cls(algebra, {(ix,): Fraction(1)}, g2cap)

    def one_like(self):
        return UEElement.one(self.algebra, self.g2cap)

    def zero_like(self):
        return UEElement.zero(self.algebra, self.g2cap)

    # -- inspection -------------------------------------------------------

    @property
    def is_zero(self):
        return not self.terms

    def coefficient(self, mono):
        return self.terms.get(tuple(mono), Fraction(0))

    def constant_coefficient(self):
        return self.terms.get((), Fraction(0))

    def is_grade_positive(self):
        """True when every monomial has total grade >= 1/2 (g2 >= 1)."""
        return all(monomial_g2(self.algebra, m) >= 1 for m in self.terms)

    def max_degree(self):
        return max((len(m) for m in self.terms), default=0)

    def parity(self):
        seen = {monomial_parity(self.algebra, m) for m in self.terms}
        if not seen:
            return 0
        if len(seen) > 1:
            return None
        return seen.pop()

    # -- arithmetic ----------------------------------------------------------

    def _check(self, other):
        if not self.algebra.compatible_with(other.algebra):
            raise MixedAlgebra(
                "operands live in osp(1|%d) and osp(1|%d)"
                % (2 * self.algebra.n, 2 * other.algebra.n)
            )

    def __add__(self, other):
        if isinstance(other, UETensor):
            raise HeterogeneousOperand("cannot add an element to a tensor")
        if not isinstance(other, UEElement):
            c = other
            return self + UEElement(self.algebra, {(): c}, self.g2cap)
        self._check(other)
        cap = _min_cap(self.g2cap, other.g2cap)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return UEElement(self.algebra, out, cap)

    def __radd__(self, other):
        return self + other

    def __neg__(self):
        return UEElement(
            self.algebra, {m: -c for m, c in self.terms.items()}, self.g2cap
        )

    def __sub__(self, other):
        if isinstance(other, UEElement):
            return self + (-other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        if scalar_is_zero(c):
            return self.zero_like()
        return UEElement(
            self.algebra, {m: c * v for m, v in self.terms.items()}, self.g2cap
        )

    def __rmul__(self, c):
        if isinstance(c, (UEElement, UETensor)):
            return NotImplemented
        return self.scale(c)

    def __mul__(self, other):
        if isinstance(other, UETensor):
            raise HeterogeneousOperand(
                "cannot multiply an element by a tensor; embed it first"
            )
        if not isinstance(other, UEElement):
            return self.scale(other)
        self._check(other)
        cap = _min_cap(self.g2cap, other.g2cap)
        alg = self.algebra
        odata = sorted(
            ((monomial_g2(alg, m2), m2, c2) for m2, c2 in other.terms.items()),
            key=lambda q: q[0],
        )
        out: dict = {}
        for m1, c1 in self.terms.items():
            budget = None if cap is None else cap - monomial_g2(alg, m1)
            for g2, m2, c2 in odata:
                if budget is not None and g2 > budget:
                    break
                c12 = c1 * c2
                for mono, cc in normal_form(alg, m1 + m2).items():
                    v = out.get(mono, 0) + c12 * cc
                    if scalar_is_zero(v):
                        out.pop(mono, None)
                    else:
                        out[mono] = v
        return UEElement(alg, out, cap)

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        out = self.one_like()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def truncate(self, g2cap):
        return UEElement(self.algebra, self.terms, _min_cap(self.g2cap, g2cap))

    def __eq__(self, other):
        if isinstance(other, UEElement):
            return (
                self.algebra.compatible_with(other.algebra)
                and self.terms == other.terms
            )
        if isinstance(other, (int, Fraction)):
            return self.terms == ({(): Fraction(other)} if other else {})
        return NotImplemented

    def __hash__(self):
        return hash((self.algebra.n, frozenset(self.terms.items())))

    # -- structure maps ---------------------------------------------------------

    def super_bracket(self, other: "UEElement") -> "UEElement":
        """[a,b] = ab - (-1)**(p(a)p(b)) ba (parities must be homogeneous)."""
        pa, pb = self.parity(), other.parity()
        if pa is None or pb is None:
            raise ValueError("bracket needs parity-homogeneous operands")
        ab = self * other
        ba = other * self
        return ab + ba if (pa and pb) else ab - ba

    def to_matrix(self) -> GradedMatrix:
        """Image under the defining representation."""
        alg = self.algebra
        acc = GradedMatrix.zero(alg.pv)
        for mono, c in self.terms.items():
            acc = acc + alg.monomial_matrix(mono).scale(c)
        return acc

    def coproduct(self, legs: int = 2) -> "UETensor":
        """Undeformed coproduct (every basis generator primitive), as a
        tensor with the same total-grade cap."""
        alg = self.algebra
        out: dict = {}
        for mono, c in self.terms.items():
            for key, cc in _coproduct_monomial(alg, mono, legs).terms.items():
                v = out.get(key, 0) + c * cc
                if scalar_is_zero(v):
                    out.pop(key, None)
                else:
                    out[key] = v
        return UETensor(alg, out, legs, self.g2cap)

    def __str__(self):
        if not self.terms:
            return "0"
        keys = sorted(self.terms, key=lambda m: (len(m), m))
        parts = []
        for m in keys:
            c = self.terms[m]
            cs = str(c)
            if isinstance(c, (Poly, LaurentSeries)) and len(getattr(c, "coeffs", ())) > 1:
                cs = "(%s)" % cs
            body = format_monomial(self.algebra, m)
            if body == "1":
                parts.append(cs)
            elif cs == "1":
                parts.append(body)
            elif cs == "-1":
                parts.append("-" + body)
            else:
                parts.append("%s*%s" % (cs, body))
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return "UEElement(%s)" % self


# --------------------------------------------------------------------------
# Tensor powers
# --------------------------------------------------------------------------


class UETensor:
    """A combination of leg-tuples of normal-ordered monomials, i.e. an
    element of U(osp(1|2n))^(x legs), modulo total grade > g2cap/2.

    Multiplication carries the Koszul sign for sliding leg factors past
    each other:  (x1 (x) .. (x) xk)(y1 (x) .. (x) yk) picks up
    (-1)**sum_i p(y_i) * sum_{l>i} p(x_l).
    """

    __slots__ = ("algebra", "terms", "legs", "g2cap")

    def __init__(self, algebra, terms, legs, g2cap=None):
        cleaned = {}
        for key, c in terms.items():
            key = tuple(tuple(m) for m in key)
            if len(key) != legs:
                raise HeterogeneousOperand(
                    "term %r has %d legs, expected %d" % (key, len(key), legs)
                )
            if isinstance(c, int):
                c = Fraction(c)
            if scalar_is_zero(c):
                continue
            if g2cap is not None:
                if sum(monomial_g2(algebra, m) for m in key) > g2cap:
                    continue
            cleaned[key] = c
        self.algebra = algebra
        self.terms = cleaned
        self.legs = legs
        self.g2cap = g2cap

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, algebra, legs, g2cap=None):
        return cls(algebra, {}, legs, g2cap)

    @classmethod
    def one(cls, algebra, legs, g2cap=None):
        return cls(algebra, {((),) * legs: Fraction(1)}, legs, g2cap)

    @classmethod
    def of(cls, *elements, g2cap=None):
        """Elementary tensor e1 (x) e2 (x) ...: bilinear pairing of terms
        (signs only ever come from multiplication, not formation)."""
        if not elements:
            raise HeterogeneousOperand("need at least one tensor factor")
        alg = elements[0].algebra
        cap = g2cap
        for e in elements:
            if not alg.compatible_with(e.algebra):
                raise MixedAlgebra("tensor factors from different algebras")
            cap = _min_cap(cap, e.g2cap)
        combos = {(): Fraction(1)}
        for e in elements:
            nxt = {}
            for pref, pc in combos.items():
                for mono, mc in e.terms.items():
                    nxt[pref + (mono,)] = pc * mc
            combos = nxt
        return cls(alg, combos, len(elements), cap)

    def one_like(self):
        return UETensor.one(self.algebra, self.legs, self.g2cap)

    def zero_like(self):
        return UETensor.zero(self.algebra, self.legs, self.g2cap)

    # -- inspection ----------------------------------------------------------

    @property
    def is_zero(self):
        return not self.terms

    def coefficient(self, key):
        return self.terms.get(tuple(tuple(m) for m in key), Fraction(0))

    def constant_coefficient(self):
        return self.terms.get(((),) * self.legs, Fraction(0))

    def term_g2(self, key):
        return sum(monomial_g2(self.algebra, m) for m in key)

    def is_grade_positive(self):
        return all(self.term_g2(k) >= 1 for k in self.terms)

    def parity(self):
        seen = {
            sum(monomial_parity(self.algebra, m) for m in key) % 2
            for key in self.terms
        }
        if not seen:
            return 0
        if len(seen) > 1:
            return None
        return seen.pop()

    # -- linear structure ---------------------------------------------------------

    def _check(self, other):
        if not self.algebra.compatible_with(other.algebra):
            raise MixedAlgebra(
                "operands live in osp(1|%d) and osp(1|%d)"
                % (2 * self.algebra.n, 2 * other.algebra.n)
            )
        if self.legs != other.legs:
            raise HeterogeneousOperand(
                "tensors with %d and %d legs" % (self.legs, other.legs)
            )

    def __add__(self, other):
        if not isinstance(other, UETensor):
            if isinstance(other, UEElement):
                raise HeterogeneousOperand("cannot add an element to a tensor")
            return self + self.one_like().scale(other)
        self._check(other)
        cap = _min_cap(self.g2cap, other.g2cap)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return UETensor(self.algebra, out, self.legs, cap)

    def __radd__(self, other):
        return self + other

    def __neg__(self):
        return UETensor(
            self.algebra, {k: -c for k, c in self.terms.items()}, self.legs,
            self.g2cap,
        )

    def __sub__(self, other):
        if isinstance(other, (UETensor, UEElement)):
            return self + (-other)
        return self + self.one_like().scale(-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        if scalar_is_zero(c):
            return self.zero_like()
        return UETensor(
            self.algebra, {k: c * v for k, v in self.terms.items()}, self.legs,
            self.g2cap,
        )

    def __rmul__(self, c):
        if isinstance(c, (UEElement, UETensor)):
            return NotImplemented
        return self.scale(c)

    def truncate(self, g2cap):
        return UETensor(
            self.algebra, self.terms, self.legs, _min_cap(self.g2cap, g2cap)
        )

    def __eq__(self, other):
        if isinstance(other, UETensor):
            return (
                self.algebra.compatible_with(other.algebra)
                and self.legs == other.legs
                and self.terms == other.terms
            )
        return NotImplemented

    def __hash__(self):
        return hash((self.algebra.n, self.legs, frozenset(self.terms.items())))

    # -- multiplication ----------------------------------------------------------

    def __mul__(self, other):
        if not isinstance(other, UETensor):
            if isinstance(other, UEElement):
                raise HeterogeneousOperand(
                    "cannot multiply a tensor by an element; embed it first"
                )
            return self.scale(other)
        self._check(other)
        alg = self.algebra
        cap = _min_cap(self.g2cap, other.g2cap)
        k = self.legs
        # right-factor data precomputed once, grade-sorted so the cap cuts
        # the whole tail of the inner loop at a single break
        odata = sorted(
            (
                (other.term_g2(u), u, c2, tuple(monomial_parity(alg, m) for m in u))
                for u, c2 in other.terms.items()
            ),
            key=lambda q: q[0],
        )
        out: dict = {}
        for t, c1 in self.terms.items():
            g1 = self.term_g2(t)
            suff = [0] * (k + 1)
            for i in range(k - 1, -1, -1):
                suff[i] = suff[i + 1] + monomial_parity(alg, t[i])
            budget = None if cap is None else cap - g1
            for g2u, u, c2, pu in odata:
                if budget is not None and g2u > budget:
                    break
                sgn = 0
                for i in range(k):
                    if pu[i]:
                        sgn += suff[i + 1]
                c12 = -c1 * c2 if sgn % 2 else c1 * c2
                parts = [((), c12)]
                for i in range(k):
                    ti, ui = t[i], u[i]
                    if not ui:
                        parts = [(pref + (ti,), pc) for pref, pc in parts]
                    elif not ti:
                        parts = [(pref + (ui,), pc) for pref, pc in parts]
                    else:
                        nf = normal_form(alg, ti + ui)
                        parts = [
                            (pref + (mono,), pc * mc)
                            for pref, pc in parts
                            for mono, mc in nf.items()
                        ]
                for key, v in parts:
                    w = out.get(key, 0) + v
                    if scalar_is_zero(w):
                        out.pop(key, None)
                    else:
                        out[key] = w
        return UETensor(alg, out, k, cap)

    def __pow__(self, p: int):
        if not isinstance(p, int) or p < 0:
            return NotImplemented
        out = self.one_like()
        base = self
        while p:
            if p & 1:
                out = out * base
            base = base * base
            p >>= 1
        return out

    # -- leg surgery ------------------------------------------------------------

    def embed(self, legs, total: int) -> "UETensor":
        """Place the tensor's legs at the given (1-based, increasing)
        positions among ``total`` legs, identity elsewhere.  Elementary
        embedding carries no sign; signs reappear in products."""
        legs = tuple(legs)
        if len(legs) != self.legs or sorted(set(legs)) != list(legs):
            raise HeterogeneousOperand(
                "embedding of a %d-leg tensor needs that many strictly "
                "increasing positions, got %r" % (self.legs, legs)
            )
        if legs and (legs[0] < 1 or legs[-1] > total):
            raise HeterogeneousOperand(
                "legs %r out of range 1..%d" % (legs, total)
            )
        out = {}
        for key, c in self.terms.items():
            full = [()] * total
            for pos, mono in zip(legs, key):
                full[pos - 1] = mono
            out[tuple(full)] = c
        return UETensor(self.algebra, out, total, self.g2cap)

    def flip(self) -> "UETensor":
        """Graded swap of the two legs of a 2-leg tensor."""
        if self.legs != 2:
            raise HeterogeneousOperand("flip is defined for 2-leg tensors")
        alg = self.algebra
        out = {}
        for (m1, m2), c in self.terms.items():
            s = monomial_parity(alg, m1) and monomial_parity(alg, m2)
            out[(m2, m1)] = -c if s else c
        return UETensor(alg, out, 2, self.g2cap)

    def counit_leg(self, leg: int) -> "UETensor | UEElement":
        """Apply the counit (constant-term functional) to one 1-based leg."""
        if not 1 <= leg <= self.legs:
            raise HeterogeneousOperand("no leg %d in a %d-leg tensor" % (leg, self.legs))
        out = {}
        for key, c in self.terms.items():
            if key[leg - 1]:
                continue
            short = key[: leg - 1] + key[leg:]
            out[short] = out.get(short, 0) + c
        if self.legs == 2:
            return UEElement(
                self.algebra, {k[0]: c for k, c in out.items()}, self.g2cap
            )
        return UETensor(self.algebra, out, self.legs - 1, self.g2cap)

    def coproduct_leg(self, leg: int) -> "UETensor":
        """Apply the undeformed coproduct to one 1-based leg (k -> k+1 legs)."""
        if not 1 <= leg <= self.legs:
            raise HeterogeneousOperand("no leg %d in a %d-leg tensor" % (leg, self.legs))
        alg = self.algebra
        out: dict = {}
        for key, c in self.terms.items():
            mono = key[leg - 1]
            for (a, b), cc in _coproduct_monomial(alg, mono, 2).terms.items():
                full = key[: leg - 1] + (a, b) + key[leg:]
                v = out.get(full, 0) + c * cc
                if scalar_is_zero(v):
                    out.pop(full, None)
                else:
                    out[full] = v
        return UETensor(alg, out, self.legs + 1, self.g2cap)

    # -- grading helpers -----------------------------------------------------------

    def grade_component(self, g2: int) -> "UETensor":
        picked = {k: c for k, c in self.terms.items() if self.term_g2(k) == g2}
        return UETensor(self.algebra, picked, self.legs, self.g2cap)

    def scale_by_grade(self, factor) -> "UETensor":
        """Multiply each term by factor**(grade).  Requires every term to
        have even g2 (true for parity-even tensors), so the power is an
        integer."""
        out = {}
        for k, c in self.terms.items():
            g2 = self.term_g2(k)
            if g2 % 2:
                raise ValueError(
                    "term of odd doubled grade %d cannot be scaled by an "
                    "integer power" % g2
                )
            out[k] = c * factor ** (g2 // 2)
        return UETensor(self.algebra, out, self.legs, self.g2cap)

    # -- representation ---------------------------------------------------------------

    def to_matrix(self) -> GradedMatrix:
        """Image under the defining representation on every leg."""
        alg = self.algebra
        d = alg.dim_rep
        pv = tuple(
            sum(alg.pv[i] for i in _digits(flat, d, self.legs)) % 2
            for flat in range(d**self.legs)
        )
        acc = GradedMatrix.zero(pv)
        for key, c in self.terms.items():
            mats = [alg.monomial_matrix(m) for m in key]
            acc = acc + kron_all(mats).scale(c)
        return acc

    def __str__(self):
        if not self.terms:
            return "0"
        keys = sorted(
            self.terms, key=lambda k: (sum(len(m) for m in k), k)
        )
        parts = []
        for key in keys:
            c = self.terms[key]
            cs = str(c)
            if isinstance(c, (Poly, LaurentSeries)) and len(getattr(c, "coeffs", ())) > 1:
                cs = "(%s)" % cs
            body = " (x) ".join(format_monomial(self.algebra, m) for m in key)
            parts.append(body if cs == "1" else
                         ("-" + body if cs == "-1" else "%s*[%s]" % (cs, body)))
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return "UETensor(legs=%d, terms=%d)" % (self.legs, len(self.terms))


def _digits(flat: int, d: int, k: int):
    out = []
    for _ in range(k):
        out.append(flat % d)
        flat //= d
    out.reverse()
    return out


# undeformed coproduct of a single monomial, memoized exactly
def _coproduct_monomial(alg, mono, legs: int) -> UETensor:
    cache = getattr(alg, "_pbw_cop_cache", None)
    if cache is None:
        cache = {}
        alg._pbw_cop_cache = cache
    key = (mono, legs)
    hit = cache.get(key)
    if hit is not None:
        return hit
    out = UETensor.one(alg, legs)
    for ix in mono:
        primitive = UETensor.zero(alg, legs)
        for pos in range(legs):
            term = [()] * legs
            term[pos] = (ix,)
            primitive = primitive + UETensor(
                alg, {tuple(term): Fraction(1)}, legs
            )
        out = out * primitive
    cache[key] = out
    return out


# --------------------------------------------------------------------------
# Terminating series calculus (shared by elements and tensors)
# --------------------------------------------------------------------------


def _require_cap(x):
    if x.g2cap is None:
        raise ValueError(
            "series operations need a truncated operand; call truncate()"
        )


def _split_constant(x):
    c = x.constant_coefficient()
    rest = x - x.one_like().scale(c)
    return c, rest


def _require_grade_positive(rest, what: str):
    if not rest.is_grade_positive():
        raise ConstantTermPresent(
            "%s requires all non-constant terms to have strictly positive "
            "grade (grade-0 letters such as Cartan or grade-0 root vectors "
            "would make the series non-terminating)" % what
        )


def ue_series(coeffs, x):
    """sum_k coeffs[k] * x**k for a grade-positive truncated x.

    The list may be shorter than needed; missing coefficients are treated
    as zero.  It may also be longer: powers beyond the cap vanish and the
    loop stops there.
    """
    _require_cap(x)
    c0, rest = _split_constant(x)
    if not scalar_is_zero(c0):
        raise ConstantTermPresent(
            "series argument must have zero constant term; fold the "
            "constant into the coefficients instead"
        )
    _require_grade_positive(rest, "series evaluation")
    acc = x.one_like().scale(coeffs[0]) if coeffs else x.zero_like()
    power = x.one_like()
    for k in range(1, len(coeffs)):
        power = power * rest
        if power.is_zero:
            break
        if not scalar_is_zero(coeffs[k]):
            acc = acc + power.scale(coeffs[k])
    return acc


def ue_exp(x):
    """exp of a grade-positive truncated element/tensor."""
    _require_cap(x)
    c0, rest = _split_constant(x)
    if not scalar_is_zero(c0):
        raise ConstantTermPresent("exp needs a zero constant term")
    _require_grade_positive(rest, "exp")
    acc = x.one_like()
    term = x.one_like()
    k = 1
    limit = x.g2cap + 2
    while True:
        term = (term * rest).scale(Fraction(1, k))
        if term.is_zero:
            return acc
        acc = acc + term
        k += 1
        if k > limit:
            raise RuntimeError("exp failed to terminate (internal error)")


def ue_log(x):
    """log of 1 + (grade-positive part)."""
    _require_cap(x)
    c0, rest = _split_constant(x)
    if c0 != 1:
        raise ConstantTermPresent("log needs constant term exactly 1")
    _require_grade_positive(rest, "log")
    acc = x.zero_like()
    power = x.one_like()
    k = 1
    limit = x.g2cap + 2
    while True:
        power = power * rest
        if power.is_zero:
            return acc
        acc = acc + power.scale(Fraction((-1) ** (k + 1), k))
        k += 1
        if k > limit:
            raise RuntimeError("log failed to terminate (internal error)")


def ue_invert(x):
    """Inverse of (unit scalar) + (grade-positive part)."""
    _require_cap(x)
    c0, rest = _split_constant(x)
    if scalar_is_zero(c0):
        raise DivisionByNonUnit("cannot invert: zero constant term")
    _require_grade_positive(rest, "inversion")
    c0_inv = scalar_inverse(c0)
    y = rest.scale(c0_inv)  # x = c0 (1 + y)
    acc = x.one_like()
    power = x.one_like()
    k = 1
    limit = x.g2cap + 2
    while True:
        power = power * y
        if power.is_zero:
            return acc.scale(c0_inv)
        acc = acc + power.scale(Fraction((-1) ** k))
        k += 1
        if k > limit:
            raise RuntimeError("invert failed to terminate (internal error)")


def ue_sqrt(x):
    """Principal square root of (positive rational) + (grade-positive part)."""
    _require_cap(x)
    c0, rest = _split_constant(x)
    if isinstance(c0, Poly):
        if not c0.is_constant:
            raise IrrationalExpansionPoint(
                "square root needs a rational constant term, got %s" % c0
            )
        c0 = c0.as_fraction()
    if not isinstance(c0, Fraction):
        raise IrrationalExpansionPoint(
            "square root needs a rational constant term, got %r" % (c0,)
        )
    root = fraction_sqrt(c0)
    if root is None or root == 0:
        raise IrrationalExpansionPoint(
            "constant term %s has no nonzero rational square root" % c0
        )
    _require_grade_positive(rest, "sqrt")
    y = rest.scale(1 / c0)
    # sqrt(c0) * sum binom(1/2, k) y^k; the power loop stops at the cap
    coeffs = taylor_binomial(Fraction(1, 2), x.g2cap + 2)
    acc = x.one_like().scale(coeffs[0])
    power = x.one_like()
    for k in range(1, len(coeffs)):
        power = power * y
        if power.is_zero:
            break
        acc = acc + power.scale(coeffs[k])
    return acc.scale(root)


def ad_exp(a, y):
    """Conjugation  exp(a) y exp(-a)  for grade-positive truncated a."""
    e = ue_exp(a)
    e_inv = ue_exp(-a)
    return e * y * e_inv
