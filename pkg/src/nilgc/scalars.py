"""Exact scalar rings and exact linear solving.

Two coefficient rings power everything downstream:

* :class:`GaussianRational` -- numbers a + b*i with arbitrary-precision
  rational a, b.  This is the ring all catalog data lives in.
* :class:`ParamPolynomial` -- sparse polynomials in named parameters with
  Gaussian-rational coefficients, used when a computation must certify that
  a quantity vanishes *identically* (symplectic decisions, exclusion
  replays).

Linear systems are solved by fraction-free (Bareiss) elimination so that
all intermediate values stay in the coefficient ring.  Over the polynomial
ring, pivots are only accepted when they are nonzero *constants*: a
non-constant pivot would be invalid on the subvariety where it vanishes,
and the solver refuses to guess (``PivotAmbiguousError``).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Mapping, Optional, Sequence, Union


class PivotAmbiguousError(Exception):
    """A parameter-dependent pivot vanishes on a subvariety; caller must case-split."""


# ---------------------------------------------------------------------------
# Gaussian rationals
# ---------------------------------------------------------------------------

_RatLike = Union[int, Fraction]


class GaussianRational:
    """Exact complex number a + b*i with rational a, b."""

    __slots__ = ("re", "im")

    def __init__(self, re: _RatLike = 0, im: _RatLike = 0):
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    # -- predicates

    def is_zero(self) -> bool:
        return not self.re and not self.im

    def is_real(self) -> bool:
        return not self.im

    def __bool__(self) -> bool:
        return not self.is_zero()

    # -- arithmetic

    @staticmethod
    def _coerce(x) -> Optional["GaussianRational"]:
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, (int, Fraction)):
            return GaussianRational(x)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(
            self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = o.re * o.re + o.im * o.im
        if not n:
            raise ZeroDivisionError("division by zero GaussianRational")
        return GaussianRational(
            (self.re * o.re + self.im * o.im) / n,
            (self.im * o.re - self.re * o.im) / n,
        )

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    # -- comparison / hashing

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = GaussianRational(other)
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, ParamPolynomial):
            return other == self
        return NotImplemented

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    # -- text form: "a", "a/b", "i", "3i", "1/2+3/4i", "-i"

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        if self.re:
            parts.append(str(self.re))
        if self.im:
            if self.im == 1:
                s = "i"
            elif self.im == -1:
                s = "-i"
            else:
                s = f"{self.im}i"
            if parts and not s.startswith("-"):
                parts.append("+" + s)
            else:
                parts.append(s)
        return "".join(parts)

    def __repr__(self) -> str:
        return f"GaussianRational({self.re!r}, {self.im!r})"


ZERO = GaussianRational(0)
ONE = GaussianRational(1)
I = GaussianRational(0, 1)


def parse_scalar(text: str) -> GaussianRational:
    """Parse the scalar text syntax: ``a``, ``a/b``, ``i``, ``3i``, ``1/2+3/4i``, ``-i``."""
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty scalar")
    pos = 0

    def part():
        nonlocal pos
        sign = 1
        if pos < len(s) and s[pos] in "+-":
            if s[pos] == "-":
                sign = -1
            pos += 1
        start = pos
        while pos < len(s) and (s[pos].isdigit() or s[pos] == "/"):
            pos += 1
        num = s[start:pos]
        if pos < len(s) and s[pos] == "i":
            pos += 1
            mag = Fraction(num) if num else Fraction(1)
            return GaussianRational(0, sign * mag)
        if not num:
            raise ValueError(f"bad scalar syntax: {text!r}")
        return GaussianRational(sign * Fraction(num))

    val = part()
    while pos < len(s):
        if s[pos] not in "+-":
            raise ValueError(f"bad scalar syntax: {text!r}")
        val = val + part()
    return val


# ---------------------------------------------------------------------------
# Parameter polynomials
# ---------------------------------------------------------------------------


class ParamPolynomial:
    """Sparse polynomial in named parameters over the Gaussian rationals.

    Terms map exponent vectors (aligned with the sorted ``variables`` tuple)
    to nonzero GaussianRational coefficients.  The zero polynomial has an
    empty term map.  Arithmetic between polynomials in different variable
    sets merges the variables.
    """

    __slots__ = ("variables", "terms")

    def __init__(self, variables: Sequence[str], terms: Mapping[tuple, GaussianRational]):
        vs = tuple(variables)
        if list(vs) != sorted(vs):
            raise ValueError("variables must be sorted")
        clean = {}
        for expo, c in terms.items():
            if len(expo) != len(vs):
                raise ValueError("exponent arity mismatch")
            if not isinstance(c, GaussianRational):
                c = GaussianRational(c)
            if not c.is_zero():
                clean[tuple(expo)] = c
        object.__setattr__(self, "variables", vs)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("ParamPolynomial is immutable")

    # -- constructors

    @classmethod
    def constant(cls, c, variables: Sequence[str] = ()) -> "ParamPolynomial":
        vs = tuple(sorted(variables))
        c = c if isinstance(c, GaussianRational) else GaussianRational(c)
        if c.is_zero():
            return cls(vs, {})
        return cls(vs, {(0,) * len(vs): c})

    @classmethod
    def var(cls, name: str) -> "ParamPolynomial":
        return cls((name,), {(1,): ONE})

    # -- structure

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return not self.is_zero()

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self) -> GaussianRational:
        if not self.terms:
            return ZERO
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return next(iter(self.terms.values()))

    def _aligned(self, other: "ParamPolynomial"):
        """Re-express both polynomials over the union of their variables."""
        if self.variables == other.variables:
            return self.variables, self.terms, other.terms
        vs = tuple(sorted(set(self.variables) | set(other.variables)))

        def remap(poly):
            pos = [vs.index(v) for v in poly.variables]
            out = {}
            for expo, c in poly.terms.items():
                e = [0] * len(vs)
                for p, k in zip(pos, expo):
                    e[p] = k
                out[tuple(e)] = c
            return out

        return vs, remap(self), remap(other)

    @staticmethod
    def _lift(x) -> Optional["ParamPolynomial"]:
        if isinstance(x, ParamPolynomial):
            return x
        if isinstance(x, (int, Fraction, GaussianRational)):
            return ParamPolynomial.constant(x)
        return None

    # -- ring operations

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        vs, a, b = self._aligned(o)
        out = dict(a)
        for expo, c in b.items():
            s = out.get(expo, ZERO) + c
            if s.is_zero():
                out.pop(expo, None)
            else:
                out[expo] = s
        return ParamPolynomial(vs, out)

    __radd__ = __add__

    def __neg__(self):
        return ParamPolynomial(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        vs, a, b = self._aligned(o)
        out: dict = {}
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                s = out.get(e, ZERO) + c1 * c2
                if s.is_zero():
                    out.pop(e, None)
                else:
                    out[e] = s
        return ParamPolynomial(vs, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out = ParamPolynomial.constant(1, self.variables)
        for _ in range(k):
            out = out * self
        return out

    def __truediv__(self, other):
        """Division by a nonzero constant only; the ring has no general division."""
        if isinstance(other, ParamPolynomial):
            if not other.is_constant():
                raise TypeError("polynomial division is limited to constants")
            other = other.constant_value()
        o = GaussianRational._coerce(other)
        if o is None:
            return NotImplemented
        inv = ONE / o
        return self * inv

    def conjugate(self) -> "ParamPolynomial":
        """Conjugate coefficients; parameters are treated as real variables."""
        return ParamPolynomial(
            self.variables, {e: c.conjugate() for e, c in self.terms.items()}
        )

    def evaluate(self, assignment: Mapping[str, GaussianRational]) -> GaussianRational:
        total = ZERO
        for expo, c in self.terms.items():
            val = c
            for v, k in zip(self.variables, expo):
                if k:
                    x = assignment[v]
                    for _ in range(k):
                        val = val * x
            total = total + val
        return total

    # -- comparison

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, GaussianRational)):
            other = ParamPolynomial.constant(other)
        if not isinstance(other, ParamPolynomial):
            return NotImplemented
        vs, a, b = self._aligned(other)
        return a == b

    def __hash__(self):
        if self.is_constant():
            return hash(self.constant_value())
        items = tuple(sorted(self.terms.items(), key=lambda kv: kv[0]))
        return hash((self.variables, items))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for expo, c in sorted(self.terms.items()):
            mono = "*".join(
                f"{v}^{k}" if k > 1 else v
                for v, k in zip(self.variables, expo)
                if k
            )
            if mono and c == ONE:
                bits.append(mono)
                continue
            if mono and c == -ONE:
                bits.append(f"-{mono}")
                continue
            cs = str(c)
            if ("+" in cs[1:]) or ("-" in cs[1:]):
                cs = f"({cs})"
            bits.append(f"{cs}*{mono}" if mono else cs)
        return " + ".join(bits)

    def __repr__(self) -> str:
        return f"ParamPolynomial({self.variables!r}, {self.terms!r})"


Scalar = Union[GaussianRational, ParamPolynomial]


def poly_is_zero(p: Scalar) -> bool:
    """Exact identical-vanishing test (works for both scalar rings)."""
    return p.is_zero()


def conj(s: Scalar) -> Scalar:
    return s.conjugate()


# ---------------------------------------------------------------------------
# Exact linear solving (fraction-free elimination)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LinearSolution:
    """Affine solution set: ``particular + span(nullspace)``."""

    particular: tuple
    nullspace: tuple  # tuple of basis vectors, each a tuple of scalars
    rank: int
    pivot_columns: tuple

    @property
    def free_columns(self) -> tuple:
        ncols = len(self.particular)
        piv = set(self.pivot_columns)
        return tuple(c for c in range(ncols) if c not in piv)


def _as_gaussian_int_rows(matrix, extra):
    """Scale each row (matrix + extra columns) to Gaussian-integer pairs."""
    rows = []
    for mr, er in zip(matrix, extra):
        dens = [x.re.denominator for x in mr] + [x.im.denominator for x in mr]
        dens += [x.re.denominator for x in er] + [x.im.denominator for x in er]
        l = 1
        for d in dens:
            l = l * d // gcd(l, d)
        row = [(int(x.re * l), int(x.im * l)) for x in mr]
        ext = [(int(x.re * l), int(x.im * l)) for x in er]
        rows.append((row, ext))
    return rows


def _gmul(x, y):
    return (x[0] * y[0] - x[1] * y[1], x[0] * y[1] + x[1] * y[0])


def _gdiv_exact(x, y):
    # (x * conj(y)) / |y|^2; exact by the Bareiss minor property
    n = y[0] * y[0] + y[1] * y[1]
    a = x[0] * y[0] + x[1] * y[1]
    b = x[1] * y[0] - x[0] * y[1]
    return (a // n, b // n)


def _eliminate_gaussian(rows, ncols):
    """Fraction-free forward elimination on Gaussian-integer rows.

    Returns (pivot_cols, rows) with rows echelonized in place.
    """
    nrows = len(rows)
    piv_cols = []
    prev = (1, 0)
    r = 0
    for c in range(ncols):
        sel = None
        for rr in range(r, nrows):
            if rows[rr][0][c] != (0, 0):
                sel = rr
                break
        if sel is None:
            continue
        rows[r], rows[sel] = rows[sel], rows[r]
        piv = rows[r][0][c]
        for rr in range(r + 1, nrows):
            row, ext = rows[rr]
            lead = row[c]
            prow, pext = rows[r]
            if lead == (0, 0):
                # Bareiss still rescales untouched rows to keep minors exact
                for j in range(c, ncols):
                    row[j] = _gdiv_exact(_gmul(piv, row[j]), prev)
                for j in range(len(ext)):
                    ext[j] = _gdiv_exact(_gmul(piv, ext[j]), prev)
                continue
            for j in range(c, ncols):
                num = (
                    piv[0] * row[j][0] - piv[1] * row[j][1] - (lead[0] * prow[j][0] - lead[1] * prow[j][1]),
                    piv[0] * row[j][1] + piv[1] * row[j][0] - (lead[0] * prow[j][1] + lead[1] * prow[j][0]),
                )
                row[j] = _gdiv_exact(num, prev)
            for j in range(len(ext)):
                num = (
                    piv[0] * ext[j][0] - piv[1] * ext[j][1] - (lead[0] * pext[j][0] - lead[1] * pext[j][1]),
                    piv[0] * ext[j][1] + piv[1] * ext[j][0] - (lead[0] * pext[j][1] + lead[1] * pext[j][0]),
                )
                ext[j] = _gdiv_exact(num, prev)
        piv_cols.append(c)
        prev = piv
        r += 1
        if r == nrows:
            break
    return piv_cols


def _eliminate_generic(rows, ncols):
    """Fraction-free elimination over ParamPolynomial entries.

    Pivots must be certifiably nonzero, i.e. nonzero constants.  A column
    whose candidate entries are all non-constant raises PivotAmbiguousError.
    """
    nrows = len(rows)
    piv_cols = []
    prev = ParamPolynomial.constant(1)
    r = 0
    for c in range(ncols):
        sel = None
        seen_nonzero = False
        for rr in range(r, nrows):
            e = rows[rr][0][c]
            if not e.is_zero():
                seen_nonzero = True
                if e.is_constant():
                    sel = rr
                    break
        if sel is None:
            if seen_nonzero:
                raise PivotAmbiguousError(
                    f"column {c}: all candidate pivots vanish on a subvariety"
                )
            continue
        rows[r], rows[sel] = rows[sel], rows[r]
        piv = rows[r][0][c]
        prow, pext = rows[r]
        for rr in range(r + 1, nrows):
            row, ext = rows[rr]
            lead = row[c]
            for j in range(c, ncols):
                row[j] = (piv * row[j] - lead * prow[j]) / prev
            for j in range(len(ext)):
                ext[j] = (piv * ext[j] - lead * pext[j]) / prev
        piv_cols.append(c)
        prev = piv
        r += 1
        if r == nrows:
            break
    return piv_cols


def _back_substitute(urows, piv_cols, ncols, rhs_col, free_assign, zero, to_scalar):
    """Solve the echelon system for one target vector.

    ``urows``: echelonized rows (list of column values per row).
    ``rhs_col``: per-row right-hand entries (already echelonized).
    ``free_assign``: dict col -> scalar for free columns.
    """
    x = [None] * ncols
    for c, v in free_assign.items():
        x[c] = v
    for k in range(len(piv_cols) - 1, -1, -1):
        pc = piv_cols[k]
        acc = rhs_col[k]
        for j in range(pc + 1, ncols):
            if x[j] is not None:
                acc = acc - to_scalar(urows[k][j]) * x[j]
        x[pc] = acc / to_scalar(urows[k][pc])
    for c in range(ncols):
        if x[c] is None:
            x[c] = zero
    return x


def _is_polynomial_system(matrix, rhs_cols):
    for row in matrix:
        for x in row:
            if isinstance(x, ParamPolynomial):
                return True
    for col in rhs_cols:
        for x in col:
            if isinstance(x, ParamPolynomial):
                return True
    return False


def _solve_internal(matrix, rhs_cols, ncols=None):
    """Shared engine.  Returns (list of per-rhs particulars-or-None, LinearSolution)."""
    nrows = len(matrix)
    if ncols is None:
        ncols = len(matrix[0]) if nrows else 0

    if _is_polynomial_system(matrix, rhs_cols):
        def lift(x):
            return x if isinstance(x, ParamPolynomial) else ParamPolynomial.constant(x)

        rows = [
            ([lift(x) for x in row], [lift(col[i]) for col in rhs_cols])
            for i, row in enumerate(matrix)
        ]
        piv_cols = _eliminate_generic(rows, ncols)
        to_scalar = lambda v: v
        zero = ParamPolynomial.constant(0)
        one = ParamPolynomial.constant(1)
        is_nonzero = lambda v: not v.is_zero()
    else:
        def lift(x):
            return x if isinstance(x, GaussianRational) else GaussianRational(x)

        mat = [[lift(x) for x in row] for row in matrix]
        ext = [[lift(col[i]) for col in rhs_cols] for i in range(nrows)]
        rows = _as_gaussian_int_rows(mat, ext)
        piv_cols = _eliminate_gaussian(rows, ncols)
        to_scalar = lambda v: GaussianRational(v[0], v[1])
        zero = ZERO
        one = ONE
        is_nonzero = lambda v: v != (0, 0)

    rank = len(piv_cols)
    urows = [rows[k][0] for k in range(rank)]
    uext = [rows[k][1] for k in range(rank)]

    free_cols = [c for c in range(ncols) if c not in piv_cols]

    # null-space basis: one vector per free column
    null_basis = []
    for f in free_cols:
        vec = _back_substitute(
            urows, piv_cols, ncols,
            [zero] * rank,
            {f: one}, zero, to_scalar,
        )
        null_basis.append(tuple(vec))

    particulars = []
    for ci in range(len(rhs_cols)):
        consistent = True
        for k in range(rank, nrows):
            if is_nonzero(rows[k][1][ci]):
                consistent = False
                break
        if not consistent:
            particulars.append(None)
            continue
        vec = _back_substitute(
            urows, piv_cols, ncols,
            [to_scalar(uext[k][ci]) for k in range(rank)],
            {}, zero, to_scalar,
        )
        particulars.append(tuple(vec))

    base = LinearSolution(
        particular=tuple(zero for _ in range(ncols)),
        nullspace=tuple(null_basis),
        rank=rank,
        pivot_columns=tuple(piv_cols),
    )
    return particulars, base


def solve_linear(matrix: Sequence[Sequence[Scalar]], rhs: Optional[Sequence[Scalar]] = None,
                 ncols: Optional[int] = None):
    """Solve ``matrix @ x = rhs`` exactly.

    Returns a :class:`LinearSolution` (particular solution plus null-space
    basis), or ``None`` when the right-hand side is not in the column span.
    With ``rhs=None`` the system is homogeneous and always solvable.
    Raises :class:`PivotAmbiguousError` over the polynomial ring when no
    certifiably nonzero pivot exists in a needed column.
    """
    if rhs is None:
        return _solve_internal(matrix, [], ncols)[1]
    particulars, base = _solve_internal(matrix, [list(rhs)], ncols)
    if particulars[0] is None:
        return None
    return LinearSolution(
        particular=particulars[0],
        nullspace=base.nullspace,
        rank=base.rank,
        pivot_columns=base.pivot_columns,
    )


def solve_many(matrix, rhs_list, ncols=None):
    """Solve one matrix against many right-hand sides with a single elimination.

    Returns a list of particular-solution tuples (None where inconsistent),
    plus the shared homogeneous solution as the second element.
    """
    cols = [list(r) for r in rhs_list]
    return _solve_internal(matrix, cols, ncols)


def nullspace(matrix, ncols=None) -> tuple:
    """Basis of the exact null space of ``matrix``."""
    return _solve_internal(matrix, [], ncols)[1].nullspace


def matrix_rank(matrix, ncols=None) -> int:
    return _solve_internal(matrix, [], ncols)[1].rank
