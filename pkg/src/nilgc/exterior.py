"""Exterior algebra and spinor operations over a fixed dual basis e_1..e_n.

Blades are bitmasks: bit i-1 set means index i is present, so the blade is
always stored in strictly increasing index order.  Building a blade from an
unsorted index list carries the permutation sign out to the coefficient.

A :class:`Form` is a sparse map blade -> scalar over {e_i}; a
:class:`Polyvector` is the same structure over the dual vectors.  Both may
mix degrees.  A :class:`GeneralizedSection` is a pair X + xi in T + T*,
acting on forms by the Clifford action (X + xi) . rho = i_X rho + xi ^ rho.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import Iterable, Mapping, Optional, Sequence, Tuple, Union

from .scalars import GaussianRational, ParamPolynomial, Scalar, ZERO, ONE

ScalarLike = Union[int, Fraction, GaussianRational, ParamPolynomial]


def _lift(c: ScalarLike) -> Scalar:
    if isinstance(c, (GaussianRational, ParamPolynomial)):
        return c
    return GaussianRational(c)


def _is_zero(c) -> bool:
    return c == 0 if not hasattr(c, "is_zero") else c.is_zero()


# ---------------------------------------------------------------------------
# blades
# ---------------------------------------------------------------------------


def blade_from_indices(indices: Iterable[int]) -> Tuple[int, int]:
    """Canonicalize an index list into (bitmask, sign).

    The sign is the parity of the permutation sorting the list; duplicate
    indices give sign 0 (the blade vanishes).
    """
    idx = list(indices)
    mask = 0
    sign = 1
    for i in idx:
        if i < 1:
            raise ValueError(f"blade index {i} out of range")
        bit = 1 << (i - 1)
        if mask & bit:
            return 0, 0
        # each already-present index larger than i contributes a transposition
        sign *= -1 if ((mask >> i).bit_count() % 2) else 1
        mask |= bit
    return mask, sign


def blade_indices(mask: int) -> Tuple[int, ...]:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def blade_degree(mask: int) -> int:
    return mask.bit_count()


def wedge_sign(a: int, b: int) -> int:
    """Sign of e_A ^ e_B relative to e_{A union B}; 0 if they overlap."""
    if a & b:
        return 0
    # inversions: pairs (i in A, j in B) with j < i
    total = 0
    rest = a
    while rest:
        low = rest & -rest
        total += (b & (low - 1)).bit_count()
        rest ^= low
    return -1 if total % 2 else 1


def _contract_blade(vblade: int, fblade: int) -> Tuple[int, int]:
    """Contract a form blade by a polyvector blade.

    Convention: i_{X ^ Y} = i_Y . i_X, so contractions apply in ascending
    index order of the polyvector blade.  Returns (resulting blade, sign);
    sign 0 when the polyvector blade is not contained in the form blade.
    """
    if vblade & ~fblade:
        return 0, 0
    sign = 1
    rest = vblade
    cur = fblade
    while rest:
        low = rest & -rest
        # position of the contracted index within the current blade
        below = (cur & (low - 1)).bit_count()
        if below % 2:
            sign = -sign
        cur ^= low
        rest ^= low
    return cur, sign


# ---------------------------------------------------------------------------
# sparse graded elements
# ---------------------------------------------------------------------------


class _SparseGraded:
    __slots__ = ("dim", "coeffs")
    _symbol = "?"

    def __init__(self, dim: int, coeffs: Optional[Mapping[int, ScalarLike]] = None):
        if dim < 0:
            raise ValueError("dimension must be nonnegative")
        clean = {}
        if coeffs:
            top = 1 << dim
            for mask, c in coeffs.items():
                if mask >= top:
                    raise ValueError(f"blade {blade_indices(mask)} exceeds dimension {dim}")
                c = _lift(c)
                if not _is_zero(c):
                    clean[mask] = c
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "coeffs", clean)

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    # -- constructors

    @classmethod
    def zero(cls, dim: int):
        return cls(dim, {})

    @classmethod
    def unit(cls, dim: int):
        return cls(dim, {0: ONE})

    @classmethod
    def term(cls, dim: int, indices: Sequence[int], coeff: ScalarLike = 1):
        mask, sign = blade_from_indices(indices)
        if sign == 0:
            return cls(dim, {})
        return cls(dim, {mask: _lift(coeff) * sign})

    @classmethod
    def from_terms(cls, dim: int, terms: Iterable[Tuple[Sequence[int], ScalarLike]]):
        total = cls.zero(dim)
        for indices, c in terms:
            total = total + cls.term(dim, indices, c)
        return total

    # -- structure

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return not self.is_zero()

    def degrees(self) -> Tuple[int, ...]:
        return tuple(sorted({blade_degree(m) for m in self.coeffs}))

    def lowest_degree(self) -> int:
        if not self.coeffs:
            raise ValueError("zero element has no degree")
        return min(blade_degree(m) for m in self.coeffs)

    def grade(self, k: int):
        return type(self)(
            self.dim, {m: c for m, c in self.coeffs.items() if blade_degree(m) == k}
        )

    def is_homogeneous(self, k: Optional[int] = None) -> bool:
        ds = self.degrees()
        if k is None:
            return len(ds) <= 1
        return ds == () or ds == (k,)

    def coefficient(self, indices: Sequence[int]) -> Scalar:
        mask, sign = blade_from_indices(indices)
        if sign == 0:
            return ZERO
        c = self.coeffs.get(mask)
        if c is None:
            return ZERO
        return c * sign if sign != 1 else c

    # -- linear operations

    def _check_same(self, other):
        if type(other) is not type(self):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        if other.dim != self.dim:
            raise ValueError("ambient dimension mismatch")

    def __add__(self, other):
        self._check_same(other)
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            s = out.get(m)
            s = c if s is None else s + c
            if _is_zero(s):
                out.pop(m, None)
            else:
                out[m] = s
        return type(self)(self.dim, out)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return type(self)(self.dim, {m: -c for m, c in self.coeffs.items()})

    def __mul__(self, scalar: ScalarLike):
        if isinstance(scalar, _SparseGraded):
            return NotImplemented
        c0 = _lift(scalar)
        return type(self)(self.dim, {m: c * c0 for m, c in self.coeffs.items()})

    __rmul__ = __mul__

    def __truediv__(self, scalar: ScalarLike):
        c0 = _lift(scalar)
        return type(self)(self.dim, {m: c / c0 for m, c in self.coeffs.items()})

    def __xor__(self, other):
        """Wedge product (same kind, same dimension)."""
        self._check_same(other)
        out: dict = {}
        for m1, c1 in self.coeffs.items():
            for m2, c2 in other.coeffs.items():
                s = wedge_sign(m1, m2)
                if s == 0:
                    continue
                m = m1 | m2
                add = c1 * c2 if s == 1 else -(c1 * c2)
                cur = out.get(m)
                cur = add if cur is None else cur + add
                if _is_zero(cur):
                    out.pop(m, None)
                else:
                    out[m] = cur
        return type(self)(self.dim, out)

    def wedge(self, other):
        return self ^ other

    def conjugate(self):
        return type(self)(self.dim, {m: c.conjugate() for m, c in self.coeffs.items()})

    # -- comparison

    def __eq__(self, other) -> bool:
        if type(other) is not type(self):
            return NotImplemented
        return self.dim == other.dim and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((type(self).__name__, self.dim, tuple(sorted(self.coeffs.items(), key=lambda kv: kv[0]))))

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        bits = []
        for m in sorted(self.coeffs, key=lambda m: (blade_degree(m), m)):
            c = self.coeffs[m]
            name = self._symbol + "".join(str(i) for i in blade_indices(m)) if m else "1"
            cs = str(c)
            if cs == "1" and m:
                bits.append(name)
            elif cs == "-1" and m:
                bits.append(f"-{name}")
            elif m:
                if ("+" in cs[1:]) or ("-" in cs[1:]):
                    cs = f"({cs})"
                bits.append(f"{cs}*{name}")
            else:
                bits.append(f"({cs})" if ("+" in cs[1:] or "-" in cs[1:]) else cs)
        out = " + ".join(bits)
        return out.replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"<{type(self).__name__} dim={self.dim} {self}>"


class Form(_SparseGraded):
    """Complex exterior form on the dual basis e_1..e_n."""

    __slots__ = ()
    _symbol = "e"


class Polyvector(_SparseGraded):
    """Complex polyvector on the vector basis (dual to the e_i)."""

    __slots__ = ()
    _symbol = "@"


def basis_one_form(dim: int, i: int) -> Form:
    return Form.term(dim, (i,))

def basis_vector(dim: int, i: int) -> Polyvector:
    return Polyvector.term(dim, (i,))


# ---------------------------------------------------------------------------
# generalized sections of T + T*
# ---------------------------------------------------------------------------


class GeneralizedSection:
    """X + xi with X a degree-<=1 polyvector and xi a degree-<=1 form."""

    __slots__ = ("vec", "cov")

    def __init__(self, vec: Optional[Polyvector] = None, cov: Optional[Form] = None):
        if vec is None and cov is None:
            raise ValueError("need at least one of vec, cov")
        dim = vec.dim if vec is not None else cov.dim
        vec = vec if vec is not None else Polyvector.zero(dim)
        cov = cov if cov is not None else Form.zero(dim)
        if vec.dim != cov.dim:
            raise ValueError("ambient dimension mismatch")
        for part in (vec, cov):
            if part and max(part.degrees()) > 1:
                raise ValueError("section parts must have degree <= 1")
        object.__setattr__(self, "vec", vec)
        object.__setattr__(self, "cov", cov)

    def __setattr__(self, name, value):
        raise AttributeError("GeneralizedSection is immutable")

    @property
    def dim(self) -> int:
        return self.vec.dim

    def __add__(self, other: "GeneralizedSection"):
        return GeneralizedSection(self.vec + other.vec, self.cov + other.cov)

    def __sub__(self, other: "GeneralizedSection"):
        return GeneralizedSection(self.vec - other.vec, self.cov - other.cov)

    def __neg__(self):
        return GeneralizedSection(-self.vec, -self.cov)

    def __mul__(self, scalar: ScalarLike):
        return GeneralizedSection(self.vec * scalar, self.cov * scalar)

    __rmul__ = __mul__

    def conjugate(self):
        return GeneralizedSection(self.vec.conjugate(), self.cov.conjugate())

    def is_zero(self) -> bool:
        return self.vec.is_zero() and self.cov.is_zero()

    def __eq__(self, other) -> bool:
        if not isinstance(other, GeneralizedSection):
            return NotImplemented
        return self.vec == other.vec and self.cov == other.cov

    def __hash__(self):
        return hash((self.vec, self.cov))

    def __str__(self):
        return f"{self.vec} + {self.cov}"

    def __repr__(self):
        return f"<GeneralizedSection {self}>"


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------


def wedge(a: Form, b: Form) -> Form:
    return a ^ b


def interior(v: Polyvector, a: Form) -> Form:
    """Interior product i_v a, extended bilinearly from blades.

    For degree-1 v this is the usual antiderivation with i_{x_j} e_j = 1;
    a decomposable blade X ^ Y contracts as i_Y . i_X.
    """
    if v.dim != a.dim:
        raise ValueError("ambient dimension mismatch")
    out = Form.zero(a.dim)
    acc: dict = {}
    for vm, vc in v.coeffs.items():
        for fm, fc in a.coeffs.items():
            res, sign = _contract_blade(vm, fm)
            if sign == 0:
                continue
            add = vc * fc if sign == 1 else -(vc * fc)
            cur = acc.get(res)
            cur = add if cur is None else cur + add
            if _is_zero(cur):
                acc.pop(res, None)
            else:
                acc[res] = cur
    return Form(a.dim, acc)


def clifford_act(s: GeneralizedSection, a: Form) -> Form:
    """(X + xi) . a = i_X a + xi ^ a."""
    if s.dim != a.dim:
        raise ValueError("ambient dimension mismatch")
    return interior(s.vec, a) + (s.cov ^ a)


def inner_product(s: GeneralizedSection, t: GeneralizedSection) -> Scalar:
    """<X+xi, Y+eta> = (xi(Y) + eta(X)) / 2."""
    if s.dim != t.dim:
        raise ValueError("ambient dimension mismatch")
    total = ZERO
    for m, c in s.cov.coeffs.items():
        other = t.vec.coeffs.get(m)
        if other is not None:
            total = total + c * other
    for m, c in t.cov.coeffs.items():
        other = s.vec.coeffs.get(m)
        if other is not None:
            total = total + c * other
    return total / GaussianRational(2)


def mukai_pair(a: Form, b: Form) -> Scalar:
    """Coefficient of the top blade in sigma(a) ^ b.

    sigma negates the grade-k part by (-1)^(k(k-1)/2).  Requires even
    ambient dimension (spinor pairing on a 2n-dimensional space).
    """
    if a.dim != b.dim:
        raise ValueError("ambient dimension mismatch")
    if a.dim % 2:
        raise ValueError("Mukai pairing needs even ambient dimension")
    top = (1 << a.dim) - 1
    total = ZERO
    for m1, c1 in a.coeffs.items():
        m2 = top ^ m1
        c2 = b.coeffs.get(m2)
        if c2 is None:
            continue
        k = blade_degree(m1)
        sigma = -1 if (k * (k - 1) // 2) % 2 else 1
        s = wedge_sign(m1, m2) * sigma
        total = total + (c1 * c2 if s == 1 else -(c1 * c2))
    return total


def wedge_exp(a: "_SparseGraded"):
    """Finite wedge exponential 1 + a + a^2/2! + ...

    Valid for elements with all degrees even and positive (the grade-0
    part must be absent); such elements are nilpotent under wedge.
    """
    for k in a.degrees():
        if k % 2 or k == 0:
            raise ValueError("wedge exponential needs even positive degrees")
    total = type(a).unit(a.dim)
    power = type(a).unit(a.dim)
    k = 1
    while True:
        power = power ^ a
        if power.is_zero():
            break
        total = total + power / GaussianRational(Fraction(factorial(k)))
        k += 1
    return total
