"""Nilpotent Lie algebra structure via its Chevalley-Eilenberg differential.

An algebra is specified by the 2-forms d(e_1), ..., d(e_n).  Construction
validates the Malcev staircase (d(e_i) uses only e_1..e_{i-1}) and d.d = 0
on generators, which is equivalent to the Jacobi identity.

Sign conventions, pinned once and asserted by the test suite together:

* d extends the generator images as a degree +1 antiderivation;
* d(alpha)(X, Y) = -alpha([X, Y]) on invariant 1-forms, so a structure
  line de_k = e_ij gives [x_i, x_j] = -x_k;
* 2-forms evaluate by the determinant convention, e_ij(x_i, x_j) = 1;
* constants are genuinely constant: d of a degree-0 form is 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Tuple

from .exterior import (
    Form,
    GeneralizedSection,
    Polyvector,
    blade_indices,
    interior,
    wedge_sign,
)
from .linalg import in_span, span_reduce, degree_blades, columns_matrix, to_vector
from .scalars import GaussianRational, ZERO, nullspace


class AlgebraValidationError(ValueError):
    """Input fails the Malcev staircase or the Jacobi identity."""


class NilAlgebra:
    """Nilpotent Lie algebra of dimension n, given by d_gen[k] = d(e_{k+1})."""

    __slots__ = ("dim", "d_gen", "_filtration")

    def __init__(self, dim: int, d_gen: Sequence[Form]):
        if len(d_gen) != dim:
            raise AlgebraValidationError(f"need {dim} generator images, got {len(d_gen)}")
        for k, w in enumerate(d_gen):
            if w.dim != dim:
                raise AlgebraValidationError(f"d(e{k+1}) lives in dimension {w.dim} != {dim}")
            if w and w.degrees() != (2,):
                raise AlgebraValidationError(f"d(e{k+1}) must be a pure 2-form")
            below = (1 << k) - 1
            for mask in w.coeffs:
                if mask & ~below:
                    raise AlgebraValidationError(
                        f"Malcev violation: d(e{k+1}) uses e{max(blade_indices(mask))}"
                    )
            for c in w.coeffs.values():
                if not isinstance(c, GaussianRational):
                    raise AlgebraValidationError("structure constants must be Gaussian rational")
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "d_gen", tuple(d_gen))
        object.__setattr__(self, "_filtration", None)
        for k in range(dim):
            dd = self.d(d_gen[k])
            if not dd.is_zero():
                raise AlgebraValidationError(f"d^2(e{k+1}) = {dd} != 0 (Jacobi fails)")

    def __setattr__(self, name, value):
        raise AttributeError("NilAlgebra is immutable")

    def __eq__(self, other):
        if not isinstance(other, NilAlgebra):
            return NotImplemented
        return self.dim == other.dim and self.d_gen == other.d_gen

    def __hash__(self):
        return hash((self.dim, self.d_gen))

    def __repr__(self):
        return f"<NilAlgebra dim={self.dim} d={[str(w) for w in self.d_gen]}>"

    # -- Chevalley-Eilenberg differential

    def d(self, a: Form) -> Form:
        """Degree +1 antiderivation extending the generator images."""
        if a.dim != self.dim:
            raise ValueError("ambient dimension mismatch")
        acc: dict = {}
        for mask, c in a.coeffs.items():
            for p, i in enumerate(blade_indices(mask)):
                dei = self.d_gen[i - 1]
                if dei.is_zero():
                    continue
                rest = mask ^ (1 << (i - 1))
                base = c if p % 2 == 0 else -c
                for m2, c2 in dei.coeffs.items():
                    s = wedge_sign(m2, rest)
                    if s == 0:
                        continue
                    m = m2 | rest
                    add = base * c2 if s == 1 else -(base * c2)
                    cur = acc.get(m)
                    cur = add if cur is None else cur + add
                    if cur == 0:
                        acc.pop(m, None)
                    else:
                        acc[m] = cur
        return Form(self.dim, acc)

    # -- Lie bracket and Cartan calculus

    def lie_bracket(self, x: Polyvector, y: Polyvector) -> Polyvector:
        """[x, y] for degree-1 polyvectors; [x_i, x_j] = -sum c^k_ij x_k."""
        for v in (x, y):
            if v.dim != self.dim:
                raise ValueError("ambient dimension mismatch")
            if v and v.degrees() != (1,):
                raise ValueError("lie_bracket expects degree-1 polyvectors")
        out: dict = {}
        for k in range(self.dim):
            val = -_eval_two_form(self.d_gen[k], x, y)
            if val != 0:
                out[1 << k] = val
        return Polyvector(self.dim, out)

    def lie_derivative(self, x: Polyvector, a: Form) -> Form:
        """Cartan formula L_x = i_x d + d i_x (d kills constants)."""
        if x and x.degrees() != (1,):
            raise ValueError("lie_derivative expects a degree-1 polyvector")
        return interior(x, self.d(a)) + self.d(interior(x, a))

    def courant_bracket(self, s: GeneralizedSection, t: GeneralizedSection) -> GeneralizedSection:
        """[X+xi, Y+eta] = [X,Y] + L_X eta - L_Y xi - d(i_X eta - i_Y xi)/2.

        For invariant sections the last term is d of a constant, hence zero;
        the full formula is evaluated regardless.
        """
        if s.dim != self.dim or t.dim != self.dim:
            raise ValueError("ambient dimension mismatch")
        vec = self.lie_bracket(s.vec, t.vec)
        cov = self.lie_derivative(s.vec, t.cov) - self.lie_derivative(t.vec, s.cov)
        last = self.d(interior(s.vec, t.cov) - interior(t.vec, s.cov)) / GaussianRational(2)
        return GeneralizedSection(vec, cov - last)

    # -- filtration and nilpotent degree

    def filtration(self) -> "Filtration":
        """Ascending filtration V_i = {v : dv in wedge^2 V_{i-1}}, V_0 = 0."""
        if self._filtration is not None:
            return self._filtration
        n = self.dim
        gens = [Form.term(n, (i,)) for i in range(1, n + 1)]
        spaces = [()]
        prev: Tuple[Form, ...] = ()
        while True:
            wedges = []
            for a in range(len(prev)):
                for b in range(a + 1, len(prev)):
                    w = prev[a] ^ prev[b]
                    if not w.is_zero():
                        wedges.append(w)
            # solve d(sum x_k e_k) = sum y_j w_j  over all 2-blades
            blades2 = degree_blades(n, 2)
            cols = [self.d(g) for g in gens] + [-w for w in wedges]
            matrix = columns_matrix(cols, blades2)
            basis = []
            for vec in nullspace(matrix, ncols=len(cols)):
                v = Form(n, {1 << k: vec[k] for k in range(n)})
                if not v.is_zero():
                    basis.append(v)
            cur = span_reduce(basis)
            if len(cur) == len(prev):
                raise AlgebraValidationError("filtration stalled before exhausting the dual")
            spaces.append(cur)
            prev = cur
            if len(cur) == n:
                break
        filt = Filtration(spaces=tuple(spaces), nil_index=len(spaces) - 1)
        object.__setattr__(self, "_filtration", filt)
        return filt

    def nil_index(self) -> int:
        return self.filtration().nil_index


@dataclass(frozen=True)
class Filtration:
    """V_0 = 0 < V_1 < ... < V_s = g*, with nil_index s."""

    spaces: tuple  # spaces[i] = canonical basis (tuple of 1-forms) of V_i
    nil_index: int

    def dims(self) -> Tuple[int, ...]:
        return tuple(len(b) for b in self.spaces[1:])

    def space(self, i: int) -> tuple:
        """Basis of V_i; saturates at V_s for i > s."""
        if i < 0:
            raise ValueError("filtration index must be >= 0")
        return self.spaces[min(i, self.nil_index)]


def nilpotent_degree(a, filtration: Filtration) -> int:
    """Smallest i with a in wedge^p V_i, for homogeneous nonzero a of degree p."""
    if a.is_zero():
        raise ValueError("nilpotent degree of the zero form is undefined")
    if not a.is_homogeneous():
        raise ValueError("nilpotent degree needs a homogeneous form")
    p = a.lowest_degree()
    if p == 0:
        return 0
    from itertools import combinations

    for i in range(1, filtration.nil_index + 1):
        basis = filtration.spaces[i]
        if len(basis) < p:
            continue
        wedges = []
        for combo in combinations(basis, p):
            w = combo[0]
            for f in combo[1:]:
                w = w ^ f
            if not w.is_zero():
                wedges.append(w)
        if in_span(a, wedges) is not None:
            return i
    raise ValueError("form does not live in the filtration (wrong algebra?)")


def _eval_two_form(w: Form, x: Polyvector, y: Polyvector) -> GaussianRational:
    """Determinant-convention evaluation: e_ij(x, y) = x_i y_j - x_j y_i."""
    total = ZERO
    for mask, c in w.coeffs.items():
        i_bit = mask & -mask
        j_bit = mask ^ i_bit
        xi = x.coeffs.get(i_bit)
        yj = y.coeffs.get(j_bit)
        xj = x.coeffs.get(j_bit)
        yi = y.coeffs.get(i_bit)
        term = ZERO
        if xi is not None and yj is not None:
            term = term + xi * yj
        if xj is not None and yi is not None:
            term = term - xj * yi
        if term != 0:
            total = total + c * term
    return total
