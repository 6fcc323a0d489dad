"""Coordinate bridges between sparse graded elements and exact linear algebra.

Internal plumbing shared by the algebra, cohomology and spinor modules:
packing forms/polyvectors into coefficient vectors over a fixed blade list,
canonical (reduced echelon) bases for spans, and span-membership solves.
"""

from __future__ import annotations

from itertools import combinations
from typing import Optional, Sequence

from .exterior import _SparseGraded, blade_from_indices
from .scalars import GaussianRational, ZERO, solve_linear


def degree_blades(n: int, k: int) -> list:
    """All degree-k blade masks in lexicographic index order."""
    out = []
    for combo in combinations(range(1, n + 1), k):
        mask, _ = blade_from_indices(combo)
        out.append(mask)
    return out


def union_blades(elements: Sequence[_SparseGraded]) -> list:
    """Sorted list of every blade appearing in any of the elements."""
    seen = set()
    for el in elements:
        seen.update(el.coeffs)
    return sorted(seen)


def to_vector(el: _SparseGraded, blades: Sequence[int]) -> list:
    return [el.coeffs.get(m, ZERO) for m in blades]


def from_vector(cls, dim: int, blades: Sequence[int], vec: Sequence) -> _SparseGraded:
    return cls(dim, {m: c for m, c in zip(blades, vec)})


def columns_matrix(elements: Sequence[_SparseGraded], blades: Sequence[int]) -> list:
    """Matrix whose j-th column is the coefficient vector of elements[j]."""
    return [[el.coeffs.get(m, ZERO) for el in elements] for m in blades]


def in_span(el: _SparseGraded, basis: Sequence[_SparseGraded]) -> Optional[tuple]:
    """Coefficients expressing ``el`` in ``basis``, or None when outside the span."""
    if el.is_zero():
        return (ZERO,) * len(basis)
    if not basis:
        return None
    blades = union_blades(list(basis) + [el])
    sol = solve_linear(columns_matrix(basis, blades), to_vector(el, blades),
                       ncols=len(basis))
    if sol is None:
        return None
    return sol.particular


def span_reduce(elements: Sequence[_SparseGraded]):
    """Canonical basis (reduced row echelon form) of the span of ``elements``.

    Rows are coefficient vectors over the union blade list; pivots are
    normalized to 1 and cleared above and below, so equal subspaces yield
    equal bases.
    """
    elements = [el for el in elements if not el.is_zero()]
    if not elements:
        return ()
    cls = type(elements[0])
    dim = elements[0].dim
    blades = union_blades(elements)
    rows = [to_vector(el, blades) for el in elements]
    ncols = len(blades)
    pivots = []
    r = 0
    for c in range(ncols):
        sel = None
        for rr in range(r, len(rows)):
            if not rows[rr][c].is_zero():
                sel = rr
                break
        if sel is None:
            continue
        rows[r], rows[sel] = rows[sel], rows[r]
        inv = GaussianRational(1) / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for rr in range(len(rows)):
            if rr != r and not rows[rr][c].is_zero():
                f = rows[rr][c]
                rows[rr] = [x - f * y for x, y in zip(rows[rr], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return tuple(from_vector(cls, dim, blades, rows[k]) for k in range(r))


def spans_equal(a: Sequence[_SparseGraded], b: Sequence[_SparseGraded]) -> bool:
    return span_reduce(a) == span_reduce(b)
