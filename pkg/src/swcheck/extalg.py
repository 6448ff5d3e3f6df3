"""Exterior algebra of an oriented 5-dimensional inner product space, with the
contact splitting of 2-forms and the self-dual / anti-self-dual decomposition.

Frame convention: coframe indices 1..4 span the horizontal (contact)
directions and index 5 is the Reeb direction, so ``e(5)`` plays the role of
the contact form eta.  The orientation is fixed by

    vol = e1 ^ e2 ^ e3 ^ e4 ^ eta.

This is the unique orientation (up to even permutation) under which
deta = e1^e2 + e3^e4 is self-dual for the contact star while
e1^e4 - e2^e3 and e1^e3 + e2^e4 are anti-self-dual, which is the sign
structure every downstream curvature identity relies on.  The choice is
recorded here because none of the identities pins it any other way.

Coefficients are complex throughout (curvature forms and spinor bilinears are
imaginary valued).  Basis multi-indices are encoded as 5-bit masks and listed
in lexicographic order within each degree, so a k-form is a flat coefficient
vector of length C(5, k).  Everything in this module is a pure function on
immutable values.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, NamedTuple

import numpy as np

DIM = 5
REEB_INDEX = 5
_REEB_BIT = 1 << (REEB_INDEX - 1)

# Lexicographically ordered index tuples and bit masks, per degree.
INDEX_TUPLES: dict[int, tuple[tuple[int, ...], ...]] = {
    k: tuple(combinations(range(1, DIM + 1), k)) for k in range(DIM + 1)
}


def _mask(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << (i - 1)
    return m


MASKS: dict[int, tuple[int, ...]] = {
    k: tuple(_mask(t) for t in INDEX_TUPLES[k]) for k in range(DIM + 1)
}
_MASK_TO_POS: dict[int, tuple[int, int]] = {
    m: (k, p) for k in range(DIM + 1) for p, m in enumerate(MASKS[k])
}


def wedge_sign(mask_a: int, mask_b: int) -> int:
    """Parity sign of merging two disjoint sorted index sets.

    Counts the transpositions needed to sort the concatenation (A, B); this
    is (-1)**#{(i, j) : i in A, j in B, i > j}.
    """
    if mask_a & mask_b:
        raise ValueError("index sets overlap")
    sign = 1
    for j in range(DIM):
        if mask_b & (1 << j):
            higher = mask_a >> (j + 1)
            if bin(higher).count("1") % 2:
                sign = -sign
    return sign


@dataclass(frozen=True, eq=False)
class KForm:
    """Constant-coefficient k-form over the frame coframe e1..e4, eta.

    ``coeffs[p]`` is the coefficient of the basis form with index tuple
    ``INDEX_TUPLES[degree][p]``.  A form is horizontal when every coefficient
    whose multi-index contains the Reeb index 5 vanishes exactly.
    """

    degree: int
    coeffs: np.ndarray

    def __post_init__(self):
        if not 0 <= self.degree <= DIM:
            raise ValueError(f"degree must be in 0..{DIM}, got {self.degree}")
        c = np.asarray(self.coeffs, dtype=complex)
        n = len(INDEX_TUPLES[self.degree])
        if c.shape != (n,):
            raise ValueError(
                f"degree-{self.degree} form needs {n} coefficients, got shape {c.shape}"
            )
        c = c.copy()
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)

    # -- algebra ---------------------------------------------------------

    def __add__(self, other: "KForm") -> "KForm":
        self._same_degree(other)
        return KForm(self.degree, self.coeffs + other.coeffs)

    def __sub__(self, other: "KForm") -> "KForm":
        self._same_degree(other)
        return KForm(self.degree, self.coeffs - other.coeffs)

    def __neg__(self) -> "KForm":
        return KForm(self.degree, -self.coeffs)

    def __mul__(self, scalar) -> "KForm":
        return KForm(self.degree, self.coeffs * complex(scalar))

    __rmul__ = __mul__

    def __truediv__(self, scalar) -> "KForm":
        return KForm(self.degree, self.coeffs / complex(scalar))

    def _same_degree(self, other: "KForm"):
        if self.degree != other.degree:
            raise ValueError(f"degree mismatch: {self.degree} vs {other.degree}")

    # -- queries ---------------------------------------------------------

    def coefficient(self, *indices: int) -> complex:
        """Signed coefficient for an arbitrary-order index tuple."""
        if len(indices) != self.degree:
            raise ValueError("index count must equal the degree")
        if len(set(indices)) != len(indices):
            return 0j
        order = tuple(sorted(indices))
        sign = _permutation_sign(indices, order)
        _, pos = _MASK_TO_POS[_mask(order)]
        return sign * complex(self.coeffs[pos])

    def is_horizontal(self) -> bool:
        for pos, m in enumerate(MASKS[self.degree]):
            if m & _REEB_BIT and self.coeffs[pos] != 0:
                return False
        return True

    def norm_inf(self) -> float:
        return float(np.max(np.abs(self.coeffs))) if len(self.coeffs) else 0.0

    def evaluate(self, *vectors) -> complex:
        """Evaluate on ``degree`` frame-coordinate vectors (length 5 each)."""
        if len(vectors) != self.degree:
            raise ValueError("vector count must equal the degree")
        if self.degree == 0:
            return complex(self.coeffs[0])
        vs = [np.asarray(v, dtype=complex) for v in vectors]
        total = 0j
        for pos, idx in enumerate(INDEX_TUPLES[self.degree]):
            c = self.coeffs[pos]
            if c == 0:
                continue
            sub = np.array([[v[i - 1] for i in idx] for v in vs])
            total += c * np.linalg.det(sub)
        return total

    def __repr__(self):
        parts = []
        for pos, idx in enumerate(INDEX_TUPLES[self.degree]):
            c = self.coeffs[pos]
            if c != 0:
                name = "^".join("eta" if i == REEB_INDEX else f"e{i}" for i in idx)
                parts.append(f"({c})*{name}" if name else f"({c})")
        return f"KForm<{' + '.join(parts) if parts else '0'}>"


def _permutation_sign(seq, sorted_seq) -> int:
    seq = list(seq)
    sign = 1
    for i, target in enumerate(sorted_seq):
        j = seq.index(target, i)
        if j != i:
            seq[i], seq[j] = seq[j], seq[i]
            sign = -sign
    return sign


# -- constructors ----------------------------------------------------------


def zero_form(degree: int) -> KForm:
    return KForm(degree, np.zeros(len(INDEX_TUPLES[degree]), dtype=complex))


def basis_form(*indices: int) -> KForm:
    """The wedge of coframe vectors for a strictly increasing index tuple."""
    k = len(indices)
    if tuple(sorted(set(indices))) != tuple(indices):
        raise ValueError("indices must be strictly increasing")
    c = np.zeros(len(INDEX_TUPLES[k]), dtype=complex)
    _, pos = _MASK_TO_POS[_mask(indices)]
    c[pos] = 1
    return KForm(k, c)


def e(i: int) -> KForm:
    """Coframe 1-form e^i; e(5) is the contact form eta."""
    if not 1 <= i <= DIM:
        raise ValueError(f"coframe index must be in 1..{DIM}, got {i}")
    return basis_form(i)


def deta() -> KForm:
    """The model contact 2-form e1^e2 + e3^e4."""
    return basis_form(1, 2) + basis_form(3, 4)


def volume_form() -> KForm:
    return basis_form(1, 2, 3, 4, 5)


# -- operations ------------------------------------------------------------


def wedge(a: KForm, b: KForm) -> KForm:
    """Exterior product; graded-commutative, sign by shuffle parity."""
    k = a.degree + b.degree
    if k > DIM:
        raise ValueError(f"degree overflow: {a.degree} + {b.degree} > {DIM}")
    out = np.zeros(len(INDEX_TUPLES[k]), dtype=complex)
    masks_a, masks_b = MASKS[a.degree], MASKS[b.degree]
    for pa, ca in enumerate(a.coeffs):
        if ca == 0:
            continue
        ma = masks_a[pa]
        for pb, cb in enumerate(b.coeffs):
            if cb == 0:
                continue
            mb = masks_b[pb]
            if ma & mb:
                continue
            _, pos = _MASK_TO_POS[ma | mb]
            out[pos] += wedge_sign(ma, mb) * ca * cb
    return KForm(k, out)


_FULL_MASK = (1 << DIM) - 1


def hodge_star(a: KForm) -> KForm:
    """Hodge star for the Euclidean metric and orientation vol = e1^..^e4^eta.

    On basis forms *e_I = sign(I) e_{I^c} with e_I ^ e_{I^c} = sign(I) vol,
    so alpha ^ *alpha = |alpha|^2 vol for real alpha; extended C-linearly.
    """
    k = a.degree
    out = np.zeros(len(INDEX_TUPLES[DIM - k]), dtype=complex)
    for pos, m in enumerate(MASKS[k]):
        c = a.coeffs[pos]
        if c == 0:
            continue
        mc = _FULL_MASK ^ m
        _, cpos = _MASK_TO_POS[mc]
        out[cpos] += wedge_sign(m, mc) * c
    return KForm(DIM - k, out)


class HorizontalSplit(NamedTuple):
    horizontal: KForm
    vertical: KForm


def horizontal_split(a: KForm) -> HorizontalSplit:
    """Split a 2-form as alpha_H + eta ^ i(Reeb) alpha.

    The vertical part collects exactly the basis terms containing the Reeb
    index, so horizontal + vertical reproduces the input exactly.
    """
    if a.degree != 2:
        raise ValueError(f"horizontal_split needs a 2-form, got degree {a.degree}")
    h = np.array(a.coeffs)
    v = np.array(a.coeffs)
    for pos, m in enumerate(MASKS[2]):
        if m & _REEB_BIT:
            h[pos] = 0
        else:
            v[pos] = 0
    return HorizontalSplit(KForm(2, h), KForm(2, v))


def _require_horizontal(beta: KForm):
    if beta.degree != 2:
        raise ValueError(f"expected a 2-form, got degree {beta.degree}")
    if not beta.is_horizontal():
        raise ValueError("expected a horizontal 2-form (no eta component)")


def contact_star(beta: KForm) -> KForm:
    """Contact Hodge star on horizontal 2-forms: beta -> *(eta ^ beta).

    An involution on the 6-dimensional space of horizontal 2-forms.
    """
    _require_horizontal(beta)
    return hodge_star(wedge(e(REEB_INDEX), beta))


class SDSplit(NamedTuple):
    plus: KForm
    minus: KForm


def sd_project(beta: KForm) -> SDSplit:
    """Orthogonal decomposition into +1 / -1 eigenparts of the contact star."""
    _require_horizontal(beta)
    star = contact_star(beta)
    return SDSplit((beta + star) / 2, (beta - star) / 2)


def form_inner(a: KForm, b: KForm) -> complex:
    """Coefficient inner product, conjugate-linear in the second argument."""
    a._same_degree(b)
    return complex(np.dot(a.coeffs, b.coeffs.conj()))


# Frozen bases of the +1 and -1 eigenspaces of the contact star.
def self_dual_basis() -> tuple[KForm, KForm, KForm]:
    return (
        basis_form(1, 2) + basis_form(3, 4),
        basis_form(1, 3) - basis_form(2, 4),
        basis_form(1, 4) + basis_form(2, 3),
    )


def anti_self_dual_basis() -> tuple[KForm, KForm, KForm]:
    return (
        basis_form(1, 2) - basis_form(3, 4),
        basis_form(1, 3) + basis_form(2, 4),
        basis_form(1, 4) - basis_form(2, 3),
    )
