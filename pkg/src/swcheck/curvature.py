"""Webster curvature algebra on the contact 5-frame.

An admissible Webster-Ricci tensor is stored as the REAL symmetric matrix R;
the imaginary-valued tensor appearing in the identity chain is i*R.  Keeping
R real makes the Ricci-form bookkeeping literal: the form and the scalar
trace stay real and the self-dual projection identity reads

    rho_plus(R) = -(s/4) deta,      s = R11 + R22 + R33 + R44.

Admissibility, i.e. compatibility with the almost complex structure J and
the Reeb direction, pins the constraints

    R_i5 = 0,  R12 = R34 = 0,  R11 = R22,  R33 = R44,
    R14 = -R23,  R24 = R13,

leaving the four free parameters (R11, R33, R13, R14).  These are exactly
the symmetric J-commuting horizontal endomorphisms.

Two conventions exist for the Ricci form, differing in where J sits:
``rho(X, Y) = g(X, J Ric Y)`` (matrix J R) and ``rho(X, Y) = Ric(X, J Y)``
(matrix R J).  They agree whenever J and R commute, which admissibility
guarantees; the first is the default because its expansion is the one the
self-dual projection identity is stated for.  Both are exposed behind the
``convention`` flag.

The Bianchi correction B(X, Y) built from the torsion vanishes identically
for every SELF-ADJOINT torsion; J-anticommutation is not needed for that
cancellation (it enters the torsion's own structure theory instead).  The
negative control for B therefore has to break self-adjointness.

Samplers take explicit seeds and all functions are pure.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .extalg import INDEX_TUPLES, KForm, deta, sd_project

#: Positions of the purely horizontal index pairs in the degree-2 layout.
_HORIZONTAL_PAIR_POSITIONS = tuple(
    (pos, idx) for pos, idx in enumerate(INDEX_TUPLES[2]) if 5 not in idx
)

#: Almost complex structure on the frame: J e1 = e2, J e3 = e4, J Reeb = 0.
J_FRAME = np.array(
    [
        [0.0, -1.0, 0.0, 0.0, 0.0],
        [1.0, 0.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, -1.0, 0.0],
        [0.0, 0.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 0.0, 0.0],
    ]
)
J_FRAME.flags.writeable = False

#: J e_a for the four horizontal frame vectors.
_J_COLUMNS = tuple(J_FRAME @ np.eye(5)[a] for a in range(4))


def deta_pair(x, y) -> float:
    """deta(X, Y) = (x1 y2 - x2 y1) + (x3 y4 - x4 y3) on frame coordinates."""
    return float(
        x[0] * y[1] - x[1] * y[0] + x[2] * y[3] - x[3] * y[2]
    )


# -- admissible Ricci data ---------------------------------------------------

def ricci_violations(ric: np.ndarray, tol: float = 0.0) -> list[str]:
    """Names of the admissibility constraints the matrix violates."""
    r = np.asarray(ric, dtype=float)
    bad = []

    def chk(name: str, value: float):
        if abs(value) > tol:
            bad.append(f"constraint {name} violated (residual {value:.3g})")

    chk("symmetric", float(np.max(np.abs(r - r.T))))
    for i in range(5):
        chk(f"R{i + 1}5=0", r[i, 4])
    chk("R12=0", r[0, 1])
    chk("R34=0", r[2, 3])
    chk("R11=R22", r[0, 0] - r[1, 1])
    chk("R33=R44", r[2, 2] - r[3, 3])
    chk("R14=-R23", r[0, 3] + r[1, 2])
    chk("R24=R13", r[1, 3] - r[0, 2])
    return bad


@dataclass(frozen=True, eq=False)
class CurvatureData:
    """Webster-Ricci matrix R (real 5x5), with Ric = i R.

    ``s`` is the horizontal trace and ``rho_h``/``rho_plus`` the derived
    Ricci form and its self-dual part.  Construction does not enforce
    admissibility (negative controls need broken inputs); operations that
    require it validate via :func:`ricci_violations`.
    """

    ric: np.ndarray

    def __post_init__(self):
        r = np.asarray(self.ric, dtype=float).copy()
        if r.shape != (5, 5):
            raise ValueError(f"ric must be 5x5, got {r.shape}")
        r.flags.writeable = False
        object.__setattr__(self, "ric", r)

    @property
    def s(self) -> float:
        """Webster scalar curvature, the horizontal trace of R."""
        return float(np.trace(self.ric[:4, :4]))

    @property
    def rho_h(self) -> KForm:
        return ricci_form(self)

    @property
    def rho_plus(self) -> KForm:
        return rho_plus(self)

    def violations(self) -> list[str]:
        return ricci_violations(self.ric)


def admissible_ricci(r11: float, r33: float, r13: float, r14: float) -> CurvatureData:
    """Admissible Webster-Ricci matrix from its four free parameters."""
    r = np.zeros((5, 5))
    r[0, 0] = r[1, 1] = r11
    r[2, 2] = r[3, 3] = r33
    r[0, 2] = r[2, 0] = r13
    r[1, 3] = r[3, 1] = r13  # R24 = R13
    r[0, 3] = r[3, 0] = r14
    r[1, 2] = r[2, 1] = -r14  # R14 = -R23
    return CurvatureData(r)


def random_admissible_ricci(seed: int, scale: float = 1.0) -> CurvatureData:
    """Deterministic admissible sample, free parameters uniform in [-scale, scale]."""
    if scale <= 0:
        raise ValueError("scale must be positive")
    rng = np.random.default_rng(seed)
    r11, r33, r13, r14 = rng.uniform(-scale, scale, size=4)
    return CurvatureData(admissible_ricci(r11, r33, r13, r14).ric)


def _require_admissible(c: CurvatureData):
    bad = c.violations()
    if bad:
        raise ValueError("inadmissible Webster-Ricci tensor: " + "; ".join(bad))


def ricci_form(c: CurvatureData, convention: str = "proof", check: bool = True) -> KForm:
    """Ricci 2-form of an admissible Webster-Ricci matrix.

    ``proof`` uses rho(e_i, e_j) = g(e_i, J Ric e_j) = (J R)_ij, the
    convention whose expansion

        rho = -R11 e1^e2 - R33 e3^e4 - R24 (e1^e4 - e2^e3)
              - R23 (e1^e3 + e2^e4)

    feeds the self-dual projection identity.  ``endomorphism`` uses
    rho(e_i, e_j) = Ric(e_i, J e_j) = (R J)_ij; the two agree exactly on
    admissible data because J and R commute there.
    """
    if check:
        _require_admissible(c)
    if convention == "proof":
        m = J_FRAME @ c.ric
    elif convention == "endomorphism":
        m = c.ric @ J_FRAME
    else:
        raise ValueError(f"unknown convention {convention!r}")
    coeffs = np.zeros(len(INDEX_TUPLES[2]), dtype=complex)
    for pos, (i, j) in _HORIZONTAL_PAIR_POSITIONS:
        coeffs[pos] = m[i - 1, j - 1]
    return KForm(2, coeffs)


def rho_plus(c: CurvatureData, check: bool = True) -> KForm:
    """Self-dual part of the Ricci form; equals -(s/4) deta on admissible data."""
    return sd_project(ricci_form(c, check=check)).plus


# -- torsion -----------------------------------------------------------------


def torsion_violations(tau: np.ndarray, tol: float = 0.0) -> list[str]:
    t = np.asarray(tau, dtype=float)
    bad = []
    if np.max(np.abs(t - t.T)) > tol:
        bad.append("torsion is not self-adjoint")
    if np.max(np.abs(t @ J_FRAME + J_FRAME @ t)) > tol:
        bad.append("torsion does not anticommute with J")
    if np.max(np.abs(t[:, 4])) > tol or np.max(np.abs(t[4, :])) > tol:
        bad.append("torsion does not annihilate the Reeb direction")
    return bad


@dataclass(frozen=True, eq=False)
class TorsionEndomorphism:
    """Generalized torsion endomorphism in frame coordinates."""

    tau: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.tau, dtype=float).copy()
        if t.shape != (5, 5):
            raise ValueError(f"tau must be 5x5, got {t.shape}")
        t.flags.writeable = False
        object.__setattr__(self, "tau", t)

    def violations(self) -> list[str]:
        return torsion_violations(self.tau)


def admissible_torsion(params) -> TorsionEndomorphism:
    """Admissible torsion from 6 coordinates in the J-adapted span.

    In the frame adapted to J, the symmetric endomorphisms of the horizontal
    space anticommuting with the block rotation are spanned by 2x2 blocks of
    trace-free symmetric matrices; the six parameters fill the A, B, C
    blocks of [[A, B], [B^T, C]].
    """
    a1, a2, b1, b2, c1, c2 = (float(p) for p in params)

    def tf(u, v):
        return np.array([[u, v], [v, -u]])

    t = np.zeros((5, 5))
    t[:2, :2] = tf(a1, a2)
    t[:2, 2:4] = tf(b1, b2)
    t[2:4, :2] = tf(b1, b2).T
    t[2:4, 2:4] = tf(c1, c2)
    return TorsionEndomorphism(t)


def random_admissible_torsion(seed: int, scale: float = 1.0) -> TorsionEndomorphism:
    if scale <= 0:
        raise ValueError("scale must be positive")
    rng = np.random.default_rng(seed)
    return admissible_torsion(rng.uniform(-scale, scale, size=6))


def bianchi_b(tau: TorsionEndomorphism, x, y) -> complex:
    """Torsion correction B(X, Y) from the contracted first Bianchi identity.

    B_a(X, Y) = deta(X, Y) tau(e_a) + deta(e_a, X) tau(Y) + deta(Y, e_a) tau(X)
    and B(X, Y) = (i/2) sum_a g(B_a(X, Y), J e_a) over the horizontal frame.
    Antisymmetric in (X, Y); vanishes for every self-adjoint torsion.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if abs(x[4]) != 0 or abs(y[4]) != 0:
        raise ValueError("B(X, Y) is defined for horizontal arguments")
    t = tau.tau
    dxy = deta_pair(x, y)
    tx, ty = t @ x, t @ y
    de_x = (x[1], -x[0], x[3], -x[2])  # deta(e_a, X)
    dy_e = (-y[1], y[0], -y[3], y[2])  # deta(Y, e_a)
    total = 0.0
    for a in range(4):
        ba = dxy * t[:, a] + de_x[a] * ty + dy_e[a] * tx
        total += float(np.dot(ba, _J_COLUMNS[a]))
    return 0.5j * total


def ric_identity_check(c: CurvatureData, tau: TorsionEndomorphism | None = None) -> float:
    """Residual of the reconstruction Ric = i rho_h over horizontal pairs.

    Reconstructs the 2-form part of i R through the endomorphism-convention
    Ricci form plus the Bianchi correction B, and compares with the direct
    (proof-convention) Ricci form.  On admissible data the two J-placements
    agree and B vanishes, so the residual is zero; broken symmetry
    constraints make J and R stop commuting and the residual turns on.
    """
    if tau is None:
        tau = TorsionEndomorphism(np.zeros((5, 5)))
    direct = ricci_form(c, convention="proof", check=False)
    recon = ricci_form(c, convention="endomorphism", check=False)
    eye5 = np.eye(5)
    worst = 0.0
    for i in range(4):
        for j in range(i + 1, 4):
            b = bianchi_b(tau, eye5[i], eye5[j])
            lhs = 1j * recon.coefficient(i + 1, j + 1) + b
            rhs = 1j * direct.coefficient(i + 1, j + 1)
            worst = max(worst, abs(lhs - rhs))
    return worst


# -- (4,0) curvature tensor ---------------------------------------------------

_SQ2 = np.sqrt(2.0)

#: Components of the unitary T10 frame Z_a = (e_{2a-1} - i e_{2a}) / sqrt(2)
#: and its conjugates in the real frame; order (Z1, Z2, Zbar1, Zbar2, Reeb).
COMPLEX_FRAME = np.array(
    [
        [1 / _SQ2, -1j / _SQ2, 0, 0, 0],
        [0, 0, 1 / _SQ2, -1j / _SQ2, 0],
        [1 / _SQ2, 1j / _SQ2, 0, 0, 0],
        [0, 0, 1 / _SQ2, 1j / _SQ2, 0],
        [0, 0, 0, 0, 1],
    ],
    dtype=complex,
)
COMPLEX_FRAME.flags.writeable = False

#: Real frame vectors expanded in the complex frame: row i gives e_{i+1}
#: as a combination of (Z1, Z2, Zbar1, Zbar2, Reeb).
_REAL_IN_COMPLEX = np.linalg.inv(COMPLEX_FRAME)
_REAL_IN_COMPLEX.flags.writeable = False

_CONJ_INDEX = (2, 3, 0, 1, 4)


@dataclass(frozen=True, eq=False)
class CurvatureTensor4:
    """(4,0) curvature tensor by its real-frame components.

    ``entries[i, j, k, l]`` holds the value on (e_{i+1}, e_{j+1}, e_{k+1},
    e_{l+1}); evaluation on complex vectors extends multilinearly.  The
    conjugation symmetry of the tensor is equivalent to these components
    being real, but complex storage is kept so that broken inputs can be
    represented.
    """

    entries: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.entries, dtype=complex).copy()
        if t.shape != (5, 5, 5, 5):
            raise ValueError(f"entries must be 5x5x5x5, got {t.shape}")
        t.flags.writeable = False
        object.__setattr__(self, "entries", t)

    def evaluate(self, x, y, z, v) -> complex:
        """Multilinear evaluation on four frame-coordinate vectors."""
        return complex(
            np.einsum(
                "ijkl,i,j,k,l->",
                self.entries,
                np.asarray(x, dtype=complex),
                np.asarray(y, dtype=complex),
                np.asarray(z, dtype=complex),
                np.asarray(v, dtype=complex),
            )
        )

    def complex_components(self) -> np.ndarray:
        """Components over the frame (Z1, Z2, Zbar1, Zbar2, Reeb)."""
        w = COMPLEX_FRAME
        return np.einsum("ai,bj,ck,dl,ijkl->abcd", w, w, w, w, self.entries)

    def ricci_trace(self) -> np.ndarray:
        """5x5 matrix of sum_a R(e_i, e_j, Z_a, Zbar_a); equals i rho_h."""
        out = np.zeros((5, 5), dtype=complex)
        for i in range(5):
            for j in range(5):
                ei = np.zeros(5)
                ej = np.zeros(5)
                ei[i] = 1.0
                ej[j] = 1.0
                for a in range(2):
                    out[i, j] += self.evaluate(
                        ei, ej, COMPLEX_FRAME[a], COMPLEX_FRAME[a + 2]
                    )
        return out


def curvature_tensor(c: CurvatureData, check: bool = True) -> CurvatureTensor4:
    """Synthetic (4,0) curvature tensor with prescribed Webster-Ricci data.

    Built from a Hermitian 2x2 matrix P through the symmetrized ansatz

        R(Z_a, Zbar_b, Z_c, Zbar_d) = P_ab d_cd + d_ab P_cd
                                      + P_ad d_cb + d_ad P_cb,

    extended by pair antisymmetry and conjugation, all other type components
    zero.  P is calibrated so that the Ricci trace over the unitary frame
    reproduces i rho_h exactly; the construction then satisfies all four
    curvature tensor symmetries by design.
    """
    if check:
        _require_admissible(c)
    rho = J_FRAME @ c.ric  # proof-convention Ricci form matrix, skew on H
    z = COMPLEX_FRAME
    # Target Ricci trace on (Z_a, Zbar_b): Hermitian 2x2.
    m = np.zeros((2, 2), dtype=complex)
    for a in range(2):
        for b in range(2):
            m[a, b] = 1j * (z[a] @ rho.astype(complex) @ z[b + 2])
    tr_p = np.trace(m) / 6.0
    p = (m - tr_p * np.eye(2)) / 4.0

    lam = np.zeros((2, 2, 2, 2), dtype=complex)
    eye2 = np.eye(2)
    for a in range(2):
        for b in range(2):
            for g in range(2):
                for d in range(2):
                    lam[a, b, g, d] = (
                        p[a, b] * eye2[g, d]
                        + eye2[a, b] * p[g, d]
                        + p[a, d] * eye2[g, b]
                        + eye2[a, d] * p[g, b]
                    )

    # Complex-frame component array; only mixed-type slots are populated.
    gc = np.zeros((5, 5, 5, 5), dtype=complex)
    for a in range(2):
        for b in range(2):
            for g in range(2):
                for d in range(2):
                    v = lam[a, b, g, d]
                    gc[a, b + 2, g, d + 2] = v
                    gc[a, b + 2, d + 2, g] = -v
                    gc[b + 2, a, g, d + 2] = -v
                    gc[b + 2, a, d + 2, g] = v

    r = _REAL_IN_COMPLEX
    entries = np.einsum("ia,jb,kc,ld,abcd->ijkl", r, r, r, r, gc)
    return CurvatureTensor4(entries)


def symmetry_check(t: CurvatureTensor4) -> dict[str, float]:
    """Max violation of the four curvature-tensor symmetries.

    * antisymmetry within the first and the second index pair,
    * the conjugation rule (components on conjugated arguments are the
      complex conjugates),
    * exchange of the first and third slots on T10-type arguments,
    * vanishing whenever the first two arguments both lie in T10.
    """
    e = t.entries
    r_first = float(np.max(np.abs(e + np.transpose(e, (1, 0, 2, 3)))))
    r_second = float(np.max(np.abs(e + np.transpose(e, (0, 1, 3, 2)))))

    gc = t.complex_components()
    conj_map = np.array(_CONJ_INDEX)
    gc_bar = gc[np.ix_(conj_map, conj_map, conj_map, conj_map)]
    r_conj = float(np.max(np.abs(np.conj(gc) - gc_bar)))

    r_exchange = 0.0
    for a in range(2):
        for b in range(2):
            for g in range(2):
                for d in range(2):
                    r_exchange = max(
                        r_exchange,
                        abs(gc[a, b + 2, g, d + 2] - gc[g, b + 2, a, d + 2]),
                    )

    r_t10 = float(np.max(np.abs(gc[:2, :2, :, :])))

    return {
        "pair_antisymmetry": max(r_first, r_second),
        "conjugation": r_conj,
        "t10_exchange": r_exchange,
        "t10_vanishing": r_t10,
    }
