"""Kernel for symmetric operators on the field space R^2 (+) R^2.

A real linear operator on R^2 (+) R^2 is identified with a pair of complex
2x2 matrices (X, Y) acting on u in C^2 by  u -> X u + Y conj(u).  The
operator is symmetric exactly when X is Hermitian and Y is complex
symmetric, and every such operator also has a real 4x4 block form

    [[phi(X11) + psi(Y11), phi(X12) + psi(Y12)],
     [phi(X21) + psi(Y21), phi(X22) + psi(Y22)]]

with phi(a+bi) = a*I + b*Rperp and psi(a+bi) = [[a, b], [b, -a]].  All
kernels here are closed form on 2x2 blocks; dense numpy routines appear
only in tests as independent oracles.

Block-matrix convention: the first index of a Kronecker product A (x) B
is the field-pair slot, the second the spatial slot, i.e.
np.kron(A, B) = [[a11*B, a12*B], [a21*B, a22*B]].
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "I2", "I4", "RPERP", "T4", "Z0", "Z0H", "Z0SYM", "E11", "E22",
    "KTensor", "phi", "psi", "cof2", "inv2", "det2", "spd_sqrt_2x2",
    "kt_to_block", "kt_from_block", "kt_mul", "kt_transpose", "kt_inverse",
    "block_inverse", "block_parts", "block_from_parts", "check_block",
    "is_positive_definite", "block_is_pd", "rotate", "rotate_block",
    "jordan_star", "kt_to_json", "kt_from_json", "block_to_json",
    "block_from_json",
]

I2 = np.eye(2)
I4 = np.eye(4)
RPERP = np.array([[0.0, -1.0], [1.0, 0.0]])
E11 = np.array([[1.0, 0.0], [0.0, 0.0]])
E22 = np.array([[0.0, 0.0], [0.0, 1.0]])

# square-free vector z0 = (1, -i) and its rank-one companions
Z0_VEC = np.array([1.0, -1.0j])
Z0 = np.outer(Z0_VEC, Z0_VEC.conj())      # Hermitian, Z0^2 = 2 Z0
Z0H = Z0
Z0SYM = np.outer(Z0_VEC, Z0_VEC)          # complex symmetric, Z0SYM^2 = 0

DEFAULT_TOL = 1e-10


def phi(z):
    """Real 2x2 image of a complex scalar: phi(a+bi) = a*I + b*Rperp."""
    z = complex(z)
    return z.real * I2 + z.imag * RPERP


def psi(z):
    """Trace-free symmetric image of a complex scalar."""
    z = complex(z)
    return np.array([[z.real, z.imag], [z.imag, -z.real]])


def cof2(m):
    """Cofactor matrix of a 2x2, normalized so that m @ cof2(m).T = det(m) I."""
    return np.array([[m[1, 1], -m[1, 0]], [-m[0, 1], m[0, 0]]])


def det2(m):
    return m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]


def inv2(m):
    """Closed-form inverse of a 2x2 (real or complex)."""
    d = det2(m)
    if d == 0:
        raise np.linalg.LinAlgError("singular 2x2 matrix")
    return np.array([[m[1, 1], -m[0, 1]], [-m[1, 0], m[0, 0]]]) / d


def spd_sqrt_2x2(s):
    """Unique SPD square root of an SPD 2x2 matrix, closed form."""
    d = det2(s)
    t = s[0, 0] + s[1, 1]
    if d <= 0 or t <= 0:
        raise ValueError("matrix is not symmetric positive definite")
    r = np.sqrt(d)
    return (s + r * I2) / np.sqrt(t + 2.0 * r)


def _scale(*mats):
    return 1.0 + max(np.abs(m).max() if m.size else 0.0 for m in mats)


def _herm_pd(h, tol=0.0, scale=1.0):
    """Positive definiteness of a Hermitian 2x2 via leading minors.

    The cutoffs respect the homogeneity of each minor: tol*scale for the
    corner entry, tol*scale^2 for the determinant.
    """
    return h[0, 0].real > tol * scale and det2(h).real > tol * scale ** 2


class KTensor:
    """Operator on R^2 (+) R^2 in the (X, Y) parametrization.

    The plain constructor accepts any complex pair, so products and other
    intermediate non-symmetric operators can be represented.  Use
    :meth:`symmetric` for elements of the symmetric-operator space; it
    enforces X Hermitian and Y symmetric up to a relative tolerance,
    symmetrizing small defects and rejecting large ones.
    """

    __slots__ = ("X", "Y")

    def __init__(self, X, Y):
        self.X = np.asarray(X, dtype=complex).reshape(2, 2)
        self.Y = np.asarray(Y, dtype=complex).reshape(2, 2)

    @classmethod
    def symmetric(cls, X, Y, tol=DEFAULT_TOL):
        X = np.asarray(X, dtype=complex).reshape(2, 2)
        Y = np.asarray(Y, dtype=complex).reshape(2, 2)
        s = _scale(X, Y)
        dx = np.abs(X - X.conj().T).max()
        dy = np.abs(Y - Y.T).max()
        if dx > tol * s or dy > tol * s:
            raise ValueError(
                f"not a symmetric operator: hermiticity defect {dx:.3e}, "
                f"symmetry defect {dy:.3e} at scale {s:.3e}"
            )
        return cls((X + X.conj().T) / 2.0, (Y + Y.T) / 2.0)

    def is_symmetric_operator(self, tol=DEFAULT_TOL):
        s = _scale(self.X, self.Y)
        return (np.abs(self.X - self.X.conj().T).max() <= tol * s
                and np.abs(self.Y - self.Y.T).max() <= tol * s)

    # -- linear structure ------------------------------------------------
    def __add__(self, other):
        return KTensor(self.X + other.X, self.Y + other.Y)

    def __sub__(self, other):
        return KTensor(self.X - other.X, self.Y - other.Y)

    def __neg__(self):
        return KTensor(-self.X, -self.Y)

    def __mul__(self, c):
        return KTensor(c * self.X, c * self.Y)

    __rmul__ = __mul__

    def __matmul__(self, other):
        return kt_mul(self, other)

    def norm(self):
        return float(np.sqrt((np.abs(self.X) ** 2).sum() + (np.abs(self.Y) ** 2).sum()))

    def __repr__(self):
        return f"KTensor(X={self.X.tolist()!r}, Y={self.Y.tolist()!r})"


KT_IDENT = KTensor(I2, np.zeros((2, 2)))
KT_T = KTensor(np.array([[0.0, -1.0j], [1.0j, 0.0]]), np.zeros((2, 2)))  # equals T4


def kt_to_block(k):
    """4x4 real block form of an operator in (X, Y) coordinates."""
    B = np.empty((4, 4))
    X, Y = k.X, k.Y
    for i in range(2):
        for j in range(2):
            B[2 * i:2 * i + 2, 2 * j:2 * j + 2] = phi(X[i, j]) + psi(Y[i, j])
    return B


def kt_from_block(B):
    """Inverse of :func:`kt_to_block`; exact for any real 4x4 matrix."""
    B = np.asarray(B, dtype=float)
    X = np.empty((2, 2), complex)
    Y = np.empty((2, 2), complex)
    for i in range(2):
        for j in range(2):
            blk = B[2 * i:2 * i + 2, 2 * j:2 * j + 2]
            X[i, j] = ((blk[0, 0] + blk[1, 1]) + 1j * (blk[1, 0] - blk[0, 1])) / 2.0
            Y[i, j] = ((blk[0, 0] - blk[1, 1]) + 1j * (blk[0, 1] + blk[1, 0])) / 2.0
    return KTensor(X, Y)


T4 = kt_to_block(KT_T)        # Rperp (x) Rperp, satisfies T4 @ T4 = I4


def kt_mul(a, b):
    """Operator product; matches the 4x4 matrix product of the block forms."""
    return KTensor(a.X @ b.X + a.Y @ b.Y.conj(),
                   a.X @ b.Y + a.Y @ b.X.conj())


def kt_transpose(a):
    """Operator transpose: (X, Y) -> (X^H, Y^T)."""
    return KTensor(a.X.conj().T, a.Y.T)


def kt_inverse(a, check=True):
    """Inverse via the 2x2 Schur complements of X and of Y.

    Uses S_X = X - Y conj(X)^-1 conj(Y); falls back to the Y-sided
    complement when X is singular.  With ``check`` the residual of
    a @ a^-1 - I is bounded against a conditioning-scaled tolerance.
    """
    X, Y = a.X, a.Y
    dX = det2(X)
    dY = det2(Y)
    if abs(dX) >= abs(dY):
        if dX == 0:
            raise np.linalg.LinAlgError("singular operator")
        Xci = inv2(X.conj())
        SX = X - Y @ Xci @ Y.conj()
        inv = KTensor(inv2(SX), -inv2(SX) @ Y @ Xci)
    else:
        Yi = inv2(Y)
        SY = Y.conj() - X.conj() @ Yi @ X
        inv = KTensor(-inv2(SY) @ X.conj() @ Yi, inv2(SY))
    if check:
        r = kt_mul(a, inv) - KT_IDENT
        if max(np.abs(r.X).max(), np.abs(r.Y).max()) > 1e-8 * _scale(X, Y):
            raise np.linalg.LinAlgError("operator inverse failed residual check")
    return inv


def block_parts(B):
    B = np.asarray(B, dtype=float)
    return B[:2, :2], B[:2, 2:], B[2:, 2:]


def block_from_parts(L11, L12, L22):
    return np.block([[np.asarray(L11, float), np.asarray(L12, float)],
                     [np.asarray(L12, float).T, np.asarray(L22, float)]])


def check_block(B, tol=DEFAULT_TOL):
    """Validate and symmetrize a 4x4 block tensor."""
    B = np.asarray(B, dtype=float)
    if B.shape != (4, 4):
        raise ValueError("block tensor must be 4x4")
    d = np.abs(B - B.T).max()
    if d > tol * _scale(B):
        raise ValueError(f"block tensor asymmetry {d:.3e} exceeds tolerance")
    return (B + B.T) / 2.0


def block_inverse(B):
    """Inverse of a 4x4 in 2x2 blocks via Schur complements.

    When both diagonal blocks are invertible the symmetric two-complement
    form is used; with only one invertible diagonal block the one-sided
    elimination form applies; when neither is invertible (the matrix can
    still be regular) the dense 4x4 inverse is the fallback.
    """
    B = np.asarray(B, dtype=float)
    F11, F12, F21, F22 = B[:2, :2], B[:2, 2:], B[2:, :2], B[2:, 2:]
    d11, d22 = det2(F11), det2(F22)
    s = _scale(B)
    if abs(d11) > 1e-14 * s ** 2 and abs(d22) > 1e-14 * s ** 2:
        F11i, F22i = inv2(F11), inv2(F22)
        S11 = F11 - F12 @ F22i @ F21
        S22 = F22 - F21 @ F11i @ F12
        S11i, S22i = inv2(S11), inv2(S22)
        return np.block([[S11i, -S11i @ F12 @ F22i],
                         [-S22i @ F21 @ F11i, S22i]])
    if abs(d11) > 1e-14 * s ** 2:
        F11i = inv2(F11)
        S22 = F22 - F21 @ F11i @ F12
        S22i = inv2(S22)
        top = F11i + F11i @ F12 @ S22i @ F21 @ F11i
        return np.block([[top, -F11i @ F12 @ S22i],
                         [-S22i @ F21 @ F11i, S22i]])
    if abs(d22) > 1e-14 * s ** 2:
        F22i = inv2(F22)
        S11 = F11 - F12 @ F22i @ F21
        S11i = inv2(S11)
        bot = F22i + F22i @ F21 @ S11i @ F12 @ F22i
        return np.block([[S11i, -S11i @ F12 @ F22i],
                         [-F22i @ F21 @ S11i, bot]])
    # both diagonal blocks singular; the matrix itself may be regular
    return np.linalg.inv(B)


def block_inverse_alt(B):
    """Second symmetric Schur form; agrees with :func:`block_inverse`."""
    B = np.asarray(B, dtype=float)
    F11, F12, F21, F22 = B[:2, :2], B[:2, 2:], B[2:, :2], B[2:, 2:]
    F11i, F22i = inv2(F11), inv2(F22)
    S11 = F11 - F12 @ F22i @ F21
    S22 = F22 - F21 @ F11i @ F12
    return np.block([[inv2(S11), -F11i @ F12 @ inv2(S22)],
                     [-F22i @ F21 @ inv2(S11), inv2(S22)]])


def is_positive_definite(k, tol=1e-12):
    """Positive definiteness test: X > 0 and X - Y conj(X)^-1 conj(Y) > 0.

    Returns False on (and slightly inside) the boundary; the cutoff is
    ``tol`` times the overall scale.
    """
    if isinstance(k, np.ndarray):
        k = kt_from_block(k)
    X, Y = k.X, k.Y
    s = _scale(X, Y)
    if not _herm_pd(X, tol, s):
        return False
    SX = X - Y @ inv2(X.conj()) @ Y.conj()
    return _herm_pd(SX, tol, s)


def block_is_pd(B, tol=1e-12):
    return is_positive_definite(kt_from_block(B), tol=tol)


def rotate(theta, k):
    """Frame rotation by ``theta``: X is unchanged, Y picks up e^{2 i theta}."""
    return KTensor(k.X, np.exp(2j * theta) * k.Y)


def rotate_block(theta, B):
    """Same rotation applied to the 4x4 block form by spatial conjugation."""
    c, s = np.cos(theta), np.sin(theta)
    R = np.array([[c, -s], [s, c]])
    Rhat = np.kron(I2, R)
    return Rhat @ np.asarray(B, float) @ Rhat.T


def jordan_star(k1, a, k2):
    """Jordan product (k1 a k2 + k2 a k1) / 2 steered by the operator ``a``."""
    p = kt_mul(kt_mul(k1, a), k2)
    q = kt_mul(kt_mul(k2, a), k1)
    return 0.5 * (p + q)


# -- JSON forms ---------------------------------------------------------

def _c_pairs(m):
    return [[float(v.real), float(v.imag)] for v in np.asarray(m, complex).ravel()]


def _c_from_pairs(pairs):
    vals = [complex(re, im) for re, im in pairs]
    return np.array(vals, complex).reshape(2, 2)


def kt_to_json(k):
    return {"X": _c_pairs(k.X), "Y": _c_pairs(k.Y)}


def kt_from_json(obj):
    return KTensor(_c_from_pairs(obj["X"]), _c_from_pairs(obj["Y"]))


def block_to_json(B):
    return {"L": [[float(v) for v in row] for row in np.asarray(B, float)]}


def block_from_json(obj):
    return check_block(np.asarray(obj["L"], dtype=float))
