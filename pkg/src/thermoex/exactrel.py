"""Exact-relation manifolds: membership predicates, samplers, transforms.

An exact relation is a submanifold of positive definite tensors that is
closed under homogenization.  Every one implemented here is the image of
a catalog subspace under a fractional-linear change of variables

    W(L) = [(L - L0)^-1 + M]^-1,    M = K(key, 0),

anchored at the reference L0 = I; the closed-form predicates below are
the eliminated forms of that statement.  Base points other than I are
reached through the covariance congruence and the global link group.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import algebra
from .tensor4 import (I2, I4, RPERP, T4, KTensor, block_is_pd, block_parts,
                      cof2, det2, inv2, kt_from_block, kt_to_block,
                      spd_sqrt_2x2)

__all__ = [
    "ER_IDS", "ERSpec", "er_spec", "er_specs", "gamma0", "w_transform",
    "w_inverse", "pullback", "er_member", "er_sample", "lm_par", "lm_unpar",
    "covariance", "MembershipResult", "PSI1", "JRP",
]

ER_IDS = (7, 8, 9, 13, 17, 19, 20, 21, 22)

PSI1 = np.array([[1.0, 0.0], [0.0, -1.0]])
JRP = np.kron(PSI1, RPERP)           # psi(1) (x) Rperp
IRP4 = np.kron(I2, RPERP)            # I (x) Rperp


@dataclass(frozen=True)
class ERSpec:
    ident: int
    algebra: algebra.AlgebraSpec
    key: np.ndarray

    @property
    def name(self):
        return self.algebra.name


_ER_KEYS = {
    7: algebra.KEY_HALF_I, 8: algebra.KEY_ZERO, 9: algebra.KEY_HALF_I,
    13: algebra.KEY_ZERO, 17: algebra.KEY_HALF_I, 19: algebra.KEY_HALF_I,
    20: algebra.KEY_HALF_I, 21: algebra.KEY_HALF_I, 22: algebra.KEY_HALF_I,
}


def er_spec(ident):
    if ident not in _ER_KEYS:
        raise KeyError(f"no first-class exact relation with id {ident}")
    return ERSpec(ident, algebra.algebra_by_id(ident), _ER_KEYS[ident])


def er_specs():
    return tuple(er_spec(i) for i in ER_IDS)


def gamma0(n, iso=None):
    """Reference operator Lambda^-1 (x) (n (x) n) for layer normal n."""
    n = np.asarray(n, dtype=float)
    norm = np.linalg.norm(n)
    if norm == 0:
        raise ValueError("layer normal must be nonzero")
    n = n / norm
    lam = I2 if iso is None else np.asarray(iso.lam if hasattr(iso, "lam") else iso, float)
    return np.kron(inv2(lam), np.outer(n, n))


def _key_block(key):
    return kt_to_block(KTensor(np.asarray(key, float), np.zeros((2, 2))))


def w_transform(L, key, L0=None):
    """Fractional-linear transform [(L - L0)^-1 + K(key,0)]^-1 as operator.

    Evaluated in the pole-free product form D (I + M D)^-1, which is well
    defined even when L - L0 is singular.
    """
    L = np.asarray(L, dtype=float)
    L0 = I4 if L0 is None else np.asarray(L0, dtype=float)
    D = L - L0
    M = _key_block(key)
    W = D @ np.linalg.inv(I4 + M @ D)
    return kt_from_block(W)


def w_inverse(k, key, L0=None):
    """Inverse of :func:`w_transform`: L = L0 + W (I - M W)^-1."""
    L0 = I4 if L0 is None else np.asarray(L0, dtype=float)
    W = kt_to_block(k) if isinstance(k, KTensor) else np.asarray(k, float)
    M = _key_block(key)
    return L0 + W @ np.linalg.inv(I4 - M @ W)


def pullback(ident, L):
    """Transform a tensor to the subspace side of the relation ``ident``."""
    return w_transform(L, er_spec(ident).key)


@dataclass(frozen=True)
class MembershipResult:
    er_id: int
    member: bool
    residual: float
    constraints: tuple

    def to_json(self):
        return {"er_id": self.er_id, "member": self.member,
                "residual": self.residual,
                "constraints": [{"name": n, "ok": bool(v)}
                                for n, v in self.constraints]}


def _spd_2x2(m, tol=1e-12):
    s = 1.0 + np.abs(m).max()
    return m[0, 0] > tol * s and det2(m) > tol * s ** 2


def _neg_def_2x2(m, tol=0.0):
    return _spd_2x2(-np.asarray(m), tol)


def lm_par(L, M):
    """Tensor [[L, L M], [M^T L, M^T L M]] + T from a 2x2 pair."""
    L = np.asarray(L, dtype=float)
    M = np.asarray(M, dtype=float)
    return np.block([[L, L @ M], [M.T @ L, M.T @ L @ M]]) + T4


def lm_unpar(Lt):
    """Recover (L, M) from the parametrized form: M = L11^-1 (L12 + Rperp)."""
    L11, L12, _ = block_parts(Lt)
    return L11, inv2(L11) @ (L12 + RPERP)


def _sandwich_residual(L, mid):
    """Frobenius norm of L mid L - mid, scaled by (1 + |L|)^2."""
    L = np.asarray(L, float)
    r = L @ mid @ L - mid
    return float(np.linalg.norm(r) / (1.0 + np.linalg.norm(L)) ** 2)


def er_member(ident, L, tol=1e-9):
    """Closed-form membership test of ``L`` in exact relation ``ident``.

    Returns the scaled residual of the defining equations together with
    the side constraints (positivity, determinant inequalities).  The
    tensor must be symmetric; non-PD input is reported as a failed
    constraint rather than an error.
    """
    L = np.asarray(L, dtype=float)
    L11, L12, L22 = block_parts(L)
    nrm = 1.0 + np.linalg.norm(L)
    sc = nrm ** 2
    cons = [("positive_definite", block_is_pd(L))]

    if ident == 7:
        th = L12[1, 0]
        res = (np.linalg.norm(L11 - L22) + np.linalg.norm(L12 - th * RPERP)
               + abs(det2(L11) - (1.0 + th) ** 2))
        cons.append(("theta>-1/2", th > -0.5))
        return MembershipResult(7, res / sc <= tol and all(v for _, v in cons),
                                res / sc, tuple(cons))
    if ident == 8:
        t = L12[0, 1]
        res = np.linalg.norm(L11 - L22) + np.linalg.norm(L12 + t * RPERP)
        cons.append(("det>t^2", det2(L11) > t ** 2))
        return MembershipResult(8, res / sc <= tol and all(v for _, v in cons),
                                res / sc, tuple(cons))
    if ident == 9:
        P = L11
        pn = (P * P).sum()
        lam = (L12 * P).sum() / pn
        eta = (L22 * P).sum() / pn
        res = (np.linalg.norm(L12 - lam * P) + np.linalg.norm(L22 - eta * P)
               + abs((eta - lam * lam) * det2(P) - 1.0))
        return MembershipResult(9, res / sc <= tol and all(v for _, v in cons),
                                res / sc, tuple(cons))
    if ident == 13:
        res = (np.linalg.norm(L12 - (L11 - I2) @ RPERP)
               + np.linalg.norm(L22 - cof2(L11)))
        cons.append(("L11>I/2", _spd_2x2(L11 - I2 / 2)))
        return MembershipResult(13, res / sc <= tol and all(v for _, v in cons),
                                res / sc, tuple(cons))
    if ident == 17:
        res = _sandwich_residual(L, JRP)
        return MembershipResult(17, res <= tol and all(v for _, v in cons),
                                res, tuple(cons))
    if ident == 19:
        S = L12 + RPERP
        # third scalar equation: det(L22 + L12) = det L22 + det L12
        res = (np.linalg.norm(L11 - S @ inv2(L22) @ S.T) / sc
               + abs(det2(L22) - det2(S)) / sc
               + abs((L22 * cof2(L12)).sum()) / sc)
        return MembershipResult(19, res <= tol and all(v for _, v in cons),
                                res, tuple(cons))
    if ident == 20:
        S = L12 + RPERP
        res = (np.linalg.norm(L11 - S @ inv2(L22) @ S.T) / sc
               + abs(det2(L22) - det2(S)) / sc)
        return MembershipResult(20, res <= tol and all(v for _, v in cons),
                                res, tuple(cons))
    if ident == 21:
        S = L12 + RPERP
        res = np.linalg.norm(L11 - S @ inv2(L22) @ S.T) / sc
        return MembershipResult(21, res <= tol and all(v for _, v in cons),
                                res, tuple(cons))
    if ident == 22:
        res = _sandwich_residual(L, IRP4)
        return MembershipResult(22, res <= tol and all(v for _, v in cons),
                                res, tuple(cons))
    raise KeyError(f"no first-class exact relation with id {ident}")


def er_sample(ident, seed=algebra.DEFAULT_SEED, scale=1.0, rng=None):
    """Random member of relation ``ident`` through the subspace chart.

    Draws a subspace element of the requested coefficient scale and maps
    it through the inverse transform, shrinking the scale until the image
    is positive definite (at most 100 attempts).
    """
    spec = er_spec(ident)
    if rng is None:
        rng = np.random.default_rng(seed)
    s = float(scale)
    if s == 0.0:
        return I4.copy()
    for _ in range(100):
        k = spec.algebra.sample(rng, s)
        L = w_inverse(k, spec.key)
        if block_is_pd(L, tol=1e-10):
            return (L + L.T) / 2.0
        s *= 0.7
    raise RuntimeError(f"could not sample a PD member of relation {ident}")


def covariance(lam, L):
    """Congruence by Lambda^-1/2 (x) I normalizing an isotropic reference."""
    lam = np.asarray(lam, dtype=float)
    C = np.kron(inv2(spd_sqrt_2x2(lam)), I2)
    return C @ np.asarray(L, float) @ C.T
