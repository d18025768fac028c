"""Subspace geometry: Grassmann frames, geodesics, Tucker compression.

Frames are orthonormal n x r matrices. All transports return, alongside the
moving frame, the explicit r x r orthogonal/unitary change of basis relating
the transported frame at t = 1 to the stored frame of the destination point;
callers absorb that twist into core coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .core import (DEFAULT_TOL, Hypermatrix, SymTensor, TolerancePolicy,
                   flatten, fix_phase, mode_multiply, numerical_rank,
                   sym_embed, sym_extract)
from .errors import ToleranceError

_FRAME_ORTHO_TOL = 1e-12


@dataclass(frozen=True)
class GrassmannPoint:
    """A point of Gr(r, K^n) represented by an orthonormal frame."""

    frame: np.ndarray
    field: str

    def __post_init__(self):
        F = np.ascontiguousarray(self.frame)
        if F.ndim != 2:
            raise ValueError("frame must be a matrix")
        gram = F.conj().T @ F
        if np.max(np.abs(gram - np.eye(F.shape[1]))) > _FRAME_ORTHO_TOL:
            raise ValueError("frame columns are not orthonormal to 1e-12")
        object.__setattr__(self, "frame", F)

    @property
    def ambient_dim(self) -> int:
        return self.frame.shape[0]

    @property
    def subspace_dim(self) -> int:
        return self.frame.shape[1]


def dominant_subspace(A: Hypermatrix, mode: int, r: int,
                      tol: TolerancePolicy = DEFAULT_TOL) -> GrassmannPoint:
    """Span of the top r left singular vectors of the mode-i flattening.

    Raises ToleranceError when the subspace is numerically ambiguous: either
    sigma_r / sigma_1 < gap_min (the subspace barely exists) or, when more
    than r significant values are present, the relative gap
    (sigma_r - sigma_{r+1}) / sigma_1 < gap_min.
    """
    M = flatten(A, mode)
    if r < 1 or r > min(M.shape):
        raise ValueError(f"cannot take a {r}-dimensional dominant subspace of {M.shape}")
    U, sigma, _ = np.linalg.svd(M, full_matrices=False)
    if sigma[0] == 0.0:
        raise ToleranceError("zero tensor has no dominant subspace")
    if sigma[r - 1] / sigma[0] < tol.gap_min:
        raise ToleranceError(
            f"mode-{mode} subspace margin {sigma[r-1]/sigma[0]:.3e} below gap_min")
    rank_here, _ = numerical_rank(M, tol)
    if rank_here > r and (sigma[r - 1] - sigma[r]) / sigma[0] < tol.gap_min:
        raise ToleranceError(
            f"mode-{mode} dominant subspace of dimension {r} is ambiguous: "
            f"relative gap {(sigma[r-1]-sigma[r])/sigma[0]:.3e} below gap_min")
    frame = U[:, :r]
    frame = np.column_stack([fix_phase(frame[:, k]) for k in range(r)])
    return GrassmannPoint(frame, A.field)


def principal_angles(U: GrassmannPoint, V: GrassmannPoint) -> np.ndarray:
    """Principal angles between two subspaces, nondecreasing, in [0, pi/2]."""
    if U.ambient_dim != V.ambient_dim:
        raise ValueError("subspaces live in different ambient spaces")
    s = np.linalg.svd(U.frame.conj().T @ V.frame, compute_uv=False)
    return np.arccos(np.clip(s, 0.0, 1.0))


class GrassmannGeodesic:
    """Minimal geodesic between two subspaces, as a moving orthonormal frame.

    frame(0) is exactly the start frame; frame(1) equals end.frame @ twist for
    an explicit orthogonal/unitary ``twist``.
    """

    def __init__(self, start: GrassmannPoint, end: GrassmannPoint):
        if start.ambient_dim != end.ambient_dim or start.subspace_dim != end.subspace_dim:
            raise ValueError("geodesic endpoints must be points of the same Grassmannian")
        X, Y = start.frame, end.frame
        V, s, Wh = np.linalg.svd(X.conj().T @ Y)
        W = Wh.conj().T
        theta = np.arccos(np.clip(s, 0.0, 1.0))
        P = X @ V
        Q = Y @ W
        delta = Q - P * np.cos(theta)
        sin_theta = np.sin(theta)
        G = np.zeros_like(delta)
        for k in range(delta.shape[1]):
            if sin_theta[k] > 1e-12:
                G[:, k] = delta[:, k] / sin_theta[k]
        self._P, self._G, self._theta, self._Vh = P, G, theta, V.conj().T
        self.twist = W @ V.conj().T
        self.start, self.end = start, end

    def frame(self, t: float) -> np.ndarray:
        a = self._theta * t
        return (self._P * np.cos(a) + self._G * np.sin(a)) @ self._Vh

    def angles(self) -> np.ndarray:
        return self._theta.copy()


def geodesic(start: GrassmannPoint, end: GrassmannPoint,
             t: float) -> tuple[GrassmannPoint, np.ndarray]:
    """Transported frame at time t and the t=1 basis change (see class above)."""
    geo = GrassmannGeodesic(start, end)
    return GrassmannPoint(geo.frame(t), start.field), geo.twist


class OrientationLoop:
    """Closed frame loop in Gr(r, n), n > r, with holonomy diag(-1, 1, ..., 1).

    The first frame column is rotated by pi through a fixed direction outside
    the subspace; the subspace returns to itself with one basis vector negated.
    """

    def __init__(self, point: GrassmannPoint):
        n, r = point.ambient_dim, point.subspace_dim
        if n <= r:
            raise ValueError("orientation loop needs ambient room (n > r)")
        U = point.frame
        residuals = np.eye(n, dtype=U.dtype) - U @ U.conj().T
        norms = np.linalg.norm(residuals, axis=0)
        k = int(np.argmax(norms))
        self._z = residuals[:, k] / norms[k]
        self._U = U
        self.point = point
        h = np.eye(r, dtype=U.dtype)
        h[0, 0] = -1.0
        self.holonomy = h

    def frame(self, t: float) -> np.ndarray:
        F = self._U.copy()
        F[:, 0] = np.cos(np.pi * t) * self._U[:, 0] + np.sin(np.pi * t) * self._z
        return F


@dataclass(frozen=True)
class TuckerRep:
    """Orthonormal frames per mode plus the core of coefficients."""

    frames: tuple[GrassmannPoint, ...]
    core: Hypermatrix

    @property
    def ranks(self) -> tuple[int, ...]:
        return self.core.shape


def tucker_compress(A: Hypermatrix, ranks: tuple[int, ...],
                    tol: TolerancePolicy = DEFAULT_TOL) -> TuckerRep:
    """Compress onto the dominant subspaces; exact when ranks = mrank(A).

    Raises ToleranceError if the round trip misses A by more than 1e-10
    relative (i.e. the requested ranks undershoot the true multilinear rank).
    """
    if len(ranks) != A.order:
        raise ValueError("need one rank per mode")
    frames = tuple(dominant_subspace(A, m + 1, ranks[m], tol) for m in range(A.order))
    core = mode_multiply(A.data, [f.frame.conj().T for f in frames])
    rep = TuckerRep(frames, Hypermatrix(core, A.field))
    residual = np.linalg.norm((tucker_expand(rep).data - A.data).ravel())
    if residual > 1e-10 * max(A.norm(), 1e-300):
        raise ToleranceError(
            f"tucker round trip residual {residual:.3e} exceeds 1e-10 * norm; "
            f"multilinear rank of the input exceeds {ranks}")
    return rep


def tucker_expand(rep: TuckerRep) -> Hypermatrix:
    data = mode_multiply(rep.core.data, [f.frame for f in rep.frames])
    return Hypermatrix(data, rep.core.field)


def sym_tucker_compress(S: SymTensor, r: int,
                        tol: TolerancePolicy = DEFAULT_TOL
                        ) -> tuple[GrassmannPoint, SymTensor]:
    """Shared-frame compression of a symmetric tensor.

    One frame (from the mode-1 flattening) is applied to every mode; the core
    is again symmetric, of dimension r.
    """
    A = sym_embed(S)
    frame = dominant_subspace(A, 1, r, tol)
    core_full = mode_multiply(A.data, [frame.frame.conj().T] * S.order)
    core = sym_extract(Hypermatrix(core_full, S.field), tol)
    back = mode_multiply(sym_embed(core).data, [frame.frame] * S.order)
    residual = np.linalg.norm((back - A.data).ravel())
    if residual > 1e-10 * max(A.norm(), 1e-300):
        raise ToleranceError(
            f"shared-frame round trip residual {residual:.3e} exceeds 1e-10 * norm; "
            f"the symmetric multilinear rank of the input exceeds {r}")
    return frame, core


def sym_tucker_expand(frame: GrassmannPoint, core: SymTensor) -> SymTensor:
    full = mode_multiply(sym_embed(core).data, [frame.frame] * core.order)
    return sym_extract(Hypermatrix(full, core.field),
                       TolerancePolicy(eps_rel=1e-8))


def so_rotation_path(Q: np.ndarray):
    """Callable t -> R(t) with R(0) = I, R(1) = Q, R(t) in SO(r) throughout.

    Q must be real special orthogonal. Uses the real Schur form: rotation
    angles are scaled by t; -1 eigenvalue pairs become pi-rotations in their
    invariant planes.
    """
    r = Q.shape[0]
    if np.max(np.abs(Q @ Q.T - np.eye(r))) > 1e-10 or np.linalg.det(Q) < 0:
        raise ValueError("so_rotation_path needs a special orthogonal matrix")
    T, Z = scipy.linalg.schur(Q, output="real")
    planes: list[tuple[int, int, float]] = []
    pending_minus: list[int] = []
    i = 0
    while i < r:
        if i + 1 < r and abs(T[i + 1, i]) > 1e-12:
            theta = float(np.arctan2(T[i + 1, i], T[i, i]))
            planes.append((i, i + 1, theta))
            i += 2
        else:
            if T[i, i] < 0:
                pending_minus.append(i)
            i += 1
    if len(pending_minus) % 2 != 0:
        raise ValueError("determinant is not +1 (odd count of -1 eigenvalues)")
    for a, b in zip(pending_minus[::2], pending_minus[1::2]):
        planes.append((a, b, np.pi))

    def path(t: float) -> np.ndarray:
        M = np.eye(r)
        for a, b, theta in planes:
            c, s = np.cos(theta * t), np.sin(theta * t)
            M[a, a] = c
            M[a, b] = -s
            M[b, a] = s
            M[b, b] = c
        return Z @ M @ Z.T

    return path


def orthogonal_interpolator(Q0: np.ndarray, Q1: np.ndarray):
    """Callable t -> Q(t) joining two real orthogonal matrices of equal det sign."""
    d0, d1 = np.linalg.det(Q0), np.linalg.det(Q1)
    if d0 * d1 < 0:
        raise ValueError("cannot join orthogonal matrices of opposite orientation")
    r = Q0.shape[0]
    flip = np.eye(r)
    if d0 < 0:
        flip[-1, -1] = -1.0
    A0, A1 = Q0 @ flip, Q1 @ flip
    inner = so_rotation_path(A0.T @ A1)

    def path(t: float) -> np.ndarray:
        return A0 @ inner(t) @ flip

    return path


def gl_interpolator(M0: np.ndarray, M1: np.ndarray):
    """Callable t -> M(t) joining two invertible real matrices of the same
    determinant sign through invertible matrices with constant sign.

    Both endpoints are reproduced exactly; the path is U(t) S(t) V(t)^T with
    orthogonal factors interpolated on SO and singular values lerped.
    """
    if M0.shape != M1.shape or M0.shape[0] != M0.shape[1]:
        raise ValueError("gl_interpolator needs square matrices of one shape")
    sign0 = np.sign(np.linalg.det(M0))
    sign1 = np.sign(np.linalg.det(M1))
    if sign0 == 0 or sign0 != sign1:
        raise ValueError("gl_interpolator needs invertible endpoints of equal det sign")
    U0, s0, V0h = np.linalg.svd(M0)
    U1, s1, V1h = np.linalg.svd(M1)
    V0, V1 = V0h.T, V1h.T
    r = M0.shape[0]

    def absorb(U, V):
        # force det V = +1, pushing any reflection into U
        if np.linalg.det(V) < 0:
            D = np.eye(r)
            D[-1, -1] = -1.0
            return U @ D, V @ D
        return U, V

    U0, V0 = absorb(U0, V0)
    U1, V1 = absorb(U1, V1)
    u_path = orthogonal_interpolator(U0, U1)
    v_path = orthogonal_interpolator(V0, V1)

    def path(t: float) -> np.ndarray:
        s = (1.0 - t) * s0 + t * s1
        return u_path(t) * s @ v_path(t).T

    return path
