"""Explicit continuous in-stratum paths between same-stratum tensors.

A TensorPath is a chain of segments over equal sub-intervals of [0, 1].
Rank-one and conjugate-pair constructions are in-stratum pointwise by
construction; core interpolations are verified on a sample grid and repaired
by recursive random-midpoint detours (each retry dodges a measure-zero bad
set, depth is capped at 8).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .certify import (Kind222, brank3_conj_pair, classify_222, is_rank_one,
                      rank2_decompose)
from .classifiers import (ComponentLabel, SINGLE, classify,
                          classify_brank3_222, det_sign_mrank, sign_label,
                          square_mode, mrank_saturation)
from .core import (COMPLEX, DEFAULT_TOL, Hypermatrix, RankOneFactors, REAL,
                   SymRankDecomposition, SymTensor, TolerancePolicy, flatten,
                   mode_multiply, mrank, numerical_rank, outer_product,
                   sym_embed, sym_extract, sym_packed_length, sym_power)
from .errors import (DegenerateError, DifferentComponents, RetryExhausted,
                     ToleranceError, UnsupportedStratumError)
from .geometry import (GrassmannGeodesic, OrientationLoop, gl_interpolator,
                       orthogonal_interpolator, sym_tucker_compress,
                       tucker_compress)
from .io import array_to_json, scalar_to_json
from .rng import SplitMix64
from .sampling import (expected_generic_mrank, random_orthogonal,
                       sample_rank_r, sample_sym_rank_r)
from .stratum import StratumDescriptor, format_stratum

_LOOSE = TolerancePolicy(eps_rel=1e-8)
_SAME = 1e-13          # below this, two unit vectors count as the same point
_ANTIPODAL = 1e-9      # |<a,b> + 1| below this forces a detour


def _lerp(a, b, s: float):
    return (1.0 - s) * a + s * b


def _track_eval(track: tuple, s: float) -> np.ndarray:
    tag = track[0]
    if tag == "const":
        return track[1]
    if tag == "lerp":
        return _lerp(track[1], track[2], s)
    if tag == "detour":
        a, w, b = track[1], track[2], track[3]
        return _lerp(a, w, 2.0 * s) if s < 0.5 else _lerp(w, b, 2.0 * s - 1.0)
    raise ValueError(f"unknown track {tag!r}")


def _track_json(track: tuple) -> dict:
    tag = track[0]
    if tag == "const":
        return {"tag": tag, "vector": array_to_json(track[1])}
    if tag == "lerp":
        return {"tag": tag, "start": array_to_json(track[1]),
                "end": array_to_json(track[2])}
    return {"tag": tag, "start": array_to_json(track[1]),
            "via": array_to_json(track[2]), "end": array_to_json(track[3])}


def _scalar_eval(track: tuple, s: float):
    tag = track[0]
    if tag == "const":
        return track[1]
    if tag == "lerp":
        return _lerp(track[1], track[2], s)
    if tag == "phase":
        return track[1] * cmath.exp(1j * _lerp(0.0, track[2], s))
    raise ValueError(f"unknown scalar track {tag!r}")


def _detour_via(a: np.ndarray) -> np.ndarray:
    """Basis vector most independent from a: smallest coordinate magnitude."""
    k = int(np.argmin(np.abs(a)))
    e = np.zeros_like(a)
    e[k] = 1.0
    return e


class RankOneSegment:
    """One rank-one tensor with per-mode vector tracks and a scalar track."""

    def __init__(self, kind: str, field: str, scalar_track: tuple,
                 tracks: tuple):
        self.kind = kind
        self.field = field
        self.scalar_track = scalar_track
        self.tracks = tracks

    def value(self, s: float) -> Hypermatrix:
        factors = tuple(_track_eval(tr, s) for tr in self.tracks)
        c = _scalar_eval(self.scalar_track, s)
        return outer_product(RankOneFactors(c, factors, self.field))

    def witness(self, s: float) -> dict:
        return {"kind": "rank-one",
                "scalar": _scalar_eval(self.scalar_track, s),
                "factors": [_track_eval(tr, s) for tr in self.tracks]}

    def to_json(self) -> dict:
        st = self.scalar_track
        scalar = {"tag": st[0]}
        if st[0] == "phase":
            scalar["value"] = scalar_to_json(st[1], self.field)
            scalar["angle"] = float(st[2])
        else:
            scalar["values"] = [scalar_to_json(v, self.field) for v in st[1:]]
        return {"kind": self.kind, "scalar": scalar,
                "modes": [_track_json(tr) for tr in self.tracks]}


class SymPowerSegment:
    """sign * w(t)^(x d) for a single vector track."""

    def __init__(self, kind: str, field: str, order: int, sign, track: tuple):
        self.kind = kind
        self.field = field
        self.order = order
        self.sign = sign
        self.track = track

    def value(self, s: float) -> SymTensor:
        w = _track_eval(self.track, s)
        return sym_power(w, self.order, self.sign, self.field)

    def witness(self, s: float) -> dict:
        w = _track_eval(self.track, s)
        nw = float(np.linalg.norm(w))
        return {"kind": "sym-terms",
                "coefficients": [self.sign * nw ** self.order]}

    def to_json(self) -> dict:
        return {"kind": self.kind, "order": self.order,
                "sign": scalar_to_json(self.sign, self.field),
                "mode": _track_json(self.track)}


class TermSumSegment:
    """Sum of rank-one terms, each with per-mode tracks (scalars folded in)."""

    def __init__(self, field: str, terms: tuple):
        self.kind = "term-sum"
        self.field = field
        self.terms = terms

    def value(self, s: float) -> Hypermatrix:
        total = None
        for tracks in self.terms:
            part = outer_product(RankOneFactors(
                1.0, tuple(_track_eval(tr, s) for tr in tracks), self.field)).data
            total = part if total is None else total + part
        return Hypermatrix(total, self.field)

    def witness(self, s: float) -> dict:
        return {"kind": "terms",
                "factors": [[_track_eval(tr, s) for tr in tracks]
                            for tracks in self.terms]}

    def to_json(self) -> dict:
        return {"kind": self.kind,
                "terms": [[_track_json(tr) for tr in tracks]
                          for tracks in self.terms]}


class SymTermSumSegment:
    """Sum of sign_k * w_k(t)^(x d) term curves."""

    def __init__(self, field: str, order: int, terms: tuple):
        self.kind = "sym-term-sum"
        self.field = field
        self.order = order
        self.terms = terms

    def value(self, s: float) -> SymTensor:
        packed = None
        dim = None
        for sign, track in self.terms:
            w = _track_eval(track, s)
            part = sym_power(w, self.order, sign, self.field)
            dim = part.dim
            packed = part.packed if packed is None else packed + part.packed
        return SymTensor(dim, self.order, self.field, packed)

    def witness(self, s: float) -> dict:
        coeffs = []
        for sign, track in self.terms:
            w = _track_eval(track, s)
            coeffs.append(sign * float(np.linalg.norm(w)) ** self.order)
        return {"kind": "sym-terms", "coefficients": coeffs}

    def to_json(self) -> dict:
        return {"kind": self.kind, "order": self.order,
                "terms": [{"sign": scalar_to_json(sign, self.field),
                           "mode": _track_json(track)}
                          for sign, track in self.terms]}


class FrameTransport:
    """Per-mode geodesic frames carrying fixed core coefficients."""

    def __init__(self, geodesics: tuple, core: np.ndarray, field: str):
        self.kind = "frame-transport"
        self.geodesics = geodesics
        self.core = core
        self.field = field

    def value(self, s: float) -> Hypermatrix:
        mats = [g.frame(s) for g in self.geodesics]
        return Hypermatrix(mode_multiply(self.core, mats), self.field)

    def witness(self, s: float):
        return None

    def to_json(self) -> dict:
        return {"kind": self.kind, "core": array_to_json(self.core),
                "start_frames": [array_to_json(g.frame(0.0)) for g in self.geodesics],
                "end_frames": [array_to_json(g.frame(1.0)) for g in self.geodesics]}


class CoreLerp:
    """Straight core interpolation under fixed frames (None = identity)."""

    def __init__(self, frames: tuple, core0: np.ndarray, core1: np.ndarray,
                 field: str):
        self.kind = "core-lerp"
        self.frames = frames
        self.core0 = core0
        self.core1 = core1
        self.field = field

    def core(self, s: float) -> np.ndarray:
        return _lerp(self.core0, self.core1, s)

    def value(self, s: float) -> Hypermatrix:
        return Hypermatrix(mode_multiply(self.core(s), list(self.frames)),
                           self.field)

    def witness(self, s: float):
        return None

    def to_json(self) -> dict:
        return {"kind": self.kind,
                "core_start": array_to_json(self.core0),
                "core_end": array_to_json(self.core1),
                "frames": [None if F is None else array_to_json(F)
                           for F in self.frames]}


def _unflatten_core(M: np.ndarray, ranks: tuple, mode: int) -> np.ndarray:
    rest = tuple(r for k, r in enumerate(ranks) if k != mode)
    return np.moveaxis(M.reshape((ranks[mode],) + rest), 0, mode)


class CoreTransform:
    """Core route whose square-mode flattening follows an SVD interpolation.

    The flattening stays invertible with constant determinant sign by
    construction, which a straight core interpolation cannot promise.
    """

    def __init__(self, frames: tuple, ranks: tuple, mode: int,
                 core0: np.ndarray, core1: np.ndarray, field: str):
        self.kind = "core-transform"
        self.frames = frames
        self.ranks = tuple(ranks)
        self.mode = mode
        self.core0 = core0
        self.core1 = core1
        self.field = field
        n = core0.shape[mode]
        self._interp = gl_interpolator(
            np.moveaxis(core0, mode, 0).reshape(n, -1),
            np.moveaxis(core1, mode, 0).reshape(n, -1))

    def core(self, s: float) -> np.ndarray:
        return _unflatten_core(self._interp(s), self.ranks, self.mode)

    def value(self, s: float) -> Hypermatrix:
        return Hypermatrix(mode_multiply(self.core(s), list(self.frames)),
                           self.field)

    def witness(self, s: float):
        return None

    def to_json(self) -> dict:
        return {"kind": self.kind, "mode": self.mode + 1,
                "core_start": array_to_json(self.core0),
                "core_end": array_to_json(self.core1),
                "frames": [None if F is None else array_to_json(F)
                           for F in self.frames]}


class FlipLoop:
    """Orientation-reversing frame loop in one mode, core held fixed."""

    def __init__(self, loop: OrientationLoop, mode: int, frames: tuple,
                 core: np.ndarray, field: str):
        self.kind = "flip-loop"
        self.loop = loop
        self.mode = mode
        self.frames = frames
        self.core = core
        self.field = field

    def value(self, s: float) -> Hypermatrix:
        mats = list(self.frames)
        mats[self.mode] = self.loop.frame(s)
        return Hypermatrix(mode_multiply(self.core, mats), self.field)

    def witness(self, s: float):
        return None

    def to_json(self) -> dict:
        return {"kind": self.kind, "mode": self.mode + 1,
                "core": array_to_json(self.core)}


class SymFrameTransport:
    """Single shared-frame geodesic carrying a fixed symmetric core."""

    def __init__(self, geodesic: GrassmannGeodesic, core: SymTensor):
        self.kind = "sym-frame-transport"
        self.geodesic = geodesic
        self.core = core

    def value(self, s: float) -> SymTensor:
        F = self.geodesic.frame(s)
        full = mode_multiply(sym_embed(self.core).data, [F] * self.core.order)
        return sym_extract(Hypermatrix(full, self.core.field), _LOOSE)

    def witness(self, s: float):
        return None

    def to_json(self) -> dict:
        return {"kind": self.kind,
                "core": [scalar_to_json(v, self.core.field) for v in self.core.packed],
                "start_frame": array_to_json(self.geodesic.frame(0.0)),
                "end_frame": array_to_json(self.geodesic.frame(1.0))}


class SymCoreLerp:
    """Symmetric core interpolation under one fixed shared frame."""

    def __init__(self, frame: np.ndarray, core0: SymTensor, core1: SymTensor):
        self.kind = "sym-core-lerp"
        self.frame = frame
        self.core0 = core0
        self.core1 = core1

    def core(self, s: float) -> SymTensor:
        packed = _lerp(self.core0.packed, self.core1.packed, s)
        return SymTensor(self.core0.dim, self.core0.order, self.core0.field, packed)

    def value(self, s: float) -> SymTensor:
        core = self.core(s)
        if self.frame is None:
            return core
        full = mode_multiply(sym_embed(core).data, [self.frame] * core.order)
        return sym_extract(Hypermatrix(full, core.field), _LOOSE)

    def witness(self, s: float):
        return None

    def to_json(self) -> dict:
        field = self.core0.field
        return {"kind": self.kind,
                "core_start": [scalar_to_json(v, field) for v in self.core0.packed],
                "core_end": [scalar_to_json(v, field) for v in self.core1.packed],
                "frame": None if self.frame is None else array_to_json(self.frame)}


class SymEigenCore:
    """Order-2 symmetric core route through a shared eigenvector rotation.

    Eigenvalues are interpolated slotwise after sorting, so with equal
    endpoint signatures no eigenvalue can cross zero and the signature is
    constant exactly.
    """

    def __init__(self, frame: np.ndarray, core0: SymTensor, core1: SymTensor):
        self.kind = "sym-eigen-core"
        self.frame = frame
        self.core0 = core0
        self.core1 = core1
        w0, Q0 = np.linalg.eigh(sym_embed(core0).data)
        w1, Q1 = np.linalg.eigh(sym_embed(core1).data)
        self._lam0, self._lam1 = w0[::-1], w1[::-1]
        Q0, Q1 = Q0[:, ::-1], Q1[:, ::-1]
        if np.linalg.det(Q0) * np.linalg.det(Q1) < 0:
            Q1 = Q1.copy()
            Q1[:, -1] = -Q1[:, -1]  # leaves Q1 diag(w1) Q1^T unchanged
        self._q = orthogonal_interpolator(Q0, Q1)

    def core(self, s: float) -> SymTensor:
        lam = _lerp(self._lam0, self._lam1, s)
        Q = self._q(s)
        M = (Q * lam) @ Q.T
        return sym_extract(Hypermatrix(M, self.core0.field), _LOOSE)

    def value(self, s: float) -> SymTensor:
        core = self.core(s)
        if self.frame is None:
            return core
        full = mode_multiply(sym_embed(core).data, [self.frame] * 2)
        return sym_extract(Hypermatrix(full, core.field), _LOOSE)

    def witness(self, s: float):
        return None

    def to_json(self) -> dict:
        field = self.core0.field
        return {"kind": self.kind,
                "core_start": [scalar_to_json(v, field) for v in self.core0.packed],
                "core_end": [scalar_to_json(v, field) for v in self.core1.packed],
                "frame": None if self.frame is None else array_to_json(self.frame)}


class ConjPairSegment:
    """A(t) = T(t) + conj(T(t)) with T = x(t) (x) y(t) (x) z(t).

    Each complex mode factor is encoded as the invertible real matrix
    [Re | Im]; the matrices move along determinant-sign-preserving SVD
    interpolations, so every sample has all three orientation areas nonzero
    and the tensor stays in the negative-hyperdeterminant stratum exactly.
    """

    def __init__(self, interpolators: tuple, mats0: tuple, mats1: tuple):
        self.kind = "conj-pair"
        self.interpolators = interpolators
        self.mats0 = mats0
        self.mats1 = mats1

    def _factors(self, s: float) -> list[np.ndarray]:
        out = []
        for interp in self.interpolators:
            M = interp(s)
            out.append(M[:, 0] + 1j * M[:, 1])
        return out

    def value(self, s: float) -> Hypermatrix:
        x, y, z = self._factors(s)
        T = np.multiply.outer(np.multiply.outer(x, y), z)
        return Hypermatrix(2.0 * np.real(T), REAL)

    def witness(self, s: float) -> dict:
        return {"kind": "conj-pair", "factors": self._factors(s)}

    def to_json(self) -> dict:
        return {"kind": self.kind,
                "mode_matrices_start": [array_to_json(M) for M in self.mats0],
                "mode_matrices_end": [array_to_json(M) for M in self.mats1]}


class TensorPath:
    """Chain of segments over equal sub-intervals of [0, 1]."""

    def __init__(self, segments: list, stratum: StratumDescriptor):
        if not segments:
            raise ValueError("a path needs at least one segment")
        self.segments = list(segments)
        self.stratum = stratum

    def _locate(self, t: float) -> tuple[int, float]:
        if not 0.0 <= t <= 1.0:
            raise ValueError(f"path parameter {t} outside [0, 1]")
        n = len(self.segments)
        u = t * n
        k = min(int(u), n - 1)
        return k, u - k

    def eval(self, t: float):
        k, s = self._locate(t)
        return self.segments[k].value(s)

    def witness(self, t: float):
        k, s = self._locate(t)
        return self.segments[k].witness(s)

    def joints(self) -> list[float]:
        n = len(self.segments)
        return [k / n for k in range(1, n)]

    def to_json(self) -> dict:
        return {"stratum": format_stratum(self.stratum),
                "segments": [seg.to_json() for seg in self.segments]}


def value_diff_norm(a, b) -> float:
    if isinstance(a, SymTensor):
        return SymTensor(a.dim, a.order, a.field, a.packed - b.packed).norm()
    return float(np.linalg.norm((a.data - b.data).ravel()))


def _value_norm(a) -> float:
    return a.norm()


def chebyshev_grid(K: int) -> list[float]:
    return [(1.0 - math.cos((2 * k + 1) * math.pi / (2 * K))) / 2.0
            for k in range(K)]


# ---------------------------------------------------------------------------
# rank-one connectivity


def connect_rank_one(A: Hypermatrix, B: Hypermatrix,
                     tol: TolerancePolicy = DEFAULT_TOL) -> TensorPath:
    """Mode-ascending factor interpolation; exactly rank one pointwise.

    Dependent factors are skipped; antipodal ones take a detour through the
    most independent basis vector. The scalar is reconciled at the end: a
    real sign mismatch is flipped by a mode-1 detour, a complex phase is
    rotated explicitly, and the magnitude is interpolated last.
    """
    if A.shape != B.shape or A.field != B.field:
        raise ValueError("endpoints must share shape and field")
    ok_a, wa = is_rank_one(A, tol)
    ok_b, wb = is_rank_one(B, tol)
    if not ok_a or not ok_b:
        raise ToleranceError("connect_rank_one endpoints must certify rank one")
    field = A.field
    factors = list(wa.factors)
    segments: list = []

    def const_tracks():
        return [("const", f) for f in factors]

    for m in range(A.order):
        a, b = factors[m], wb.factors[m]
        if np.linalg.norm(a - b) <= _SAME:
            factors[m] = b
            continue
        tracks = const_tracks()
        inner = np.vdot(a, b)
        if abs(inner + 1.0) <= _ANTIPODAL:
            tracks[m] = ("detour", a, _detour_via(a), b)
            kind = "detour-arc"
        else:
            tracks[m] = ("lerp", a, b)
            kind = "factor-lerp"
        segments.append(RankOneSegment(kind, field, ("const", wa.scalar),
                                       tuple(tracks)))
        factors[m] = b

    lam, mu = wa.scalar, wb.scalar
    if field == REAL:
        if lam * mu < 0:
            tracks = const_tracks()
            a = factors[0]
            tracks[0] = ("detour", a, _detour_via(a), -a)
            segments.append(RankOneSegment("detour-arc", field,
                                           ("const", lam), tuple(tracks)))
            factors[0] = -a
            mu = -mu
        if abs(lam - mu) > _SAME * max(abs(lam), abs(mu), 1.0):
            segments.append(RankOneSegment("scalar-scale", field,
                                           ("lerp", lam, mu),
                                           tuple(const_tracks())))
    else:
        angle = cmath.phase(mu / lam)
        if abs(angle) > _SAME:
            segments.append(RankOneSegment("complex-phase", field,
                                           ("phase", lam, angle),
                                           tuple(const_tracks())))
            lam = lam * cmath.exp(1j * angle)
        if abs(lam - mu) > _SAME * max(abs(lam), abs(mu), 1.0):
            segments.append(RankOneSegment("scalar-scale", field,
                                           ("lerp", lam, mu),
                                           tuple(const_tracks())))
    if not segments:
        segments.append(RankOneSegment("scalar-scale", field,
                                       ("const", lam), tuple(const_tracks())))
    stratum = StratumDescriptor("rank", field, 1, shape=A.shape)
    return TensorPath(segments, stratum)


# ---------------------------------------------------------------------------
# symmetric rank-one and rank-r connectivity


def _sym_rank1_witness(S: SymTensor, tol: TolerancePolicy):
    """(lambda, unit v) with S = lambda * v^(x d), or ToleranceError."""
    A = sym_embed(S)
    ok, w = is_rank_one(A, tol)
    if not ok:
        raise ToleranceError("endpoint is not symmetric rank one")
    base = w.factors[0]
    lam = w.scalar
    for f in w.factors[1:]:
        align = np.vdot(base, f)
        if abs(abs(align) - 1.0) > 1e-8:
            raise ToleranceError(
                "rank-one factors of a symmetric tensor must be collinear")
        lam = lam * align
    if S.field == REAL:
        lam = float(np.real(lam))
    return lam, base


def _root(c, d: int, field: str):
    """Principal d-th root; real inputs keep their sign for odd d."""
    if field == REAL:
        if c >= 0:
            return c ** (1.0 / d)
        if d % 2 == 1:
            return -((-c) ** (1.0 / d))
        raise ValueError("negative coefficient has no real even-order root")
    return abs(c) ** (1.0 / d) * cmath.exp(1j * cmath.phase(c) / d)


def _sym_pair_track(lam, u, mu, v, d: int, field: str):
    """(sign, track) for the curve sign * ((1-t) a + t b)^(x d)."""
    if field == REAL and d % 2 == 0:
        sign = 1.0 if lam > 0 else -1.0
        if float(np.dot(u, v)) < 0:
            v = -v
        a = abs(lam) ** (1.0 / d) * u
        b = abs(mu) ** (1.0 / d) * v
        return sign, _plain_or_detour(a, b)
    a = _root(lam, d, field) * u
    b = _root(mu, d, field) * v
    return 1.0, _plain_or_detour(a, b)


def _plain_or_detour(a: np.ndarray, b: np.ndarray) -> tuple:
    if np.linalg.norm(a - b) <= _SAME * max(np.linalg.norm(a), 1.0):
        return ("const", a)
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    inner = np.vdot(a / na, b / nb)
    if abs(inner + 1.0) <= _ANTIPODAL:
        w = _detour_via(a / na) * (na + nb) / 2.0
        return ("detour", a, w, b)
    return ("lerp", a, b)


def connect_sym_rank_one(Sa: SymTensor, Sb: SymTensor,
                         tol: TolerancePolicy = DEFAULT_TOL) -> TensorPath:
    """Single symmetric-power curve; DifferentComponents on an even-order
    sign mismatch (the diagonal-sum sign separates the two components)."""
    if (Sa.dim, Sa.order, Sa.field) != (Sb.dim, Sb.order, Sb.field):
        raise ValueError("endpoints must share dimension, order and field")
    lam, u = _sym_rank1_witness(Sa, tol)
    mu, v = _sym_rank1_witness(Sb, tol)
    d, field = Sa.order, Sa.field
    if field == REAL and d % 2 == 0 and lam * mu < 0:
        raise DifferentComponents(sign_label(lam), sign_label(mu))
    sign, track = _sym_pair_track(lam, u, mu, v, d, field)
    kind = "detour-arc" if track[0] == "detour" else "factor-lerp"
    seg = SymPowerSegment(kind, field, d, sign, track)
    stratum = StratumDescriptor("sym-rank", field, 1, dim=Sa.dim, order=d)
    return TensorPath([seg], stratum)


def _sym_canonical_terms(D: SymRankDecomposition) -> list:
    """(coefficient, unit vector) pairs in the canonical per-field gauge."""
    out = []
    for lam, v in zip(D.coefficients, D.vectors):
        nv = float(np.linalg.norm(v))
        c = lam * nv ** D.order
        u = v / nv
        if D.field == REAL and D.order % 2 == 1 and c < 0:
            c, u = -c, -u
        if D.field == COMPLEX:
            theta = cmath.phase(complex(c))
            c = abs(complex(c))
            u = u * cmath.exp(1j * theta / D.order)
        out.append((c, u))
    return out


def _match_sym_terms(terms_a: list, terms_b: list, d: int, field: str) -> list:
    """Greedy nearest-vector matching; even order flips b-vectors freely,
    complex aligns by the best d-th root of unity."""
    even = field == REAL and d % 2 == 0
    if even:
        order_key = lambda item: (0 if item[0] > 0 else 1)
        terms_a = sorted(terms_a, key=order_key)
        terms_b = sorted(terms_b, key=order_key)
    unused = list(range(len(terms_b)))
    pairs = []
    for ca, ua in terms_a:
        best, best_score, best_vec = None, -np.inf, None
        for j in unused:
            cb, ub = terms_b[j]
            if even and (ca > 0) != (cb > 0):
                continue
            inner = np.vdot(ua, ub)
            if even:
                score = abs(float(np.real(inner)))
                vec = ub if float(np.real(inner)) >= 0 else -ub
            elif field == COMPLEX:
                roots = [cmath.exp(2j * math.pi * k / d) for k in range(d)]
                gains = [float(np.real(inner * w)) for w in roots]
                k = int(np.argmax(gains))
                score, vec = gains[k], ub * roots[k]
            else:
                score, vec = float(np.real(inner)), ub
            if score > best_score:
                best, best_score, best_vec = j, score, vec
        unused.remove(best)
        cb = terms_b[best][0]
        pairs.append((ca, ua, cb, best_vec))
    return pairs


def _sym_sum_segment(pairs: list, d: int, field: str) -> SymTermSumSegment:
    terms = []
    for ca, ua, cb, ub in pairs:
        sign, track = _sym_pair_track(ca, ua, cb, ub, d, field)
        terms.append((sign, track))
    return SymTermSumSegment(field, d, tuple(terms))


def _stratum_in_grid(path: TensorPath, expected: tuple, tol: TolerancePolicy) -> bool:
    """Internal acceptance: exact mrank pattern with margins >= gap_min."""
    ts = sorted(set([0.0, 1.0] + chebyshev_grid(tol.path_samples_default)
                    + path.joints()))
    for t in ts:
        value = path.eval(t)
        A = sym_embed(value) if isinstance(value, SymTensor) else value
        try:
            mr = mrank(A, tol)
        except ToleranceError:
            return False
        if tuple(mr.ranks) != expected or min(mr.margins) < tol.gap_min:
            return False
    return True


def connect_sym_rank_r(Da: SymRankDecomposition, Db: SymRankDecomposition,
                       tol: TolerancePolicy = DEFAULT_TOL,
                       rng: SplitMix64 | None = None,
                       depth: int = 8) -> TensorPath:
    """Simultaneous term-curve sum between two witnessed decompositions.

    Even order requires matching signatures (DifferentComponents otherwise).
    Membership is not guaranteed by the formula, so the candidate is checked
    on the sample grid and repaired through fresh random same-signature
    midpoint decompositions, recursion depth at most ``depth``.
    """
    if (Da.order, Da.field) != (Db.order, Db.field) or len(Da) != len(Db):
        raise ValueError("decompositions must share order, field and length")
    d, field, r = Da.order, Da.field, len(Da)
    n = Da.vectors[0].shape[0]
    even = field == REAL and d % 2 == 0
    if even:
        ia, ib = Da.signature(), Db.signature()
        if ia != ib:
            raise DifferentComponents(ComponentLabel("signature", ia),
                                      ComponentLabel("signature", ib))
    if r == 1:
        return connect_sym_rank_one(Da.tensor(), Db.tensor(), tol)
    if rng is None:
        rng = SplitMix64(0)
    stratum = StratumDescriptor("sym-rank", field, r, dim=n, order=d)
    expected = (min(r, n),) * d
    signature = Da.signature() if even else None

    def recurse(Pa: SymRankDecomposition, Pb: SymRankDecomposition,
                budget: int) -> list:
        pairs = _match_sym_terms(_sym_canonical_terms(Pa),
                                 _sym_canonical_terms(Pb), d, field)
        seg = _sym_sum_segment(pairs, d, field)
        candidate = TensorPath([seg], stratum)
        if _stratum_in_grid(candidate, expected, tol):
            return [seg]
        if budget <= 0:
            raise RetryExhausted(
                f"symmetric rank-{r} connection failed after exhausting "
                f"{depth} random midpoint detours")
        _, Dmid = sample_sym_rank_r(n, d, r, signature=signature, field=field,
                                    rng=rng, tol=tol)
        return recurse(Pa, Dmid, budget - 1) + recurse(Dmid, Pb, budget - 1)

    return TensorPath(recurse(Da, Db, depth), stratum)


# ---------------------------------------------------------------------------
# rank-two connectivity (via the decomposition witness)


def _term_tracks(term_a: RankOneFactors, term_b: RankOneFactors,
                 field: str) -> tuple:
    """Per-mode tracks for one matched rank-one term pair, scalars folded
    into the vectors (magnitude spread evenly, sign/phase on mode 1)."""
    d = len(term_a.factors)

    def spread(term: RankOneFactors) -> list[np.ndarray]:
        mag = abs(term.scalar) ** (1.0 / d)
        out = [mag * f for f in term.factors]
        if field == REAL:
            out[0] = out[0] * (1.0 if term.scalar >= 0 else -1.0)
        else:
            out[0] = out[0] * cmath.exp(1j * cmath.phase(complex(term.scalar)))
        return out

    va, vb = spread(term_a), spread(term_b)
    if field == REAL:
        flips = []
        inners = []
        for m in range(d):
            inner = float(np.dot(va[m], vb[m])) / max(
                np.linalg.norm(va[m]) * np.linalg.norm(vb[m]), 1e-300)
            inners.append(inner)
            if inner < 0:
                vb[m] = -vb[m]
                flips.append(m)
        if len(flips) % 2 == 1:
            # undo the least aligned flip to keep the term tensor unchanged
            m = min(flips, key=lambda k: abs(inners[k]))
            vb[m] = -vb[m]
    else:
        drift = 0.0
        for m in range(d):
            inner = complex(np.vdot(va[m], vb[m]))
            if abs(inner) > 1e-12:
                phi = -cmath.phase(inner)
                vb[m] = vb[m] * cmath.exp(1j * phi)
                drift += phi
        correction = cmath.exp(-1j * drift / d)
        for m in range(d):
            vb[m] = vb[m] * correction
    tracks = []
    for m in range(d):
        na = np.linalg.norm(va[m])
        nb = np.linalg.norm(vb[m])
        inner = np.vdot(va[m] / na, vb[m] / nb)
        if abs(inner + 1.0) <= _ANTIPODAL:
            w = _detour_via(va[m] / na) * (na + nb) / 2.0
            tracks.append(("detour", va[m], w, vb[m]))
        else:
            tracks.append(("lerp", va[m], vb[m]))
    return tuple(tracks)


def connect_rank_r(A: Hypermatrix, B: Hypermatrix, r: int,
                   tol: TolerancePolicy = DEFAULT_TOL,
                   rng: SplitMix64 | None = None, depth: int = 8) -> TensorPath:
    """Term-matched curves for rank one and rank two.

    Rank two recovers witnesses through the slice-pencil decomposition; no
    witnessed connector exists above rank two except border rank three on
    (2, 2, 2), so those inputs are refused rather than guessed.
    """
    if r == 1:
        return connect_rank_one(A, B, tol)
    if r == 3 and A.shape == (2, 2, 2) and A.field == REAL:
        return connect_brank3_222(A, B, tol)
    if r != 2:
        raise UnsupportedStratumError(
            f"no path construction is available for rank {r} on shape {A.shape}")
    if A.shape != B.shape or A.field != B.field:
        raise ValueError("endpoints must share shape and field")
    if rng is None:
        rng = SplitMix64(0)
    field = A.field
    stratum = StratumDescriptor("rank", field, 2, shape=A.shape)
    expected = expected_generic_mrank(A.shape, 2)

    def build(terms_a, terms_b) -> TermSumSegment:
        pairings = [(0, 1), (1, 0)]
        best, best_score = None, -np.inf
        for p in pairings:
            score = 0.0
            for k in range(2):
                tb = terms_b[p[k]]
                score += sum(abs(complex(np.vdot(fa, fb)))
                             for fa, fb in zip(terms_a[k].factors, tb.factors))
            if score > best_score:
                best, best_score = p, score
        terms = tuple(_term_tracks(terms_a[k], terms_b[best[k]], field)
                      for k in range(2))
        return TermSumSegment(field, terms)

    def recurse(terms_a, terms_b, budget: int) -> list:
        seg = build(terms_a, terms_b)
        candidate = TensorPath([seg], stratum)
        if _stratum_in_grid(candidate, expected, tol):
            return [seg]
        if budget <= 0:
            raise RetryExhausted(
                "rank-2 connection failed after exhausting random midpoint detours")
        _, terms_m = sample_rank_r(A.shape, 2, field, rng, tol)
        return (recurse(terms_a, terms_m, budget - 1)
                + recurse(terms_m, terms_b, budget - 1))

    terms_a = list(rank2_decompose(A, tol))
    terms_b = list(rank2_decompose(B, tol))
    return TensorPath(recurse(terms_a, terms_b, depth), stratum)


# ---------------------------------------------------------------------------
# multilinear-rank connectivity


def _core_det_signs(core: np.ndarray, square_modes: list[int]) -> tuple:
    signs = []
    for i in square_modes:
        M = np.moveaxis(core, i, 0).reshape(core.shape[i], -1)
        sign, _ = np.linalg.slogdet(M)
        signs.append(1 if sign > 0 else -1)
    return tuple(signs)


def _solve_gf2(effects: list[int], target: int) -> list[int] | None:
    """Indices of a subset of ``effects`` (bitmasks) xoring to ``target``."""
    basis: dict[int, tuple[int, int]] = {}  # high bit -> (mask, combo)

    def reduce(vec: int, combo: int):
        while vec:
            hb = vec.bit_length() - 1
            if hb not in basis:
                return vec, combo, hb
            bm, bc = basis[hb]
            vec ^= bm
            combo ^= bc
        return vec, combo, None

    for idx, e in enumerate(effects):
        vec, combo, hb = reduce(e, 1 << idx)
        if vec:
            basis[hb] = (vec, combo)
    vec, combo, _ = reduce(target, 0)
    if vec:
        return None
    return [k for k in range(len(effects)) if combo >> k & 1]


def _full_core_margin(core: np.ndarray, ranks: tuple,
                      tol: TolerancePolicy) -> float:
    worst = np.inf
    for i, r in enumerate(ranks):
        M = np.moveaxis(core, i, 0).reshape(r, -1)
        rank, margin = numerical_rank(M, tol)
        if rank != r:
            return 0.0
        worst = min(worst, margin)
    return float(worst)


def _random_full_core(ranks: tuple, field: str, square_modes: list[int],
                      want_signs: tuple, rng: SplitMix64,
                      tol: TolerancePolicy) -> np.ndarray:
    for _ in range(200):
        if field == COMPLEX:
            core = rng.complex_normals(ranks)
        else:
            core = rng.normals(ranks)
        if _full_core_margin(core, ranks, tol) < 1e-3:
            continue
        if field == REAL and square_modes:
            if _core_det_signs(core, square_modes) != want_signs:
                continue
        return core
    raise RetryExhausted("could not draw a usable midpoint core")


def _core_route(frames: tuple, core0: np.ndarray, core1: np.ndarray,
                ranks: tuple, field: str, square_modes: list[int],
                rng: SplitMix64, tol: TolerancePolicy, budget: int) -> list:
    signed = field == REAL and bool(square_modes)
    if signed:
        seg = CoreTransform(frames, ranks, square_modes[0], core0, core1, field)
        want = _core_det_signs(core0, square_modes)
    else:
        seg = CoreLerp(frames, core0, core1, field)
        want = ()
    ok = True
    for t in [0.0, 1.0] + chebyshev_grid(tol.path_samples_default):
        core_t = seg.core(t)
        if _full_core_margin(core_t, ranks, tol) < tol.gap_min:
            ok = False
            break
        if signed and _core_det_signs(core_t, square_modes) != want:
            ok = False
            break
    if ok:
        return [seg]
    if budget <= 0:
        raise RetryExhausted(
            "core interpolation failed after exhausting random midpoint detours")
    mid = _random_full_core(ranks, field, square_modes, want, rng, tol)
    return (_core_route(frames, core0, mid, ranks, field, square_modes, rng,
                        tol, budget - 1)
            + _core_route(frames, mid, core1, ranks, field, square_modes, rng,
                          tol, budget - 1))


def connect_mrank(A: Hypermatrix, B: Hypermatrix,
                  ranks: tuple[int, ...] | None = None,
                  tol: TolerancePolicy = DEFAULT_TOL,
                  rng: SplitMix64 | None = None, depth: int = 8) -> TensorPath:
    """Frame geodesics plus in-fiber core interpolation.

    Stages: orientation flip loops at A when square-mode determinant signs
    disagree and ambient room allows a repair (parity bookkeeping over GF(2));
    then a core interpolation inside A's fiber to B's transported core; then
    frame transport along per-mode geodesics. Saturated square mismatches
    with no repairable mode return DifferentComponents (definitive only when
    every mode is saturated; the mixed case is flagged as conjectural).
    """
    if A.shape != B.shape or A.field != B.field:
        raise ValueError("endpoints must share shape and field")
    field = A.field
    ranks_a = tuple(mrank(A, tol).ranks)
    ranks_b = tuple(mrank(B, tol).ranks)
    if ranks is None:
        ranks = ranks_a
    ranks = tuple(int(r) for r in ranks)
    if ranks_a != ranks or ranks_b != ranks:
        raise ToleranceError(
            f"endpoints do not both have multilinear rank {ranks}")
    if rng is None:
        rng = SplitMix64(0)
    stratum = StratumDescriptor("mrank", field, ranks, shape=A.shape)
    repA = tucker_compress(A, ranks, tol)
    repB = tucker_compress(B, ranks, tol)
    geos = tuple(GrassmannGeodesic(repA.frames[i], repB.frames[i])
                 for i in range(A.order))
    target_core = mode_multiply(repB.core.data,
                                [g.twist.conj().T for g in geos])
    frames_a = tuple(p.frame for p in repA.frames)
    core = repA.core.data.copy()
    total = math.prod(ranks)
    square_modes = [i for i, r in enumerate(ranks) if r * r == total]
    segments: list = []

    if field == REAL and square_modes:
        s_now = _core_det_signs(core, square_modes)
        s_want = _core_det_signs(target_core, square_modes)
        need = 0
        for pos, (x, y) in enumerate(zip(s_now, s_want)):
            if x != y:
                need |= 1 << pos
        if need:
            loop_modes = [m for m in range(A.order) if A.shape[m] > ranks[m]]
            effects = []
            for m in loop_modes:
                mask = 0
                for pos, i in enumerate(square_modes):
                    if m == i:
                        exponent = 1
                    else:
                        exponent = math.prod(
                            r for k, r in enumerate(ranks) if k not in (i, m))
                    if exponent % 2 == 1:
                        mask |= 1 << pos
                effects.append(mask)
            chosen = _solve_gf2(effects, need)
            if chosen is None:
                if mrank_saturation(stratum) == "saturated-square":
                    mode = square_mode(stratum)
                    raise DifferentComponents(
                        det_sign_mrank(A, mode, tol),
                        det_sign_mrank(B, mode, tol),
                        detail="square flattening determinant signs differ")
                label_a = ComponentLabel("sign", "".join(
                    "+" if s > 0 else "-" for s in s_now))
                label_b = ComponentLabel("sign", "".join(
                    "+" if s > 0 else "-" for s in s_want))
                raise DifferentComponents(
                    label_a, label_b,
                    detail="square-mode core determinant signs cannot be "
                           "reconciled by orientation loops",
                    conjectural=True)
            for k in chosen:
                m = loop_modes[k]
                loop = OrientationLoop(repA.frames[m])
                segments.append(FlipLoop(loop, m, frames_a, core.copy(), field))
                h = np.eye(ranks[m])
                h[0, 0] = -1.0
                core = mode_multiply(core, [h if j == m else None
                                            for j in range(A.order)])

    segments.extend(_core_route(frames_a, core, target_core, ranks, field,
                                square_modes, rng, tol, depth))
    segments.append(FrameTransport(geos, target_core, field))
    return TensorPath(segments, stratum)


# ---------------------------------------------------------------------------
# symmetric multilinear-rank connectivity


def _sym_core_margin(core: SymTensor, r: int, tol: TolerancePolicy) -> float:
    A = sym_embed(core)
    worst = np.inf
    for mode in range(1, core.order + 1):
        rank, margin = numerical_rank(flatten(A, mode), tol)
        if rank != r:
            return 0.0
        worst = min(worst, margin)
    return float(worst)


def _sym_matrix_core_signature(core: SymTensor, tol: TolerancePolicy) -> int:
    lam = np.linalg.eigvalsh(sym_embed(core).data)
    return int(np.sum(lam > 0))


def _random_sym_core(r: int, d: int, field: str, signature: int | None,
                     rng: SplitMix64, tol: TolerancePolicy) -> SymTensor:
    for _ in range(200):
        if signature is not None:
            Q = random_orthogonal(r, rng, field)
            lam = np.abs(rng.normals((r,))) + 0.1
            lam[signature:] *= -1.0
            M = (Q * lam) @ Q.T
            core = sym_extract(Hypermatrix(M, field), _LOOSE)
        else:
            length = sym_packed_length(r, d)
            packed = (rng.complex_normals((length,)) if field == COMPLEX
                      else rng.normals((length,)))
            core = SymTensor(r, d, field, packed)
        if _sym_core_margin(core, r, tol) >= 1e-3:
            return core
    raise RetryExhausted("could not draw a usable symmetric midpoint core")


def _sym_core_route(frame: np.ndarray, core0: SymTensor, core1: SymTensor,
                    r: int, signature: int | None, rng: SplitMix64,
                    tol: TolerancePolicy, budget: int) -> list:
    if signature is not None:
        # eigenvalue lerp in a shared rotating eigenbasis keeps the
        # signature exactly; a straight lerp does not
        seg = SymEigenCore(frame, core0, core1)
    else:
        seg = SymCoreLerp(frame, core0, core1)
    ok = True
    for t in [0.0, 1.0] + chebyshev_grid(tol.path_samples_default):
        core_t = seg.core(t)
        if _sym_core_margin(core_t, r, tol) < tol.gap_min:
            ok = False
            break
        if signature is not None and \
                _sym_matrix_core_signature(core_t, tol) != signature:
            ok = False
            break
    if ok:
        return [seg]
    if budget <= 0:
        raise RetryExhausted(
            "symmetric core interpolation failed after exhausting midpoint detours")
    mid = _random_sym_core(r, core0.order, core0.field, signature, rng, tol)
    return (_sym_core_route(frame, core0, mid, r, signature, rng, tol, budget - 1)
            + _sym_core_route(frame, mid, core1, r, signature, rng, tol, budget - 1))


def connect_sym_mrank(Sa: SymTensor, Sb: SymTensor, r: int,
                      tol: TolerancePolicy = DEFAULT_TOL,
                      rng: SplitMix64 | None = None,
                      depth: int = 8) -> TensorPath:
    """Shared-frame geodesic plus symmetric core interpolation.

    r = 1 delegates to the rank-one construction (sign components for even
    order); order 2 compares eigenvalue signatures first and returns
    DifferentComponents on a mismatch; higher orders with r >= 2 have no
    obstruction and always connect.
    """
    if (Sa.dim, Sa.order, Sa.field) != (Sb.dim, Sb.order, Sb.field):
        raise ValueError("endpoints must share dimension, order and field")
    if r == 1:
        path = connect_sym_rank_one(Sa, Sb, tol)
        path.stratum = StratumDescriptor("sym-mrank", Sa.field, 1,
                                         dim=Sa.dim, order=Sa.order)
        return path
    if rng is None:
        rng = SplitMix64(0)
    d, field = Sa.order, Sa.field
    frame_a, core_a = sym_tucker_compress(Sa, r, tol)
    frame_b, core_b = sym_tucker_compress(Sb, r, tol)
    signature = None
    if field == REAL and d == 2:
        sig_a = _sym_matrix_core_signature(core_a, tol)
        sig_b = _sym_matrix_core_signature(core_b, tol)
        if sig_a != sig_b:
            raise DifferentComponents(ComponentLabel("signature", sig_a),
                                      ComponentLabel("signature", sig_b))
        signature = sig_a
    geo = GrassmannGeodesic(frame_a, frame_b)
    twisted = mode_multiply(sym_embed(core_b).data, [geo.twist.conj().T] * d)
    target = sym_extract(Hypermatrix(twisted, field), _LOOSE)
    segments = _sym_core_route(frame_a.frame, core_a, target, r, signature,
                               rng, tol, depth)
    segments.append(SymFrameTransport(geo, target))
    stratum = StratumDescriptor("sym-mrank", field, r, dim=Sa.dim, order=d)
    return TensorPath(segments, stratum)


# ---------------------------------------------------------------------------
# border rank three on (2, 2, 2)


def connect_brank3_222(A: Hypermatrix, B: Hypermatrix,
                       tol: TolerancePolicy = DEFAULT_TOL) -> TensorPath:
    """Exact in-stratum path through conjugate-pair factor matrices.

    Requires equal sign-triple labels (DifferentComponents otherwise). Each
    mode's [Re | Im] factor matrix moves along a determinant-sign-preserving
    interpolation, so the hyperdeterminant stays negative at every t.
    """
    la = classify_brank3_222(A, tol)
    lb = classify_brank3_222(B, tol)
    if la != lb:
        raise DifferentComponents(la, lb)

    def factor_mats(T):
        vecs = [T.scalar * T.factors[0], T.factors[1], T.factors[2]]
        return tuple(np.column_stack([np.real(x), np.imag(x)]) for x in vecs)

    mats_a = factor_mats(brank3_conj_pair(A, tol))
    mats_b = factor_mats(brank3_conj_pair(B, tol))
    interps = tuple(gl_interpolator(Ma, Mb)
                    for Ma, Mb in zip(mats_a, mats_b))
    seg = ConjPairSegment(interps, mats_a, mats_b)
    stratum = StratumDescriptor("brank", REAL, 3, shape=(2, 2, 2))
    return TensorPath([seg], stratum)


# ---------------------------------------------------------------------------
# dispatch, verification, reporting


def connect(stratum: StratumDescriptor, a, b, *, witness_a=None,
            witness_b=None, tol: TolerancePolicy = DEFAULT_TOL,
            rng: SplitMix64 | None = None, depth: int = 8) -> TensorPath:
    """Route to the constructor for this stratum; witnesses are
    decomposition objects where the construction needs them."""
    kind = stratum.kind
    if kind == "rank":
        return connect_rank_r(a, b, stratum.rank, tol, rng, depth)
    if kind == "brank":
        if stratum.rank == 3 and stratum.shape == (2, 2, 2) and stratum.field == REAL:
            return connect_brank3_222(a, b, tol)
        raise UnsupportedStratumError(
            "border-rank paths exist only for rank 3 on shape (2, 2, 2)")
    if kind == "sym-rank":
        Da = witness_a if witness_a is not None else _derive_sym_witness(a, stratum, tol)
        Db = witness_b if witness_b is not None else _derive_sym_witness(b, stratum, tol)
        return connect_sym_rank_r(Da, Db, tol, rng, depth)
    if kind == "mrank":
        return connect_mrank(a, b, stratum.rank, tol, rng, depth)
    if kind == "sym-mrank":
        return connect_sym_mrank(a, b, stratum.rank, tol, rng, depth)
    raise UnsupportedStratumError(f"no path construction for stratum kind {kind!r}")


def _derive_sym_witness(S: SymTensor, stratum: StratumDescriptor,
                        tol: TolerancePolicy) -> SymRankDecomposition:
    from .classifiers import _sym_rank2_witness
    r = stratum.rank
    if r == 1:
        lam, v = _sym_rank1_witness(S, tol)
        return SymRankDecomposition(S.order, (lam,), (v,), S.field)
    if r == 2:
        return _sym_rank2_witness(S, tol)
    raise UnsupportedStratumError(
        f"symmetric rank-{r} paths need an explicit decomposition witness")


@dataclass
class SampleCheck:
    t: float
    ok: bool
    ranks: tuple
    margin: float
    label: str | None
    note: str = ""


@dataclass
class PathReport:
    stratum: str
    passed: bool
    samples: list
    min_margin: float
    joint_defect: float
    exact_certificate: bool
    label: str | None

    def to_json(self) -> dict:
        return {"stratum": self.stratum, "passed": self.passed,
                "min_margin": self.min_margin,
                "joint_defect": self.joint_defect,
                "exact_certificate": self.exact_certificate,
                "label": self.label,
                "samples": [{"t": s.t, "ok": s.ok, "mrank": list(s.ranks),
                             "min_margin": s.margin, "label": s.label,
                             "note": s.note} for s in self.samples]}

    def csv_rows(self) -> tuple[list[str], list[list]]:
        header = ["t", "ok", "mrank", "min_margin", "label"]
        rows = [[s.t, int(s.ok), " ".join(str(r) for r in s.ranks), s.margin,
                 s.label if s.label is not None else ""]
                for s in self.samples]
        return header, rows


def _witness_signature(witness: dict | None) -> int | None:
    if witness is None or witness.get("kind") != "sym-terms":
        return None
    return sum(1 for c in witness["coefficients"] if float(np.real(c)) > 0)


def _certify_sample(stratum: StratumDescriptor, value, witness,
                    tol: TolerancePolicy) -> SampleCheck:
    kind = stratum.kind
    A = sym_embed(value) if isinstance(value, SymTensor) else value
    try:
        mr = mrank(A, tol)
    except ToleranceError as exc:
        return SampleCheck(0.0, False, (), 0.0, None, f"mrank failed: {exc}")
    ranks = tuple(mr.ranks)
    margin = float(min(mr.margins))
    ok = True
    label: ComponentLabel | None = None
    note = ""
    try:
        if kind == "mrank":
            ok = ranks == stratum.rank
            case = mrank_saturation(stratum)
            if stratum.field == REAL and case == "saturated-square" and ok:
                label = det_sign_mrank(A, square_mode(stratum), tol)
            elif case == "none":
                label = SINGLE
        elif kind == "rank":
            r = stratum.rank
            expected = expected_generic_mrank(stratum.shape, r)
            ok = ranks == expected
            if r == 1:
                ok = ok and is_rank_one(A, tol)[0]
                label = SINGLE
            elif stratum.shape == (2, 2, 2) and stratum.field == REAL:
                want = Kind222.RANK2 if r == 2 else Kind222.BORDER_RANK3
                cls = classify_222(A, tol)
                ok = ok and cls.kind is want
                if r == 3 and ok:
                    label = classify_brank3_222(A, tol)
            elif r == 2:
                rank2_decompose(A, tol)
                note = "decomposition-certified"
            else:
                note = "unverifiable-exactly"
        elif kind == "brank":
            cls = classify_222(A, tol)
            ok = cls.kind is Kind222.BORDER_RANK3
            if ok:
                label = classify_brank3_222(A, tol)
        elif kind == "sym-rank":
            r = stratum.rank
            expected = (min(r, stratum.dim),) * stratum.order
            ok = ranks == expected
            sig = _witness_signature(witness)
            if stratum.field == REAL and stratum.order % 2 == 0:
                if sig is not None:
                    label = ComponentLabel("signature", sig)
                elif r == 1:
                    label = classify(stratum, value, tol)
            elif stratum.field == REAL:
                label = SINGLE
        elif kind == "sym-mrank":
            ok = ranks == (stratum.rank,) * stratum.order
            if ok:
                try:
                    label = classify(stratum, value, tol)
                except UnsupportedStratumError:
                    label = None
        else:
            ok = True
            note = "unverifiable-exactly"
    except (ToleranceError, DegenerateError, UnsupportedStratumError) as exc:
        return SampleCheck(0.0, False, ranks, margin, None, str(exc))
    if stratum.field == COMPLEX and label is None:
        label = SINGLE
    return SampleCheck(0.0, ok, ranks, margin,
                       None if label is None else str(label), note)


def path_verify(path: TensorPath, K: int | None = None,
                tol: TolerancePolicy = DEFAULT_TOL) -> PathReport:
    """Evaluate on a Chebyshev grid plus endpoints and joints; certify each
    sample for the target stratum; check joint continuity and classifier
    constancy. Failures become report content, never exceptions."""
    if K is None:
        K = tol.path_samples_default
    ts = sorted(set([0.0, 1.0] + chebyshev_grid(K) + path.joints()))
    samples: list[SampleCheck] = []
    passed = True
    exact = True
    for t in ts:
        value = path.eval(t)
        check = _certify_sample(path.stratum, value, path.witness(t), tol)
        check.t = t
        if check.note in ("unverifiable-exactly",):
            exact = False
        passed = passed and check.ok
        samples.append(check)
    labels = {s.label for s in samples if s.label is not None}
    if len(labels) > 1:
        passed = False
    scale = max(_value_norm(path.eval(0.0)), _value_norm(path.eval(1.0)), 1e-300)
    joint_defect = 0.0
    n = len(path.segments)
    for k in range(1, n):
        left = path.segments[k - 1].value(1.0)
        right = path.segments[k].value(0.0)
        joint_defect = max(joint_defect, value_diff_norm(left, right) / scale)
    if joint_defect > 1e-10:
        passed = False
    min_margin = min((s.margin for s in samples), default=0.0)
    label = labels.pop() if len(labels) == 1 else None
    return PathReport(format_stratum(path.stratum), passed, samples,
                      float(min_margin), float(joint_defect), exact, label)
