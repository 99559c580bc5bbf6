"""Precoder construction for the full-duplex Bob scheme and the half-duplex baseline.

With Bob jamming, the channel is first reduced onto the subspaces that
Eve's and Bob's own jammers leave clean. Candidate (message, jamming)
vector pairs are then extracted in three classes:

* C1: the message lies in the null space of Eve's reduced channel;
* C2: message and jamming land on the same direction at Eve, and the
  jamming is invisible to Bob's receive antennas;
* C3: as C2, but Bob sees his own jamming.

Pairs are picked C1 -> C2 -> C3 while Bob still has receive dimensions
left (a C3 stream costs two of them).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import dof
from .channel import ChannelSet
from .numerics import RANK_TOL, NullBasis, gen_eig_hermitian, left_null_basis, null_basis

REG_SCALE = 1e-12


@dataclass(frozen=True, eq=False)
class ReducedChannels:
    u_b0: NullBasis
    u_e0: NullBasis
    h_ba_bar: np.ndarray
    h_bb_bar: np.ndarray
    g_ea_bar: np.ndarray
    g_eb_bar: np.ndarray

    @property
    def helper(self) -> dof.HelperConfig:
        """Antenna counts of the equivalent helper channel as realised by the null spaces."""
        return dof.HelperConfig(
            n_s=self.g_ea_bar.shape[1],
            n_h=self.g_eb_bar.shape[1],
            n_d=self.h_ba_bar.shape[0],
            n_ep=self.g_ea_bar.shape[0],
        )


@dataclass(frozen=True, eq=False)
class Candidate:
    cls: str
    v_a: np.ndarray
    v_b: np.ndarray  # zeros for C1


@dataclass(frozen=True, eq=False)
class Candidates:
    c1: list
    c2: list
    c3: list
    n_s: int = 0
    n_h: int = 0

    @property
    def counts(self) -> tuple[int, int, int]:
        return len(self.c1), len(self.c2), len(self.c3)


@dataclass(frozen=True, eq=False)
class PrecoderPair:
    """Alice's and Bob's precoders.

    ``jam_of[i]`` is the column of ``v_b`` paired with Alice's stream ``i``,
    or -1 when the stream needs no jamming partner. ``generic`` is False when
    the realised candidate counts differ from the generic closed form.
    """

    v_a: np.ndarray
    v_b: np.ndarray
    stream_classes: tuple = ()
    jam_of: tuple = ()
    n_b_t: int = 0
    generic: bool = True
    pairs: tuple = field(default=(), repr=False)

    @property
    def k(self) -> int:
        return self.v_a.shape[1]

    @property
    def q_a(self) -> np.ndarray:
        return self.v_a @ self.v_a.conj().T

    @property
    def q_b(self) -> np.ndarray:
        return self.v_b @ self.v_b.conj().T


def reduce(cs: ChannelSet) -> ReducedChannels:
    """Project onto the left null spaces of Eve's jamming at Bob and at Eve."""
    u_b0 = left_null_basis(cs.h_be)
    u_e0 = left_null_basis(cs.g_ee)
    ub = u_b0.basis.conj().T
    ue = u_e0.basis.conj().T
    return ReducedChannels(
        u_b0=u_b0,
        u_e0=u_e0,
        h_ba_bar=ub @ cs.h_ba,
        h_bb_bar=ub @ cs.h_bb,
        g_ea_bar=ue @ cs.g_ea,
        g_eb_bar=ue @ cs.g_eb,
    )


def _new_pairs(za, zb, prev_a, prev_b):
    """Pairs from ``[za; zb]`` whose message parts add new directions.

    Earlier pairs are subtracted in pair space, not just in the message
    part, so the alignment of every combination survives the projection.
    The returned message vectors are orthonormal and orthogonal to
    ``prev_a`` (itself orthonormal).
    """
    if za.shape[1] == 0:
        return []
    coef = prev_a.conj().T @ za
    pa = za - prev_a @ coef
    pb = zb - prev_b @ coef
    _, s, wh = np.linalg.svd(pa, full_matrices=False)
    ref = np.linalg.norm(za, 2)
    if ref == 0.0:
        return []
    out = []
    for i in np.flatnonzero(s > RANK_TOL * ref):
        w = wh[i].conj()
        out.append((pa @ w / s[i], pb @ w / s[i]))
    return out


def enumerate_candidates(rc: ReducedChannels) -> Candidates:
    g_ea, g_eb, h_bb = rc.g_ea_bar, rc.g_eb_bar, rc.h_bb_bar
    n_s = g_ea.shape[1]
    n_h = g_eb.shape[1]

    n1 = null_basis(g_ea).basis
    c1 = [Candidate("C1", n1[:, i].copy(), np.zeros(n_h, dtype=complex)) for i in range(n1.shape[1])]
    prev_a = n1
    prev_b = np.zeros((n_h, n1.shape[1]), dtype=complex)

    c2 = []
    if n_h > 0:
        n_bb = null_basis(h_bb).basis
        if n_bb.shape[1] > 0:
            z = null_basis(np.hstack([g_ea, g_eb @ n_bb])).basis
            for va, vb in _new_pairs(z[:n_s], n_bb @ z[n_s:], prev_a, prev_b):
                c2.append(Candidate("C2", va, vb))
    if c2:
        prev_a = np.hstack([prev_a, np.column_stack([c.v_a for c in c2])])
        prev_b = np.hstack([prev_b, np.column_stack([c.v_b for c in c2])])

    c3 = []
    if n_h > 0:
        z = null_basis(np.hstack([g_ea, g_eb])).basis
        for va, vb in _new_pairs(z[:n_s], z[n_s:], prev_a, prev_b):
            c3.append(Candidate("C3", va, vb))
    return Candidates(c1, c2, c3, n_s, n_h)


_COST = {"C1": 1, "C2": 1, "C3": 2}


def select_pairs(cands: Candidates, n_d: int, n_s: int, h_ba_bar=None) -> PrecoderPair:
    """Greedy pick C1 -> C2 -> C3 under Bob's receive budget ``n_d``.

    Unscaled: message vectors are unit norm, jamming vectors keep the
    magnitude that makes each pair exactly aligned. When a class cannot be
    taken whole and ``h_ba_bar`` is given, its strongest members at Bob are
    kept, in their original order.
    """
    chosen = []
    used = 0
    for group in (cands.c1, cands.c2, cands.c3):
        if not group:
            continue
        cost = _COST[group[0].cls]
        room = min(n_s - len(chosen), (n_d - used) // cost)
        take = max(min(room, len(group)), 0)
        if take < len(group) and h_ba_bar is not None and take > 0:
            gain = [np.linalg.norm(h_ba_bar @ c.v_a) for c in group]
            keep = sorted(np.argsort(gain, kind="stable")[::-1][:take])
            picked = [group[i] for i in keep]
        else:
            picked = group[:take]
        chosen.extend(picked)
        used += cost * len(picked)
        if take < len(group):
            break
    if chosen:
        v_a = np.column_stack([c.v_a for c in chosen])
    else:
        v_a = np.zeros((cands.n_s, 0), dtype=complex)
    jam = [c for c in chosen if c.cls != "C1"]
    v_b = np.column_stack([c.v_b for c in jam]) if jam else np.zeros((cands.n_h, 0), dtype=complex)
    jam_of = []
    j = 0
    for c in chosen:
        if c.cls == "C1":
            jam_of.append(-1)
        else:
            jam_of.append(j)
            j += 1
    return PrecoderPair(
        v_a=v_a,
        v_b=v_b,
        stream_classes=tuple(c.cls for c in chosen),
        jam_of=tuple(jam_of),
        n_b_t=cands.n_h,
        pairs=tuple(chosen),
    )


def scale_power(pp: PrecoderPair, power: float) -> PrecoderPair:
    """Equal power per stream: every column of ``v_a`` gets ``P/k``, of ``v_b`` ``P/k_b``."""

    def _scale(v):
        if v.shape[1] == 0:
            return v
        norms = np.linalg.norm(v, axis=0)
        return v * (np.sqrt(power / v.shape[1]) / norms)

    return PrecoderPair(
        v_a=_scale(pp.v_a),
        v_b=_scale(pp.v_b),
        stream_classes=pp.stream_classes,
        jam_of=pp.jam_of,
        n_b_t=pp.n_b_t,
        generic=pp.generic,
        pairs=pp.pairs,
    )


def _regularized(a, b):
    eps = REG_SCALE * float(np.trace(a).real + np.trace(b).real)
    if eps <= 0.0:
        eps = REG_SCALE
    n = a.shape[0]
    return a + eps * np.eye(n), b + eps * np.eye(n)


def _three_node(cs: ChannelSet) -> PrecoderPair:
    rc = reduce(cs)
    h, g = rc.h_ba_bar, rc.g_ea_bar
    n_a = cs.cfg.n_a
    a, b = _regularized(h.conj().T @ h, g.conj().T @ g)
    lam, vecs = gen_eig_hermitian(a, b)
    target = dof.sdof_active(cs.cfg)
    cap = target if target > 0 else 1
    k = min(int(np.count_nonzero(lam > 1.0)), cap)
    v_a = vecs[:, :k]
    if k:
        v_a = v_a / np.linalg.norm(v_a, axis=0)
    g_norm = np.linalg.norm(g, 2) if g.size else 0.0
    classes = []
    for i in range(k):
        leak = np.linalg.norm(g @ v_a[:, i]) if g.size else 0.0
        classes.append("C1" if leak <= 1e-9 * max(g_norm, 1e-300) or g.size == 0 else "GE")
    return PrecoderPair(
        v_a=v_a,
        v_b=np.zeros((0, 0), dtype=complex),
        stream_classes=tuple(classes),
        jam_of=tuple(-1 for _ in range(k)),
        n_b_t=0,
        generic=True,
    )


def build_precoders(cs: ChannelSet) -> PrecoderPair:
    """Precoders for Bob's split in ``cs``, scaled to ``tr(Q_a) = tr(Q_b) = P``.

    Without jamming antennas this is the classic three-node design on the
    reduced channels: the generalized eigendirections where Bob's channel
    beats Eve's (eigenvalue above 1), at most as many as the S.D.o.F. of
    the split, or one when that is zero.
    """
    if cs.cfg.n_b_t == 0:
        return scale_power(_three_node(cs), cs.power)
    rc = reduce(cs)
    cands = enumerate_candidates(rc)
    helper = rc.helper
    pp = select_pairs(cands, helper.n_d, helper.n_s, rc.h_ba_bar)
    expected = dof.candidate_counts(helper)
    generic = True
    if _prop1_holds(cs.cfg):
        generic = cands.counts == expected and helper == cs.cfg.helper()
    pp = PrecoderPair(pp.v_a, pp.v_b, pp.stream_classes, pp.jam_of, cs.cfg.n_b_t, bool(generic), pp.pairs)
    return scale_power(pp, cs.power)


def _prop1_holds(cfg: dof.AntennaConfig) -> bool:
    return cfg.n_e_t < min(cfg.n_b_r, cfg.n_e_r)


def hd_baseline(cs: ChannelSet, k: int) -> PrecoderPair:
    """Half-duplex Bob: top-``k`` generalized eigenvectors of the whitened Gram pencil."""
    if k < 1:
        raise ValueError("k must be >= 1")
    hd = cs.resplit(0)
    p, s2 = hd.power, hd.sigma2
    n_e_t = hd.cfg.n_e_t
    h_ba, h_be, g_ea, g_ee = hd.h_ba, hd.h_be, hd.g_ea, hd.g_ee
    m_b = s2 * np.eye(h_ba.shape[0], dtype=complex)
    m_e = s2 * np.eye(g_ea.shape[0], dtype=complex)
    if n_e_t > 0:
        m_b = m_b + (p / n_e_t) * h_be @ h_be.conj().T
        m_e = m_e + (hd.rho_e * p / n_e_t) * g_ee @ g_ee.conj().T
    a = h_ba.conj().T @ np.linalg.solve(m_b, h_ba)
    b = g_ea.conj().T @ np.linalg.solve(m_e, g_ea)
    a, b = _regularized(0.5 * (a + a.conj().T), 0.5 * (b + b.conj().T))
    k = min(k, a.shape[0])
    _, vecs = gen_eig_hermitian(a, b, k)
    v_a = vecs / np.linalg.norm(vecs, axis=0)
    pp = PrecoderPair(
        v_a=v_a,
        v_b=np.zeros((0, 0), dtype=complex),
        stream_classes=tuple("HD" for _ in range(k)),
        jam_of=tuple(-1 for _ in range(k)),
        n_b_t=0,
    )
    return scale_power(pp, p)


def alignment_residuals(rc: ReducedChannels, pp: PrecoderPair) -> np.ndarray:
    """Relative class-condition residual of every stream in ``pp``.

    Works on scaled precoders: for aligned classes it measures how far
    Eve's view of the message is from the line spanned by the paired
    jamming; C2 also adds Bob's view of its own jamming.
    """
    g_ea, g_eb, h_bb = rc.g_ea_bar, rc.g_eb_bar, rc.h_bb_bar
    g_scale = max(np.linalg.norm(g_ea, 2), 1e-300) if g_ea.size else 1.0
    out = []
    for i, cls in enumerate(pp.stream_classes):
        va = pp.v_a[:, i]
        ya = g_ea @ va
        if cls == "C1":
            out.append(np.linalg.norm(ya) / (g_scale * np.linalg.norm(va)) if ya.size else 0.0)
            continue
        vb = pp.v_b[:, pp.jam_of[i]]
        yb = g_eb @ vb
        nb = np.vdot(yb, yb).real
        proj = yb * (np.vdot(yb, ya) / nb) if nb > 0 else 0.0 * yb
        r = np.linalg.norm(ya - proj) / (g_scale * np.linalg.norm(va))
        if cls == "C2" and h_bb.size:
            r = max(r, np.linalg.norm(h_bb @ vb) / (np.linalg.norm(h_bb, 2) * np.linalg.norm(vb)))
        out.append(r)
    return np.asarray(out)
