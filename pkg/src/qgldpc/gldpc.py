"""Iterative GLDPC decoding with SOGRAND check-node updates.

Flooding schedule: every check node soft-decodes its local view against
the local syndrome and returns extrinsic LLRs; every variable node (degree
two per graph) combines the channel prior with both incoming messages,
takes a hard decision, and sends back extrinsic messages.  Decoding stops
as soon as the hard decision reproduces the syndrome.

Two variants: independent X/Z decoding on the two classical Tanner graphs,
and a correlation-aware variant that fuses four-valued Pauli beliefs from
both graphs at each qubit.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .channel import ChannelPrior, PauliErrorPattern, clamp_llr
from .codes import GldpcCode, TannerGraph
from .sogrand import SograndParams, sogrand_decode

BELIEF_FLOOR = 1e-12

# Pauli belief columns, and argmax tie preference I < X < Z < Y.
_I, _X, _Y, _Z = 0, 1, 2, 3
_TIE_ORDER = np.array([_I, _X, _Z, _Y])


@dataclass
class SideResult:
    e_hat: np.ndarray
    converged: bool
    iterations_used: int
    app: np.ndarray                      # final per-bit APP LLRs
    syndrome_trace: list[bool] = field(default_factory=list)
    osd_invoked: bool = False


@dataclass
class DecodeResult:
    z_side: SideResult  # estimate of e_z (decoded on the X graph)
    x_side: SideResult  # estimate of e_x (decoded on the Z graph)

    @property
    def converged(self) -> bool:
        return self.z_side.converged and self.x_side.converged

    @property
    def e_hat(self) -> PauliErrorPattern:
        return PauliErrorPattern(e_x=self.x_side.e_hat, e_z=self.z_side.e_hat)

    @property
    def iterations_used(self) -> int:
        return max(self.z_side.iterations_used, self.x_side.iterations_used)


def _cn_update(graph: TannerGraph, v2c: np.ndarray, s: np.ndarray,
               sog_params: SograndParams) -> np.ndarray:
    """All check nodes in parallel; reads only previous-iteration messages."""
    c2v = np.empty_like(v2c)
    for j in range(graph.m):
        out = sogrand_decode(graph.component, v2c[j],
                             graph.local_syndrome(s, j), sog_params)
        c2v[j] = out.L_E
    return c2v


def decode_side(graph: TannerGraph, L_ch, s, n_iter: int = 20,
                sog_params: SograndParams = SograndParams()) -> SideResult:
    """Decode one binary error component on one Tanner graph."""
    L_ch = np.asarray(L_ch, dtype=float)
    s = np.asarray(s, dtype=np.uint8) % 2
    if n_iter < 1:
        raise ValueError("n_iter must be >= 1")

    cn_idx, slot_idx = graph.vn_cn, graph.vn_slot
    v2c = np.zeros((graph.m, graph.component.n_c))
    v2c[cn_idx, slot_idx] = L_ch[:, None]

    e_hat = (L_ch < 0).astype(np.uint8)
    app = L_ch.copy()
    trace: list[bool] = []
    for it in range(1, n_iter + 1):
        c2v = _cn_update(graph, v2c, s, sog_params)
        incoming = c2v[cn_idx, slot_idx]                   # (n, 2)
        app = L_ch + incoming.sum(axis=1)
        e_hat = (app < 0).astype(np.uint8)                 # L_APP >= 0 -> 0
        v2c[cn_idx, slot_idx] = clamp_llr(app[:, None] - incoming)
        ok = bool(np.array_equal((graph.flat.astype(np.int64) @ e_hat) % 2, s))
        trace.append(ok)
        if ok:
            return SideResult(e_hat=e_hat, converged=True, iterations_used=it,
                              app=app, syndrome_trace=trace)
    return SideResult(e_hat=e_hat, converged=False, iterations_used=n_iter,
                      app=app, syndrome_trace=trace)


def decode_independent(code: GldpcCode, priors: ChannelPrior, s_x, s_z,
                       n_iter: int = 20,
                       sog_params: SograndParams = SograndParams()) -> DecodeResult:
    """Decode Z errors on the X graph and X errors on the Z graph, independently."""
    z_side = decode_side(code.x_graph, priors.llr_z, s_z, n_iter, sog_params)
    x_side = decode_side(code.z_graph, priors.llr_x, s_x, n_iter, sog_params)
    return DecodeResult(z_side=z_side, x_side=x_side)


def _beliefs_from_llr(L: np.ndarray, about_x: bool) -> np.ndarray:
    """Map a binary LLR message into four-valued Pauli beliefs.

    A message about the X-error component (from an H_Z-graph check) says
    nothing about Z errors: P(X) = P(Y) = q/2, P(I) = P(Z) = (1-q)/2, with
    q = 1/(1+exp(L)).  Mirrored for messages about the Z component.
    """
    q = np.exp(-np.logaddexp(0.0, L))
    out = np.empty(L.shape + (4,))
    if about_x:
        out[..., _X] = out[..., _Y] = 0.5 * q
        out[..., _I] = out[..., _Z] = 0.5 * (1.0 - q)
    else:
        out[..., _Z] = out[..., _Y] = 0.5 * q
        out[..., _I] = out[..., _X] = 0.5 * (1.0 - q)
    return out


def _marginal_llr(P: np.ndarray, about_x: bool) -> np.ndarray:
    if about_x:
        num = P[..., _I] + P[..., _Z]
        den = P[..., _X] + P[..., _Y]
    else:
        num = P[..., _I] + P[..., _X]
        den = P[..., _Z] + P[..., _Y]
    return clamp_llr(np.log(np.maximum(num, BELIEF_FLOOR))
                     - np.log(np.maximum(den, BELIEF_FLOOR)))


def _argmax_pauli(P_app: np.ndarray) -> np.ndarray:
    """Per-qubit argmax with tie order I, X, Z, Y."""
    reordered = P_app[:, _TIE_ORDER]
    return _TIE_ORDER[np.argmax(reordered, axis=1)]


def decode_correlated(code: GldpcCode, pauli_prior, s_x, s_z, n_iter: int = 20,
                      sog_params: SograndParams = SograndParams()) -> DecodeResult:
    """Joint X/Z decoding with Pauli-belief fusion at the variable nodes.

    Check nodes on both graphs still run binary SOGRAND; variable nodes map
    the four incoming binary LLRs into Pauli beliefs, fuse them with the
    channel prior, and marginalize the extrinsic beliefs back into binary
    LLRs for each graph.  Terminates when both syndrome equations hold.
    """
    prior = np.asarray(pauli_prior, dtype=float)
    s_x = np.asarray(s_x, dtype=np.uint8) % 2
    s_z = np.asarray(s_z, dtype=np.uint8) % 2
    xg, zg = code.x_graph, code.z_graph
    n = code.n

    # Channel marginals initialize both graphs' messages.
    llr_z0 = _marginal_llr(prior, about_x=False)  # about e_z, to the X graph
    llr_x0 = _marginal_llr(prior, about_x=True)   # about e_x, to the Z graph
    v2c_x = np.zeros((xg.m, xg.component.n_c))
    v2c_x[xg.vn_cn, xg.vn_slot] = llr_z0[:, None]
    v2c_z = np.zeros((zg.m, zg.component.n_c))
    v2c_z[zg.vn_cn, zg.vn_slot] = llr_x0[:, None]

    e_z = (llr_z0 < 0).astype(np.uint8)
    e_x = (llr_x0 < 0).astype(np.uint8)
    app_z, app_x = llr_z0.copy(), llr_x0.copy()
    trace: list[bool] = []
    iterations = n_iter
    converged = False
    for it in range(1, n_iter + 1):
        c2v_x = _cn_update(xg, v2c_x, s_z, sog_params)  # messages about e_z
        c2v_z = _cn_update(zg, v2c_z, s_x, sog_params)  # messages about e_x

        in_x = c2v_x[xg.vn_cn, xg.vn_slot]              # (n, 2) LLRs about e_z
        in_z = c2v_z[zg.vn_cn, zg.vn_slot]              # (n, 2) LLRs about e_x
        bel_x = _beliefs_from_llr(in_x, about_x=False)  # (n, 2, 4)
        bel_z = _beliefs_from_llr(in_z, about_x=True)

        P_app = prior * bel_x.prod(axis=1) * bel_z.prod(axis=1)
        P_app /= P_app.sum(axis=1, keepdims=True)
        P_app = np.maximum(P_app, BELIEF_FLOOR)
        P_app /= P_app.sum(axis=1, keepdims=True)

        symbol = _argmax_pauli(P_app)
        e_x = ((symbol == _X) | (symbol == _Y)).astype(np.uint8)
        e_z = ((symbol == _Z) | (symbol == _Y)).astype(np.uint8)
        app_z = _marginal_llr(P_app, about_x=False)
        app_x = _marginal_llr(P_app, about_x=True)

        # Extrinsic: divide out the incoming belief, marginalize per graph.
        ext_x = P_app[:, None, :] / np.maximum(bel_x, BELIEF_FLOOR)
        ext_z = P_app[:, None, :] / np.maximum(bel_z, BELIEF_FLOOR)
        v2c_x[xg.vn_cn, xg.vn_slot] = _marginal_llr(ext_x, about_x=False)
        v2c_z[zg.vn_cn, zg.vn_slot] = _marginal_llr(ext_z, about_x=True)

        ok = (np.array_equal((code.h_x.astype(np.int64) @ e_z) % 2, s_z)
              and np.array_equal((code.h_z.astype(np.int64) @ e_x) % 2, s_x))
        trace.append(ok)
        if ok:
            converged = True
            iterations = it
            break

    z_side = SideResult(e_hat=e_z, converged=converged, iterations_used=iterations,
                        app=app_z, syndrome_trace=trace)
    x_side = SideResult(e_hat=e_x, converged=converged, iterations_used=iterations,
                        app=app_x, syndrome_trace=list(trace))
    return DecodeResult(z_side=z_side, x_side=x_side)
