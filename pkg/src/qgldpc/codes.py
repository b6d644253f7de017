"""Component codes, Tanner graphs with ordered edges, and assembled CSS codes.

A quantum code is given here by two classical Tanner graphs: ``x_graph``
defines H_X (checking Z errors) and ``z_graph`` defines H_Z (checking X
errors).  Every variable node has degree exactly two in each graph; the
per-check edge orderings are semantic, since they define the local views
handed to the component decoder.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import gf2


class CodeFormatError(ValueError):
    """Raised when a code file fails to parse or violates an invariant."""


@dataclass(frozen=True)
class ComponentCode:
    H: np.ndarray  # (m_c, n_c) parity-check matrix, uint8

    def __post_init__(self):
        H = np.asarray(self.H, dtype=np.uint8) % 2
        if H.ndim != 2:
            raise CodeFormatError("component matrix must be 2-D")
        if H.shape[0] > H.shape[1]:
            raise CodeFormatError("component matrix has more rows than columns")
        object.__setattr__(self, "H", H)
        H.setflags(write=False)

    @property
    def m_c(self) -> int:
        return self.H.shape[0]

    @property
    def n_c(self) -> int:
        return self.H.shape[1]


@dataclass
class TannerGraph:
    n: int                       # number of variable nodes
    cns: list[list[int]]         # per check node: ordered incident VN indices
    component: ComponentCode

    # derived, filled by __post_init__
    flat: np.ndarray = field(init=False, repr=False)
    vn_cn: np.ndarray = field(init=False, repr=False)    # (n, 2) check index per VN edge
    vn_slot: np.ndarray = field(init=False, repr=False)  # (n, 2) slot within the check

    def __post_init__(self):
        n_c = self.component.n_c
        degree = [[] for _ in range(self.n)]
        for j, cn in enumerate(self.cns):
            if len(cn) != n_c:
                raise CodeFormatError(
                    f"check {j} has {len(cn)} edges, component length is {n_c}")
            for slot, vn in enumerate(cn):
                if not 0 <= vn < self.n:
                    raise CodeFormatError(f"check {j} references VN {vn} out of range")
                degree[vn].append((j, slot))
        bad = [i for i, d in enumerate(degree) if len(d) != 2]
        if bad:
            raise CodeFormatError(
                f"variable nodes must have degree exactly 2; violated at {bad[:8]}")
        self.vn_cn = np.array([[d[0][0], d[1][0]] for d in degree], dtype=np.intp)
        self.vn_slot = np.array([[d[0][1], d[1][1]] for d in degree], dtype=np.intp)
        self.flat = flatten(self)
        self.flat.setflags(write=False)

    @property
    def m(self) -> int:
        return len(self.cns)

    def local_view(self, x, j: int) -> np.ndarray:
        """Subvector of x at check j, in the check's edge order."""
        if not 0 <= j < self.m:
            raise IndexError(f"check index {j} out of range [0, {self.m})")
        x = np.asarray(x)
        if x.shape[0] != self.n:
            raise ValueError(f"vector length {x.shape[0]} != n = {self.n}")
        return x[self.cns[j]]

    def local_syndrome(self, s, j: int) -> np.ndarray:
        """Rows of the global syndrome belonging to check j."""
        m_c = self.component.m_c
        return np.asarray(s)[j * m_c:(j + 1) * m_c]


def flatten(g: TannerGraph) -> np.ndarray:
    """Stack the component constraints of all checks into a global matrix.

    Row j*m_c + t carries component row t of check j, scattered to the
    check's incident variable nodes.  Repeated incidences XOR-accumulate.
    """
    m_c, n_c = g.component.m_c, g.component.n_c
    out = np.zeros((g.m * m_c, g.n), dtype=np.uint8)
    for j, cn in enumerate(g.cns):
        for t in range(m_c):
            row = out[j * m_c + t]
            for slot in np.flatnonzero(g.component.H[t]):
                row[cn[slot]] ^= 1
    return out


def local_view(x, j: int, g: TannerGraph) -> np.ndarray:
    return g.local_view(x, j)


@dataclass(frozen=True)
class LogicalBasis:
    z_logicals: list[np.ndarray]
    x_logicals: list[np.ndarray]


@dataclass
class GldpcCode:
    name: str
    n: int
    k: int
    d: int          # declared metadata, never verified
    x_graph: TannerGraph
    z_graph: TannerGraph

    def __post_init__(self):
        if self.x_graph.n != self.n or self.z_graph.n != self.n:
            raise CodeFormatError("graph lengths disagree with declared n")
        h_x, h_z = self.h_x, self.h_z
        if np.any((h_x.astype(np.int64) @ h_z.T.astype(np.int64)) % 2):
            raise CodeFormatError(
                f"CSS condition violated: H_X H_Z^T != 0 for code {self.name!r}")
        k = self.n - gf2.rank(h_x) - gf2.rank(h_z)
        if k != self.k:
            raise CodeFormatError(
                f"declared k={self.k} inconsistent with ranks (computed k={k})")
        # cached stabilizer row spaces for degeneracy checks
        self._hx_space = gf2.RowSpace(h_x)
        self._hz_space = gf2.RowSpace(h_z)

    @property
    def h_x(self) -> np.ndarray:
        return self.x_graph.flat

    @property
    def h_z(self) -> np.ndarray:
        return self.z_graph.flat

    def z_residual_is_stabilizer(self, r_z) -> bool:
        """Z-side residual is harmless iff it lies in the row space of H_Z."""
        return self._hz_space.contains(r_z)

    def x_residual_is_stabilizer(self, r_x) -> bool:
        return self._hx_space.contains(r_x)


def compute_logicals(code: GldpcCode) -> LogicalBasis:
    """k independent Z-logicals (ker H_X modulo rowspace H_Z), and mirrored."""

    def one_side(h_check, h_stab):
        span = gf2.RowSpace(h_stab)
        out = []
        for v in gf2.null_space(h_check):
            if span.add(gf2.pack_vector(v)):
                out.append(v)
        return out

    z_logicals = one_side(code.h_x, code.h_z)
    x_logicals = one_side(code.h_z, code.h_x)
    assert len(z_logicals) == len(x_logicals) == code.k
    return LogicalBasis(z_logicals=z_logicals, x_logicals=x_logicals)


# ---------------------------------------------------------------------------
# file format
# ---------------------------------------------------------------------------

def _graph_to_obj(g: TannerGraph) -> dict:
    return {"component_H": g.component.H.tolist(),
            "cns": [list(map(int, cn)) for cn in g.cns]}


def _graph_from_obj(obj, n: int, label: str) -> TannerGraph:
    try:
        comp = ComponentCode(np.array(obj["component_H"], dtype=np.uint8))
        cns = [list(map(int, cn)) for cn in obj["cns"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise CodeFormatError(f"malformed {label}: {exc}") from exc
    return TannerGraph(n=n, cns=cns, component=comp)


def write_code(code: GldpcCode, path) -> None:
    obj = {"name": code.name, "n": code.n, "k": code.k, "d": code.d,
           "x_graph": _graph_to_obj(code.x_graph),
           "z_graph": _graph_to_obj(code.z_graph)}
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=1)
        fh.write("\n")


def load_code(path) -> GldpcCode:
    """Load and fully validate a code file (CSS condition, degrees, k)."""
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except json.JSONDecodeError as exc:
        raise CodeFormatError(f"cannot parse code file {path}: {exc}") from exc
    try:
        name, n, k, d = obj["name"], int(obj["n"]), int(obj["k"]), int(obj["d"])
    except (KeyError, TypeError, ValueError) as exc:
        raise CodeFormatError(f"missing or malformed header field in {path}: {exc}") from exc
    x_graph = _graph_from_obj(obj["x_graph"], n, "x_graph")
    z_graph = _graph_from_obj(obj["z_graph"], n, "z_graph")
    return GldpcCode(name=name, n=n, k=k, d=d, x_graph=x_graph, z_graph=z_graph)


# ---------------------------------------------------------------------------
# built-in fixtures
# ---------------------------------------------------------------------------

_HAMMING_7 = np.array([[1, 0, 1, 0, 1, 0, 1],
                       [0, 1, 1, 0, 0, 1, 1],
                       [0, 0, 0, 1, 1, 1, 1]], dtype=np.uint8)


def _steane() -> GldpcCode:
    # One Hamming constraint per side; the check node is duplicated so every
    # VN has degree two, preserving the code while exercising the schedule.
    comp = ComponentCode(_HAMMING_7)
    cns = [list(range(7)), list(range(7))]
    return GldpcCode(name="steane", n=7, k=1, d=3,
                     x_graph=TannerGraph(7, [list(c) for c in cns], comp),
                     z_graph=TannerGraph(7, [list(c) for c in cns], comp))


def _toric(length: int = 2) -> GldpcCode:
    L = length
    n = 2 * L * L

    def h(r, c):
        return (r % L) * L + (c % L)

    def v(r, c):
        return L * L + (r % L) * L + (c % L)

    x_cns = [[h(r, c), h(r, c - 1), v(r, c), v(r - 1, c)]
             for r in range(L) for c in range(L)]
    z_cns = [[h(r, c), h(r + 1, c), v(r, c), v(r, c + 1)]
             for r in range(L) for c in range(L)]
    spc = ComponentCode(np.ones((1, 4), dtype=np.uint8))
    return GldpcCode(name=f"toric-{L}", n=n, k=2, d=L,
                     x_graph=TannerGraph(n, x_cns, spc),
                     z_graph=TannerGraph(n, z_cns, spc))


def _hamming15() -> np.ndarray:
    return np.array([[(c >> b) & 1 for c in range(1, 16)] for b in range(4)],
                    dtype=np.uint8)


def _gf16_times_alpha(c: int) -> int:
    c <<= 1
    if c & 16:
        c ^= 0b10011  # x^4 + x + 1
    return c


def _toy_gldpc() -> GldpcCode:
    # Hamming(15,11) component; the second check of each graph views the
    # qubits through a GF(16) multiplication permutation, an automorphism
    # of the Hamming code, so both stacked constraints define the same
    # classical code and the CSS condition holds.
    comp = ComponentCode(_hamming15())
    ident = list(range(15))
    alpha = [_gf16_times_alpha(i + 1) - 1 for i in range(15)]
    alpha2 = [_gf16_times_alpha(_gf16_times_alpha(i + 1)) - 1 for i in range(15)]
    return GldpcCode(name="toy-gldpc", n=15, k=7, d=3,
                     x_graph=TannerGraph(15, [ident, alpha], comp),
                     z_graph=TannerGraph(15, [list(ident), alpha2], comp))


_BUILTIN_FACTORIES = {
    "steane": _steane,
    "toric": _toric,
    "toy-gldpc": _toy_gldpc,
}


def builtin_code(name: str) -> GldpcCode:
    try:
        return _BUILTIN_FACTORIES[name]()
    except KeyError:
        raise KeyError(f"unknown builtin code {name!r}; "
                       f"available: {sorted(_BUILTIN_FACTORIES)}") from None


def builtin_codes() -> list[GldpcCode]:
    return [f() for f in _BUILTIN_FACTORIES.values()]
