"""Linear precoding schemes that realize the integer (and the one fractional)
corner points of the DoF regions on sampled channels.

The pipeline for one DoF point is: sample channels, draw null-space bases,
assemble the per-class precoders, count interference-free receive
dimensions, and build the receive filters that isolate each stream.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import _linalg as la
from .dof_region import (AntennaConfig, enumerate_vertices, fractional_vertices,
                         theorem1_region)
from .si_graph import CATALOG, SideInfoGraph

log = logging.getLogger(__name__)

Triple = tuple[int, int, int]


def pos(x):
    return max(0, x)


class InfeasiblePointError(ValueError):
    pass


class FilterError(RuntimeError):
    pass


@dataclass(frozen=True)
class ToleranceConfig:
    rank_tol_factor: float = 1e-10
    signal_floor: float = 1e-8
    # |Phi^T f| / (largest column norm seen at the receiver)
    leak_tol: float = 1e-8
    power_low: float = 1e4
    power_high: float = 1e8

    def __post_init__(self):
        for name in ("rank_tol_factor", "signal_floor", "leak_tol", "power_low", "power_high"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")


DEFAULT_TOL = ToleranceConfig()


# -- channels and null spaces --------------------------------------------------

@dataclass(frozen=True, eq=False)
class ChannelSet:
    n: AntennaConfig
    h: tuple[np.ndarray, np.ndarray, np.ndarray]
    seed: int

    def H(self, i: int) -> np.ndarray:
        return self.h[i - 1]

    def stacked(self) -> np.ndarray:
        return np.vstack(self.h)


def sample_channels(n: AntennaConfig, seed: int) -> ChannelSet:
    rng = np.random.default_rng([seed, 0])
    h = tuple(la.crandn(rng, n.rx(i), n.n0) for i in (1, 2, 3))
    return ChannelSet(n, h, seed)


def null_dims(n: AntennaConfig) -> tuple[int, int, int, int]:
    """``(r1, r2, r3, r23)``: generic null-space dimensions."""
    return (pos(n.n0 - n.n1), pos(n.n0 - n.n2), pos(n.n0 - n.n3), pos(n.n0 - n.n2 - n.n3))


@dataclass(frozen=True, eq=False)
class NullBases:
    s: tuple[np.ndarray, np.ndarray, np.ndarray]
    s23: np.ndarray

    def S(self, i: int) -> np.ndarray:
        return self.s[i - 1]


def null_bases(c: ChannelSet) -> NullBases:
    rng = np.random.default_rng([c.seed, 1])
    r1, r2, r3, r23 = null_dims(c.n)
    s = tuple(la.random_null_basis(rng, c.H(i), r) for i, r in zip((1, 2, 3), (r1, r2, r3)))
    s23 = la.random_null_basis(rng, np.vstack([c.H(2), c.H(3)]), r23)
    return NullBases(s, s23)


# -- feasibility of the per-class recipes ---------------------------------------

def g8_split(g: SideInfoGraph, n: AntennaConfig, d: Triple) -> tuple[int, int] | None:
    """Column split ``(r2', r3')`` for the G8 recipe on graph ``g``, or ``None``.

    ``r2'`` of the non-``S23`` columns of V1 are zero-forced at receiver 2
    and ``r3'`` at receiver 3.  The smallest split meeting each receiver's
    dimension count is taken; it is feasible iff any split is.  Requires the
    2-cycle between receivers 2 and 3.
    """
    if not (g.has_arc(2, 3) and g.has_arc(3, 2)):
        raise ValueError("the G8 recipe needs receivers 2 and 3 to know each other's message")
    d1, d2, d3 = d
    r1, r2, r3, r23 = null_dims(n)
    m = [min(n.n0, n.rx(i)) for i in (0, 1, 2, 3)]
    free1 = pos(d1 - r23)

    unknown = [d[j - 1] for j in (2, 3) if not g.has_arc(1, j)]
    seen1 = pos(max(unknown) - r1) if unknown else 0
    if d1 + seen1 > m[1]:
        return None

    need = []
    for i, di in ((2, d2), (3, d3)):
        if g.has_arc(i, 1):
            if di > m[i]:
                return None
            need.append(0)
        else:
            need.append(pos(di + free1 - m[i]))
    r2p, r3p = need
    if r2p > r2 - r23 or r3p > r3 - r23 or r2p + r3p > free1:
        return None
    return r2p, r3p


def check_integer_feasibility(class_k: int, n: AntennaConfig, d: Triple) -> bool:
    """Sufficient conditions under which the class recipe attains ``d``."""
    d1, d2, d3 = d
    if min(d) < 0:
        return False
    r1, r2, r3, _ = null_dims(n)
    m1, m2, m3 = (min(n.n0, n.rx(i)) for i in (1, 2, 3))
    if 1 <= class_k <= 6:
        return d1 + d2 + d3 <= n.n0 and d1 <= n.n1 and d2 <= n.n2 and d3 <= n.n3
    if class_k == 7:
        return (d1 + pos(d3 - r1) <= m1 and d2 + pos(d1 - r2) <= m2
                and d3 + pos(d2 - r3) <= m3)
    if class_k in (8, 9, 10):
        return g8_split(CATALOG[8], n, d) is not None
    if class_k == 11:
        return (d1 + pos(max(d2, d3) - r1) <= m1 and d2 <= m2 and d3 + pos(d1 - r3) <= m3)
    if class_k == 12:
        return (d1 + pos(d3 - r1) <= m1 and d2 + pos(d1 - r2) <= m2 and d3 <= m3)
    if class_k == 13:
        return d1 + pos(max(d2, d3) - r1) <= m1 and d2 <= m2 and d3 <= m3
    if class_k in (14, 15):
        return d1 + pos(d3 - r1) <= m1 and d2 <= m2 and d3 + pos(d1 - r3) <= m3
    if class_k == 16:
        return d1 <= m1 and d2 <= m2 and d3 <= m3
    raise ValueError(f"class index must be in 1..16, got {class_k}")


# -- precoders ------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class PrecoderSet:
    v: tuple[np.ndarray, np.ndarray, np.ndarray]

    def V(self, i: int) -> np.ndarray:
        return self.v[i - 1]

    @property
    def dims(self) -> Triple:
        return tuple(x.shape[1] for x in self.v)


def _zf_then_random(rng, basis, d, n0):
    """First ``min(cols, d)`` columns from ``basis``, the rest isotropic."""
    k = min(basis.shape[1], d)
    return np.hstack([basis[:, :k], la.random_unit_columns(rng, n0, d - k)])


def _v23_shared(rng, nb, d, n0):
    """V2, V3 for the G8 recipe: the larger one starts in null(H1); the
    smaller one repeats its leading columns."""
    d2, d3 = d[1], d[2]
    imax = 2 if d2 >= d3 else 3
    vmax = _zf_then_random(rng, nb.S(1), max(d2, d3), n0)
    vmin = vmax[:, :min(d2, d3)]
    return (vmax, vmin) if imax == 2 else (vmin, vmax)


def _v1_g8(rng, nb, n, d1, split):
    r2p, r3p = split
    k = min(nb.s23.shape[1], d1)
    cols = [nb.s23[:, :k], nb.S(2)[:, :r2p], nb.S(3)[:, :r3p]]
    rest = d1 - k - r2p - r3p
    cols.append(la.random_unit_columns(rng, n.n0, rest))
    return np.hstack(cols)


def _no_side_info_precoders(rng, c, d):
    """Zero forcing against random receive combiners.

    Each receiver i gets a random ``d_i x N_i`` combiner; the stacked
    effective channel is inverted so every combined output sees only its
    own stream.  Attains every integer point with ``sum(d) <= N0`` and
    ``d_i <= N_i``.
    """
    n0 = c.n.n0
    psi = [la.crandn(rng, di, c.n.rx(i)) for i, di in zip((1, 2, 3), d)]
    eff = np.vstack([p @ c.H(i) for i, p in zip((1, 2, 3), psi)])
    if eff.shape[0] == 0:
        return tuple(np.zeros((n0, 0), dtype=complex) for _ in range(3))
    v = la.normalize_columns(np.linalg.pinv(eff))
    splits = np.cumsum(d)[:2]
    return tuple(np.split(v, splits, axis=1))


def build_precoders(class_k: int, n: AntennaConfig, d: Triple, c: ChannelSet,
                    nb: NullBases, rng=None, recipe: str | None = None) -> PrecoderSet:
    """Assemble V1, V2, V3 for the class recipe.

    ``recipe="g8"`` forces the G8 construction on any class whose graph
    contains the 2 <-> 3 cycle (classes 8..16).
    """
    d = tuple(int(x) for x in d)
    if rng is None:
        rng = np.random.default_rng([c.seed, 2])
    n0 = n.n0
    d1, d2, d3 = d

    if recipe == "g8" or class_k in (8, 9, 10):
        g = CATALOG[class_k] if recipe == "g8" else CATALOG[8]
        split = g8_split(g, n, d)
        if split is None:
            raise InfeasiblePointError(f"{d} is not reachable with the G8 recipe for class {class_k}")
        v1 = _v1_g8(rng, nb, n, d1, split)
        v2, v3 = _v23_shared(rng, nb, d, n0)
        return PrecoderSet((v1, v2, v3))
    if recipe is not None:
        raise ValueError(f"unknown recipe {recipe!r}")

    if not check_integer_feasibility(class_k, n, d):
        raise InfeasiblePointError(f"{d} fails the class-{class_k} conditions at {n}")

    if class_k <= 6:
        return PrecoderSet(_no_side_info_precoders(rng, c, d))
    if class_k == 7:
        # V_i leans on the null space of the receiver that does not know M_i
        return PrecoderSet(tuple(_zf_then_random(rng, nb.S(i % 3 + 1), di, n0)
                                 for i, di in zip((1, 2, 3), d)))
    if class_k == 11:
        v1 = _zf_then_random(rng, nb.S(3), d1, n0)
        v2, v3 = _v23_shared(rng, nb, d, n0)
        return PrecoderSet((v1, v2, v3))
    if class_k == 12:
        return PrecoderSet((_zf_then_random(rng, nb.S(2), d1, n0),
                            la.random_unit_columns(rng, n0, d2),
                            _zf_then_random(rng, nb.S(1), d3, n0)))
    if class_k == 13:
        v1 = la.random_unit_columns(rng, n0, d1)
        v2, v3 = _v23_shared(rng, nb, d, n0)
        return PrecoderSet((v1, v2, v3))
    if class_k in (14, 15):
        return PrecoderSet((_zf_then_random(rng, nb.S(3), d1, n0),
                            la.random_unit_columns(rng, n0, d2),
                            _zf_then_random(rng, nb.S(1), d3, n0)))
    return PrecoderSet(tuple(la.random_unit_columns(rng, n0, di) for di in d))


def random_precoders(n: AntennaConfig, d: Triple, seed: int = 0) -> PrecoderSet:
    """Isotropic precoders with no zero forcing at all."""
    rng = np.random.default_rng([seed, 3])
    return PrecoderSet(tuple(la.random_unit_columns(rng, n.n0, di) for di in d))


# -- interference-free dimensions and receive filters ---------------------------

@dataclass
class _ReceiverResult:
    ok: np.ndarray          # bool per own stream
    filters: np.ndarray     # N x d_i, column l is Phi_il
    signal: np.ndarray      # |Phi^T h_l|
    leak: np.ndarray        # max |Phi^T f| / scale over the other visible columns


def _analyze_receiver(h, blocks, own, tol: ToleranceConfig) -> _ReceiverResult:
    """Per-stream test of whether ``h @ blocks[own][:, l]`` leaves the span
    of every other visible column, with the projection-based filter."""
    nrx = h.shape[0]
    visible = [h @ b for b in blocks]
    start = sum(v.shape[1] for v in visible[:own])
    d = visible[own].shape[1]
    f = np.hstack(visible) if visible else np.zeros((nrx, 0), dtype=complex)
    m = f.shape[1]
    empty = _ReceiverResult(np.zeros(d, bool), np.zeros((nrx, d), complex),
                            np.zeros(d), np.zeros(d))
    if d == 0:
        return empty
    scale = np.linalg.norm(f, axis=0).max()
    if scale == 0:
        return empty

    # one matrix per own stream, that stream's column zeroed out
    others = np.repeat(f[None], d, axis=0)
    idx = np.arange(d)
    others[idx, :, start + idx] = 0
    u, s, _ = np.linalg.svd(others, full_matrices=True)
    s_full = np.linalg.svd(f, compute_uv=False)
    # both ranks are measured against the full receive matrix; a submatrix
    # made only of zero-forced columns must come out rank zero
    cutoff = tol.rank_tol_factor * s_full.max() * max(nrx, m)
    ranks = np.sum(s > cutoff, axis=1)
    rank_full = int(np.sum(s_full > cutoff))
    ok = ranks == rank_full - 1

    filters = np.zeros((nrx, d), complex)
    signal = np.zeros(d)
    leak = np.zeros(d)
    for l in range(d):
        comp = u[l][:, ranks[l]:]
        w = comp @ (comp.conj().T @ f[:, start + l])
        norm = np.linalg.norm(w)
        if norm == 0:
            continue
        phi = w.conj() / norm
        filters[:, l] = phi
        proj = np.abs(phi @ f)
        signal[l] = proj[start + l]
        proj[start + l] = 0
        leak[l] = proj.max() / scale if m > 1 else 0.0
    return _ReceiverResult(ok, filters, signal, leak)


def _visible_blocks(g: SideInfoGraph, i: int, v):
    """Precoder blocks receiver ``i`` does not know, its own first."""
    order = [i] + [j for j in (1, 2, 3) if j != i and not g.has_arc(i, j)]
    return [v[j - 1] for j in order]


def _analyze(g, hs, v, tol):
    return [_analyze_receiver(hs[i - 1], _visible_blocks(g, i, v), 0, tol) for i in (1, 2, 3)]


def interference_free_dimensions(g: SideInfoGraph, c: ChannelSet, p: PrecoderSet,
                                 tol: ToleranceConfig = DEFAULT_TOL) -> Triple:
    return tuple(int(r.ok.sum()) for r in _analyze(g, c.h, p.v, tol))


@dataclass(frozen=True, eq=False)
class ReceiveFilterSet:
    phi: tuple[np.ndarray, np.ndarray, np.ndarray]   # N_i x d_i
    signal: tuple[np.ndarray, np.ndarray, np.ndarray]
    leak: tuple[np.ndarray, np.ndarray, np.ndarray]

    def Phi(self, i: int, l: int) -> np.ndarray:
        return self.phi[i - 1][:, l - 1]

    @property
    def min_signal(self) -> float:
        vals = np.concatenate(self.signal)
        return float(vals.min()) if vals.size else float("inf")

    @property
    def max_leak(self) -> float:
        vals = np.concatenate(self.leak)
        return float(vals.max()) if vals.size else 0.0


def _filters_from(results, tol, strict):
    if strict:
        for i, r in enumerate(results, start=1):
            for l in range(len(r.ok)):
                if not r.ok[l] or r.signal[l] < tol.signal_floor:
                    raise FilterError(
                        f"receiver {i}, stream {l + 1}: no interference-free direction "
                        f"(signal {r.signal[l]:.3e}, floor {tol.signal_floor:.1e})")
                if r.leak[l] > tol.leak_tol:
                    raise FilterError(
                        f"receiver {i}, stream {l + 1}: leak {r.leak[l]:.3e} above {tol.leak_tol:.1e}")
    return ReceiveFilterSet(tuple(r.filters for r in results),
                            tuple(r.signal for r in results),
                            tuple(r.leak for r in results))


def build_receive_filters(g: SideInfoGraph, c: ChannelSet, p: PrecoderSet,
                          tol: ToleranceConfig = DEFAULT_TOL, strict: bool = True) -> ReceiveFilterSet:
    """Projection filters; with ``strict`` every stream must clear the
    signal floor and leak tolerance or :class:`FilterError` is raised."""
    return _filters_from(_analyze(g, c.h, p.v, tol), tol, strict)


# -- two-symbol extension ------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ExtensionSet:
    theta: tuple[np.ndarray, np.ndarray, np.ndarray]
    t: tuple[np.ndarray, np.ndarray, np.ndarray]
    u: tuple[np.ndarray, np.ndarray, np.ndarray]


def has_fractional_corner(n: AntennaConfig) -> bool:
    return n.n0 % 2 == 1 and all(n.n0 <= 2 * n.rx(i) for i in (1, 2, 3))


def two_symbol_precoders(n: AntennaConfig, c: ChannelSet, rng=None) -> ExtensionSet:
    if not has_fractional_corner(n):
        raise InfeasiblePointError(f"no fractional corner at {n}: needs N0 odd and N0 <= 2 N_i")
    if rng is None:
        rng = np.random.default_rng([c.seed, 4])
    n0 = n.n0
    r = null_dims(n)[:3]
    theta = tuple(np.kron(np.eye(2), c.H(i)) for i in (1, 2, 3))
    t = tuple(la.random_null_basis(rng, theta[q - 1], 2 * r[q - 1]) for q in (1, 2, 3))
    u = tuple(_zf_then_random(rng, t[i % 3], n0, 2 * n0) for i in (1, 2, 3))
    return ExtensionSet(theta, t, u)


G7 = CATALOG[7]


def _analyze_extension(ext: ExtensionSet, tol):
    return _analyze(G7, ext.theta, ext.u, tol)


def verify_two_symbol(n: AntennaConfig, c: ChannelSet, ext: ExtensionSet,
                      tol: ToleranceConfig = DEFAULT_TOL) -> Triple:
    """Interference-free dimensions per receiver over the two-symbol block."""
    return tuple(int(r.ok.sum()) for r in _analyze_extension(ext, tol))


# -- rate slope ----------------------------------------------------------------

def _sum_rates(g, c, p, filters, power):
    total = sum(p.dims)
    if total == 0:
        return np.zeros(3)
    per_stream = power / total
    rates = np.zeros(3)
    for i in (1, 2, 3):
        h = c.H(i)
        own = h @ p.V(i)
        interferers = [h @ p.V(j) for j in (1, 2, 3) if j != i and not g.has_arc(i, j)]
        for l in range(own.shape[1]):
            phi = filters.Phi(i, l + 1)
            sig = per_stream * abs(phi @ own[:, l]) ** 2
            rest = [np.delete(own, l, axis=1)] + interferers
            leak = sum(np.sum(np.abs(phi @ x) ** 2) for x in rest if x.size)
            sinr = sig / (np.linalg.norm(phi) ** 2 + per_stream * leak)
            rates[i - 1] += np.log2(1 + sinr)
    return rates


def estimate_rate_slope(g: SideInfoGraph, n: AntennaConfig, d: Triple, c: ChannelSet,
                        p: PrecoderSet, filters: ReceiveFilterSet,
                        p_low: float = 1e4, p_high: float = 1e8) -> tuple[float, float, float]:
    """Growth of each receiver's filtered sum rate per doubling of power.

    Interference is whatever ``g`` leaves unknown at each receiver, so
    passing a graph with less side information than the filters were
    designed for exposes the residual interference.
    """
    if not 0 < p_low < p_high:
        raise ValueError("need 0 < p_low < p_high")
    if tuple(d) != p.dims:
        raise ValueError(f"precoders carry {p.dims} streams, expected {tuple(d)}")
    lo = _sum_rates(g, c, p, filters, p_low)
    hi = _sum_rates(g, c, p, filters, p_high)
    return tuple(float(x) for x in (hi - lo) / (np.log2(p_high) - np.log2(p_low)))


# -- Monte Carlo verification -------------------------------------------------

@dataclass
class PointReport:
    point: tuple[Fraction, Fraction, Fraction]
    method: str
    trials: int = 0
    successes: int = 0
    min_signal_margin: float = float("inf")
    max_interference_leak: float = 0.0
    error: str | None = None

    @property
    def success_rate(self) -> float:
        return self.successes / self.trials if self.trials else 0.0

    def to_dict(self) -> dict:
        return {
            "point": [str(x) for x in self.point],
            "method": self.method,
            "trials": self.trials,
            "successes": self.successes,
            "success_rate": self.success_rate,
            "min_signal_margin": None if self.min_signal_margin == float("inf")
            else float(f"{self.min_signal_margin:.6e}"),
            "max_interference_leak": float(f"{self.max_interference_leak:.6e}"),
            "error": self.error,
        }


@dataclass
class VerificationReport:
    class_k: int
    n: AntennaConfig
    trials: int
    seed: int
    recipe: str | None = None
    points: list[PointReport] = field(default_factory=list)

    @property
    def all_passed(self) -> bool:
        return bool(self.points) and all(p.success_rate == 1.0 for p in self.points)

    def to_dict(self) -> dict:
        return {"class": self.class_k, "antennas": str(self.n), "trials": self.trials,
                "seed": self.seed, "recipe": self.recipe, "all_passed": self.all_passed,
                "points": [p.to_dict() for p in self.points]}


def _record(rep: PointReport, results, target, tol):
    rep.trials += 1
    counts = tuple(int(r.ok.sum()) for r in results)
    filt = _filters_from(results, tol, strict=False)
    ok = counts == tuple(target) and filt.min_signal >= tol.signal_floor and filt.max_leak <= tol.leak_tol
    rep.successes += ok
    rep.min_signal_margin = min(rep.min_signal_margin, filt.min_signal)
    rep.max_interference_leak = max(rep.max_interference_leak, filt.max_leak)


def monte_carlo_verify(class_k: int, n: AntennaConfig, trials: int = 100, seed: int = 0,
                       tol: ToleranceConfig = DEFAULT_TOL, recipe: str | None = None,
                       graph: SideInfoGraph | None = None) -> VerificationReport:
    """Run the full pipeline on every integer vertex of the class region
    (and the fractional corner via two-symbol extension) over ``trials``
    channel draws; trial ``t`` uses seed ``seed + t``.

    ``graph`` overrides the side information the receivers may use when
    counting dimensions (the class representative by default).
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    g = CATALOG[class_k] if graph is None else graph
    region = theorem1_region(CATALOG[class_k], n)
    frac = set(fractional_vertices(region))
    report = VerificationReport(class_k, n, trials, seed, recipe)
    integer_pts = [p for p in enumerate_vertices(region) if p not in frac]
    reports = [PointReport(p, "integer") for p in integer_pts]
    frac_reports = [PointReport(p, "two_symbol") for p in sorted(frac)]

    for t in range(trials):
        c = sample_channels(n, seed + t)
        nb = null_bases(c)
        for k, rep in enumerate(reports):
            if rep.error:
                continue
            d = tuple(int(x) for x in rep.point)
            rng = np.random.default_rng([seed + t, 2, k])
            try:
                p = build_precoders(class_k, n, d, c, nb, rng=rng, recipe=recipe)
            except InfeasiblePointError as exc:
                rep.error = str(exc)
                rep.trials = trials
                continue
            _record(rep, _analyze(g, c.h, p.v, tol), d, tol)
        for rep in frac_reports:
            ext = two_symbol_precoders(n, c)
            # over two symbols the target is N0 dimensions per receiver
            _record(rep, _analyze_extension(ext, tol), (n.n0,) * 3, tol)

    report.points = reports + frac_reports
    for rep in report.points:
        if rep.success_rate < 1.0:
            log.info("class %d at %s: point %s verified %d/%d", class_k, n,
                     [str(x) for x in rep.point], rep.successes, rep.trials)
    return report
