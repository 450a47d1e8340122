"""One-shot maximum overlap with a maximally entangled state.

For a channel ``N`` on dimension ``d``, the best achievable

    O(N) = max_rho <phi| (I_R (x) N)(rho_RA) |phi>,   |phi> = |gamma>/sqrt(d),

equals the top eigenvalue of the Choi operator divided by ``d``. Optimal inputs
are the density operators supported on the span of ``|K_i^dag>`` over the
standard Kraus operators with the top norm.

``O`` is an overlap (the square of the root fidelity to a pure target). Every
value reported by this module uses that convention.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .channels import (
    EPS_DEG,
    Channel,
    apply_extended,
    choi,
    choi_from_action,
    dual_channel,
    op_to_ket,
    standard_kraus,
    tensor_channels,
)
from .errors import DimensionMismatch
from .linalg import BipartiteKet, check_density, dagger, spectral_norm

CONVENTION = "overlap <phi|rho_RB|phi> with the maximally entangled state (squared fidelity)"
MULTIPLICATIVITY_TOL = 1e-8


class InputKind(str, Enum):
    UNIQUE_PURE = "unique_pure"
    DEGENERATE_FAMILY = "degenerate_family"


def _matrix_to_json(m: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m)]


def _ket_to_json(k: BipartiteKet) -> dict:
    return {
        "dim_a": k.dim_a,
        "dim_b": k.dim_b,
        "amplitudes": [[float(z.real), float(z.imag)] for z in k.amplitudes],
    }


@dataclass(frozen=True, eq=False)
class FidelityReport:
    o_value: float
    top_eigenvalue: float
    degeneracy: int
    optimal_input: np.ndarray
    input_kind: InputKind
    eigenspace_basis: tuple
    dim: int
    norms: np.ndarray = field(repr=False, default=None)
    separable_witness: BipartiteKet | None = None

    def to_dict(self) -> dict:
        return {
            "o_value": self.o_value,
            "top_eigenvalue": self.top_eigenvalue,
            "degeneracy": self.degeneracy,
            "input_kind": self.input_kind.value,
            "optimal_input": _matrix_to_json(self.optimal_input),
            "separable_witness": (
                None if self.separable_witness is None else _ket_to_json(self.separable_witness)
            ),
            "convention": CONVENTION,
        }


def _require_square(c: Channel) -> None:
    if not c.is_square:
        raise DimensionMismatch(
            f"fidelity analysis needs dim_in == dim_out, got {c.dim_in} -> {c.dim_out}"
        )


def max_fidelity(c: Channel, eps_deg: float = EPS_DEG) -> FidelityReport:
    """``O(N)``, the top-eigenspace basis ``|K_i^dag>/sqrt(e_i)`` and a default optimal input.

    The default input is the uniform mixture over the top-eigenspace basis,
    which reduces to ``|K_0^dag><K_0^dag| / e_0`` when the top norm is simple.
    """
    _require_square(c)
    std = standard_kraus(c, eps_deg=eps_deg)
    d = c.dim_in
    e0 = float(std.norms[0])
    deg = std.degeneracy_top
    basis = tuple(
        BipartiteKet(d, d, op_to_ket(dagger(std.kraus[i])).amplitudes / np.sqrt(std.norms[i]))
        for i in range(deg)
    )
    rho = sum(b.projector() for b in basis) / deg
    kind = InputKind.UNIQUE_PURE if deg == 1 else InputKind.DEGENERATE_FAMILY
    return FidelityReport(e0 / d, e0, deg, rho, kind, basis, d, std.norms)


def maximally_entangled(d: int) -> np.ndarray:
    return np.eye(d, dtype=complex).reshape(-1) / np.sqrt(d)


def objective(c: Channel, rho_ra) -> float:
    """Overlap of ``(I (x) N)(rho_RA)`` with the maximally entangled state."""
    _require_square(c)
    r = check_density(rho_ra, name="rho_RA")
    if r.shape[0] != c.dim_in**2:
        raise DimensionMismatch(f"rho_RA must be {c.dim_in**2}-dimensional")
    phi = maximally_entangled(c.dim_in)
    out = apply_extended(c, r)
    return float(np.real(np.conj(phi) @ out @ phi))


def objective_via_choi(c: Channel, rho_ra) -> float:
    """Same value as :func:`objective`, computed as ``Tr(rho J^{N^dag}) / d``."""
    _require_square(c)
    r = check_density(rho_ra, name="rho_RA")
    jd = choi_from_action(dual_channel(c))
    return float(np.real(np.trace(r @ jd))) / c.dim_in


def oracle_max_fidelity(c: Channel, restarts: int = 5, iters: int = 2000, seed: int = 0,
                        rel_tol: float = 1e-12) -> float:
    """Hill-climb ``<psi|J^{N^dag}|psi>/d`` over pure inputs by power iteration.

    The dual Choi operator is assembled by applying the dual channel to basis
    dyads and no eigensolver is involved, so this checks :func:`max_fidelity`
    independently.
    """
    _require_square(c)
    d = c.dim_in
    jd = choi_from_action(dual_channel(c))
    jd = 0.5 * (jd + dagger(jd))
    rng = np.random.default_rng(seed)
    best = -np.inf
    for _ in range(restarts):
        v = rng.normal(size=d * d) + 1j * rng.normal(size=d * d)
        v /= np.linalg.norm(v)
        val = float(np.real(np.conj(v) @ jd @ v))
        for _ in range(iters):
            w = jd @ v
            nw = np.linalg.norm(w)
            if nw == 0:
                break
            v = w / nw
            new = float(np.real(np.conj(v) @ jd @ v))
            done = abs(new - val) <= rel_tol * max(abs(new), 1e-300)
            val = new
            if done:
                break
        best = max(best, val)
    return best / d


def _polar(g: np.ndarray) -> np.ndarray:
    x, _, yh = np.linalg.svd(g)
    return x @ yh


def _random_unitary(rng, d):
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    q, r = np.linalg.qr(g)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def _hermitian_step(rng, d, scale):
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    h = 0.5 * scale * (g + g.conj().T)
    lam, v = np.linalg.eigh(h)
    return (v * np.exp(1j * lam)) @ v.conj().T


def fully_entangled_fraction(rho_ab, restarts: int = 8, iters: int = 200, seed: int = 0) -> float:
    """Max over unitaries ``U`` of ``<phi|(U (x) I)^dag rho (U (x) I)|phi>``.

    Each start (the identity, then random unitaries) climbs by replacing ``U``
    with the polar factor of the gradient, which cannot decrease a convex
    quadratic form, then polishes with random ``exp(iH)`` steps accepted on
    improvement.
    """
    r = check_density(rho_ab, name="rho_AB")
    n = r.shape[0]
    d = int(round(np.sqrt(n)))
    if d * d != n:
        raise DimensionMismatch("fully entangled fraction needs a d x d bipartite state")
    rng = np.random.default_rng(seed)

    def value(u):
        w = u.reshape(-1)
        return float(np.real(np.conj(w) @ r @ w)) / d

    best = -np.inf
    starts = [np.eye(d, dtype=complex)] + [_random_unitary(rng, d) for _ in range(max(restarts - 1, 0))]
    for u in starts:
        val = value(u)
        for _ in range(iters):
            g = (r @ u.reshape(-1)).reshape(d, d)
            if not np.any(g):
                break
            u_new = _polar(g)
            new = value(u_new)
            if new < val:
                break
            u, improved, val = u_new, new - val, new
            if improved <= 1e-15:
                break
        step = 0.1
        for _ in range(iters):
            cand = u @ _hermitian_step(rng, d, step)
            new = value(cand)
            if new > val:
                u, val = cand, new
            else:
                step *= 0.97
            if step < 1e-8:
                break
        best = max(best, val)
    return best


@dataclass(frozen=True)
class MultiplicativityReport:
    lhs: float
    rhs: float

    @property
    def gap(self) -> float:
        return self.lhs - self.rhs

    def passed(self, tol: float = MULTIPLICATIVITY_TOL) -> bool:
        return abs(self.gap) <= tol


def check_multiplicativity(c1: Channel, c2: Channel) -> MultiplicativityReport:
    """Compare ``O(N1 (x) N2)`` with ``O(N1) O(N2)``."""
    _require_square(c1)
    _require_square(c2)
    lhs = max_fidelity(tensor_channels(c1, c2)).o_value
    rhs = max_fidelity(c1).o_value * max_fidelity(c2).o_value
    return MultiplicativityReport(lhs, rhs)


def choi_top_via_norm(c: Channel) -> float:
    """``||J^N|| / d``, the spectral-norm form of ``O(N)``."""
    return spectral_norm(choi(c).operator) / c.dim_in
