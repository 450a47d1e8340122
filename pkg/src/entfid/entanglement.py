"""Minimum entanglement of optimal inputs.

A mixed input supported on a subspace ``S`` has entanglement of formation at
least the smallest pure-state entanglement inside ``S``, and a pure state in
``S`` attains it. The input entanglement of a channel is therefore computed as
a minimum of pure-state entanglement entropy over the top eigenspace.

For a 2-dimensional subspace of two qubits the minimum is found exactly:
writing the basis kets as 2x2 operators ``M0, M1``, the product kets in the
span are the rank-one members of the pencil ``x M0 + y M1``, the roots of the
binary quadratic ``det(x M0 + y M1) = 0``. Everything else uses a seeded
stochastic search.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .channels import EPS_DEG, Channel, ket_to_op
from .errors import DimensionMismatch
from .fidelity import FidelityReport, max_fidelity
from .linalg import BipartiteKet, check_unit, partial_trace, von_neumann_entropy

log = logging.getLogger(__name__)

SCHMIDT_TOL = 1e-7
PENCIL_ZERO = 1e-12
ORTHONORMAL_TOL = 1e-10
DEFAULT_RESTARTS = 64
DEFAULT_ITERS = 500
REDUCTION_NOTE = "mixed-input minimum taken over pure states in the optimal subspace"


class Method(str, Enum):
    PURE_UNIQUE = "pure_unique"
    PENCIL_PRODUCT_STATE = "pencil_product_state"
    NUMERIC_MIN = "numeric_min"


@dataclass(frozen=True)
class Subspace:
    dim_a: int
    dim_b: int
    basis: tuple

    def __post_init__(self):
        basis = tuple(self.basis)
        if not basis:
            raise ValueError("subspace needs at least one basis ket")
        for k in basis:
            if (k.dim_a, k.dim_b) != (self.dim_a, self.dim_b):
                raise DimensionMismatch("basis ket dims do not match subspace")
        m = self.matrix_of(basis)
        gram = m.conj().T @ m
        if np.max(np.abs(gram - np.eye(len(basis)))) > ORTHONORMAL_TOL:
            raise ValueError("subspace basis is not orthonormal")
        object.__setattr__(self, "basis", basis)

    @staticmethod
    def matrix_of(basis) -> np.ndarray:
        return np.stack([k.amplitudes for k in basis], axis=1)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def projector(self) -> np.ndarray:
        m = self.matrix_of(self.basis)
        return m @ m.conj().T

    def combine(self, coeffs) -> BipartiteKet:
        v = self.matrix_of(self.basis) @ np.asarray(coeffs, dtype=complex)
        return BipartiteKet(self.dim_a, self.dim_b, v)


@dataclass(frozen=True)
class EntanglementReport:
    e_value: float
    minimizer: BipartiteKet
    method: Method
    seed: int | None = None
    restarts: int | None = None
    note: str = REDUCTION_NOTE

    @property
    def separable_witness(self) -> BipartiteKet | None:
        return self.minimizer if self.e_value == 0.0 else None

    def to_dict(self) -> dict:
        w = self.separable_witness
        return {
            "e_value": self.e_value,
            "method": self.method.value,
            "minimizer": [[float(z.real), float(z.imag)] for z in self.minimizer.amplitudes],
            "separable_witness": None if w is None else [[float(z.real), float(z.imag)] for z in w.amplitudes],
            "seed": self.seed,
            "restarts": self.restarts,
            "assumption": self.note,
        }


def pure_entanglement(psi: BipartiteKet) -> float:
    """Entanglement entropy ``S(Tr_B |psi><psi|)`` in bits."""
    check_unit(psi)
    rho_a = partial_trace(psi.projector(), (psi.dim_a, psi.dim_b), keep="A")
    rho_a = rho_a / np.trace(rho_a).real
    return von_neumann_entropy(rho_a)


def _schmidt_entropy(c: np.ndarray) -> float:
    s = np.linalg.svd(c, compute_uv=False)
    p = s * s
    p = p / p.sum()
    p = p[p > 1e-300]
    return float(max(-np.sum(p * np.log2(p)), 0.0))


def product_states_in_pencil(s: Subspace) -> list[BipartiteKet]:
    """Normalized product kets in a 2-dimensional subspace of two qubits.

    Returns two kets generically and one at a double root. When the pencil is
    identically singular every member is a product, and the normalized sum and
    difference of the basis kets are returned as representatives.
    """
    if (s.dim_a, s.dim_b) != (2, 2) or s.dim != 2:
        raise DimensionMismatch("pencil method needs a 2-dimensional subspace of two qubits")
    psi0, psi1 = s.basis
    m0 = ket_to_op(psi0)
    m1 = ket_to_op(psi1)
    a2 = np.linalg.det(m0)
    a0 = np.linalg.det(m1)
    a1 = np.linalg.det(m0 + m1) - a2 - a0
    if max(abs(a2), abs(a1), abs(a0)) < PENCIL_ZERO:
        # every member is a product; (psi0 +- psi1)/sqrt(2) are the limits of
        # the two generic roots for extremal qubit channels at c = 0 as b -> 1
        log.info("pencil is identically singular; returning representatives")
        return [s.combine([1.0, 1.0]).normalized(), s.combine([1.0, -1.0]).normalized()]
    # stable projective roots of a2 x^2 + a1 x y + a0 y^2: (q : a2) and (a0 : q)
    disc = np.sqrt(complex(a1 * a1 - 4.0 * a2 * a0))
    if np.real(np.conj(a1) * disc) < 0:
        disc = -disc
    q = -0.5 * (a1 + disc)
    roots = []
    if abs(q) > 0:
        roots = [(q, a2), (a0, q)]
    else:
        # a1 = 0 and a2 * a0 = 0: the surviving root is the coordinate with zero det
        roots = [(1.0, 0.0)] if abs(a2) < PENCIL_ZERO else [(0.0, 1.0)]
    kets: list[BipartiteKet] = []
    for x, y in roots:
        k = s.combine([x, y]).normalized()
        if all(abs(np.vdot(prev.amplitudes, k.amplitudes)) < 1.0 - 1e-10 for prev in kets):
            kets.append(k)
    return kets


def min_entanglement_over_subspace(s: Subspace, restarts: int = DEFAULT_RESTARTS,
                                   iters: int = DEFAULT_ITERS, seed: int = 0) -> EntanglementReport:
    """Smallest entanglement entropy of a unit ket in ``s``.

    Two-qubit subspaces of dimension two or more go through the pencil first,
    which detects product states exactly. Otherwise coefficient vectors are
    perturbed with annealed Gaussian steps from ``restarts`` random starts.
    """
    if (s.dim_a, s.dim_b) == (2, 2) and s.dim >= 2:
        sub = Subspace(2, 2, s.basis[:2])
        kets = product_states_in_pencil(sub)
        best = min(kets, key=_residual_entanglement)
        if best.is_product(SCHMIDT_TOL):
            return EntanglementReport(0.0, best, Method.PENCIL_PRODUCT_STATE)
    if s.dim == 1:
        k = s.basis[0].normalized()
        return _finish(k, Method.PURE_UNIQUE, None, None)

    rng = np.random.default_rng(seed)
    basis = Subspace.matrix_of(s.basis)
    shape = (s.dim_a, s.dim_b)

    def ent(x):
        v = basis @ x
        return _schmidt_entropy((v / np.linalg.norm(v)).reshape(shape))

    best_x, best_val = None, np.inf
    for _ in range(restarts):
        x = rng.normal(size=s.dim) + 1j * rng.normal(size=s.dim)
        x /= np.linalg.norm(x)
        val = ent(x)
        step = 0.5
        for _ in range(iters):
            cand = x + step * (rng.normal(size=s.dim) + 1j * rng.normal(size=s.dim))
            cand /= np.linalg.norm(cand)
            new = ent(cand)
            if new < val:
                x, val = cand, new
                step = min(step * 1.2, 1.0)
            else:
                step *= 0.95
        if val < best_val:
            best_x, best_val = x, val
    k = s.combine(best_x).normalized()
    return _finish(k, Method.NUMERIC_MIN, seed, restarts)


def _residual_entanglement(k: BipartiteKet) -> float:
    sv = k.schmidt_coefficients()
    return float(sv[1]) if sv.size > 1 else 0.0


def _finish(k: BipartiteKet, method: Method, seed, restarts) -> EntanglementReport:
    e = 0.0 if k.is_product(SCHMIDT_TOL) else pure_entanglement(k)
    return EntanglementReport(e, k, method, seed, restarts)


def input_entanglement(c: Channel, eps_deg: float = EPS_DEG, restarts: int = DEFAULT_RESTARTS,
                       iters: int = DEFAULT_ITERS, seed: int = 0,
                       report: FidelityReport | None = None) -> EntanglementReport:
    """Minimum entanglement over inputs achieving ``O(N)``."""
    fid = report if report is not None else max_fidelity(c, eps_deg=eps_deg)
    if fid.degeneracy == 1:
        return _finish(fid.eigenspace_basis[0], Method.PURE_UNIQUE, None, None)
    s = Subspace(fid.dim, fid.dim, fid.eigenspace_basis)
    return min_entanglement_over_subspace(s, restarts=restarts, iters=iters, seed=seed)
