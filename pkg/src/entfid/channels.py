"""Quantum channels in Kraus form.

A channel maps operators on ``A`` (dimension ``dim_in``) to operators on ``B``
(dimension ``dim_out``). Its Choi operator lives on ``A (x) B`` with the input
reference copy as the left (slow) factor:

    J = sum_ij |i><j| (x) N(|i><j|) = sum_k |K_k><K_k|,

where ``|K> = (I (x) K)|gamma>`` is the operator-ket map in the computational
basis, ``|gamma> = sum_i |i>|i>``.
"""
from __future__ import annotations

import json
import threading
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import DimensionMismatch, InvalidChannel, ParseError
from .linalg import (
    BipartiteKet,
    HermitianEigen,
    as_matrix,
    dagger,
    hermitian_eig,
    partial_trace,
)

TP_TOL = 1e-9
PSD_TOL = 1e-9
RANK_TOL = 1e-10
EPS_DEG = 1e-9


@dataclass(frozen=True)
class ClosedForm:
    """Analytic predictions attached to a family-generated channel."""

    family: str
    params: dict
    o_value: float | None = None
    e_value: float | None = None


@dataclass(frozen=True, eq=False)
class Channel:
    dim_in: int
    dim_out: int
    kraus: tuple
    closed_form: ClosedForm | None = None
    label: str = ""

    def __post_init__(self):
        ops = []
        for k, op in enumerate(self.kraus):
            a = as_matrix(op, f"Kraus operator {k}")
            if a.shape != (self.dim_out, self.dim_in):
                raise DimensionMismatch(
                    f"Kraus operator {k} has shape {a.shape}, expected {(self.dim_out, self.dim_in)}"
                )
            a.setflags(write=False)
            ops.append(a)
        if not ops:
            raise InvalidChannel("a channel needs at least one Kraus operator")
        object.__setattr__(self, "kraus", tuple(ops))

    @classmethod
    def from_kraus(cls, kraus: Iterable, **kw) -> "Channel":
        ops = [np.asarray(k, dtype=complex) for k in kraus]
        if not ops:
            raise InvalidChannel("a channel needs at least one Kraus operator")
        dout, din = ops[0].shape
        return cls(din, dout, tuple(ops), **kw)

    @property
    def is_square(self) -> bool:
        return self.dim_in == self.dim_out

    def __call__(self, rho) -> np.ndarray:
        return apply(self, rho)


def identity_channel(d: int) -> Channel:
    return Channel(d, d, (np.eye(d),), label=f"id{d}")


def unitary_channel(u) -> Channel:
    u = as_matrix(u)
    if np.max(np.abs(dagger(u) @ u - np.eye(u.shape[1]))) > 1e-10:
        raise InvalidChannel("matrix is not unitary")
    return Channel.from_kraus([u])


@dataclass(frozen=True)
class ValidationReport:
    tp_residual: float
    choi_min_eigenvalue: float
    unital_residual: float | None
    tol: float = TP_TOL

    @property
    def trace_preserving(self) -> bool:
        return self.tp_residual <= self.tol

    @property
    def completely_positive(self) -> bool:
        return self.choi_min_eigenvalue >= -PSD_TOL

    @property
    def unital(self) -> bool:
        return self.unital_residual is not None and self.unital_residual <= self.tol

    @property
    def valid(self) -> bool:
        return self.trace_preserving and self.completely_positive

    def to_dict(self) -> dict:
        return {
            "tp_residual": self.tp_residual,
            "choi_min_eigenvalue": self.choi_min_eigenvalue,
            "unital_residual": self.unital_residual,
            "trace_preserving": self.trace_preserving,
            "completely_positive": self.completely_positive,
            "unital": self.unital,
            "valid": self.valid,
        }


def validate_channel(c: Channel, tol: float = TP_TOL,
                     choi_op: "ChoiOperator | None" = None) -> ValidationReport:
    """Trace-preservation, complete-positivity and unitality residuals."""
    tp = sum(dagger(k) @ k for k in c.kraus)
    tp_res = float(np.max(np.abs(tp - np.eye(c.dim_in))))
    if choi_op is None:
        choi_op = ChoiOperator(_choi_matrix(c), c.dim_in, c.dim_out)
    jmin = float(choi_op.eigenvalues[-1])
    unital_res = None
    if c.is_square:
        un = sum(k @ dagger(k) for k in c.kraus)
        unital_res = float(np.max(np.abs(un - np.eye(c.dim_out))))
    return ValidationReport(tp_res, jmin, unital_res, tol)


def require_valid(c: Channel, choi_op: "ChoiOperator | None" = None) -> None:
    rep = validate_channel(c, choi_op=choi_op)
    if not rep.valid:
        raise InvalidChannel(
            f"not a channel: TP residual {rep.tp_residual:.3e}, "
            f"Choi min eigenvalue {rep.choi_min_eigenvalue:.3e}"
        )


# --- operator-ket duality ---------------------------------------------------

def op_to_ket(k) -> BipartiteKet:
    """``|K> = (I (x) K)|gamma>``; the amplitude of ``|i>_A |j>_B`` is ``K[j, i]``."""
    k = as_matrix(k, "K")
    dout, din = k.shape
    return BipartiteKet(din, dout, k.T.reshape(-1))


def ket_to_op(psi: BipartiteKet) -> np.ndarray:
    return psi.coefficient_matrix().T.copy()


def ket_conjugate(psi: BipartiteKet) -> BipartiteKet:
    return BipartiteKet(psi.dim_a, psi.dim_b, np.conj(psi.amplitudes))


def swap_ket(psi: BipartiteKet) -> BipartiteKet:
    """Exchange the two tensor factors."""
    return BipartiteKet(psi.dim_b, psi.dim_a, psi.coefficient_matrix().T.reshape(-1))


# --- Choi operator ------------------------------------------------------------

class ChoiOperator:
    """Choi operator of a channel with a compute-once eigendecomposition."""

    def __init__(self, operator: np.ndarray, dim_in: int, dim_out: int):
        op = np.array(operator, dtype=complex)
        op.setflags(write=False)
        self.operator = op
        self.dim_in = dim_in
        self.dim_out = dim_out
        self._eig: HermitianEigen | None = None
        self._lock = threading.Lock()

    @property
    def eig(self) -> HermitianEigen:
        if self._eig is None:
            with self._lock:
                if self._eig is None:
                    self._eig = hermitian_eig(self.operator)
        return self._eig

    @property
    def eigenvalues(self) -> np.ndarray:
        return self.eig.eigenvalues

    def partial_trace_out(self) -> np.ndarray:
        return partial_trace(self.operator, (self.dim_in, self.dim_out), keep="A")

    @property
    def trace(self) -> float:
        return float(np.trace(self.operator).real)


def _choi_matrix(c: Channel) -> np.ndarray:
    kets = np.stack([op_to_ket(k).amplitudes for k in c.kraus], axis=1)
    return kets @ dagger(kets)


def choi(c: Channel, check: bool = True) -> ChoiOperator:
    """Choi operator as a sum of Kraus-ket projectors."""
    op = ChoiOperator(_choi_matrix(c), c.dim_in, c.dim_out)
    if check:
        require_valid(c, op)
    return op


def choi_from_action(c: Channel) -> np.ndarray:
    """Choi operator built by applying the channel to every basis dyad."""
    d = c.dim_in
    j = np.zeros((d * c.dim_out, d * c.dim_out), dtype=complex)
    for a in range(d):
        for b in range(d):
            dyad = np.zeros((d, d), dtype=complex)
            dyad[a, b] = 1.0
            j += np.kron(dyad, apply(c, dyad))
    return j


# --- standard Kraus decomposition ---------------------------------------------

@dataclass(frozen=True, eq=False)
class StandardKraus:
    """Orthogonal Kraus operators with Frobenius norms ``<<K_i, K_i>>`` descending."""

    kraus: tuple
    norms: np.ndarray
    degeneracy_top: int
    dim_in: int
    dim_out: int
    eps_deg: float = EPS_DEG

    @property
    def rank(self) -> int:
        return len(self.kraus)

    def channel(self) -> Channel:
        return Channel(self.dim_in, self.dim_out, self.kraus)


def standard_kraus(c: Channel, eps_deg: float = EPS_DEG, rank_tol: float = RANK_TOL,
                   choi_op: ChoiOperator | None = None) -> StandardKraus:
    """Read Kraus operators off the Choi eigendecomposition, ``K_i = sqrt(e_i) L_i``.

    Only eigenvalues above ``rank_tol`` produce operators, so the count equals
    the Choi rank. Within a degenerate eigenspace the operators are one valid
    choice among many; only the norms are canonical.
    """
    j = choi_op if choi_op is not None else choi(c)
    eig = j.eig
    ops = []
    norms = []
    for lam, vec in zip(eig.eigenvalues, eig.eigenvectors.T):
        if lam <= rank_tol:
            break
        ket = BipartiteKet(c.dim_in, c.dim_out, vec)
        ops.append(np.sqrt(lam) * ket_to_op(ket))
        norms.append(lam)
    norms = np.array(norms)
    deg = int(np.sum(norms >= norms[0] * (1.0 - eps_deg)))
    return StandardKraus(tuple(ops), norms, deg, c.dim_in, c.dim_out, eps_deg)


# --- derived channels ---------------------------------------------------------

def dual_channel(c: Channel) -> Channel:
    """Adjoint map with Kraus operators ``K_i^dag`` (same order); unital if ``c`` is TP."""
    return Channel(c.dim_out, c.dim_in, tuple(dagger(k) for k in c.kraus), label=f"dual({c.label})")


def apply(c: Channel, rho) -> np.ndarray:
    r = as_matrix(rho, "rho")
    if r.shape != (c.dim_in, c.dim_in):
        raise DimensionMismatch(f"input shape {r.shape}, channel expects {c.dim_in}")
    return sum(k @ r @ dagger(k) for k in c.kraus)


def apply_extended(c: Channel, rho_ra) -> np.ndarray:
    """Apply ``I_R (x) N`` to an operator on ``R (x) A``."""
    r = as_matrix(rho_ra, "rho_RA")
    n = r.shape[0]
    if n % c.dim_in or r.shape[1] != n:
        raise DimensionMismatch(f"shape {r.shape} is not R x {c.dim_in}")
    dr = n // c.dim_in
    eye = np.eye(dr)
    out = np.zeros((dr * c.dim_out, dr * c.dim_out), dtype=complex)
    for k in c.kraus:
        big = np.kron(eye, k)
        out += big @ r @ dagger(big)
    return out


def compose(outer: Channel, inner: Channel) -> Channel:
    """``outer o inner`` (``inner`` acts first)."""
    if inner.dim_out != outer.dim_in:
        raise DimensionMismatch("composition dimensions do not chain")
    ops = tuple(k @ m for k in outer.kraus for m in inner.kraus)
    return Channel(inner.dim_in, outer.dim_out, ops)


def tensor_channels(c1: Channel, c2: Channel) -> Channel:
    ops = tuple(np.kron(j, k) for j in c1.kraus for k in c2.kraus)
    return Channel(c1.dim_in * c2.dim_in, c1.dim_out * c2.dim_out, ops,
                   label=f"{c1.label}x{c2.label}")


def product_choi(j1: ChoiOperator, j2: ChoiOperator) -> np.ndarray:
    """Choi of ``N1 (x) N2`` from the component Choi operators.

    ``kron(J1, J2)`` is ordered ``R1 B1 R2 B2``; the product channel's Choi is
    ordered ``R1 R2 B1 B2``, so the middle two factors are exchanged.
    """
    r1, b1, r2, b2 = j1.dim_in, j1.dim_out, j2.dim_in, j2.dim_out
    t = np.kron(j1.operator, j2.operator).reshape(r1, b1, r2, b2, r1, b1, r2, b2)
    t = t.transpose(0, 2, 1, 3, 4, 6, 5, 7)
    n = r1 * r2 * b1 * b2
    return t.reshape(n, n)


# --- JSON ---------------------------------------------------------------------

def channel_to_dict(c: Channel) -> dict:
    return {
        "dim_in": c.dim_in,
        "dim_out": c.dim_out,
        "kraus": [[[[float(z.real), float(z.imag)] for z in row] for row in k] for k in c.kraus],
    }


def channel_to_json(c: Channel, **kw) -> str:
    return json.dumps(channel_to_dict(c), **kw)


def _parse_number(x, where: str) -> complex:
    if (not isinstance(x, (list, tuple)) or len(x) != 2
            or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in x)):
        raise ParseError(f"{where}: expected [re, im] pair, got {x!r}")
    z = complex(float(x[0]), float(x[1]))
    if not np.isfinite(z.real) or not np.isfinite(z.imag):
        raise ParseError(f"{where}: non-finite entry")
    return z


def channel_from_dict(data: dict) -> Channel:
    try:
        din = data["dim_in"]
        dout = data["dim_out"]
        kraus = data["kraus"]
    except (KeyError, TypeError) as exc:
        raise ParseError(f"missing field: {exc}") from exc
    for name, v in (("dim_in", din), ("dim_out", dout)):
        if not isinstance(v, int) or isinstance(v, bool) or v < 1:
            raise ParseError(f"{name} must be a positive integer")
    if not isinstance(kraus, list) or not kraus:
        raise ParseError("kraus must be a non-empty list")
    ops = []
    for k, op in enumerate(kraus):
        if not isinstance(op, list) or len(op) != dout:
            raise ParseError(f"Kraus operator {k}: expected {dout} rows")
        rows = []
        for r, row in enumerate(op):
            if not isinstance(row, list) or len(row) != din:
                raise ParseError(f"Kraus operator {k} row {r}: expected {din} entries")
            rows.append([_parse_number(x, f"K{k}[{r}]") for x in row])
        ops.append(np.array(rows, dtype=complex))
    return Channel(din, dout, tuple(ops))


def channel_from_json(text: str) -> Channel:
    try:
        data = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise ParseError(str(exc)) from exc
    return channel_from_dict(data)


def _reject_constant(name):
    raise ParseError(f"non-finite number {name}")
