"""Dense complex linear algebra for small operators.

Matrices are plain complex ``numpy`` arrays indexed ``(row, col)``. Composite
spaces use the Kronecker convention: the leftmost factor is the slowest index,
so ``|a_i> (x) |b_j>`` sits at position ``i * dim_b + j``.

Hermitian eigenproblems are solved with a cyclic complex Jacobi method. All
entropies are in bits.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import (
    ConvergenceFailure,
    DimensionMismatch,
    NotDensityMatrix,
    NotHermitian,
    NotNormalized,
)

EIG_CLIP = 1e-12
DENSITY_TOL = 1e-9
MAX_SWEEPS = 100
ROOT_FLOOR = 1e-14


def as_matrix(m, name: str = "matrix") -> np.ndarray:
    """Return ``m`` as a finite 2-D complex array (a copy)."""
    a = np.array(m, dtype=complex)
    if a.ndim != 2:
        raise DimensionMismatch(f"{name} must be 2-D, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} has non-finite entries")
    return a


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(np.transpose(m))


@dataclass(frozen=True)
class HermitianEigen:
    """Eigenvalues sorted descending, eigenvectors as matching columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ dagger(v)


def _jacobi_rotation(app: float, aqq: float, apq: complex):
    """2x2 unitary ``R`` with ``R^H [[app, apq], [conj(apq), aqq]] R`` diagonal."""
    mag = abs(apq)
    phase = apq / mag
    zeta = (aqq - app) / (2.0 * mag)
    if abs(zeta) > 1e150:
        t = 1.0 / (2.0 * zeta)
    else:
        t = (1.0 if zeta >= 0 else -1.0) / (abs(zeta) + np.sqrt(zeta * zeta + 1.0))
    c = 1.0 / np.sqrt(t * t + 1.0)
    s = t * c
    ph = np.conj(phase)
    return c, s, -s * ph, c * ph


def hermitian_eig(h, hermiticity_tol: float = 1e-9, max_sweeps: int = MAX_SWEEPS) -> HermitianEigen:
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi sweeps.

    Output is deterministic: eigenvalues descend, and each eigenvector has its
    first component of magnitude above 1e-12 made real and positive.
    """
    a = as_matrix(h, "H")
    n, m = a.shape
    if n != m:
        raise DimensionMismatch(f"H must be square, got {a.shape}")
    if n and np.max(np.abs(a - dagger(a))) > hermiticity_tol:
        raise NotHermitian(f"max |H - H^dag| = {np.max(np.abs(a - dagger(a))):.3e}")
    a = 0.5 * (a + dagger(a))
    v = np.eye(n, dtype=complex)
    scale = np.linalg.norm(a)
    if n > 1 and scale > 0:
        target = 1e-14 * scale
        skip = 1e-300
        for _ in range(max_sweeps):
            if np.linalg.norm(a - np.diag(np.diag(a))) <= target:
                break
            for p in range(n - 1):
                for q in range(p + 1, n):
                    apq = a[p, q]
                    if abs(apq) <= skip:
                        continue
                    r00, r01, r10, r11 = _jacobi_rotation(a[p, p].real, a[q, q].real, apq)
                    cp = a[:, p].copy()
                    cq = a[:, q].copy()
                    a[:, p] = cp * r00 + cq * r10
                    a[:, q] = cp * r01 + cq * r11
                    rp = a[p, :].copy()
                    rq = a[q, :].copy()
                    a[p, :] = np.conj(r00) * rp + np.conj(r10) * rq
                    a[q, :] = np.conj(r01) * rp + np.conj(r11) * rq
                    a[p, q] = 0.0
                    a[q, p] = 0.0
                    a[p, p] = a[p, p].real
                    a[q, q] = a[q, q].real
                    vp = v[:, p].copy()
                    vq = v[:, q].copy()
                    v[:, p] = vp * r00 + vq * r10
                    v[:, q] = vp * r01 + vq * r11
        else:
            off_exact = np.linalg.norm(a - np.diag(np.diag(a)))
            if off_exact > target:
                raise ConvergenceFailure(f"Jacobi did not converge in {max_sweeps} sweeps")
    evals = np.real(np.diag(a)).copy()
    order = np.argsort(-evals, kind="stable")
    evals = evals[order]
    v = v[:, order]
    for k in range(n):
        col = v[:, k]
        idx = np.flatnonzero(np.abs(col) > 1e-12)
        if idx.size:
            x = col[idx[0]]
            v[:, k] = col * (np.conj(x) / abs(x))
    return HermitianEigen(evals, v)


def eigvalsh(h) -> np.ndarray:
    return hermitian_eig(h).eigenvalues


def _singular_values(o: np.ndarray) -> np.ndarray:
    # eigenvalues of the Hermitian dilation [[0, O], [O^dag, 0]] are +-sigma_i
    r, c = o.shape
    dil = np.zeros((r + c, r + c), dtype=complex)
    dil[:r, r:] = o
    dil[r:, :r] = dagger(o)
    ev = hermitian_eig(dil).eigenvalues
    return np.clip(ev[: min(r, c)], 0.0, None)


def _is_hermitian(o: np.ndarray) -> bool:
    return o.shape[0] == o.shape[1] and np.max(np.abs(o - dagger(o)), initial=0.0) <= 1e-12


def spectral_norm(o) -> float:
    a = as_matrix(o)
    if a.size == 0 or not np.any(a):
        return 0.0
    if _is_hermitian(a):
        ev = eigvalsh(a)
        return float(max(abs(ev[0]), abs(ev[-1])))
    return float(_singular_values(a)[0])


def trace_norm(o) -> float:
    a = as_matrix(o)
    if a.size == 0 or not np.any(a):
        return 0.0
    if _is_hermitian(a):
        return float(np.sum(np.abs(eigvalsh(a))))
    return float(np.sum(_singular_values(a)))


def frobenius_norm(o) -> float:
    a = as_matrix(o)
    return float(np.sqrt(np.sum(np.abs(a) ** 2)))


def check_density(rho, tol: float = DENSITY_TOL, name: str = "rho") -> np.ndarray:
    """Validate a density matrix (Hermitian, PSD, unit trace) and return it."""
    a = as_matrix(rho, name)
    if a.shape[0] != a.shape[1]:
        raise NotDensityMatrix(f"{name} is not square")
    if np.max(np.abs(a - dagger(a)), initial=0.0) > tol:
        raise NotDensityMatrix(f"{name} is not Hermitian")
    if abs(np.trace(a) - 1.0) > tol:
        raise NotDensityMatrix(f"{name} has trace {np.trace(a).real:.12g}")
    if eigvalsh(a)[-1] < -tol:
        raise NotDensityMatrix(f"{name} is not positive semi-definite")
    return a


def psd_sqrt(h) -> np.ndarray:
    e = hermitian_eig(h)
    # roundoff-level eigenvalues would otherwise leak in at their square root
    lam = np.sqrt(np.where(e.eigenvalues > ROOT_FLOOR, e.eigenvalues, 0.0))
    v = e.eigenvectors
    return (v * lam) @ dagger(v)


def fidelity(rho, sigma) -> float:
    """Root fidelity ``|| sqrt(rho) sqrt(sigma) ||_1``."""
    r = check_density(rho, name="rho")
    s = check_density(sigma, name="sigma")
    if r.shape != s.shape:
        raise DimensionMismatch(f"shapes differ: {r.shape} vs {s.shape}")
    return trace_norm(psd_sqrt(r) @ psd_sqrt(s))


def partial_trace(m, dims: tuple[int, int], keep: Literal["A", "B"] = "A") -> np.ndarray:
    """Trace out one factor of an operator on ``A (x) B``; ``keep`` names the survivor."""
    a = as_matrix(m)
    da, db = dims
    if a.shape != (da * db, da * db):
        raise DimensionMismatch(f"operator shape {a.shape} does not factor as {da}x{db}")
    t = a.reshape(da, db, da, db)
    if keep == "A":
        return np.einsum("ijkj->ik", t)
    if keep == "B":
        return np.einsum("ijil->jl", t)
    raise ValueError("keep must be 'A' or 'B'")


def _entropy_of_spectrum(p: np.ndarray) -> float:
    p = np.where(p < EIG_CLIP, 0.0, p)
    nz = p[p > 0]
    return float(max(-np.sum(nz * np.log2(nz)), 0.0))


def von_neumann_entropy(rho) -> float:
    r = check_density(rho)
    return _entropy_of_spectrum(eigvalsh(r))


def binary_entropy(x: float) -> float:
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"binary entropy argument {x} outside [0, 1]")
    return _entropy_of_spectrum(np.array([x, 1.0 - x]))


def tensor(m1, m2) -> np.ndarray:
    return np.kron(np.asarray(m1, dtype=complex), np.asarray(m2, dtype=complex))


@dataclass(frozen=True)
class BipartiteKet:
    """Ket on ``A (x) B``; amplitude of ``|a_i>|b_j>`` at index ``i * dim_b + j``."""

    dim_a: int
    dim_b: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size != self.dim_a * self.dim_b:
            raise DimensionMismatch(
                f"{amps.size} amplitudes for dims {self.dim_a}x{self.dim_b}"
            )
        if not np.all(np.isfinite(amps)):
            raise ValueError("non-finite amplitudes")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> "BipartiteKet":
        n = self.norm
        if n == 0:
            raise NotNormalized("zero ket cannot be normalized")
        return BipartiteKet(self.dim_a, self.dim_b, self.amplitudes / n)

    def coefficient_matrix(self) -> np.ndarray:
        """Amplitudes as a ``dim_a x dim_b`` array ``c[i, j]``."""
        return self.amplitudes.reshape(self.dim_a, self.dim_b)

    def projector(self) -> np.ndarray:
        return np.outer(self.amplitudes, np.conj(self.amplitudes))

    def schmidt_coefficients(self) -> np.ndarray:
        return np.linalg.svd(self.coefficient_matrix(), compute_uv=False)

    def is_product(self, tol: float = 1e-7) -> bool:
        s = self.schmidt_coefficients()
        return bool(s.size < 2 or s[1] <= tol * max(s[0], 1e-300))

    @classmethod
    def product(cls, a, b) -> "BipartiteKet":
        a = np.asarray(a, dtype=complex)
        b = np.asarray(b, dtype=complex)
        return cls(a.size, b.size, np.kron(a, b))


def check_unit(ket: BipartiteKet, tol: float = 1e-9) -> None:
    if abs(ket.norm - 1.0) > tol:
        raise NotNormalized(f"ket norm {ket.norm:.15g}")
