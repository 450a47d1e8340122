"""Random states, unitaries and channels for tests and cross-checks."""
from __future__ import annotations

import numpy as np

from .channels import Channel
from .linalg import BipartiteKet


def _ginibre(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    return (rng.normal(size=(rows, cols)) + 1j * rng.normal(size=(rows, cols))) / np.sqrt(2)


def random_isometry(rng: np.random.Generator, dim_in: int, dim_out: int) -> np.ndarray:
    """Haar-random isometry ``dim_in -> dim_out`` (QR with phase fix)."""
    q, r = np.linalg.qr(_ginibre(rng, dim_out, dim_in))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_unitary(rng: np.random.Generator, d: int) -> np.ndarray:
    return random_isometry(rng, d, d)


def random_channel(rng: np.random.Generator, dim_in: int, dim_out: int | None = None,
                   env: int | None = None) -> Channel:
    """Channel from a random isometry ``A -> B (x) C``; Kraus ops are the ``C`` slices."""
    dim_out = dim_in if dim_out is None else dim_out
    env = dim_in * dim_out if env is None else env
    v = random_isometry(rng, dim_in, dim_out * env).reshape(dim_out, env, dim_in)
    return Channel(dim_in, dim_out, tuple(v[:, k, :] for k in range(env)), label="random")


def random_ket(rng: np.random.Generator, dim_a: int, dim_b: int) -> BipartiteKet:
    v = _ginibre(rng, dim_a * dim_b, 1).reshape(-1)
    return BipartiteKet(dim_a, dim_b, v / np.linalg.norm(v))


def random_pure_density(rng: np.random.Generator, d: int) -> np.ndarray:
    v = _ginibre(rng, d, 1).reshape(-1)
    v /= np.linalg.norm(v)
    return np.outer(v, v.conj())


def random_density(rng: np.random.Generator, d: int, n_mix: int | None = None) -> np.ndarray:
    """Mixture of ``n_mix`` random pure states with Dirichlet weights (``n_mix=1`` gives a pure state)."""
    n_mix = d if n_mix is None else n_mix
    w = rng.dirichlet(np.ones(n_mix))
    return sum(wi * random_pure_density(rng, d) for wi in w)


def random_hermitian(rng: np.random.Generator, d: int) -> np.ndarray:
    g = _ginibre(rng, d, d)
    return g + g.conj().T
