"""Analytic channel families with closed-form predictions.

Every constructor returns a :class:`~entfid.channels.Channel` carrying a
:class:`~entfid.channels.ClosedForm` so callers can compare predicted and
computed values without knowing where the channel came from.

Extremal qubit channels are parametrized by the Gram overlaps ``(b, c)`` of
the output and environment kets produced by an isometry that sends two
non-orthogonal inputs to products of pure states ("pcubed"). For fixed ``b``
the channel gets noisier as ``c`` decreases.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Callable

import numpy as np

from .channels import EPS_DEG, Channel, ClosedForm, compose, identity_channel
from .errors import OutOfRange, ParseError
from .linalg import binary_entropy, dagger

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (I2, X, Y, Z)


def _check_unit_interval(name: str, x: float) -> float:
    x = float(x)
    if not 0.0 <= x <= 1.0:
        raise OutOfRange(f"{name}={x} outside [0, 1]")
    return x


# --- amplitude damping and dephasing ------------------------------------------

def amplitude_damping(p: float) -> Channel:
    p = _check_unit_interval("p", p)
    k0 = np.array([[1, 0], [0, np.sqrt(1 - p)]], dtype=complex)
    k1 = np.array([[0, np.sqrt(p)], [0, 0]], dtype=complex)
    cf = ClosedForm("ad", {"p": p}, 1 - p / 2, binary_entropy(1 / (2 - p)))
    return Channel(2, 2, (k0, k1), cf, f"ad:p={p:g}")


def dephasing(q: float) -> Channel:
    """``rho -> (1 - q) rho + q X rho X`` (the ``u = 0`` extremal-family member)."""
    q = _check_unit_interval("q", q)
    o = max(q, 1 - q)
    e = 0.0 if abs(q - 0.5) <= EPS_DEG else 1.0
    cf = ClosedForm("dephasing", {"q": q}, o, e)
    return Channel(2, 2, (np.sqrt(1 - q) * I2, np.sqrt(q) * X), cf, f"dephasing:q={q:g}")


# --- extremal qubit channels ----------------------------------------------------

@dataclass(frozen=True)
class PcubedParams:
    """Positive-quadrant ``(b, c)`` plus the X-conjugations that map back to the raw input."""

    b: float
    c: float
    flip_b: bool = False
    flip_c: bool = False

    def __post_init__(self):
        _check_unit_interval("b", self.b)
        _check_unit_interval("c", self.c)
        if self.b * self.c == 1.0 and not (self.b == 1.0 and self.c == 1.0):
            raise OutOfRange("bc = 1")

    @classmethod
    def canonical(cls, b: float, c: float) -> "PcubedParams":
        b, c = float(b), float(c)
        if not (-1.0 <= b <= 1.0 and -1.0 <= c <= 1.0):
            raise OutOfRange(f"(b, c) = ({b}, {c}) outside [-1, 1]^2")
        return cls(abs(b), abs(c), b < 0, c < 0)

    @property
    def raw(self) -> tuple[float, float]:
        return (-self.b if self.flip_b else self.b, -self.c if self.flip_c else self.c)

    @property
    def a(self) -> float:
        return self.b * self.c


def pcubed_kraus(b: float, c: float) -> tuple[np.ndarray, np.ndarray]:
    """The two-operator Kraus form in ``(b, c)``; valid on ``[-1, 1]^2`` with ``|bc| < 1``."""
    if abs(b * c) >= 1.0:
        raise OutOfRange("|bc| must be < 1")
    k0 = np.diag([np.sqrt((1 + b) * (1 + c) / (2 * (1 + b * c))),
                  np.sqrt((1 - b) * (1 + c) / (2 * (1 - b * c)))]).astype(complex)
    k1 = np.array([[0, np.sqrt((1 + b) * (1 - c) / (2 * (1 - b * c)))],
                   [np.sqrt((1 - b) * (1 - c) / (2 * (1 + b * c))), 0]], dtype=complex)
    return k0, k1


def pcubed_o(b: float, c: float) -> float:
    if b == 1.0 and c == 1.0:
        return 1.0  # identity channel
    return (1 + c) * (1 - b * b * c) / (2 * (1 - b * b * c * c))


def pcubed_e(b: float, c: float) -> float:
    if b == 1.0 and c == 1.0:
        return 1.0  # identity channel: unique maximally entangled input
    if b == 1.0 or c == 0.0:
        return 0.0
    return binary_entropy((1 + b) * (1 - b * c) / (2 * (1 - b * b * c)))


def pcubed_channel(params: PcubedParams) -> Channel:
    b, c = params.b, params.c
    if b == 1.0 and c == 1.0:
        ops = (I2.copy(),)
    else:
        ops = pcubed_kraus(b, c)
    # b -> -b is X conjugation at input and output; c -> -c is X at the input only
    if params.flip_b:
        ops = tuple(X @ k @ X for k in ops)
    if params.flip_c:
        ops = tuple(k @ X for k in ops)
    cf = ClosedForm("pcubed", {"b": b, "c": c}, pcubed_o(b, c), pcubed_e(b, c))
    rb, rc = params.raw
    return Channel(2, 2, ops, cf, f"pcubed:b={rb:g},c={rc:g}")


def gram_kets(overlap: float) -> np.ndarray:
    """Columns ``sqrt((1+x)/2)|0> +- sqrt((1-x)/2)|1>`` with inner product ``overlap``."""
    s = np.sqrt((1 + overlap) / 2)
    t = np.sqrt((1 - overlap) / 2)
    return np.array([[s, s], [t, -t]], dtype=complex)


def pcubed_isometry(a: float, b: float, c: float) -> np.ndarray:
    """Isometry ``V`` with ``V|alpha_i> = |beta_i> (x) |gamma_i>`` for Gram overlaps ``a = bc``."""
    if not np.isclose(a, b * c, rtol=0, atol=1e-14):
        raise OutOfRange("isometry requires a = b c")
    if abs(a) >= 1.0:
        raise OutOfRange("input kets must be linearly independent (|a| < 1)")
    alpha = gram_kets(a)
    beta = gram_kets(b)
    gamma = gram_kets(c)
    images = np.stack([np.kron(beta[:, i], gamma[:, i]) for i in range(2)], axis=1)
    return images @ np.linalg.inv(alpha)


def isometry_channel(v: np.ndarray, dim_out: int, label: str = "") -> Channel:
    """Channel ``Tr_C(V . V^dag)`` for ``V: A -> B (x) C`` with ``B`` of size ``dim_out``."""
    dim_in = v.shape[1]
    env = v.shape[0] // dim_out
    t = v.reshape(dim_out, env, dim_in)
    return Channel(dim_in, dim_out, tuple(t[:, k, :] for k in range(env)), label=label)


def pcubed_isometry_channel(b: float, c: float) -> Channel:
    """Same channel as :func:`pcubed_channel`, built from the isometry instead of the Kraus formula."""
    return isometry_channel(pcubed_isometry(b * c, b, c), 2, f"pcubed-iso:b={b:g},c={c:g}")


def pcubed_to_uv(params: PcubedParams) -> tuple[float, float]:
    """Angles ``(u, v)`` whose two-operator form reproduces ``pcubed_channel(params)``.

    They satisfy ``sin^2 v = (1 - c^2)/(1 - b^2 c^2)`` and
    ``cos^2 u = (1 - b^2)/(1 - b^2 c^2)``, with the sign branch fixed by
    matching the Kraus entries: ``cos(v - u) = (b + c)/(1 + bc)`` and
    ``cos(v + u) = (c - b)/(1 - bc)``.
    """
    b, c = params.b, params.c
    if b * c >= 1.0:
        raise OutOfRange("|bc| = 1 has no (u, v) form")
    s = np.arccos(np.clip((c - b) / (1 - b * c), -1.0, 1.0))
    t = np.arccos(np.clip((b + c) / (1 + b * c), -1.0, 1.0))
    v = 0.5 * (s + t)
    u = (0.5 * (s - t)) % (2 * np.pi)
    return float(u), float(v)


def uv_channel(u: float, v: float) -> Channel:
    u, v = float(u), float(v)
    if not 0.0 <= u <= 2 * np.pi:
        raise OutOfRange(f"u={u} outside [0, 2 pi]")
    if not 0.0 <= v < np.pi:
        raise OutOfRange(f"v={v} outside [0, pi)")
    k0 = np.diag([np.cos((v - u) / 2), np.cos((v + u) / 2)]).astype(complex)
    k1 = np.array([[0, np.sin((v + u) / 2)], [np.sin((v - u) / 2), 0]], dtype=complex)
    # K0 is diagonal and K1 off-diagonal, so they are orthogonal with
    # norms 1 + cos u cos v and 1 - cos u cos v
    g = np.cos(u) * np.cos(v)
    # same degeneracy rule as the standard Kraus decomposition
    if 2 * abs(g) <= EPS_DEG * (1 + abs(g)):
        e = 0.0
    elif g > 0:
        e = binary_entropy(min(np.cos((v - u) / 2) ** 2 / (1 + g), 1.0))
    else:
        e = binary_entropy(min(np.sin((v + u) / 2) ** 2 / (1 - g), 1.0))
    cf = ClosedForm("uv", {"u": u, "v": v}, (1 + abs(g)) / 2, e)
    return Channel(2, 2, (k0, k1), cf, f"uv:u={u:g},v={v:g}")


@dataclass(frozen=True, eq=False)
class Simulation:
    """``n_prime = n o m`` for extremal channels sharing ``b`` with ``c' <= c``."""

    n: Channel
    m: Channel
    n_prime: Channel
    composed: Channel


def pcubed_simulation(b: float, c: float, c_prime: float) -> Simulation:
    """Build the channel ``M`` with ``N(b, c) o M = N(b, c')``.

    ``M`` comes from the isometry ``W|alpha'_i> = |alpha_i> (x) |delta_i>``
    where ``alpha'`` have overlap ``b c'``, ``alpha`` overlap ``b c`` and the
    discarded ``delta`` overlap ``c'/c``.
    """
    b = _check_unit_interval("b", b)
    c = _check_unit_interval("c", c)
    c_prime = _check_unit_interval("c_prime", c_prime)
    if c_prime > c:
        raise OutOfRange("c_prime must not exceed c")
    n = pcubed_channel(PcubedParams(b, c))
    n_prime = pcubed_channel(PcubedParams(b, c_prime))
    if c == 0.0 or c_prime == c:
        m = identity_channel(2)
    else:
        w = pcubed_isometry(b * c_prime, b * c, c_prime / c)
        m = isometry_channel(w, 2, f"sim:b={b:g},c={c:g}->{c_prime:g}")
    return Simulation(n, m, n_prime, compose(n, m))


class Degradability(str, Enum):
    DEGRADABLE = "degradable"
    ANTI_DEGRADABLE = "anti_degradable"


@dataclass(frozen=True)
class DegradabilityClass:
    kind: Degradability
    boundary: bool


def classify_degradability(params: PcubedParams) -> DegradabilityClass:
    """Degradable when ``|b/c| < 1``, anti-degradable otherwise; ``|b| = |c|`` is flagged."""
    b, c = params.b, params.c
    if b == 0.0 and c == 0.0:
        return DegradabilityClass(Degradability.DEGRADABLE, True)
    if c == 0.0:
        return DegradabilityClass(Degradability.ANTI_DEGRADABLE, False)
    ratio = b / c
    kind = Degradability.DEGRADABLE if ratio < 1.0 else Degradability.ANTI_DEGRADABLE
    return DegradabilityClass(kind, ratio == 1.0)


# --- Pauli channels -------------------------------------------------------------

# conjugating the input by sigma_i sends Kraus sigma_j to a multiple of
# sigma_{j*i}; these are the index permutations j -> j*i
_PAULI_PRODUCT = (
    (0, 1, 2, 3),
    (1, 0, 3, 2),
    (2, 3, 0, 1),
    (3, 2, 1, 0),
)


@dataclass(frozen=True)
class PauliParams:
    """Pauli probabilities with ``p[0]`` maximal; ``conjugated_by`` records the input Pauli used."""

    p: tuple
    conjugated_by: int = 0

    def __post_init__(self):
        p = tuple(float(x) for x in self.p)
        if len(p) != 4:
            raise OutOfRange("Pauli channel needs 4 probabilities")
        if min(p) < 0 or abs(sum(p) - 1.0) > 1e-12:
            raise OutOfRange(f"{p} is not a probability vector")
        if any(x > p[0] for x in p[1:]):
            raise OutOfRange("p[0] must be maximal; use PauliParams.canonical")
        object.__setattr__(self, "p", p)

    @classmethod
    def canonical(cls, p) -> "PauliParams":
        p = tuple(float(x) for x in p)
        if len(p) != 4:
            raise OutOfRange("Pauli channel needs 4 probabilities")
        i = int(np.argmax(p)) if max(p) > p[0] else 0
        perm = _PAULI_PRODUCT[i]
        return cls(tuple(p[perm[j]] for j in range(4)), i)

    @property
    def tied(self) -> bool:
        p0 = self.p[0]
        return any(p0 - x <= EPS_DEG * p0 for x in self.p[1:])


def pauli_channel(params: PauliParams) -> Channel:
    p = params.p
    ops = tuple(np.sqrt(pi) * s for pi, s in zip(p, PAULIS))
    cf = ClosedForm("pauli", {"p": list(p)}, p[0], 0.0 if params.tied else 1.0)
    return Channel(2, 2, ops, cf, "pauli:" + ",".join(f"{x:g}" for x in p))


def pauli_channel_raw(p) -> Channel:
    """Pauli channel with probabilities in the given order (no canonicalization)."""
    p = tuple(float(x) for x in p)
    return Channel(2, 2, tuple(np.sqrt(pi) * s for pi, s in zip(p, PAULIS)))


def pauli_anti_degradable_lhs(params: PauliParams) -> float:
    _, p1, p2, p3 = params.p
    return p1 + p2 + p3 + np.sqrt(p1 * p2) + np.sqrt(p1 * p3) + np.sqrt(p2 * p3)


def pauli_anti_degradable(params: PauliParams) -> bool:
    return bool(pauli_anti_degradable_lhs(params) >= 0.5 - 1e-12)


# --- qutrit channels ------------------------------------------------------------

def _unit(i: int, j: int, d: int = 3) -> np.ndarray:
    m = np.zeros((d, d), dtype=complex)
    m[i, j] = 1.0
    return m


def qutrit_M(lam: float) -> Channel:
    """Non-unital qutrit channel with a unique maximally entangled optimal input for ``2/5 < lam``."""
    lam = _check_unit_interval("lambda", lam)
    k0 = np.sqrt(lam) * np.eye(3, dtype=complex)
    k1 = np.sqrt(1 - lam) * (_unit(0, 1) + _unit(1, 0))
    k2 = np.sqrt(1 - lam) * _unit(1, 2)
    if 0.4 < lam <= 1.0:
        cf = ClosedForm("qutritM", {"lambda": lam}, lam, float(np.log2(3)))
    else:
        cf = ClosedForm("qutritM", {"lambda": lam}, max(3 * lam, 2 * (1 - lam)) / 3, None)
    return Channel(3, 3, (k0, k1, k2), cf, f"qutritM:lambda={lam:g}")


def qutrit_P(z: float) -> Channel:
    """Unital qutrit channel with Hermitian Kraus operators and ``O = (z + 2)/6``."""
    z = _check_unit_interval("z", z)
    l0 = np.sqrt((z + 2) / 4) * (_unit(0, 1) + _unit(1, 0))
    l1 = np.sqrt((1 - z) / 2) * (_unit(1, 2) + _unit(2, 1))
    l2 = np.sqrt((1 - z) / 2) * (_unit(0, 2) + _unit(2, 0))
    l3 = np.sqrt(z / 4) * (_unit(0, 0) + _unit(1, 1) - 2 * _unit(2, 2))
    cf = ClosedForm("qutritP", {"z": z}, (z + 2) / 6, None)
    return Channel(3, 3, (l0, l1, l2, l3), cf, f"qutritP:z={z:g}")


# --- family spec strings ----------------------------------------------------------

def _pauli_from_kw(**kw) -> Channel:
    return pauli_channel(PauliParams.canonical([kw["p0"], kw["p1"], kw["p2"], kw["p3"]]))


FAMILIES: dict[str, tuple[Callable[..., Channel], tuple[str, ...]]] = {
    "ad": (lambda p: amplitude_damping(p), ("p",)),
    "dephasing": (lambda q: dephasing(q), ("q",)),
    "pcubed": (lambda b, c: pcubed_channel(PcubedParams.canonical(b, c)), ("b", "c")),
    "uv": (lambda u, v: uv_channel(u, v), ("u", "v")),
    "pauli": (_pauli_from_kw, ("p0", "p1", "p2", "p3")),
    "qutritM": (lambda **kw: qutrit_M(kw["lambda"]), ("lambda",)),
    "qutritP": (lambda z: qutrit_P(z), ("z",)),
    "id": (lambda d: identity_channel(int(d)), ("d",)),
}


def build_family(name: str, params: dict) -> Channel:
    try:
        ctor, names = FAMILIES[name]
    except KeyError:
        raise ParseError(f"unknown family {name!r}; known: {', '.join(FAMILIES)}") from None
    missing = [n for n in names if n not in params]
    extra = [n for n in params if n not in names]
    if missing or extra:
        raise ParseError(f"{name}: expected parameters {names}, got {tuple(params)}")
    return ctor(**params)


def parse_family_params(spec: str) -> tuple[str, dict]:
    """Split ``name:k=v,...`` (or ``pauli:p0,p1,p2,p3``) into a name and float parameters."""
    name, _, rest = spec.partition(":")
    name = name.strip()
    params: dict[str, float] = {}
    items = [s.strip() for s in rest.split(",") if s.strip()] if rest else []
    try:
        if name == "pauli" and items and all("=" not in s for s in items):
            if len(items) != 4:
                raise ParseError("pauli needs four probabilities")
            params = {f"p{i}": float(x) for i, x in enumerate(items)}
        else:
            for item in items:
                key, eq, val = item.partition("=")
                if not eq:
                    raise ParseError(f"bad parameter {item!r} in {spec!r}")
                params[key.strip()] = float(val)
    except ValueError as exc:
        raise ParseError(f"bad number in {spec!r}: {exc}") from None
    if any(not np.isfinite(v) for v in params.values()):
        raise ParseError(f"non-finite parameter in {spec!r}")
    return name, params


def parse_family_spec(spec: str) -> Channel:
    name, params = parse_family_params(spec)
    return build_family(name, params)


def is_family_spec(text: str) -> bool:
    return text.partition(":")[0] in FAMILIES and ":" in text


def unital_residual(c: Channel) -> float:
    return float(np.max(np.abs(sum(k @ dagger(k) for k in c.kraus) - np.eye(c.dim_out))))
