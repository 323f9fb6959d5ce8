"""Channel model for a two-transmitter, two-receiver MIMO network with on/off links.

Each of the four links (receiver j, transmitter i) is independently on with
probability ``p`` in every slot, giving 16 possible link-state patterns
("topologies") per slot.  Channel matrices are drawn once per run and stay
fixed; only the link states vary over time.

Topology naming convention used throughout this package:

====  =======================  ==========================================
name  links on                 description
====  =======================  ==========================================
f     11, 12, 21, 22           fully connected
z1    11, 12, 22               all but the Tx1->Rx2 link
z2    12, 21, 22               all but the Tx1->Rx1 link
z3    11, 21, 22               all but the Tx2->Rx1 link
z4    11, 12, 21               all but the Tx2->Rx2 link
par_direct  11, 22             two interference-free direct pairs
par_cross   12, 21             two interference-free crossed pairs
mac1  11, 12                   both transmitters into Rx1
mac2  21, 22                   both transmitters into Rx2
bc1   11, 21                   Tx1 into both receivers
bc2   12, 22                   Tx2 into both receivers
s11, s12, s21, s22             a single link
empty                          no links
====  =======================  ==========================================

Link ``ji`` means transmitter ``i`` -> receiver ``j``; its matrix is ``h<j><i>``
(N x M).  Channel index aliases 1..4 map to h11, h12, h21, h22.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Union

import numpy as np

__all__ = [
    "Dimensions",
    "Topology",
    "TOPOLOGIES",
    "TOPOLOGY_BY_INDEX",
    "ChannelSet",
    "topology_probability",
    "topology_distribution",
    "sample_topology_indices",
    "sample_topology_sequence",
    "count_topologies",
    "sample_channels",
]


@dataclass(frozen=True)
class Dimensions:
    """Antenna counts (and optionally the link-on probability) for a run.

    m, n are the antennas per transmitter / per receiver; both >= 1.
    p, when given, is the per-link on probability in [0, 1].
    """

    m: int
    n: int
    p: Optional[float] = None

    def __post_init__(self) -> None:
        if not (isinstance(self.m, (int, np.integer)) and self.m >= 1):
            raise ValueError("m must be a positive integer")
        if not (isinstance(self.n, (int, np.integer)) and self.n >= 1):
            raise ValueError("n must be a positive integer")
        if self.p is not None and not (0.0 <= float(self.p) <= 1.0):
            raise ValueError("p must lie in [0, 1]")

    @property
    def r(self) -> float:
        """Antenna ratio min(m, n) / max(m, n), in (0, 1]."""
        return min(self.m, self.n) / max(self.m, self.n)

    @property
    def q(self) -> float:
        if self.p is None:
            raise ValueError("p was not set on these dimensions")
        return 1.0 - float(self.p)


@dataclass(frozen=True)
class Topology:
    """One of the 16 link-state patterns of a slot."""

    name: str
    s11: bool
    s12: bool
    s21: bool
    s22: bool

    def link(self, rx: int, tx: int) -> bool:
        """State of the link from transmitter tx to receiver rx (1-based)."""
        return (self.s11, self.s12, self.s21, self.s22)[2 * (rx - 1) + (tx - 1)]

    @property
    def links(self) -> tuple:
        return (self.s11, self.s12, self.s21, self.s22)

    @property
    def n_on(self) -> int:
        return sum(self.links)

    @property
    def index(self) -> int:
        """Bit encoding 8*s11 + 4*s12 + 2*s21 + s22."""
        return 8 * self.s11 + 4 * self.s12 + 2 * self.s21 + self.s22


def _build_registry() -> Dict[str, Topology]:
    names = {
        (1, 1, 1, 1): "f",
        (1, 1, 0, 1): "z1",
        (0, 1, 1, 1): "z2",
        (1, 0, 1, 1): "z3",
        (1, 1, 1, 0): "z4",
        (1, 0, 0, 1): "par_direct",
        (0, 1, 1, 0): "par_cross",
        (1, 1, 0, 0): "mac1",
        (0, 0, 1, 1): "mac2",
        (1, 0, 1, 0): "bc1",
        (0, 1, 0, 1): "bc2",
        (1, 0, 0, 0): "s11",
        (0, 1, 0, 0): "s12",
        (0, 0, 1, 0): "s21",
        (0, 0, 0, 1): "s22",
        (0, 0, 0, 0): "empty",
    }
    return {
        name: Topology(name, bool(a), bool(b), bool(c), bool(d))
        for (a, b, c, d), name in names.items()
    }


TOPOLOGIES: Dict[str, Topology] = _build_registry()
TOPOLOGY_BY_INDEX: List[Topology] = sorted(TOPOLOGIES.values(), key=lambda t: t.index)


def topology_probability(t: Topology, p: float) -> float:
    """Probability p^k (1-p)^(4-k) of drawing t, k its number of on links."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    k = t.n_on
    return float(p) ** k * (1.0 - float(p)) ** (4 - k)


def topology_distribution(p: float) -> Dict[Topology, float]:
    """All 16 topology probabilities; they sum to 1."""
    return {t: topology_probability(t, p) for t in TOPOLOGY_BY_INDEX}


def sample_topology_indices(p: float, n: int, seed: int) -> np.ndarray:
    """Draw n slots of link states, returned as uint8 topology indices.

    Uses the counter-based Philox generator, so a (p, n, seed) triple always
    produces the same sequence regardless of platform or call history.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    rng = np.random.Generator(np.random.Philox(seed))
    on = rng.random((int(n), 4)) < p
    weights = np.array([8, 4, 2, 1], dtype=np.uint8)
    return (on.astype(np.uint8) @ weights).astype(np.uint8)


def sample_topology_sequence(p: float, n: int, seed: int) -> List[Topology]:
    """Like sample_topology_indices but materialized as Topology objects."""
    idx = sample_topology_indices(p, n, seed)
    return [TOPOLOGY_BY_INDEX[i] for i in idx]


def count_topologies(
    seq: Union[np.ndarray, Sequence[Topology], Iterable[Topology]],
) -> Dict[Topology, int]:
    """Histogram of a slot sequence; every topology appears as a key."""
    if isinstance(seq, np.ndarray):
        counts = np.bincount(seq.astype(np.int64), minlength=16)
    else:
        counts = np.zeros(16, dtype=np.int64)
        for t in seq:
            counts[t.index] += 1
    return {t: int(counts[t.index]) for t in TOPOLOGY_BY_INDEX}


class ChannelSet:
    """The four fixed channel matrices of a run.

    Attributes h11, h12, h21, h22 are N x M arrays (receiver index first).
    ``h(k)`` exposes the 1..4 alias ordering h11, h12, h21, h22 used by the
    coding-scheme builders.
    """

    def __init__(
        self,
        dims: Dimensions,
        h11: np.ndarray,
        h12: np.ndarray,
        h21: np.ndarray,
        h22: np.ndarray,
        seed: Optional[int] = None,
    ) -> None:
        shape = (dims.n, dims.m)
        mats = []
        for name, h in (("h11", h11), ("h12", h12), ("h21", h21), ("h22", h22)):
            h = np.asarray(h, dtype=float)
            if h.shape != shape:
                raise ValueError(f"{name} must have shape {shape}, got {h.shape}")
            if not np.all(np.isfinite(h)):
                raise ValueError(f"{name} contains non-finite entries")
            h = h.copy()
            h.setflags(write=False)
            mats.append(h)
        self.dims = dims
        self.seed = seed
        self.h11, self.h12, self.h21, self.h22 = mats

    def h(self, k: int) -> np.ndarray:
        """Channel matrix by alias index: 1 -> h11, 2 -> h12, 3 -> h21, 4 -> h22."""
        try:
            return (self.h11, self.h12, self.h21, self.h22)[k - 1]
        except IndexError:
            raise ValueError("channel alias index must be 1..4") from None

    def link_matrix(self, rx: int, tx: int) -> np.ndarray:
        return self.h(2 * (rx - 1) + tx)

    def as_list(self) -> List[np.ndarray]:
        return [self.h11, self.h12, self.h21, self.h22]

    def to_json(self) -> str:
        payload = {
            "m": self.dims.m,
            "n": self.dims.n,
            "seed": self.seed,
            "h11": self.h11.tolist(),
            "h12": self.h12.tolist(),
            "h21": self.h21.tolist(),
            "h22": self.h22.tolist(),
        }
        return json.dumps(payload)

    @classmethod
    def from_json(cls, text: str) -> "ChannelSet":
        payload = json.loads(text)
        dims = Dimensions(int(payload["m"]), int(payload["n"]))
        return cls(
            dims,
            np.array(payload["h11"], dtype=float),
            np.array(payload["h12"], dtype=float),
            np.array(payload["h21"], dtype=float),
            np.array(payload["h22"], dtype=float),
            seed=payload.get("seed"),
        )


def sample_channels(dims: Dimensions, seed: int) -> ChannelSet:
    """Draw the four N x M matrices with i.i.d. standard normal entries.

    Each matrix is re-drawn (a practically impossible event) if it is not of
    full rank min(M, N), so downstream constructions can rely on genericity.
    """
    rng = np.random.Generator(np.random.Philox(seed))
    full = min(dims.m, dims.n)
    mats = []
    for _ in range(4):
        for _attempt in range(100):
            h = rng.standard_normal((dims.n, dims.m))
            if np.linalg.matrix_rank(h) == full:
                mats.append(h)
                break
        else:  # pragma: no cover - astronomically unlikely
            raise RuntimeError("could not draw a full-rank channel matrix")
    return ChannelSet(dims, *mats, seed=seed)
