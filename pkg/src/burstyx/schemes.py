"""Data model for multi-slot linear coding schemes.

A scheme says: over a short window of slots with known topologies, each
transmitter sends fixed linear combinations of message variables, and each
receiver recovers its variables by successive cancellation. Everything is
symbolic until materialized against a concrete channel draw:

- Carrier: a symbolic precoder block (identity slice, pseudo-inverse slice,
  alignment block, null-space basis, or tall-orientation alignment pair).
- Variable: a named message vector with a length, an owning transmitter and
  an intended receiver.
- Placement: variable v rides carrier C from transmitter t in slot s.
- DecodeStep: one receiver, a set of slots, what it cancels and what it
  solves. Aligned sums that a receiver can only resolve jointly are written
  as named groups and separated later.
- CodeScheme: the whole bundle, JSON round-trippable.
- EffectiveChannel: the stacked receive matrix for one channel draw, with
  (receiver, slot) row blocks and per-variable column blocks.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .channel import ChannelSet, Dimensions, TOPOLOGIES, Topology
from .linalg import alignment_block, null_space_basis, paired_alignment, pseudo_inverse

__all__ = [
    "Carrier",
    "Variable",
    "Placement",
    "DecodeStep",
    "CodeScheme",
    "SuperPrecoder",
    "EffectiveChannel",
    "effective_channel",
]

_CARRIER_KINDS = ("I-slice", "pinv", "align", "null", "pair")


@dataclass(frozen=True)
class Carrier:
    """Symbolic precoder block, materialized to an M x width matrix.

    kind:
      I-slice  columns [start, start+width) of I_M
      pinv     columns [start, start+width) of pseudo_inverse(H_ch)
      align    alignment_block(H_ch, width), i.e. leading pinv columns
      null     columns [start, start+width) of null_space_basis(H_ch)
      pair     one side of paired_alignment(H_ch, H_ch_b), leading columns
    """

    kind: str
    width: int
    ch: Optional[int] = None
    ch_b: Optional[int] = None
    side: Optional[str] = None
    start: int = 0

    def __post_init__(self):
        if self.kind not in _CARRIER_KINDS:
            raise ValueError(f"unknown carrier kind {self.kind!r}")
        if self.width < 0 or self.start < 0:
            raise ValueError("carrier width and start must be non-negative")
        if self.kind != "I-slice" and self.ch is None:
            raise ValueError(f"carrier kind {self.kind!r} needs a channel index")
        if self.kind == "pair":
            if self.ch_b is None or self.side not in ("a", "b"):
                raise ValueError("pair carrier needs ch_b and side in {'a','b'}")

    def materialize(self, channels: ChannelSet) -> np.ndarray:
        m = channels.dims.m
        if self.kind == "I-slice":
            if self.start + self.width > m:
                raise ValueError("identity slice exceeds transmit dimension")
            block = np.zeros((m, self.width))
            for i in range(self.width):
                block[self.start + i, i] = 1.0
            return block
        h = channels.h(self.ch)
        if self.kind == "pinv":
            pinv = pseudo_inverse(h)
            if self.start + self.width > pinv.shape[1]:
                raise ValueError("pinv slice exceeds available columns")
            return pinv[:, self.start : self.start + self.width]
        if self.kind == "align":
            return alignment_block(h, self.width)
        if self.kind == "null":
            basis = null_space_basis(h)
            if self.start + self.width > basis.shape[1]:
                raise ValueError("null slice exceeds null-space dimension")
            return basis[:, self.start : self.start + self.width]
        # pair
        ga, gb = paired_alignment(h, channels.h(self.ch_b))
        block = ga if self.side == "a" else gb
        if self.width > block.shape[1]:
            raise ValueError("pair slice exceeds paired null-space dimension")
        return block[:, : self.width]

    def to_json(self) -> dict:
        out = {"kind": self.kind, "width": self.width}
        if self.ch is not None:
            out["ch"] = self.ch
        if self.ch_b is not None:
            out["ch_b"] = self.ch_b
        if self.side is not None:
            out["side"] = self.side
        if self.start:
            out["start"] = self.start
        return out

    @staticmethod
    def from_json(data: dict) -> "Carrier":
        return Carrier(
            kind=data["kind"],
            width=data["width"],
            ch=data.get("ch"),
            ch_b=data.get("ch_b"),
            side=data.get("side"),
            start=data.get("start", 0),
        )


@dataclass(frozen=True)
class Variable:
    name: str
    length: int
    tx: int
    rx: int

    def __post_init__(self):
        if self.length < 0:
            raise ValueError("variable length must be non-negative")
        if self.tx not in (1, 2) or self.rx not in (1, 2):
            raise ValueError("tx and rx must be 1 or 2")


@dataclass(frozen=True)
class Placement:
    slot: int
    tx: int
    var: str
    carrier: Carrier


@dataclass(frozen=True)
class DecodeStep:
    """One SIC step: a receiver processes some slots jointly.

    solve lists variables recovered here; cancel lists variables whose
    already-known contribution is subtracted first. solve_groups names
    aligned sums recovered as single fresh unknowns; cancel_groups subtracts
    previously solved group values. stage is a coarse ordering label.
    """

    rx: int
    slots: Tuple[int, ...]
    solve: Tuple[str, ...] = ()
    cancel: Tuple[str, ...] = ()
    solve_groups: Tuple[Tuple[str, ...], ...] = ()
    cancel_groups: Tuple[Tuple[str, ...], ...] = ()
    stage: int = 1


def _group_key(group: Sequence[str]) -> Tuple[str, ...]:
    return tuple(group)


@dataclass(frozen=True)
class CodeScheme:
    name: str
    dims: Dimensions
    slot_topologies: Tuple[str, ...]
    variables: Tuple[Variable, ...]
    placements: Tuple[Placement, ...]
    steps: Tuple[DecodeStep, ...]

    def __post_init__(self):
        self.validate()

    # -- views ---------------------------------------------------------

    @property
    def n_slots(self) -> int:
        return len(self.slot_topologies)

    @property
    def total_symbols(self) -> int:
        return sum(v.length for v in self.variables)

    def variable(self, name: str) -> Variable:
        for v in self.variables:
            if v.name == name:
                return v
        raise KeyError(name)

    def topology(self, slot: int) -> Topology:
        return TOPOLOGIES[self.slot_topologies[slot]]

    # -- consistency ----------------------------------------------------

    def validate(self) -> None:
        names = [v.name for v in self.variables]
        if len(set(names)) != len(names):
            raise ValueError("duplicate variable names")
        by_name = {v.name: v for v in self.variables}
        for t in self.slot_topologies:
            if t not in TOPOLOGIES:
                raise ValueError(f"unknown topology {t!r}")
        for pl in self.placements:
            if not 0 <= pl.slot < self.n_slots:
                raise ValueError("placement references a missing slot")
            v = by_name.get(pl.var)
            if v is None:
                raise ValueError(f"placement references unknown variable {pl.var!r}")
            if v.tx != pl.tx:
                raise ValueError(f"variable {pl.var!r} placed at the wrong transmitter")
            if pl.carrier.width != v.length:
                raise ValueError(f"carrier width mismatch for {pl.var!r}")
        placed = {pl.var for pl in self.placements}
        solved: Dict[str, int] = {}
        solved_groups: Dict[Tuple[str, ...], int] = {}
        for idx, st in enumerate(self.steps):
            if st.rx not in (1, 2):
                raise ValueError("step receiver must be 1 or 2")
            for s in st.slots:
                if not 0 <= s < self.n_slots:
                    raise ValueError("step references a missing slot")
            for nm in st.solve:
                if nm not in by_name:
                    raise ValueError(f"step solves unknown variable {nm!r}")
                if nm in solved:
                    raise ValueError(f"variable {nm!r} solved twice")
                solved[nm] = idx
            for nm in st.cancel:
                if solved.get(nm, idx) >= idx:
                    raise ValueError(
                        f"variable {nm!r} cancelled before being solved"
                    )
            for g in st.solve_groups:
                key = _group_key(g)
                if len(g) < 2:
                    raise ValueError("groups need at least two members")
                for nm in g:
                    if nm not in by_name:
                        raise ValueError(f"group references unknown variable {nm!r}")
                if key in solved_groups:
                    raise ValueError(f"group {key} solved twice")
                solved_groups[key] = idx
            for g in st.cancel_groups:
                if solved_groups.get(_group_key(g), idx) >= idx:
                    raise ValueError(f"group {g} cancelled before being solved")
        for v in self.variables:
            if v.length and v.name not in placed:
                raise ValueError(f"variable {v.name!r} never placed")
            if v.length and v.name not in solved:
                raise ValueError(f"variable {v.name!r} never solved")

    # -- serialization ---------------------------------------------------

    def to_json(self) -> str:
        return json.dumps(self._payload(), indent=2, sort_keys=True)

    def _payload(self) -> dict:
        return {
            "name": self.name,
            "m": self.dims.m,
            "n": self.dims.n,
            "slots": list(self.slot_topologies),
            "variables": [
                {"name": v.name, "length": v.length, "tx": v.tx, "rx": v.rx}
                for v in self.variables
            ],
            "placements": [
                {
                    "slot": pl.slot,
                    "tx": pl.tx,
                    "var": pl.var,
                    "carrier": pl.carrier.to_json(),
                }
                for pl in self.placements
            ],
            "steps": [
                {
                    "rx": st.rx,
                    "slots": list(st.slots),
                    "solve": list(st.solve),
                    "cancel": list(st.cancel),
                    "solve_groups": [list(g) for g in st.solve_groups],
                    "cancel_groups": [list(g) for g in st.cancel_groups],
                    "stage": st.stage,
                }
                for st in self.steps
            ],
        }

    @classmethod
    def from_json(cls, text: str) -> "CodeScheme":
        data = json.loads(text)
        if data.get("super_precoder"):
            cls = SuperPrecoder
        return cls(
            name=data["name"],
            dims=Dimensions(data["m"], data["n"]),
            slot_topologies=tuple(data["slots"]),
            variables=tuple(
                Variable(v["name"], v["length"], v["tx"], v["rx"])
                for v in data["variables"]
            ),
            placements=tuple(
                Placement(
                    p["slot"], p["tx"], p["var"], Carrier.from_json(p["carrier"])
                )
                for p in data["placements"]
            ),
            steps=tuple(
                DecodeStep(
                    rx=s["rx"],
                    slots=tuple(s["slots"]),
                    solve=tuple(s["solve"]),
                    cancel=tuple(s["cancel"]),
                    solve_groups=tuple(tuple(g) for g in s["solve_groups"]),
                    cancel_groups=tuple(tuple(g) for g in s["cancel_groups"]),
                    stage=s["stage"],
                )
                for s in data["steps"]
            ),
        )


@dataclass(frozen=True)
class SuperPrecoder(CodeScheme):
    """A CodeScheme presented as one block precoding matrix per transmitter.

    The overall precoder is block diagonal across transmitters: stacking the
    per-slot transmit vectors gives X_t = A_t u_t where A_t has one block row
    per slot and one block column per variable of transmitter t. grid()
    returns that symbolic block matrix with explicit zero tags.
    """

    def grid(self, tx: int) -> List[List[dict]]:
        vars_t = [v for v in self.variables if v.tx == tx]
        rows: List[List[dict]] = []
        for slot in range(self.n_slots):
            row: List[dict] = []
            for v in vars_t:
                entry: dict = {"kind": "zero", "width": v.length}
                for pl in self.placements:
                    if pl.slot == slot and pl.var == v.name:
                        entry = pl.carrier.to_json()
                        break
                row.append(entry)
            rows.append(row)
        return rows

    def _payload(self) -> dict:
        out = super()._payload()
        out["super_precoder"] = True
        out["grid"] = {"tx1": self.grid(1), "tx2": self.grid(2)}
        return out


@dataclass
class EffectiveChannel:
    """Stacked noise-free receive matrix for a scheme on one channel draw.

    matrix has one block row per (receiver, slot) pair, receiver-major, each
    of height N, and one block column per variable. Rows belonging to a slot
    where the corresponding cross link is off are zero by construction.
    """

    matrix: np.ndarray
    dims: Dimensions
    slot_topologies: Tuple[str, ...]
    var_order: Tuple[str, ...]
    row_blocks: Dict[Tuple[int, int], slice] = field(repr=False, default_factory=dict)
    col_blocks: Dict[str, slice] = field(repr=False, default_factory=dict)

    @property
    def n_slots(self) -> int:
        return len(self.slot_topologies)

    def rows_for(self, rx: int, slots: Sequence[int]) -> np.ndarray:
        idx: List[int] = []
        for s in slots:
            blk = self.row_blocks[(rx, s)]
            idx.extend(range(blk.start, blk.stop))
        return np.asarray(idx, dtype=int)

    def block(self, rx: int, slot: int, var: str) -> np.ndarray:
        return self.matrix[self.row_blocks[(rx, slot)], self.col_blocks[var]]

    def columns(self, rows: np.ndarray, var: str) -> np.ndarray:
        return self.matrix[np.ix_(rows, range(*self.col_blocks[var].indices(self.matrix.shape[1])))]

    def concat(self, x: Dict[str, np.ndarray]) -> np.ndarray:
        out = np.zeros(self.matrix.shape[1])
        for name in self.var_order:
            blk = self.col_blocks[name]
            if blk.stop > blk.start:
                out[blk] = x[name]
        return out


def effective_channel(channels: ChannelSet, scheme: CodeScheme) -> EffectiveChannel:
    """Materialize carriers and assemble the stacked receive matrix."""
    dims = channels.dims
    if (dims.m, dims.n) != (scheme.dims.m, scheme.dims.n):
        raise ValueError("channel set and scheme dimensions disagree")
    n, s_count = dims.n, scheme.n_slots
    var_order = tuple(v.name for v in scheme.variables)
    col_blocks: Dict[str, slice] = {}
    off = 0
    for v in scheme.variables:
        col_blocks[v.name] = slice(off, off + v.length)
        off += v.length
    total = off
    matrix = np.zeros((2 * s_count * n, total))
    row_blocks: Dict[Tuple[int, int], slice] = {}
    for rx in (1, 2):
        for slot in range(s_count):
            r0 = (rx - 1) * s_count * n + slot * n
            row_blocks[(rx, slot)] = slice(r0, r0 + n)

    cache: Dict[Carrier, np.ndarray] = {}
    for pl in scheme.placements:
        if pl.carrier not in cache:
            cache[pl.carrier] = pl.carrier.materialize(channels)
        block = cache[pl.carrier]
        topo = scheme.topology(pl.slot)
        for rx in (1, 2):
            if not topo.link(rx, pl.tx):
                continue
            h = channels.link_matrix(rx, pl.tx)
            rows = row_blocks[(rx, pl.slot)]
            cols = col_blocks[pl.var]
            matrix[rows, cols] += h @ block

    return EffectiveChannel(
        matrix=matrix,
        dims=dims,
        slot_topologies=scheme.slot_topologies,
        var_order=var_order,
        row_blocks=row_blocks,
        col_blocks=col_blocks,
    )
