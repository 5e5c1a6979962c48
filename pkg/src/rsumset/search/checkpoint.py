"""Binary checkpoints for resumable searches.

Layout (little-endian):

    b"SSLB1"                 magic
    u64  config hash         FNV-1a 64 of the canonical config text
    u8   strategy            1 = ORBIT, 2 = BNB
    i32  best                -1 when nothing has been found yet
    u64  nodes, pruned, covered, total, audit_leaves, audit_violations
    u16  level               ORBIT: size of the stored representatives
    u32  witness count, then per witness:  u16 k, k * u16 flat indices
    u32  frontier count, then per record:  u8 tag, u16 k, k * u16 values

Frontier tags: 0 = BNB watermark (every work unit up to this prefix is done),
1 = BNB unit completed beyond the watermark, 2 = ORBIT representative.
"""
from __future__ import annotations

import os
import struct
from dataclasses import dataclass, field
from pathlib import Path

MAGIC = b"SSLB1"
TAG_WATERMARK = 0
TAG_DONE = 1
TAG_ORBIT_REP = 2

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3


class CheckpointError(ValueError):
    pass


def fnv1a64(data: bytes) -> int:
    h = _FNV_OFFSET
    for byte in data:
        h ^= byte
        h = (h * _FNV_PRIME) & 0xFFFFFFFFFFFFFFFF
    return h


@dataclass
class Checkpoint:
    config_hash: int
    strategy: int
    best: int | None = None
    nodes: int = 0
    pruned: int = 0
    covered: int = 0
    total: int = 0
    audit_leaves: int = 0
    audit_violations: int = 0
    level: int = 0
    witnesses: list[tuple[int, ...]] = field(default_factory=list)
    frontier: list[tuple[int, tuple[int, ...]]] = field(default_factory=list)

    def to_bytes(self) -> bytes:
        out = bytearray(MAGIC)
        out += struct.pack(
            "<QBiQQQQQQH",
            self.config_hash,
            self.strategy,
            -1 if self.best is None else self.best,
            self.nodes,
            self.pruned,
            self.covered,
            self.total,
            self.audit_leaves,
            self.audit_violations,
            self.level,
        )
        out += struct.pack("<I", len(self.witnesses))
        for w in self.witnesses:
            out += struct.pack(f"<H{len(w)}H", len(w), *w)
        out += struct.pack("<I", len(self.frontier))
        for tag, vals in self.frontier:
            out += struct.pack(f"<BH{len(vals)}H", tag, len(vals), *vals)
        return bytes(out)

    @classmethod
    def from_bytes(cls, data: bytes) -> "Checkpoint":
        if data[:5] != MAGIC:
            raise CheckpointError("not a checkpoint file (bad magic)")
        try:
            pos = 5
            head = struct.Struct("<QBiQQQQQQH")
            (h, strat, best, nodes, pruned, covered, total, al, av, level) = head.unpack_from(data, pos)
            pos += head.size
            (nw,) = struct.unpack_from("<I", data, pos)
            pos += 4
            witnesses = []
            for _ in range(nw):
                (k,) = struct.unpack_from("<H", data, pos)
                pos += 2
                witnesses.append(struct.unpack_from(f"<{k}H", data, pos))
                pos += 2 * k
            (nf,) = struct.unpack_from("<I", data, pos)
            pos += 4
            frontier = []
            for _ in range(nf):
                tag, k = struct.unpack_from("<BH", data, pos)
                pos += 3
                frontier.append((tag, struct.unpack_from(f"<{k}H", data, pos)))
                pos += 2 * k
        except struct.error as exc:
            raise CheckpointError(f"truncated checkpoint: {exc}") from None
        if pos != len(data):
            raise CheckpointError("trailing bytes after checkpoint records")
        return cls(h, strat, None if best < 0 else best, nodes, pruned, covered, total, al, av, level,
                   [tuple(w) for w in witnesses], frontier)


def save(path: str | Path, ckpt: Checkpoint) -> None:
    """Write atomically (temp file + rename)."""
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_bytes(ckpt.to_bytes())
    os.replace(tmp, path)


def load(path: str | Path) -> Checkpoint | None:
    """The stored checkpoint, or None when the file does not exist or is empty."""
    path = Path(path)
    if not path.exists() or path.stat().st_size == 0:
        return None
    return Checkpoint.from_bytes(path.read_bytes())
