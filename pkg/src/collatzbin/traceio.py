"""Text renderings of traces, chains, and merge derivations.

Four formats. "table" pairs each odd value with its tripled successor,
one row per reduced step. "scratch" lays the full orbit out one line per
iterate with a margin glyph per move: "·" marks the start, "→" a 3n+1
hop, "↓" a halving. "points" is bare "index,value" rows for plotting.
"machine" is the scripting contract: comma-separated fields
index,decimal,binary,kind,annotations with stable order; annotations is
the final field and is the only one that may itself contain commas, so
parsers split each line at most four times.

Every renderer returns a text blob ending in a newline; callers route it
to stdout or a file. Output is UTF-8 with LF line endings.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Union

from .bitnat import BinaryNat
from .collatz import CollatzTrace
from .errors import DomainError
from .powersum import DerivationRecord, from_powersum

__all__ = [
    "RenderConfig",
    "MachineRecord",
    "render_table",
    "render_scratch",
    "render_points",
    "render_machine",
    "parse_machine",
    "render",
]

_FORMATS = ("table", "scratch", "points", "machine")


@dataclass(frozen=True, slots=True)
class RenderConfig:
    format: str = "table"
    show_decimal: bool = True
    show_binary: bool = True
    column_width: int = 0  # 0 = natural width, else right-justify decimals

    def __post_init__(self):
        if self.format not in _FORMATS:
            raise DomainError(f"unknown format {self.format!r}, expected one of {_FORMATS}")
        if self.format in ("table", "scratch") and not (self.show_decimal or self.show_binary):
            raise DomainError(f"{self.format} format needs decimal or binary digits enabled")
        if self.column_width < 0:
            raise DomainError("column_width must be >= 0")


class MachineRecord(NamedTuple):
    index: int
    decimal: str
    binary: str
    kind: str
    annotations: str


def _dec(n: BinaryNat, width: int) -> str:
    d = n.to_decimal()
    return d.rjust(width) if width else d


def render_table(chain: list[BinaryNat], config: RenderConfig = RenderConfig()) -> str:
    """One row per odd value n: "n=(bits)₂ → (bits of 3n+1)₂".

    The closing 1 gets no row of its own (its successor starts the
    trivial cycle), except that the bare chain [1] renders as the single
    terminal row "1=(1)₂".
    """
    if not chain:
        raise DomainError("cannot render an empty chain")
    w = config.column_width
    rows = []
    for n in chain:
        if n.is_one() and len(chain) > 1:
            break
        left_parts = []
        if config.show_decimal:
            left_parts.append(_dec(n, w))
        if config.show_binary:
            left_parts.append(f"({n.bits})₂")
        left = "=".join(left_parts)
        if n.is_one():
            rows.append(left)
            continue
        t = n.mul3_add1()
        right = f"({t.bits})₂" if config.show_binary else _dec(t, 0)
        rows.append(f"{left} → {right}")
    return "\n".join(rows) + "\n"


def render_scratch(trace: CollatzTrace, config: RenderConfig = RenderConfig("scratch")) -> str:
    """One line per iterate with a margin glyph for the move that made it."""
    w = config.column_width
    lines = []
    for value, kind in trace.entries:
        glyph = "·" if kind is None else ("→" if kind.value == "odd-step" else "↓")
        parts = [glyph]
        if config.show_decimal:
            parts.append(_dec(value, w))
        if config.show_binary:
            sep = "= " if config.show_decimal else ""
            parts.append(f"{sep}({value.bits})₂")
        lines.append(" ".join(parts))
    if trace.truncated:
        lines.append("... truncated")
    return "\n".join(lines) + "\n"


def render_points(trace: CollatzTrace) -> str:
    """Bare "index,value" rows from index 0, for external plotting."""
    return "\n".join(f"{i},{e.value.to_decimal()}" for i, e in enumerate(trace.entries)) + "\n"


def _exps(exponents: tuple[int, ...]) -> str:
    # comma-free sum notation for the machine annotations field
    return "+".join(str(e) for e in exponents)


Renderable = Union[CollatzTrace, "list[BinaryNat]", "list[DerivationRecord]"]


def render_machine(obj: Renderable) -> str:
    """Lossless line records for a trace, an odd chain, or a derivation.

    Traces: kind is the move that produced the entry (empty for the
    start); the final line is annotated "truncated" when the walk ran
    out of budget. Chains: every row is an odd value about to be
    tripled, so kind is "odd-step", with "terminal" marking the closing
    1. Derivations: kind is "merge" and the annotations field carries
    the raw and carried exponent lists plus the shift.
    """
    lines = []
    if isinstance(obj, CollatzTrace):
        last = len(obj.entries) - 1
        for i, (value, kind) in enumerate(obj.entries):
            ann = "truncated" if obj.truncated and i == last else ""
            lines.append(f"{i},{value.to_decimal()},{value.bits},{kind.value if kind else ''},{ann}")
    elif obj and isinstance(obj[0], DerivationRecord):
        for i, rec in enumerate(obj):
            value = from_powersum(rec.before)
            ann = f"raw:{_exps(rec.raw.exponents)} after:{_exps(rec.after.exponents)} shift:{rec.shift}"
            lines.append(f"{i},{value.to_decimal()},{value.bits},merge,{ann}")
    elif obj and isinstance(obj[0], BinaryNat):
        last = len(obj) - 1
        for i, value in enumerate(obj):
            ann = "terminal" if value.is_one() and i == last else ""
            lines.append(f"{i},{value.to_decimal()},{value.bits},odd-step,{ann}")
    else:
        raise DomainError(f"cannot render {type(obj).__name__} in machine format")
    return "\n".join(lines) + "\n"


def parse_machine(text: str) -> list[MachineRecord]:
    """Invert render_machine; annotations keep any embedded commas."""
    records = []
    for line in text.splitlines():
        if not line:
            continue
        index, decimal, binary, kind, annotations = line.split(",", 4)
        records.append(MachineRecord(int(index), decimal, binary, kind, annotations))
    return records


def render(obj: Renderable, config: RenderConfig) -> str:
    """Route to the renderer named by config.format."""
    if config.format == "machine":
        return render_machine(obj)
    if config.format == "points":
        if not isinstance(obj, CollatzTrace):
            raise DomainError("points format renders a trace")
        return render_points(obj)
    if config.format == "scratch":
        if not isinstance(obj, CollatzTrace):
            raise DomainError("scratch format renders a trace")
        return render_scratch(obj, config)
    if not isinstance(obj, list):
        raise DomainError("table format renders an odd chain")
    return render_table(obj, config)
