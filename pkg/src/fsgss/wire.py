"""Canonical text encoding for protocol messages.

A message is one `type=<TAG>` line followed by one `name=<hex>` line per
field, in a fixed per-type order, newline-terminated.  Hex is lowercase,
big-endian and minimal: no leading zeros, a bare `0` for zero.  Decoding
rejects anything non-canonical, so encode/decode round-trips are
byte-exact in both directions.
"""

import re
from dataclasses import dataclass

from .errors import ParseError

FIELD_ORDER = {
    "REQ": (),
    "R1": ("r1",),
    "R2": ("r2",),
    "AS": ("a", "s"),
    "SIG": ("m", "c", "e_cap", "r4", "r6", "s1", "s2"),
}

_CANONICAL_HEX = re.compile(r"0|[1-9a-f][0-9a-f]*")


def to_hex(value: int) -> str:
    """Minimal lowercase hex for a non-negative int."""
    if value < 0:
        raise ParseError(f"negative value: {value}")
    return format(value, "x")


def parse_hex(text: str, line: int | None = None) -> int:
    if not _CANONICAL_HEX.fullmatch(text):
        raise ParseError(f"non-canonical hex: {text!r}", line=line)
    return int(text, 16)


@dataclass(frozen=True)
class WireMessage:
    tag: str
    fields: dict

    def __post_init__(self):
        order = FIELD_ORDER.get(self.tag)
        if order is None:
            raise ParseError(f"unknown message type: {self.tag!r}")
        if tuple(self.fields) != order:
            raise ParseError(
                f"{self.tag} fields must be {list(order)}, got {list(self.fields)}"
            )
        for name, value in self.fields.items():
            if not isinstance(value, int) or value < 0:
                raise ParseError(f"field {name} must be a non-negative int")

    def __getitem__(self, name: str) -> int:
        return self.fields[name]


def message(tag: str, **fields: int) -> WireMessage:
    """Build a WireMessage with fields forced into canonical order."""
    order = FIELD_ORDER.get(tag)
    if order is None:
        raise ParseError(f"unknown message type: {tag!r}")
    if set(fields) != set(order):
        raise ParseError(f"{tag} fields must be {list(order)}, got {sorted(fields)}")
    return WireMessage(tag=tag, fields={name: fields[name] for name in order})


def encode(msg: WireMessage) -> bytes:
    lines = [f"type={msg.tag}"]
    lines += [f"{name}={to_hex(value)}" for name, value in msg.fields.items()]
    return ("\n".join(lines) + "\n").encode("ascii")


def decode(data: bytes) -> WireMessage:
    try:
        text = data.decode("ascii")
    except UnicodeDecodeError as exc:
        raise ParseError(f"not ascii: {exc}") from None
    if not text.endswith("\n"):
        raise ParseError("message must be newline-terminated")
    lines = text[:-1].split("\n")
    if not lines[0].startswith("type="):
        raise ParseError("first line must be type=<TAG>", line=1)
    tag = lines[0][len("type="):]
    order = FIELD_ORDER.get(tag)
    if order is None:
        raise ParseError(f"unknown message type: {tag!r}", line=1)
    if len(lines) - 1 != len(order):
        raise ParseError(f"{tag} expects {len(order)} field lines, got {len(lines) - 1}")
    fields = {}
    for lineno, (expected, entry) in enumerate(zip(order, lines[1:]), start=2):
        name, sep, value = entry.partition("=")
        if not sep:
            raise ParseError(f"expected name=value, got {entry!r}", line=lineno)
        if name != expected:
            raise ParseError(f"expected field {expected!r}, got {name!r}", line=lineno)
        fields[name] = parse_hex(value, line=lineno)
    return WireMessage(tag=tag, fields=fields)
