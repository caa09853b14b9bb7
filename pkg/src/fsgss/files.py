"""Bit-exact file formats for params, keys, rosters, credentials, signatures.

Two shapes are used.  Multi-line files hold one `name=<hex>` per line in
a fixed order (params, signatures).  Record files hold one
space-separated `name=value ...` record per line (roster, keys,
credentials); the registry in `authority` uses the same shape.  All
integers use the canonical hex rules from `wire`.
"""

from .errors import ParseError
from .handshake import MemberCredential
from .roster import KeyPair, Roster, ScSecret, register
from .modmath import PublicParams
from .signing import Signature
from .wire import parse_hex, to_hex

PUBLIC_PARAMS_FIELDS = ("p0", "n", "g2")
SECRET_PARAMS_FIELDS = ("p1", "q1")
SIGNATURE_FIELDS = ("m", "c", "e_cap", "r4", "r6", "s1", "s2")
KEYPAIR_FIELDS = ("member", "x", "y")
ROSTER_FIELDS = ("member", "y")
CREDENTIAL_FIELDS = ("member", "b_prime", "b", "r1", "r3", "rho3", "r2", "a", "s")


def _write_lines(path, fields, values: dict) -> None:
    with open(path, "w", encoding="ascii") as fh:
        for name in fields:
            fh.write(f"{name}={to_hex(values[name])}\n")


def _read_lines(path, fields) -> dict:
    with open(path, "r", encoding="ascii", newline="") as fh:
        text = fh.read()
    if text and not text.endswith("\n"):
        raise ParseError("truncated final line", line=text.count("\n") + 1)
    lines = text.splitlines()
    if len(lines) != len(fields):
        raise ParseError(f"expected {len(fields)} lines, got {len(lines)}")
    values = {}
    for lineno, (expected, line) in enumerate(zip(fields, lines), start=1):
        name, sep, value = line.partition("=")
        if not sep or name != expected:
            raise ParseError(f"expected {expected}=..., got {line!r}", line=lineno)
        values[name] = parse_hex(value, line=lineno)
    return values


def _format_record(fields, values: dict) -> str:
    parts = []
    for name in fields:
        value = values[name]
        parts.append(f"{name}={value if name == 'member' else to_hex(value)}")
    return " ".join(parts)


def _parse_record(line: str, fields, lineno=None) -> dict:
    parts = line.split(" ")
    if len(parts) != len(fields):
        raise ParseError(f"expected {len(fields)} fields, got {len(parts)}", line=lineno)
    values = {}
    for part, expected in zip(parts, fields):
        name, sep, value = part.partition("=")
        if not sep or name != expected:
            raise ParseError(f"expected {expected}=..., got {part!r}", line=lineno)
        values[name] = value if name == "member" else parse_hex(value, line=lineno)
    return values


def _read_records(path, fields) -> list:
    with open(path, "r", encoding="ascii", newline="") as fh:
        text = fh.read()
    if text and not text.endswith("\n"):
        raise ParseError("truncated final line", line=text.count("\n") + 1)
    return [
        _parse_record(line, fields, lineno)
        for lineno, line in enumerate(text.splitlines(), start=1)
    ]


def save_public_params(path, pub: PublicParams) -> None:
    _write_lines(path, PUBLIC_PARAMS_FIELDS, {"p0": pub.p0, "n": pub.n, "g2": pub.g2})


def load_public_params(path) -> PublicParams:
    values = _read_lines(path, PUBLIC_PARAMS_FIELDS)
    return PublicParams(p0=values["p0"], n=values["n"], g2=values["g2"])


def save_secret_params(path, sec: ScSecret) -> None:
    _write_lines(path, SECRET_PARAMS_FIELDS, {"p1": sec.p1, "q1": sec.q1})


def load_secret_params(path) -> ScSecret:
    values = _read_lines(path, SECRET_PARAMS_FIELDS)
    return ScSecret(p1=values["p1"], q1=values["q1"])


def save_signature(path, sig: Signature) -> None:
    _write_lines(path, SIGNATURE_FIELDS, sig.as_dict())


def load_signature(path) -> Signature:
    values = _read_lines(path, SIGNATURE_FIELDS)
    return Signature(**values)


def save_keypair(path, member_id: str, keypair: KeyPair) -> None:
    line = _format_record(KEYPAIR_FIELDS, {"member": member_id, "x": keypair.x, "y": keypair.y})
    with open(path, "w", encoding="ascii") as fh:
        fh.write(line + "\n")


def load_keypair(path) -> tuple[str, KeyPair]:
    records = _read_records(path, KEYPAIR_FIELDS)
    if len(records) != 1:
        raise ParseError(f"expected one key record, got {len(records)}")
    values = records[0]
    return values["member"], KeyPair(x=values["x"], y=values["y"])


def save_roster(path, roster: Roster) -> None:
    with open(path, "w", encoding="ascii") as fh:
        for member_id, y in roster.entries:
            fh.write(_format_record(ROSTER_FIELDS, {"member": member_id, "y": y}) + "\n")


def load_roster(path) -> Roster:
    roster = Roster()
    for values in _read_records(path, ROSTER_FIELDS):
        register(roster, values["member"], values["y"])
    return roster


def save_credential(path, credential: MemberCredential) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(_format_record(CREDENTIAL_FIELDS, credential.as_dict()) + "\n")


def load_credential(path) -> MemberCredential:
    records = _read_records(path, CREDENTIAL_FIELDS)
    if len(records) != 1:
        raise ParseError(f"expected one credential record, got {len(records)}")
    values = records[0]
    values["member_id"] = values.pop("member")
    return MemberCredential(**values)
