"""Command-line surface for group setup, enrollment, signing, and demos.

Artifacts live in a directory (``--out`` for setup, ``--dir`` for later
commands): ``params.pub``, ``params.sec``, ``manager.key``,
``roster.txt``, ``registry.txt``, plus per-member ``<id>.key`` and
``<id>.cred`` files.  Exit codes: 0 success (or: signature valid),
1 domain failure (or: signature invalid), 2 usage error.

The environment variable ``FSGSS_SEED`` overrides ``--seed``.
"""

import argparse
import hashlib
import os
import random
import sys

from . import authority, files, handshake, signing
from .adversary import BruteForceDlpOracle, forge_reuse, forge_with_dlp
from .bus import MessageBus
from .errors import FsgssError
from .roster import MANAGER_ID, GroupPublicInfo, Roster, member_keygen, register, sc_setup
from .scenarios import SCENARIO_NAMES, run_scenario
from .signing import MODES
from .wire import parse_hex

PUBLIC_PARAMS = "params.pub"
SECRET_PARAMS = "params.sec"
MANAGER_KEY = "manager.key"
ROSTER = "roster.txt"
REGISTRY = "registry.txt"


def hash_message(data: bytes, n: int) -> int:
    """Map message bytes to a scalar mod n via SHA-256 (big-endian)."""
    return int.from_bytes(hashlib.sha256(data).digest(), "big") % n


def _resolve_seed(value):
    env = os.environ.get("FSGSS_SEED")
    if env is not None:
        return int(env)
    if value is not None:
        return value
    return int.from_bytes(os.urandom(8), "big")


def _rng(args) -> random.Random:
    return random.Random(_resolve_seed(getattr(args, "seed", None)))


def _load_group(directory) -> tuple:
    pub = files.load_public_params(os.path.join(directory, PUBLIC_PARAMS))
    roster = files.load_roster(os.path.join(directory, ROSTER))
    gpub = GroupPublicInfo(p0=pub.p0, n=pub.n, g2=pub.g2, y0=roster.get(MANAGER_ID))
    return pub, roster, gpub


def _cmd_setup(args) -> int:
    rng = _rng(args)
    pub, sec = sc_setup(args.bits, rng)
    manager_key = member_keygen(pub, rng)
    roster = Roster()
    register(roster, MANAGER_ID, manager_key.y)
    os.makedirs(args.out, exist_ok=True)
    files.save_public_params(os.path.join(args.out, PUBLIC_PARAMS), pub)
    files.save_secret_params(os.path.join(args.out, SECRET_PARAMS), sec)
    files.save_keypair(os.path.join(args.out, MANAGER_KEY), MANAGER_ID, manager_key)
    files.save_roster(os.path.join(args.out, ROSTER), roster)
    open(os.path.join(args.out, REGISTRY), "a").close()
    print(f"group ready in {args.out} (p0={pub.p0}, n={pub.n}, g2={pub.g2})")
    return 0


def _cmd_keygen(args) -> int:
    pub, roster, _ = _load_group(args.dir)
    keypair = member_keygen(pub, _rng(args))
    register(roster, args.member, keypair.y)
    files.save_keypair(os.path.join(args.dir, f"{args.member}.key"), args.member, keypair)
    files.save_roster(os.path.join(args.dir, ROSTER), roster)
    print(f"registered {args.member} (y={keypair.y})")
    return 0


def _cmd_enroll(args) -> int:
    rng = _rng(args)
    _, roster, gpub = _load_group(args.dir)
    _, manager_key = files.load_keypair(os.path.join(args.dir, MANAGER_KEY))
    state = handshake.ManagerState(keypair=manager_key, pub=gpub, roster=roster)
    bus = MessageBus()
    member = handshake.MemberEnrollment(args.member, gpub)
    manager = handshake.ManagerEnrollment(state, args.member)
    bus.send(args.member, MANAGER_ID, member.request())
    for _ in range(2):
        _, msg = bus.receive(MANAGER_ID)
        bus.send(MANAGER_ID, args.member, manager.handle(msg, rng))
        _, msg = bus.receive(args.member)
        result = member.handle(msg, rng)
        if isinstance(result, handshake.MemberCredential):
            break
        bus.send(args.member, MANAGER_ID, result)
    files.save_credential(os.path.join(args.dir, f"{args.member}.cred"), result)
    authority.registry_store(os.path.join(args.dir, REGISTRY), state.records)
    print(f"enrolled {args.member}")
    return 0


def _cmd_sign(args) -> int:
    _, _, gpub = _load_group(args.dir)
    credential = files.load_credential(args.cred)
    with open(args.message_file, "rb") as fh:
        m = hash_message(fh.read(), gpub.n)
    sig = signing.sign(credential, gpub, m, _rng(args), mode=args.mode)
    files.save_signature(args.out, sig)
    print(f"signed (m={m}) -> {args.out}")
    return 0


def _cmd_verify(args) -> int:
    _, _, gpub = _load_group(args.dir)
    sig = files.load_signature(args.sig)
    if signing.verify(gpub, sig):
        print("valid")
        return 0
    print("invalid")
    return 1


def _cmd_open(args) -> int:
    _, _, gpub = _load_group(args.dir)
    _, manager_key = files.load_keypair(os.path.join(args.dir, MANAGER_KEY))
    sig = files.load_signature(args.sig)
    registry = authority.registry_load(args.registry)
    result = authority.open_signature(sig, registry, manager_key.x, gpub, mode=args.mode)
    for match in result.matches:
        print(f"match member={match.member_id} b={match.b:x} rho3={match.rho3:x}")
    for member_id, reason in result.skipped:
        print(f"skipped member={member_id}: {reason}", file=sys.stderr)
    if not result.matches:
        print("no-match")
    return 0


def _cmd_forge(args) -> int:
    rng = _rng(args)
    _, _, gpub = _load_group(args.dir)
    with open(args.message_file, "rb") as fh:
        m_star = hash_message(fh.read(), gpub.n)
    if args.mode == "dlp":
        forged = forge_with_dlp(m_star, gpub, BruteForceDlpOracle(gpub), rng)
    else:
        if args.sig is None:
            print("forge --mode reuse requires --sig", file=sys.stderr)
            return 2
        forged = forge_reuse(files.load_signature(args.sig), m_star, gpub, rng)
    if args.out:
        files.save_signature(args.out, forged)
        print(f"forged (m={m_star}) -> {args.out}")
    else:
        for name, value in forged.as_dict().items():
            print(f"{name}={value:x}")
    return 0


def _cmd_prove_forgery(args) -> int:
    pub = files.load_public_params(os.path.join(args.dir, PUBLIC_PARAMS))
    b = parse_hex(args.b)
    b_star = parse_hex(args.b_star)
    outcome = authority.prove_forgery(b, b_star, pub.n)
    if isinstance(outcome, authority.ForgeryProof):
        print(f"factor={outcome.factor}")
        return 0
    print(outcome)
    return 1


def _cmd_demo(args) -> int:
    report = run_scenario(args.scenario, args.trials, _resolve_seed(args.seed))
    sys.stdout.write(report.render())
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fsgss", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("setup", help="generate group parameters and the manager key")
    p.add_argument("--bits", type=int, default=8)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", default=".")
    p.set_defaults(func=_cmd_setup)

    p = sub.add_parser("keygen", help="generate and register a member key")
    p.add_argument("--member", required=True)
    p.add_argument("--dir", default=".")
    p.add_argument("--seed", type=int)
    p.set_defaults(func=_cmd_keygen)

    p = sub.add_parser("enroll", help="run the 3-way exchange for a member")
    p.add_argument("--member", required=True)
    p.add_argument("--dir", default=".")
    p.add_argument("--seed", type=int)
    p.set_defaults(func=_cmd_enroll)

    p = sub.add_parser("sign", help="sign a message file with a credential")
    p.add_argument("--cred", required=True)
    p.add_argument("--message-file", required=True)
    p.add_argument("--mode", choices=MODES, default="repaired")
    p.add_argument("--out", required=True)
    p.add_argument("--dir", default=".")
    p.add_argument("--seed", type=int)
    p.set_defaults(func=_cmd_sign)

    p = sub.add_parser("verify", help="verify a signature file (exit 0/1)")
    p.add_argument("--sig", required=True)
    p.add_argument("--dir", default=".")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("open", help="identify the signing session (manager only)")
    p.add_argument("--sig", required=True)
    p.add_argument("--registry", required=True)
    p.add_argument("--mode", choices=MODES, default="repaired")
    p.add_argument("--dir", default=".")
    p.set_defaults(func=_cmd_open)

    p = sub.add_parser("forge", help="produce a forged signature")
    p.add_argument("--mode", choices=("dlp", "reuse"), required=True)
    p.add_argument("--message-file", required=True)
    p.add_argument("--sig", help="intercepted signature (reuse mode)")
    p.add_argument("--out")
    p.add_argument("--dir", default=".")
    p.add_argument("--seed", type=int)
    p.set_defaults(func=_cmd_forge)

    p = sub.add_parser("prove-forgery", help="factor n from two representations")
    p.add_argument("--b", required=True, help="honest representation (hex)")
    p.add_argument("--b-star", required=True, help="disputed representation (hex)")
    p.add_argument("--dir", default=".")
    p.set_defaults(func=_cmd_prove_forgery)

    p = sub.add_parser("demo", help="run a multi-party scenario and report rates")
    p.add_argument("--scenario", choices=SCENARIO_NAMES, required=True)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=_cmd_demo)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (FsgssError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
