"""Fail-stop group signatures over the p0 = 4*p1*q1 + 1 subgroup.

Setup publishes {g2, p0, n}; members enroll through a 3-way exchange
with the group manager and sign anonymously; the manager can open a
signature to its issuing session; and a disputed signature yields a
proof of forgery in the form of a nontrivial factor of n.
"""

from .adversary import (
    BruteForceDlpOracle,
    FailStopTrial,
    InterceptedSignature,
    forge_reuse,
    forge_with_dlp,
    run_failstop_trial,
)
from .authority import (
    INDISTINGUISHABLE,
    NO_FACTOR,
    ForgeryProof,
    OpeningMatch,
    OpeningResult,
    open_signature,
    prove_forgery,
    registry_load,
    registry_store,
)
from .errors import (
    CredentialInvalid,
    DomainError,
    DuplicateMember,
    FsgssError,
    GenerationFailed,
    MalformedSignature,
    NotInvertible,
    OracleTooWeak,
    ParseError,
    ProtocolError,
    RefusedUnverified,
)
from .handshake import (
    ManagerState,
    MemberCredential,
    SessionRecord,
    member_finalize,
    member_respond,
    mgr_begin,
    mgr_issue,
)
from .modmath import (
    GroupParams,
    PublicParams,
    dlog_bruteforce,
    find_subgroup_generator,
    gcd,
    gen_group_primes,
    is_probable_prime,
    mod_exp,
    mod_inv,
)
from .roster import (
    MANAGER_ID,
    GroupPublicInfo,
    KeyPair,
    Roster,
    ScSecret,
    member_keygen,
    register,
    sc_setup,
)
from .scenarios import DESK_PARAMS, MICRO_PARAMS, ScenarioReport, run_scenario
from .signing import (
    MODE_LITERAL,
    MODE_REPAIRED,
    Signature,
    sign,
    verify,
)

__version__ = "0.1.0"
