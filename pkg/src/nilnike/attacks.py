"""Passive key recovery from a protocol transcript.

Generic route: reduce the transcript to (c, c^{a_1...a_n}, c^{a_{n+1}}), solve
one discrete logarithm in <c> by Pohlig-Hellman over baby-step giant-step,
and exponentiate.  Linear routes read the exponent straight off coordinates
(Heisenberg) or off the layer power formula (quaternion), skipping the search.

Every attack runs on a :class:`CountingGroup`, so reports carry the number of
group operations spent.
"""

from __future__ import annotations

import time
from collections.abc import Callable
from dataclasses import dataclass, field
from math import isqrt
from typing import Optional

from .errors import (
    BudgetExceeded,
    InsufficientPrecision,
    LevelTooLow,
    NilnikeError,
    NoUnitCoordinate,
    NotInSubgroup,
)
from .group import CountingGroup, Element, Group, order_p_power, power, weight_commutator
from .protocol import Transcript
from .quaternion import layer_moduli, level_of
from .numtheory import vp_int

DEFAULT_BUDGET = 2**26
DEFAULT_TABLE_LIMIT = 2**26


def ceil_sqrt(n: int) -> int:
    r = isqrt(n)
    return r if r * r == n else r + 1


@dataclass
class DlogStats:
    bsgs_calls: int = 0
    bsgs_ops: int = 0


@dataclass
class AttackReport:
    algorithm: str
    success: bool
    key: Optional[Element] = None
    key_hex: Optional[str] = None
    ops: int = 0
    millis: float = 0.0
    exponents: Optional[dict] = None
    error: Optional[str] = None
    stats: DlogStats = field(default_factory=DlogStats)

    def to_dict(self, timing: bool = True) -> dict:
        out = {
            "algorithm": self.algorithm,
            "success": self.success,
            "ops": self.ops,
            "millis": round(self.millis, 3) if timing else 0,
        }
        if self.exponents is not None:
            out["exponents"] = {str(k): v for k, v in sorted(self.exponents.items())}
        out["key_hex"] = self.key_hex
        if self.error is not None:
            out["error"] = self.error
        return out


# --- discrete logarithms ----------------------------------------------------


def bsgs(
    G: Group,
    base: Element,
    target: Element,
    order_bound: int,
    table_limit: int = DEFAULT_TABLE_LIMIT,
    early_exit: bool = False,
) -> int:
    """Smallest e in [0, order_bound) with base^e = target.

    Baby steps base^0..base^{m-1} go into a table keyed by canonical bytes,
    m = ceil(sqrt(order_bound)).  By default the giant-step sweep always runs
    to the end, so the cost is exactly 2m - 1 operations whatever the answer.
    """
    if order_bound < 1:
        raise ValueError("order bound must be positive")
    m = ceil_sqrt(order_bound)
    if m > table_limit:
        raise BudgetExceeded(f"baby-step table of {m} entries exceeds the limit {table_limit}")
    table = {G.key(G.identity()): 0}
    cur = base
    for j in range(1, m):
        if j > 1:
            cur = G.mul(cur, base)
        table.setdefault(G.key(cur), j)
    # cur = base^{m-1}
    giant = G.inv(G.mul(cur, base) if m > 1 else base)
    found = None
    gamma = target
    for i in range(m):
        if i:
            gamma = G.mul(gamma, giant)
        if found is None:
            j = table.get(G.key(gamma))
            if j is not None:
                found = i * m + j
                if early_exit:
                    break
    if found is None or found >= order_bound:
        raise NotInSubgroup("target is not a power of the base within the order bound")
    return found


def pohlig_hellman(
    G: Group,
    base: Element,
    target: Element,
    p: int,
    alpha: int,
    table_limit: int = DEFAULT_TABLE_LIMIT,
    stats: Optional[DlogStats] = None,
) -> int:
    """Discrete log modulo p^alpha for a base of order p^alpha, one base-p digit at a time."""
    if stats is None:
        stats = DlogStats()
    gamma = power(G, base, p ** (alpha - 1))  # order p
    x = 0
    rest = target  # target * base^{-x}
    for k in range(alpha):
        h = power(G, rest, p ** (alpha - 1 - k))
        before = getattr(G, "ops", 0)
        d = bsgs(G, gamma, h, p, table_limit)
        stats.bsgs_calls += 1
        stats.bsgs_ops += getattr(G, "ops", 0) - before
        if d:
            x += d * p**k
            if k < alpha - 1:
                rest = G.mul(rest, power(G, base, -d * p**k))
    return x


def generic_work_estimate(p: int, alpha: int) -> int:
    """Baby-step giant-step operations Pohlig-Hellman needs in a group of order p^alpha."""
    return alpha * (2 * ceil_sqrt(p) - 1)


# --- transcript reduction ---------------------------------------------------


@dataclass(frozen=True)
class EavesdropperView:
    """What multilinearity lets anyone compute: c, c^{a_1...a_n} and c^{a_{n+1}}."""

    c: Element
    c_first: Element
    c_last: Element
    p: int
    alpha: int


def eavesdropper_view(G: Group, transcript: Transcript) -> EavesdropperView:
    params = transcript.params
    n, gens = params.n, list(params.generators)
    c = weight_commutator(G, gens)
    c_first = weight_commutator(G, [transcript.share(i, i) for i in range(1, n + 1)])
    c_last = weight_commutator(G, [transcript.share(1, n + 1), *gens[1:]])
    return EavesdropperView(c, c_first, c_last, params.p, params.alpha)


def solve_view_generic(
    G: Group,
    view: EavesdropperView,
    budget: int = DEFAULT_BUDGET,
    table_limit: int = DEFAULT_TABLE_LIMIT,
    stats: Optional[DlogStats] = None,
) -> tuple[Element, int]:
    """c^{xy} from (c, c^x, c^y): recover y by Pohlig-Hellman, then raise c^x to it."""
    estimate = generic_work_estimate(view.p, view.alpha)
    if estimate > budget:
        raise BudgetExceeded(
            f"Pohlig-Hellman needs about {estimate} operations, budget is {budget}"
        )
    y = pohlig_hellman(G, view.c, view.c_last, view.p, view.alpha, table_limit, stats)
    return power(G, view.c_first, y), y


# --- attacks ----------------------------------------------------------------


class _Run:
    """Counts operations and wall time for one attack instance."""

    def __init__(self, algorithm: str, transcript: Transcript):
        self.algorithm = algorithm
        self.transcript = transcript
        self.G = CountingGroup(transcript.params.group)

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        return False

    def report(self, key: Element, exponents: dict, stats: Optional[DlogStats] = None) -> AttackReport:
        millis = (time.perf_counter() - self.start) * 1000
        return AttackReport(
            self.algorithm,
            True,
            key=key,
            key_hex=self.G.key(key).hex(),
            ops=self.G.ops,
            millis=millis,
            exponents=exponents,
            stats=stats or DlogStats(),
        )


def eavesdrop_generic(
    transcript: Transcript,
    budget: int = DEFAULT_BUDGET,
    table_limit: int = DEFAULT_TABLE_LIMIT,
) -> AttackReport:
    params = transcript.params
    estimate = generic_work_estimate(params.p, params.alpha)
    if estimate > budget:
        raise BudgetExceeded(
            f"Pohlig-Hellman needs about {estimate} operations, budget is {budget}"
        )
    with _Run("generic", transcript) as run:
        stats = DlogStats()
        view = eavesdropper_view(run.G, transcript)
        key, y = solve_view_generic(run.G, view, budget, table_limit, stats)
        return run.report(key, {params.n + 1: y}, stats)


def attack_heisenberg_linear(transcript: Transcript) -> AttackReport:
    """Powers scale the u, v coordinates linearly, so a_{n+1} is one modular division away."""
    params = transcript.params
    if params.descriptor.family != "heisenberg":
        raise ValueError("the Heisenberg linear attack needs a Heisenberg transcript")
    n, p = params.n, params.p
    with _Run("heisenberg-linear", transcript) as run:
        G = run.G
        a = None
        for i, g in enumerate(params.generators, start=1):
            coords = (*g.u, *g.v)
            pos = next((k for k, x in enumerate(coords) if x % p), None)
            if pos is None:
                continue
            share = transcript.share(i, n + 1)
            a = (*share.u, *share.v)[pos] * pow(coords[pos], -1, p) % p
            break
        if a is None:
            raise NoUnitCoordinate("every generator is central; no coordinate to divide by")
        c_first = weight_commutator(G, [transcript.share(i, i) for i in range(1, n + 1)])
        key = power(G, c_first, a)
        return run.report(key, {n + 1: a})


def attack_quaternion_linear(transcript: Transcript) -> AttackReport:
    """Read a_{n+1} mod p^alpha off c^{a_{n+1}} = a0^a + a(b0 i + c0 j + d0 k) mod m^{(n+1) i0}."""
    params = transcript.params
    if params.descriptor.family != "quaternion":
        raise ValueError("the quaternion linear attack needs a quaternion transcript")
    n = params.n
    P = params.descriptor.quat_params()
    p, N, alpha = P.p, P.N, P.alpha
    with _Run("quaternion-linear", transcript) as run:
        G = run.G
        view = eavesdropper_view(G, transcript)
        if not level_of(P, view.c).at_least(n * P.i0):
            raise LevelTooLow(f"c is not in layer {n * P.i0}; the power formula does not apply")
        moduli = layer_moduli(P, P.quotient_level)
        best = None
        for pos in (1, 2, 3):  # b, c, d
            e = view.c.coords()[pos]
            v = vp_int(e, p, N)
            digits = vp_int(moduli[pos], p, N) - v
            if best is None or digits > best[2]:
                best = (pos, v, digits)
        pos, v, digits = best
        if digits < alpha:
            raise InsufficientPrecision(
                f"the layer formula exposes only {max(digits, 0)} of {alpha} digits"
            )
        mod = p**digits
        e_unit = (view.c.coords()[pos] // p**v) % mod
        E = view.c_last.coords()[pos] % moduli[pos]
        a = (E // p**v) * pow(e_unit, -1, mod) % p**alpha
        key = power(G, view.c_first, a)
        return run.report(key, {n + 1: a})


def cdh_from_eavesdropper(
    G: Group,
    c: Element,
    c_x: Element,
    c_y: Element,
    solver: Optional[Callable[[Group, EavesdropperView], tuple[Element, int]]] = None,
    p: Optional[int] = None,
) -> Element:
    """Answer the CDH instance (c, c^x, c^y) with an eavesdropper.

    The planted exponents a_1 = x, a_2 = ... = a_n = 1, a_{n+1} = y give an
    eavesdropper exactly the view (c, c^x, c^y); whatever key it returns is
    c^{xy}.
    """
    if solver is None:
        solver = solve_view_generic
    p = G.p if p is None else p
    alpha = order_p_power(G, c, p, 256)
    view = EavesdropperView(c, c_x, c_y, p, alpha)
    key, _ = solver(G, view)
    return key


ATTACKS = {
    "generic": eavesdrop_generic,
    "heisenberg-linear": attack_heisenberg_linear,
    "quaternion-linear": attack_quaternion_linear,
}

APPLICABLE = {
    "heisenberg": ("generic", "heisenberg-linear"),
    "cyclic-triple": ("generic",),
    "quaternion": ("generic", "quaternion-linear"),
}


def run_attack(name: str, transcript: Transcript, **options) -> AttackReport:
    """Run one attack; budget refusals and platform errors become failed reports.

    Missing shares are not swallowed: a truncated transcript is a caller error.
    """
    fn = ATTACKS[name]
    if name != "generic":
        options = {}
    try:
        return fn(transcript, **options)
    except NilnikeError as exc:
        if exc.code == "MissingShare":
            raise
        return AttackReport(name, False, error=exc.code)
