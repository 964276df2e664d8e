"""Command-line front end: ``nilnike exchange | attack | bench | verify``.

Flags may also come from a flat ``key=value`` file given with ``--config``;
flags on the command line win.  Errors are printed to stderr as a JSON object
``{"error": <code>, "message": ...}`` and the process exits with status 1.
Usage errors exit with status 2.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

from .attacks import APPLICABLE, ATTACKS, DEFAULT_BUDGET, DEFAULT_TABLE_LIMIT, run_attack
from .bench import grid, run_grid, to_csv
from .errors import ConfigError, NilnikeError
from .platforms import FAMILIES, PlatformDescriptor
from .protocol import keys_agree, run_exchange, setup, transcript_from_dict, transcript_to_dict
from .rng import PRNG_NAME, check_seed, default_seed, make_rng
from .verify import SUITES, VerifyConfig, run_suites

EXIT_OK = 0
EXIT_FAIL = 1


class CommandFailed(Exception):
    """A command ran but its success condition does not hold."""

    def __init__(self, code: str, message: str, **extra):
        super().__init__(message)
        self.code = code
        self.extra = extra


# --- configuration ----------------------------------------------------------


def read_config_file(path: str) -> dict[str, str]:
    """Parse ``key=value`` lines; blank lines and ``#`` comments are skipped."""
    out: dict[str, str] = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc.strerror}") from exc
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"{path}:{lineno}: expected key=value")
        out[key.strip().replace("-", "_")] = value.strip()
    return out


def _int(name: str, value) -> int:
    try:
        return int(value, 0) if isinstance(value, str) else int(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{name} must be an integer, got {value!r}") from None


def _int_list(name: str, value) -> list[int]:
    if isinstance(value, list):
        return [_int(name, v) for v in value]
    return [_int(name, v) for v in str(value).split(",") if v.strip()]


def _str_list(value) -> list[str]:
    if isinstance(value, list):
        return value
    return [v.strip() for v in str(value).split(",") if v.strip()]


def _flag(value) -> bool:
    if isinstance(value, bool):
        return value
    return str(value).lower() in ("1", "true", "yes", "on")


@dataclass
class RunConfig:
    platform: str = "heisenberg"
    p: int = 5
    m: int = 1
    alpha: int = 1
    n: int = 2
    t: Optional[int] = None
    N: Optional[int] = None
    seed: int = 0
    test_mode: bool = False
    attacks: list[str] = field(default_factory=list)
    budget: int = DEFAULT_BUDGET
    table_limit: int = DEFAULT_TABLE_LIMIT
    out: Optional[str] = None
    transcript: Optional[str] = None
    timing: bool = True

    def descriptor(self) -> PlatformDescriptor:
        if self.platform not in FAMILIES:
            raise ConfigError(f"unknown platform {self.platform!r}; choose from {', '.join(FAMILIES)}")
        if self.platform == "heisenberg":
            return PlatformDescriptor.heisenberg(self.p, self.m)
        if self.platform == "cyclic-triple":
            return PlatformDescriptor.cyclic_triple(self.p, self.alpha)
        return PlatformDescriptor.quaternion(self.p, self.alpha, self.n, self.t, self.N)


def _merged(args: argparse.Namespace, keys: Sequence[str]) -> dict:
    """Command-line values over config-file values; absent keys are left out."""
    cfg = read_config_file(args.config) if getattr(args, "config", None) else {}
    out = {}
    for key in keys:
        value = getattr(args, key, None)
        if value is None or value is False or value == []:
            value = cfg.get(key, value)
        if value is not None and value != []:
            out[key] = value
    return out


def _seed(values: dict) -> int:
    if "seed" in values:
        try:
            return check_seed(_int("seed", values["seed"]))
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
    try:
        return default_seed()
    except ValueError as exc:
        raise ConfigError(f"NILNIKE_SEED: {exc}") from None


def run_config(args: argparse.Namespace) -> RunConfig:
    keys = (
        "platform", "p", "m", "alpha", "n", "t", "N", "seed", "test_mode",
        "attack", "budget", "table_limit", "out", "transcript", "no_timing",
    )
    v = _merged(args, keys)
    cfg = RunConfig(seed=_seed(v))
    if "platform" in v:
        cfg.platform = v["platform"]
    for name in ("p", "m", "alpha", "n", "budget", "table_limit"):
        if name in v:
            setattr(cfg, name, _int(name, v[name]))
    for name in ("t", "N"):
        if name in v:
            setattr(cfg, name, _int(name, v[name]))
    cfg.test_mode = _flag(v.get("test_mode", False))
    cfg.timing = not _flag(v.get("no_timing", False))
    cfg.attacks = _str_list(v.get("attack", []))
    cfg.out = v.get("out")
    cfg.transcript = v.get("transcript")
    return cfg


# --- output helpers ---------------------------------------------------------


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _error(code: str, message: str, **extra) -> int:
    sys.stderr.write(json.dumps({"error": code, "message": message, **extra}) + "\n")
    return EXIT_FAIL


# --- commands ---------------------------------------------------------------


def cmd_exchange(args: argparse.Namespace) -> int:
    cfg = run_config(args)
    descriptor = cfg.descriptor()
    rng = make_rng(cfg.seed, "exchange")
    params = setup(descriptor, cfg.n, rng)
    tr = run_exchange(params, rng)
    agree = keys_agree(tr)
    doc = transcript_to_dict(tr, test_mode=cfg.test_mode)
    if cfg.out:
        Path(cfg.out).write_text(_dump(doc))
        summary = {"consistent": agree, "users": params.n + 1, "prng": PRNG_NAME, "seed": cfg.seed}
        if cfg.test_mode:
            summary["key_hex"] = params.group.key(tr.derived_keys[1]).hex()
        sys.stdout.write(_dump(summary))
    else:
        sys.stdout.write(_dump(doc))
    if not agree:
        raise CommandFailed("KeyMismatch", "users derived different keys")
    return EXIT_OK


def _honest_key(tr) -> Optional[str]:
    if not tr.derived_keys:
        return None
    G = tr.params.group
    keys = {G.key(k).hex() for k in tr.derived_keys.values()}
    if len(keys) != 1:
        raise CommandFailed("KeyMismatch", "the transcript records disagreeing honest keys")
    return keys.pop()


def cmd_attack(args: argparse.Namespace) -> int:
    cfg = run_config(args)
    if not cfg.transcript:
        raise ConfigError("attack needs --transcript")
    try:
        data = json.loads(Path(cfg.transcript).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read transcript {cfg.transcript}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"transcript is not JSON: {exc}") from exc
    tr = transcript_from_dict(data)
    tr.require_complete()
    family = tr.params.descriptor.family
    names = cfg.attacks or list(APPLICABLE[family])
    for name in names:
        if name not in ATTACKS:
            raise ConfigError(f"unknown attack {name!r}; choose from {', '.join(ATTACKS)}")
        if name not in APPLICABLE[family]:
            raise ConfigError(f"attack {name!r} does not apply to {family}")
    honest = _honest_key(tr)
    reports, failed = [], []
    for name in names:
        report = run_attack(name, tr, budget=cfg.budget, table_limit=cfg.table_limit)
        entry = report.to_dict(timing=cfg.timing)
        entry["matches_honest"] = None if honest is None or not report.success else report.key_hex == honest
        if not report.success or entry["matches_honest"] is False:
            failed.append(name)
        reports.append(entry)
    doc = {"platform": family, "n": tr.params.n, "honest_key_hex": honest, "reports": reports}
    _emit(_dump(doc), cfg.out)
    if failed:
        raise CommandFailed("AttackFailed", f"attacks failed or mismatched: {', '.join(failed)}", attacks=failed)
    return EXIT_OK


def cmd_bench(args: argparse.Namespace) -> int:
    v = _merged(args, ("platform", "p", "alpha", "n", "attack", "trials", "budget", "m",
                       "workers", "seed", "out", "no_timing"))
    platforms = _str_list(v.get("platform", []))
    for fam in platforms:
        if fam not in FAMILIES:
            raise ConfigError(f"unknown platform {fam!r}")
    attacks = _str_list(v.get("attack", [])) or None
    for name in attacks or ():
        if name not in ATTACKS:
            raise ConfigError(f"unknown attack {name!r}")
    points = grid(
        platforms,
        _int_list("p", v.get("p", [])),
        _int_list("alpha", v.get("alpha", [1])),
        _int_list("n", v.get("n", [2])),
    )
    rows = run_grid(
        points,
        seed=_seed(v),
        trials=_int("trials", v.get("trials", 10)),
        algorithms=attacks,
        budget=_int("budget", v.get("budget", DEFAULT_BUDGET)),
        m=_int("m", v.get("m", 1)),
        workers=_int("workers", v.get("workers", 1)),
    )
    _emit(to_csv(rows, timing=not _flag(v.get("no_timing", False))), v.get("out"))
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    v = _merged(args, ("p", "m", "alpha", "n", "seed", "trials", "suite"))
    defaults = VerifyConfig()
    cfg = VerifyConfig(
        p=_int("p", v.get("p", defaults.p)),
        m=_int("m", v.get("m", defaults.m)),
        alpha=_int("alpha", v.get("alpha", defaults.alpha)),
        n=_int("n", v.get("n", defaults.n)),
        seed=_seed(v),
        trials=_int("trials", v.get("trials", defaults.trials)),
    )
    only = _str_list(v.get("suite", [])) or None
    known = {name for name, _ in SUITES}
    for name in only or ():
        if name not in known:
            raise ConfigError(f"unknown suite {name!r}; choose from {', '.join(sorted(known))}")
    results = run_suites(cfg, only)
    for name, ok, detail in results:
        sys.stdout.write(f"{'PASS' if ok else 'FAIL'} {name}" + (f": {detail}" if detail else "") + "\n")
    failures = [(name, detail) for name, ok, detail in results if not ok]
    if failures:
        name, detail = failures[0]
        raise CommandFailed("InvariantFailed", detail, invariant=name)
    return EXIT_OK


# --- parser -----------------------------------------------------------------


def _platform_flags(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--platform", help="heisenberg, cyclic-triple or quaternion")
    sp.add_argument("--p", type=int, help="odd prime")
    sp.add_argument("--m", type=int, help="Heisenberg dimension parameter")
    sp.add_argument("--alpha", type=int, help="key order exponent")
    sp.add_argument("--n", type=int, help="class; n + 1 users take part")
    sp.add_argument("--t", type=int, help="quaternion nonresidue (default: smallest)")
    sp.add_argument("--N", type=int, help="quaternion working precision")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nilnike", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("exchange", help="run one key exchange")
    _platform_flags(sp)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--test-mode", action="store_true", help="record private and derived keys")
    sp.add_argument("--out", help="transcript path (default: stdout)")
    sp.add_argument("--config")
    sp.set_defaults(func=cmd_exchange)

    sp = sub.add_parser("attack", help="attack a recorded transcript")
    sp.add_argument("--transcript")
    sp.add_argument("--attack", action="append", default=[], choices=sorted(ATTACKS))
    sp.add_argument("--budget", type=int, help="operation budget for the generic attack")
    sp.add_argument("--table-limit", type=int)
    sp.add_argument("--out", help="report path (default: stdout)")
    sp.add_argument("--no-timing", action="store_true", help="write millis as 0 for byte-stable reports")
    sp.add_argument("--config")
    sp.set_defaults(func=cmd_attack)

    sp = sub.add_parser("bench", help="attack costs over a parameter grid, as CSV")
    sp.add_argument("--platform", action="append", default=[])
    sp.add_argument("--p", action="append", default=[], help="prime(s); repeat or comma-separate")
    sp.add_argument("--alpha", action="append", default=[])
    sp.add_argument("--n", action="append", default=[])
    sp.add_argument("--m", type=int)
    sp.add_argument("--attack", action="append", default=[])
    sp.add_argument("--trials", type=int)
    sp.add_argument("--budget", type=int)
    sp.add_argument("--workers", type=int)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--out")
    sp.add_argument("--no-timing", action="store_true")
    sp.add_argument("--config")
    sp.set_defaults(func=cmd_bench)

    sp = sub.add_parser("verify", help="run the invariant suites")
    sp.add_argument("--p", type=int)
    sp.add_argument("--m", type=int)
    sp.add_argument("--alpha", type=int)
    sp.add_argument("--n", type=int)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--trials", type=int)
    sp.add_argument("--suite", action="append", default=[], help="run only these suites")
    sp.add_argument("--config")
    sp.set_defaults(func=cmd_verify)
    return parser


def _flatten(args: argparse.Namespace) -> None:
    # repeated list flags may also hold comma-separated values
    for key in ("platform", "p", "alpha", "n", "attack", "suite"):
        value = getattr(args, key, None)
        if isinstance(value, list):
            setattr(args, key, [x.strip() for item in value for x in str(item).split(",") if x.strip()])


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    _flatten(args)
    try:
        return args.func(args)
    except CommandFailed as exc:
        return _error(exc.code, str(exc), **exc.extra)
    except NilnikeError as exc:
        return _error(exc.code, str(exc))
    except (ValueError, OSError) as exc:
        return _error(type(exc).__name__, str(exc))


if __name__ == "__main__":
    sys.exit(main())
