"""Command-line front end: protocol runs, code-family audits, inequality
verification, and the outcome-correlation table replays.

Exit codes: 0 success/pass, 1 usage or internal error, 2 protocol-level
Fail.  All commands require an explicit seed (directly or by default value)
and produce byte-identical output for identical arguments.

Adversary mini-grammar (comma-separated attacks)::

    attack   := kind [":" params] "@" member
    params   := key "=" value (";" key "=" value)*
    kind     := identity | depolarize | pauli | intercept | fixed-pauli
              | lie-basis | lie-outcome | silent-drop
    member   := "m1" .. "mN" | "member1" .. "memberN" | "C"

Examples: ``depolarize:p=0.1@m2``, ``intercept@member1``,
``lie-outcome:p=1.0@m3``, ``fixed-pauli:op=XZ@m1``.
"""
from __future__ import annotations

import argparse
import configparser
import json
import sys

import numpy as np

from . import analysis
from .adversary import parse_adversary
from .errors import CapacityError, InvalidArgumentError
from .protocol import NetworkConfig, run_protocol1, run_protocol2, \
    transcript_to_jsonl
from .stabilizer import PurityFamily, audit_family, family_to_json, \
    gen_purity_family

EXIT_OK, EXIT_ERROR, EXIT_FAIL = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse with usage failures mapped to exit code 1, not 2."""

    def error(self, message):
        raise UsageError(message)


# --------------------------------------------------------------------------
# run
# --------------------------------------------------------------------------

_CONFIG_BOOL = {"true": True, "1": True, "yes": True,
                "false": False, "0": False, "no": False}


def _apply_config_file(args, path: str) -> None:
    """Flat key=value sections overriding command-line flags."""
    cp = configparser.ConfigParser()
    read = cp.read(path)
    if not read:
        raise UsageError(f"cannot read config file {path!r}")
    net = cp["network"] if cp.has_section("network") else {}
    for key in ("protocol", "n", "m", "t", "rounds"):
        if key in net:
            setattr(args, key, int(net[key]))
    if "test_fraction" in net:
        args.test_fraction = float(net["test_fraction"])
    if "auth" in net:
        args.no_auth = not _CONFIG_BOOL[net["auth"].strip().lower()]
    if "family_r" in net:
        args.family_r = int(net["family_r"])
    if "family_s" in net:
        args.family_s = int(net["family_s"])
    if cp.has_section("adversary") and "spec" in cp["adversary"]:
        args.adversary = cp["adversary"]["spec"]
    out = cp["output"] if cp.has_section("output") else {}
    if "path" in out:
        args.out = out["path"]
    if "reveal_secrets" in out:
        args.reveal_secrets = _CONFIG_BOOL[out["reveal_secrets"].strip().lower()]


def cmd_run(args) -> int:
    if args.config:
        _apply_config_file(args, args.config)
    adversary = parse_adversary(args.adversary)  # fail before any simulation
    config = NetworkConfig(
        n=args.n, m=args.m, t=args.t, rounds=args.rounds,
        test_fraction=args.test_fraction, protocol=args.protocol,
        auth_enabled=not args.no_auth,
        family_params=(args.family_r, args.family_s))
    runner = run_protocol2 if args.protocol == 2 else run_protocol1
    transcript = runner(config, adversary, args.seed)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(transcript_to_jsonl(
                transcript, reveal_secrets=args.reveal_secrets))
    stats = analysis.protocol_statistics(transcript)
    print(json.dumps(stats, sort_keys=True))
    return EXIT_OK if transcript.verdict == "Pass" else EXIT_FAIL


# --------------------------------------------------------------------------
# audit-code
# --------------------------------------------------------------------------

def cmd_audit_code(args) -> int:
    fam = gen_purity_family(args.r, args.s, args.seed, audit="skip")
    if args.degenerate_single_code:
        first = fam.keys[0]
        fam = PurityFamily(r=fam.r, s=fam.s, codes={first: fam.codes[first]})
    audit_family(fam)
    print(f"epsilon_formula {fam.epsilon_formula!r}")
    print(f"epsilon_audited {fam.epsilon_audited!r}")
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(family_to_json(fam))
    ok = fam.epsilon_audited <= fam.epsilon_formula + 1e-12
    print(f"verdict {'Pass' if ok else 'Fail'}")
    return EXIT_OK if ok else EXIT_FAIL


# --------------------------------------------------------------------------
# verify-inequalities
# --------------------------------------------------------------------------

def cmd_verify_inequalities(args) -> int:
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    dims = [int(d) for d in args.dims.split(",") if d.strip()]
    if not dims or any(d < 2 for d in dims):
        raise UsageError("--dims needs integers >= 2")
    rng = np.random.default_rng(args.seed)
    channel_draws = max(1, args.trials // 50)
    reports = [
        analysis.fuchs_van_de_graaf_suite(args.trials, dims, rng, args.tol),
        analysis.pure_saturation_suite(args.trials, dims, rng, args.tol),
        analysis.double_concavity_suite(args.trials, dims, rng, args.tol),
        analysis.bures_triangle_suite(args.trials, dims, rng, args.tol),
        analysis.entanglement_fidelity_suite(channel_draws, rng,
                                             tol=args.tol),
        analysis.composed_bound_suite(channel_draws, rng, tol=args.tol),
    ]
    for rep in reports:
        status = "PASS" if rep.passed else "FAIL"
        print(f"{status} {rep.inequality_id} trials={rep.trials} "
              f"max_violation={rep.max_violation!r}")
    if args.out:
        text = (analysis.reports_to_csv(reports) if args.out.endswith(".csv")
                else analysis.reports_to_json(reports))
        with open(args.out, "w") as fh:
            fh.write(text)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


# --------------------------------------------------------------------------
# tables
# --------------------------------------------------------------------------

def cmd_tables(args) -> int:
    rng = np.random.default_rng(args.seed)
    bad = 0
    for n in range(2, 7):
        res = analysis.table_correlation_check((1, n - 1), args.shots, rng)
        bad += res["violations"]
        print(f"table-I n={n} assignments={res['assignments']} "
              f"violations={res['violations']}")
    for n in range(2, 6):
        res = analysis.table_correlation_check((1, n - 1, 1), args.shots, rng)
        bad += res["violations"]
        print(f"table-II n={n} assignments={res['assignments']} "
              f"violations={res['violations']}")
    print(f"total_violations {bad}")
    return EXIT_OK if bad == 0 else EXIT_FAIL


# --------------------------------------------------------------------------
# parser plumbing
# --------------------------------------------------------------------------

def build_parser() -> _Parser:
    parser = _Parser(prog="qkdnet")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="simulate a key-distribution run")
    p_run.add_argument("--protocol", type=int, choices=(1, 2), default=1)
    p_run.add_argument("--n", type=int, default=2)
    p_run.add_argument("--m", type=int, default=1)
    p_run.add_argument("--t", type=int, default=2)
    p_run.add_argument("--rounds", type=int, default=100)
    p_run.add_argument("--test-fraction", type=float, default=0.2,
                       dest="test_fraction")
    p_run.add_argument("--seed", type=int, required=True)
    p_run.add_argument("--adversary", default="")
    p_run.add_argument("--no-auth", action="store_true", dest="no_auth")
    p_run.add_argument("--family-r", type=int, default=2, dest="family_r")
    p_run.add_argument("--family-s", type=int, default=2, dest="family_s")
    p_run.add_argument("--config", default="")
    p_run.add_argument("--out", default="")
    p_run.add_argument("--reveal-secrets", action="store_true",
                       dest="reveal_secrets")
    p_run.set_defaults(func=cmd_run)

    p_audit = sub.add_parser("audit-code",
                             help="generate and audit a purity-testing family")
    p_audit.add_argument("--r", type=int, required=True)
    p_audit.add_argument("--s", type=int, required=True)
    p_audit.add_argument("--seed", type=int, required=True)
    p_audit.add_argument("--out", default="")
    p_audit.add_argument("--degenerate-single-code", action="store_true",
                         help="debug: audit a one-key family (must fail)")
    p_audit.set_defaults(func=cmd_audit_code)

    p_ver = sub.add_parser("verify-inequalities",
                           help="run the fidelity/distance inequality suite")
    p_ver.add_argument("--trials", type=int, default=1000)
    p_ver.add_argument("--dims", default="2,3,4,5,6,7,8")
    p_ver.add_argument("--tol", type=float, default=1e-9)
    p_ver.add_argument("--seed", type=int, default=0)
    p_ver.add_argument("--out", default="")
    p_ver.set_defaults(func=cmd_verify_inequalities)

    p_tab = sub.add_parser("tables",
                           help="replay the outcome-correlation table checks")
    p_tab.add_argument("--shots", type=int, default=10000)
    p_tab.add_argument("--seed", type=int, default=0)
    p_tab.set_defaults(func=cmd_tables)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (InvalidArgumentError, CapacityError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
