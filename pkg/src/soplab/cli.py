"""Command-line batch runner.

    soplab [--seed S] [--out PATH] [--format json-lines|summary-text] [--config FILE]
           verify banach|amalgam|sop-type [options]
    soplab groups enumerate|britton|amalgamate|chain-check [options]

Exit status: 0 when no check failed, 1 on any failure, 3 when only
inconclusive results remain, 2 for usage errors.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, fields
from fractions import Fraction
from typing import Optional

from . import amalgam, banach
from . import groups as grp
from .reports import CheckReport, FalsificationError, emit_report, exit_code

SUITES = ("verify banach", "verify amalgam", "verify sop-type",
          "groups enumerate", "groups britton", "groups amalgamate", "groups chain-check")
ADJACENCY_TYPES = {"sq": grp.sq_pair, "free": grp.free_pair, "central": grp.central_pair}


class UsageError(ValueError):
    pass


@dataclass
class SuiteConfig:
    suite: str = ""
    n: int = 7
    range: int = 11
    chain: int = 16
    m: Optional[int] = None
    trials: int = 1000
    samples: int = 1000
    N: int = 5
    seed: int = 0
    j: int = 3
    jmax: int = 4
    r1: str = ""
    r2: str = ""
    provider: str = "canonical"
    max_cosets: int = 10**6
    preset: str = "triangle"
    file: str = ""
    subgroup: str = ""
    word: str = ""
    type: str = "sq"
    relabel: bool = True
    k: int = 3
    out: str = ""
    format: str = "json-lines"
    timing: bool = False

    def validate(self):
        if self.suite not in SUITES:
            raise UsageError(f"unknown suite {self.suite!r}; expected one of {', '.join(SUITES)}")
        if self.n < 3:
            raise UsageError("n must be at least 3")
        if self.range < 2 or self.chain < 2:
            raise UsageError("range and chain must be at least 2")
        if self.m is not None and not 1 <= self.m <= self.n:
            raise UsageError("m must lie in 1..n")
        if self.j < 2 or self.jmax < 2 or self.N < 1 or self.k < 2:
            raise UsageError("j, jmax and k must be at least 2, N at least 1")
        if self.trials < 0 or self.samples < 0 or self.max_cosets < 1:
            raise UsageError("trials and samples must be non-negative, max-cosets positive")
        if self.format not in ("json-lines", "summary-text"):
            raise UsageError(f"unknown format {self.format!r}")
        if self.type not in ADJACENCY_TYPES:
            raise UsageError(f"unknown adjacency type {self.type!r}")
        return self


_FIELD_TYPES = {f.name: f.type for f in fields(SuiteConfig)}


def _coerce(key: str, value: str):
    kind = _FIELD_TYPES[key]
    if kind in ("int", "Optional[int]"):
        return int(value)
    if kind == "bool":
        if value.lower() in ("1", "true", "yes", "on"):
            return True
        if value.lower() in ("0", "false", "no", "off"):
            return False
        raise UsageError(f"{key}: expected a boolean, got {value!r}")
    return value


def read_config(path: str) -> dict:
    """Flat ``key = value`` lines; ``#`` starts a comment; dashes in keys become underscores."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key = value")
            key, value = (s.strip() for s in line.split("=", 1))
            key = key.replace("-", "_")
            if key not in _FIELD_TYPES:
                raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
            try:
                out[key] = _coerce(key, value)
            except ValueError as exc:
                raise UsageError(f"{path}:{lineno}: {exc}") from None
    return out


def _rationals(text: str, n: int, default: list) -> list:
    if not text:
        return default
    vals = [Fraction(s) for s in text.split(",")]
    if len(vals) != n:
        raise UsageError(f"expected {n} comma-separated rationals, got {text!r}")
    return vals


# ---------------------------------------------------------------------------


def _verify_banach(c: SuiteConfig) -> list[CheckReport]:
    reps = banach.check_eq1_eq2(c.n, c.range)
    reps.append(banach.kernel_witness())
    reps.append(banach.chain_verify(c.n, c.chain))
    reps.append(banach.distinctness_check(c.range))
    return reps


def _verify_sop_type(c: SuiteConfig) -> list[CheckReport]:
    reps = [banach.term_shift_identity(max(c.n, 20))]
    ms = [c.m] if c.m is not None else list(range(min(3, c.n), c.n + 1))
    for m in ms:
        try:
            reps.append(banach.cycle_search_and_certify(c.n, m, c.trials, c.seed))
        except FalsificationError as exc:
            reps.append(exc.report)
    reps.append(banach.entailment_spotcheck(c.n, c.samples, c.seed, strict=False))
    bad = []
    for beta in range(c.chain):
        for alpha in range(beta):
            r = banach.type_p_eval(c.N, banach.chain_pair(alpha), banach.chain_pair(beta))
            if not r.passed:
                bad.append({"alpha": alpha, "beta": beta, "false_at": r.witness["false_at"]})
    reps.append(CheckReport("banach.type_p", "fail" if bad else "pass", {"N": c.N, "length": c.chain},
                            {"pairs": c.chain * (c.chain - 1) // 2}, witness={"violations": bad} if bad else None))
    return reps


def _verify_amalgam(c: SuiteConfig) -> list[CheckReport]:
    try:
        provider = amalgam.get_provider(c.provider)
    except (KeyError, OSError, ValueError) as exc:
        raise UsageError(f"provider {c.provider!r}: {exc}") from None
    n = provider.n
    r1 = _rationals(c.r1, n, [Fraction(int(i == 0)) for i in range(n)])
    r2 = _rationals(c.r2, n, [Fraction(int(i == n - 1)) for i in range(n)])
    reps = amalgam.verify_convergence_claims(provider, r1, r2, c.j, seed=c.seed, strict=False)
    _, sym = amalgam.rho_estimate(provider, r1, r2, c.jmax, strict=False)
    return reps + [sym]


def _presentation(c: SuiteConfig) -> grp.Presentation:
    if c.file:
        try:
            with open(c.file, encoding="utf-8") as fh:
                return grp.Presentation.from_text(fh.read(), name=c.file)
        except OSError as exc:
            raise UsageError(f"cannot read presentation: {exc}") from None
    try:
        return grp.preset(c.preset)
    except grp.PresentationError as exc:
        raise UsageError(str(exc)) from None


def _groups_enumerate(c: SuiteConfig) -> list[CheckReport]:
    pres = _presentation(c)
    sub = [grp.parse_word(w, pres.generators) for w in c.subgroup.split(";") if w.strip()]
    claim = "groups.triangle" if pres.name == "triangle" and not sub else "groups.enumerate"
    return [grp.enumeration_report(pres, c.max_cosets, claim, sub)]


def _groups_britton(c: SuiteConfig) -> list[CheckReport]:
    if not c.word:
        return grp.britton_examples()
    try:
        w = grp.parse_word(c.word, ["a", "b", "c"])
    except grp.PresentationError as exc:
        raise UsageError(str(exc)) from None
    form = grp.britton_reduce(w)
    return [CheckReport("groups.britton", "pass", {"word": c.word},
                        {"form": repr(form), "stable_letters": form.stable_count,
                         "nontrivial": form.certified_nontrivial, "identity": form.is_identity,
                         "normal_word": form.to_word().to_text(),
                         "rewrites_verified": all(s.verified for s in form.steps)})]


def _groups_amalgamate(c: SuiteConfig) -> list[CheckReport]:
    adj = ADJACENCY_TYPES[c.type]()
    fa = grp.build_free_amalgam(adj, relabel=c.relabel)
    higman = grp.preset("higman")
    renamed = fa.flat.relabel(dict(zip(["a0", "a1", "a2", "a3"], higman.generators)))
    values = {"K": fa.flat.to_text(), "pairs": {f"{i},{j}": repr(p) for (i, j), p in fa.pairs.items()},
              "K0": repr(fa.k0.flatten()), "K1": repr(fa.k1.flatten()), "K2": repr(fa.k2.flatten()),
              "notes": fa.notes}
    reps = [CheckReport("groups.amalgamate", "pass", {"type": c.type, "relabel": c.relabel}, values)]
    if c.type == "sq" and c.relabel:
        same = renamed.same_as(higman)
        reps.append(CheckReport("groups.flatten_higman", "pass" if same else "fail", {"type": c.type},
                                {"matches_higman_preset": same},
                                witness=None if same else {"K": fa.flat.to_text()}))
    reps.append(grp.adjacency_type_check(fa, adj))
    return reps


def _groups_chain_check(c: SuiteConfig) -> list[CheckReport]:
    reps = [grp.bs12_chain_check(), grp.triangle_refutation_check(c.max_cosets),
            grp.triangle_refutation_check(c.max_cosets, "two-cycle")]
    reps.append(grp.chain_probe(c.k, min(c.max_cosets, 10**5)))
    return reps


DISPATCH = {
    "verify banach": _verify_banach,
    "verify sop-type": _verify_sop_type,
    "verify amalgam": _verify_amalgam,
    "groups enumerate": _groups_enumerate,
    "groups britton": _groups_britton,
    "groups amalgamate": _groups_amalgamate,
    "groups chain-check": _groups_chain_check,
}


def run_suite(config: SuiteConfig) -> list[CheckReport]:
    config.validate()
    return DISPATCH[config.suite](config)


# ---------------------------------------------------------------------------


def _global_flags(p: argparse.ArgumentParser, suppress: bool):
    d = argparse.SUPPRESS if suppress else None
    p.add_argument("--seed", type=int, default=d, help="seed for randomized suites (default 0)")
    p.add_argument("--out", default=d, help="write the report here instead of stdout")
    p.add_argument("--format", choices=("json-lines", "summary-text"), default=d)
    p.add_argument("--config", default=d, help="flat key=value configuration file")
    p.add_argument("--timing", action="store_true", default=d, help="include runtimes (breaks byte-determinism)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="soplab", description="Exact verification suites.")
    _global_flags(parser, suppress=False)
    top = parser.add_subparsers(dest="group")
    sub = argparse.ArgumentParser(add_help=False)
    _global_flags(sub, suppress=True)
    S = argparse.SUPPRESS

    verify = top.add_parser("verify").add_subparsers(dest="command", required=True)
    p = verify.add_parser("banach", parents=[sub])
    p.add_argument("--n", type=int, default=S)
    p.add_argument("--range", type=int, default=S)
    p.add_argument("--chain", type=int, default=S)
    p = verify.add_parser("sop-type", parents=[sub])
    for flag in ("--n", "--m", "--trials", "--samples", "--N", "--chain"):
        p.add_argument(flag, type=int, default=S)
    p = verify.add_parser("amalgam", parents=[sub])
    p.add_argument("--provider", default=S, help="canonical, simple, or a JSON provider file")
    p.add_argument("--j", type=int, default=S)
    p.add_argument("--jmax", type=int, default=S)
    p.add_argument("--r1", default=S, help="comma-separated rational coefficients")
    p.add_argument("--r2", default=S)

    groups = top.add_parser("groups").add_subparsers(dest="command", required=True)
    p = groups.add_parser("enumerate", parents=[sub])
    p.add_argument("--preset", default=S)
    p.add_argument("--file", default=S, help="presentation text file")
    p.add_argument("--subgroup", default=S, help="subgroup generators separated by ';'")
    p.add_argument("--max-cosets", dest="max_cosets", type=int, default=S)
    p = groups.add_parser("britton", parents=[sub])
    p.add_argument("--word", default=S, help="word over a, b, c such as 'c-1 a c'")
    p = groups.add_parser("amalgamate", parents=[sub])
    p.add_argument("--type", default=S, choices=sorted(ADJACENCY_TYPES))
    p.add_argument("--no-relabel", dest="relabel", action="store_false", default=S)
    p = groups.add_parser("chain-check", parents=[sub])
    p.add_argument("--k", type=int, default=S)
    p.add_argument("--max-cosets", dest="max_cosets", type=int, default=S)
    return parser


def config_from_args(args: argparse.Namespace) -> SuiteConfig:
    values = {}
    if getattr(args, "config", None):
        try:
            values.update(read_config(args.config))
        except OSError as exc:
            raise UsageError(f"cannot read config: {exc}") from None
    ns = vars(args)
    group, command = ns.pop("group", None), ns.pop("command", None)
    ns.pop("config", None)
    if group:
        values["suite"] = f"{group} {command}"
    values.update({k: v for k, v in ns.items() if v is not None})
    return SuiteConfig(**values)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = config_from_args(args)
        if not config.suite:
            parser.error("no suite given (on the command line or as 'suite' in the config)")
        reports = run_suite(config)
    except UsageError as exc:
        parser.error(str(exc))
    text = emit_report(reports, config.format, config.out or None, config.timing)
    if not config.out:
        sys.stdout.write(text)
    return exit_code(reports)


if __name__ == "__main__":
    sys.exit(main())
