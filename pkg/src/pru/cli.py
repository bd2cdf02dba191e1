"""Command-line front end.

Exit codes: 0 equal/ok, 1 notequal or failed check, 2 usage, 3 evaluation
budget exhausted, 4 unknown, 5 capacity exceeded.

Settings come from built-in defaults, then the JSON file named by
``PRU_CONFIG``, then command-line flags.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, fields

from pru import galois as G
from pru.gen import default_pool, random_terms
from pru.rules import ALL_RULES
from pru.semantics import Budget, BudgetExceeded, evaluate, fingerprint
from pru.syntax import ParseError, parse
from pru.terms import ArityError
from pru.universes import (
    UNIVERSES,
    Caps,
    NormalizationLimit,
    equiv,
    normalize,
    normalize_best_effort,
    replay,
)

EXIT_OK, EXIT_NOTEQUAL, EXIT_USAGE, EXIT_BUDGET, EXIT_UNKNOWN, EXIT_CAPACITY = range(6)


class UsageError(Exception):
    pass


@dataclass
class Config:
    grid: int = 4
    steps: int = 10**6
    bits: int = 4096
    caps_size: int = 12
    caps_count: int = 5000
    format: str = "text"
    seed: int = 0
    universe: str = "Cat"
    max_size: int = 5
    max_width: int = 2
    rec: bool = True

    def validate(self):
        for name in ("grid", "steps", "bits", "caps_size", "caps_count", "max_size", "max_width"):
            if getattr(self, name) < 1:
                raise UsageError(f"{name} must be positive")
        if self.format not in ("text", "json"):
            raise UsageError("format must be text or json")
        if self.universe not in UNIVERSES:
            raise UsageError(f"unknown universe {self.universe!r}; choose from {', '.join(UNIVERSES)}")

    @property
    def budget(self):
        return Budget(self.steps, self.bits)

    @property
    def caps(self):
        return Caps(self.caps_size, self.caps_count)

    @property
    def fragment_params(self):
        return G.FragmentParams(self.max_size, self.max_width, self.rec, self.grid)


def load_config(args: argparse.Namespace) -> Config:
    cfg = Config()
    known = {f.name for f in fields(Config)}
    path = os.environ.get("PRU_CONFIG")
    if path:
        try:
            with open(path) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as e:
            raise UsageError(f"cannot read PRU_CONFIG {path}: {e}") from e
        unknown = set(data) - known
        if unknown:
            raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
        for k, v in data.items():
            setattr(cfg, k, v)
    for k in known:
        v = getattr(args, k, None)
        if v is not None:
            setattr(cfg, k, v)
    cfg.validate()
    return cfg


def read_term(arg: str):
    """Inline DSL text, or ``@path`` for a file holding it."""
    text = arg
    if arg.startswith("@"):
        try:
            with open(arg[1:]) as fh:
                text = fh.read()
        except OSError as e:
            raise UsageError(str(e)) from e
    return parse(text)


def _emit(cfg: Config, data, text: str):
    if cfg.format == "json":
        print(json.dumps(data, indent=2, default=str))
    else:
        print(text)


# -- subcommands ----------------------------------------------------------------------


def cmd_eval(args, cfg):
    t = read_term(args.term)
    try:
        x = tuple(int(v) for v in args.inputs.split(",")) if args.inputs else ()
    except ValueError as e:
        raise UsageError(f"bad input tuple {args.inputs!r}") from e
    out = evaluate(t, x, cfg.budget)
    _emit(cfg, {"term": t.text, "input": list(x), "output": list(out)}, ",".join(map(str, out)))
    return EXIT_OK


def cmd_check(args, cfg):
    t1, t2 = read_term(args.t1), read_term(args.t2)
    v = equiv(t1, t2, cfg.universe, cfg.caps, cfg.grid, cfg.budget)
    data = v.to_json()
    lines = [v.verdict]
    if v.reason:
        lines[0] += f" ({v.reason})"
    if args.witness and v.verdict == "equal":
        end = replay(t1, v.witness)
        data["replayed"] = end == t2
        lines.append(f"  start {t1.text}")
        for s in v.witness:
            lines.append(f"  {s.rule} {s.direction} at {list(s.path)} -> {s.result.text}")
        lines.append(f"  replay {'ok' if end == t2 else 'FAILED'}")
    _emit(cfg, data, "\n".join(lines))
    return {"equal": EXIT_OK, "notequal": EXIT_NOTEQUAL}.get(v.verdict, EXIT_UNKNOWN)


def cmd_normalize(args, cfg):
    t = read_term(args.term)
    if cfg.universe in ("C", "I", "Cat"):
        n = normalize(t, cfg.universe)
    elif cfg.universe == "CatX":
        n = normalize_best_effort(t)
    else:
        raise UsageError(f"no canonical form for {cfg.universe}; "
                         "normalize supports C, I, Cat and CatX (best effort)")
    _emit(cfg, {"term": t.text, "universe": cfg.universe, "normal_form": n.text}, n.text)
    return EXIT_OK


def cmd_enum(args, cfg):
    F = G.enumerate_fragment(cfg.fragment_params)
    if cfg.format == "json":
        data = F.summary()
        data["terms"] = {str(a): [t.text for t in ts] for a, ts in F.homsets.items()}
        _emit(cfg, data, "")
        return EXIT_OK
    for a, ts in F.homsets.items():
        print(f"# {a}: {len(ts)} terms")
        for t in ts:
            print(t.text)
    return EXIT_OK


def _universes(arg):
    names = [u.strip() for u in arg.split(",") if u.strip()]
    for u in names:
        if u not in UNIVERSES:
            raise UsageError(f"unknown universe {u!r}")
    return names


def _checks_text(report):
    lines = []
    for c in report["checks"]:
        lines.append(f"{'pass' if c['pass'] else 'FAIL'}  {c['name']}")
    return lines


def cmd_galois(args, cfg):
    F = G.enumerate_fragment(cfg.fragment_params)
    names = _universes(args.universes)
    report = G.galois_check(F, names, cfg.caps, args.samples, cfg.seed, cfg.budget)
    if args.ops is not None or args.fix_initials:
        ops = [o.strip() for o in (args.ops or "").split(",") if o.strip()]
        base = G.full_stabilizer(G.semantic_partition(F, cfg.budget))
        try:
            H = G.op_preserving_subgroup(base, ops, args.fix_initials)
        except ValueError as e:
            raise UsageError(str(e)) from e
        report["preserved"] = {"ops": ops, "fix_initials": args.fix_initials,
                               "order": str(H.order()), "trivial": H.order() == 1}
    lines = [f"fragment: {F.summary()['terms']} terms, hom-sets {F.summary()['homsets']}"]
    for u in names:
        lines.append(f"{u}: {len(report['partitions'][u])} blocks, "
                     f"stabilizer order {report['groups'][u]['order']}")
    lines += _checks_text(report)
    for d in report["closure_defects"]:
        lines.append(f"closure defect: {d['group']} order {d['order']} inside "
                     f"{d['closure_order']} (index {d['index']})")
    for w in report["warnings"]:
        lines.append(f"warning: {w}")
    if "preserved" in report:
        p = report["preserved"]
        lines.append(f"preserving {','.join(p['ops']) or 'nothing'}"
                     f"{' with initials fixed' if p['fix_initials'] else ''}: order {p['order']}")
    lines.append("semantic partition: fingerprint-based")
    _emit(cfg, report, "\n".join(lines))
    return EXIT_OK if report["ok"] else EXIT_NOTEQUAL


def cmd_lattice(args, cfg):
    F = G.enumerate_fragment(cfg.fragment_params)
    names = _universes(args.universes)
    report = G.lattice_report(F, names, cfg.caps, cfg.budget)
    lines = [f"{u}: {report['blocks'][u]} blocks, stabilizer order {report['groups'][u]['order']}"
             for u in names]
    for e in report["edges"]:
        tag = "strict" if e["strict"] else "not strict on this fragment"
        w = f"  e.g. {e['witness'][0]} ~ {e['witness'][1]}" if e["witness"] else ""
        lines.append(f"{e['fine']} -> {e['coarse']}: "
                     f"{'refines' if e['refines'] else 'DOES NOT REFINE'}, {tag}{w}")
    for inc in report["incomparable"]:
        lines.append(f"incomparable: {inc['pair'][0]} and {inc['pair'][1]}")
    lines += _checks_text(report)
    _emit(cfg, report, "\n".join(lines))
    return EXIT_OK if all(c["pass"] for c in report["checks"]) else EXIT_NOTEQUAL


def cmd_fuzz(args, cfg):
    """Random-term self checks: round trip, normal forms, rule soundness."""
    print(f"seed {cfg.seed}", file=sys.stderr)
    failures = []
    partial = 0
    for k, t in enumerate(random_terms(args.count, cfg.seed, args.depth, 3)):
        if parse(t.text) != t:
            failures.append({"check": "roundtrip", "term": t.text})
        fp = fingerprint(t, cfg.grid, cfg.budget)
        partial += fp.partial
        for u in ("C", "I", "Cat", "CatX"):
            try:
                n = normalize_best_effort(t) if u == "CatX" else normalize(t, u)
            except NormalizationLimit:
                failures.append({"check": f"terminates:{u}", "term": t.text})
                continue
            again = normalize_best_effort(n) if u == "CatX" else normalize(n, u)
            if again != n:
                failures.append({"check": f"idempotent:{u}", "term": t.text})
            if not fp.partial:
                nf = fingerprint(n, cfg.grid, cfg.budget)
                if not nf.partial and nf != fp:
                    failures.append({"check": f"sound:{u}", "term": t.text})
    pool = default_pool(seed=cfg.seed)
    for rule in ALL_RULES:
        for lhs, rhs in rule.instances(pool, args.rule_instances, cfg.seed):
            f1 = fingerprint(lhs, cfg.grid, cfg.budget)
            f2 = fingerprint(rhs, cfg.grid, cfg.budget)
            if not (f1.partial or f2.partial) and f1 != f2:
                failures.append({"check": f"rule:{rule.id}", "term": lhs.text})
    data = {"seed": cfg.seed, "count": args.count, "partial": partial, "failures": failures}
    text = (f"{args.count} terms, {partial} with partial fingerprints, "
            f"{len(failures)} failures")
    for f in failures[:20]:
        text += f"\n  {f['check']}: {f['term']}"
    _emit(cfg, data, text)
    return EXIT_OK if not failures else EXIT_NOTEQUAL


# -- parser ----------------------------------------------------------------------------


def _global_flags(p, suppress):
    d = argparse.SUPPRESS if suppress else None
    p.add_argument("--grid", type=int, default=d, help="grid bound for value tables (4)")
    p.add_argument("--steps", type=int, default=d, help="evaluation step budget (10^6)")
    p.add_argument("--bits", type=int, default=d, help="largest value size in bits (4096)")
    p.add_argument("--caps-size", dest="caps_size", type=int, default=d,
                   help="largest intermediate term in closures (12)")
    p.add_argument("--caps-count", dest="caps_count", type=int, default=d,
                   help="most terms visited per closure (5000)")
    p.add_argument("--format", choices=("text", "json"), default=d)
    p.add_argument("--seed", type=int, default=d, help="random seed (0)")


def _fragment_flags(p):
    p.add_argument("--max-size", dest="max_size", type=int, help="largest term size (5)")
    p.add_argument("--max-width", dest="max_width", type=int, help="largest arity width (2)")
    p.add_argument("--no-rec", dest="rec", action="store_false", default=None,
                   help="leave recursion out of the fragment")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pru", description=__doc__.split("\n")[0])
    _global_flags(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[common], help="evaluate a term on a tuple")
    p.add_argument("term", help="DSL text or @file")
    p.add_argument("--in", dest="inputs", default="", help="comma-separated naturals")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("check", parents=[common], help="equivalence in a universe")
    p.add_argument("t1")
    p.add_argument("t2")
    p.add_argument("-u", "--universe")
    p.add_argument("--witness", action="store_true", help="print and replay the rewrite path")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("normalize", parents=[common], help="canonical form in C, I, Cat or CatX")
    p.add_argument("term")
    p.add_argument("-u", "--universe")
    p.set_defaults(func=cmd_normalize)

    p = sub.add_parser("enum", parents=[common], help="list a finite fragment")
    _fragment_flags(p)
    p.set_defaults(func=cmd_enum)

    p = sub.add_parser("galois", parents=[common], help="correspondence checks on a fragment")
    _fragment_flags(p)
    p.add_argument("--universes", default=",".join(G.LATTICE_ORDER))
    p.add_argument("--samples", type=int, default=20, help="sampled subgroups (20)")
    p.add_argument("--ops", help="operations to preserve, e.g. comp,rec,pair")
    p.add_argument("--fix-initials", dest="fix_initials", action="store_true")
    p.set_defaults(func=cmd_galois)

    p = sub.add_parser("lattice", parents=[common], help="refinement diagram of universes")
    _fragment_flags(p)
    p.add_argument("--universes", default=",".join(G.LATTICE_ORDER))
    p.set_defaults(func=cmd_lattice)

    p = sub.add_parser("fuzz", parents=[common], help="random self checks")
    p.add_argument("--count", type=int, default=1000)
    p.add_argument("--depth", type=int, default=4)
    p.add_argument("--rule-instances", dest="rule_instances", type=int, default=100)
    p.set_defaults(func=cmd_fuzz)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args)
        return args.func(args, cfg)
    except (UsageError, ParseError, ArityError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as e:
        print(f"budget exhausted: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except G.CapacityError as e:
        print(f"capacity exceeded: {e}", file=sys.stderr)
        return EXIT_CAPACITY


if __name__ == "__main__":
    sys.exit(main())
