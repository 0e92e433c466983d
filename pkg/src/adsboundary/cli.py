"""Command-line front end: ``adsboundary --config FILE <command> [args]``.

Config files are line oriented::

    # Z ⋊ ⟨2, 3⟩
    [group]
    rank = 1
    [monoid]
    kind = free-abelian
    generators = 2
    names = 2,3
    [action]
    theta.2 = [[2]]
    theta.3 = [[3]]
    [options]
    amenable = assumed
    depth = 4
    window = 3

Exit codes: 0 answered, 1 answered negatively (predicates), 2 error.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass, field
from typing import Dict, List, Optional

from . import __version__
from .ads import (
    AdsSpec,
    InvalidSystemError,
    Classification,
    SemidirectElement,
    elementary_refinement,
    format_element,
    intersect_principal_ideals,
    is_foundation_set_s,
    parse_element,
    parse_elements,
    partition_by_index,
    u_semigroup_refine,
    validate_ads,
)
from .certify import Amenability, kirchberg_report, report_to_dict
from .invsgp import IdealProjection, WeakFix, core_units, is_weakly_fixed, normalize
from .lattice import INFINITE, index, transversal
from .monoid import MonoidKind, MonoidSpec, NotFoundationSetError, construct_pf, is_p_foundation_set
from .oracle import compare_intersections, enumerate_ball, oracle_foundation_check

EXIT_OK, EXIT_NEGATIVE, EXIT_ERROR = 0, 1, 2


class ConfigError(ValueError):
    def __init__(self, message: str, line: int = 0, column: int = 0, expected: Optional[str] = None):
        self.line, self.column, self.expected = line, column, expected
        loc = f"line {line}, column {column}: " if line else ""
        tail = f" (expected {expected})" if expected else ""
        super().__init__(f"{loc}{message}{tail}")


@dataclass
class SystemConfig:
    spec: AdsSpec
    options: Dict[str, object] = field(default_factory=dict)


_SECTIONS = {
    "group": {"rank"},
    "monoid": {"kind", "generators", "names"},
    "action": None,  # theta.<name>
    "options": {"amenable", "depth", "window", "cap"},
}
_AMENABLE = {"assumed": Amenability.ASSUMED, "asserted": Amenability.ASSERTED_BY_USER, "unknown": Amenability.UNKNOWN}


def _int_value(text, lineno, col, key):
    try:
        return int(text)
    except ValueError:
        raise ConfigError(f"bad value {text!r} for {key}", lineno, col, "an integer") from None


def parse_config(text: str) -> SystemConfig:
    section = None
    values: Dict[str, tuple] = {}
    theta: Dict[str, tuple] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        stripped = line.strip()
        if not stripped:
            continue
        col = len(line) - len(line.lstrip()) + 1
        if stripped.startswith("["):
            if not stripped.endswith("]"):
                raise ConfigError("unterminated section header", lineno, col, "']'")
            name = stripped[1:-1].strip()
            if name not in _SECTIONS:
                raise ConfigError(f"unknown section [{name}]", lineno, col + 1, " | ".join(f"[{s}]" for s in _SECTIONS))
            section = name
            continue
        if "=" not in stripped:
            raise ConfigError(f"cannot parse {stripped!r}", lineno, col, "key = value")
        if section is None:
            raise ConfigError("key outside of any section", lineno, col, "a section header")
        key, _, value = stripped.partition("=")
        key, value = key.strip(), value.strip()
        eq = line.index("=")
        vcol = eq + 2 + len(line[eq + 1 :]) - len(line[eq + 1 :].lstrip())
        if section == "action":
            if not key.startswith("theta."):
                raise ConfigError(f"unknown key {key!r} in [action]", lineno, col, "theta.<generator>")
            gname = key[len("theta."):]
            if gname in theta:
                raise ConfigError(f"duplicate key {key!r}", lineno, col)
            try:
                matrix = json.loads(value)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"bad matrix: {exc.msg}", lineno, vcol + exc.pos, "a JSON list of rows") from None
            if not (isinstance(matrix, list) and all(isinstance(r, list) and all(isinstance(x, int) for x in r) for r in matrix)):
                raise ConfigError("bad matrix", lineno, vcol, "a JSON list of integer rows")
            theta[gname] = (matrix, lineno, col)
            continue
        if key not in _SECTIONS[section]:
            raise ConfigError(f"unknown key {key!r} in [{section}]", lineno, col, " | ".join(sorted(_SECTIONS[section])))
        full = f"{section}.{key}"
        if full in values:
            raise ConfigError(f"duplicate key {key!r}", lineno, col)
        values[full] = (value, lineno, vcol)

    def need(key):
        if key not in values:
            raise ConfigError(f"missing {key}", expected=key)
        return values[key]

    rank = _int_value(*need("group.rank"), "rank")
    if rank < 0:
        raise ConfigError("rank must be non-negative", *need("group.rank")[1:])
    kind_text, kl, kc = need("monoid.kind")
    try:
        kind = MonoidKind(kind_text)
    except ValueError:
        raise ConfigError(f"unknown monoid kind {kind_text!r}", kl, kc, "free-abelian | free") from None
    k = _int_value(*need("monoid.generators"), "generators")
    if k < 1:
        raise ConfigError("at least one generator is required", *need("monoid.generators")[1:])
    if "monoid.names" in values:
        ntext, nl, nc = values["monoid.names"]
        names = tuple(n.strip() for n in ntext.split(","))
        if len(names) != k:
            raise ConfigError(f"{len(names)} names for {k} generators", nl, nc, f"{k} comma-separated names")
    else:
        if kind is MonoidKind.FREE and k <= 26:
            names = tuple("abcdefghijklmnopqrstuvwxyz"[:k])
        else:
            names = tuple(f"p{i + 1}" for i in range(k))
    try:
        monoid = MonoidSpec(kind, names)
    except ValueError as exc:
        raise ConfigError(str(exc), *values.get("monoid.names", ("", 0, 0))[1:]) from None
    for gname, (_, tl, tc) in theta.items():
        if gname not in names:
            raise ConfigError(f"theta for unknown generator {gname!r}", tl, tc, " | ".join(f"theta.{n}" for n in names))
    for n in names:
        if n not in theta:
            raise ConfigError(f"missing theta.{n}", expected=f"theta.{n}")
    try:
        spec = AdsSpec(rank, monoid, {n: m for n, (m, _, _) in theta.items()})
    except (InvalidSystemError, ValueError) as exc:
        raise ConfigError(str(exc)) from None

    options: Dict[str, object] = {}
    for key in ("depth", "window", "cap"):
        if f"options.{key}" in values:
            options[key] = _int_value(*values[f"options.{key}"], key)
    if "options.amenable" in values:
        atext, al, ac = values["options.amenable"]
        if atext not in _AMENABLE:
            raise ConfigError(f"bad amenability flag {atext!r}", al, ac, "assumed | asserted | unknown")
        options["amenable"] = _AMENABLE[atext]
    return SystemConfig(spec, options)


def load_config(path: str) -> SystemConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())


# -- commands -----------------------------------------------------------------


@dataclass
class Outcome:
    doc: dict
    code: int = EXIT_OK


def _fmt(spec, s):
    return None if s is None else format_element(spec, s)


def _classification_doc(spec, sfs):
    return {
        "verdict": sfs.classification.name,
        "elements": [_fmt(spec, e) for e in sfs.elements],
        "witness": _fmt(spec, sfs.witness),
        "uncovered": None
        if sfs.uncovered is None
        else {"q": spec.monoid.format(sfs.uncovered[0]), "residue": list(sfs.uncovered[1])},
        "overlap": None if sfs.overlap is None else [_fmt(spec, x) for x in sfs.overlap],
        "pf": [spec.monoid.format(p) for p in (sfs.pf or ())],
    }


def cmd_validate(spec, args, opts):
    rep = validate_ads(spec)
    doc = {"verdict": "valid" if rep.valid else "invalid", "violations": rep.violations, "witness": rep.witness}
    return Outcome(doc, EXIT_OK if rep.valid else EXIT_NEGATIVE)


def cmd_lcm(spec, args, opts):
    a, b = parse_element(spec, args.a), parse_element(spec, args.b)
    r = intersect_principal_ideals(spec, a, b)
    doc = {
        "verdict": "EMPTY" if r is None else "NONEMPTY",
        "a": _fmt(spec, a),
        "b": _fmt(spec, b),
        "witness": _fmt(spec, r),
        "citations": ["aS ∩ bS = (w, r)S for r = lcm(p, q) and w in the meet of the cosets, else empty"],
    }
    return Outcome(doc, EXIT_NEGATIVE if r is None else EXIT_OK)


def cmd_foundation_check(spec, args, opts):
    sfs = is_foundation_set_s(spec, parse_elements(spec, " ".join(args.elements)))
    doc = _classification_doc(spec, sfs)
    doc["citations"] = ["foundation iff P_F is a foundation set of P and the cosets below each q ∈ P_F cover Z^d"]
    ok = sfs.classification is not Classification.NOT_FOUNDATION
    return Outcome(doc, EXIT_OK if ok else EXIT_NEGATIVE)


def cmd_refine(spec, args, opts):
    f = parse_elements(spec, " ".join(args.elements))
    out = elementary_refinement(spec, f)
    doc = _classification_doc(spec, out)
    doc["containment"] = {_fmt(spec, e): _fmt(spec, h) for e, h in out.containers.items()}
    doc["citations"] = ["full transversals over an accurate foundation set of P whose members are covered by the input"]
    return Outcome(doc)


def cmd_pf(spec, args, opts):
    f = parse_elements(spec, " ".join(args.elements))
    finite = partition_by_index(spec, f).finite_part
    pf = construct_pf(spec.monoid, [m.p for m in finite])
    ok, wit = is_p_foundation_set(spec.monoid, pf)
    doc = {
        "verdict": "P-FOUNDATION" if ok else "NOT-P-FOUNDATION",
        "pf": [spec.monoid.format(p) for p in pf],
        "witness": None if ok else spec.monoid.format(wit),
    }
    return Outcome(doc, EXIT_OK if ok else EXIT_NEGATIVE)


def cmd_transversal(spec, args, opts):
    p = spec.monoid.parse(args.p)
    lat = spec.image(p)
    idx = index(lat)
    doc = {
        "p": spec.monoid.format(p),
        "index": "infinite" if idx is INFINITE else idx,
        "hnf": [list(c) for c in lat.basis],
        "representatives": [list(t) for t in transversal(lat)] if idx is not INFINITE else None,
    }
    return Outcome(doc)


def cmd_core(spec, args, opts):
    core = core_units(spec)
    doc = {"core": core.description}
    if args.element:
        s = parse_element(spec, args.element)
        w = core.non_core_witness(s)
        doc.update({"element": _fmt(spec, s), "verdict": "CORE" if w is None else "NOT-CORE", "witness": _fmt(spec, w)})
        return Outcome(doc, EXIT_OK if w is None else EXIT_NEGATIVE)
    return Outcome(doc)


def cmd_weakly_fixed(spec, args, opts):
    s, t = parse_element(spec, args.s), parse_element(spec, args.t)
    a = normalize(spec, s, t)
    e = IdealProjection.of(spec, parse_element(spec, args.e) if args.e else t)
    v = is_weakly_fixed(spec, a, e, opts["depth"], opts["window"])
    doc = {
        "element": a.format(spec),
        "projection": _fmt(spec, e.generator),
        "verdict": v.verdict.value,
        "witness": _fmt(spec, v.witness),
        "depth": v.depth,
        "detail": v.detail,
    }
    return Outcome(doc, EXIT_NEGATIVE if v.verdict is WeakFix.NO else EXIT_OK)


def cmd_simplicity(spec, args, opts):
    rep = kirchberg_report(spec, opts["amenable"], opts["depth"])
    return Outcome(report_to_dict(rep))


def cmd_oracle_compare(spec, args, opts):
    depth = min(opts["depth"], 3)
    ball = enumerate_ball(spec, depth, opts["window"], opts["cap"])
    rng = random.Random(args.seed)
    sample = [rng.choice(ball.elements) for _ in range(2 * args.pairs)]
    pairs = list(zip(sample[::2], sample[1::2]))
    problems = [f"{d.kind}: {d.detail}" for d in compare_intersections(spec, pairs, ball)]
    checked = {"pairs": len(pairs), "ball": len(ball)}
    if args.elements:
        f = parse_elements(spec, " ".join(args.elements))
        sfs = is_foundation_set_s(spec, f)
        passed, fail = oracle_foundation_check(spec, f, ball)
        if sfs.is_foundation and not passed:
            problems.append(f"foundation verdict but {_fmt(spec, fail)} meets no member")
        if not sfs.is_foundation:
            from .oracle import Ball

            refuted, _ = oracle_foundation_check(spec, f, Ball(depth, opts["window"], [sfs.witness]))
            if refuted:
                problems.append(f"witness {_fmt(spec, sfs.witness)} meets a member")
        checked["foundation"] = sfs.classification.name
    doc = {"verdict": "CONSISTENT" if not problems else "DISCREPANCY", "discrepancies": problems, "checked": checked, "depth": depth, "window": opts["window"]}
    return Outcome(doc, EXIT_OK if not problems else EXIT_NEGATIVE)


def cmd_u_refine(spec, args, opts):
    import re

    pairs = [(int(a), int(b)) for a, b in re.findall(r"\(\s*(-?\d+)\s*,\s*(-?\d+)\s*\)", " ".join(args.pairs))]
    try:
        out = u_semigroup_refine(pairs)
    except NotFoundationSetError as exc:
        return Outcome({"verdict": "NOT_FOUNDATION", "witness": list(exc.witness), "detail": str(exc)}, EXIT_NEGATIVE)
    return Outcome({"verdict": "ACCURATE", "elements": [list(p) for p in out]})


COMMANDS = {
    "validate": cmd_validate,
    "lcm": cmd_lcm,
    "foundation-check": cmd_foundation_check,
    "refine": cmd_refine,
    "pf": cmd_pf,
    "transversal": cmd_transversal,
    "core": cmd_core,
    "weakly-fixed": cmd_weakly_fixed,
    "simplicity": cmd_simplicity,
    "oracle-compare": cmd_oracle_compare,
    "u-refine": cmd_u_refine,
}
_NEEDS_CONFIG = set(COMMANDS) - {"u-refine"}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=argparse.SUPPRESS, help="system definition file")
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="emit a JSON document")
    common.add_argument("--depth", type=int, default=argparse.SUPPRESS, help="depth budget")
    common.add_argument("--window", type=int, default=argparse.SUPPRESS, help="g-window of oracle balls")
    common.add_argument("--amenable", choices=sorted(_AMENABLE), default=argparse.SUPPRESS)

    parser = argparse.ArgumentParser(prog="adsboundary", parents=[common], description="Foundation sets and simplicity reports for Z^d ⋊ P.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", metavar="command")
    sub.required = True

    def add(name, help_):
        return sub.add_parser(name, parents=[common], help=help_)

    add("validate", "check the standing assumptions")
    p = add("lcm", "intersect two principal ideals")
    p.add_argument("a")
    p.add_argument("b")
    for name, help_ in (("foundation-check", "classify a finite set"), ("refine", "elementary refinement"), ("pf", "the P-projection P_F")):
        add(name, help_).add_argument("elements", nargs="+")
    add("transversal", "coset representatives of θ_p(Z^d)").add_argument("p")
    add("core", "describe the core").add_argument("element", nargs="?")
    p = add("weakly-fixed", "does [s, t] weakly fix E(e)?")
    p.add_argument("s")
    p.add_argument("t")
    p.add_argument("e", nargs="?", help="projection generator, default t")
    add("simplicity", "full simplicity / Kirchberg report")
    p = add("oracle-compare", "brute-force consistency sweep")
    p.add_argument("elements", nargs="*")
    p.add_argument("--pairs", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    add("u-refine", "refine a foundation set of U = {(r, x)}").add_argument("pairs", nargs="+")
    return parser


def _human(doc, indent=0, bullets=False) -> List[str]:
    lines = []
    pad = "  " * indent
    for key in sorted(doc):
        value = doc[key]
        if isinstance(value, dict):
            lines.append(f"{pad}{key}:")
            lines.extend(_human(value, indent + 1, bullets or key == "citations"))
        elif isinstance(value, list) and value and all(isinstance(v, str) for v in value):
            if bullets or key == "citations":
                lines.append(f"{pad}{key}:")
                lines.extend(f"{pad}  - {v}" for v in value)
            else:
                lines.append(f"{pad}{key}: {', '.join(value)}")
        elif isinstance(value, str):
            lines.append(f"{pad}{key}: {value}")
        else:
            lines.append(f"{pad}{key}: {json.dumps(value, ensure_ascii=False)}")
    return lines


def emit(doc: dict, as_json: bool, stream) -> None:
    if as_json:
        stream.write(json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n")
    else:
        stream.write("\n".join(_human(doc)) + "\n")


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_ERROR
    as_json = getattr(args, "json", False)
    spec = None
    try:
        if args.command in _NEEDS_CONFIG:
            if not getattr(args, "config", None):
                raise ConfigError("--config is required for this command")
            cfg = load_config(args.config)
            spec = cfg.spec
            if args.command != "validate":
                rep = validate_ads(spec)
                if not rep.valid:
                    raise InvalidSystemError(rep.violation)
        else:
            cfg, spec = SystemConfig(None), None
        opts = {"depth": 4, "window": 3, "cap": 10**6, "amenable": Amenability.ASSUMED}
        opts.update(cfg.options)
        for key in ("depth", "window"):
            if getattr(args, key, None) is not None:
                opts[key] = getattr(args, key)
        if getattr(args, "amenable", None):
            opts["amenable"] = _AMENABLE[args.amenable]
        out = COMMANDS[args.command](spec, args, opts)
    except (ConfigError, InvalidSystemError, NotFoundationSetError, ValueError, OSError) as exc:
        doc = {"verdict": "ERROR", "error": str(exc)}
        if isinstance(exc, NotFoundationSetError) and spec is not None and isinstance(exc.witness, SemidirectElement):
            doc["witness"] = _fmt(spec, exc.witness)
        if isinstance(exc, ConfigError):
            doc.update({"line": exc.line, "column": exc.column, "expected": exc.expected})
        emit(doc, as_json, stdout if as_json else stderr)
        return EXIT_ERROR
    doc = dict(out.doc)
    doc["command"] = args.command
    emit(doc, as_json, stdout)
    return out.code


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
