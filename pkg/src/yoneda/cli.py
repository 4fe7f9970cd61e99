"""Command-line front end.

A workspace file declares a ring, modules, morphisms, short exact sequences
and spliced extensions::

    ring 4
    module M [2]
    module R []
    morphism f M R [2]
    morphism g R M [1]
    ses E f g
    next EE E E

Commands then refer to the declared names, e.g. ``yoneda extgroup -w ws.txt M M 1``.
"""

from __future__ import annotations

import argparse
import re
import sys
from dataclasses import dataclass, field
from typing import Sequence

from .abcat import FpModule, ModMorphism, biproduct, make_morphism, present_module
from .coprodext import ExtFamily, ab4_colim_check, phi_n, psi_n, psi_n_inverse, theta
from .errors import YonedaError
from .exactlin import ZZ, Matrix, RingSpec
from .laws import SUITES
from .randgen import KINDS, RandomGen, random_instance
from .resolution import ext_group, format_group, yoneda_class
from .yext import (NExtension, ShortExactSeq, as_next, compose_ext, make_ses,
                   nact_left, nact_right, nsum)

DEFAULT_RINGS = (0, 4, 8, 12)


class ParseError(YonedaError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


@dataclass
class Workspace:
    ring: RingSpec = ZZ
    modules: dict[str, FpModule] = field(default_factory=dict)
    morphisms: dict[str, ModMorphism] = field(default_factory=dict)
    sequences: dict[str, ShortExactSeq] = field(default_factory=dict)
    nexts: dict[str, NExtension] = field(default_factory=dict)
    # names used by each sequence / spliced extension, for printing
    ses_refs: dict[str, tuple[str, str]] = field(default_factory=dict)
    next_refs: dict[str, tuple[str, ...]] = field(default_factory=dict)

    def is_empty(self) -> bool:
        return not (self.modules or self.morphisms or self.sequences or self.nexts)

    def module(self, name: str) -> FpModule:
        if name not in self.modules:
            raise YonedaError(f"unknown module {name!r}")
        return self.modules[name]

    def morphism(self, name: str) -> ModMorphism:
        if name not in self.morphisms:
            raise YonedaError(f"unknown morphism {name!r}")
        return self.morphisms[name]

    def extension(self, name: str) -> ShortExactSeq | NExtension:
        if name in self.sequences:
            return self.sequences[name]
        if name in self.nexts:
            return self.nexts[name]
        raise YonedaError(f"unknown extension {name!r}")


@dataclass
class Report:
    """Output lines of a command plus the checks it performed."""

    lines: list[str] = field(default_factory=list)
    checks: list[tuple[str, str, bool, str]] = field(default_factory=list)

    def check(self, suite: str, instance: str, ok: bool, witness: str = ""):
        self.checks.append((suite, instance, bool(ok), witness))

    @property
    def passed(self) -> int:
        return sum(ok for _, _, ok, _ in self.checks)

    @property
    def failed(self) -> int:
        return len(self.checks) - self.passed

    @property
    def exit_code(self) -> int:
        return 0 if self.failed == 0 else 1

    def render(self, fmt: str = "plain") -> str:
        out = list(self.lines)
        for suite, inst, ok, wit in self.checks:
            out.append("\t".join([suite, inst, "PASS" if ok else "FAIL", wit]))
        if self.checks:
            out.append(f"TOTAL {self.passed}/{len(self.checks)}")
        if fmt == "tsv":
            out = [ln if "\t" in ln or ln.startswith("TOTAL") else f"result\t{ln}" for ln in out]
        return "\n".join(out)


# -- parsing -----------------------------------------------------------------

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_']*$")
_BRACKET = re.compile(r"\[[^\]]*\]")


def parse_matrix(text: str) -> list[list[int]]:
    """``[1,2;3,4]`` -> rows; ``[]`` -> no rows."""
    if not (text.startswith("[") and text.endswith("]")):
        raise ValueError(f"matrix must be bracketed, got {text!r}")
    body = text[1:-1].strip()
    if not body:
        return []
    rows = [[int(x) for x in r.split(",") if x.strip()] for r in body.split(";")]
    if len({len(r) for r in rows}) != 1:
        raise ValueError("matrix rows have different lengths")
    return rows


def format_matrix(M: Matrix) -> str:
    if M.rows == 0 or M.cols == 0:
        return "[]"
    return "[" + ";".join(",".join(str(x) for x in row) for row in M.data) + "]"


def _tokens(line: str) -> list[str]:
    # collapse whitespace inside brackets so a matrix is one token
    line = _BRACKET.sub(lambda m: re.sub(r"\s+", "", m.group(0)), line)
    return line.split()


def _check_name(lineno: int, name: str, ws: Workspace, table: dict):
    if not _NAME.match(name):
        raise ParseError(lineno, f"bad name {name!r}")
    if name in table:
        raise ParseError(lineno, f"duplicate name {name!r}")


def parse_workspace(text: str) -> Workspace:
    ws = Workspace()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = _tokens(line)
        try:
            _parse_line(ws, lineno, tok)
        except ParseError:
            raise
        except (YonedaError, ValueError) as exc:
            raise ParseError(lineno, f"{type(exc).__name__}: {exc}") from exc
    return ws


def _parse_line(ws: Workspace, lineno: int, tok: list[str]):
    kw, args = tok[0], tok[1:]
    if kw == "ring":
        if len(args) != 1:
            raise ParseError(lineno, "usage: ring <m>")
        if not ws.is_empty():
            raise ParseError(lineno, "ring must be declared before any definition")
        m = int(args[0])
        if m < 0 or m == 1:
            raise ParseError(lineno, f"ring modulus must be 0 or at least 2, got {m}")
        ws.ring = RingSpec(m)
    elif kw == "module":
        if len(args) not in (2, 4) or (len(args) == 4 and args[2] != "gens"):
            raise ParseError(lineno, "usage: module <name> [relations] [gens <g>]")
        name = args[0]
        _check_name(lineno, name, ws, ws.modules)
        rows = parse_matrix(args[1])
        gens = int(args[3]) if len(args) == 4 else (len(rows) if rows else 1)
        if rows and len(rows) != gens:
            raise ParseError(lineno, f"relation matrix has {len(rows)} rows for {gens} generators")
        cols = len(rows[0]) if rows else 0
        ws.modules[name] = present_module(ws.ring, gens, Matrix(rows, gens, cols) if rows
                                          else Matrix.zeros(gens, 0))
    elif kw == "morphism":
        if len(args) != 4:
            raise ParseError(lineno, "usage: morphism <name> <src> <tgt> [matrix]")
        name, s, t, mat = args
        _check_name(lineno, name, ws, ws.morphisms)
        S, T = ws.module(s), ws.module(t)
        rows = parse_matrix(mat)
        if rows:
            M = Matrix(rows, len(rows), len(rows[0]))
        elif S.gens == 0 or T.gens == 0:
            M = Matrix.zeros(T.gens, S.gens)
        else:
            raise ParseError(lineno, f"empty matrix for a map between nonzero modules {s} -> {t}")
        if M.shape != (T.gens, S.gens):
            raise ParseError(lineno, f"matrix is {M.rows}x{M.cols}, expected {T.gens}x{S.gens}")
        ws.morphisms[name] = make_morphism(S, T, M)
    elif kw == "ses":
        if len(args) != 3:
            raise ParseError(lineno, "usage: ses <name> <f> <g>")
        name, f, g = args
        _check_name(lineno, name, ws, ws.sequences)
        if name in ws.nexts:
            raise ParseError(lineno, f"duplicate name {name!r}")
        ws.sequences[name] = make_ses(ws.morphism(f), ws.morphism(g))
        ws.ses_refs[name] = (f, g)
    elif kw == "next":
        if len(args) < 2:
            raise ParseError(lineno, "usage: next <name> <ses_n> ... <ses_1>")
        name, parts = args[0], args[1:]
        _check_name(lineno, name, ws, ws.nexts)
        if name in ws.sequences:
            raise ParseError(lineno, f"duplicate name {name!r}")
        seqs = []
        for p in parts:
            if p not in ws.sequences:
                raise YonedaError(f"unknown short exact sequence {p!r}")
            seqs.append(ws.sequences[p])
        ws.nexts[name] = NExtension(tuple(seqs))
        ws.next_refs[name] = tuple(parts)
    else:
        raise ParseError(lineno, f"unknown keyword {kw!r}")


# -- printing ----------------------------------------------------------------

def format_workspace(ws: Workspace) -> str:
    lines = [f"ring {ws.ring.modulus}"]
    for name, M in ws.modules.items():
        lines.append(f"module {name} {format_matrix(M.relations)} gens {M.gens}")
    # equal modules under several names print under the first one
    by_value = {M: n for n, M in reversed(list(ws.modules.items()))}
    for name, f in ws.morphisms.items():
        lines.append(f"morphism {name} {by_value[f.source]} {by_value[f.target]} "
                     f"{format_matrix(f.matrix)}")
    for name, (f, g) in ws.ses_refs.items():
        lines.append(f"ses {name} {f} {g}")
    for name, parts in ws.next_refs.items():
        lines.append(f"next {name} {' '.join(parts)}")
    return "\n".join(lines) + "\n"


def workspace_of(value, name: str = "X", ring: RingSpec | None = None) -> Workspace:
    """A workspace binding a library value (module, morphism or extension) to ``name``."""
    ws = Workspace(ring=ring or value.ring)
    counter = {"M": 0, "m": 0, "s": 0}

    def mod(M: FpModule) -> str:
        for n, X in ws.modules.items():
            if X == M:
                return n
        n = f"{name}_M{counter['M']}"
        counter["M"] += 1
        ws.modules[n] = M
        return n

    def mor(f: ModMorphism) -> str:
        mod(f.source), mod(f.target)
        n = f"{name}_f{counter['m']}"
        counter["m"] += 1
        ws.morphisms[n] = f
        return n

    def ses(E: ShortExactSeq, n: str | None = None) -> str:
        n = n or f"{name}_E{counter['s']}"
        counter["s"] += 1
        a, b = mor(E.f), mor(E.g)
        ws.sequences[n] = E
        ws.ses_refs[n] = (a, b)
        return n

    if isinstance(value, FpModule):
        ws.modules[name] = value
    elif isinstance(value, ModMorphism):
        mod(value.source), mod(value.target)
        ws.morphisms[name] = value
    elif isinstance(value, ShortExactSeq):
        ses(value, name)
    elif isinstance(value, NExtension):
        if value.degree == 1:
            ses(value.seqs[0], name)
        else:
            parts = tuple(ses(E) for E in value.seqs)
            ws.nexts[name] = value
            ws.next_refs[name] = parts
    else:
        raise YonedaError(f"cannot print a {type(value).__name__}")
    return ws


# -- commands ----------------------------------------------------------------

def _common(p: argparse.ArgumentParser):
    p.add_argument("-w", "--workspace", help="workspace file ('-' for stdin)")
    p.add_argument("--ring", type=int, default=None, help="ring modulus (0 for Z)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cases", type=int, default=25)
    p.add_argument("--max-gens", type=int, default=4)
    p.add_argument("--max-entry", type=int, default=8)
    p.add_argument("--format", choices=("plain", "tsv"), default="plain")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="yoneda",
                                     description="Yoneda Ext over finitely presented modules")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_, *args, emit=False):
        p = sub.add_parser(name, help=help_)
        _common(p)
        for a, kw in args:
            p.add_argument(a, **kw)
        if emit:
            p.add_argument("--emit", action="store_true",
                           help="also print the resulting extension as workspace text")
        return p

    add("extgroup", "invariant factors of Ext^n(C, A)",
        ("C", {}), ("A", {}), ("n", {"type": int}))
    add("class", "class of a declared extension", ("E", {}))
    add("sum", "Baer sum of two extensions", ("E1", {}), ("E2", {}), emit=True)
    add("act-left", "pushout of E along a morphism", ("a", {}), ("E", {}), emit=True)
    add("act-right", "pullback of E along a morphism", ("E", {}), ("c", {}), emit=True)
    add("compose", "splice two extensions", ("E1", {}), ("E2", {}), emit=True)
    add("psi", "restrict along the injections of a biproduct right end",
        ("E", {}), ("parts", {"nargs": "+", "help": "summand modules in order"}))
    add("phi", "push along the projections of a biproduct left end",
        ("E", {}), ("parts", {"nargs": "+", "help": "factor modules in order"}))
    add("theta", "glue 1-extensions with a common left end", ("E", {"nargs": "+"}), emit=True)
    add("psi-inv", "glue n-extensions with a common left end",
        ("n", {"type": int}), ("E", {"nargs": "+"}), emit=True)
    add("ab4-check", "colimit of pushouts along a family of monos", ("a", {"nargs": "+"}))
    p = add("laws", "run randomised law suites")
    p.add_argument("--suite", default="all", choices=["all"] + list(SUITES))
    add("random", "print a seeded random instance", ("kind", {"choices": KINDS}))
    add("print", "print the parsed workspace")
    return parser


def _read_workspace(path: str | None) -> Workspace:
    if path is None:
        return Workspace()
    text = sys.stdin.read() if path == "-" else open(path, encoding="utf8").read()
    return parse_workspace(text)


def _class_line(E) -> str:
    return str(yoneda_class(E))


def _emit(rep: Report, args, value, name: str = "result"):
    rep.lines.append(_class_line(value))
    if getattr(args, "emit", False):
        rep.lines.extend(format_workspace(workspace_of(value, name)).rstrip("\n").splitlines())


def _rings(args, ws: Workspace) -> list[RingSpec]:
    if args.ring is not None:
        return [RingSpec(args.ring)]
    if args.workspace is not None:
        return [ws.ring]
    return [RingSpec(m) for m in DEFAULT_RINGS]


def run_laws(suite: str, cases: int, seed: int, rings: Sequence[RingSpec],
             max_gens: int = 3, max_entry: int = 8) -> Report:
    """One report line per (suite, case); case i runs over ``rings[i % len(rings)]``."""
    rep = Report()
    names = list(SUITES) if suite == "all" else [suite]
    for name in names:
        fn = SUITES[name]
        for i in range(cases):
            ring = rings[i % len(rings)]
            gen = RandomGen(ring, f"{name}/{seed}/{i}", max_gens=max_gens, max_entry=max_entry)
            try:
                checks = fn(gen, i)
            except YonedaError as exc:
                rep.check(name, f"{ring}#{i}", False, f"error: {exc}")
                continue
            bad = [c for c in checks if not c.ok]
            if bad:
                wit = "; ".join(f"{c.name}: {c.witness}" for c in bad)
            else:
                wit = f"{len(checks)} checks"
            rep.check(name, f"{ring}#{i}", not bad, wit)
    return rep


def run_command(ws: Workspace, command: Sequence[str] | str,
                args: argparse.Namespace | None = None) -> Report:
    if isinstance(command, str):
        command = command.split()
    if args is None:
        args = build_parser().parse_args(list(command))
    rep = Report()
    c = args.command
    if c == "extgroup":
        rep.lines.append(format_group(ext_group(ws.module(args.C), ws.module(args.A), args.n)))
    elif c == "class":
        rep.lines.append(_class_line(ws.extension(args.E)))
    elif c == "sum":
        _emit(rep, args, nsum(ws.extension(args.E1), ws.extension(args.E2)))
    elif c == "act-left":
        _emit(rep, args, nact_left(ws.morphism(args.a), ws.extension(args.E)))
    elif c == "act-right":
        _emit(rep, args, nact_right(ws.extension(args.E), ws.morphism(args.c)))
    elif c == "compose":
        _emit(rep, args, compose_ext(ws.extension(args.E1), ws.extension(args.E2)))
    elif c == "psi":
        _, inj, _ = biproduct([ws.module(p) for p in args.parts])
        for p, comp in zip(args.parts, psi_n(ws.extension(args.E), inj)):
            rep.lines.append(f"{p}: {_class_line(comp)}")
    elif c == "phi":
        _, _, proj = biproduct([ws.module(p) for p in args.parts])
        for p, comp in zip(args.parts, phi_n(ws.extension(args.E), proj)):
            rep.lines.append(f"{p}: {_class_line(comp)}")
    elif c == "theta":
        fam = ExtFamily(tuple(as_next(ws.extension(e)) for e in args.E))
        _emit(rep, args, theta(fam))
    elif c == "psi-inv":
        fam = ExtFamily(tuple(as_next(ws.extension(e)) for e in args.E))
        _emit(rep, args, psi_n_inverse(fam, args.n))
    elif c == "ab4-check":
        r = ab4_colim_check([ws.morphism(a) for a in args.a])
        inst = ",".join(args.a)
        for name, ok in r.checks:
            rep.check("ab4-check", inst, ok, name)
    elif c == "laws":
        rep = run_laws(args.suite, args.cases, args.seed, _rings(args, ws),
                       max_gens=min(args.max_gens, 3), max_entry=args.max_entry)
    elif c == "random":
        ring = args.ring if args.ring is not None else ws.ring.modulus
        value = random_instance(ring, args.kind, args.seed, args.max_gens, args.max_entry)
        rep.lines.extend(format_workspace(workspace_of(value, "X")).rstrip("\n").splitlines())
    elif c == "print":
        rep.lines.extend(format_workspace(ws).rstrip("\n").splitlines())
    else:  # pragma: no cover - argparse rejects unknown commands
        raise YonedaError(f"unknown command {c!r}")
    return rep


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        ws = _read_workspace(args.workspace)
        rep = run_command(ws, [], args)
    except (YonedaError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    text = rep.render(args.format)
    if text:
        print(text)
    return rep.exit_code


if __name__ == "__main__":
    sys.exit(main())
