"""Command-line front end: spec files, verification runs, products, normal forms.

Spec files are line oriented::

    # Witt algebra W(1;1) in characteristic 3
    [ring]
    p = 3
    nvars = 1
    truncated = yes

    [algebra]
    builtin = witt            # or derivations / abelian, or explicit entries:
    # rank = 2
    # c[1,2,1] = t1           # [x1, x2] = t1*x1 (mirror entry c[2,1,1] filled in)
    # anchor[1,1] = 1         # eps(x1)(t1) = 1
    # pop[1,1] = 0            # x1^[p] = 0*x1 + ...

    [localize]
    generators = t, 1 + t

Reports are deterministic for a given spec, seed and trial count.
"""

from __future__ import annotations

import argparse
import re
import sys
import time
from dataclasses import dataclass, field

from . import grammar
from .coeffring import PolyRing
from .envelope import Envelope, EnvelopeLRView, Letter, restricted_dimension, straighten, verify_centrality, \
    verify_hochschild_in_envelope
from .lierinehart import LRPresentation, abelian_algebra, build_derivation_algebra, verify_axioms, \
    verify_restricted_morphism
from .localization import LocalizedAlgebra, MultSet, verify_loc_axioms, verify_loc_envelope_hochschild, \
    verify_loc_well_defined
from .report import CheckResult, Report

BUILTINS = ("witt", "derivations", "abelian")


class SpecError(ValueError):
    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column


@dataclass
class SpecFile:
    p: int
    nvars: int = 1
    truncated: bool = False
    builtin: str | None = None
    rank: int | None = None
    toral: bool = False
    brackets: dict = field(default_factory=dict)   # (i, j, k) 1-based -> RingElement
    anchors: dict = field(default_factory=dict)    # (i, j) -> RingElement
    pops: dict = field(default_factory=dict)       # (i, k) -> RingElement
    localize: list = field(default_factory=list)   # RingElements

    @property
    def ring(self) -> PolyRing:
        return PolyRing(self.p, self.nvars, self.truncated)

    def to_text(self) -> str:
        lines = ["[ring]", f"p = {self.p}", f"nvars = {self.nvars}", f"truncated = {'yes' if self.truncated else 'no'}",
                 "", "[algebra]"]
        if self.builtin:
            lines.append(f"builtin = {self.builtin}")
        if self.rank is not None:
            lines.append(f"rank = {self.rank}")
        if self.builtin == "abelian":
            lines.append(f"toral = {'yes' if self.toral else 'no'}")
        for (i, j, k), c in sorted(self.brackets.items()):
            lines.append(f"c[{i},{j},{k}] = {c}")
        for (i, j), c in sorted(self.anchors.items()):
            lines.append(f"anchor[{i},{j}] = {c}")
        for (i, k), c in sorted(self.pops.items()):
            lines.append(f"pop[{i},{k}] = {c}")
        if self.localize:
            lines += ["", "[localize]", "generators = " + ", ".join(str(g) for g in self.localize)]
        return "\n".join(lines) + "\n"

    def build(self) -> LRPresentation:
        """The presentation, unchecked (the verify command does the checking)."""
        ring = self.ring
        if self.builtin in ("witt", "derivations"):
            return build_derivation_algebra(ring, check=False)
        if self.builtin == "abelian":
            return abelian_algebra(ring, self.rank or 1, toral=self.toral, check=False)
        m = self.rank
        zero = ring.zero()
        sc = {}
        for (i, j, k), c in self.brackets.items():
            sc.setdefault((i - 1, j - 1), [zero] * m)[k - 1] = c
        anchors = [[zero] * ring.nvars for _ in range(m)]
        for (i, j), c in self.anchors.items():
            anchors[i - 1][j - 1] = c
        pops = [[zero] * m for _ in range(m)]
        for (i, k), c in self.pops.items():
            pops[i - 1][k - 1] = c
        return LRPresentation(ring, m, sc, anchors, pops, check=False)


_SECTION = re.compile(r"^\[(\w+)\]$")
_INDEXED = re.compile(r"^(c|anchor|pop)\[\s*(\d+(?:\s*,\s*\d+)*)\s*\]$")
_YES = {"yes": True, "true": True, "1": True, "no": False, "false": False, "0": False}


def parse_spec(text: str) -> SpecFile:
    """Parse spec text; raise :class:`SpecError` with a line/column on any problem."""
    entries = {"ring": [], "algebra": [], "localize": []}
    section = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        stripped = line.strip()
        if not stripped:
            continue
        col0 = len(line) - len(line.lstrip()) + 1
        m = _SECTION.match(stripped)
        if m:
            section = m.group(1)
            if section not in entries:
                raise SpecError(f"unknown section [{section}]", lineno, col0)
            continue
        if "=" not in stripped:
            raise SpecError("expected 'key = value'", lineno, col0)
        if section is None:
            raise SpecError("entry outside of a section", lineno, col0)
        key, value = stripped.split("=", 1)
        vcol = line.index("=") + 2 + (len(value) - len(value.lstrip()))
        entries[section].append((key.strip(), value.strip(), lineno, col0, vcol))

    def integer(value, lineno, col):
        try:
            return int(value)
        except ValueError:
            raise SpecError(f"expected an integer, got '{value}'", lineno, col) from None

    def flag(value, lineno, col):
        try:
            return _YES[value.lower()]
        except KeyError:
            raise SpecError(f"expected yes/no, got '{value}'", lineno, col) from None

    ring_kw = {}
    p_line = 1
    for key, value, lineno, kcol, vcol in entries["ring"]:
        if key == "p":
            ring_kw["p"] = integer(value, lineno, vcol)
            p_line = lineno
        elif key == "nvars":
            ring_kw["nvars"] = integer(value, lineno, vcol)
        elif key == "truncated":
            ring_kw["truncated"] = flag(value, lineno, vcol)
        else:
            raise SpecError(f"unknown ring key '{key}'", lineno, kcol)
    if "p" not in ring_kw:
        raise SpecError("missing 'p' in [ring]", 1)
    builtin = next((v for k, v, *_ in entries["algebra"] if k == "builtin"), None)
    if builtin == "witt":
        ring_kw.setdefault("truncated", True)
    try:
        ring = PolyRing(ring_kw["p"], ring_kw.get("nvars", 1), ring_kw.get("truncated", False))
    except ValueError as exc:
        raise SpecError(str(exc), p_line) from None
    spec = SpecFile(ring.p, ring.nvars, ring.truncated)

    def poly(value, lineno, col):
        try:
            return ring.parse(value)
        except grammar.ParseError as exc:
            raise SpecError(exc.message, lineno, col + exc.column - 1) from None

    indexed = []
    for key, value, lineno, kcol, vcol in entries["algebra"]:
        if key == "builtin":
            if value not in BUILTINS:
                raise SpecError(f"unknown builtin '{value}' (expected one of {', '.join(BUILTINS)})", lineno, vcol)
            spec.builtin = value
        elif key == "rank":
            spec.rank = integer(value, lineno, vcol)
            if spec.rank < 0:
                raise SpecError("rank must be non-negative", lineno, vcol)
        elif key == "toral":
            spec.toral = flag(value, lineno, vcol)
        else:
            m = _INDEXED.match(key)
            if not m:
                raise SpecError(f"unknown algebra key '{key}'", lineno, kcol)
            idx = tuple(int(x) for x in m.group(2).split(","))
            indexed.append((m.group(1), idx, poly(value, lineno, vcol), lineno, kcol))

    if spec.builtin == "witt" and spec.nvars != 1:
        raise SpecError("the witt builtin needs nvars = 1", 1)
    if spec.builtin in ("witt", "derivations"):
        if spec.rank is not None and spec.rank != spec.nvars:
            raise SpecError("derivation algebras have rank = nvars", 1)
    if spec.builtin is None and spec.rank is None:
        raise SpecError("explicit algebras need 'rank'", 1)
    if spec.builtin and indexed:
        _, _, _, lineno, kcol = indexed[0]
        raise SpecError("builtin algebras take no explicit entries", lineno, kcol)

    m = spec.rank
    for kind, idx, value, lineno, kcol in indexed:
        bounds = {"c": (m, m, m), "anchor": (m, spec.nvars), "pop": (m, m)}[kind]
        if len(idx) != len(bounds) or any(not 1 <= x <= b for x, b in zip(idx, bounds)):
            raise SpecError(f"index {list(idx)} out of bounds for {kind}", lineno, kcol)
        target = {"c": spec.brackets, "anchor": spec.anchors, "pop": spec.pops}[kind]
        target[idx] = value
    for (i, j, k), c in list(spec.brackets.items()):
        spec.brackets.setdefault((j, i, k), -c)
    spec.brackets = {k: v for k, v in spec.brackets.items() if v}
    spec.anchors = {k: v for k, v in spec.anchors.items() if v}
    spec.pops = {k: v for k, v in spec.pops.items() if v}

    for key, value, lineno, kcol, vcol in entries["localize"]:
        if key != "generators":
            raise SpecError(f"unknown localize key '{key}'", lineno, kcol)
        spec.localize = _parse_generators(ring, value, lineno, vcol)
    return spec


def _parse_generators(ring, value, lineno=1, col=1):
    if ring.truncated:
        raise SpecError("localization needs a non-truncated ring", lineno, col)
    gens = []
    offset = 0
    for part in value.split(","):
        try:
            g = ring.parse(part)
        except grammar.ParseError as exc:
            raise SpecError(exc.message, lineno, col + offset + exc.column - 1) from None
        if not g:
            lead = len(part) - len(part.lstrip())
            raise SpecError("multiplicative-set generator must be nonzero", lineno, col + offset + lead)
        gens.append(g)
        offset += len(part) + 1
    return gens


# -- element expressions ------------------------------------------------------------------
def _names(pres: LRPresentation):
    letters = {n: i for i, n in enumerate(pres.names)}
    for i in range(pres.rank):
        letters.setdefault(f"x{i + 1}", i)
    scalars = {n: pres.ring.gen(j) for j, n in enumerate(pres.ring.var_names)}
    if pres.ring.nvars == 1:
        scalars["t1"] = pres.ring.gen(0)
    return letters, scalars


def parse_element(env: Envelope, text: str):
    """Evaluate an expression in the envelope with its own multiplication."""
    letters, scalars = _names(env.pres)

    def name(node):
        if node.name in letters:
            return env.letter(letters[node.name])
        if node.name in scalars:
            return env.scalar(scalars[node.name])
        raise grammar.ParseError(f"unknown symbol '{node.name}'", node.column)

    return grammar.evaluate(grammar.parse(text), num=env.scalar, name=name)


class _WordSum:
    """Formal sums of words; multiplication concatenates."""

    def __init__(self, terms):
        self.terms = terms  # list of (int, tuple)

    def __add__(self, other):
        return _WordSum(self.terms + other.terms)

    def __neg__(self):
        return _WordSum([(-c, w) for c, w in self.terms])

    def __mul__(self, other):
        return _WordSum([(c1 * c2, w1 + w2) for c1, w1 in self.terms for c2, w2 in other.terms])


def normal_form(env: Envelope, text: str):
    """Expand the expression into words and straighten each by rewriting."""
    letters, scalars = _names(env.pres)

    def name(node):
        if node.name in letters:
            return _WordSum([(1, (Letter(letters[node.name]),))])
        if node.name in scalars:
            return _WordSum([(1, (scalars[node.name],))])
        raise grammar.ParseError(f"unknown symbol '{node.name}'", node.column)

    ws = grammar.evaluate(grammar.parse(text), num=lambda n: _WordSum([(n, ())]), name=name)
    out = env.zero()
    for c, word in ws.terms:
        if c % env.p:
            out = out + c * straighten(env, word)
    return out


# -- commands ---------------------------------------------------------------------------------
def _localized(spec: SpecFile, pres, override):
    gens = spec.localize
    if override:
        gens = _parse_generators(pres.ring, override)
    if not gens:
        raise SpecError("verify-loc needs multiplicative-set generators ([localize] or --localize)", 1)
    return LocalizedAlgebra(pres, MultSet(pres.ring, gens))


def run(command: str, spec: SpecFile, args=(), seed: int = 0, trials: int = 25, mode: str = "u",
        localize: str | None = None) -> Report:
    pres = spec.build()
    if command == "verify":
        report = Report("verify", seed=seed, meta={"algebra": str(pres), "trials": trials})
        report.extend(verify_axioms(pres, trials=trials, seed=seed), "axiom.")
        U = Envelope(pres, "U")
        report.extend(verify_centrality(U), "envelope.")
        report.extend(verify_hochschild_in_envelope(pres, trials=trials, seed=seed, env=U), "envelope.")
        view = EnvelopeLRView(Envelope(pres, "u"))
        report.extend(verify_restricted_morphism(view.iota_L_images(), pres, view, trials=trials, seed=seed),
                      "iota_L.")
        return report
    if command == "verify-loc":
        alg = _localized(spec, pres, localize)
        report = Report("verify-loc", seed=seed, meta={"algebra": str(alg), "trials": trials})
        report.extend(verify_loc_axioms(alg, trials=trials, seed=seed), "loc_axiom.")
        report.extend(verify_loc_well_defined(alg, trials=trials, seed=seed), "well_defined.")
        report.extend(verify_loc_envelope_hochschild(alg, trials=max(1, trials // 5), seed=seed), "envelope.")
        report.extend(verify_restricted_morphism(alg.basis(), pres, alg, trials=trials, seed=seed), "embedding.")
        return report
    if command == "mul":
        if len(args) != 2:
            raise ValueError("mul takes two element expressions")
        env = Envelope(pres, mode)
        a, b = (parse_element(env, x) for x in args)
        return Report("mul", meta={"mode": mode, "input.a": a, "input.b": b, "product": a * b})
    if command == "normal-form":
        if len(args) != 1:
            raise ValueError("normal-form takes one expression")
        env = Envelope(pres, mode)
        return Report("normal-form", meta={"mode": mode, "input": args[0], "normal_form": normal_form(env, args[0])})
    if command == "dim":
        env = Envelope(pres, "u")
        meta = {"mode": "u", "basis": ", ".join(env.mono_str(m) or "1" for m in env.restricted_basis()),
                "rank_over_R": len(env.restricted_basis())}
        report = Report("dim", meta=meta)
        if pres.ring.truncated:
            info = restricted_dimension(env)
            meta["dimension_over_F%d" % pres.p] = info["dimension"]
            report.add(CheckResult("closure_in_basis", info["closed"], len(env.restricted_basis()) ** 2))
        return report
    if command == "z-basis":
        if len(args) != 1:
            raise ValueError("z-basis takes one expression")
        env = Envelope(pres, "U")
        a = parse_element(env, args[0])
        z = env.to_z_basis(a)
        report = Report("z-basis", meta={"mode": "U", "input": a, "z_basis": z,
                                         "filtration_degree": z.filtration_degree()})
        report.add(CheckResult("round_trip", env.from_z_basis(z) == a, 1))
        return report
    raise ValueError(f"unknown command '{command}'")


COMMANDS = ("verify", "verify-loc", "mul", "normal-form", "dim", "z-basis")


def _builtin_spec(name: str, p: int) -> SpecFile:
    return parse_spec(f"[ring]\np = {p}\n[algebra]\nbuiltin = {name}\n")


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="rlr", description="Restricted Lie-Rinehart algebras and their envelopes.")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("exprs", nargs="*", help="element expressions (mul, normal-form, z-basis)")
    ap.add_argument("--spec", help="algebra spec file")
    ap.add_argument("--builtin", choices=BUILTINS, help="use a builtin algebra instead of --spec")
    ap.add_argument("-p", type=int, default=3, help="characteristic for --builtin (default 3)")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--trials", type=int, default=25)
    ap.add_argument("--mode", choices=("U", "u"), default="u")
    ap.add_argument("--localize", help="comma-separated multiplicative-set generators")
    ap.add_argument("--timing", action="store_true", help="append elapsed time (breaks byte-identical output)")
    ns = ap.parse_intermixed_args(argv)

    try:
        if ns.spec:
            with open(ns.spec) as fh:
                spec = parse_spec(fh.read())
        elif ns.builtin:
            spec = _builtin_spec(ns.builtin, ns.p)
        else:
            ap.error("one of --spec or --builtin is required")
        start = time.perf_counter()
        report = run(ns.command, spec, ns.exprs, seed=ns.seed, trials=ns.trials, mode=ns.mode, localize=ns.localize)
        if ns.timing:
            report.meta["elapsed_s"] = f"{time.perf_counter() - start:.3f}"
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(report.render())
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
