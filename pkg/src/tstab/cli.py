"""Command-line front end: expression parser, subcommands, emitters.

Object expressions follow the grammar

    expr := term ("+" term)*
    term := [nat "*"] atom ["[" int "]"]
    atom := "O(" int ")" | "T(" label "," nat ")" | "S(" int "," int "," label ")" | "0"

with arbitrary whitespace.  O/T atoms build objects on the projective
line, S atoms build elliptic objects; the two kinds cannot be mixed.

Cut specifications: ``std:m=M,K=<int|inf|-inf>,P=<lbl;lbl|all|none>``,
``exc:a=<int|inf|-inf>,b=<int|inf|-inf>`` and ``coarse:m=M``.  Family
specifications: ``std``, ``coarse``, ``exc:k=K,p=<nat|inf>``, ``ell``.

Session configuration is a plain ``key = value`` file (``points = x,y,z``
fixes the point order; ``k``, ``p``, ``format``, ``seed`` supply
defaults); command-line flags override the file.

Exit codes: 0 success (checks passed), 1 domain error or failed check,
2 usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from typing import Sequence

from .elliptic import (EllipticObject, EllipticStandard, ShiftedClass, StableClass,
                       normalize_elliptic)
from .errors import (InvalidLengthError, NonCoprimeError, ObjectParseError, TStabError)
from .families import (INF, CoarseZ, ExceptionalP1, StandardP1, family_from_descriptor,
                       is_finer)
from .p1 import (DerivedObject, Line, Point, PointOrder, ShiftedIndec, Torsion,
                 hom_profile, normalize)
from .stability import HNFiltration, Report, StabilityFamily, Window, verify_hn
from .tstructures import (CATALOG_NAMES, CoarseCut, ExceptionalCut, SlopeCut, StandardCut,
                          catalog, catalog_entries, diagram, heart_contains, heart_slopes,
                          is_bounded, truncate, validate_cut)


# --- expression parser ---------------------------------------------------------

class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def at_end(self) -> bool:
        self.skip_ws()
        return self.pos >= len(self.text)

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self, expected: str):
        self.skip_ws()
        if not self.text.startswith(expected, self.pos):
            raise ObjectParseError(f"expected {expected!r}", self.pos)
        self.pos += len(expected)

    def nat(self) -> int:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            raise ObjectParseError("expected a natural number", start)
        return int(self.text[start:self.pos])

    def integer(self) -> int:
        self.skip_ws()
        start = self.pos
        if self.pos < len(self.text) and self.text[self.pos] in "+-":
            self.pos += 1
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start or self.text[start:self.pos] in ("+", "-"):
            raise ObjectParseError("expected an integer", start)
        return int(self.text[start:self.pos])

    def label(self) -> str:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isalnum():
            self.pos += 1
        if self.pos == start:
            raise ObjectParseError("expected a point label", start)
        return self.text[start:self.pos]


def parse_object(text: str, category: str = "auto", resolve_point=None
                 ) -> DerivedObject | EllipticObject:
    """Parse an object expression into its normal form.

    `category` is "auto", "p1" or "elliptic"; in auto mode the atoms
    decide (S builds elliptic objects, O/T build objects on the line,
    a bare 0 is the zero object of the requested side, defaulting to
    the line).  `resolve_point` maps labels to Points and defaults to
    label-ordered points.
    """
    if resolve_point is None:
        resolve_point = Point
    sc = _Scanner(text)
    p1_terms: list[tuple[ShiftedIndec, int]] = []
    ell_terms: list[tuple[ShiftedClass, int]] = []

    while True:
        sc.skip_ws()
        mult = 1
        if sc.peek().isdigit():
            pos = sc.pos
            mult = sc.nat()
            if sc.peek() == "*":
                sc.take("*")
            elif mult == 0 and sc.peek() in ("", "+", "["):
                # a bare 0 atom (possibly shifted): the zero object
                if sc.peek() == "[":
                    sc.take("[")
                    sc.integer()
                    sc.take("]")
                mult = None  # marker: contributed nothing
            else:
                raise ObjectParseError("expected '*' after a multiplicity", sc.pos)
        if mult is None:
            pass
        else:
            atom_pos = sc.pos
            head = sc.peek()
            if head == "0":
                sc.take("0")
                _opt_shift(sc)  # the zero object contributes nothing
            elif head == "O":
                sc.take("O")
                sc.take("(")
                n = sc.integer()
                sc.take(")")
                base = Line(n)
                shift = _opt_shift(sc)
                p1_terms.append((ShiftedIndec(base, shift), mult))
            elif head == "T":
                sc.take("T")
                sc.take("(")
                lbl = sc.label()
                sc.take(",")
                d = sc.nat()
                sc.take(")")
                if d == 0:
                    raise InvalidLengthError("torsion length must be >= 1", atom_pos)
                base = Torsion(resolve_point(lbl), d)
                shift = _opt_shift(sc)
                p1_terms.append((ShiftedIndec(base, shift), mult))
            elif head == "S":
                sc.take("S")
                sc.take("(")
                r = sc.integer()
                sc.take(",")
                d = sc.integer()
                sc.take(",")
                lbl = sc.label()
                sc.take(")")
                if r < 0 or math.gcd(r, d) != 1:
                    raise NonCoprimeError(
                        f"stable classes need coprime rank >= 0 and degree, got ({r},{d})",
                        atom_pos)
                cls = StableClass(r, d, resolve_point(lbl))
                shift = _opt_shift(sc)
                ell_terms.append((ShiftedClass(cls, shift), mult))
            else:
                raise ObjectParseError("expected an atom O(...), T(...), S(...) or 0", sc.pos)
        if sc.at_end():
            break
        sc.take("+")

    if p1_terms and ell_terms:
        raise ObjectParseError("cannot mix O/T atoms with S atoms", 0)
    if category == "p1" and ell_terms:
        raise ObjectParseError("an object on the line was expected", 0)
    if category == "elliptic" and p1_terms:
        raise ObjectParseError("an elliptic object was expected", 0)
    if ell_terms or category == "elliptic":
        return normalize_elliptic(ell_terms)
    return normalize(p1_terms)


def _opt_shift(sc: _Scanner) -> int:
    if sc.peek() == "[":
        sc.take("[")
        n = sc.integer()
        sc.take("]")
        return n
    return 0


# --- session configuration -------------------------------------------------------

@dataclass(frozen=True)
class SessionConfig:
    """Resolved session settings: point order, family defaults, output mode."""

    points: tuple[str, ...] = ()
    k: int = 0
    p: int | float = 0
    fmt: str = "text"
    seed: int = 0

    def resolver(self):
        if not self.points:
            return Point
        order = PointOrder(self.points)

        def resolve(label: str) -> Point:
            if label in order:
                return order.point(label)
            raise ObjectParseError(f"undeclared point label {label!r}", 0)
        return resolve


def _parse_p(text: str) -> int | float:
    if text == "inf":
        return INF
    value = int(text)
    if value < 0:
        raise ValueError("p must be nonnegative or inf")
    return value


def load_config(path: str) -> dict:
    settings: dict = {}
    with open(path, encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, 1):
            stripped = raw.strip()
            if not stripped or stripped.startswith("#"):
                continue
            if "=" not in stripped:
                raise TStabError(f"{path}:{lineno}: expected 'key = value'")
            key, _, value = stripped.partition("=")
            key, value = key.strip(), value.strip()
            if key == "points":
                settings["points"] = tuple(part.strip() for part in value.split(",") if part.strip())
            elif key == "k":
                settings["k"] = int(value)
            elif key == "p":
                settings["p"] = _parse_p(value)
            elif key == "format":
                if value not in ("text", "json"):
                    raise TStabError(f"{path}:{lineno}: format must be text or json")
                settings["fmt"] = value
            elif key == "seed":
                settings["seed"] = int(value)
            else:
                raise TStabError(f"{path}:{lineno}: unknown key {key!r}")
    return settings


def make_session(args: argparse.Namespace) -> SessionConfig:
    settings: dict = {}
    if getattr(args, "config", None):
        settings.update(load_config(args.config))
    if getattr(args, "points", None):
        settings["points"] = tuple(part.strip() for part in args.points.split(",") if part.strip())
    if getattr(args, "k", None) is not None:
        settings["k"] = args.k
    if getattr(args, "p", None) is not None:
        settings["p"] = _parse_p(args.p)
    if getattr(args, "format", None):
        settings["fmt"] = args.format
    if getattr(args, "seed", None) is not None:
        settings["seed"] = args.seed
    return SessionConfig(**settings)


# --- cut and family specifications -------------------------------------------------

def _parse_bound(text: str) -> int | float:
    if text == "inf":
        return INF
    if text == "-inf":
        return -INF
    return int(text)


def parse_cutspec(spec: str, session: SessionConfig) -> tuple[SlopeCut, StabilityFamily]:
    """Parse a cut specification and build the matching family."""
    kind, _, body = spec.partition(":")
    fields = {}
    if body:
        for part in body.split(","):
            if "=" not in part:
                raise TStabError(f"bad cut field {part!r} in {spec!r}")
            key, _, value = part.partition("=")
            fields[key.strip()] = value.strip()
    if kind == "std":
        m = int(fields.get("m", "0"))
        K = _parse_bound(fields.get("K", "-inf"))
        p_field = fields.get("P", "all")
        if p_field == "all":
            P = None
        elif p_field == "none":
            P = frozenset()
        else:
            P = frozenset(lbl for lbl in p_field.split(";") if lbl)
        return StandardCut(m, K, P), StandardP1(session.points)
    if kind == "exc":
        if "a" not in fields or "b" not in fields:
            raise TStabError("an exceptional cut needs a and b")
        return (ExceptionalCut(_parse_bound(fields["a"]), _parse_bound(fields["b"])),
                ExceptionalP1(session.k, session.p))
    if kind == "coarse":
        return CoarseCut(int(fields.get("m", "0"))), CoarseZ()
    raise TStabError(f"unknown cut kind {kind!r} (use std:, exc: or coarse:)")


def parse_famspec(spec: str, session: SessionConfig) -> StabilityFamily:
    kind, _, body = spec.partition(":")
    fields = {}
    if body:
        for part in body.split(","):
            key, _, value = part.partition("=")
            fields[key.strip()] = value.strip()
    if kind == "std":
        return StandardP1(session.points)
    if kind == "coarse":
        return CoarseZ()
    if kind == "exc":
        k = int(fields.get("k", session.k))
        p = _parse_p(fields["p"]) if "p" in fields else session.p
        return ExceptionalP1(k, p)
    if kind == "ell":
        return EllipticStandard(session.points)
    raise TStabError(f"unknown family {spec!r} (use std, coarse, exc:k=..,p=.. or ell)")


def family_for(name: str, session: SessionConfig) -> StabilityFamily:
    if name == "std":
        return StandardP1(session.points)
    if name == "exc":
        return ExceptionalP1(session.k, session.p)
    if name == "coarse":
        return CoarseZ()
    if name == "ell":
        return EllipticStandard(session.points)
    raise TStabError(f"unknown stability {name!r}")


# --- output helpers -----------------------------------------------------------------

def _emit(payload: dict, text: str, session: SessionConfig, out) -> None:
    if session.fmt == "json":
        print(json.dumps(payload, indent=2, sort_keys=True), file=out)
    else:
        print(text, file=out)


def _filtration_text(filt: HNFiltration) -> str:
    fam = filt.family
    lines = [f"object: {filt.object.render()}"]
    lines.append("quotients:")
    for slope, obj in filt.quotients:
        lines.append(f"  {fam.render_slope(slope)}: {obj.render()}")
    lines.append("terms: " + " -> ".join(t.render() for t in filt.terms))
    return "\n".join(lines)


def filtration_from_json(data: dict) -> tuple[object, HNFiltration]:
    """Rebuild (object, filtration) from the serialised form."""
    family = family_from_descriptor(data["family"])
    category = "elliptic" if data["family"]["family"] == "elliptic" else "p1"
    resolver = _family_resolver(family)
    obj = parse_object(data["object"], category, resolver)
    quotients = tuple(
        (family.slope_from_json(q["slope"]), parse_object(q["object"], category, resolver))
        for q in data["quotients"])
    terms = tuple(parse_object(t, category, resolver) for t in data["terms"])
    return obj, HNFiltration(family, quotients, terms)


def _family_resolver(family: StabilityFamily):
    labels = getattr(family, "point_labels", ())
    if labels:
        order = PointOrder(labels)
        return lambda lbl: order.point(lbl) if lbl in order else Point(lbl)
    return Point


# --- subcommand handlers --------------------------------------------------------------

def _cmd_normalize(args, session, out) -> int:
    obj = parse_object(args.expr, "auto", session.resolver())
    _emit({"object": obj.render()}, obj.render(), session, out)
    return 0


def _cmd_hom(args, session, out) -> int:
    resolver = session.resolver()
    x = parse_object(args.x, "auto", resolver)
    y = parse_object(args.y, "auto", resolver)
    if isinstance(x, EllipticObject) != isinstance(y, EllipticObject):
        raise TStabError("both objects must live on the same curve")
    if isinstance(x, EllipticObject):
        from .elliptic import hom_profile_elliptic
        profile = hom_profile_elliptic(x, y)
    else:
        profile = hom_profile(x, y)
    if args.degree is not None:
        dim = profile[args.degree]
        _emit({"dim": dim}, str(dim), session, out)
        return 0
    payload = {"profile": {str(q): n for q, n in profile.items()}}
    text = "\n".join(f"{q}: {n}" for q, n in profile.items()) or "0"
    _emit(payload, text, session, out)
    return 0


def _cmd_hn(args, session, out) -> int:
    family = family_for(args.stability, session)
    category = "elliptic" if args.stability == "ell" else "p1"
    obj = parse_object(args.expr, category, session.resolver())
    filt = family.hn(obj)
    _emit(filt.to_json(), _filtration_text(filt), session, out)
    return 0


def _cmd_truncate(args, session, out) -> int:
    cut, family = parse_cutspec(args.cut, session)
    obj = parse_object(args.expr, "p1", session.resolver())
    le0, ge1 = truncate(obj, cut, family)
    _emit({"le0": le0.render(), "ge1": ge1.render()},
          f"le0: {le0.render()}\nge1: {ge1.render()}", session, out)
    return 0


def _cmd_heart(args, session, out) -> int:
    cut, family = parse_cutspec(args.cut, session)
    heart = heart_slopes(cut, family)
    gens = heart.generators()
    payload: dict = {"generators": gens, "bounded": is_bounded(cut, family)}
    lines = ["heart generators:"] + [f"  {g}" for g in gens]
    if not gens:
        lines = ["heart generators: (none)"]
    lines.append(f"bounded: {str(is_bounded(cut, family)).lower()}")
    if args.contains is not None:
        obj = parse_object(args.contains, "p1", session.resolver())
        member = heart_contains(obj, cut, family)
        payload["contains"] = member
        lines.append(f"contains {obj.render()}: {str(member).lower()}")
    _emit(payload, "\n".join(lines), session, out)
    return 0


def _parse_params(param_args: Sequence[str]) -> dict:
    params: dict = {}
    for chunk in param_args or ():
        for part in chunk.split(","):
            if not part:
                continue
            if "=" not in part:
                raise TStabError(f"bad parameter {part!r} (use name=value)")
            key, _, value = part.partition("=")
            key, value = key.strip(), value.strip()
            if key == "p":
                params["p"] = _parse_p(value)
            elif key == "P":
                params["P"] = frozenset(lbl for lbl in value.split(";") if lbl)
            else:
                raise TStabError(f"unknown parameter {key!r}")
    return params


def _cmd_catalog(args, session, out) -> int:
    points = session.points or ("x", "y", "z")
    if not args.name:
        entries = catalog_entries(points=points, p=0)
        payload = {"entries": [e.to_json() for e in entries]}
        text = "\n".join(f"{e.name:<2} bounded={str(e.bounded).lower():<5} "
                         f"heart: {'; '.join(e.heart.generators()) or '(none)'}"
                         for e in entries)
        _emit(payload, text, session, out)
        return 0
    params = _parse_params(args.params)
    entry = catalog(args.name, p=params.get("p"), P=params.get("P"), points=points)
    if args.diagram:
        text = diagram(entry.cut, entry.family)
        _emit({**entry.to_json(), "diagram": text}, text, session, out)
        return 0
    gens = "; ".join(entry.heart.generators()) or "(none)"
    text = (f"{entry.name}{_fmt_params(entry.params_dict())}: bounded={str(entry.bounded).lower()}"
            f"\nheart: {gens}\ncut: {entry.cut.spec()}")
    _emit(entry.to_json(), text, session, out)
    return 0


def _fmt_params(params: dict) -> str:
    if not params:
        return ""
    inner = ", ".join(f"{k}={sorted(v) if isinstance(v, frozenset) else v}"
                      for k, v in params.items())
    return f"({inner})"


def _window_from_args(args, session) -> Window:
    radius = args.window
    return Window(max_degree=radius, max_shift=2, max_length=3,
                  samples=getattr(args, "samples", 30), seed=session.seed)


def _report_exit(report: Report, session, out) -> int:
    _emit(report.to_json(), report.summary(), session, out)
    return 0 if report.ok else 1


def _cmd_check(args, session, out) -> int:
    if args.what == "stability":
        family = family_for(args.stability, session)
        window = _window_from_args(args, session)
        from .stability import validate_stability
        return _report_exit(validate_stability(family, window), session, out)
    if args.what == "cut":
        if not args.cut:
            raise TStabError("check cut needs --cut")
        cut, family = parse_cutspec(args.cut, session)
        return _report_exit(validate_cut(cut, family, radius=args.window), session, out)
    if args.what == "hn":
        if args.input and args.input != "-":
            with open(args.input, encoding="utf-8") as handle:
                data = json.load(handle)
        else:
            data = json.load(sys.stdin)
        obj, filt = filtration_from_json(data)
        return _report_exit(verify_hn(obj, filt, filt.family), session, out)
    raise TStabError(f"unknown check {args.what!r}")


def _cmd_compare(args, session, out) -> int:
    fine = parse_famspec(args.fine, session)
    weak = parse_famspec(args.weak, session)
    window = _window_from_args(args, session)
    verdict = is_finer(fine, weak, window)
    payload = {"finer": verdict.holds, "condition": verdict.condition,
               "witness": verdict.witness, "witnesses": list(verdict.witnesses)}
    if verdict.holds:
        text = "finer: true"
    else:
        text = f"finer: false ({verdict.condition}: {verdict.witness})"
    _emit(payload, text, session, out)
    return 0


# --- argument parsing -------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default=None)
    common.add_argument("--config", default=None, help="session config file")
    common.add_argument("--points", default=None, help="comma-separated point order")
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--k", type=int, default=None, help="twist of the exceptional pair")
    common.add_argument("--p", default=None, help="interleaving parameter (nat or inf)")

    parser = argparse.ArgumentParser(prog="tstab",
                                     description="stability data and t-structures on curves")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("normalize", parents=[common], help="normal form of an object")
    sp.add_argument("expr")
    sp.set_defaults(func=_cmd_normalize)

    sp = sub.add_parser("hom", parents=[common], help="graded Hom dimensions")
    sp.add_argument("x")
    sp.add_argument("y")
    sp.add_argument("--degree", type=int, default=None)
    sp.set_defaults(func=_cmd_hom)

    sp = sub.add_parser("hn", parents=[common], help="Harder-Narasimhan filtration")
    sp.add_argument("expr")
    sp.add_argument("--stability", required=True, choices=("std", "exc", "coarse", "ell"))
    sp.set_defaults(func=_cmd_hn)

    sp = sub.add_parser("truncate", parents=[common], help="truncation at a cut")
    sp.add_argument("expr")
    sp.add_argument("--cut", required=True)
    sp.set_defaults(func=_cmd_truncate)

    sp = sub.add_parser("heart", parents=[common], help="heart of a cut")
    sp.add_argument("--cut", required=True)
    sp.add_argument("--contains", default=None)
    sp.set_defaults(func=_cmd_heart)

    sp = sub.add_parser("catalog", parents=[common], help="named t-structures")
    sp.add_argument("name", nargs="?", default=None, choices=CATALOG_NAMES + (None,))
    sp.add_argument("--params", action="append", default=[])
    sp.add_argument("--diagram", action="store_true")
    sp.set_defaults(func=_cmd_catalog)

    sp = sub.add_parser("check", parents=[common], help="axiom and contract checks")
    sp.add_argument("what", choices=("stability", "cut", "hn"))
    sp.add_argument("--stability", default="std", choices=("std", "exc", "coarse", "ell"))
    sp.add_argument("--cut", default=None)
    sp.add_argument("--window", type=int, default=6)
    sp.add_argument("--samples", type=int, default=30)
    sp.add_argument("--input", default=None, help="filtration JSON (default: stdin)")
    sp.set_defaults(func=_cmd_check)

    sp = sub.add_parser("compare", parents=[common], help="refinement order of families")
    sp.add_argument("--fine", required=True)
    sp.add_argument("--weak", required=True)
    sp.add_argument("--window", type=int, default=6)
    sp.set_defaults(func=_cmd_compare)

    return parser


def run(argv: Sequence[str], out=None) -> int:
    """Execute one command line; returns the exit code."""
    out = out if out is not None else sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        session = make_session(args)
    except (TStabError, ValueError) as exc:
        print(json.dumps({"error": str(exc)}) if getattr(args, "format", None) == "json"
              else f"error: {exc}", file=out)
        return 1
    try:
        return args.func(args, session, out)
    except TStabError as exc:
        _emit({"error": str(exc)}, f"error: {exc}", session, out)
        return 1
    except ValueError as exc:
        _emit({"error": str(exc)}, f"error: {exc}", session, out)
        return 1


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
