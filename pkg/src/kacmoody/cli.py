"""``km``: run verification suites, compute single operations, fit tame constants, write reports.

Exit codes: 0 pass, 1 verified failure (with a witness in the output), 2 usage or schema error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import sys
from pathlib import Path

import jsonschema

from .affine import AffineKacMoody
from .geometry import DegeneratePlaneError, curvature, sectional_curvature
from .group import (
    BranchCutError,
    coset_canonicalize,
    euclidean_stabilizer,
    geodesic,
    group_exp,
    group_from_json,
    group_log,
)
from .heisenberg import (
    MixedTypeError,
    NotClosedError,
    classify_real_form,
    compact_real_form,
    heisenberg_real_form,
    mixed_span,
    noncompact_real_form,
)
from .scalar import scalar_to_json
from .suites import SUITES, SuiteConfig, run_suite
from .tame import tame_fit

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
OPS = ("bracket", "metric", "curvature", "sectional", "classify", "exp", "log", "geodesic", "canonicalize")


class UsageError(Exception):
    def __init__(self, message: str, pointer: str = ""):
        super().__init__(message)
        self.pointer = pointer


# -- schemas -------------------------------------------------------------------------

_SCALAR = {
    "oneOf": [
        {"type": "number"},
        {"type": "string", "pattern": r"^[-+0-9./ ie]+$"},
        {"type": "array", "minItems": 2, "maxItems": 2,
         "items": {"oneOf": [{"type": "number"}, {"type": "string", "pattern": r"^[-+0-9./e]+$"}]}},
    ]
}
_POLY = {"type": "object", "patternProperties": {r"^-?[0-9]+$": {"$ref": "#/$defs/scalar"}},
         "additionalProperties": False}
_ELEMENT = {"type": "object", "properties": {"loop": {"type": "array", "items": {"$ref": "#/$defs/poly"}},
                                             "c": {"$ref": "#/$defs/scalar"}, "d": {"$ref": "#/$defs/scalar"}},
            "additionalProperties": False}
_GROUP = {"type": "object", "properties": {"q": {"$ref": "#/$defs/scalar"},
                                           "lam": {"type": "array", "items": {"$ref": "#/$defs/poly"}},
                                           "central": {"$ref": "#/$defs/scalar"}},
          "additionalProperties": False}
_DEFS = {"scalar": _SCALAR, "poly": _POLY, "element": _ELEMENT, "group": _GROUP}
_COMMON = {"base": {"type": "string"}, "backend": {"enum": ["exact", "float"]}}


def _schema(required: dict, optional: dict | None = None) -> dict:
    props = dict(_COMMON)
    props.update(required)
    props.update(optional or {})
    return {"type": "object", "$defs": _DEFS, "properties": props, "required": sorted(required),
            "additionalProperties": False}


_EL = {"$ref": "#/$defs/element"}
SCHEMAS = {
    "bracket": _schema({"X": _EL, "Y": _EL}),
    "metric": _schema({"X": _EL, "Y": _EL}),
    "curvature": _schema({"g": _EL, "h": _EL, "k": _EL}),
    "sectional": _schema({"g": _EL, "h": _EL}),
    "classify": _schema({}, {
        "realform": {"enum": ["heisenberg:one", "heisenberg:i", "compact", "noncompact", "mixed"]},
        "basis": {"type": "array", "items": _EL, "minItems": 1},
        "window": {"type": "integer", "minimum": 1},
    }),
    "exp": _schema({"X": _EL}),
    "log": _schema({"g": {"$ref": "#/$defs/group"}}),
    "geodesic": _schema({"X": _EL, "t": {"type": "number"}}),
    "canonicalize": _schema({"g": {"$ref": "#/$defs/group"}, "window": {"type": "integer", "minimum": 1}},
                            {"case": {"enum": ["real", "imaginary"]}}),
}


def _pointer(path) -> str:
    return "".join("/" + str(p).replace("~", "~0").replace("/", "~1") for p in path)


def validate_input(op: str, data) -> None:
    v = jsonschema.Draft202012Validator(SCHEMAS[op])
    errors = sorted(v.iter_errors(data), key=lambda e: (len(e.absolute_path), list(map(str, e.absolute_path))))
    if errors:
        e = max(errors, key=lambda e: len(e.absolute_path))
        raise UsageError(e.message, _pointer(e.absolute_path))


def input_hash(data) -> str:
    return hashlib.sha256(json.dumps(data, sort_keys=True, separators=(",", ":")).encode()).hexdigest()


# -- compute -------------------------------------------------------------------------


def _algebra(data) -> AffineKacMoody:
    try:
        return AffineKacMoody(data.get("base", "abelian:1"), data.get("backend", "exact"))
    except ValueError as exc:
        raise UsageError(str(exc), "/base") from None


def _element(km: AffineKacMoody, data: dict, key: str):
    obj = data[key]
    loop = obj.get("loop")
    if loop is not None and len(loop) != km.dim:
        raise UsageError(f"loop has {len(loop)} components, base algebra has {km.dim}", f"/{key}/loop")
    if loop is None:
        obj = dict(obj, loop=[{}] * km.dim)
    try:
        return km.from_json(obj)
    except (ValueError, TypeError) as exc:
        raise UsageError(str(exc), f"/{key}") from None


def _group_el(km, data, key):
    obj = data[key]
    lam = obj.get("lam")
    if lam is not None and len(lam) != km.dim:
        raise UsageError(f"lam has {len(lam)} components, base algebra has {km.dim}", f"/{key}/lam")
    try:
        return group_from_json(km, obj)
    except (ValueError, TypeError) as exc:
        raise UsageError(str(exc), f"/{key}") from None


def _need_euclidean(km, pointer="/base"):
    if km.classify().kind != "euclidean":
        raise UsageError(f"operation needs an abelian base algebra, got {km.classify()}", pointer)


def compute(op: str, data: dict) -> tuple[int, dict]:
    """Run one operation; returns ``(exit_code, result_json)``."""
    if op not in OPS:
        raise UsageError(f"unknown op {op!r}; choose from {', '.join(OPS)}")
    validate_input(op, data)
    km = _algebra(data)
    code = EXIT_OK
    if op == "bracket":
        result = km.bracket(_element(km, data, "X"), _element(km, data, "Y")).to_json()
    elif op == "metric":
        result = scalar_to_json(km.metric(_element(km, data, "X"), _element(km, data, "Y")))
    elif op == "curvature":
        result = curvature(km, *(_element(km, data, k) for k in ("g", "h", "k"))).to_json()
    elif op == "sectional":
        try:
            result = scalar_to_json(sectional_curvature(km, _element(km, data, "g"), _element(km, data, "h")))
        except DegeneratePlaneError as exc:
            code, result = EXIT_FAIL, {"error": "degenerate plane", "witness": str(exc)}
    elif op == "classify":
        N = data.get("window", 4)
        if "basis" in data:
            basis = [_element(km, {"b": b}, "b") for b in data["basis"]]
            N = data.get("window") or None
        else:
            form = data.get("realform", "heisenberg:i")
            if form.startswith("heisenberg"):
                _need_euclidean(km)
                basis = heisenberg_real_form(km, N, form.split(":")[1])
            elif form == "compact":
                basis = compact_real_form(km, N)
            elif form == "noncompact":
                basis = noncompact_real_form(km, N)
            else:
                basis = mixed_span(km)
        try:
            result = classify_real_form(km, basis, N)
        except (MixedTypeError, NotClosedError) as exc:
            code, result = EXIT_FAIL, {"error": type(exc).__name__, "witness": str(exc)}
    elif op in ("exp", "geodesic"):
        _need_euclidean(km)
        X = _element(km, data, "X")
        try:
            g = group_exp(km, X) if op == "exp" else geodesic(km, X, data["t"])
        except ValueError as exc:
            raise UsageError(str(exc), "/X/d") from None
        result = g.to_json()
    elif op == "log":
        _need_euclidean(km)
        g = _group_el(km, data, "g")
        try:
            result = group_log(g).to_json()
        except BranchCutError as exc:
            code, result = EXIT_FAIL, {"error": "branch cut", "witness": str(exc)}
        except ValueError as exc:
            raise UsageError(str(exc), "/g/q") from None
    else:  # canonicalize
        _need_euclidean(km)
        g = _group_el(km, data, "g")
        stab = euclidean_stabilizer(km, data["window"], data.get("case", "real"))
        try:
            result = coset_canonicalize(g, stab).to_json()
        except ValueError as exc:
            raise UsageError(str(exc), "/window") from None
    return code, {"op": op, "input_sha256": input_hash(data), "result": result}


# -- argument parsing ------------------------------------------------------------------


def _n_range(text: str) -> list[int]:
    try:
        if ".." in text:
            a, b = text.split("..")
            return list(range(int(a), int(b) + 1))
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a range like 0..4 or a list like 0,1,2, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="km", description="Affine Kac-Moody algebra checks and computations.")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", choices=SUITES)
    v.add_argument("--seed", type=int, required=True)
    v.add_argument("--base", default="abelian:1")
    v.add_argument("--window", type=int, default=6)
    v.add_argument("--trials", type=int, default=100)
    v.add_argument("--backend", choices=["exact", "float"], default="exact")
    v.add_argument("--realform", choices=["compact", "noncompact"], default="compact")
    v.add_argument("--timing", action="store_true", help="include wall time in the JSON report")
    v.add_argument("--out", type=Path)

    c = sub.add_parser("compute", help="run one operation on JSON input")
    c.add_argument("op", choices=OPS)
    src = c.add_mutually_exclusive_group()
    src.add_argument("--input", type=Path, help="JSON file ('-' for stdin)")
    src.add_argument("--json", help="JSON string")
    c.add_argument("--base", help="overrides the input's base")
    c.add_argument("--backend", choices=["exact", "float"], help="overrides the input's backend")
    c.add_argument("--out", type=Path)

    t = sub.add_parser("tame-fit", help="fit tame constants for a linear map")
    t.add_argument("--map", required=True, help="zero | d-action | multiply:<poly> | ad:<i=poly,...>")
    t.add_argument("--base", default="abelian:1")
    t.add_argument("--window", type=int, default=8)
    t.add_argument("--n", type=_n_range, default=list(range(5)))
    t.add_argument("--trials", type=int, default=500)
    t.add_argument("--seed", type=int, required=True)
    t.add_argument("--out", type=Path)

    r = sub.add_parser("report", help="write CSV tables and PNG figures")
    r.add_argument("--out", type=Path, required=True)
    r.add_argument("--seed", type=int, required=True)
    r.add_argument("--window", type=int, default=5)
    r.add_argument("--trials", type=int, default=200)
    return p


def _emit(obj, out: Path | None):
    text = json.dumps(obj, sort_keys=True, indent=2, default=str)
    if out:
        Path(out).write_text(text + "\n")
    print(text)


def _usage(message: str, pointer: str = "") -> int:
    err = {"error": "usage", "message": message}
    if pointer or pointer == "":
        err["pointer"] = pointer
    print(json.dumps(err, sort_keys=True), file=sys.stderr)
    return EXIT_USAGE


def _setup_logging():
    level = os.environ.get("KM_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")


def main(argv: list[str] | None = None) -> int:
    _setup_logging()
    args = build_parser().parse_args(argv)
    if args.command == "verify":
        if args.window < 1 or args.trials < 0:
            return _usage("window must be >= 1 and trials >= 0")
        cfg = SuiteConfig(seed=args.seed, base=args.base, window=args.window, trials=args.trials,
                          backend=args.backend, realform=args.realform)
        try:
            rep = run_suite(args.suite, cfg)
        except (ValueError, KeyError) as exc:
            return _usage(str(exc))
        _emit(rep.to_json(timing=args.timing), args.out)
        return EXIT_OK if rep.passed else EXIT_FAIL
    if args.command == "compute":
        try:
            if args.json is not None:
                raw = args.json
            elif args.input is None or str(args.input) == "-":
                raw = sys.stdin.read()
            else:
                raw = args.input.read_text()
            data = json.loads(raw)
        except (OSError, json.JSONDecodeError) as exc:
            return _usage(f"cannot read JSON input: {exc}")
        if not isinstance(data, dict):
            return _usage("input must be a JSON object", "")
        if args.base:
            data["base"] = args.base
        if args.backend:
            data["backend"] = args.backend
        try:
            code, result = compute(args.op, data)
        except UsageError as exc:
            return _usage(str(exc), exc.pointer)
        _emit(result, args.out)
        return code
    if args.command == "tame-fit":
        try:
            km = AffineKacMoody(args.base, "float")
            fit = tame_fit(km, args.map, args.window, args.n, args.trials, args.seed)
        except ValueError as exc:
            return _usage(str(exc), "/map")
        _emit(fit.to_json(), args.out)
        return EXIT_OK if fit.certified else EXIT_FAIL
    from .report import build_report

    files = build_report(args.out, args.seed, args.window, args.trials)
    _emit({"files": files}, None)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
