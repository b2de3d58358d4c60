"""Command-line entry point: ``toricfam <command> ...``.

Every command prints one JSON report on stdout.  Exit status is 0 on
success, 1 on a mathematical failure (invalid fan, falsified check) and 2
when an input cannot be read or parsed.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from pathlib import Path

from .cohom import (
    BundleSpec,
    betti_oracle,
    family_presentation_bar,
    family_presentation_tilde,
    point_presentation,
)
from .cox import (
    RaySet,
    build_grading,
    equivalence_classes,
    global_section_points,
    restriction_diagram,
    section_monomials,
)
from .errors import FalsificationError, ToricError
from .fans import (
    Fan,
    is_complete,
    is_projective,
    is_regular,
    is_simplicial,
    primitive_collections,
    validate,
)
from .gring import hilbert_function
from .replicate import multiplicities_by_rep_ray, replicate_data, replicate_fan

FIXTURES = Path(__file__).parent / "fixtures"


class InputError(Exception):
    """Unreadable or malformed input; exit status 2."""


class MathFailure(Exception):
    """A check came out negative; exit status 1 with the payload attached."""

    def __init__(self, message: str, payload: dict | None = None):
        super().__init__(message)
        self.payload = payload or {}


def _resolve(path: str) -> Path:
    p = Path(path)
    if not p.exists() and not p.suffix and (FIXTURES / f"{path}.json").exists():
        return FIXTURES / f"{path}.json"
    return p


def _read_json(path: str, digests: dict) -> dict:
    p = _resolve(path)
    try:
        raw = p.read_bytes()
        data = json.loads(raw.decode("utf-8"))
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise InputError(f"{path}: {exc}") from exc
    if not isinstance(data, dict):
        raise InputError(f"{path}: expected a JSON object")
    digests[path] = hashlib.sha256(raw).hexdigest()
    return data


def _load_fan(path: str, digests: dict) -> Fan:
    data = _read_json(path, digests)
    try:
        return Fan.from_json(data)
    except ToricError as exc:
        raise InputError(f"{path}: {exc}") from exc


def _load_rays(path: str, digests: dict) -> RaySet:
    data = _read_json(path, digests)
    try:
        if "max_cones" in data:
            return RaySet.of_fan(Fan.from_json(data))
        return RaySet.from_json(data)
    except ToricError as exc:
        raise InputError(f"{path}: {exc}") from exc


def _sets(collections) -> list[list[int]]:
    return [sorted(c) for c in collections]


def _require_valid(f: Fan) -> None:
    v = validate(f)
    if v:
        raise MathFailure("fan is invalid", {
            "violations": [{"kind": x.kind, "cones": list(x.cones),
                            "message": x.message} for x in v]})


def cmd_check(args, digests):
    f = _load_fan(args.fan, digests)
    _require_valid(f)
    complete = is_complete(f)
    return {
        "valid": True,
        "complete": complete,
        "simplicial": is_simplicial(f),
        "regular": is_regular(f),
        "projective": is_projective(f) if complete else None,
    }


def cmd_classgroup(args, digests):
    xs = _load_rays(args.input, digests)
    g = build_grading(xs)
    return {
        "free_rank": g.free_rank,
        "invariant_factors": list(g.invariant_factors),
        "degrees": [list(d) for d in g.degrees],
        "classes": equivalence_classes(g),
    }


def cmd_primitives(args, digests):
    f = _load_fan(args.fan, digests)
    _require_valid(f)
    return {"primitive_collections": _sets(primitive_collections(f))}


def cmd_cohomology(args, digests):
    f = _load_fan(args.fan, digests)
    _require_valid(f)
    p = point_presentation(f)
    oracle = betti_oracle(f)
    cutoff = args.cutoff if args.cutoff is not None else 2 * f.rank + 2
    h = hilbert_function(p, cutoff).as_list()
    expected = (oracle + [0] * len(h))[:len(h)]
    payload = {
        "presentation": p.to_json(),
        "hilbert": h,
        "betti_oracle": oracle,
        "agrees": h == expected,
    }
    if h != expected:
        raise MathFailure("presentation disagrees with the Betti oracle", payload)
    return payload


def cmd_family(args, digests):
    f = _load_fan(args.fan, digests)
    _require_valid(f)
    xs = _load_rays(args.rayset, digests)
    bundle = _read_json(args.bundle, digests)
    try:
        spec = BundleSpec.from_json(bundle)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{args.bundle}: {exc}") from exc
    d = restriction_diagram(xs, f)
    if args.mode == "tilde":
        p = family_presentation_tilde(d, spec)
    else:
        p = family_presentation_bar(d, spec)
    return {
        "mode": args.mode,
        "presentation": p.to_json(),
        "hilbert": hilbert_function(p, args.cutoff).as_list(),
    }


def cmd_replicate(args, digests):
    f = _load_fan(args.fan, digests)
    _require_valid(f)
    mdata = _read_json(args.mult, digests)
    by_ray = mdata.get("by_class_rep_ray")
    if not isinstance(by_ray, dict):
        raise InputError(f"{args.mult}: missing object 'by_class_rep_ray'")
    xs = RaySet.of_fan(f)
    try:
        mult = multiplicities_by_rep_ray(build_grading(xs), by_ray)
    except ValueError as exc:
        raise InputError(f"{args.mult}: {exc}") from exc
    r = replicate_data(xs, mult)
    g = replicate_fan(f, mult, r)
    predicted = sorted(
        (sorted(i for i, (x, _) in enumerate(r.copies) if x in pi) for pi in primitive_collections(f)),
        key=lambda s: (len(s), s))
    actual = _sets(primitive_collections(g))
    payload = {
        "fan": g.to_json(),
        "copies": [list(c) for c in r.copies],
        "rank_M_prime": r.rank,
        "primitive_collections": actual,
        "predicted_primitive_collections": predicted,
    }
    if predicted != actual:
        raise FalsificationError(f"predicted primitive collections {predicted} differ from {actual}")
    if args.out:
        Path(args.out).write_text(json.dumps(g.to_json(), sort_keys=True) + "\n", encoding="utf-8")
    return payload


def cmd_sections(args, digests):
    f = _load_fan(args.fan, digests)
    _require_valid(f)
    if not 0 <= args.ray < f.n_rays:
        raise InputError(f"--ray {args.ray} is out of range")
    payload = {"ray": args.ray, "points": [list(m) for m in global_section_points(f, args.ray)]}
    if args.cone is not None:
        xs = _load_rays(args.rayset, digests) if args.rayset else RaySet.of_fan(f)
        xi = xs.vectors.index(f.rays[args.ray]) if f.rays[args.ray] in xs.vectors else None
        if xi is None:
            raise InputError(f"ray {args.ray} is missing from the ray set")
        mons = section_monomials(xs, f, xi, args.cone, args.bound)
        payload["cone"] = sorted(args.cone)
        payload["bound"] = args.bound
        payload["monomials"] = [list(u) for u in mons]
    return payload


def _cone(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"cone must be comma-separated ray indices: {text}") from exc


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="toricfam", description=__doc__.splitlines()[0])
    ap.add_argument("--timing", action="store_true", help="include wall-clock seconds in the report")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="validity, completeness, regularity, projectivity")
    p.add_argument("fan")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("classgroup", help="class group and degrees of a ray set or fan")
    p.add_argument("input")
    p.set_defaults(func=cmd_classgroup)

    p = sub.add_parser("primitives", help="primitive collections")
    p.add_argument("fan")
    p.set_defaults(func=cmd_primitives)

    p = sub.add_parser("cohomology", help="rational cohomology presentation of a complete simplicial fan")
    p.add_argument("fan")
    p.add_argument("--cutoff", type=int, default=None)
    p.set_defaults(func=cmd_cohomology)

    p = sub.add_parser("family", help="cohomology presentation of a toric family")
    p.add_argument("fan")
    p.add_argument("rayset")
    p.add_argument("bundle")
    p.add_argument("--mode", choices=("tilde", "bar"), default="tilde")
    p.add_argument("--cutoff", type=int, default=8)
    p.set_defaults(func=cmd_family)

    p = sub.add_parser("replicate", help="replicate rays class by class")
    p.add_argument("fan")
    p.add_argument("mult")
    p.add_argument("--out", default=None, help="write the new fan JSON here")
    p.set_defaults(func=cmd_replicate)

    p = sub.add_parser("sections", help="lattice points of a ray divisor and local section monomials")
    p.add_argument("fan")
    p.add_argument("--ray", type=int, required=True)
    p.add_argument("--cone", type=_cone, default=None)
    p.add_argument("--bound", type=int, default=2)
    p.add_argument("--rayset", default=None, help="ray set containing the fan rays (defaults to the fan's own)")
    p.set_defaults(func=cmd_sections)
    return ap


def run(argv: list[str] | None = None) -> tuple[int, dict]:
    args = build_parser().parse_args(argv)
    digests: dict = {}
    report = {"command": args.command, "argv": list(argv if argv is not None else sys.argv[1:])}
    start = time.perf_counter()
    status = 0
    falsifications = []
    try:
        report["result"] = args.func(args, digests)
    except InputError as exc:
        status = 2
        report["error"] = str(exc)
    except FalsificationError as exc:
        status = 1
        falsifications.append(str(exc))
        report["error"] = str(exc)
    except MathFailure as exc:
        status = 1
        report["error"] = str(exc)
        report["result"] = exc.payload
    except ToricError as exc:
        status = 1
        report["error"] = f"{type(exc).__name__}: {exc}"
    report["inputs"] = digests
    report["falsifications"] = falsifications
    if args.timing:
        report["seconds"] = round(time.perf_counter() - start, 6)
    return status, report


def main(argv: list[str] | None = None) -> int:
    status, report = run(argv)
    sys.stdout.write(json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n")
    return status


if __name__ == "__main__":
    sys.exit(main())
