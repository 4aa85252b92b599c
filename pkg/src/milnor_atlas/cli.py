"""Command-line front end.

Commands:
    analyze   inspect one polynomial: terms, detected weight structure
    newton    Newton polygon data, optionally restricted to one weight
    singular  search a sphere for singular points of the pair map
    classify  full verdict chain for one point of one pair
    verify    run a named self-check suite

Polynomial files hold one polynomial each: lines starting with ``#`` are
comments, and exactly one of them must read ``# n = <count>`` to declare the
variable count.  The remaining lines are joined and parsed in the grammar of
:mod:`milnor_atlas.mixedpoly` (variables ``z1 .. zn``, conjugates ``~z1``,
imaginary unit ``i`` inside parenthesized coefficients).

Reports are JSON with a ``schema_version`` field, written to stdout or
``--out``.  Key order is sorted and no timestamps are embedded, so a repeated
run with the same inputs and seed is byte-identical.

Exit codes: 0 success; 1 verification failure (a suite failed, a fold verdict
disagreed with its oracle, or a numerical subroutine gave up); 2 usage or
input error, including violated mathematical preconditions.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from .criteria import (
    MfpmPair,
    SpherePoint,
    mfpm_singular_general,
    mfpm_singular_polar,
)
from .errors import (
    AtlasError,
    HypothesisError,
    InputError,
    NumericalError,
    ParseError,
)
from .fold import classify_fold, goodness_witness
from .mixedpoly import (
    MixedPolynomial,
    WeightKind,
    detect_weights,
    euler_residual,
    parse,
    to_text,
)
from .newton import degeneracy_witness, face_and_degree, face_function, newton_data
from .randgen import random_sphere_point, rng_for
from .search import SearchConfig, find_singular_points
from .suites import run_suite

SCHEMA_VERSION = 1

_HEADER_RE = re.compile(r"#\s*n\s*=\s*(\d+)\s*$")


# ------------------------------------------------------------------ input --


def read_polynomial_file(path: str) -> MixedPolynomial:
    """Parse one polynomial file (see the module docstring for the format)."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}")
    n: int | None = None
    body: list[str] = []
    for line in text.splitlines():
        stripped = line.strip()
        if stripped.startswith("#"):
            m = _HEADER_RE.match(stripped)
            if m:
                if n is not None:
                    raise InputError(f"{path}: more than one '# n = <count>' header")
                n = int(m.group(1))
            continue
        if stripped:
            body.append(stripped)
    if n is None:
        raise InputError(f"{path}: missing '# n = <count>' header line")
    if n < 1:
        raise InputError(f"{path}: variable count must be at least 1")
    source = " ".join(body)
    if not source:
        raise ParseError(f"{path}: no polynomial text", 0)
    return parse(source, n)


def parse_point(text: str, n: int) -> np.ndarray:
    """Comma-separated complex vector; accepts 'i' or 'j' as the imaginary unit."""
    parts = [part.strip() for part in text.split(",")]
    if len(parts) != n:
        raise InputError(f"point has {len(parts)} components, polynomials have {n} variables")
    values = []
    for part in parts:
        if not part:
            raise InputError("empty component in point")
        try:
            values.append(complex(part.replace("i", "j").replace(" ", "")))
        except ValueError:
            raise InputError(f"cannot parse point component {part!r}")
    return np.asarray(values, dtype=complex)


def parse_weight(text: str, n: int) -> tuple[int, ...]:
    parts = [part.strip() for part in text.split(",")]
    if len(parts) != n:
        raise InputError(f"weight has {len(parts)} components, polynomial has {n} variables")
    try:
        w = tuple(int(part) for part in parts)
    except ValueError:
        raise InputError(f"weight components must be integers, got {text!r}")
    return w


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise InputError(f"cannot read config {path}: {exc}")
    try:
        cfg = tomllib.loads(raw.decode("utf-8"))
    except (tomllib.TOMLDecodeError, UnicodeDecodeError) as exc:
        raise InputError(f"bad config file {path}: {exc}")
    return cfg


def _setting(args: argparse.Namespace, cfg: dict, name: str, default, cast):
    """Effective value of one setting: flag beats config file beats default."""
    flag = getattr(args, name, None)
    if flag is not None:
        return flag
    if name in cfg:
        try:
            return cast(cfg[name])
        except (TypeError, ValueError):
            raise InputError(f"config key {name!r} has invalid value {cfg[name]!r}")
    return default


# ----------------------------------------------------------------- output --


def _emit(report: dict, out: str | None) -> None:
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _input_block(path: str, f: MixedPolynomial) -> dict:
    return {"file": path, "n": f.n, "polynomial": to_text(f)}


def _pair_block(pair: MfpmPair) -> dict:
    block: dict = {"polar": pair.has_polar}
    if pair.has_polar:
        block["wf"] = pair.wf.as_dict()
        block["wg"] = pair.wg.as_dict()
        block["s"] = {"num": pair.s.numerator, "den": pair.s.denominator}
    return block


# --------------------------------------------------------------- commands --


def cmd_analyze(args: argparse.Namespace, cfg: dict) -> tuple[dict, int]:
    f = read_polynomial_file(args.poly)
    radial = detect_weights(f, WeightKind.RADIAL)
    polar = detect_weights(f, WeightKind.POLAR)
    polar_entries = []
    for wt in polar:
        entry = wt.as_dict()
        if not wt.degree_positive:
            entry["note"] = "polar degree not positive"
        polar_entries.append(entry)

    report = {
        "schema_version": SCHEMA_VERSION,
        "command": "analyze",
        "input": _input_block(args.poly, f),
        "terms": [
            {"coeff": [t.coeff.real, t.coeff.imag], "z": list(t.nu), "zbar": list(t.mu)}
            for t in f.terms
        ],
        "holomorphic": f.is_holomorphic,
        "radial_weights": [wt.as_dict() for wt in radial],
        "polar_weights": polar_entries,
        "euler_residual": None,
    }
    if f.is_holomorphic:
        usable = [wt for wt in radial if wt.strictly_positive and wt.degree_positive]
        if usable:
            rng = rng_for(7, 1)
            worst = max(
                euler_residual(f, usable[0], random_sphere_point(rng, f.n)) for _ in range(5)
            )
            report["euler_residual"] = float(worst)
            report["euler_weight"] = usable[0].as_dict()
    return report, 0


def cmd_newton(args: argparse.Namespace, cfg: dict) -> tuple[dict, int]:
    f = read_polynomial_file(args.poly)
    data = newton_data(f)
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": "newton",
        "input": _input_block(args.poly, f),
        "newton": data.as_dict(),
    }
    if args.weight is not None:
        w = parse_weight(args.weight, f.n)
        if any(x <= 0 for x in w):
            raise InputError(f"weight must be strictly positive, got {w}")
        face, degree = face_and_degree(f, w)
        fw = face_function(f, w)
        seed = _setting(args, cfg, "seed", 0, int)
        witness = degeneracy_witness(f, w, seed=seed)
        report["weight"] = {
            "w": list(w),
            "face": face.as_dict(),
            "degree": degree,
            "face_function": to_text(fw),
            "witness": None if witness is None else witness.as_dict(),
            "witness_note": (
                "no near-critical point found on the open torus; not a proof of nondegeneracy"
                if witness is None
                else "near-critical point of the face function found"
            ),
        }
    return report, 0


def _load_pair(fpath: str, gpath: str) -> tuple[MixedPolynomial, MixedPolynomial, MfpmPair]:
    f = read_polynomial_file(fpath)
    g = read_polynomial_file(gpath)
    if f.n != g.n:
        raise InputError(f"variable counts differ: {fpath} has n={f.n}, {gpath} has n={g.n}")
    return f, g, MfpmPair.detect(f, g)


def cmd_singular(args: argparse.Namespace, cfg: dict) -> tuple[dict, int]:
    f, g, pair = _load_pair(args.f_poly, args.g_poly)
    radius = _setting(args, cfg, "radius", 1.0, float)
    config = SearchConfig(
        starts=_setting(args, cfg, "starts", 32, int),
        max_iters=_setting(args, cfg, "max_iters", 200, int),
        tol_singular=_setting(args, cfg, "tol_singular", 1e-10, float),
        dedup_distance=_setting(args, cfg, "dedup_distance", 1e-4, float),
        seed=_setting(args, cfg, "seed", 0, int),
    )
    sample = find_singular_points(pair, radius, config)
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": "singular",
        "inputs": {"f": _input_block(args.f_poly, f), "g": _input_block(args.g_poly, g)},
        "pair": _pair_block(pair),
        "result": sample.as_dict(),
    }
    return report, 0


def cmd_classify(args: argparse.Namespace, cfg: dict) -> tuple[dict, int]:
    f, g, pair = _load_pair(args.f_poly, args.g_poly)
    radius = _setting(args, cfg, "radius", 1.0, float)
    point = parse_point(args.point, f.n)
    sp = SpherePoint(point, radius)
    rank_tol = _setting(args, cfg, "rank_tol", 1e-8, float)
    eig_tol = _setting(args, cfg, "eig_tol", 1e-6, float)
    seed = _setting(args, cfg, "seed", 0, int)

    report: dict = {
        "schema_version": SCHEMA_VERSION,
        "command": "classify",
        "inputs": {"f": _input_block(args.f_poly, f), "g": _input_block(args.g_poly, g)},
        "pair": _pair_block(pair),
        "point": sp.as_dict(),
        "tolerances": {"rank_tol": rank_tol, "eig_tol": eig_tol},
        "general_test": mfpm_singular_general(pair, sp, tol=rank_tol).as_dict(),
    }
    if not pair.has_polar:
        report["fold"] = {"available": False, "reason": "no-common-polar-weights"}
        return report, 0

    report["polar_test"] = mfpm_singular_polar(pair, sp, tol=rank_tol).as_dict()

    wit_f = goodness_witness(f, seed=seed)
    wit_g = goodness_witness(g, seed=seed)
    goodness = {
        "f": None if wit_f is None else [[z.real, z.imag] for z in wit_f],
        "g": None if wit_g is None else [[z.real, z.imag] for z in wit_g],
    }
    report["goodness"] = goodness
    if wit_f is not None or wit_g is not None:
        which = "f" if wit_f is not None else "g"
        exc = HypothesisError(
            "goodness-witness-found",
            f"the phase map of {which} has a singular point off its zero set, "
            "so the fold criterion's hypotheses fail",
        )
        exc.detail = goodness
        raise exc
    label = "witnessed-regular"

    fold = classify_fold(pair, sp.p, tol=eig_tol, rank_tol=rank_tol, oracle=True, goodness=label)
    report["fold"] = fold.as_dict()
    code = 0 if fold.oracle_agreement in (True, None) else 1
    return report, code


def cmd_verify(args: argparse.Namespace, cfg: dict) -> tuple[dict, int]:
    cases = _setting(args, cfg, "cases", None, int)
    seed = _setting(args, cfg, "seed", 0, int)
    result = run_suite(args.suite, cases=cases, seed=seed)
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": "verify",
        "suite": args.suite,
        "seed": seed,
        "result": result.as_dict(),
    }
    return report, 0 if result.passed else 1


# ------------------------------------------------------------ entry point --


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="TOML file with default settings")
    common.add_argument("--out", help="write the JSON report here instead of stdout")
    parser = argparse.ArgumentParser(
        prog="milnor-atlas",
        description="Singularity and fold analysis for pairs of mixed polynomials on spheres.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="inspect one polynomial", parents=[common])
    p.add_argument("poly", help="polynomial file")
    p.set_defaults(handler=cmd_analyze)

    p = sub.add_parser("newton", parents=[common], help="Newton polygon of one polynomial")
    p.add_argument("poly", help="polynomial file")
    p.add_argument("--weight", help="strictly positive integer weights, e.g. 1,2")
    p.add_argument("--seed", type=int, help="seed for the degeneracy witness search")
    p.set_defaults(handler=cmd_newton)

    p = sub.add_parser("singular", parents=[common], help="search a sphere for singular points of the pair map")
    p.add_argument("f_poly", help="first polynomial file")
    p.add_argument("g_poly", help="second polynomial file")
    p.add_argument("--radius", type=float, help="sphere radius (default 1.0)")
    p.add_argument("--starts", type=int, help="number of descent starts (default 32)")
    p.add_argument("--seed", type=int, help="random seed (default 0)")
    p.add_argument("--max-iters", dest="max_iters", type=int, help="iterations per descent stage")
    p.add_argument("--tol-singular", dest="tol_singular", type=float, help="acceptance tolerance")
    p.add_argument(
        "--dedup-distance", dest="dedup_distance", type=float, help="orbit merge distance"
    )
    p.set_defaults(handler=cmd_singular)

    p = sub.add_parser("classify", parents=[common], help="classify one point of one pair")
    p.add_argument("f_poly", help="first polynomial file")
    p.add_argument("g_poly", help="second polynomial file")
    p.add_argument("--point", required=True, help="comma-separated complex vector, e.g. 0,1 or 0.5+0.5i,0")
    p.add_argument("--radius", type=float, help="sphere radius (default 1.0)")
    p.add_argument("--rank-tol", dest="rank_tol", type=float, help="dependence tolerance")
    p.add_argument("--eig-tol", dest="eig_tol", type=float, help="relative eigenvalue threshold")
    p.add_argument("--seed", type=int, help="seed for the goodness witness search")
    p.set_defaults(handler=cmd_classify)

    p = sub.add_parser("verify", parents=[common], help="run a named self-check suite")
    p.add_argument("--suite", required=True, help="suite name (see docs)")
    p.add_argument("--cases", type=int, help="case count override")
    p.add_argument("--seed", type=int, help="random seed (default 0)")
    p.set_defaults(handler=cmd_verify)
    return parser


def _error_report(command: str, exc: AtlasError) -> dict:
    reason = getattr(exc, "reason", None)
    if reason is None:
        if isinstance(exc, ParseError):
            reason = "parse-error"
        elif isinstance(exc, InputError):
            reason = "bad-input"
        elif isinstance(exc, NumericalError):
            reason = "numerical-failure"
        else:
            reason = "error"
    block = {"reason": reason, "message": str(exc)}
    position = getattr(exc, "position", None)
    if position is not None:
        block["position"] = position
    detail = getattr(exc, "detail", None)
    if detail is not None:
        block["detail"] = detail
    return {"schema_version": SCHEMA_VERSION, "command": command, "error": block}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _load_config(args.config)
        report, code = args.handler(args, cfg)
    except (InputError, HypothesisError) as exc:
        _emit(_error_report(args.command, exc), args.out)
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        _emit(_error_report(args.command, exc), args.out)
        print(f"error: {exc}", file=sys.stderr)
        return 1
    _emit(report, args.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
