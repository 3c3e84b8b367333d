"""Command-line surface: analyze, classify, generate, verify, oracle.

Exit codes: 0 success or locally-nilpotent, 1 refuted or invalid
certificate, 2 bad input, 3 unknown verdict, 4 unsupported length.
Identical flags and seed produce byte-identical output files.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .classify import classify, generate, verify_certificate
from .errors import DimensionError, ElemopError, FormatError, UnsupportedLengthError
from .exact import char_poly
from .nilpotency import ProbablyNilpotent, Refuted, all_x_nilpotent
from .operators import apply, gram, left_space, minimal_length, right_space, sum_bi_ai, v_space
from .serialize import (
    certificate_from_json,
    certificate_to_json,
    instance_digest,
    instance_from_json,
    instance_to_json,
    matrix_to_json,
    vector_to_json,
    verdict_from_json,
    verdict_to_json,
)
from .spaces import local_dimension

TOOLCHAIN = f"elemop {__version__}"

EXIT_OK = 0
EXIT_REFUTED = 1
EXIT_BAD_INPUT = 2
EXIT_UNKNOWN = 3
EXIT_UNSUPPORTED = 4


def _load_instance(path: str):
    try:
        raw = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc}") from None
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON ({exc})") from None
    phi, metadata = instance_from_json(data)
    return phi, metadata, data


def _write_json(path: str, data: dict):
    Path(path).write_text(json.dumps(data, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _matrix_text(m) -> str:
    return m.to_text()


def _cmd_analyze(args) -> int:
    phi, metadata, _ = _load_instance(args.path)
    n, reduced = minimal_length(phi)
    named = [("L", left_space(reduced)), ("R", right_space(reduced)), ("V", v_space(reduced))]
    s = sum_bi_ai(reduced)
    g = gram(reduced)
    if args.json:
        report = {
            "length": n,
            "spaces": {},
            "sum_bi_ai": matrix_to_json(s),
            "gram": [[matrix_to_json(g.block(i, j)) for j in range(g.n)] for i in range(g.n)],
            "metadata": metadata,
        }
        for label, space in named:
            ldim = local_dimension(space, seed=args.seed)
            report["spaces"][label] = {
                "dim": space.dim,
                "local_dim": ldim.value,
                "witness": vector_to_json(ldim.witness),
                "exact": ldim.exact,
            }
        print(json.dumps(report, indent=2, sort_keys=True))
        return EXIT_OK
    print(f"length: {n}")
    for label, space in named:
        ldim = local_dimension(space, seed=args.seed)
        witness = "[" + ", ".join(str(c) for c in ldim.witness) + "]"
        mode = "exact" if ldim.exact else f"sampled({ldim.trials_used})"
        print(f"{label}(phi): dim {space.dim}, local dim {ldim.value} ({mode}), witness {witness}")
    print("sum b_i a_i:" + (" zero" if s.is_zero else ""))
    if not s.is_zero:
        print(_matrix_text(s))
    print("gram blocks:")
    for i in range(g.n):
        for j in range(g.n):
            print(f"({i},{j}):")
            print(_matrix_text(g.block(i, j)))
    return EXIT_OK


def _cmd_classify(args) -> int:
    phi, _, data = _load_instance(args.path)
    n, _ = minimal_length(phi)
    if n > 3:
        print(f"unsupported: operator has length {n} > 3", file=sys.stderr)
        return EXIT_UNSUPPORTED
    verdict = classify(phi, trials=args.trials, seed=args.seed, budget=args.budget)
    digest = instance_digest(data)
    certificate = certificate_to_json(digest, verdict_to_json(verdict, phi.dim), TOOLCHAIN)
    out = args.out or (args.path + ".cert.json")
    _write_json(out, certificate)
    print(f"{verdict.status}" + (f" ({verdict.form})" if verdict.form else ""))
    print(f"certificate written to {out}")
    if verdict.status == "LQN":
        return EXIT_OK
    if verdict.status == "NotLQN":
        return EXIT_REFUTED
    return EXIT_UNKNOWN


def _cmd_generate(args) -> int:
    try:
        phi = generate(args.form, args.n, args.dim, args.seed)
    except DimensionError as exc:
        print(f"infeasible parameters: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    metadata = {
        "form": args.form,
        "n": args.n,
        "dim": args.dim,
        "seed": args.seed,
        "generator": TOOLCHAIN,
    }
    _write_json(args.out, instance_to_json(phi, metadata))
    print(f"instance written to {args.out}")
    return EXIT_OK


def _cmd_verify(args) -> int:
    phi, _, instance_data = _load_instance(args.instance)
    try:
        raw = json.loads(Path(args.certificate).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise FormatError(f"cannot read certificate: {exc}") from None
    digest, verdict_data, _ = certificate_from_json(raw)
    actual = instance_digest(instance_data)
    if digest != actual:
        print("verification failed: digest does not match the instance", file=sys.stderr)
        return EXIT_REFUTED
    verdict = verdict_from_json(verdict_data, phi.dim)
    check = verify_certificate(phi, verdict)
    if not check:
        print(f"verification failed: {check.failed}", file=sys.stderr)
        return EXIT_REFUTED
    print("certificate verified")
    return EXIT_OK


def _cmd_oracle(args) -> int:
    phi, _, _ = _load_instance(args.path)
    result = all_x_nilpotent(
        phi, trials=args.trials, seed=args.seed, height=args.height, mode="sampling"
    )
    if isinstance(result, Refuted):
        poly = char_poly(apply(phi, result.witness))
        if args.json:
            print(
                json.dumps(
                    {
                        "witness": matrix_to_json(result.witness),
                        "trial": result.trials_used,
                        "char_poly": [str(c) for c in poly.coefficients],
                    },
                    sort_keys=True,
                )
            )
        else:
            print(f"witness found at trial {result.trials_used}:")
            print(_matrix_text(result.witness))
            print(f"char poly of phi(witness): {poly}")
        return EXIT_REFUTED
    assert isinstance(result, ProbablyNilpotent)
    if args.json:
        print(json.dumps({"witness": None, "trials": result.trials}, sort_keys=True))
    else:
        print(f"no witness found in {result.trials} trials")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="elemop",
        description="Exact analysis and certification of elementary operators "
        "x -> sum a_i x b_i on square matrices.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="report length, coefficient spaces and block grid")
    p.add_argument("path")
    p.add_argument("--json", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("classify", help="classify and write a certificate")
    p.add_argument("path")
    p.add_argument("--out")
    p.add_argument("--budget", type=int, default=10_000)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("generate", help="write a seeded instance file")
    p.add_argument("--form", required=True, choices=["i", "ii", "iii", "remark45", "random"])
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("out")
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("verify", help="check a certificate against its instance")
    p.add_argument("instance")
    p.add_argument("certificate")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("oracle", help="pure sampling search for a refuting argument")
    p.add_argument("path")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--height", type=int, default=100)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_oracle)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UnsupportedLengthError as exc:
        print(f"unsupported: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except (FormatError, DimensionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except ElemopError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT


def entry_point():  # pragma: no cover
    sys.exit(main())
