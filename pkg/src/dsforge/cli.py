"""Command-line front end: JSON problem files in, verdicts out.

Exit codes: 0 decided yes, 1 decided no, 2 input error, 3 undecided
(search budget or field-order cap reached).
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from .classes import ClassSpec, ClassesError, JordanForm, class_from_jordan
from .convolution import ConvolutionError
from .linalg import LinalgError, Matrix
from .roots import DimVector, RootsError, Weights, classify, is_strict, p_form, q_form
from .scalar import ScalarError, parse_scalar
from .solver import (
    Problem,
    SolverError,
    construct_rigid,
    decide_closure_additive,
    decide_closure_multiplicative,
    decide_rigid,
    enumerate_admissible_decompositions,
    generic_xi,
    verify_solution,
)

EXIT_YES = 0
EXIT_NO = 1
EXIT_INPUT = 2
EXIT_UNDECIDED = 3


class InputError(Exception):
    pass


def _load_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            data = json.load(handle)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}") from exc
    if not isinstance(data, dict):
        raise InputError(f"{path}: top level must be a JSON object")
    return data


def _parse_scalar_checked(text, where: str):
    if not isinstance(text, str):
        raise InputError(f"{where}: expected a scalar string, got {text!r}")
    try:
        return parse_scalar(text)
    except ScalarError as exc:
        raise InputError(f"{where}: {exc}") from exc


def _parse_class(data: dict, where: str) -> ClassSpec:
    if not isinstance(data, dict):
        raise InputError(f"{where}: each class must be an object")
    try:
        if "jordan" in data:
            blocks = [
                (
                    _parse_scalar_checked(b.get("eig"), f"{where}.jordan"),
                    b.get("size"),
                    b.get("count"),
                )
                for b in data["jordan"]
            ]
            return class_from_jordan(JordanForm(blocks))
        eigenvalues = data.get("eigenvalues")
        dims = data.get("dims")
        if eigenvalues is None or dims is None:
            raise InputError(f"{where}: need 'eigenvalues' and 'dims' (or 'jordan')")
        row = [
            _parse_scalar_checked(x, f"{where}.eigenvalues[{idx}]")
            for idx, x in enumerate(eigenvalues)
        ]
        return ClassSpec(row, dims)
    except ClassesError as exc:
        raise InputError(f"{where}: {exc}") from exc


def _load_problem(path: str, want_mode: Optional[str] = None) -> Problem:
    data = _load_json(path)
    mode = data.get("mode", "multiplicative")
    if want_mode is not None and mode != want_mode:
        raise InputError(f"{path}: this command needs mode '{want_mode}', file says '{mode}'")
    classes_data = data.get("classes")
    if not isinstance(classes_data, list) or not classes_data:
        raise InputError(f"{path}: 'classes' must be a nonempty list")
    classes = [
        _parse_class(c, f"{path}: classes[{idx}]") for idx, c in enumerate(classes_data)
    ]
    try:
        return Problem(classes, mode=mode)
    except SolverError as exc:
        raise InputError(f"{path}: {exc}") from exc


def _parse_dim_vector(data, where: str) -> DimVector:
    if not isinstance(data, dict) or "a0" not in data or "arms" not in data:
        raise InputError(f"{where}: expected an object with 'a0' and 'arms'")
    try:
        return DimVector.from_json(data)
    except (RootsError, TypeError, ValueError) as exc:
        raise InputError(f"{where}: {exc}") from exc


def _parse_weights(data, where: str) -> Weights:
    try:
        return Weights(data)
    except (RootsError, TypeError, ValueError) as exc:
        raise InputError(f"{where}: {exc}") from exc


def _parse_matrix(data, where: str) -> Matrix:
    if not isinstance(data, list):
        raise InputError(f"{where}: expected a list of rows")
    rows = []
    for r, row in enumerate(data):
        if not isinstance(row, list):
            raise InputError(f"{where}: row {r} is not a list")
        rows.append(
            [_parse_scalar_checked(x, f"{where}[{r}][{c}]") for c, x in enumerate(row)]
        )
    try:
        return Matrix.from_rows(rows, cols=len(rows[0]) if rows else 0)
    except LinalgError as exc:
        raise InputError(f"{where}: {exc}") from exc


def _parse_box(text: str, w: Weights, where: str) -> DimVector:
    try:
        values = [int(x) for x in text.split(",")]
    except ValueError as exc:
        raise InputError(f"{where}: box entries must be integers") from exc
    expected = 1 + sum(wi - 1 for wi in w.w)
    if len(values) != expected:
        raise InputError(
            f"{where}: box needs {expected} components (centre then arm entries)"
        )
    arms = []
    idx = 1
    for wi in w.w:
        arms.append(values[idx : idx + wi - 1])
        idx += wi - 1
    return DimVector(values[0], arms)


def _emit(report: dict, args) -> None:
    text = json.dumps(report, sort_keys=True, ensure_ascii=False, indent=2)
    print(text)
    if getattr(args, "emit_certificate", None):
        with open(args.emit_certificate, "w", encoding="utf-8") as handle:
            handle.write(text + "\n")


def _cmd_decide_closure(args) -> int:
    p = _load_problem(args.input, "multiplicative")
    verdict = decide_closure_multiplicative(p)
    report = {"command": "decide-closure", **verdict.to_json()}
    if verdict.answer and args.limit > 1:
        search = enumerate_admissible_decompositions(p, "multiplicative", limit=args.limit)
        report["decompositions"] = [
            [b.to_json() for b in dec] for dec in search.decompositions
        ]
        report["search_limit_hit"] = search.limit_hit
    _emit(report, args)
    return EXIT_YES if verdict.answer else EXIT_NO


def _cmd_decide_additive(args) -> int:
    p = _load_problem(args.input, "additive")
    verdict = decide_closure_additive(p)
    report = {"command": "decide-additive", **verdict.to_json()}
    _emit(report, args)
    return EXIT_YES if verdict.answer else EXIT_NO


def _cmd_decide_rigid(args) -> int:
    p = _load_problem(args.input, "multiplicative")
    verdict = decide_rigid(p)
    report = {"command": "decide-rigid", **verdict.to_json()}
    _emit(report, args)
    return EXIT_YES if verdict.answer else EXIT_NO


def _cmd_solve_rigid(args) -> int:
    p = _load_problem(args.input, "multiplicative")
    verdict = decide_rigid(p)
    if not verdict.answer:
        _emit({"command": "solve-rigid", "answer": "no", "reason": verdict.reason}, args)
        return EXIT_NO
    rep = construct_rigid(p)
    report = {
        "command": "solve-rigid",
        "answer": "yes",
        "reason": verdict.reason,
        "matrices": rep.to_json()["matrices"],
    }
    _emit(report, args)
    return EXIT_YES


def _cmd_check_solution(args) -> int:
    data = _load_json(args.input)
    p = _load_problem(args.input)
    mats_data = data.get("matrices")
    if not isinstance(mats_data, list):
        raise InputError(f"{args.input}: 'matrices' must be a list")
    mats = [
        _parse_matrix(m, f"{args.input}: matrices[{idx}]")
        for idx, m in enumerate(mats_data)
    ]
    ok, report_lines = verify_solution(mats, p, mode=args.mode)
    report = {
        "command": "check-solution",
        "answer": "yes" if ok else "no",
        "mode": args.mode,
        "report": report_lines,
    }
    _emit(report, args)
    return EXIT_YES if ok else EXIT_NO


def _cmd_classify_root(args) -> int:
    data = _load_json(args.input)
    w = _parse_weights(data.get("weights"), f"{args.input}: weights")
    vec = _parse_dim_vector(data.get("vector"), f"{args.input}: vector")
    if not vec.conforms(w):
        raise InputError(f"{args.input}: vector shape does not match weights")
    try:
        cls = classify(w, vec)
    except RootsError as exc:
        raise InputError(f"{args.input}: {exc}") from exc
    report = {
        "command": "classify-root",
        "classification": cls.tag,
        "sign": cls.sign,
        "strict": is_strict(w, vec) if vec.is_nonnegative() else False,
        "in_fundamental_region": cls.in_fundamental_region,
        "q": q_form(w, vec),
        "p": p_form(w, vec),
    }
    _emit(report, args)
    return EXIT_YES if cls.is_root() else EXIT_NO


def _cmd_generic_xi(args) -> int:
    data = _load_json(args.input)
    w = _parse_weights(data.get("weights"), f"{args.input}: weights")
    vec = _parse_dim_vector(data.get("vector"), f"{args.input}: vector")
    if args.box is not None:
        box = _parse_box(args.box, w, "--box")
    elif "box" in data:
        box = _parse_dim_vector(data["box"], f"{args.input}: box")
    else:
        box = vec
    try:
        t, proof = generic_xi(w, vec, box, N_hint=data.get("N_hint", 0))
    except SolverError as exc:
        _emit({"command": "generic-xi", "answer": "undecided", "reason": str(exc)}, args)
        return EXIT_UNDECIDED
    from .scalar import format_scalar

    report = {
        "command": "generic-xi",
        "answer": "yes",
        "rows": [[format_scalar(x) for x in row] for row in t.rows],
        "proof": proof,
    }
    _emit(report, args)
    return EXIT_YES


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dsforge",
        description="Exact decision procedures for products of matrices "
        "in prescribed conjugacy class closures.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, func, needs_input: bool = True):
        cmd = sub.add_parser(name)
        if needs_input:
            cmd.add_argument("--input", required=True, help="JSON input file")
        cmd.add_argument(
            "--emit-certificate", metavar="FILE", help="also write the report to FILE"
        )
        cmd.set_defaults(func=func)
        return cmd

    closure = add("decide-closure", _cmd_decide_closure)
    closure.add_argument("--limit", type=int, default=1, help="max decompositions listed")
    add("decide-additive", _cmd_decide_additive)
    add("decide-rigid", _cmd_decide_rigid)
    add("solve-rigid", _cmd_solve_rigid)
    check = add("check-solution", _cmd_check_solution)
    check.add_argument("--mode", choices=["exact", "closure"], default="exact")
    add("classify-root", _cmd_classify_root)
    gx = add("generic-xi", _cmd_generic_xi)
    gx.add_argument("--box", help="comma-separated box bound (centre, then arm entries)")
    return parser


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(json.dumps({"error": str(exc)}, sort_keys=True, ensure_ascii=False))
        return EXIT_INPUT
    except (
        ClassesError,
        RootsError,
        ScalarError,
        LinalgError,
        ConvolutionError,
        SolverError,
        ZeroDivisionError,
    ) as exc:
        print(json.dumps({"error": str(exc)}, sort_keys=True, ensure_ascii=False))
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
