"""Command-line front end.

Exit status 0 on success, 1 on a domain failure (with one ``key=value``
reason line on stdout), 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path

from . import linalg as la
from .bench import loglog_slope, run_bench, write_csv
from .conjugacy import CspInstance, csp_solve
from .dlog import ReductionError, dlog_csp_solve
from .errors import MetacspError, NotInBError, SpecError, WordSyntaxError
from .linsolver import solve_in_B
from .membership import is_in_B
from .presentation import classify, load_spec
from .words import (SemidirectElem, collect, format_vector, from_semidirect, parse_vector,
                    parse_word, word_to_semidirect)


# lets positionals such as "-3/2,1" through; argparse only knows plain negative numbers
_NEGATIVE_VECTOR = re.compile(r"^-\d+(/\d+)?(,.*)?$")


class Failure(Exception):
    """Domain failure; the message is the machine-readable reason line."""


def _spec(path):
    try:
        return load_spec(path)
    except OSError as exc:
        raise Failure(f"invalid-spec reason={exc.strerror}") from None
    except SpecError as exc:
        raise Failure(f"invalid-spec reason={exc}") from None


def _elem(spec, text):
    return word_to_semidirect(parse_word(text), spec)


def _conjugator_line(h, spec) -> str:
    word = from_semidirect(h.as_element, spec)
    return f"conjugator={word} c={format_vector(h.c)} y={format_vector(h.y)}"


def cmd_validate(args):
    spec = _spec(args.spec)
    cls = classify(spec)
    return (f"valid n={spec.n} s={spec.s} d={spec.d} "
            f"d_parts={format_vector(spec.d_parts)} class={cls.kind}")


def cmd_collect(args):
    spec = _spec(args.spec)
    return str(collect(parse_word(args.word), spec))


def cmd_to_vec(args):
    spec = _spec(args.spec)
    return str(_elem(spec, args.word))


def cmd_from_vec(args):
    spec = _spec(args.spec)
    v = parse_vector(args.v)
    x = tuple(int(a) for a in parse_vector(args.x))
    if len(v) != spec.s or len(x) != spec.n:
        raise ValueError("vector sizes do not match the spec")
    try:
        return str(from_semidirect(SemidirectElem(v, x), spec))
    except NotInBError as exc:
        raise Failure(f"not-in-B reason={exc.reason}") from None


def cmd_member(args):
    spec = _spec(args.spec)
    verdict = is_in_B(parse_vector(args.v), spec)
    if not verdict:
        raise Failure(f"not-in-B reason={verdict.reason}")
    return f"in-B witness={verdict.witness}"


def cmd_alpha(args):
    return str(_spec(args.spec).alpha)


def cmd_solve(args):
    spec = _spec(args.spec)
    doc = json.loads(Path(args.N).read_text())
    N = doc["matrix"] if isinstance(doc, dict) else doc
    out = solve_in_B(la.mat(N), parse_vector(args.u), spec)
    if not out.solved:
        raise Failure(f"status={out.status}")
    return f"status=solved v={format_vector(out.solution)}"


def _instance(args):
    spec = _spec(args.spec)
    try:
        return spec, CspInstance(spec, _elem(spec, args.g), _elem(spec, args.g1))
    except MetacspError as exc:
        raise Failure(f"not-conjugate reason={exc}") from None


def cmd_csp(args):
    spec, inst = _instance(args)
    h = csp_solve(inst, max_len=args.max_len, workers=args.parallel)
    if not h:
        raise Failure(f"not-found max_len={args.max_len}")
    return _conjugator_line(h, spec)


def cmd_dlog(args):
    spec, inst = _instance(args)
    try:
        h = dlog_csp_solve(inst)
    except ReductionError as exc:
        raise Failure(f"no-reduction reason={exc}") from None
    if h is None:
        raise Failure("not-found reason=congruence-unsolvable")
    return _conjugator_line(h, spec)


def cmd_bench(args):
    spec = _spec(args.spec)
    lengths = [int(a) for a in args.lengths.split(",")]
    rows = run_bench(spec, lengths, args.trials, seed=args.seed, max_len=args.max_len,
                     workers=args.parallel)
    write_csv(rows, args.out)
    found = sum(r["conjugator_len"] >= 0 for r in rows)
    return f"rows={len(rows)} found={found} loglog_slope={loglog_slope(rows):.3f} out={args.out}"


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="metacsp", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, *positional):
        sp = sub.add_parser(name)
        sp._negative_number_matcher = _NEGATIVE_VECTOR
        for arg in positional:
            sp.add_argument(arg)
        sp.set_defaults(func=func)
        return sp

    add("validate", cmd_validate, "spec")
    add("collect", cmd_collect, "spec", "word")
    add("to-vec", cmd_to_vec, "spec", "word")
    add("from-vec", cmd_from_vec, "spec", "v", "x")
    add("member", cmd_member, "spec", "v")
    add("alpha", cmd_alpha, "spec")
    add("solve", cmd_solve, "spec", "N", "u")
    for name, func in (("csp", cmd_csp), ("dlog", cmd_dlog)):
        sp = add(name, func, "spec", "g", "g1")
        sp.add_argument("--max-len", type=int, default=20)
        sp.add_argument("--parallel", type=int, default=1)
    sp = add("bench", cmd_bench, "spec")
    sp.add_argument("--lengths", required=True, help="comma-separated lengths of x")
    sp.add_argument("--trials", type=int, default=5)
    sp.add_argument("--out", required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--max-len", type=int, default=3)
    sp.add_argument("--parallel", type=int, default=1)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        print(args.func(args))
    except Failure as exc:
        print(exc)
        return 1
    except (WordSyntaxError, ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return 2
    return 0


def main():
    sys.exit(run())
