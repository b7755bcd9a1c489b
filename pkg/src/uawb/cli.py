"""Command-line entry point: ``uawb <verb> [flags]``.

Every verb prints a human-readable report followed by a JSON section with
sorted keys.  Exit status: 0 all checks pass, 1 a witness or falsification
was found, 2 usage error or refusal.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .algebra import FiniteAlgebra
from .commutator import center, commutator
from .config import Limits
from .congruence import congruence_lattice, density_witness, fsi_witness, is_modular, is_si, principal_congruence
from .corpus import BUILTIN_TERMS, corpus_entry, corpus_names
from .decompose import decompose_absolute_retract, enumerate_direct_decompositions, split_center_abelian
from .dot import export_dot
from .errors import PreconditionError, RefusalError, SizeLimitError, VerificationFailure
from .gumm import build_cube_extension
from .io import AlgebraFormatError, read_algebra
from .partition import parse_partition
from .terms import TermError, check_term, parse_term
from .verify import CHECKS, format_report, run_suite

MACHINE_HEADER = "--- machine-readable ---"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="uawb", description="Finite universal-algebra workbench.")
    common = _Parser(add_help=False)
    common.add_argument("--alg", help="algebra file, or the name of a builtin algebra")
    common.add_argument("--max-size", type=int, default=None,
                        help="refuse algebras with more elements than this (default 1024)")
    common.add_argument("--seed", type=int, default=None,
                        help="shuffle evaluation order; results do not depend on it")
    common.add_argument("--term", help="difference term: a builtin name or term text")
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    con = sub.add_parser("con", parents=[common], help="list the congruence lattice")
    con.add_argument("--dot", metavar="FILE", help="also write the Hasse diagram as DOT")
    comm = sub.add_parser("comm", parents=[common], help="commutator of two congruences")
    comm.add_argument("--alpha", required=True)
    comm.add_argument("--beta", required=True)
    sub.add_parser("center", parents=[common], help="center and abelian/centerless verdicts")
    dense = sub.add_parser("dense", parents=[common], help="is a congruence dense")
    dense.add_argument("--theta", required=True)
    for verb, text in [("fsi", "finitely subdirectly irreducible?"), ("si", "subdirectly irreducible?"),
                       ("decompose", "decompose through a longest irredundant meet"),
                       ("split", "split along the center and the derived congruence"),
                       ("ufp", "all direct decompositions into indecomposables"),
                       ("cube", "cube extension built from the difference term"),
                       ("oracle", "cross-check against brute force")]:
        sub.add_parser(verb, parents=[common], help=text)
    ver = sub.add_parser("verify", parents=[common], help="run the verification suite")
    ver.add_argument("--check", action="append", choices=sorted(CHECKS), metavar="NAME",
                     help="run only this check (repeatable)")
    ver.add_argument("--corpus", nargs="+", metavar="NAME", help="restrict to these builtin algebras")
    return p


# -- helpers ------------------------------------------------------------------

def load_algebra(spec: str | None, limits: Limits) -> tuple[FiniteAlgebra, object]:
    """Algebra and its default difference term (None for files)."""
    if spec is None:
        raise UsageError("--alg is required for this verb")
    path = Path(spec)
    if path.is_file():
        A, d = read_algebra(path), None
    else:
        name = path.name[:-4] if path.name.endswith(".alg") else spec
        if name not in corpus_names():
            raise UsageError(f"{spec!r} is neither a file nor a builtin algebra "
                             f"({', '.join(corpus_names())})")
        e = corpus_entry(name)
        A, d = e.algebra, e.difference_term
    if A.size > limits.max_size:
        raise SizeLimitError(A.name, A.size, limits.max_size)
    return A, d


def resolve_term(text: str | None, A: FiniteAlgebra, default):
    if text is None:
        return default
    t = BUILTIN_TERMS.get(text) or parse_term(text)
    check_term(A, t)
    return t


def partition_arg(text: str, A: FiniteAlgebra, flag: str):
    try:
        p = parse_partition(text, A.size)
    except ValueError as exc:
        raise UsageError(f"{flag}: {exc}") from None
    if p not in congruence_lattice(A):
        raise UsageError(f"{flag}: {p} is not a congruence of {A.name}")
    return p


class Report:
    def __init__(self, verb: str, algebra: str | None = None):
        self.lines: list[str] = []
        self.data: dict = {"verb": verb}
        if algebra is not None:
            self.data["algebra"] = algebra
        self.status = 0

    def say(self, text: str = "") -> None:
        self.lines.append(text)

    def render(self) -> str:
        self.data["exit"] = self.status
        return "\n".join(self.lines + [MACHINE_HEADER, json.dumps(self.data, sort_keys=True, indent=1)]) + "\n"


# -- verbs --------------------------------------------------------------------

def cmd_con(args, A, d, limits, r: Report):
    L = congruence_lattice(A)
    r.say(f"Con({A.name}): {len(L)} congruences, height {L.height()}")
    for p in L:
        r.say(f"  {p}")
    r.data["congruences"] = [str(p) for p in L]
    if args.dot:
        Path(args.dot).write_text(export_dot(L, f"Con({A.name})"))
        r.say(f"Hasse diagram written to {args.dot}")


def cmd_comm(args, A, d, limits, r: Report):
    a, b = partition_arg(args.alpha, A, "--alpha"), partition_arg(args.beta, A, "--beta")
    c = commutator(A, a, b, malcev=d, limits=limits)
    r.say(f"[{a}, {b}] = {c}")
    r.data.update(alpha=str(a), beta=str(b), commutator=str(c))


def cmd_center(args, A, d, limits, r: Report):
    z = center(A, malcev=d, limits=limits)
    abelian, centerless = z.is_one(), z.is_zero()
    r.say(f"center of {A.name}: {z}")
    r.say(f"abelian: {abelian}; centerless: {centerless}")
    r.data.update(center=str(z), abelian=abelian, centerless=centerless)


def cmd_dense(args, A, d, limits, r: Report):
    L = congruence_lattice(A)
    t = partition_arg(args.theta, A, "--theta")
    w = density_witness(L, t)
    r.data.update(theta=str(t), dense=w is None, witness=None if w is None else str(w))
    if w is None:
        r.say(f"{t} is dense in Con({A.name})")
    else:
        r.say(f"{t} is not dense: {w} is nonzero and meets it in 0")
        r.status = 1


def cmd_fsi(args, A, d, limits, r: Report):
    w = fsi_witness(A)
    r.data.update(fsi=w is None, witness=None if w is None else [str(x) for x in w])
    if w is None:
        r.say(f"{A.name} is finitely subdirectly irreducible")
    else:
        r.say(f"{A.name} is not finitely subdirectly irreducible: {w[0]} ^ {w[1]} = 0")
        r.status = 1


def cmd_si(args, A, d, limits, r: Report):
    si = is_si(A)
    L = congruence_lattice(A)
    r.data["si"] = si
    if si:
        r.say(f"{A.name} is subdirectly irreducible; monolith {L.atoms()[0]}")
        r.data["monolith"] = str(L.atoms()[0])
    else:
        atoms = [str(x) for x in L.atoms()]
        r.say(f"{A.name} is not subdirectly irreducible; atoms: {', '.join(atoms) or 'none'}")
        r.data["atoms"] = atoms
        r.status = 1


def _report_decomposition(rep, r: Report):
    r.say(f"outcome: {rep.outcome}")
    for k, F in zip(rep.kernels, rep.factors):
        r.say(f"  kernel {k} -> factor of size {F.size}")
    for note in rep.notes:
        r.say(f"  {note}")
    r.data["report"] = rep.to_dict()


def cmd_decompose(args, A, d, limits, r: Report):
    rep = decompose_absolute_retract(A, malcev=d, limits=limits)
    _report_decomposition(rep, r)


def cmd_split(args, A, d, limits, r: Report):
    rep = split_center_abelian(A, malcev=d, limits=limits)
    r.say(f"center {rep.zeta}; [1,1] = {rep.derived}")
    r.say(f"(C1) {'holds' if rep.c1_holds else 'fails'} on this algebra")
    _report_decomposition(rep, r)
    if rep.outcome == "c1-failure":
        r.status = 2


def cmd_ufp(args, A, d, limits, r: Report):
    rep = enumerate_direct_decompositions(A)
    r.say(f"{len(rep.factorizations)} direct decomposition(s) of {A.name} into indecomposables")
    for ks, ms in zip(rep.factorizations, rep.multisets):
        r.say(f"  {' x '.join(str(k) for k in ks) or '(empty product)'}  classes {list(ms)}")
    r.say(f"unique up to isomorphism: {rep.unique}")
    r.data.update(factorizations=[[str(k) for k in ks] for ks in rep.factorizations],
                  multisets=[list(m) for m in rep.multisets],
                  class_sizes=list(rep.class_sizes), unique=rep.unique)
    if not rep.unique:
        r.status = 1


def cmd_cube(args, A, d, limits, r: Report):
    if d is None:
        raise UsageError("cube needs a difference term (--term)")
    c = build_cube_extension(A, d, limits=limits)
    r.say(f"B has {c.B.size} elements; B/ker d has {c.embedding.source.size}; "
          f"A^3/Theta has {c.embedding.target.size}")
    r.say(f"non-abelian: {c.non_abelian}; center dense: {c.center_dense}")
    r.say(f"proper: {c.proper}; essential: {c.essential}")
    if c.proper and c.essential:
        r.say(f"{A.name} has a proper essential extension, so it is not an absolute retract")
    for note in c.notes:
        r.say(f"  {note}")
    r.data.update(B=c.B.size, quotient=c.embedding.source.size, target=c.embedding.target.size,
                  non_abelian=c.non_abelian, center_dense=c.center_dense,
                  center_verified=c.center_verified, proper=c.proper, essential=c.essential,
                  Theta=str(c.Theta), notes=list(c.notes))


def cmd_oracle(args, A, d, limits, r: Report):
    from . import oracles

    if A.size > 10:
        raise SizeLimitError("brute-force partition enumeration", A.size, 10)
    results = {}
    L = congruence_lattice(A)
    results["congruences"] = list(L) == oracles.brute_force_congruences(A)
    results["principal"] = all(principal_congruence(A, a, b) == oracles.brute_force_principal(A, a, b)
                               for a in range(A.size) for b in range(a + 1, A.size))
    modular = oracles.brute_force_pentagon(list(L), L.join) is None
    results["pentagon"] = modular == is_modular(L)
    names = [n for n, _ in A.signature]
    if modular and "mul" in names and "inv" in names:
        results["group-commutator"] = all(
            commutator(A, a, b, malcev=d, limits=limits) == oracles.group_commutator_oracle(A, a, b)
            for a in L for b in L)
        results["group-center"] = center(A, malcev=d, limits=limits) == oracles.group_center_oracle(A)
    if modular and set(names) == {"meet", "join"}:
        results["lattice-commutator"] = all(
            commutator(A, a, b, malcev=d, limits=limits) == oracles.distributive_commutator_oracle(a, b)
            for a in L for b in L)
    if modular:
        results["center-scan"] = center(A, malcev=d, limits=limits) == \
            oracles.center_by_lattice_scan(A, malcev=d, limits=limits)
    for k in sorted(results):
        r.say(f"  [{'PASS' if results[k] else 'FAIL'}] {k}")
    r.data["oracles"] = results
    if not all(results.values()):
        r.status = 1


def cmd_verify(args, limits, r: Report):
    outcomes = run_suite(args.check, args.corpus, limits=limits, seed=args.seed)
    text = format_report(outcomes)
    if any(o.status == "fail" for o in outcomes):
        r.status = 1
    return text


VERBS = {"con": cmd_con, "comm": cmd_comm, "center": cmd_center, "dense": cmd_dense,
         "fsi": cmd_fsi, "si": cmd_si, "decompose": cmd_decompose, "split": cmd_split,
         "ufp": cmd_ufp, "cube": cmd_cube, "oracle": cmd_oracle}


def run_command(argv: list[str]) -> tuple[int, str]:
    """Run one command; returns the exit status and the full report text."""
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        return 2, f"usage error: {exc}\n"
    except SystemExit as exc:  # --help
        return int(exc.code or 0), ""
    limits = Limits.from_env() if args.max_size is None else Limits.from_env(max_size=args.max_size)
    r = Report(args.verb)
    try:
        if args.verb == "verify":
            text = cmd_verify(args, limits, r)
            return r.status, text
        A, default_d = load_algebra(args.alg, limits)
        r.data["algebra"] = A.name
        d = resolve_term(args.term, A, default_d)
        r.say(f"{args.verb} on {A.name} ({A.size} elements)")
        VERBS[args.verb](args, A, d, limits, r)
    except (UsageError, AlgebraFormatError, TermError, PreconditionError, KeyError, OSError) as exc:
        return 2, f"error: {exc}\n"
    except RefusalError as exc:
        return 2, f"refused: {exc}\n"
    except VerificationFailure as exc:
        r.say(f"VERIFICATION FAILURE: {exc}")
        r.data["failure"] = str(exc)
        r.status = 1
    return r.status, r.render()


def main(argv: list[str] | None = None) -> int:
    status, text = run_command(sys.argv[1:] if argv is None else argv)
    stream = sys.stderr if text.startswith(("usage error", "error:", "refused:")) else sys.stdout
    stream.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
