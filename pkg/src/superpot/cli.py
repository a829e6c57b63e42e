"""Command line front end: load or generate a structure, run one workflow, print a report."""

import argparse
import json
import random
import re
import sys
from fractions import Fraction

from . import io
from .ainf import ClassLabel, Obstruction, check_structure
from .fixtures import generate, transfer_fixture, wallcross_fixture
from .laurent import divisor_fixture, laurent_report, random_point, random_shift
from .mc import gauge_flow, mc_residual, mc_solutions
from .novikov import ConfigurationError, NovikovScalar
from .pseudoiso import (check_isotopy, integrate_isotopy, random_gauge_parameter, random_generators,
                        verify_isotopy_invariance)
from .report import CheckReport
from .superpotential import d_psi, psi, psi_prime
from .transfer import CanonicalModel, m_can_minus1, transfer_report
from .trees import TreeEnumerator, euler_characteristic
from .wallcross import random_counts, verify_wallcross

COMMANDS = ("check", "solve-mc", "psi", "gauge", "isotopy", "transfer", "trees", "wallcross", "laurent", "generate")


class Report:
    """Checks plus computed values for one command; text and JSON renderings are deterministic."""

    def __init__(self, command, seed=None):
        self.command = command
        self.seed = seed
        self.checks = []
        self.values = []

    def add(self, check):
        self.checks.append(check)
        return check

    def value(self, key, v):
        self.values.append((key, v))

    @property
    def ok(self):
        return all(c.ok for c in self.checks)

    def text(self):
        lines = [f"command: {self.command}"]
        if self.seed is not None:
            lines.append(f"seed: {self.seed}")
        for key, v in self.values:
            if isinstance(v, list):
                lines.append(f"{key}:")
                lines += [f"  {_text(x)}" for x in v]
            else:
                lines.append(f"{key}: {_text(v)}")
        lines += [c.text() for c in self.checks]
        lines.append(f"result: {'pass' if self.ok else 'FAIL'}")
        return "\n".join(lines)

    def as_dict(self):
        return {
            "command": self.command,
            "seed": self.seed,
            "checks": [{"name": c.name, "status": "pass" if c.ok else "fail",
                        "witness": c.violations[0] if c.violations else None,
                        "violations": list(c.violations)} for c in self.checks],
            "values": {key: _json(v) for key, v in self.values},
            "result": "pass" if self.ok else "fail",
        }


def _text(v):
    return str(v) if isinstance(v, (str, int, Fraction)) else repr(v)


def _json(v):
    if isinstance(v, NovikovScalar):
        return {"text": repr(v), "terms": io.emit_novikov(v)}
    if isinstance(v, list):
        return [_json(x) for x in v]
    if isinstance(v, (int, str)) or v is None:
        return v
    if isinstance(v, Fraction):
        return io.emit_rational(v)
    return repr(v)


def _load(args, default=generate):
    if args.fixture:
        doc = io.load(args.fixture)
    else:
        doc = io.document_for(default(args.seed))
    S = doc.structure
    if args.emax is not None or args.kmax is not None:
        emax = S.emax if args.emax is None else min(S.emax, Fraction(args.emax))
        S = S.replace(emax=emax, kmax=args.kmax)
        doc = io.Document(S, doc.monoid, doc.generators, doc.counts)
    return doc


def _solutions(S, rng, count=1):
    sols = mc_solutions(S, count, rng)
    if not sols:
        raise Obstruction(0, ClassLabel(0), "no Maurer-Cartan solution found")
    return sols


def cmd_check(args, rep):
    S = _load(args).structure
    rep.value("structure", S)
    rep.add(check_structure(S))


def cmd_generate(args, rep):
    doc = io.document_for(generate(args.seed))
    rep.value("structure", doc.structure)
    rep.add(check_structure(doc.structure))
    if args.out:
        io.save(doc, args.out)
        rep.value("written", args.out)
    else:
        rep.value("document", io.dumps(doc))


def cmd_solve_mc(args, rep):
    S = _load(args).structure
    rng = random.Random(args.seed)
    sols = _solutions(S, rng, args.count)
    bad = [f"solution {j} has residual {mc_residual(S, s.b)}" for j, s in enumerate(sols)
           if not mc_residual(S, s.b).is_zero()]
    rep.value("solutions", [s.b for s in sols])
    rep.add(CheckReport("Maurer-Cartan residual", not bad, bad))


def cmd_psi(args, rep):
    S = _load(args).structure
    rng = random.Random(args.seed)
    sols = _solutions(S, rng, args.count)
    bad = []
    for j, s in enumerate(sols):
        rep.value(f"b[{j}]", s.b)
        rep.value(f"psi[{j}]", psi(S, s.b) if S.m_minus1 is not None else psi_prime(S, s.b))
        if any(not v.is_zero() for v in d_psi(S, s.b).values()):
            bad.append(f"gradient does not vanish at solution {j}")
    rep.add(CheckReport("critical points", not bad, bad))


def cmd_gauge(args, rep):
    S = _load(args).structure
    rng = random.Random(args.seed)
    b0 = _solutions(S, rng)[0].b
    c = random_gauge_parameter(S, rng, tdeg=3)
    b = gauge_flow(S, b0, c)
    bad = []
    if not mc_residual(S, b).is_zero():
        bad.append("b(t) leaves the Maurer-Cartan locus")
    start, end = psi_prime(S, b.evaluate_t(0)), psi_prime(S, b.evaluate_t(1))
    if start != end:
        bad.append(f"potential changes from {start} to {end}")
    rep.value("c", c)
    rep.value("psi'(b(0))", start)
    rep.value("psi'(b(1))", end)
    rep.add(CheckReport("gauge invariance", not bad, bad))


def cmd_isotopy(args, rep):
    doc = _load(args)
    S = doc.structure
    rng = random.Random(args.seed)
    c = doc.generators or random_generators(S, rng, max_arity=1)
    F = integrate_isotopy(S, c)
    rep.add(check_isotopy(F))
    b0 = _solutions(S, rng)[0].b
    inv = rep.add(verify_isotopy_invariance(F, b0))
    rep.value("f", inv.data["f"])
    if args.out:
        io.save(io.document_for(F.m.at_t(1)), args.out)
        rep.value("written", args.out)


def cmd_transfer(args, rep):
    if args.fixture:
        S = _load(args).structure
        can = CanonicalModel(S)
        b = _solutions(can.structure, random.Random(args.seed))[0].b
    else:
        S, b = transfer_fixture(args.seed)
        if args.emax is not None or args.kmax is not None:
            S = S.replace(emax=S.emax if args.emax is None else min(S.emax, Fraction(args.emax)), kmax=args.kmax)
            b = b.with_emax(S.emax)
    r = rep.add(transfer_report(S, b))
    can = r.data["model"]
    rep.value("b", b)
    rep.value("psi", r.data["psi"])
    rep.value("psi_can", r.data["psi_can"])
    rep.value("m_can_-1", [f"{c.label()}: {m_can_minus1(can, c)}" for c in S.class_closure()])


def parse_class(text):
    """``"2e1+e2"`` -> class with energy 3 and boundary (2, 1); ``e_i`` has energy 1 and boundary the i-th unit vector."""
    text = text.replace(" ", "")
    if text == "0":
        return ClassLabel(0)
    counts = {}
    for part in text.split("+"):
        m = re.fullmatch(r"(\d*)e(\d+)", part)
        if not m or int(m.group(2)) < 1:
            raise ValueError(f"cannot read class {text!r}; use sums like 2e1+e2")
        i = int(m.group(2))
        counts[i] = counts.get(i, 0) + int(m.group(1) or 1)
    n = max(counts)
    return ClassLabel(sum(counts.values()), [counts.get(i + 1, 0) for i in range(n)], text)


def cmd_trees(args, rep):
    beta = parse_class(args.beta)
    n = max(len(beta.boundary), 1)
    gens = [ClassLabel(1, [int(i == j) for j in range(n)], f"e{i + 1}") for i in range(n)]
    found = TreeEnumerator(gens).unrooted(args.k, beta)
    bad = [t.describe() for t, _ in found if euler_characteristic(t) != 1]
    rep.value("classes", len(found))
    rep.value("trees", [f"Aut {aut}: {t.describe()}" for t, aut in found])
    rep.add(CheckReport("Euler relation", not bad, bad))


def cmd_wallcross(args, rep):
    rng = random.Random(args.seed)
    if args.fixture:
        doc = _load(args)
        S = doc.structure
        F = integrate_isotopy(S, doc.generators or random_generators(S, rng, max_arity=1, tdeg=2))
        counts = doc.counts or random_counts(rng, S.class_closure(), S.emax)
        b0 = _solutions(S, rng)[0].b
    else:
        F, counts, b0 = wallcross_fixture(args.seed)
    r = rep.add(verify_wallcross(F, counts, b0))
    rep.value("counts", [f"{s.name}: energy {s.energy}, count {s.count}, disc class {s.target.label()}"
                         for s in counts.spheres])
    rep.value("difference", r.data["difference"])
    rep.value("expected", r.data["expected"])


def cmd_laurent(args, rep):
    S = _load(args, default=divisor_fixture).structure
    rng = random.Random(args.seed)
    x = random_point(S, rng)
    r = rep.add(laurent_report(S, x, random_shift(S, rng)))
    rep.value("laurent", r.data["laurent"])
    rep.value("x", x)
    rep.value("value", r.data["value"])


HANDLERS = {
    "check": cmd_check, "generate": cmd_generate, "solve-mc": cmd_solve_mc, "psi": cmd_psi,
    "gauge": cmd_gauge, "isotopy": cmd_isotopy, "transfer": cmd_transfer, "trees": cmd_trees,
    "wallcross": cmd_wallcross, "laurent": cmd_laurent,
}


def build_parser():
    parser = argparse.ArgumentParser(prog="superpot", description=__doc__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--emax", type=Fraction, help="lower the truncation level, e.g. 5/2")
    common.add_argument("--kmax", type=int, help="arity bound")
    common.add_argument("--fixture", help="structure document (JSON); generated from --seed when absent")
    common.add_argument("--report", help="also write the report as JSON to this path")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common])
        if name in ("generate", "isotopy"):
            p.add_argument("--out", help="write the resulting structure document here")
        if name in ("solve-mc", "psi"):
            p.add_argument("--count", type=int, default=1, help="number of solutions")
        if name == "trees":
            p.add_argument("--k", type=int, default=0, help="number of exterior vertices")
            p.add_argument("--beta", default="e1", help="total class, e.g. 2e1 or e1+e2")
    return parser


def run_command(name, args):
    rep = Report(name, getattr(args, "seed", None))
    try:
        HANDLERS[name](args, rep)
    except (ValueError, Obstruction, ConfigurationError, OSError) as exc:
        rep.add(CheckReport("input", False, [f"{type(exc).__name__}: {exc}"]))
    return rep


def main(argv=None):
    args = build_parser().parse_args(argv)
    rep = run_command(args.command, args)
    print(rep.text())
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            json.dump(rep.as_dict(), fh, indent=1, sort_keys=True)
            fh.write("\n")
    return 0 if rep.ok else 1


if __name__ == "__main__":
    sys.exit(main())
