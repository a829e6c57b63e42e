"""JSON structure documents.

Every rational is a ``[numerator, denominator]`` pair; Novikov values are
lists of ``[num, den, exp_num, exp_den]`` quadruples (a fifth entry, when
present, is the power of ``t``).
"""

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .ainf import (ZERO, ClassLabel, FilteredAInfinity, OperationTensor, check_gapped_degrees,
                   cyclic_sign, rotate)
from .graded import GradedBasis, Pairing
from .novikov import EnergyMonoid, NovikovScalar
from .wallcross import SphereClass, SphereCountData

FORMAT = "superpot-structure/1"


class DocumentError(ValueError):
    """Malformed or invalid document; ``path`` locates the offending entry."""

    def __init__(self, path, message):
        super().__init__(f"{path}: {message}")
        self.path = path


@dataclass
class Document:
    structure: FilteredAInfinity
    monoid: EnergyMonoid
    generators: dict = field(default_factory=dict)
    counts: SphereCountData = None


def rational(x, path="value"):
    if isinstance(x, bool) or not isinstance(x, list) or len(x) != 2 \
            or not all(isinstance(a, int) and not isinstance(a, bool) for a in x):
        raise DocumentError(path, f"expected [numerator, denominator], got {x!r}")
    if x[1] == 0:
        raise DocumentError(path, "zero denominator")
    return Fraction(x[0], x[1])


def emit_rational(q):
    q = Fraction(q)
    return [q.numerator, q.denominator]


def novikov(quads, path="value", emax=None):
    """Novikov scalar from a list of quadruples."""
    if not isinstance(quads, list):
        raise DocumentError(path, "expected a list of quadruples")
    terms = {}
    for j, q in enumerate(quads):
        p = f"{path}[{j}]"
        if not isinstance(q, list) or len(q) not in (4, 5) or \
                not all(isinstance(a, int) and not isinstance(a, bool) for a in q):
            raise DocumentError(p, "expected [num, den, exp_num, exp_den(, t_power)]")
        if q[1] == 0 or q[3] == 0:
            raise DocumentError(p, "zero denominator")
        d = q[4] if len(q) == 5 else 0
        key = (Fraction(q[2], q[3]), d)
        terms[key] = terms.get(key, 0) + Fraction(q[0], q[1])
    return NovikovScalar(terms, emax)


def emit_novikov(x):
    out = []
    for (lam, d), c in x.items():
        q = [c.numerator, c.denominator, lam.numerator, lam.denominator]
        if d:
            q.append(d)
        out.append(q)
    return out


def _class_names(classes):
    names, used = {}, set()
    for c in sorted(classes):
        n = c.name if c.name and c.name not in used and c.name != "0" else None
        if n is None:
            n = ClassLabel(c.energy, c.boundary).label()
        names[c] = n
        used.add(n)
    return names


def _emit_tensor(t, basis, cname):
    entries = []
    for (d, idx), v in sorted(t.entries.items()):
        entries.append([[basis.names[i] for i in idx], d, emit_rational(v)])
    return {"arity": t.arity, "class": cname, "entries": entries}


def emit(doc):
    """Document as a JSON-ready dict."""
    S = doc.structure
    b = S.basis
    classes = set(S.classes()) | {c for (_, c) in doc.generators} - {ZERO}
    if doc.counts:
        classes |= set(doc.counts.targets())
    names = _class_names(classes)
    names[ZERO] = "0"
    out = {
        "format": FORMAT,
        "name": S.name,
        "dim": b.dim,
        "basis": [{"name": n, "degree": d} for n, d in zip(b.names, b.degrees)],
        "pairing": [[b.names[i], b.names[j], emit_rational(v)] for (i, j), v in sorted(S.pairing.entries().items())],
        "monoid": [emit_rational(g) for g in doc.monoid.generators],
        "emax": emit_rational(S.emax),
        "kmax": S.kmax,
        "classes": [{"name": names[c], "energy": emit_rational(c.energy), "boundary": list(c.boundary)}
                    for c in sorted(classes)],
        "operations": [_emit_tensor(t, b, names[cls])
                       for (k, cls), t in sorted(S.ops.items(), key=lambda kv: (kv[0][1], kv[0][0]))],
    }
    if S.m_minus1 is not None:
        out["m_minus1"] = [{"class": names[c], "value": emit_novikov(v)} for c, v in sorted(S.m_minus1.items())]
    if doc.generators:
        out["generators"] = [_emit_tensor(t, b, names[cls])
                             for (k, cls), t in sorted(doc.generators.items(), key=lambda kv: (kv[0][1], kv[0][0]))]
    if doc.counts is not None:
        out["counts"] = [{"name": s.name, "energy": emit_rational(s.energy), "count": emit_rational(s.count),
                          "target": names[s.target], "profile": emit_novikov(s.profile)}
                         for s in doc.counts.spheres]
    return out


def dumps(doc):
    return json.dumps(emit(doc), indent=1, sort_keys=True)


def _tensor(item, path, basis, classes, parity):
    if not isinstance(item, dict):
        raise DocumentError(path, "expected an object")
    k = item.get("arity")
    if not isinstance(k, int) or k < 0:
        raise DocumentError(f"{path}.arity", "expected a nonnegative integer")
    cname = item.get("class")
    if cname not in classes:
        raise DocumentError(f"{path}.class", f"unknown class {cname!r}")
    cls = classes[cname]
    entries = {}
    degs = basis.degrees
    for j, e in enumerate(item.get("entries", [])):
        p = f"{path}.entries[{j}]"
        if not isinstance(e, list) or len(e) != 3:
            raise DocumentError(p, "expected [indices, t_power, value]")
        names, d, v = e
        if not isinstance(names, list) or len(names) != k + 1:
            raise DocumentError(p, f"expected {k + 1} basis names")
        for nm in names:
            if nm not in basis.index:
                raise DocumentError(p, f"unknown basis name {nm!r}")
        if not isinstance(d, int) or d < 0:
            raise DocumentError(p, "t power must be a nonnegative integer")
        idx = tuple(basis.index[nm] for nm in names)
        want = 0 if parity == 1 else 1
        if sum(degs[i] - 1 for i in idx) != want:
            raise DocumentError(p, "entry has the wrong degree")
        if (d, idx) in entries:
            raise DocumentError(p, "duplicate entry")
        entries[(d, idx)] = rational(v, p)
    for j, e in enumerate(item.get("entries", [])):
        d, idx = e[1], tuple(basis.index[nm] for nm in e[0])
        w = entries.get((d, rotate(idx)), 0)
        if entries.get((d, idx), 0) != cyclic_sign([degs[i] for i in idx]) * w:
            raise DocumentError(f"{path}.entries[{j}]", "entry violates cyclic symmetry")
    return (k, cls), OperationTensor(k, cls, entries, parity)


def parse(data):
    """Validated :class:`Document` from a dict (as loaded from JSON)."""
    if not isinstance(data, dict):
        raise DocumentError("$", "expected an object")
    if data.get("format", FORMAT) != FORMAT:
        raise DocumentError("format", f"unsupported format {data.get('format')!r}")
    try:
        names = [e["name"] for e in data["basis"]]
        degrees = [e["degree"] for e in data["basis"]]
    except (KeyError, TypeError):
        raise DocumentError("basis", "expected a list of {name, degree}")
    try:
        basis = GradedBasis(names, degrees, data.get("dim", 3))
    except ValueError as exc:
        raise DocumentError("basis", str(exc))
    ent = {}
    for j, e in enumerate(data.get("pairing", [])):
        p = f"pairing[{j}]"
        if not isinstance(e, list) or len(e) != 3 or e[0] not in basis.index or e[1] not in basis.index:
            raise DocumentError(p, "expected [name, name, value] with known basis names")
        ent[(basis.index[e[0]], basis.index[e[1]])] = rational(e[2], p)
    try:
        pairing = Pairing(basis, ent)
    except ValueError as exc:
        raise DocumentError("pairing", str(exc))
    emax = rational(data.get("emax"), "emax")
    kmax = data.get("kmax", 5)
    if not isinstance(kmax, int) or kmax < 0:
        raise DocumentError("kmax", "expected a nonnegative integer")
    gens = [rational(g, f"monoid[{j}]") for j, g in enumerate(data.get("monoid", []))]
    try:
        monoid = EnergyMonoid(gens, emax)
    except ValueError as exc:
        raise DocumentError("monoid", str(exc))
    classes = {"0": ZERO}
    for j, c in enumerate(data.get("classes", [])):
        p = f"classes[{j}]"
        if not isinstance(c, dict) or "name" not in c:
            raise DocumentError(p, "expected {name, energy, boundary}")
        energy = rational(c.get("energy"), f"{p}.energy")
        if energy <= 0:
            raise DocumentError(f"{p}.energy", "class energy must be positive")
        if energy not in monoid:
            raise DocumentError(f"{p}.energy", f"energy {energy} is not in the monoid")
        bd = c.get("boundary", [])
        if not isinstance(bd, list) or not all(isinstance(a, int) for a in bd):
            raise DocumentError(f"{p}.boundary", "expected a list of integers")
        if c["name"] in classes:
            raise DocumentError(f"{p}.name", f"duplicate class name {c['name']!r}")
        cls = ClassLabel(energy, bd, c["name"])
        if cls in classes.values():
            raise DocumentError(p, "two names for the same class")
        classes[c["name"]] = cls
    ops = {}
    for j, item in enumerate(data.get("operations", [])):
        key, t = _tensor(item, f"operations[{j}]", basis, classes, 1)
        if key in ops:
            raise DocumentError(f"operations[{j}]", "duplicate operation")
        ops[key] = t
    mm = None
    if "m_minus1" in data:
        mm = {}
        for j, e in enumerate(data["m_minus1"]):
            p = f"m_minus1[{j}]"
            if not isinstance(e, dict) or e.get("class") not in classes or e.get("class") == "0":
                raise DocumentError(p, "expected {class, value} with a known nonzero class")
            mm[classes[e["class"]]] = novikov(e.get("value"), f"{p}.value")
    S = FilteredAInfinity(basis, pairing, ops, emax, kmax, mm, data.get("name"))
    rep = check_gapped_degrees(S)
    if not rep.ok:
        raise DocumentError("operations", rep.violations[0])
    generators = {}
    for j, item in enumerate(data.get("generators", [])):
        key, t = _tensor(item, f"generators[{j}]", basis, classes, 0)
        generators[key] = t
    counts = None
    if "counts" in data:
        spheres = []
        for j, e in enumerate(data["counts"]):
            p = f"counts[{j}]"
            if not isinstance(e, dict) or e.get("target") not in classes:
                raise DocumentError(p, "expected {name, energy, count, target, profile} with a known target")
            prof = novikov(e["profile"], f"{p}.profile") if "profile" in e else None
            try:
                spheres.append(SphereClass(e.get("name", f"alpha{j + 1}"), rational(e.get("energy"), f"{p}.energy"),
                                           rational(e.get("count"), f"{p}.count"), classes[e["target"]], prof))
            except ValueError as exc:
                if isinstance(exc, DocumentError):
                    raise
                raise DocumentError(p, str(exc))
        counts = SphereCountData(spheres)
    return Document(S, monoid, generators, counts)


def loads(text):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError("$", f"invalid JSON: {exc}")
    return parse(data)


def load(path):
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def save(doc, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(doc) + "\n")


def document_for(S, generators=None, counts=None):
    """Wrap a structure; the monoid is generated by its class energies."""
    energies = {c.energy for c in S.classes()} | {c.energy for (_, c) in (generators or {}) if not c.is_zero()}
    if counts is not None:
        energies |= {s.energy for s in counts.spheres}
    return Document(S, EnergyMonoid(sorted(energies) or [1], S.emax), dict(generators or {}), counts)
