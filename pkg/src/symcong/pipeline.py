"""The five-step congruence classification over a corpus of curves, plus the Frey-Mazur audit.

Step 1 hashes trace vectors, step 2 certifies by the Sturm bound, step 3
splits by reducibility, step 4 assigns symplectic types and colours the
curves, step 5 handles the reducible mod-7 sets.
"""

from __future__ import annotations

import csv
import io
import re
from collections import defaultdict, deque
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from pathlib import Path

from .arith import primes_upto, squarefree_part
from .curve import RationalEC, conductor, is_cm, local_data, minimal_model, quadratic_twist, short_model
from .frobenius import ap, batch_trace_vectors, trace_vector
from .galois import has_rational_7_isogeny, kernel_polynomials, reducibility, trace_zero_quadratic
from .oracle import OracleConflict, OraclePack, external_oracle_hook
from .reducible import reducible_congruent, velu_isogenous
from .sieve import KOResult, CongruenceSet, build_prime_window, certify_bucket, label_key, partition
from .twists import (
    Basis,
    SymplecticType,
    TypeValue,
    cm_twist_congruence,
    find_quadratic_twist_congruence,
    higher_twist_partner,
    isogeny_criterion,
)

__all__ = [
    "CurveRecord",
    "IngestError",
    "InconsistentTypes",
    "IsogenyClass",
    "Edge",
    "SymplecticPartition",
    "SetResult",
    "PipelineResult",
    "FreyMazurReport",
    "ingest",
    "read_isogeny_sidecar",
    "group_classes",
    "class_degrees",
    "twist_edge_type",
    "run_pipeline",
    "step4_partition",
    "freymazur_audit",
    "report_tsv",
    "summary_tsv",
]


class IngestError(ValueError):
    pass


class InconsistentTypes(RuntimeError):
    """An odd cycle of antisymplectic edges: the pairwise types cannot all hold."""


@dataclass(frozen=True)
class CurveRecord:
    label: str
    conductor: int
    iso_class: str
    class_index: int
    ainvs: tuple[int, int, int, int, int]
    degrees: tuple[int, ...] | None = None
    flags: tuple = ()

    @property
    def curve(self) -> RationalEC:
        return RationalEC(*self.ainvs)

    @property
    def class_label(self) -> str:
        return f"{self.conductor}{self.iso_class}"


# ingestion ----------------------------------------------------------------------------------

_CSV_HEADER = ["label", "conductor", "iso_class", "class_index", "a1", "a2", "a3", "a4", "a6"]


def _make_record(label, cond, cls, idx, ainvs, where, audit, errors) -> CurveRecord | None:
    try:
        E = RationalEC(*ainvs)
    except ValueError:
        errors.append(f"{where}: singular curve (discriminant 0)")
        return None
    if audit:
        N = conductor(E)
        if N != cond:
            errors.append(f"{where}: conductor {cond} in file, recomputed {N}")
            return None
    return CurveRecord(label or f"{cond}{cls}{idx}", cond, cls, idx, tuple(ainvs))


def ingest(path, fmt: str = "auto", audit: bool = False) -> list[CurveRecord]:
    """Read curves from an allcurves-style text file or a CSV file with header.

    Text lines are ``conductor iso_class class_index a1 a2 a3 a4 a6 [rank torsion]``
    (a bracketed ``[a1,a2,a3,a4,a6]`` is accepted too).  All problems are
    collected and raised together with their line numbers.
    """
    text = Path(path).read_text()
    if fmt == "auto":
        first = text.lstrip().split("\n", 1)[0]
        fmt = "csv" if first.replace(" ", "").startswith("label,") else "allcurves"
    records, errors = [], []
    if fmt == "csv":
        reader = csv.reader(io.StringIO(text))
        header = next(reader, None)
        if header is None:
            return []
        if [h.strip() for h in header[:9]] != _CSV_HEADER:
            raise IngestError(f"{path}:1: expected header {','.join(_CSV_HEADER)}")
        for n, row in enumerate(reader, 2):
            if not row or not "".join(row).strip():
                continue
            where = f"{path}:{n}"
            try:
                label = row[0].strip()
                cond, cls, idx = int(row[1]), row[2].strip(), int(row[3])
                ainvs = [int(x) for x in row[4:9]]
                if len(ainvs) != 5:
                    raise ValueError
            except (ValueError, IndexError):
                errors.append(f"{where}: malformed row")
                continue
            rec = _make_record(label, cond, cls, idx, ainvs, where, audit, errors)
            if rec:
                records.append(rec)
    elif fmt == "allcurves":
        for n, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            where = f"{path}:{n}"
            m = re.match(r"^(\d+)\s+([A-Za-z]+)\s+(\d+)\s+\[([^\]]*)\]", line)
            try:
                if m:
                    cond, cls, idx = int(m[1]), m[2], int(m[3])
                    ainvs = [int(x) for x in m[4].split(",")]
                else:
                    tok = line.split()
                    cond, cls, idx = int(tok[0]), tok[1], int(tok[2])
                    ainvs = [int(x) for x in tok[3:8]]
                if len(ainvs) != 5 or not cls.isalpha():
                    raise ValueError
            except (ValueError, IndexError):
                errors.append(f"{where}: malformed line")
                continue
            rec = _make_record(None, cond, cls, idx, ainvs, where, audit, errors)
            if rec:
                records.append(rec)
    else:
        raise IngestError(f"unknown format {fmt!r}")
    if errors:
        raise IngestError("\n".join(errors))
    return records


def read_isogeny_sidecar(path, records: list[CurveRecord]) -> list[CurveRecord]:
    """Attach degree-matrix rows (``label d1 d2 ...``, class order) to the records."""
    rows = {}
    for n, line in enumerate(Path(path).read_text().splitlines(), 1):
        tok = line.split()
        if not tok or tok[0].startswith("#"):
            continue
        try:
            rows[tok[0]] = tuple(int(x) for x in tok[1:])
        except ValueError:
            raise IngestError(f"{path}:{n}: malformed degree row") from None
    out = []
    for r in records:
        deg = rows.get(r.label)
        out.append(CurveRecord(r.label, r.conductor, r.iso_class, r.class_index, r.ainvs, deg, r.flags) if deg else r)
    return out


# isogeny classes ----------------------------------------------------------------------------


@dataclass
class IsogenyClass:
    label: str
    members: list[CurveRecord]
    degrees: dict = field(default_factory=dict)  # (label, label) -> degree, or None if unknown

    @property
    def rep(self) -> CurveRecord:
        return self.members[0]


def group_classes(records) -> list[IsogenyClass]:
    groups = defaultdict(list)
    for r in records:
        groups[r.class_label].append(r)
    out = []
    for lab in sorted(groups, key=label_key):
        members = sorted(groups[lab], key=lambda r: (r.class_index, label_key(r.label)))
        out.append(IsogenyClass(lab, members))
    return out


def _prime_isogenous(E: RationalEC) -> list[tuple[int, RationalEC]]:
    """Curves linked to E by rational isogenies of degree 2, 3 or 7."""
    sm = short_model(E)
    S = RationalEC.from_short(sm.a, sm.b)
    out = [(n, velu_isogenous(S, g)) for n in (2, 3) for g in kernel_polynomials(S, n)]
    if has_rational_7_isogeny(S)[0]:
        out += [(7, velu_isogenous(S, g)) for g in kernel_polynomials(S, 7)]
    return out


def class_degrees(cls: IsogenyClass) -> dict:
    """Isogeny degree between every pair of members; None where undetected.

    Ingested degree rows win.  Otherwise isogenies of degree 2, 3 and 7 are
    found from rational kernel polynomials and chained.
    """
    labels = [m.label for m in cls.members]
    if all(m.degrees is not None and len(m.degrees) == len(labels) for m in cls.members):
        return {(a, b): cls.members[i].degrees[j] for i, a in enumerate(labels) for j, b in enumerate(labels)}
    index = {minimal_model(m.curve).ainvs: m.label for m in cls.members}
    adj = defaultdict(list)
    for m in cls.members:
        for deg, F in _prime_isogenous(minimal_model(m.curve)):
            other = index.get(F.ainvs)
            if other is not None and other != m.label:
                adj[m.label].append((other, deg))
    out = {}
    for a in labels:
        dist = {a: 1}
        queue = deque([a])
        while queue:
            x = queue.popleft()
            for y, deg in adj[x]:
                if y not in dist:
                    dist[y] = dist[x] * deg
                    queue.append(y)
        for b in labels:
            out[(a, b)] = dist.get(b)
    return out


# step 4 --------------------------------------------------------------------------------------


@dataclass(frozen=True)
class Edge:
    a: str
    b: str
    type: SymplecticType


@dataclass
class SymplecticPartition:
    set: CongruenceSet
    blocks: tuple[tuple[str, ...], ...]
    edges: tuple[Edge, ...]
    components: tuple[tuple[tuple[str, ...], tuple[str, ...]], ...] = ()

    @property
    def complete(self) -> bool:
        return len(self.components) <= 1

    @property
    def bases(self) -> tuple[str, ...]:
        return tuple(sorted({e.type.basis.value for e in self.edges}))


def step4_partition(cset: CongruenceSet, labels, edges) -> SymplecticPartition:
    """2-colour the curves by edge signs (+1 symplectic, -1 antisymplectic).

    Raises InconsistentTypes on a sign conflict.  Curves not linked to the
    first component by decided edges form further components, and the
    partition is then incomplete (``blocks`` empty).
    """
    labels = sorted(labels, key=label_key)
    adj = defaultdict(list)
    for e in edges:
        if e.type.decided:
            adj[e.a].append((e.b, e.type.sign))
            adj[e.b].append((e.a, e.type.sign))
    colour = {}
    comps = []
    for start in labels:
        if start in colour:
            continue
        colour[start] = 1
        comp = [start]
        queue = deque([start])
        while queue:
            x = queue.popleft()
            for y, s in adj[x]:
                want = colour[x] * s
                if y not in colour:
                    colour[y] = want
                    comp.append(y)
                    queue.append(y)
                elif colour[y] != want:
                    raise InconsistentTypes(f"sign conflict around {x} -- {y}")
        plus = tuple(sorted((c for c in comp if colour[c] == 1), key=label_key))
        minus = tuple(sorted((c for c in comp if colour[c] == -1), key=label_key))
        comps.append((plus, minus))
    blocks = tuple(b for b in comps[0] if b) if len(comps) == 1 else ()
    edges = tuple(sorted(edges, key=lambda e: (label_key(e.a), label_key(e.b))))
    return SymplecticPartition(cset, blocks, edges, tuple(comps))


# pairwise typing --------------------------------------------------------------------------


_WITNESS_CACHE: dict = {}


def _witness(E: RationalEC, p: int):
    key = (E.ainvs, p)
    if key not in _WITNESS_CACHE:
        _WITNESS_CACHE[key] = trace_zero_quadratic(E, p)
    return _WITNESS_CACHE[key]


def twist_edge_type(E: RationalEC, E2: RationalEC, p: int) -> SymplecticType | None:
    """Type of E[p] = E2[p] when E2 is a twist of E covered by an internal criterion.

    Higher twists (j = 0, 1728) use the explicit partner lists, CM curves the
    CM twist rule, other quadratic twists the dihedral witness.  When both a
    CM and a dihedral answer exist they must agree.
    """
    E, E2 = minimal_model(E), minimal_model(E2)
    if E.j != E2.j:
        return None
    for tc in higher_twist_partner(E, p):
        if tc.partner.ainvs == E2.ainvs:
            return tc.type
    if E.c6 == 0 or E.c4 == 0:
        return None
    d = squarefree_part(Fraction(E2.c6, E.c6))
    if d == 1 or quadratic_twist(E, d).ainvs != E2.ainvs:
        return None
    cm_type = None
    D = is_cm(E)
    if D is not None and squarefree_part(D) == d:
        try:
            cm_type = cm_twist_congruence(E, D, p).type
        except ValueError:
            cm_type = None
    dihedral = None
    w = _witness(E, p)
    if w is not None:
        for tc in find_quadratic_twist_congruence(E, p, w):
            if tc.partner.ainvs == E2.ainvs:
                dihedral = tc.type
    if cm_type is not None and dihedral is not None and dihedral.decided and dihedral.value is not cm_type.value:
        raise OracleConflict(f"CM rule and dihedral witness disagree for d = {d}")
    return cm_type or dihedral


def twist_certificate(E: RationalEC, E2: RationalEC, p: int, ko: KOResult) -> KOResult | None:
    """Certify a pair beyond the Sturm-bound limit when it is a recognised twist pair.

    Explicit higher-twist partners and CM twists are theorems; a quadratic
    twist matched to a sampled dihedral witness is only as good as the
    sample, and is marked heuristic.
    """
    try:
        t = twist_edge_type(E, E2, p)
    except (OracleConflict, ValueError):
        return None
    if t is None or not t.decided:
        return None
    tag = "heuristic" if t.basis is Basis.QUADRATIC_TWIST else "theorem"
    return KOResult(True, None, ko.bound, ko.level, 0, f"twist {tag} ({t.basis.value}); Sturm bound out of reach")


# the pipeline ----------------------------------------------------------------------------------


@dataclass
class SetResult:
    set_id: str
    kind: str  # irreducible | reducible
    cset: CongruenceSet
    partition: SymplecticPartition | None
    verdict_method: str
    curves: tuple[str, ...]
    diagnostics: list = field(default_factory=list)
    heuristic: bool = False


@dataclass
class PipelineResult:
    p: int
    window: list[int]
    buckets: list
    sets: list[SetResult]
    distinct_j: dict
    errors: list = field(default_factory=list)

    @property
    def nontrivial_buckets(self):
        return [b for b in self.buckets if b.nontrivial]


def _pair_edges(ca: IsogenyClass, cb: IsogenyClass, p: int, oracle: OraclePack | None, diags: list) -> list[Edge]:
    edges = []
    for ma in ca.members:
        for mb in cb.members:
            Ea, Eb = ma.curve, mb.curve
            internal = twist_edge_type(Ea, Eb, p)
            if oracle is not None:
                o = external_oracle_hook(Ea, Eb, p, oracle, internal)
                if internal is None and o.decided:
                    internal = o
            if internal is not None and internal.decided:
                edges.append(Edge(ma.label, mb.label, internal))
    if not edges:
        diags.append(f"{ca.label}~{cb.label}: no criterion applies")
    return edges


def _class_edges(cls: IsogenyClass, p: int, diags: list) -> list[Edge]:
    degs = class_degrees(cls)
    edges = []
    for i, a in enumerate(cls.members):
        for b in cls.members[i + 1 :]:
            n = degs.get((a.label, b.label))
            if n is None:
                diags.append(f"{a.label}-{b.label}: isogeny degree unknown")
            elif n % p == 0:
                diags.append(f"{a.label}-{b.label}: degree {n} divisible by p")
            else:
                edges.append(Edge(a.label, b.label, isogeny_criterion(n, p)))
    return edges


def _type_set(cset, classes: dict, p: int, oracle, diags) -> SymplecticPartition:
    members = [classes[c] for c in cset.classes]
    edges = []
    for c in members:
        edges += _class_edges(c, p, diags)
    for i, ca in enumerate(members):
        for cb in members[i + 1 :]:
            edges += _pair_edges(ca, cb, p, oracle, diags)
    labels = [m.label for c in members for m in c.members]
    return step4_partition(cset, labels, edges)


DEFAULT_WINDOW_BOUND = 500000


def good_window(curves, bound: int, B: int, p: int) -> list[int]:
    """The B smallest primes above ``bound`` other than p at which every curve has good reduction."""
    disc = 1
    for E in curves:
        disc *= E.disc
    out = []
    while len(out) < B:
        for l in build_prime_window(bound, B - len(out), exclude=p):
            if disc % l:
                out.append(l)
            bound = l
    return out


def run_pipeline(
    records,
    p: int,
    window_bound: int | None = None,
    B: int = 50,
    mode: str = "full",
    jobs: int = 1,
    oracle: OraclePack | None = None,
    max_bound: int = 3 * 10**7,
) -> PipelineResult:
    """Run steps 1-5 for one prime p.

    ``mode`` is ``sieve`` (step 1 only), ``certify`` (steps 1-2) or ``full``.
    Failures on one set are recorded in ``errors`` and do not stop the run.
    """
    classes = {c.label: c for c in group_classes(records)}
    reps = {lab: minimal_model(c.rep.curve) for lab, c in classes.items()}
    if window_bound is None:
        window_bound = min(max((c.rep.conductor for c in classes.values()), default=0), DEFAULT_WINDOW_BOUND)
    window = good_window(reps.values(), max(window_bound, p), B, p)
    labs = sorted(classes, key=label_key)
    traces = batch_trace_vectors([reps[l] for l in labs], window, jobs=jobs)
    buckets = partition([(l, reps[l]) for l in labs], p, window, traces=traces)
    result = PipelineResult(p, window, buckets, [], {})
    if mode == "sieve":
        return result
    n = 0
    for bucket in result.nontrivial_buckets:
        for cset in certify_bucket(bucket, reps, p, max_bound=max_bound, fallback=twist_certificate):
            n += 1
            curves = tuple(m.label for c in cset.classes for m in classes[c].members)
            sr = SetResult(f"{p}.{n}", "", cset, None, "", curves)
            result.sets.append(sr)
    if mode == "certify":
        return result
    for sr in result.sets:
        try:
            _classify_set(sr, classes, reps, p, oracle)
        except (InconsistentTypes, OracleConflict, ValueError, ArithmeticError) as exc:
            msg = f"set {sr.set_id}: {type(exc).__name__}: {exc}"
            sr.diagnostics.append(msg)
            result.errors.append(msg)
    result.distinct_j = _distinct_j(result, classes)
    return result


def _classify_set(sr: SetResult, classes, reps, p, oracle):
    cset = sr.cset
    verdict = reducibility(reps[cset.classes[0]], p, _enough_traces(reps[cset.classes[0]], p))
    cset.reducible = verdict.reducible
    sr.verdict_method = verdict.method
    sr.heuristic = verdict.method == "frobenius-scan" and verdict.kind.value == "heuristic"
    if any("heuristic" in c.reason for c in cset.certificates.values() if c.certified):
        sr.heuristic = True
    sr.kind = "reducible" if cset.reducible else "irreducible"
    if not cset.reducible:
        sr.partition = _type_set(cset, classes, p, oracle, sr.diagnostics)
        if any(e.type.basis is Basis.QUADRATIC_TWIST for e in sr.partition.edges):
            sr.heuristic = True
        return
    if p != 7:
        sr.diagnostics.append("reducible set for p != 7: step 5 not supported")
        return
    # step 5: split by genuine isomorphism of E[7]
    groups: list[list[str]] = []
    for lab in cset.classes:
        for g in groups:
            res = reducible_congruent(reps[g[0]], reps[lab])
            if res.congruent is None:
                sr.diagnostics.append(f"{g[0]}~{lab}: field comparison undetermined ({res.comparison.note})")
            elif res.congruent:
                g.append(lab)
                break
        else:
            groups.append([lab])
    sr.diagnostics.append("step5 groups: " + " | ".join(",".join(g) for g in groups))
    big = [g for g in groups if len(g) >= 2]
    if len(big) == 1 and len(big[0]) == len(cset.classes):
        sr.partition = _type_set(cset, classes, p, oracle, sr.diagnostics)
    elif big:
        sub = CongruenceSet(p, tuple(big[0]), True, True, cset.certificates)
        sr.partition = _type_set(sub, classes, p, oracle, sr.diagnostics)
        sr.diagnostics.append(f"{len(big)} genuine subset(s); typed the first")


def _enough_traces(E: RationalEC, p: int):
    if p <= 7:
        return None
    bad = E.disc * p * 2
    ps = [l for l in primes_upto(4000).tolist() if bad % l][:300]
    return trace_vector(E, ps)


def _distinct_j(result: PipelineResult, classes) -> dict:
    js = {"irreducible": set(), "reducible": set()}
    for sr in result.sets:
        if sr.kind in js:
            for c in sr.cset.classes:
                for m in classes[c].members:
                    js[sr.kind].add(m.curve.j)
    return {k: len(v) for k, v in js.items()} | {"all": len(js["irreducible"] | js["reducible"])}


# reports -----------------------------------------------------------------------------------------

REPORT_HEADER = ["p", "set_id", "kind", "classes", "curves", "blocks", "bases", "sturm_bounds", "witnesses", "status"]


def _row(sr: SetResult, p: int) -> list[str]:
    certs = sr.cset.certificates
    bounds = sorted({(c.bound, "twist:" if c.reason else "") for c in certs.values() if c.certified})
    bounds = [f"{tag}{b}" for b, tag in bounds]
    witnesses = sorted(f"{a}/{b}:{c.witness}" for (a, b), c in certs.items() if c.witness is not None)
    part = sr.partition
    if part is None:
        blocks, bases = "", ""
    elif part.complete:
        blocks = "|".join(",".join(b) for b in part.blocks)
        bases = ",".join(part.bases)
    else:
        blocks = " ; ".join("|".join(",".join(b) for b in comp if b) for comp in part.components)
        bases = ",".join(part.bases)
    if any("Error" in d or "Conflict" in d or "Inconsistent" in d for d in sr.diagnostics):
        status = "error"
    elif part is None:
        status = "untyped"
    elif not part.complete:
        status = "undetermined"
    else:
        status = "heuristic" if sr.heuristic else "ok"
    return [
        str(p),
        sr.set_id,
        sr.kind or "unclassified",
        ",".join(sr.cset.classes),
        ",".join(sr.curves),
        blocks,
        bases,
        ",".join(bounds),
        ",".join(witnesses),
        status,
    ]


def report_tsv(results) -> str:
    """One row per congruence set; byte-stable for identical inputs."""
    lines = ["\t".join(REPORT_HEADER)]
    for res in results:
        for sr in res.sets:
            lines.append("\t".join(_row(sr, res.p)))
    return "\n".join(lines) + "\n"


def summary_tsv(results) -> str:
    """Per-prime tallies: buckets, certified sets, (ir)reducible, block counts, distinct j."""
    keys = [
        "p",
        "classes_hashed",
        "nontrivial_buckets",
        "certified_sets",
        "irreducible_sets",
        "reducible_sets",
        "single_block",
        "two_blocks",
        "undetermined",
        "set_sizes",
        "distinct_j_irreducible",
        "distinct_j_reducible",
        "errors",
    ]
    lines = ["\t".join(keys)]
    for res in results:
        sizes = defaultdict(int)
        single = double = undet = 0
        for sr in res.sets:
            sizes[len(sr.cset.classes)] += 1
            if sr.partition is not None and sr.partition.complete:
                if len(sr.partition.blocks) == 1:
                    single += 1
                else:
                    double += 1
            elif sr.kind:
                undet += 1
        row = [
            res.p,
            sum(len(b.members) for b in res.buckets),
            len(res.nontrivial_buckets),
            len(res.sets),
            sum(sr.kind == "irreducible" for sr in res.sets),
            sum(sr.kind == "reducible" for sr in res.sets),
            single,
            double,
            undet,
            ",".join(f"{k}:{v}" for k, v in sorted(sizes.items())),
            res.distinct_j.get("irreducible", 0),
            res.distinct_j.get("reducible", 0),
            len(res.errors),
        ]
        lines.append("\t".join(map(str, row)))
    return "\n".join(lines) + "\n"


# Frey-Mazur audit -----------------------------------------------------------------------------


@dataclass
class FreyMazurReport:
    M: dict  # curve label -> sorted list of (q, p)
    max_p: int | None
    same_conductor_gcds: list  # (conductor, class, class, gcd, B)

    def tsv(self) -> str:
        lines = ["kind\tkey\tvalue"]
        for lab in sorted(self.M, key=label_key):
            if self.M[lab]:
                lines.append(f"M_E\t{lab}\t" + ",".join(f"({q},{p})" for q, p in self.M[lab]))
        for N, a, b, g, B in self.same_conductor_gcds:
            lines.append(f"gcd\t{a}~{b}\t{g}@B={B}")
        lines.append(f"max_p\t-\t{self.max_p if self.max_p is not None else 'none'}")
        return "\n".join(lines) + "\n"


def m_set(E: RationalEC, p_min: int = 19) -> list[tuple[int, int]]:
    """Pairs (q, p): q multiplicative, p >= p_min prime dividing v_q(minimal discriminant)."""
    out = []
    for q, data in local_data(minimal_model(E)).items():
        if data.kind.multiplicative:
            v = data.disc_exp
            out += [(q, int(p)) for p in primes_upto(v).tolist() if p >= p_min and v % p == 0]
    return sorted(out)


def trace_gcd(E: RationalEC, E2: RationalEC, B0: int = 16, target: int = 17, B_max: int = 1 << 15) -> tuple[int, int]:
    """gcd of a_l(E) - a_l(E2) over good l <= B, doubling B until it is <= target."""
    E, E2 = minimal_model(E), minimal_model(E2)
    bad = E.disc * E2.disc
    g, B, done = 0, B0, 1
    while True:
        for l in primes_upto(B).tolist():
            if l > done and bad % l:
                g = gcd(g, ap(E, l) - ap(E2, l))
        done = B
        if (g != 0 and g <= target) or B >= B_max:
            return g, B
        B *= 2


def freymazur_audit(records, p_min: int = 19) -> FreyMazurReport:
    records = list(records)
    M = {r.label: m_set(r.curve, p_min) for r in records}
    ps = [p for pairs in M.values() for _, p in pairs]
    by_cond = defaultdict(list)
    for c in group_classes(records):
        by_cond[c.rep.conductor].append(c)
    gcds = []
    for N in sorted(by_cond):
        cl = by_cond[N]
        for i, a in enumerate(cl):
            for b in cl[i + 1 :]:
                g, B = trace_gcd(a.rep.curve, b.rep.curve)
                gcds.append((N, a.label, b.label, g, B))
    return FreyMazurReport(M, max(ps) if ps else None, gcds)
