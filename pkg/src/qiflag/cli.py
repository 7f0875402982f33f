"""Batch driver: `qiflag run config.toml`, `qiflag verify ...`, `qiflag list`.

A run writes report.json (deterministic), timings.json (wall times),
tables/<task>.csv and, for the graph task, graph.json and graph.dot.
Exit codes: 0 ok, 1 some verification failed, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib

from . import cohomodels, expo, heckeops, momentgraph, quasirings
from .coxeter import RootSystem, UnsupportedType, as_mult
from .polyring import format_poly

SCHEMA_VERSION = 1


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    root_system: str = "A1"
    lattice: str = "weight"
    multiplicity: List[int] = field(default_factory=lambda: [1])
    degree: int = 6
    box: int = 2
    tasks: List[str] = field(default_factory=list)
    output_dir: str = "qiflag-out"
    target_box: Optional[int] = None
    negative_degree: Optional[int] = None
    jobs: int = 1

    def validate(self):
        if self.degree < 0 or self.box < 0:
            raise UsageError("degreeCutoff and filtrationRadius must be >= 0")
        if self.lattice not in ("weight", "root"):
            raise UsageError("lattice must be 'weight' or 'root'")
        try:
            rs = RootSystem(self.root_system, self.lattice)
        except (UnsupportedType, ValueError, KeyError) as exc:
            raise UsageError("bad root system %r: %s" % (self.root_system, exc))
        if len(self.multiplicity) == 1 and len(rs.orbits) > 1:
            self.multiplicity = self.multiplicity * len(rs.orbits)
        if len(self.multiplicity) != len(rs.orbits):
            raise UsageError("multiplicity needs %d value(s) (one per root orbit) for %s"
                             % (len(rs.orbits), rs.label))
        if any(v < 0 for v in self.multiplicity):
            raise UsageError("multiplicities must be nonnegative")
        self.tasks = expand_tasks(self.tasks)
        return rs

    def public(self) -> dict:
        d = asdict(self)
        d.pop("jobs")
        d.pop("output_dir")
        return d


# -- tasks --------------------------------------------------------------------------

@dataclass
class Task:
    id: str
    module: str
    asserts: bool
    summary: str
    fn: Callable


@dataclass
class Ctx:
    rs: RootSystem
    mult: List[int]
    D: int
    N: int
    target_box: Optional[int]
    negative_degree: Optional[int]

    @property
    def m(self):
        return as_mult(self.rs, self.mult)


def _dims_table(name, dims):
    return (["degree", name], [[d, v] for d, v in enumerate(dims)])


def t_qinv_basis(c: Ctx):
    ring = quasirings.QuasiInvariantRing(c.rs, c.m)
    dims = ring.dims(c.D)
    basis = {str(d): [format_poly(p) for p in ring.polys(d)] for d in range(c.D + 1)}
    return {"status": "data-only", "k": list(c.m.values), "dims": dims, "basis": basis}, \
        _dims_table("dim", dims)


def t_qcov_basis(c: Ctx):
    ring = quasirings.QuasiCovariantRing(c.rs, c.m)
    dims = ring.dims(c.D)
    return {"status": "data-only", "m": list(c.m.values), "dims": dims}, _dims_table("dim", dims)


def t_diag_inv(c: Ctx):
    r = quasirings.diag_invariants_check(c.rs, c.m, c.D)
    rows = [[x["degree"], x["invariantDim"], x["qinvDim"], int(x["equal"])] for x in r["degrees"]]
    return r, (["degree", "invariantDim", "qinvDim", "equal"], rows)


def t_borel_iso(c: Ctx):
    r = quasirings.borel_iso_check(c.rs, c.m, c.D)
    rows = [[x["degree"], x["qcovDim"], x["borelCoefficient"], int(x["imagesSpan"])]
            for x in r["degrees"]]
    return r, (["degree", "qcovDim", "borelCoefficient", "imagesSpan"], rows)


def t_freeness(c: Ctx):
    D = max(c.D, quasirings.default_freeness_degree(c.rs, c.m))
    r = quasirings.freeness_certificate(c.rs, c.m, D)
    rows = [[d, h, q] for d, (h, q) in enumerate(zip(r["hilbert"], r["quotientSeries"]))]
    return r, (["degree", "hilbert", "quotient"], rows)


def _neg_degree(c: Ctx):
    return c.negative_degree if c.negative_degree is not None else c.D + 2


def _with_negative(stab, neg, applicable):
    out = dict(stab)
    if applicable:
        out["negativeControl"] = neg
        if stab["status"] == "pass" and neg["status"] != "pass":
            out["status"] = "fail"
            out["witness"] = {"negativeControl": neg.get("witness")}
    else:
        out["negativeControl"] = {"status": "data-only",
                                  "note": "k = 0: the wrong-parity space is also preserved"}
    return out


def t_nilhecke(c: Ctx):
    stab = heckeops.nilhecke_stability(c.rs, c.m, c.D)
    neg = heckeops.nilhecke_negative(c.rs, c.m, _neg_degree(c))
    return _with_negative(stab, neg, True), None


def t_cherednik(c: Ctx):
    stab = heckeops.cherednik_stability(c.rs, c.m, c.D)
    applicable = any(c.mult)
    neg = heckeops.cherednik_negative(c.rs, c.m, _neg_degree(c)) if applicable else None
    return _with_negative(stab, neg, applicable), None


def t_t_deform(c: Ctx):
    rows = []
    entries = []
    ok = True
    norb = len(c.rs.orbits)
    for t in (0, 1):
        for kv in range(3):
            for mv in range(4):
                r = heckeops.t_deformed_check(c.rs, t, [kv] * norb, [mv] * norb, c.D)
                entries.append({"t": t, "k": kv, "m": mv, "predicted": r["predicted"],
                                "stable": r["stable"], "status": r["status"]})
                rows.append([t, kv, mv, int(r["predicted"]), int(r["stable"])])
                ok = ok and r["status"] == "pass"
    rep = {"status": "pass" if ok else "fail", "degreeCutoff": c.D, "grid": entries}
    if not ok:
        rep["witness"] = next(e for e in entries if e["status"] != "pass")
    return rep, (["t", "k", "m", "predicted", "stable"], rows)


def t_dunkl_comm(c: Ctx):
    return heckeops.dunkl_commutativity(c.rs, c.m, c.D), None


def t_nilhecke_rel(c: Ctx):
    return heckeops.nilhecke_relations(c.rs, c.D), None


def t_h_even(c: Ctx):
    r = cohomodels.h_even(c.rs, c.m, c.D)
    rows = [[d, k, q] for d, (k, q) in enumerate(zip(r["kernelDims"], r["qinvDims"]))]
    return r, (["degree", "kernelDim", "qinvDim"], rows)


def t_h_odd(c: Ctx):
    r = cohomodels.h_odd(c.rs, c.m, c.D)
    return r, _dims_table("cokernelDim", r["cokernelDims"])


def t_coinv(c: Ctx):
    r = cohomodels.coinvariants(c.rs, c.m)
    return r, _dims_table("dim", r["dims"])


def t_skeleton(c: Ctx):
    r = cohomodels.skeleton_cohomology(c.rs, c.D)
    rows = [[e["degree"], e["source"], e["target"], e["kernel"], e["cokernel"]] for e in r["euler"]]
    return r, (["degree", "source", "target", "kernel", "cokernel"], rows)


def t_graph(c: Ctx):
    g = momentgraph.bruhat_graph(c.rs)
    files = {"graph.json": momentgraph.graph_to_json(g, c.m),
             "graph.dot": momentgraph.graph_to_dot(g, c.m)}
    return {"status": "data-only", "vertices": len(g.vertices), "edges": len(g.edges),
            "files": sorted(files), "_files": files}, None


def t_thicken(c: Ctx):
    g = momentgraph.bruhat_graph(c.rs)
    total, per_edge = momentgraph.thickened_counts(g, c.m)
    # direct enumeration of the objects: vertices and nonempty subsets per edge
    listed = len(g.vertices)
    for e in g.edges:
        me = c.m(e.root)
        listed += sum(1 for r in range(1, me + 2)
                      for _ in itertools.combinations(range(me + 1), r))
    ok = listed == total
    r = {"status": "pass" if ok else "fail", "m": list(c.m.values), "objects": total,
         "enumerated": listed, "perEdge": per_edge}
    if not ok:
        r["witness"] = {"formula": total, "enumerated": listed}
    return r, None


def t_pi1(c: Ctx):
    g = momentgraph.bruhat_graph(c.rs)
    ngens, rels, factors = momentgraph.pi1_presentation(g)
    r_plus = len(c.rs.positive_roots)
    ok = factors == [2] * r_plus and ngens == r_plus
    r = {"status": "pass" if ok else "fail", "generators": ngens, "relations": rels,
         "abelianization": factors}
    if not ok:
        r["witness"] = {"abelianization": factors, "expected": [2] * r_plus}
    return r, None


def t_exp_qinv(c: Ctx):
    return expo.exp_qinv_report(c.rs, c.m, c.N), None


def t_exp_diag(c: Ctx):
    return expo.exp_diag_invariants_check(c.rs, c.m, c.N), None


def _target_box(c: Ctx):
    return c.target_box if c.target_box is not None else max(c.N // 2, 0)


def t_exp_borel(c: Ctx):
    return expo.exp_borel_iso_check(c.rs, c.m, c.N, _target_box(c)), None


def t_exp_hecke(c: Ctx):
    return expo.hecke_stability(c.rs, c.m, c.N), None


def t_trig_dunkl(c: Ctx):
    return expo.trig_stability(c.rs, c.m, c.N), None


def t_rank1_char(c: Ctx):
    return expo.rank1_characterization_check(c.rs, c.m, c.N), None


def t_conj_free(c: Ctx):
    return expo.conjecture_experiment(c.rs, c.m, c.N, _target_box(c)), None


def t_join_oracle(c: Ctx):
    rows = []
    ok = True
    witness = None
    from .ratcore import same_span
    from .polyring import dim_poly
    for a in range(len(c.rs.positive_roots)):
        ka = c.m(a)
        for d in range(c.D + 1):
            j = quasirings.iterated_join_basis(c.rs, a, ka, d)
            q = quasirings.qinv_single_basis(c.rs, a, ka, d)
            N = dim_poly(c.rs.rank, d)
            eq = same_span(j, q, N) if (j or q) else True
            rows.append([a, ka, d, len(j), len(q), int(eq)])
            if not eq and witness is None:
                ok = False
                witness = {"root": a, "k": ka, "degree": d, "joinDim": len(j), "directDim": len(q)}
    r = {"status": "pass" if ok else "fail", "checked": len(rows)}
    if witness:
        r["witness"] = witness
    return r, (["root", "k", "degree", "joinDim", "directDim", "equal"], rows)


_TASKS = [
    Task("qinv-basis", "quasirings", False, "quasi-invariant bases and graded dims", t_qinv_basis),
    Task("qcov-basis", "quasirings", False, "spline (quasi-covariant) graded dims", t_qcov_basis),
    Task("diag-inv", "quasirings", True, "diagonal invariants of Q_m vs twisted Q_[m/2]", t_diag_inv),
    Task("borel-iso", "quasirings", True, "Borel presentation of Q_{2k+1}", t_borel_iso),
    Task("freeness", "quasirings", True, "freeness certificate for Q_m", t_freeness),
    Task("nilhecke", "heckeops", True, "Demazure stability of Q_{2k+1}", t_nilhecke),
    Task("cherednik", "heckeops", True, "Dunkl stability of Q_{2k}", t_cherednik),
    Task("t-deform", "heckeops", True, "t-deformed stability vs the parity predicate", t_t_deform),
    Task("dunkl-comm", "heckeops", True, "Dunkl operators commute", t_dunkl_comm),
    Task("nilhecke-rel", "heckeops", True, "nil-Hecke relations", t_nilhecke_rel),
    Task("h-even", "cohomodels", True, "even cohomology vs Q_k", t_h_even),
    Task("h-odd", "cohomodels", True, "odd cohomology (cokernel) dims", t_h_odd),
    Task("coinv", "cohomodels", True, "coinvariant dims of Q_k", t_coinv),
    Task("skeleton", "cohomodels", True, "one-skeleton complex vs Q_1 splines", t_skeleton),
    Task("graph", "momentgraph", False, "Bruhat moment graph export", t_graph),
    Task("thicken", "momentgraph", True, "object counts of the thickened graph", t_thicken),
    Task("pi1", "momentgraph", True, "abelianized fundamental group", t_pi1),
    Task("exp-qinv", "expo", True, "exponential quasi-invariants in F_N", t_exp_qinv),
    Task("exp-diag", "expo", True, "congruence conditions and diagonal invariants in F_N", t_exp_diag),
    Task("exp-borel", "expo", True, "exponential Borel map containment and span", t_exp_borel),
    Task("exp-hecke", "expo", True, "Hecke stability of Q'_{2k+1} in F_N", t_exp_hecke),
    Task("trig-dunkl", "expo", True, "trigonometric Dunkl stability of Q_{2k} in F_N", t_trig_dunkl),
    Task("rank1-char", "expo", True, "rank-one divisibility characterization", t_rank1_char),
    Task("conj-free", "expo", False, "generator search for Q_{2k} (evidence only)", t_conj_free),
    Task("join-oracle", "quasirings", True, "iterated joins vs direct quasi-invariants", t_join_oracle),
]

REGISTRY: Dict[str, Task] = {t.id: t for t in _TASKS}


def registry() -> List[str]:
    return [t.id for t in _TASKS]


def expand_tasks(ids: List[str]) -> List[str]:
    out = []
    for i in ids:
        if i == "all":
            out.extend(t.id for t in _TASKS if t.asserts)
        elif i in REGISTRY:
            out.append(i)
        else:
            raise UsageError("unknown task %r; registered tasks: %s" % (i, ", ".join(registry())))
    seen = set()
    return [x for x in out if not (x in seen or seen.add(x))]


# -- running --------------------------------------------------------------------------

def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else int(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def _run_one(args):
    task_id, cfg = args
    rs = RootSystem(cfg["root_system"], cfg["lattice"])
    ctx = Ctx(rs, cfg["multiplicity"], cfg["degree"], cfg["box"], cfg["target_box"],
              cfg["negative_degree"])
    t0 = time.perf_counter()
    result, table = REGISTRY[task_id].fn(ctx)
    wall = time.perf_counter() - t0
    if result.get("status") == "fail" and "witness" not in result:
        result["witness"] = {"reason": "unspecified failure"}
    return task_id, result, table, wall


def run(cfg: RunConfig) -> List[dict]:
    """Execute the configured tasks; returns one report per task."""
    cfg.validate()
    pub = cfg.public()
    jobs = [(t, pub) for t in cfg.tasks]
    if cfg.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as ex:
            results = list(ex.map(_run_one, jobs))
    else:
        results = [_run_one(j) for j in jobs]
    reports = []
    for task_id, result, table, wall in results:
        reports.append({"task": task_id, "module": REGISTRY[task_id].module,
                        "status": result.get("status", "data-only"),
                        "result": result, "table": table, "wallTime": wall})
    return reports


def _csv(table) -> str:
    header, rows = table
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def write_outputs(cfg: RunConfig, reports: List[dict]) -> str:
    out = cfg.output_dir
    os.makedirs(out, exist_ok=True)
    body = []
    timings = {}
    for r in reports:
        res = dict(r["result"])
        files = res.pop("_files", None)
        if files:
            for name, content in files.items():
                with open(os.path.join(out, name), "w") as fh:
                    fh.write(content)
        if r["table"] is not None:
            os.makedirs(os.path.join(out, "tables"), exist_ok=True)
            with open(os.path.join(out, "tables", r["task"] + ".csv"), "w") as fh:
                fh.write(_csv(r["table"]))
        body.append({"task": r["task"], "module": r["module"], "status": r["status"],
                     "result": _jsonable(res)})
        timings[r["task"]] = round(r["wallTime"], 4)
    doc = {"schemaVersion": SCHEMA_VERSION, "config": _jsonable(cfg.public()), "reports": body}
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    with open(os.path.join(out, "report.json"), "w") as fh:
        fh.write(text)
    with open(os.path.join(out, "timings.json"), "w") as fh:
        fh.write(json.dumps(timings, indent=2, sort_keys=True) + "\n")
    return text


# -- config parsing -----------------------------------------------------------------------

_KEYS = {
    "rootSystem": "root_system", "type": "root_system",
    "lattice": "lattice",
    "multiplicity": "multiplicity", "mult": "multiplicity",
    "degreeCutoff": "degree", "degree": "degree",
    "filtrationRadius": "box", "box": "box",
    "targetBox": "target_box",
    "negativeDegree": "negative_degree",
    "tasks": "tasks",
    "outputDir": "output_dir", "out": "output_dir",
    "jobs": "jobs",
}


def parse_mult(v) -> List[int]:
    if isinstance(v, int):
        return [v]
    if isinstance(v, list):
        vals = v
    else:
        vals = [x for x in str(v).replace(" ", "").split(",") if x]
    try:
        return [int(x) for x in vals]
    except (TypeError, ValueError):
        raise UsageError("multiplicity must be integers, got %r" % (v,))


def config_from_mapping(data: dict, base: Optional[RunConfig] = None) -> RunConfig:
    cfg = base or RunConfig()
    for key, val in data.items():
        attr = _KEYS.get(key)
        if attr is None:
            raise UsageError("unknown config key %r; known keys: %s" % (key, ", ".join(sorted(_KEYS))))
        if attr == "multiplicity":
            val = parse_mult(val)
        elif attr == "tasks":
            if isinstance(val, str):
                val = [val]
            if not isinstance(val, list) or not all(isinstance(x, str) for x in val):
                raise UsageError("tasks must be a list of task ids")
        elif attr in ("degree", "box", "target_box", "negative_degree", "jobs"):
            if not isinstance(val, int) or isinstance(val, bool):
                raise UsageError("%s must be an integer" % key)
        elif not isinstance(val, str):
            raise UsageError("%s must be a string" % key)
        setattr(cfg, attr, val)
    return cfg


def load_config(path: str) -> RunConfig:
    try:
        with open(path, "rb") as fh:
            text = fh.read().decode("utf-8")
    except FileNotFoundError:
        raise UsageError("config file not found: %s" % path)
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        line, col = getattr(exc, "lineno", None), getattr(exc, "colno", None)
        if line is None:
            pos = getattr(exc, "pos", None)
            pos = len(text) if pos is None else pos
            line = text.count("\n", 0, pos) + 1
            col = pos - (text.rfind("\n", 0, pos) + 1) + 1
        msg = getattr(exc, "msg", str(exc))
        raise UsageError("%s:%d:%d: parse error at line %d, column %d: %s"
                         % (path, line, col, line, col, msg))
    return config_from_mapping(data)


def _add_overrides(p):
    p.add_argument("--type", dest="type")
    p.add_argument("--lattice", choices=["weight", "root"])
    p.add_argument("--mult", help="comma-separated, one value per root orbit")
    p.add_argument("--degree", type=int)
    p.add_argument("--box", type=int, help="filtration radius N for the Laurent tasks")
    p.add_argument("--task", action="append", help="task id or 'all'; repeatable or comma-separated")
    p.add_argument("--out", help="output directory")
    p.add_argument("--jobs", type=int)


def _apply_overrides(cfg: RunConfig, ns) -> RunConfig:
    over = {}
    for flag in ("type", "lattice", "mult", "degree", "box", "out", "jobs"):
        v = getattr(ns, flag)
        if v is not None:
            over[flag] = v
    if ns.task:
        over["tasks"] = [t for arg in ns.task for t in arg.split(",") if t]
    return config_from_mapping(over, cfg)


def build_parser():
    ap = argparse.ArgumentParser(prog="qiflag", description="quasi-invariant and spline computations")
    sub = ap.add_subparsers(dest="command", required=True)
    pr = sub.add_parser("run", help="run the tasks of a TOML config")
    pr.add_argument("config")
    _add_overrides(pr)
    pv = sub.add_parser("verify", help="run tasks given on the command line")
    _add_overrides(pv)
    sub.add_parser("list", help="list registered tasks")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    ns = ap.parse_args(argv)
    if ns.command == "list":
        for t in _TASKS:
            kind = "check" if t.asserts else "data"
            print("%-13s %-12s %-6s %s" % (t.id, t.module, kind, t.summary))
        return 0
    try:
        cfg = load_config(ns.config) if ns.command == "run" else RunConfig()
        cfg = _apply_overrides(cfg, ns)
        reports = run(cfg)
    except UsageError as exc:
        print("qiflag: error: %s" % exc, file=sys.stderr)
        return 2
    write_outputs(cfg, reports)
    failed = [r["task"] for r in reports if r["status"] == "fail"]
    for r in reports:
        print("%-13s %s" % (r["task"], r["status"]))
    print("wrote %s" % os.path.join(cfg.output_dir, "report.json"))
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
