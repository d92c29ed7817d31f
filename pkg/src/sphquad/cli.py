"""Command-line front end and experiment engine.

Usage::

    sphquad integrate --config table1.cfg --out table1.csv
    sphquad integrate rules=design t=5:30:5 functions=f1,f3
    sphquad wce rules=design t=4,8,12,16,20 s=1.5,2.5
    sphquad geometry rules=equal_area N=100,400,900
    sphquad gen-design 5 36 --out design5.txt
    sphquad verify design5.txt 5 1e-12
    sphquad partition 400 --out eq400.txt

Config files are flat ``key = value`` lines (``#`` starts a comment).
``key=value`` arguments after the subcommand override the file, and the
named flags override both. Sweeps are comma lists or inclusive
``start:stop[:step]`` ranges.

Exit status is 0 on success, 2 for configuration or input errors and 3 when
any numerical step fails (the CSV is still written, with a status column).
"""
from __future__ import annotations

import argparse
import csv
import io
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import designs, geometry, rules, testfns, transforms, wce
from .errors import NotUnitError, ParseError, SphQuadError
from .sphere import PointSet

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3

RULE_KINDS = ("design", "equal_area", "trapezoidal", "file")
REPORT_ONLY = "conjecture (report-only)"


class ConfigError(SphQuadError):
    """Malformed or inconsistent experiment configuration."""


# -- configuration ------------------------------------------------------------

def parse_config_text(text: str, source: str = "<config>") -> dict[str, str]:
    out = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected key = value, got {raw.strip()!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if not key:
            raise ConfigError(f"{source}:{lineno}: empty key")
        if key in out:
            raise ConfigError(f"{source}:{lineno}: duplicate key {key!r}")
        out[key] = value
    return out


def _split(value: str) -> list[str]:
    return [v.strip() for v in value.split(",") if v.strip()]


def parse_int_list(value: str, key: str = "value") -> tuple[int, ...]:
    out = []
    try:
        for item in _split(value):
            if ":" in item:
                parts = [int(p) for p in item.split(":")]
                if len(parts) not in (2, 3) or (len(parts) == 3 and parts[2] <= 0):
                    raise ValueError
                step = parts[2] if len(parts) == 3 else 1
                out.extend(range(parts[0], parts[1] + 1, step))
            else:
                out.append(int(item))
    except ValueError:
        raise ConfigError(f"{key}: cannot read {value!r} as integers or start:stop[:step]") from None
    return tuple(out)


def parse_float_list(value: str, key: str = "value") -> tuple[float, ...]:
    try:
        return tuple(float(v) for v in _split(value))
    except ValueError:
        raise ConfigError(f"{key}: cannot read {value!r} as numbers") from None


def parse_transform(label: str) -> tuple[str, float | None]:
    kind, _, arg = label.strip().lower().partition(":")
    if kind == "none" and not arg:
        return "none", None
    if kind in ("atkinson", "sidi"):
        try:
            g = float(arg)
        except ValueError:
            raise ConfigError(f"transform {label!r}: expected {kind}:<number>") from None
        if not g >= 1.0:
            raise ConfigError(f"transform {label!r}: grading must be >= 1")
        return kind, g
    raise ConfigError(f"unknown transform {label!r}; use none, atkinson:<q> or sidi:<m>")


def _bool(value: str, key: str) -> bool:
    v = value.strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"{key}: expected true/false, got {value!r}")


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything one run needs; built from a flat key-value mapping."""

    rules: tuple[str, ...] = ("design",)
    t: tuple[int, ...] = ()
    N: tuple[int, ...] = ()
    n: tuple[int, ...] = ()
    point_files: tuple[str, ...] = ()
    functions: tuple[str, ...] = ("f1",)
    transforms: tuple[tuple[str, float | None], ...] = (("none", None),)
    trapezoidal_grading: tuple[str, float | None] = ("atkinson", 2.5)
    s: tuple[float, ...] = (1.5,)
    conjecture_t: int | None = None
    conjecture_N: tuple[int, ...] = ()
    reference: str = "table"
    resolution: int = 200
    seed: int = 0
    threads: int = 1
    wall_ms: bool = False
    out: str | None = None

    # keys are case-sensitive: N sizes equal-area rules, n trapezoidal grids
    _KEYS = (
        "rules", "rule", "t", "N", "n", "point_files", "functions", "function",
        "transforms", "transform", "trapezoidal_grading", "s", "conjecture_t", "conjecture_N", "reference",
        "resolution", "seed", "threads", "wall_ms", "out",
    )

    @classmethod
    def from_mapping(cls, kv: dict[str, str]) -> "ExperimentConfig":
        unknown = sorted(set(kv) - set(cls._KEYS))
        if unknown:
            raise ConfigError(f"unknown config key(s): {', '.join(unknown)}")
        cfg = {}
        if "rules" in kv or "rule" in kv:
            cfg["rules"] = tuple(r.lower() for r in _split(kv.get("rules", kv.get("rule", ""))))
            bad = [r for r in cfg["rules"] if r not in RULE_KINDS]
            if bad:
                raise ConfigError(f"unknown rule(s) {bad}; choose from {list(RULE_KINDS)}")
        for key in ("t", "n"):
            if key in kv:
                cfg[key] = parse_int_list(kv[key], key)
        if "N" in kv:
            cfg["N"] = parse_int_list(kv["N"], "N")
        if "point_files" in kv:
            cfg["point_files"] = tuple(_split(kv["point_files"]))
        if "functions" in kv or "function" in kv:
            fns = tuple(f.lower() for f in _split(kv.get("functions", kv.get("function", ""))))
            bad = [f for f in fns if f not in testfns.FUNCTIONS]
            if bad:
                raise ConfigError(f"unknown function(s) {bad}; choose from {sorted(testfns.FUNCTIONS)}")
            cfg["functions"] = fns
        if "transforms" in kv or "transform" in kv:
            cfg["transforms"] = tuple(
                parse_transform(x) for x in _split(kv.get("transforms", kv.get("transform", "")))
            )
        if "trapezoidal_grading" in kv:
            cfg["trapezoidal_grading"] = parse_transform(kv["trapezoidal_grading"])
        if "s" in kv:
            cfg["s"] = parse_float_list(kv["s"], "s")
            for s in cfg["s"]:
                try:
                    wce.SobolevParam(s)
                except wce.OutOfRangeError as exc:
                    raise ConfigError(f"OutOfRange: {exc}") from None
        if "conjecture_t" in kv:
            cfg["conjecture_t"] = parse_int_list(kv["conjecture_t"], "conjecture_t")[0]
        if "conjecture_N" in kv:
            cfg["conjecture_N"] = parse_int_list(kv["conjecture_N"], "conjecture_N")
        if "reference" in kv:
            ref = kv["reference"].strip().lower()
            if ref not in ("table", "oracle"):
                raise ConfigError("reference must be 'table' or 'oracle'")
            cfg["reference"] = ref
        for key in ("resolution", "seed", "threads"):
            if key in kv:
                try:
                    cfg[key] = int(kv[key])
                except ValueError:
                    raise ConfigError(f"{key}: expected an integer, got {kv[key]!r}") from None
        if "wall_ms" in kv:
            cfg["wall_ms"] = _bool(kv["wall_ms"], "wall_ms")
        if "out" in kv:
            cfg["out"] = kv["out"]
        return cls(**cfg).validated()

    def validated(self) -> "ExperimentConfig":
        if self.resolution < 1:
            raise ConfigError("resolution must be >= 1")
        if self.threads < 1:
            raise ConfigError("threads must be >= 1")
        if self.seed < 0:
            raise ConfigError("seed must be >= 0")
        for r in self.rules:
            sweep = {"design": self.t, "equal_area": self.N, "trapezoidal": self.n,
                     "file": self.point_files}[r]
            if not sweep:
                need = {"design": "t", "equal_area": "N", "trapezoidal": "n", "file": "point_files"}[r]
                raise ConfigError(f"rule {r!r} needs a non-empty {need} sweep")
        if any(v < 0 for v in self.t) or any(v < 1 for v in self.N) or any(v < 1 for v in self.n):
            raise ConfigError("sweep values out of range")
        for p in self.point_files:
            if not Path(p).is_file():
                raise ConfigError(f"point file not found: {p}")
        if not self.functions or not self.transforms or not self.s:
            raise ConfigError("functions, transforms and s must be non-empty")
        return self


def load_config(path: str | None, overrides: list[str], flags: dict) -> ExperimentConfig:
    kv: dict[str, str] = {}
    if path is not None:
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
        kv.update(parse_config_text(text, path))
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"expected key=value override, got {item!r}")
        k, v = item.split("=", 1)
        kv[k.strip()] = v.strip()
    for k, v in flags.items():
        if v is not None:
            kv[k] = str(v)
    return ExperimentConfig.from_mapping(kv)


# -- reports -----------------------------------------------------------------

def fmt(x) -> str:
    """Cell text: floats with 17 significant digits, ``None`` as empty."""
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    return str(x)


@dataclass
class ExperimentReport:
    columns: tuple[str, ...]
    rows: list[tuple] = field(default_factory=list)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n", quoting=csv.QUOTE_MINIMAL)
        w.writerow(self.columns)
        for row in self.rows:
            w.writerow([fmt(v) for v in row])
        return buf.getvalue()

    @property
    def failed(self) -> bool:
        if "status" not in self.columns:
            return False
        k = self.columns.index("status")
        return any(r[k] != "ok" for r in self.rows)


def write_output(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(out, "w", newline="\n") as fh:
        fh.write(text)


# -- rule instances ----------------------------------------------------------

@dataclass(frozen=True)
class RuleInstance:
    label: str
    size_param: int | None
    rule: rules.QuadratureRule


def _design_rule(t: int, seed: int, n: int | None = None) -> rules.QuadratureRule:
    cand = designs.generate_design(t, n=n, seed=seed)
    return rules.QuadratureRule.equal_weight(cand.points, "design", t=t, seed=seed)


def _pmap(fn, items, threads):
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def build_rules(cfg: ExperimentConfig) -> list[RuleInstance]:
    """Rule instances in config order; designs are generated in the pool."""
    jobs = []
    for kind in cfg.rules:
        if kind == "design":
            jobs += [("design", t) for t in cfg.t]
        elif kind == "equal_area":
            jobs += [("equal_area", N) for N in cfg.N]
        elif kind == "trapezoidal":
            jobs += [("trapezoidal", n) for n in cfg.n]
        else:
            jobs += [("file", p) for p in cfg.point_files]

    def make(job):
        kind, p = job
        if kind == "design":
            return RuleInstance("design", p, _design_rule(p, cfg.seed))
        if kind == "equal_area":
            return RuleInstance("equal_area", None, rules.equal_area_rule(p))
        if kind == "trapezoidal":
            return RuleInstance("trapezoidal", p, rules.trapezoidal_rule(p))
        pts = designs.load_pointset(p)
        rule = rules.QuadratureRule.equal_weight(pts, "file", path=p)
        return RuleInstance(f"file:{Path(p).name}", pts.t, rule)

    return _pmap(make, jobs, cfg.threads)


def transform_spec(kind: str, grading: float | None, fn: testfns.TestFunction):
    kw = {"singular_point": fn.sphere_singular_point, "surface": fn.surface}
    if kind == "atkinson":
        return transforms.TransformSpec.atkinson(grading, **kw)
    if kind == "sidi":
        return transforms.TransformSpec.sidi(grading, **kw)
    return transforms.TransformSpec.none(**kw)


# -- commands ----------------------------------------------------------------

INTEGRATE_COLUMNS = (
    "rule", "N", "t_or_n", "function", "transform", "q_or_m",
    "estimate", "exact", "abs_error", "rel_error", "status",
)


def cmd_integrate(cfg: ExperimentConfig) -> ExperimentReport:
    """One row per rule instance x function x transform, in config order.

    Trapezoidal rows with transform ``none`` use ``trapezoidal_grading``
    (Atkinson q = 2.5 unless configured), and the row reports the grading
    actually applied.
    """
    insts = build_rules(cfg)
    exact = {}
    for fid in cfg.functions:
        fn = testfns.get(fid)
        exact[fid] = fn.exact if cfg.reference == "table" else testfns.reference_integral(fn)
    cells = [(inst, fid, tr) for inst in insts for fid in cfg.functions for tr in cfg.transforms]

    def run(cell):
        inst, fid, (kind, grading) = cell
        if inst.label == "trapezoidal" and kind == "none":
            kind, grading = cfg.trapezoidal_grading
        fn = testfns.get(fid)
        spec = transform_spec(kind, grading, fn)
        t0 = time.perf_counter()
        try:
            est = transforms.integrate_singular(inst.rule, fn, spec)
            status = "ok"
        except SphQuadError as exc:
            est, status = None, type(exc).__name__
            print(f"sphquad: {inst.label} N={inst.rule.n} {fid} {spec.label}: {exc}", file=sys.stderr)
        ms = 1e3 * (time.perf_counter() - t0)
        ex = exact[fid]
        err = abs(est - ex) if est is not None else None
        rel = err / abs(ex) if err is not None else None
        row = (inst.label, inst.rule.n, inst.size_param, fid, kind, grading, est, ex, err, rel, status)
        return row + ((ms,) if cfg.wall_ms else ())

    cols = INTEGRATE_COLUMNS + (("wall_ms",) if cfg.wall_ms else ())
    return ExperimentReport(cols, _pmap(run, cells, cfg.threads))


WCE_COLUMNS = ("table", "pointset", "N", "t", "s", "integer_s", "wce", "status")


def _wce_rows(table, label, pts, t, s_values):
    xyz = np.asarray(pts)
    out = []
    for s in s_values:
        try:
            val, status = wce.wce(xyz, s), "ok"
        except SphQuadError as exc:
            val, status = None, type(exc).__name__
            print(f"sphquad: wce {label} s={s}: {exc}", file=sys.stderr)
        out.append((table, label, xyz.shape[0], t, s, float(s).is_integer(), val, status))
    return out


def cmd_wce(cfg: ExperimentConfig) -> ExperimentReport:
    """Worst-case errors of every configured point set, then the conjecture table.

    The conjecture rows (designs of one fixed degree with increasing N) are
    printed for inspection only; nothing is asserted about their ordering.
    """
    insts = build_rules(cfg)
    jobs = [("ladder", i.label, i.rule.points, i.size_param) for i in insts]
    if cfg.conjecture_t is not None:
        t = cfg.conjecture_t
        sizes = cfg.conjecture_N or ((t + 1) ** 2,)
        cands = _pmap(lambda n: designs.generate_design(t, n=n, seed=cfg.seed), list(sizes), cfg.threads)
        jobs += [(REPORT_ONLY, "design", c.points, t) for c in cands]
    # point files sharing a claimed degree are compared as well
    by_t: dict[int, list] = {}
    for i in insts:
        if i.label.startswith("file:") and i.size_param is not None:
            by_t.setdefault(i.size_param, []).append(i)
    for t, group in by_t.items():
        if len(group) > 1:
            for i in sorted(group, key=lambda g: g.rule.n):
                jobs.append((REPORT_ONLY, i.label, i.rule.points, t))
    chunks = _pmap(lambda j: _wce_rows(*j, cfg.s), jobs, cfg.threads)
    return ExperimentReport(WCE_COLUMNS, [r for c in chunks for r in c])


GEOMETRY_COLUMNS = ("pointset", "N", "t_or_n", "mesh_norm", "min_angle", "mesh_ratio", "resolution", "status")


def cmd_geometry(cfg: ExperimentConfig) -> ExperimentReport:
    insts = build_rules(cfg)

    def run(inst):
        pts = rules.distinct_nodes(inst.rule) if inst.label == "trapezoidal" else inst.rule.points
        try:
            rep = geometry.geometry_report(pts, cfg.resolution)
            vals, status = (rep.mesh_norm, rep.min_angle, rep.mesh_ratio), "ok"
        except SphQuadError as exc:
            vals, status = (None, None, None), type(exc).__name__
            print(f"sphquad: geometry {inst.label}: {exc}", file=sys.stderr)
        return (inst.label, pts.n, inst.size_param) + vals + (cfg.resolution, status)

    return ExperimentReport(GEOMETRY_COLUMNS, _pmap(run, insts, cfg.threads))


def cmd_gen_design(t: int, N: int | None, out: str | None, seed: int = 0) -> designs.DesignCandidate:
    cand = designs.generate_design(t, n=N, seed=seed)
    comment = f"spherical {t}-design, N={cand.points.n}, A_N,t={cand.residual:.3e}, seed={seed}"
    if out is None or out == "-":
        buf = io.StringIO()
        for x, y, z in np.asarray(cand.points):
            buf.write(f"{x:.17g} {y:.17g} {z:.17g}\n")
        sys.stdout.write(f"# {comment}\n" + buf.getvalue())
    else:
        designs.save_pointset(cand.points, out, comment)
    return cand


VERIFY_COLUMNS = ("path", "N", "t", "residual", "max_poly_error", "tol", "status")


def cmd_verify(path: str, t: int | None, tol: float) -> ExperimentReport:
    pts = designs.load_pointset(path, t)
    if pts.t is None:
        raise ConfigError(f"{path}: degree not given and not recognisable from the file name")
    res = designs.verify_design(pts, pts.t, tol)
    status = "ok" if res.ok else "not-a-design"
    return ExperimentReport(VERIFY_COLUMNS, [(path, pts.n, pts.t, res.residual, res.max_poly_error, tol, status)])


# -- entry point --------------------------------------------------------------

def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH")
    common.add_argument("--out", metavar="PATH")
    common.add_argument("--seed", type=int, metavar="INT")
    common.add_argument("--threads", type=int, metavar="INT")
    common.add_argument("--resolution", type=int, metavar="INT")

    p = argparse.ArgumentParser(prog="sphquad", description="Quadrature experiments on the unit sphere.")
    sub = p.add_subparsers(dest="command", required=True)
    for name, text in (
        ("integrate", "integration errors of the test functions"),
        ("wce", "worst-case errors in Sobolev spaces"),
        ("geometry", "mesh norm, minimal angle and mesh ratio"),
    ):
        sp = sub.add_parser(name, parents=[common], help=text)
        sp.add_argument("overrides", nargs="*", metavar="KEY=VALUE")
    sp = sub.add_parser("gen-design", parents=[common], help="generate a spherical t-design")
    sp.add_argument("t", type=int)
    sp.add_argument("N", type=int, nargs="?")
    sp = sub.add_parser("verify", parents=[common], help="check that a point file is a t-design")
    sp.add_argument("path")
    sp.add_argument("t", type=int, nargs="?")
    sp.add_argument("tol", type=float, nargs="?", default=designs.DESIGN_TOL)
    sp = sub.add_parser("partition", parents=[common], help="write equal-area partition centers")
    sp.add_argument("N", type=int)
    return p


def main(argv=None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        if args.command in ("integrate", "wce", "geometry"):
            flags = {"seed": args.seed, "threads": args.threads, "resolution": args.resolution, "out": args.out}
            cfg = load_config(args.config, args.overrides, flags)
            report = {"integrate": cmd_integrate, "wce": cmd_wce, "geometry": cmd_geometry}[args.command](cfg)
            write_output(report.to_csv(), cfg.out)
            return EXIT_NUMERIC if report.failed else EXIT_OK
        if args.command == "gen-design":
            if args.t < 0 or (args.N is not None and args.N < 1):
                raise ConfigError("need t >= 0 and N >= 1")
            cmd_gen_design(args.t, args.N, args.out, args.seed or 0)
            return EXIT_OK
        if args.command == "verify":
            report = cmd_verify(args.path, args.t, args.tol)
            write_output(report.to_csv(), args.out)
            return EXIT_NUMERIC if report.failed else EXIT_OK
        if args.N < 1:
            raise ConfigError("N must be >= 1")
        pts = PointSet(rules.equal_area_points(args.N), "equal_area", None, {"N": args.N})
        if args.out is None or args.out == "-":
            for x, y, z in pts.xyz:
                sys.stdout.write(f"{x:.17g} {y:.17g} {z:.17g}\n")
        else:
            designs.save_pointset(pts, args.out, f"equal-area partition centers, N={args.N}")
        return EXIT_OK
    except (ConfigError, ParseError, NotUnitError, OSError) as exc:
        print(f"sphquad: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SphQuadError as exc:
        print(f"sphquad: numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
