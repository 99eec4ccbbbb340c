"""Command-line front end: ``hyperbloch <command> [options]``.

Exit codes: 0 success, 1 usage error, 2 domain or parity error,
3 invariant or tolerance failure.
"""

import argparse
from concurrent.futures import ThreadPoolExecutor
import csv
from dataclasses import asdict, dataclass, field
from fractions import Fraction
import io
import json
from pathlib import Path
import sys

import numpy as np

from . import bloch_ball as bb
from . import gamma_store, geometry, harmonics
from .charts import AngleChart
from .fuzzy_gamma import cached_gammas, measured_spectrum, verify_fuzzy_sphere
from .spin_algebra import SpinLabel, level_degeneracy, model_dim
from .zeeman_dirac import diagonalization_error, energy, nonlinear_realization

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_TOLERANCE = 0, 1, 2, 3

DEFAULT_TOL = {
    "gamma": 1e-8,
    "spectrum": 1e-9,
    "qgt": 1e-8,
    "wz": 1e-9,
    "chern": 1e-2,
    "entropy": 1e-10,
    "bures": 1e-7,
    "harmonics": 1e-6,
    "check": 1e-8,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class RunConfig:
    command: str
    group: str = "so3"
    twoS: int = 1
    lam: str = None
    grid: list = field(default_factory=list)
    format: str = "csv"
    out: str = None
    tol: float = None
    cache: str = None
    threads: int = 1
    seed: int = 0
    samples: int = 10
    numeric: bool = False
    table: bool = False
    curvature: bool = False
    construction: str = "auto"
    export: str = None

    @property
    def tolerance(self):
        return DEFAULT_TOL[self.command] if self.tol is None else self.tol

    def to_json(self):
        return json.dumps(asdict(self), sort_keys=True)

    @classmethod
    def from_json(cls, text):
        return cls(**json.loads(text))

    def label(self):
        return SpinLabel.of(self.group, self.twoS)

    def levels(self):
        label = self.label()
        if self.lam is None:
            return label.levels()
        lam = Fraction(self.lam)
        if lam not in label.levels():
            raise ValueError(f"level {lam} does not occur for {self.group} with 2S={self.twoS}")
        return [lam]


def build_parser():
    p = _Parser(prog="hyperbloch", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--group", default="so3")
        sp.add_argument("--two-s", dest="twoS", type=int, default=1)
        sp.add_argument("--lambda", dest="lam", default=None)
        sp.add_argument("--grid", type=_grid, default=[])
        sp.add_argument("--format", choices=["csv", "json"], default="csv")
        sp.add_argument("--out", default=None)
        sp.add_argument("--tol", type=float, default=None)
        sp.add_argument("--cache", default=None)
        sp.add_argument("--threads", type=int, default=1)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--samples", type=int, default=10)
        return sp

    g = common(sub.add_parser("gamma", help="build or load a gamma set and verify it"))
    g.add_argument("--construction", default="auto")
    g.add_argument("--export", default=None, help="also write the matrices as JSON")
    common(sub.add_parser("spectrum", help="energy levels and degeneracies"))
    common(sub.add_parser("qgt", help="quantum metric coefficients"))
    common(sub.add_parser("wz", help="Wilczek-Zee connection checks"))
    c = common(sub.add_parser("chern", help="topological numbers"))
    c.add_argument("--numeric", action="store_true")
    common(sub.add_parser("entropy", help="von Neumann entropy along the radius"))
    b = common(sub.add_parser("bures", help="Bures metric functions f, g"))
    b.add_argument("--table", action="store_true")
    b.add_argument("--curvature", action="store_true")
    common(sub.add_parser("harmonics", help="monopole harmonics checks"))
    common(sub.add_parser("check", help="run the invariant suite"))
    return p


def _grid(text):
    try:
        vals = [int(v) for v in text.split(",") if v]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad grid {text!r}") from None
    if not vals or min(vals) < 1:
        raise argparse.ArgumentTypeError(f"bad grid {text!r}")
    return vals


def _attach_negative_values(argv):
    """Rewrite ``--lambda -1/2`` as ``--lambda=-1/2`` so argparse keeps the value."""
    out, it = [], iter(argv)
    for a in it:
        if a == "--lambda":
            nxt = next(it, None)
            out.append(a if nxt is None else f"{a}={nxt}")
        else:
            out.append(a)
    return out


def parse_config(argv):
    ns = build_parser().parse_args(_attach_negative_values(list(argv)))
    if ns.threads < 1:
        raise UsageError("--threads must be positive")
    return RunConfig(**vars(ns))


# output


def _cell(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, (complex, np.complexfloating)):
        return repr(complex(v))
    return v


def render(rows, meta, fmt):
    rows = [{k: _cell(v) for k, v in r.items()} for r in rows]
    if fmt == "json":
        return json.dumps({"meta": meta, "rows": rows}, indent=1, sort_keys=True) + "\n"
    buf = io.StringIO()
    for k in sorted(meta):
        buf.write(f"# {k}: {json.dumps(meta[k], sort_keys=True)}\n")
    if rows:
        w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
    return buf.getvalue()


def emit(cfg, rows, meta, stream):
    meta = dict(meta, command=cfg.command, group=cfg.group, twoS=cfg.twoS, tol=cfg.tolerance)
    text = render(rows, meta, cfg.format)
    if cfg.out:
        path = Path(cfg.out)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
        if cfg.format == "csv":
            Path(str(path) + ".json").write_text(json.dumps(meta, indent=1, sort_keys=True) + "\n")
    else:
        stream.write(text)


def _map(cfg, fn, items):
    if cfg.threads == 1:
        return [fn(i) for i in items]
    with ThreadPoolExecutor(cfg.threads) as ex:
        return list(ex.map(fn, items))


def _charts(d, cfg):
    rng = np.random.default_rng(cfg.seed)
    return [AngleChart.random(d, rng) for _ in range(cfg.samples)]


# commands


def cmd_gamma(cfg, stream):
    g, path, hit = gamma_store.load_or_build(cfg.group, cfg.twoS, cfg.construction, cfg.cache)
    rep = verify_fuzzy_sphere(g)
    rows = [{"invariant": k, "residual": v} for k, v in rep.errors().items()]
    rows.append({"invariant": "spectrum_match", "residual": 0.0 if rep.spectrum == rep.spectrum_expected else 1.0})
    meta = {
        "dim": g.dim,
        "cache_file": str(path),
        "cache_hit": hit,
        "casimir": rep.casimir,
        "bracket": [rep.bracket.real, rep.bracket.imag],
        "spectrum": {str(k): v for k, v in sorted(rep.spectrum.items(), reverse=True)},
    }
    if cfg.export:
        gamma_store.export_json(g, cfg.export)
    emit(cfg, rows, meta, stream)
    return EXIT_OK if rep.passed(cfg.tolerance) else EXIT_TOLERANCE


def cmd_spectrum(cfg, stream):
    g = cached_gammas(cfg.group, cfg.twoS)
    label = g.label
    rng = np.random.default_rng(cfg.seed)
    x = rng.normal(size=g.n)
    x /= np.linalg.norm(x)
    measured = measured_spectrum(g.hamiltonian(x))
    rows, ok = [], True
    for lam in label.levels():
        e = energy(label, lam)
        deg = level_degeneracy(label, lam)
        got = measured.get(e, 0)
        ok &= got == deg
        rows.append({"lambda": lam, "energy": e, "degeneracy": deg, "measured": got})
    ok &= sum(measured.values()) == g.dim
    emit(cfg, rows, {"dim": g.dim}, stream)
    return EXIT_OK if ok else EXIT_TOLERANCE


def cmd_qgt(cfg, stream):
    g = cached_gammas(cfg.group, cfg.twoS)
    charts = _charts(g.n - 1, cfg)
    rows, ok = [], True
    for lam in cfg.levels():
        cs, res, diag = [], 0.0, 0.0
        for ch in charts:
            fr = nonlinear_realization(g, ch)
            chi = geometry.qgt(fr, lam)
            _, c, r = geometry.metric_from_qgt(chi, ch)
            cs.append(c)
            res = max(res, r)
            diag = max(diag, diagonalization_error(fr))
        expected = geometry.metric_coefficient_expected(g, lam)
        spread = float(np.ptp(cs))
        dev = abs(np.mean(cs) - float(expected)) if expected is not None else float("nan")
        ok &= res < cfg.tolerance and spread < cfg.tolerance and (expected is None or dev < cfg.tolerance)
        rows.append(
            {
                "lambda": lam,
                "coefficient": float(np.mean(cs)),
                "expected": "" if expected is None else expected,
                "residual": res,
                "spread": spread,
                "diagonalization_error": diag,
            }
        )
    emit(cfg, rows, {"samples": cfg.samples, "seed": cfg.seed}, stream)
    return EXIT_OK if ok else EXIT_TOLERANCE


def cmd_wz(cfg, stream):
    g = cached_gammas(cfg.group, cfg.twoS)
    charts = _charts(g.n - 1, cfg)
    rows, ok = [], True
    for lam in cfg.levels():
        gen_err, exp_err = 0.0, None
        for ch in charts:
            fr = nonlinear_realization(g, ch)
            A = geometry.wilczek_zee(fr, lam)
            gen_err = max(gen_err, float(np.abs(A - geometry.wz_generator_form(fr, lam)).max()))
            ref = geometry.wz_explicit(fr, lam)
            if ref is None and g.twoS == 1 and not g.odd:
                ref = geometry.wz_minimal_even(g, ch)
            if ref is not None:
                exp_err = max(exp_err or 0.0, float(np.abs(A - ref).max()))
        ok &= gen_err < cfg.tolerance and (exp_err is None or exp_err < cfg.tolerance)
        rows.append({"lambda": lam, "generator_form_error": gen_err, "explicit_error": "" if exp_err is None else exp_err})
    emit(cfg, rows, {"samples": cfg.samples, "seed": cfg.seed}, stream)
    return EXIT_OK if ok else EXIT_TOLERANCE


def cmd_chern(cfg, stream):
    label = cfg.label()
    rows, ok = [], True
    if label.odd:
        g = cached_gammas(cfg.group, cfg.twoS) if cfg.numeric else None
        n_polar = cfg.grid[0] if cfg.grid else (64 if label.n == 3 else 16)
        n_az = cfg.grid[1] if len(cfg.grid) > 1 else 2 * n_polar
        for lam in cfg.levels():
            exact = geometry.chern_formula(cfg.group, cfg.twoS, lam, "ch")
            row = {"lambda": lam, "analytic": exact}
            if label.n == 5:
                row["c2"] = geometry.chern_formula(cfg.group, cfg.twoS, lam, "c2")
            if cfg.numeric:
                num = geometry.chern_numeric(g, lam, n_polar, n_az)
                row["numeric"] = num
                row["difference"] = abs(num - float(exact))
                ok &= row["difference"] < cfg.tolerance
            rows.append(row)
        meta = {"grid": [n_polar, n_az] if cfg.numeric else None}
    else:
        if cfg.numeric:
            raise ValueError("numeric integration is available for odd groups only")
        for sign in (+1, -1):
            rows.append({"chirality": sign, "winding": geometry.chern_formula(cfg.group, cfg.twoS, sign, "winding")})
        meta = {}
    emit(cfg, rows, meta, stream)
    return EXIT_OK if ok else EXIT_TOLERANCE


def cmd_entropy(cfg, stream):
    g = cached_gammas(cfg.group, cfg.twoS)
    n = cfg.grid[0] if cfg.grid else 101
    rs = np.linspace(0.0, 1.0, n)
    x = np.eye(g.n)[0]

    def point(r):
        return bb.entropy_closed(g, r), bb.entropy_numeric(g, r, x)

    vals = _map(cfg, point, rs)
    rows = [{"r": r, "closed": a, "numeric": b, "difference": abs(a - b)} for r, (a, b) in zip(rs, vals)]
    closed = np.array([a for a, _ in vals])
    mono = bool(np.all(np.diff(closed) < 0))
    err = max(row["difference"] for row in rows)
    emit(cfg, rows, {"grid": n, "monotone": mono, "max_difference": err}, stream)
    return EXIT_OK if err < cfg.tolerance and mono else EXIT_TOLERANCE


def cmd_bures(cfg, stream):
    g = cached_gammas(cfg.group, cfg.twoS)
    label = g.label
    if cfg.table:
        rs = np.arange(1, 10) / 10
    else:
        rs = np.linspace(0.1, 0.9, cfg.grid[0] if cfg.grid else 9)
    rng = np.random.default_rng(cfg.seed)
    x = rng.normal(size=g.n)
    x /= np.linalg.norm(x)

    def point(r):
        return bb.fg_extract(bb.bures_metric(g, r, x), x)

    vals = _map(cfg, point, rs)
    rows, ok, worst = [], True, 0.0
    for r, (f, gg, res) in zip(rs, vals):
        row = {"r": r, "f_plus_g": f + gg, "f": f, "fit_residual": res}
        ok &= res < 1e-8
        if cfg.table:
            ref_a, ref_f = bb.reference_fg(label.n, cfg.twoS, r)
            e = max(abs(f + gg - ref_a), abs(f - ref_f))
            worst = max(worst, e)
            row.update(ref_f_plus_g=ref_a, ref_f=ref_f, error=e)
        rows.append(row)
    if cfg.curvature:
        rep = bb.curvature_at(g, rs, x=x)
        for row, ric, kr in zip(rows, rep.ricci, rep.kretschmann):
            row.update(ricci=ric, kretschmann=kr)
        ok &= not rep.singular
    ok &= worst < cfg.tolerance
    emit(cfg, rows, {"max_table_error": worst if cfg.table else None}, stream)
    return EXIT_OK if ok else EXIT_TOLERANCE


def cmd_harmonics(cfg, stream):
    label = cfg.label()
    n_polar = cfg.grid[0] if cfg.grid else 48
    n_az = cfg.grid[1] if len(cfg.grid) > 1 else 2 * n_polar
    rows, ok = [], True
    for lam in cfg.levels():
        rep = harmonics.coherent_landau_correspondence(cfg.group, cfg.twoS, lam, cfg.samples, cfg.seed)
        if label.n == 3:
            M = harmonics.so3_orthonormality(cfg.twoS, lam, n_polar, n_az)
            const = 4 * np.pi / (cfg.twoS + 1)
        elif label.n == 4:
            tl, tr = harmonics.so4_bispin(cfg.twoS, lam)
            tj = int(2 * abs(lam))
            M = harmonics.so4_orthonormality(tl, tr, tj, n_polar, n_az)
            const = harmonics.so4_normalization(tl, tr, tj)
        else:
            raise ValueError("harmonics are implemented for SO(3) and SO(4)")
        orth = float(np.abs(M - const * np.eye(len(M))).max())
        # harmonics fill the model (SO(3)) or one chirality half of it (SO(4))
        fill = rep.harmonic_count * (1 if label.odd else 2) == model_dim(label)
        ok &= orth < cfg.tolerance and rep.passed(1e-8) and fill
        rows.append(
            {
                "lambda": lam,
                "normalization": const,
                "orthonormality_error": orth,
                "frame_error": rep.frame_error,
                "connection_error": rep.connection_error,
                "harmonics": rep.harmonic_count,
                "components": rep.component_count,
            }
        )
    emit(cfg, rows, {"grid": [n_polar, n_az]}, stream)
    return EXIT_OK if ok else EXIT_TOLERANCE


def _check_rows(group, twoS, tol, seed):
    g = cached_gammas(group, twoS)
    rows = []
    rep = verify_fuzzy_sphere(g)
    for k, v in rep.errors().items():
        rows.append((f"nambu.{k}", v, v < tol))
    rows.append(("nambu.spectrum", 0.0, rep.spectrum == rep.spectrum_expected))
    rng = np.random.default_rng(seed)
    charts = [AngleChart.random(g.n - 1, rng) for _ in range(5)]
    frames = [nonlinear_realization(g, c) for c in charts]
    diag = max(diagonalization_error(f) for f in frames)
    rows.append(("frame.diagonalization", diag, diag < 1e-9))
    wz = 0.0
    for f in frames:
        for lam in g.label.levels():
            wz = max(wz, float(np.abs(geometry.wilczek_zee(f, lam) - geometry.wz_generator_form(f, lam)).max()))
    rows.append(("wz.generator_form", wz, wz < 1e-9))
    ent = max(abs(bb.entropy_closed(g, r) - bb.entropy_numeric(g, r)) for r in np.linspace(0, 1, 11))
    rows.append(("entropy.routes", ent, ent < 1e-10))
    x = np.eye(g.n)[0]
    fits = max(bb.fg_extract(bb.bures_metric(g, r, x), x)[2] for r in (0.2, 0.5, 0.8))
    rows.append(("bures.isotropy", fits, fits < 1e-8))
    return rows


def cmd_check(cfg, stream):
    rows = []
    for name, val, passed in _check_rows(cfg.group, cfg.twoS, cfg.tolerance, cfg.seed):
        rows.append({"check": name, "residual": val, "status": "pass" if passed else "FAIL"})
    emit(cfg, rows, {}, stream)
    return EXIT_OK if all(r["status"] == "pass" for r in rows) else EXIT_TOLERANCE


COMMANDS = {
    "gamma": cmd_gamma,
    "spectrum": cmd_spectrum,
    "qgt": cmd_qgt,
    "wz": cmd_wz,
    "chern": cmd_chern,
    "entropy": cmd_entropy,
    "bures": cmd_bures,
    "harmonics": cmd_harmonics,
    "check": cmd_check,
}


def main(argv=None, stream=None):
    stream = sys.stdout if stream is None else stream
    try:
        cfg = parse_config(sys.argv[1:] if argv is None else argv)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    try:
        cfg.label()
        return COMMANDS[cfg.command](cfg, stream)
    except (ValueError, KeyError, ArithmeticError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
