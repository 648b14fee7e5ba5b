"""Command-line harness: constants, polys, verify, integral-check, report.

Every run is deterministic: identical configuration produces byte-identical
CSV/JSON artifacts.  The only environment influence is POSWALK_THREADS,
which parallelizes independent horizons in ``verify``/``report`` without
changing any output bytes.

Exit codes: 0 success, 1 verification-threshold failure, 2 input error,
3 internal numeric failure.
"""

from __future__ import annotations

import csv
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import click

from . import increments
from .constants import compute_constants
from .errors import (CancellationFailure, HorizonTooLarge, IllConditioned, InputError,
                     PoswalkError, QuadratureNonconvergence)
from .expansion import expansion_polys, required_b_indices
from .integral import integral_check
from .oracle import Barrier, conditioned_interval_prob, killed_rows_at

DEFAULT_RATIOS = (0.2, 0.5, 1.0, 1.5, 2.0, 3.0)
FLATNESS_BAND = 3.0
INTEGRAL_TOL = 1e-8
SCHEMA_VERSION = 1


@dataclass
class ExperimentConfig:
    dist_path: str
    r: int = 2
    barrier: Barrier = Barrier.STRICT
    n_list: tuple[int, ...] = (100, 400, 1600)
    x_ratios: tuple[float, ...] = DEFAULT_RATIOS
    x_explicit: tuple[int, ...] | None = None  # overrides the ratio grid
    kmax: int = 4096
    mode: str = "float64"
    out_dir: Path = field(default_factory=lambda: Path("out"))

    def __post_init__(self):
        if any(b <= a for a, b in zip(self.n_list, self.n_list[1:])):
            raise InputError("n list must be strictly increasing")
        if any(t <= 0 for t in self.x_ratios):
            raise InputError("x ratios must be positive")

    def x_grid(self, sigma: float, n: int) -> list[int]:
        if self.x_explicit is not None:
            return [x for x in self.x_explicit if x >= 1]
        return _snap_grid(self.x_ratios, sigma, n)

    def load_dist(self) -> increments.IncrementDistribution:
        mode = "exact-rational" if self.mode == "exact-rational" else None
        return increments.load(self.dist_path, mode=mode)


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("POSWALK_THREADS", "1")))
    except ValueError:
        return 1


def _write_json(path: Path, obj: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([repr(v) if isinstance(v, float) else v for v in row])


def _snap_grid(ratios, sigma: float, n: int) -> list[int]:
    """Ratios of sigma sqrt(n) snapped to nearest lattice point, deduplicated."""
    xs = []
    for rho in ratios:
        x = round(rho * sigma * math.sqrt(n))
        if x >= 1 and x not in xs:
            xs.append(x)
    return xs


def _common(f):
    f = click.option("--dist", "dist_path", required=True, type=click.Path(exists=True),
                     help="distribution JSON file")(f)
    f = click.option("--r", "r", type=int, default=2, show_default=True,
                     help="expansion order")(f)
    f = click.option("--barrier", type=click.Choice(["strict", "weak"]), default="strict",
                     show_default=True)(f)
    f = click.option("--kmax", type=int, default=4096, show_default=True,
                     help="horizon for constant fits")(f)
    f = click.option("--mode", type=click.Choice(["exact", "float"]), default="float",
                     show_default=True)(f)
    f = click.option("--out", "out_dir", type=click.Path(path_type=Path), default=Path("out"),
                     show_default=True)(f)
    return f


def _config(dist_path, r, barrier, kmax, mode, out_dir, nmax=None, n_list=None) -> ExperimentConfig:
    if n_list is None:
        n_list = tuple(n for n in (100, 400, 1600, 6400) if nmax is None or n <= nmax)
        if nmax is not None and not n_list:
            n_list = (nmax,)
    return ExperimentConfig(
        dist_path=dist_path,
        r=r,
        barrier=Barrier.parse(barrier),
        n_list=tuple(n_list),
        kmax=kmax,
        mode="exact-rational" if mode == "exact" else "float64",
        out_dir=Path(out_dir),
    )


@click.group()
def cli():
    """Expansion polynomials for walks conditioned to stay positive."""


@cli.command("constants")
@_common
def cmd_constants(dist_path, r, barrier, kmax, mode, out_dir):
    """Compute theta0, theta1, b and the U1 table; write constants.json."""
    cfg = _config(dist_path, r, barrier, kmax, mode, out_dir)
    dist = cfg.load_dist()
    need = required_b_indices(cfg.r)
    cs = compute_constants(dist, cfg.barrier, kmax=cfg.kmax,
                           hmax=max(h for _, h in need), lmax=max(l for l, _ in need))
    t0x = cs.theta0_cross_check()
    agree = abs(cs.theta0 - t0x) <= 1e-3 * max(abs(cs.theta0), abs(t0x))
    report = cs.to_json_dict()
    report["two_pipeline_agreement"] = {
        "theta0_limit": cs.theta0,
        "theta0_from_u1": t0x,
        "pass": bool(agree),
    }
    _write_json(cfg.out_dir / "constants.json", report)
    click.echo(f"theta0={cs.theta0!r} theta1={cs.theta1!r} "
               f"two-pipeline agreement: {'pass' if agree else 'FAIL'}")
    return 0 if agree else 1


@cli.command("polys")
@_common
def cmd_polys(dist_path, r, barrier, kmax, mode, out_dir):
    """Assemble P_2..P_{r+1}; write polys.json."""
    cfg = _config(dist_path, r, barrier, kmax, mode, out_dir)
    dist = cfg.load_dist()
    es = expansion_polys(dist, cfg.r, cfg.barrier, kmax=cfg.kmax)
    _write_json(cfg.out_dir / "polys.json", es.to_json_dict())
    for nu in range(2, cfg.r + 2):
        p = es.P[nu]
        click.echo(f"P_{nu}: degree {p.degree() if p else 0}, "
                   f"coeffs {[float(c) for c in p.coeffs]}")
    return 0


@cli.command("verify")
@_common
@click.option("--nmax", type=int, default=1600, show_default=True,
              help="largest horizon in the n list 100,400,...")
def cmd_verify(dist_path, r, barrier, kmax, mode, out_dir, nmax):
    """Exact-vs-expansion error table, decay exponents and interval check."""
    cfg = _config(dist_path, r, barrier, kmax, mode, out_dir, nmax=nmax)
    dist = cfg.load_dist()
    es = expansion_polys(dist, cfg.r, cfg.barrier, kmax=cfg.kmax)
    sigma = es.sigma
    # constant fits always run float64; --mode exact selects exact-rational
    # oracle tables (feasible for horizons up to the exact cap)
    rows_by_n = killed_rows_at(dist, list(cfg.n_list), cfg.barrier, mode=cfg.mode)

    def _one(n: int):
        table_rows = []
        row = rows_by_n[n]
        grid = cfg.x_grid(sigma, n)
        for x in grid:
            exact = float(row.get(x, 0.0))
            approx = es.evaluate(n, x)
            abs_err = abs(exact - approx)
            table_rows.append([n, x, exact, approx, abs_err,
                               abs_err * n ** ((cfg.r + 2) / 2.0)])
        be2 = float(conditioned_interval_prob(dist, n, 0.5, 1.5, cfg.barrier,
                                              mode=cfg.mode, row=row))
        return table_rows, be2

    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        results = dict(zip(cfg.n_list, pool.map(_one, cfg.n_list)))

    all_rows = []
    max_scaled = {}
    be2_dev = {}
    target = math.exp(-0.125) - math.exp(-1.125)
    for n in cfg.n_list:
        table_rows, be2 = results[n]
        all_rows.extend(table_rows)
        max_scaled[n] = max(entry[5] for entry in table_rows)
        be2_dev[n] = abs(be2 - target) * math.sqrt(n)
    _write_csv(cfg.out_dir / "error_table.csv",
               ["n", "x", "exact", "approx", "abs_err", "scaled_err"], all_rows)

    ns = list(cfg.n_list)
    decay = {}
    for a, b in zip(ns, ns[1:]):
        ea = max_scaled[a] / a ** ((cfg.r + 2) / 2.0)
        eb = max_scaled[b] / b ** ((cfg.r + 2) / 2.0)
        decay[f"{a}->{b}"] = math.log(ea / eb) / math.log(b / a) if eb > 0 else float("inf")
    flat = max(max_scaled.values()) / min(max_scaled.values()) if min(max_scaled.values()) > 0 else float("inf")
    be2_ratio = (max(be2_dev.values()) / min(be2_dev.values())
                 if min(be2_dev.values()) > 0 else float("inf"))
    # gate on flatness only: the BE2 scaled deviation oscillates with the
    # lattice placement of the interval endpoints, so its spread across a
    # few horizons is reported but not thresholded
    ok = flat <= FLATNESS_BAND
    summary = {
        "schema_version": SCHEMA_VERSION,
        "r": cfg.r,
        "barrier": cfg.barrier.value,
        "n_list": ns,
        "max_scaled_err": {str(n): max_scaled[n] for n in ns},
        "scaled_err_flatness": flat,
        "flatness_band": FLATNESS_BAND,
        "decay_exponents": decay,
        "be2_scaled_deviation": {str(n): be2_dev[n] for n in ns},
        "be2_ratio": be2_ratio,
        "pass": bool(ok),
    }
    _write_json(cfg.out_dir / "verify_summary.json", summary)
    click.echo(f"max scaled err per n: { {n: f'{v:.4e}' for n, v in max_scaled.items()} }")
    click.echo(f"decay exponents: { {k: f'{v:.3f}' for k, v in decay.items()} }")
    click.echo(f"flatness {flat:.2f} (band {FLATNESS_BAND}), "
               f"BE2 scaled deviations { {n: f'{v:.3f}' for n, v in be2_dev.items()} } "
               f"-> {'pass' if ok else 'FAIL'}")
    return 0 if ok else 1


@cli.command("integral-check")
@click.option("--out", "out_dir", type=click.Path(path_type=Path), default=Path("out"),
              show_default=True)
def cmd_integral_check(out_dir):
    """Quadrature vs closed form for the half-line Gaussian-tail integral."""
    rows = integral_check()
    out = [[r.b, r.z, r.closed, r.quadrature, r.rel_error] for r in rows]
    _write_csv(Path(out_dir) / "integral_check.csv",
               ["b", "z", "closed_form", "quadrature", "rel_error"], out)
    worst = max(r.rel_error for r in rows)
    click.echo(f"{len(rows)} cases, worst relative error {worst:.3e}")
    return 0 if worst <= INTEGRAL_TOL else 1


@cli.command("report")
@_common
@click.option("--nmax", type=int, default=1600, show_default=True)
def cmd_report(dist_path, r, barrier, kmax, mode, out_dir, nmax):
    """Plot-ready data: profiles per n, scaled-error curves, U1 table."""
    cfg = _config(dist_path, r, barrier, kmax, mode, out_dir, nmax=nmax)
    dist = cfg.load_dist()
    es = expansion_polys(dist, cfg.r, cfg.barrier, kmax=cfg.kmax)
    sigma = es.sigma
    rows_by_n = killed_rows_at(dist, list(cfg.n_list), cfg.barrier, mode=cfg.mode)

    for n in cfg.n_list:
        row = rows_by_n[n]
        prof = []
        hi = int(3.5 * sigma * math.sqrt(n))
        for x in range(1, hi + 1):
            exact = float(row.get(x, 0.0))
            prof.append([x / (sigma * math.sqrt(n)), exact, es.evaluate(n, x)])
        _write_csv(cfg.out_dir / f"report_profile_n{n}.csv",
                   ["t", "exact", "approx"], prof)

    curves = []
    for r_cur in range(1, cfg.r + 1):
        es_r = expansion_polys(dist, r_cur, cfg.barrier, constants=es.constants)
        for n in cfg.n_list:
            row = rows_by_n[n]
            lo = max(1, int(0.2 * sigma * math.sqrt(n)))
            hi = int(3.0 * sigma * math.sqrt(n))
            err = max(abs(float(row.get(x, 0.0)) - es_r.evaluate(n, x))
                      for x in range(lo, hi + 1))
            curves.append([r_cur, n, err, err * n ** ((r_cur + 2) / 2.0)])
    _write_csv(cfg.out_dir / "report_scaled_err.csv",
               ["r", "n", "max_abs_err", "max_scaled_err"], curves)

    # U1 grows linearly with slope 2 theta0 / sigma^2 (oracle-validated)
    slope = 2.0 * es.constants.theta0 / sigma**2
    u1_rows = [[u, v, slope * u] for u, v in sorted(es.constants.u1_table.items())]
    _write_csv(cfg.out_dir / "report_u1.csv", ["u", "u1", "linear_ref"], u1_rows)
    click.echo(f"wrote report files to {cfg.out_dir}")
    return 0


def main(argv=None) -> int:
    try:
        rc = cli.main(args=argv, standalone_mode=False)
        return int(rc) if isinstance(rc, int) else 0
    except click.UsageError as exc:
        exc.show(file=sys.stderr)
        return 2
    except click.Abort:
        return 2
    except (InputError, HorizonTooLarge, OSError) as exc:
        click.echo(f"input error: {exc}", err=True)
        return 2
    except (IllConditioned, CancellationFailure, QuadratureNonconvergence) as exc:
        click.echo(f"numeric failure: {exc}", err=True)
        return 3
    except PoswalkError as exc:
        click.echo(f"error: {exc}", err=True)
        return 3


if __name__ == "__main__":
    sys.exit(main())
