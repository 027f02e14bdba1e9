"""Command-line driver: grids, singularity search, table and figure data.

Subcommands
-----------
eval          F, G, H, J, R, T, U on an energy grid
find-ss       certified singularities (exit 0 found, 1 none)
minima        local minima of R(E)
table1        pass/fail matrix for the reference parameter table
figure NAME   one CSV per panel (fig1, fig2a-d, fig3)
oracle-check  closed form against direct integration

Configs are plain ``key = value`` files; command-line flags override them.
All numbers are written with 12 significant digits and singularity
sentinels as ``INF``, so identical inputs give byte-identical output.
"""
from __future__ import annotations

import argparse
import io
import math
import os
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import table1
from .analysis import (
    energy_grid,
    exclude_second_ss,
    find_minima,
    find_ss,
)
from .errors import ConfigError, GinocchioError, Unclassifiable
from .oracle import OracleConfig, integrate_rt
from .potential import PotentialSpec, classify_profile, default_grid, potential_value
from .scattering import amplitudes, diagnostics

EXIT_OK, EXIT_NONE, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3
CHUNK = 256  # fixed work unit, so results never depend on --parallel
E_RTOL = 0.01
V0_ATOL = 0.01
FIGURES = ("fig1", "fig2a", "fig2b", "fig2c", "fig2d", "fig3")

_COMPLEX = re.compile(r"^[+-]?(\d+\.?\d*|\.\d+)?([eE][+-]?\d+)?([+-](\d+\.?\d*|\.\d+)?([eE][+-]?\d+)?)?[ij]?$")


# ---------------------------------------------------------------- config

def parse_complex(text: str) -> complex:
    """Parse "a+bi", "-2.65i", "6-12i", "-6+i" (j accepted too)."""
    s = text.strip().replace(" ", "")
    if not s or not _COMPLEX.match(s) or s in "+-ij":
        raise ConfigError(f"cannot parse complex number {text!r}")
    try:
        z = complex(s.replace("i", "j"))
    except ValueError as exc:
        raise ConfigError(f"cannot parse complex number {text!r}") from exc
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ConfigError(f"non-finite complex number {text!r}")
    return z


def parse_sign(text: str) -> int:
    s = str(text).strip()
    if s in ("-", "-1", "upper"):
        return -1
    if s in ("+", "+1", "1", "lower"):
        return 1
    raise ConfigError(f"sign must be + or -, got {text!r}")


def _bool(text: str) -> bool:
    s = str(text).strip().lower()
    if s in ("1", "true", "yes", "on"):
        return True
    if s in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"not a boolean: {text!r}")


@dataclass(frozen=True)
class CaseConfig:
    """One scattering case: potential, energy grid, optional oracle."""

    spec: PotentialSpec
    E_range: tuple[float, float] = (1.0, 400.0)
    grid_points: int = 2000
    oracle: OracleConfig | None = None
    outputs: tuple[str, ...] = field(default_factory=tuple)
    time_reversed: bool = False

    def __post_init__(self):
        lo, hi = self.E_range
        if not (math.isfinite(lo) and math.isfinite(hi) and 0 < lo < hi):
            raise ConfigError(f"need 0 < emin < emax, got {self.E_range}")
        if self.grid_points < 2:
            raise ConfigError("points must be at least 2")


_KEYS = {"nu", "lambda", "sign", "emin", "emax", "points", "time_reversed",
         "oracle", "oracle_l", "oracle_h", "outputs"}


def read_config_file(path) -> dict[str, str]:
    """``key = value`` lines; ``#`` starts a comment."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    out = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key = value")
        key, value = (p.strip() for p in line.split("=", 1))
        key = key.lower()
        if key not in _KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        out[key] = value
    return out


def build_config(raw: dict[str, str]) -> CaseConfig:
    try:
        if "nu" not in raw or "lambda" not in raw:
            raise ConfigError("nu and lambda are required")
        spec = PotentialSpec(nu=parse_complex(raw["nu"]), lam=float(raw["lambda"]),
                             sign=parse_sign(raw.get("sign", "-")))
        E_range = (float(raw.get("emin", 1.0)), float(raw.get("emax", 400.0)))
        points = int(raw.get("points", 2000))
        oracle = None
        if _bool(raw.get("oracle", "false")) or "oracle_l" in raw or "oracle_h" in raw:
            L = raw.get("oracle_l")
            h = raw.get("oracle_h")
            oracle = OracleConfig(half_width_L=float(L) if L else None,
                                  step_h=float(h) if h else None)
        outputs = tuple(s.strip() for s in raw.get("outputs", "").split(",") if s.strip())
        return CaseConfig(spec=spec, E_range=E_range, grid_points=points, oracle=oracle,
                          outputs=outputs,
                          time_reversed=_bool(raw.get("time_reversed", "false")))
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


def config_from_args(args) -> CaseConfig:
    raw = read_config_file(args.config) if getattr(args, "config", None) else {}
    overrides = {"nu": args.nu, "lambda": args.lam, "sign": args.sign, "emin": args.emin,
                 "emax": args.emax, "points": args.points}
    raw.update({k: str(v) for k, v in overrides.items() if v is not None})
    if getattr(args, "time_reversed", False):
        raw["time_reversed"] = "true"
    if getattr(args, "oracle", False):
        raw["oracle"] = "true"
    return build_config(raw)


# ---------------------------------------------------------------- output

def fmt(x) -> str:
    """12 significant digits; infinities become the INF sentinel."""
    x = float(x)
    if math.isnan(x):
        return "NAN"
    if math.isinf(x):
        return "INF" if x > 0 else "-INF"
    s = f"{x:.12g}"
    return "0" if s == "-0" else s


def _cell(v) -> str:
    if isinstance(v, str):
        return v
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return fmt(v)


def write_csv(stream, header, rows, comments=()):
    for c in comments:
        stream.write(f"# {c}\n")
    stream.write(",".join(header) + "\n")
    for r in rows:
        stream.write(",".join(_cell(v) for v in r) + "\n")


def spec_echo(spec: PotentialSpec) -> str:
    return (f"nu={fmt(spec.nu.real)}{'+' if spec.nu.imag >= 0 else '-'}"
            f"{fmt(abs(spec.nu.imag))}i lambda={fmt(spec.lam)} "
            f"sign={'+' if spec.sign > 0 else '-'}")


def _open_out(path):
    if path is None or path == "-":
        return sys.stdout, False
    return open(path, "w", newline="\n"), True


# ---------------------------------------------------------------- parallel

def _grid_chunk(task):
    E, spec, time_reversed = task
    amp = amplitudes(E, spec, time_reversed=time_reversed)
    d = diagnostics(E, spec, time_reversed=time_reversed)
    return np.stack([d.F, d.G, d.H, d.J, amp.R, amp.T])


def pmap(fn, items, parallel: int):
    """Ordered map; a process pool only when parallel > 1."""
    items = list(items)
    if parallel <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ProcessPoolExecutor(max_workers=min(parallel, len(items))) as pool:
        return list(pool.map(fn, items))


def grid_observables(E, spec, parallel=1, time_reversed=False):
    """Rows F, G, H, J, R, T over E, evaluated in fixed-size chunks."""
    E = np.asarray(E, dtype=float)
    tasks = [(E[i:i + CHUNK], spec, time_reversed) for i in range(0, len(E), CHUNK)]
    return np.concatenate(pmap(_grid_chunk, tasks, parallel), axis=1)


# ---------------------------------------------------------------- commands

def cmd_eval(cfg: CaseConfig, out, parallel=1):
    E = energy_grid(cfg.E_range, cfg.grid_points)
    F, G, H, J, R, T = grid_observables(E, cfg.spec, parallel, cfg.time_reversed)
    v0 = cfg.spec.v0()
    header = ["E", "ReV0", "ImV0", "F", "G", "H", "J", "R", "T", "U"]
    cols = [E, np.full_like(E, v0.real), np.full_like(E, v0.imag), F, G, H, J, R, T, R + T]
    if cfg.oracle is not None:
        res = integrate_rt(E, cfg.spec, cfg.oracle)
        header += ["R_oracle", "T_oracle"]
        cols += [np.array([r.R for r in res]), np.array([r.T for r in res])]
    comments = [spec_echo(cfg.spec) + (" time_reversed" if cfg.time_reversed else "")]
    write_csv(out, header, zip(*cols), comments)
    return EXIT_OK


def cmd_find_ss(cfg: CaseConfig, out, err=sys.stderr):
    found = find_ss(cfg.spec, cfg.E_range, cfg.grid_points, time_reversed=cfg.time_reversed)
    verdict = exclude_second_ss(cfg.spec, cfg.E_range, cfg.grid_points,
                                time_reversed=cfg.time_reversed)
    rows = []
    for ss in found:
        s = ss.refined_spec
        rows.append([ss.E_star, ss.n, ss.residual, ss.free_parameter, s.nu.real, s.nu.imag,
                     s.lam, "+" if s.sign > 0 else "-",
                     "excluded" if verdict.excluded else f"not_excluded@{fmt(verdict.witness)}"])
    write_csv(out, ["E_star", "n", "residual", "free_parameter", "nu_re", "nu_im", "lambda",
                    "sign", "second_ss"], rows, [spec_echo(cfg.spec)])
    if found:
        for ss in found:
            err.write(f"spectral singularity at E* = {fmt(ss.E_star)} (n = {ss.n}, "
                      f"|Delta - n| = {ss.residual:.1e})\n")
    else:
        err.write("no spectral singularity in range\n")
    err.write(f"second singularity: {'excluded' if verdict.excluded else 'not excluded'} "
              f"(min H = {fmt(verdict.min_H)})\n")
    return EXIT_OK if found else EXIT_NONE


def cmd_minima(cfg: CaseConfig, out):
    rep = find_minima(cfg.spec, cfg.E_range, cfg.grid_points, time_reversed=cfg.time_reversed)
    write_csv(out, ["E", "R", "reflectionless"],
              ([m.E, m.R, m.is_reflectionless] for m in rep.minima), [spec_echo(cfg.spec)])
    return EXIT_OK


@dataclass(frozen=True)
class RowVerdict:
    row: int
    E_found: float
    n_found: int | None
    count: int
    V0: complex
    profile: str
    E_ok: bool
    n_ok: bool
    v0_ok: bool
    profile_ok: bool
    flagged: bool

    @property
    def passed(self) -> bool:
        """All checks, except a V(0) mismatch on a flagged row."""
        return (self.E_ok and self.n_ok and self.profile_ok
                and (self.v0_ok or self.flagged) and self.count == 1)


TABLE_E_RANGE = (0.1, 1500.0)


def check_row(r: table1.TableRow) -> RowVerdict:
    spec = r.spec
    found = find_ss(spec, TABLE_E_RANGE)
    ss = min(found, key=lambda s: abs(s.E_star - r.E_star)) if found else None
    V0 = spec.v0()
    try:
        prof = classify_profile(spec).value
    except Unclassifiable:
        prof = "unclassifiable"
    return RowVerdict(
        row=r.row,
        E_found=ss.E_star if ss else math.nan,
        n_found=ss.n if ss else None,
        count=len(found),
        V0=V0,
        profile=prof,
        E_ok=bool(ss and abs(ss.E_star / r.E_star - 1) < E_RTOL),
        n_ok=bool(ss and ss.n == r.n),
        v0_ok=abs(V0.real - r.V0_printed.real) <= V0_ATOL
        and abs(V0.imag - r.V0_printed.imag) <= V0_ATOL,
        profile_ok=prof == r.profile.value,
        flagged=r.v0_flagged,
    )


def check_family(task):
    fam, a, b = task
    spec = fam.spec(a, b, table1.FAMILY_LAMBDA)
    return len(find_ss(spec, table1.FAMILY_E_RANGE))


def cmd_table1(out, parallel=1, err=sys.stderr):
    verdicts = pmap(check_row, table1.ROWS, parallel)
    draws = table1.family_draws()
    fam_tasks = [(fam, a, b) for fam in table1.NO_SS for a, b in draws]
    fam_counts = pmap(check_family, fam_tasks, parallel)

    header = ["row", "sign", "nu_re", "nu_im", "lambda", "E_printed", "E_found", "E_rel_err",
              "n_printed", "n_found", "V0_re", "V0_im", "V0_printed_re", "V0_printed_im",
              "profile", "E_ok", "n_ok", "V0_ok", "profile_ok", "flag", "verdict"]
    rows = []
    for r, v in zip(table1.ROWS, verdicts):
        flag = "V0_printed_typo" if v.flagged else ""
        rows.append([r.row, "+" if r.sign > 0 else "-", r.nu.real, r.nu.imag, r.lam, r.E_star,
                     v.E_found, v.E_found / r.E_star - 1, r.n,
                     "" if v.n_found is None else v.n_found, v.V0.real, v.V0.imag,
                     r.V0_printed.real, r.V0_printed.imag, v.profile, v.E_ok, v.n_ok,
                     v.v0_ok, v.profile_ok, flag, "PASS" if v.passed else "FAIL"])
    for (fam, a, b), count in zip(fam_tasks, fam_counts):
        s = fam.spec(a, b, table1.FAMILY_LAMBDA)
        rows.append([fam.row, "+" if fam.sign > 0 else "-", s.nu.real, s.nu.imag, s.lam,
                     "", "", "", "", count, s.v0().real, s.v0().imag, "", "", "", "", "", "",
                     "", "no_ss_family", "PASS" if count == 0 else "FAIL"])
    write_csv(out, header, rows)

    ok = all(v.passed for v in verdicts) and all(c == 0 for c in fam_counts)
    for r, v in zip(table1.ROWS, verdicts):
        if not v.passed:
            failed = [name for name, good in (("E*", v.E_ok), ("n", v.n_ok), ("V0", v.v0_ok),
                                              ("profile", v.profile_ok)) if not good]
            err.write(f"row {r.row}: FAIL ({', '.join(failed)})\n")
        elif v.flagged and not v.v0_ok:
            err.write(f"row {r.row}: printed V(0) {r.V0_printed} differs from the closed "
                      f"form {v.V0:.4f} (flagged)\n")
    err.write(f"table1: {'PASS' if ok else 'FAIL'}\n")
    return EXIT_OK if ok else EXIT_NONE


# ---------------------------------------------------------------- figures

@dataclass(frozen=True)
class Panel:
    name: str
    header: list
    rows: list
    comments: list


def _refined(spec, E_range):
    """The certified singularity nearest the grid, or the spec itself."""
    found = find_ss(spec, E_range)
    return (found[0].refined_spec, found[0].E_star) if found else (spec, None)


def _figure_grid(E_range, points, E_star):
    E = np.linspace(*E_range, points)
    if E_star is not None:
        # bracket the singularity closely so the peak shows in the data
        E = np.union1d(E, [E_star * (1 - 1e-7), E_star * (1 + 1e-7)])
    return E


def _rt_panels(prefix, spec, E_range, points, parallel, refine=True):
    sp, E_star = _refined(spec, E_range) if refine else (spec, None)
    E = _figure_grid(E_range, points, E_star)
    F, G, H, J, R, T = grid_observables(E, sp, parallel)
    echo = [spec_echo(sp)] + ([f"E_star={fmt(E_star)}"] if E_star else [])
    x = default_grid(sp, 801)
    V = potential_value(x, sp)
    return sp, [
        Panel(f"{prefix}_a", ["E", "R", "T"], list(zip(E, R, T)), echo),
        Panel(f"{prefix}_b", ["x", "ReV", "ImV"], list(zip(x, V.real, V.imag)), echo),
        Panel(f"{prefix}_c", ["E", "F", "G"], list(zip(E, F, G)), echo),
        Panel(f"{prefix}_d", ["E", "H", "J"], list(zip(E, H, J)), echo),
    ]


FIG2_CASES = {  # panel: (sign, imag sign of nu)
    "fig2a": (-1, -1), "fig2b": (-1, 1), "fig2c": (1, -1), "fig2d": (1, 1),
}
# panels whose dark curve carries a singularity in the reference figure
FIG2_REFINED = ("fig2b",)
FIG2_E_RANGE = (1.0, 700.0)
FIG3_E_RANGE = (1.0, 700.0)


def figure_panels(name: str, parallel: int = 1, points: int = 2000):
    if name == "fig1":
        return _rt_panels("fig1", table1.row(11).spec, (1.0, 400.0), points, parallel)[1]
    if name in FIG2_CASES:
        sign, im = FIG2_CASES[name]
        herm = PotentialSpec(nu=complex(-0.5, 2 * im), lam=6.0, sign=sign)
        dark = PotentialSpec(nu=complex(-0.6, 2 * im), lam=6.0, sign=sign)
        E_star = None
        if name in FIG2_REFINED:
            dark, E_star = _refined(dark, FIG2_E_RANGE)
        E = _figure_grid(FIG2_E_RANGE, points, E_star)
        Rh = grid_observables(E, herm, parallel)[4]
        Rd = grid_observables(E, dark, parallel)[4]
        echo = [f"hermitian {spec_echo(herm)}", f"non_hermitian {spec_echo(dark)}"]
        if E_star is not None:
            echo.append(f"E_star={fmt(E_star)}")
        return [Panel(name, ["E", "R_hermitian", "R"], list(zip(E, Rh, Rd)), echo)]
    if name == "fig3":
        sp, panels = _rt_panels("fig3", table1.row(17).spec, FIG3_E_RANGE, points, parallel)
        herm = PotentialSpec(nu=-0.5 + 0.5j, lam=7.0, sign=-1)
        E = np.array([p[0] for p in panels[0].rows])
        Rh = grid_observables(E, herm, parallel)[4]
        a = panels[0]
        panels[0] = Panel(a.name, ["E", "R", "T", "R_hermitian"],
                          [(*row, rh) for row, rh in zip(a.rows, Rh)],
                          a.comments + [f"hermitian {spec_echo(herm)}"])
        b = panels[1]
        panels[1] = Panel(b.name, ["x", "ReV", "ImV_x10"],
                          [(x, re, 10 * im) for x, re, im in b.rows], b.comments)
        return panels
    raise ConfigError(f"unknown figure {name!r}; choose from {', '.join(FIGURES)}")


def cmd_figure(name: str, out_dir, parallel=1, points=2000):
    panels = figure_panels(name, parallel, points)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    for p in panels:
        buf = io.StringIO()
        write_csv(buf, p.header, p.rows, p.comments)
        path = out_dir / f"{p.name}.csv"
        path.write_text(buf.getvalue(), newline="\n")
        paths.append(path)
    return paths


def cmd_oracle_check(cfg: CaseConfig, out, tol=1e-3):
    E = energy_grid(cfg.E_range, cfg.grid_points)
    amp = amplitudes(E, cfg.spec)
    res = integrate_rt(E, cfg.spec, cfg.oracle or OracleConfig())
    Ro = np.array([r.R for r in res])
    To = np.array([r.T for r in res])
    with np.errstate(divide="ignore", invalid="ignore"):
        eR = np.abs(Ro - amp.R) / np.maximum(np.abs(amp.R), 1e-300)
        eT = np.abs(To - amp.T) / np.abs(amp.T)
    write_csv(out, ["E", "R", "T", "R_oracle", "T_oracle", "rel_err_R", "rel_err_T",
                    "step_estimate"],
              zip(E, amp.R, amp.T, Ro, To, eR, eT, [r.step_estimate for r in res]),
              [spec_echo(cfg.spec)])
    # R relative error is meaningless at reflection zeros; judge it against max(R, T)
    scale = np.maximum(amp.R, amp.T)
    ok = np.all(np.abs(Ro - amp.R) <= tol * scale) and np.all(eT <= tol)
    return EXIT_OK if ok else EXIT_NONE


# ---------------------------------------------------------------- entry

def _add_case_flags(p):
    p.add_argument("--config", help="key = value case file")
    p.add_argument("--nu", help='complex nu, e.g. "4.67+7.8366i"')
    p.add_argument("--lambda", dest="lam", type=float)
    p.add_argument("--sign", choices=["+", "-"])
    p.add_argument("--emin", type=float)
    p.add_argument("--emax", type=float)
    p.add_argument("--points", type=int)
    p.add_argument("--time-reversed", action="store_true")
    p.add_argument("--out", help="output file (default stdout)")
    p.add_argument("--parallel", type=int, default=os.cpu_count() or 1)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_CONFIG)


def build_parser():
    parser = _Parser(prog="ginocchio", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    p = sub.add_parser("eval", help="observables on an energy grid")
    _add_case_flags(p)
    p.add_argument("--oracle", action="store_true", help="add direct-integration columns")
    for name, text in (("find-ss", "certified spectral singularities"),
                       ("minima", "local minima of R(E)"),
                       ("oracle-check", "closed form against direct integration")):
        _add_case_flags(sub.add_parser(name, help=text))
    p = sub.add_parser("table1", help="reproduce the reference parameter table")
    p.add_argument("--out")
    p.add_argument("--parallel", type=int, default=os.cpu_count() or 1)
    p = sub.add_parser("figure", help="figure data, one CSV per panel")
    p.add_argument("name", help=", ".join(FIGURES))
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--points", type=int, default=2000)
    p.add_argument("--parallel", type=int, default=os.cpu_count() or 1)
    return parser


def _attach_values(argv):
    """Glue "--nu -0.5+2i" into "--nu=-0.5+2i"; argparse would read the value as a flag."""
    out = []
    it = iter(argv)
    for tok in it:
        if tok == "--nu":
            val = next(it, None)
            out.append(tok if val is None else f"{tok}={val}")
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = build_parser().parse_args(_attach_values(argv))
    except SystemExit as exc:
        return exc.code
    try:
        if args.command == "figure":
            if args.name not in FIGURES:
                raise ConfigError(f"unknown figure {args.name!r}")
            for path in cmd_figure(args.name, args.out, args.parallel, args.points):
                sys.stderr.write(f"wrote {path}\n")
            return EXIT_OK
        if args.command == "table1":
            out, close = _open_out(args.out)
            try:
                return cmd_table1(out, args.parallel)
            finally:
                if close:
                    out.close()
        cfg = config_from_args(args)
        if args.command == "oracle-check" and args.points is None:
            cfg = replace(cfg, grid_points=20)
    except ConfigError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_CONFIG
    except GinocchioError as exc:
        sys.stderr.write(f"numerical failure: {exc}\n")
        return EXIT_NUMERIC

    out, close = _open_out(args.out)
    try:
        if args.command == "eval":
            return cmd_eval(cfg, out, args.parallel)
        if args.command == "find-ss":
            return cmd_find_ss(cfg, out)
        if args.command == "minima":
            return cmd_minima(cfg, out)
        return cmd_oracle_check(cfg, out)
    except ConfigError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_CONFIG
    except GinocchioError as exc:
        sys.stderr.write(f"numerical failure: {exc}\n")
        return EXIT_NUMERIC
    finally:
        if close:
            out.close()


if __name__ == "__main__":
    raise SystemExit(main())
