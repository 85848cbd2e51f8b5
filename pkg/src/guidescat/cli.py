"""Command-line front end.

    guidescat channels    --config run.ini
    guidescat solve       --config run.ini --format csv --out solve.csv
    guidescat cir         --cosine-approx
    guidescat bound-state --config run.ini --format json

The configuration is an INI file (``[section]`` / ``key = value``); flags
override it. All numbers are in reduced units (hbar^2/2mu = 1) unless
``--unit-scale`` is given.
"""

import argparse
import configparser
import csv
import io
import json
import logging
import math
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import analysis, interaction, solver
from .guide import GuideKind, GuideSpec, RootMode, build_channels, channels_from_k0, cir_constant
from .errors import ConfigError, GuideScatError, PoleEncountered

log = logging.getLogger("guidescat")

SCAN_VARIABLES = ("a_over_dperp", "k0_dperp", "Lmax")
FORMATS = ("csv", "json")

# Physical dimension of output columns, used by --unit-scale.
LENGTH, WAVENUMBER, ENERGY = "length", "wavenumber", "energy"


@dataclass
class RunConfig:
    guide: GuideSpec = field(default_factory=GuideSpec)
    model: str = "zero_range"
    model_params: dict = field(default_factory=dict)
    table: Path = None
    k: float = None
    k0_dperp: float = None
    b: tuple = None
    scan_variable: str = None
    scan_start: float = None
    scan_stop: float = None
    scan_points: int = None
    lmax: int = solver.DEFAULT_LMAX
    out: Path = None
    format: str = "csv"
    unitarity_tol: float = solver.UNITARITY_TOL
    root_rtol: float = 1e-12
    unit_scale: float = 1.0
    workers: int = 1

    def scan_values(self, default=None):
        if self.scan_variable is None:
            if default is None:
                raise ConfigError("[scan]: this command needs a scan (variable, start, stop, points)")
            return default
        if self.scan_variable == "Lmax":
            vals = list(range(int(self.scan_start), int(self.scan_stop) + 1))
            if len(vals) < 2:
                raise ConfigError("[scan]: an Lmax scan needs at least two values")
            return vals
        return list(np.linspace(self.scan_start, self.scan_stop, self.scan_points))


def _line_index(text):
    """Map (section, key) -> line number of the config text."""
    index, section = {}, None
    for lineno, line in enumerate(text.splitlines(), start=1):
        s = line.strip()
        m = re.match(r"\[([^\]]+)\]", s)
        if m:
            section = m.group(1).strip()
        elif "=" in s and section and not s.startswith(("#", ";")):
            index[(section, s.split("=", 1)[0].strip().lower())] = lineno
    return index


class _Reader:
    def __init__(self, parser, lines, source):
        self.p, self.lines, self.source = parser, lines, source

    def where(self, section, key):
        line = self.lines.get((section, key))
        loc = f"{self.source}:{line}" if line else self.source
        return f"{loc}: [{section}] {key}"

    def get(self, section, key, conv=str, default=None):
        if not self.p.has_option(section, key):
            return default
        raw = self.p.get(section, key)
        try:
            return conv(raw)
        except (ValueError, TypeError) as exc:
            raise ConfigError(f"{self.where(section, key)} = {raw!r}: {exc}") from None

    def choice(self, section, key, options, default):
        val = self.get(section, key, default=default)
        if val not in options:
            raise ConfigError(f"{self.where(section, key)}: expected one of {', '.join(options)}, got {val!r}")
        return val


def _complex_list(raw):
    return tuple(complex(x.strip().replace(" ", "")) for x in raw.split(",") if x.strip())


def load_config(path=None, overrides=()):
    """Build a RunConfig from an INI file plus ``section.key=value`` overrides."""
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    text, source = "", "<defaults>"
    if path is not None:
        path = Path(path)
        source = str(path)
        try:
            text = path.read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        try:
            parser.read_string(text, source=source)
        except configparser.Error as exc:
            raise ConfigError(str(exc)) from None
    for item in overrides:
        if "=" not in item or "." not in item.split("=", 1)[0]:
            raise ConfigError(f"override {item!r} must look like section.key=value")
        lhs, value = item.split("=", 1)
        section, key = lhs.split(".", 1)
        if not parser.has_section(section):
            parser.add_section(section)
        parser.set(section, key.strip(), value.strip())
    r = _Reader(parser, _line_index(text), source)

    cfg = RunConfig()
    try:
        cfg.guide = GuideSpec(
            kind=r.choice("guide", "kind", [k.value for k in GuideKind], "square_well"),
            transverse_scale=r.get("guide", "scale", float, 1.0),
            root_mode=r.choice("guide", "root_mode", [m.value for m in RootMode], "exact"),
        )
    except GuideScatError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"{source}: [guide]: {exc}") from None

    cfg.model = r.choice("interaction", "model", ["zero_range", "hard_sphere", "square_well", "tabulated"], "zero_range")
    for key in ("a", "a_over_dperp", "r", "depth"):
        val = r.get("interaction", key, float)
        if val is not None:
            cfg.model_params[key] = val
    table = r.get("interaction", "table")
    if table is not None:
        base = Path(path).parent if path is not None else Path.cwd()
        cfg.table = (base / table) if not Path(table).is_absolute() else Path(table)

    cfg.k = r.get("kinematics", "k", float)
    cfg.k0_dperp = r.get("kinematics", "k0_dperp", float)
    if cfg.k is not None and cfg.k0_dperp is not None:
        raise ConfigError(f"{r.where('kinematics', 'k')}: give either k or k0_dperp, not both")
    cfg.b = r.get("incident", "b", _complex_list)

    if parser.has_section("scan"):
        cfg.scan_variable = r.choice("scan", "variable", SCAN_VARIABLES, None)
        cfg.scan_start = r.get("scan", "start", float)
        cfg.scan_stop = r.get("scan", "stop", float)
        cfg.scan_points = r.get("scan", "points", int, 2)
        if cfg.scan_start is None or cfg.scan_stop is None:
            raise ConfigError(f"{source}: [scan] needs both start and stop")
        if not cfg.scan_stop > cfg.scan_start:
            raise ConfigError(f"{r.where('scan', 'stop')}: scan range is empty ({cfg.scan_start} .. {cfg.scan_stop})")
        if cfg.scan_points < 2:
            raise ConfigError(f"{r.where('scan', 'points')}: a scan needs at least 2 points")

    cfg.lmax = r.get("solver", "lmax", int, solver.DEFAULT_LMAX)
    cfg.unitarity_tol = r.get("tolerances", "unitarity", float, solver.UNITARITY_TOL)
    cfg.root_rtol = r.get("tolerances", "root_finder", float, 1e-12)
    out = r.get("output", "path")
    cfg.out = Path(out) if out else None
    cfg.format = r.choice("output", "format", FORMATS, "csv")
    return cfg


def build_model(cfg, a=None):
    p = cfg.model_params
    if cfg.model == "zero_range":
        if a is None:
            if "a" in p:
                a = p["a"]
            elif "a_over_dperp" in p:
                a = p["a_over_dperp"] * cfg.guide.d_perp
            else:
                raise ConfigError("[interaction]: zero_range needs a or a_over_dperp")
        return interaction.ZeroRange(a)
    if a is not None:
        raise ConfigError(f"[scan] a_over_dperp only applies to zero_range, not {cfg.model}")
    try:
        if cfg.model == "hard_sphere":
            return interaction.HardSphere(p["r"])
        if cfg.model == "square_well":
            return interaction.SquareWellPotential(p["depth"], p["r"])
    except KeyError as exc:
        raise ConfigError(f"[interaction]: {cfg.model} needs {exc.args[0]}") from None
    if cfg.table is None:
        raise ConfigError("[interaction]: tabulated needs table = PATH")
    return interaction.Tabulated.from_file(cfg.table)


def _channels(cfg, k0_dperp=None):
    if k0_dperp is not None:
        return channels_from_k0(cfg.guide, k0_dperp / cfg.guide.d_perp)
    if cfg.k is not None:
        return build_channels(cfg.guide, cfg.k)
    if cfg.k0_dperp is not None:
        return channels_from_k0(cfg.guide, cfg.k0_dperp / cfg.guide.d_perp)
    raise ConfigError("[kinematics]: give k or k0_dperp")


# ---------------------------------------------------------------- commands


def cmd_channels(cfg):
    ch = _channels(cfg)
    rec = {
        "k": ch.k,
        "n_E": ch.n_E,
        "p_c": ch.p_c,
        "gamma": ch.gamma,
        "d_perp": ch.d_perp,
        "C_prime": cir_constant(cfg.guide),
    }
    for n in range(ch.n_E + 1):
        rec[f"q_{n}"] = float(ch.q[n])
        rec[f"k_{n}"] = float(ch.k_open[n])
        rec[f"N_{n}"] = float(ch.N[n])
    units = {"k": WAVENUMBER, "p_c": WAVENUMBER, "d_perp": LENGTH}
    units.update({f"q_{n}": WAVENUMBER for n in range(ch.n_E + 1)})
    units.update({f"k_{n}": WAVENUMBER for n in range(ch.n_E + 1)})
    return [rec], units


def _solve_point(job):
    """One scan point of ``solve``; module level so worker processes can pickle it."""
    cfg, variable, value = job
    rec = {variable: value}
    lmax = cfg.lmax
    k0d, a = None, None
    if variable == "Lmax":
        lmax = int(value)
    elif variable == "k0_dperp":
        k0d = value
    elif variable == "a_over_dperp":
        a = value * cfg.guide.d_perp
    ch = _channels(cfg, k0d)
    model = build_model(cfg, a)
    inc = solver.IncidentState(cfg.b) if cfg.b is not None else solver.IncidentState.single(0, ch.n_E)
    rec.update({"L_max": lmax, "k": ch.k, "n_E": ch.n_E})
    try:
        sol = solver.solve_T(ch, model, inc, lmax)
        amp = solver.amplitudes(ch, sol, inc, unitarity_tol=cfg.unitarity_tol)
    except PoleEncountered:
        rec.update({"pole": True, "residual": math.nan, "delta_g": math.nan, "delta_u": math.nan})
        return rec, None
    rec.update({
        "pole": False,
        "residual": amp.conservation_residual,
        "delta_g": math.nan if amp.delta_g is None else amp.delta_g,
        "delta_u": math.nan if amp.delta_u is None else amp.delta_u,
    })
    return rec, (amp.f_g, amp.f_u)


def _parallel_map(fn, jobs, workers):
    if workers <= 1:
        return [fn(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        # map preserves submission order
        return list(pool.map(fn, jobs))


def cmd_solve(cfg):
    variable = cfg.scan_variable
    values = cfg.scan_values()
    results = _parallel_map(_solve_point, [(cfg, variable, v) for v in values], cfg.workers)
    n_max = max(r["n_E"] for r, _ in results)
    records = []
    for rec, f in results:
        for n in range(n_max + 1):
            for name, idx in (("f_g", 0), ("f_u", 1)):
                val = f[idx][n] if f is not None and n < len(f[idx]) else complex(math.nan, math.nan)
                rec[f"{name}{n}_re"] = float(val.real)
                rec[f"{name}{n}_im"] = float(val.imag)
        records.append(rec)
    return records, {"k": WAVENUMBER}


def cmd_cir(cfg):
    if cfg.scan_variable not in (None, "a_over_dperp"):
        raise ConfigError(f"[scan]: cir scans a_over_dperp, not {cfg.scan_variable}")
    if cfg.scan_variable is None:
        scan, points = (0.0, 1.0), 101
    else:
        scan, points = (cfg.scan_start, cfg.scan_stop), cfg.scan_points
    rep = analysis.find_cir(cfg.guide, scan, points)
    landmarks = analysis.bound_state_landmarks(cfg.guide)._asdict() if cfg.guide.is_disc else None
    report = {
        "c_prime": rep.c_prime,
        "resonance_location": rep.resonance_location,
        "landmarks": landmarks,
        "grid": [float(x) for x in rep.grid],
        "g1d_dperp": [float(g) for g in rep.g1d],
    }
    return report, {}


def _bound_point(job):
    spec, x, rtol = job
    rec = {"a_over_dperp": x}
    res = None if x == 0 else analysis.bound_state(x * spec.d_perp, spec, rtol=rtol)
    if res is None:
        rec.update({"exists": False, "kappa": math.nan, "kappa_dperp": math.nan, "E_abs": math.nan,
                    "binding": math.nan, "binding_over_eps0": math.nan, "converged": False, "iterations": 0})
        return rec
    rec.update({
        "exists": True,
        "kappa": res.kappa,
        "kappa_dperp": res.kappa * spec.d_perp,
        "E_abs": res.E_abs,
        "binding": res.binding,
        "binding_over_eps0": res.binding_over_eps0,
        "converged": res.converged,
        "iterations": res.iterations,
    })
    return rec


def cmd_bound_state(cfg):
    if cfg.scan_variable not in (None, "a_over_dperp"):
        raise ConfigError(f"[scan]: bound-state scans a_over_dperp, not {cfg.scan_variable}")
    values = cfg.scan_values(default=list(np.linspace(-5.0, 5.0, 201)))
    records = _parallel_map(_bound_point, [(cfg.guide, float(x), cfg.root_rtol) for x in values], cfg.workers)
    return records, {"kappa": WAVENUMBER, "E_abs": ENERGY, "binding": ENERGY}


COMMANDS = {
    "channels": cmd_channels,
    "solve": cmd_solve,
    "cir": cmd_cir,
    "bound-state": cmd_bound_state,
}


# ---------------------------------------------------------------- output


def apply_unit_scale(records, units, scale):
    """Lengths times ``scale``, wavenumbers divided by it, energies by its square."""
    if scale == 1.0:
        return records
    factor = {LENGTH: scale, WAVENUMBER: 1.0 / scale, ENERGY: 1.0 / scale**2}
    return [{k: (v * factor[units[k]] if k in units else v) for k, v in rec.items()} for rec in records]


def _fmt(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return "%.17g" % v
    return str(v)


def to_csv(records):
    buf = io.StringIO()
    if not records:
        return ""
    writer = csv.writer(buf, lineterminator="\n")
    header = list(records[0])
    writer.writerow(header)
    for rec in records:
        writer.writerow([_fmt(rec[h]) for h in header])
    return buf.getvalue()


def to_json(obj):
    return json.dumps(obj, indent=1) + "\n"


def _cir_rows(report):
    return [
        {"a_over_dperp": x, "g1d_dperp": g, "resonance_location": report["resonance_location"],
         "c_prime": report["c_prime"]}
        for x, g in zip(report["grid"], report["g1d_dperp"])
    ]


def render(command, result, units, fmt, unit_scale=1.0):
    if command == "cir":
        if fmt == "json":
            return to_json(result)
        return to_csv(_cir_rows(result))
    records = apply_unit_scale(result, units, unit_scale)
    return to_json(records) if fmt == "json" else to_csv(records)


def build_parser():
    ap = argparse.ArgumentParser(prog="guidescat", description="Scattering of a central potential inside a cylindrical guide.")
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("--config", type=Path, help="INI configuration file")
    ap.add_argument("--out", type=Path, help="output file (default: stdout)")
    ap.add_argument("--format", choices=FORMATS)
    ap.add_argument("--lmax", type=int, help="highest partial wave kept in the solve")
    ap.add_argument("--cosine-approx", action="store_true", help="use the cosine approximation for the J_0 roots")
    ap.add_argument("--unit-scale", type=float, help="physical length of one reduced length unit")
    ap.add_argument("--workers", type=int, default=1, help="worker processes for scans")
    ap.add_argument("--set", dest="overrides", action="append", default=[], metavar="SECTION.KEY=VALUE",
                    help="override a configuration entry")
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    try:
        cfg = load_config(args.config, args.overrides)
        if args.cosine_approx:
            cfg.guide = GuideSpec(cfg.guide.kind, cfg.guide.transverse_scale, RootMode.COSINE)
        if args.lmax is not None:
            cfg.lmax = args.lmax
        if args.format:
            cfg.format = args.format
        if args.out:
            cfg.out = args.out
        if args.unit_scale is not None:
            if not args.unit_scale > 0:
                raise ConfigError("--unit-scale must be > 0")
            cfg.unit_scale = args.unit_scale
        cfg.workers = args.workers
        result, units = COMMANDS[args.command](cfg)
        text = render(args.command, result, units, cfg.format, cfg.unit_scale)
    except GuideScatError as exc:
        print(f"guidescat {args.command}: error: {exc}", file=sys.stderr)
        return 2
    if cfg.out is None:
        sys.stdout.write(text)
    else:
        cfg.out.write_text(text)
        log.info("wrote %s", cfg.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
