"""Config-driven experiment runner emitting CSV tables and PGM set masks.

One subcommand per experiment kind.  A flat INI config supplies the map,
the partition, and per-kind knobs; --out, --threads, and --seed override
the corresponding config values.  CSV bodies are deterministic for a fixed
config and seed: the provenance comments carry a config hash and a
timestamp, the data rows never do.  Grid points of pointwise scans are
dispatched to a bounded thread pool and gathered in input order; scans
that thread a random stream across grid points run as a single unit.
"""

from __future__ import annotations

import argparse
import configparser
import hashlib
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__
from .dynamics import (CatMapSpec, KickProfile, estimate_expansion_rates,
                       verify_anosov)
from .fup import fit_beta, fup_norm
from .lagrangian import build_state, default_family, geometry_check, outside_mass
from .partition import TorusPartition, build_partition, torus_delta
from .porosity import IntervalSet, porosity_profile
from .quantum import (DampedSpec, damped_decay_scan, egorov_discrepancy,
                      HilbertSpace, key_estimate_scan, mass_scan)
from .smoothing import plateau_1d
from .words import counting_bound, propagation_times, word_set_mask

__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "load_config",
    "cantor_set",
    "write_csv",
    "render_set_mask",
    "read_pgm",
    "run",
    "main",
]


class ConfigError(ValueError):
    """Invalid configuration; the message names the section and field."""


# ---------------------------------------------------------------------------
# configuration

_KNOWN_SECTIONS = ("map", "partition", "experiment", "output")

# accepted [experiment] keys per subcommand, used to catch typos early
_EXPERIMENT_KEYS = {
    "dynamics-report": {"grid", "cone_slope", "depth"},
    "porosity": {"cantor_depth", "intervals", "scales", "window_ratio"},
    "fup-scan": {"cantor_depths", "tol"},
    "egorov-scan": {"dimensions", "time"},
    "key-estimate": {"dimensions", "policy", "sample_size", "factor"},
    "damped-scan": {"dimensions", "damp_center", "damp_inner", "damp_outer",
                    "damp_strength", "alpha", "beta"},
    "mass-scan": {"dimensions", "ball_center", "ball_inner", "ball_outer",
                  "anti_wick"},
    "lagrangian-check": {"h_exponents", "family_exponent", "c0"},
    "render-sets": {"grid", "lengths", "orientation"},
    "counting": {"h_exponents", "alpha"},
}

_MAP_KEYS = {"matrix", "epsilon", "kick_sin", "kick_cos"}
_PARTITION_KEYS = {"hole_center", "hole_radius", "plateau_fraction",
                   "fine_diameter", "fine_plateau_fraction"}
_OUTPUT_KEYS = {"directory"}


class _Section:
    """Typed access to one config section with range diagnostics."""

    def __init__(self, name: str, raw: dict):
        self.name = name
        self.raw = dict(raw)

    def _fail(self, key, why):
        raise ConfigError(f"[{self.name}] {key}: {why}")

    def check_keys(self, allowed):
        extra = set(self.raw) - set(allowed) - {"kind"}
        if extra:
            self._fail(sorted(extra)[0], "unknown field")

    def get_float(self, key, default, lo=-math.inf, hi=math.inf):
        text = self.raw.get(key)
        if text is None:
            return default
        try:
            val = float(text)
        except ValueError:
            self._fail(key, f"not a number: {text!r}")
        if not lo <= val <= hi:
            self._fail(key, f"{val} outside [{lo}, {hi}]")
        return val

    def get_int(self, key, default, lo=-(1 << 62), hi=1 << 62):
        text = self.raw.get(key)
        if text is None:
            return default
        try:
            val = int(text)
        except ValueError:
            self._fail(key, f"not an integer: {text!r}")
        if not lo <= val <= hi:
            self._fail(key, f"{val} outside [{lo}, {hi}]")
        return val

    def get_floats(self, key, default, count=None):
        text = self.raw.get(key)
        if text is None:
            return default
        try:
            vals = tuple(float(t) for t in text.replace(",", " ").split())
        except ValueError:
            self._fail(key, f"not a number list: {text!r}")
        if count is not None and len(vals) != count:
            self._fail(key, f"expected {count} numbers, got {len(vals)}")
        return vals

    def get_ints(self, key, default, lo=1):
        text = self.raw.get(key)
        if text is None:
            return default
        try:
            vals = tuple(int(t) for t in text.replace(",", " ").split())
        except ValueError:
            self._fail(key, f"not an integer list: {text!r}")
        if not vals:
            self._fail(key, "empty list")
        if any(v < lo for v in vals):
            self._fail(key, f"entries must be at least {lo}")
        return vals

    def get_str(self, key, default, choices=None):
        val = self.raw.get(key, default)
        if choices is not None and val not in choices:
            self._fail(key, f"must be one of {sorted(choices)}")
        return val

    def get_flag(self, key, default):
        text = self.raw.get(key)
        if text is None:
            return default
        low = text.strip().lower()
        if low in ("1", "true", "yes", "on"):
            return True
        if low in ("0", "false", "no", "off"):
            return False
        self._fail(key, f"not a boolean: {text!r}")


class ExperimentConfig:
    """Resolved run inputs: map, partition, per-kind knobs, output, seed."""

    def __init__(self, kind, sections, out_dir, threads, seed):
        self.kind = kind
        self.sections = sections
        self.out_dir = out_dir
        self.threads = threads
        self.seed = seed
        self.map_spec = _map_from_section(sections["map"])
        self.partition = _partition_from_section(sections["partition"])
        self.experiment = sections["experiment"]
        self.experiment.check_keys(_EXPERIMENT_KEYS[kind])
        stated = self.experiment.raw.get("kind")
        if stated is not None and stated != kind:
            raise ConfigError(
                f"[experiment] kind: config says {stated!r}, command is {kind!r}")
        self.digest = _digest(sections, seed)

    def provenance(self):
        stamp = time.strftime("%Y-%m-%dT%H:%M:%S", time.gmtime())
        return (
            f"config {self.digest} seed {self.seed} kind {self.kind}",
            f"generated {stamp} fuplab {__version__} numpy {np.__version__}",
        )


def _digest(sections, seed):
    items = [f"seed={seed}"]
    for name in sorted(sections):
        for key in sorted(sections[name].raw):
            items.append(f"{name}.{key}={sections[name].raw[key]}")
    return hashlib.sha256("\n".join(items).encode()).hexdigest()[:12]


def _map_from_section(sec: _Section) -> CatMapSpec:
    sec.check_keys(_MAP_KEYS)
    entries = sec.get_floats("matrix", (2.0, 1.0, 1.0, 1.0), count=4)
    ints = tuple(int(round(v)) for v in entries)
    if any(abs(a - b) > 1e-9 for a, b in zip(entries, ints)):
        sec._fail("matrix", "entries must be integers")
    epsilon = sec.get_float("epsilon", 0.0, lo=-0.5, hi=0.5)
    sin_c = sec.get_floats("kick_sin", None)
    cos_c = sec.get_floats("kick_cos", None)
    linear = ((ints[0], ints[1]), (ints[2], ints[3]))
    try:
        if sin_c is None and cos_c is None:
            return CatMapSpec(linear=linear, epsilon=epsilon)
        return CatMapSpec(linear=linear, epsilon=epsilon,
                          kick=KickProfile(cos_coeffs=cos_c or (),
                                           sin_coeffs=sin_c or ()))
    except ValueError as exc:
        raise ConfigError(f"[map] {exc}") from exc


def _partition_from_section(sec: _Section) -> TorusPartition:
    sec.check_keys(_PARTITION_KEYS)
    center = sec.get_floats("hole_center", (0.5, 0.5), count=2)
    radius = sec.get_float("hole_radius", 0.2, lo=1e-6, hi=0.45)
    fraction = sec.get_float("plateau_fraction", 0.5, lo=1e-6, hi=1.0 - 1e-6)
    fine = sec.get_float("fine_diameter", 0.0, lo=0.0, hi=1.0)
    fine_frac = sec.get_float("fine_plateau_fraction", 0.6, lo=1e-6, hi=1.0 - 1e-6)
    try:
        return build_partition(hole_center=center, hole_radius=radius,
                               plateau_fraction=fraction,
                               fine_diameter=fine or None,
                               fine_plateau_fraction=fine_frac)
    except ValueError as exc:
        raise ConfigError(f"[partition] {exc}") from exc


def load_config(kind: str, path: str | None, out_dir: str | None,
                threads: int, seed: int | None) -> ExperimentConfig:
    """Parse and validate the INI file, folding in command-line overrides."""
    parser = configparser.ConfigParser(interpolation=None)
    if path is not None:
        if not os.path.exists(path):
            raise ConfigError(f"config file not found: {path}")
        try:
            parser.read(path)
        except configparser.Error as exc:
            raise ConfigError(str(exc)) from exc
    for name in parser.sections():
        if name not in _KNOWN_SECTIONS:
            raise ConfigError(f"[{name}]: unknown section")
    sections = {name: _Section(name, dict(parser[name]) if parser.has_section(name) else {})
                for name in _KNOWN_SECTIONS}
    sections["output"].check_keys(_OUTPUT_KEYS)
    if out_dir is None:
        out_dir = sections["output"].get_str("directory", "out")
    if seed is None:
        seed = 0
    if threads < 1:
        raise ConfigError("--threads must be at least 1")
    return ExperimentConfig(kind, sections, out_dir, threads, seed)


# ---------------------------------------------------------------------------
# output helpers

def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_csv(path, header, rows, provenance=()) -> str:
    """Comma-separated table with '#' comment lines above the header."""
    lines = [f"# {note}" for note in provenance]
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    return path


def render_set_mask(mask, path) -> str:
    """Plain-text PGM (magic P2, maxval 255) with 255 marking the set."""
    arr = np.asarray(mask)
    if arr.ndim != 2:
        raise ValueError("mask must be rectangular")
    rows, cols = arr.shape
    lines = ["P2", f"{cols} {rows}", "255"]
    for row in arr:
        lines.append(" ".join("255" if bool(v) else "0" for v in row))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    return path


def read_pgm(path) -> np.ndarray:
    """Parse a plain-text PGM back into a 2-d integer array."""
    tokens = []
    with open(path) as fh:
        for line in fh:
            body = line.split("#", 1)[0]
            tokens.extend(body.split())
    if not tokens or tokens[0] != "P2":
        raise ValueError(f"{path}: not a plain PGM (P2) file")
    if len(tokens) < 4:
        raise ValueError(f"{path}: truncated header")
    cols, rows, maxval = int(tokens[1]), int(tokens[2]), int(tokens[3])
    data = np.array([int(t) for t in tokens[4:]], dtype=int)
    if data.size != rows * cols:
        raise ValueError(f"{path}: expected {rows * cols} pixels, got {data.size}")
    if data.size and (data.min() < 0 or data.max() > maxval):
        raise ValueError(f"{path}: pixel outside [0, {maxval}]")
    return data.reshape(rows, cols)


def _ordered_map(fn, items, threads):
    if threads <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _partial_exponents(h_values, values):
    """Per-row prefix fit of the decay exponent; nan while underdetermined."""
    out = []
    for i in range(len(h_values)):
        try:
            out.append(fit_beta(h_values[:i + 1], values[:i + 1]).beta)
        except ValueError:
            out.append(float("nan"))
    return out


def cantor_set(depth: int) -> IntervalSet:
    """Mid-third Cantor iterate on [0, 1]: 2^depth intervals of width 3^-depth."""
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    pieces = [(0.0, 1.0)]
    for _ in range(depth):
        nxt = []
        for left, right in pieces:
            width = (right - left) / 3.0
            nxt.append((left, left + width))
            nxt.append((right - width, right))
        pieces = nxt
    return IntervalSet(tuple(pieces))


def _ball_symbol(center, inner, outer, strength=1.0):
    cx, cxi = center

    def symbol(x, xi):
        dx = torus_delta(np.asarray(x, dtype=float), cx)
        dxi = torus_delta(np.asarray(xi, dtype=float), cxi)
        return strength * plateau_1d(np.hypot(dx, dxi), inner, outer)

    return symbol


# ---------------------------------------------------------------------------
# subcommands

def _cmd_dynamics_report(cfg: ExperimentConfig):
    knobs = cfg.experiment
    grid = knobs.get_int("grid", 512, lo=16, hi=8192)
    cone = knobs.get_float("cone_slope", 0.5, lo=1e-3, hi=1.0)
    depth = knobs.get_int("depth", 24, lo=2, hi=256)
    verdict = verify_anosov(cfg.map_spec, grid=grid, cone_slope=cone)
    rates = estimate_expansion_rates(cfg.map_spec, grid=grid, depth=depth)
    row = (int(verdict.accepted), verdict.reason.replace(",", ";"),
           verdict.expansion_factor, verdict.cone_expansion, verdict.margin,
           verdict.epsilon_max, rates.lambda0, rates.lambda1, rates.big_lambda)
    path = os.path.join(cfg.out_dir, "dynamics.csv")
    write_csv(path, ("accepted", "reason", "expansion_factor", "cone_expansion",
                     "margin", "epsilon_max", "lambda0", "lambda1", "big_lambda"),
              [row], cfg.provenance())
    return [path]


def _cmd_porosity(cfg: ExperimentConfig):
    knobs = cfg.experiment
    depth = knobs.get_int("cantor_depth", 6, lo=1, hi=14)
    pairs = knobs.get_floats("intervals", None)
    ratio = knobs.get_float("window_ratio", 2.0, lo=1.0, hi=100.0)
    if pairs is not None:
        if len(pairs) % 2:
            knobs._fail("intervals", "need an even number of endpoints")
        omega = IntervalSet(tuple(zip(pairs[::2], pairs[1::2])))
    else:
        omega = cantor_set(depth)
    scales = knobs.get_floats("scales", tuple(3.0 ** -j for j in range(1, depth + 1)))
    if any(not 0.0 < s <= 1.0 for s in scales):
        knobs._fail("scales", "entries must lie in (0, 1]")
    report = porosity_profile(omega, scales, window_ratio=ratio)
    iv_path = os.path.join(cfg.out_dir, "intervals.csv")
    write_csv(iv_path, ("left", "right"),
              [(l, r) for l, r in omega.intervals], cfg.provenance())
    pr_path = os.path.join(cfg.out_dir, "porosity.csv")
    write_csv(pr_path, ("scale", "nu_star"),
              list(zip(report.scales, report.values)), cfg.provenance())
    return [iv_path, pr_path]


def _cmd_fup_scan(cfg: ExperimentConfig):
    knobs = cfg.experiment
    depths = knobs.get_ints("cantor_depths", (5, 6, 7, 8, 9), lo=1)
    tol = knobs.get_float("tol", 1e-4, lo=1e-12, hi=1.0)

    def point(depth):
        omega = cantor_set(depth)
        fn = fup_norm(3.0 ** -depth, omega, omega, tol=tol)
        return (fn.h, fn.value, fn.volume_bound, fn.size,
                int(fn.last_delta <= tol))

    rows = _ordered_map(point, list(depths), cfg.threads)
    fit = fit_beta([r[0] for r in rows], [r[1] for r in rows])
    path = os.path.join(cfg.out_dir, "fup.csv")
    notes = cfg.provenance() + (
        f"fitted beta {fit.beta!r} r_squared {fit.r_squared!r}",)
    write_csv(path, ("h", "norm", "volume_bound", "M", "converged"), rows, notes)
    return [path]


def _cmd_egorov_scan(cfg: ExperimentConfig):
    knobs = cfg.experiment
    dims = knobs.get_ints("dimensions", (64, 128, 256, 512, 1024), lo=2)
    steps = knobs.get_int("time", 1, lo=0, hi=64)
    observable = {(1, 0): 0.5, (-1, 0): 0.5, (0, 1): 0.5, (0, -1): 0.5}

    def point(big_n):
        space = HilbertSpace(big_n)
        rep = egorov_discrepancy(cfg.map_spec, observable, space, steps)
        return (big_n, space.h, rep.t, rep.value, int(rep.band_flag))

    rows = _ordered_map(point, list(dims), cfg.threads)
    path = os.path.join(cfg.out_dir, "egorov.csv")
    write_csv(path, ("N", "h", "t", "discrepancy", "band_flag"), rows,
              cfg.provenance())
    return [path]


def _cmd_key_estimate(cfg: ExperimentConfig):
    knobs = cfg.experiment
    dims = knobs.get_ints("dimensions", (128, 256, 512, 1024), lo=2)
    policy = knobs.get_str("policy", "all-star")
    if not (policy == "all-star" or policy.startswith("worst-of-sample")):
        knobs._fail("policy", "must be all-star or worst-of-sample")
    sample = knobs.get_int("sample_size", 64, lo=1, hi=4096)
    factor = knobs.get_float("factor", 7.0 / 6.0, lo=0.01, hi=100.0)
    rates = estimate_expansion_rates(cfg.map_spec)
    scan = key_estimate_scan(cfg.map_spec, cfg.partition, dims,
                             rates.lambda0_raw, policy=policy,
                             sample_size=sample, factor=factor, seed=cfg.seed)
    partial = _partial_exponents(scan.h_values, scan.norms)
    rows = list(zip(scan.dimensions, scan.h_values, scan.word_lengths,
                    scan.norms, partial))
    path = os.path.join(cfg.out_dir, "key.csv")
    notes = cfg.provenance() + (
        f"policy {scan.policy} lambda0_raw {rates.lambda0_raw!r}",
        f"fitted beta {scan.fit.beta!r} r_squared {scan.fit.r_squared!r}",)
    write_csv(path, ("N", "h", "word_length", "norm", "beta_fit_partial"),
              rows, notes)
    return [path]


def _cmd_damped_scan(cfg: ExperimentConfig):
    knobs = cfg.experiment
    dims = knobs.get_ints("dimensions", (128, 256, 512), lo=2)
    center = knobs.get_floats("damp_center", (0.5, 0.5), count=2)
    inner = knobs.get_float("damp_inner", 0.15, lo=0.0, hi=0.5)
    outer = knobs.get_float("damp_outer", 0.3, lo=1e-6, hi=0.5)
    strength = knobs.get_float("damp_strength", 0.5, lo=0.0, hi=50.0)
    alpha = knobs.get_float("alpha", 0.1, lo=1e-6, hi=0.5)
    beta = knobs.get_float("beta", 0.3, lo=1e-6, hi=10.0)
    if inner >= outer:
        knobs._fail("damp_inner", "must be below damp_outer")
    damped = DampedSpec(_ball_symbol(center, inner, outer, strength),
                        label="ball damping")
    rates = estimate_expansion_rates(cfg.map_spec)
    scan = damped_decay_scan(cfg.map_spec, damped, cfg.partition, dims,
                             alpha=alpha, beta=beta, lambda1=rates.lambda1)
    rows = [(n, nm, sr, scan.alpha1) for n, nm, sr in
            zip(scan.dimensions, scan.power_norms, scan.spectral_radii)]
    path = os.path.join(cfg.out_dir, "damping.csv")
    notes = cfg.provenance() + (
        f"powers {' '.join(str(p) for p in scan.powers)} beta1 {scan.beta1!r}",
        f"fitted beta {scan.fit.beta!r} r_squared {scan.fit.r_squared!r}",)
    write_csv(path, ("N", "damped_norm", "spectral_radius", "alpha1"),
              rows, notes)
    return [path]


def _cmd_mass_scan(cfg: ExperimentConfig):
    knobs = cfg.experiment
    dims = knobs.get_ints("dimensions", tuple(range(100, 401, 50)), lo=2)
    center = knobs.get_floats("ball_center", (0.5, 0.5), count=2)
    inner = knobs.get_float("ball_inner", 0.125, lo=1e-6, hi=0.5)
    outer = knobs.get_float("ball_outer", 0.25, lo=1e-6, hi=0.5)
    anti_wick = knobs.get_flag("anti_wick", True)
    if inner >= outer:
        knobs._fail("ball_inner", "must be below ball_outer")
    scan = mass_scan(cfg.map_spec, _ball_symbol(center, inner, outer),
                     dims, anti_wick=anti_wick)
    rows = list(zip(scan.dimensions, scan.minima, scan.eigencounts))
    path = os.path.join(cfg.out_dir, "mass.csv")
    write_csv(path, ("N", "min_mass", "eigencount"), rows, cfg.provenance())
    return [path]


def _cmd_lagrangian_check(cfg: ExperimentConfig):
    knobs = cfg.experiment
    exps = knobs.get_ints("h_exponents", tuple(range(8, 15)), lo=1)
    family_exp = knobs.get_float("family_exponent", 0.3, lo=0.01, hi=0.99)
    c0 = knobs.get_float("c0", 3.0, lo=1.0, hi=100.0)
    family = default_family(exponent=family_exp, c0=c0)
    geo = geometry_check(family(2.0 ** -exps[0]))

    def point(k):
        spec = family(2.0 ** -k)
        rep = outside_mass(build_state(spec))
        return (spec.h, spec.h_prime, rep.value)

    rows3 = _ordered_map(point, list(exps), cfg.threads)
    partial = _partial_exponents([r[0] for r in rows3], [r[2] for r in rows3])
    rows = [(h, hp, m, s) for (h, hp, m), s in zip(rows3, partial)]
    path = os.path.join(cfg.out_dir, "lagrangian.csv")
    notes = cfg.provenance() + (
        f"geometry ok {int(geo.ok)} support_volume {geo.support_volume!r}",)
    write_csv(path, ("h", "h_prime", "outside_mass", "slope_partial"),
              rows, notes)
    return [path]


def _cmd_render_sets(cfg: ExperimentConfig):
    knobs = cfg.experiment
    grid = knobs.get_int("grid", 160, lo=8, hi=2048)
    lengths = knobs.get_ints("lengths", (1, 2, 3, 4), lo=1)
    orientation = knobs.get_str("orientation", "-", choices={"-", "+"})
    paths = []
    for n in lengths:
        mask, _ = word_set_mask(cfg.map_spec, cfg.partition, "*" * n,
                                orientation=orientation, grid=grid)
        # grid_points runs x along the first axis; flip to image rows so the
        # momentum coordinate increases upward in the rendered mask
        img = mask.reshape(grid, grid).T[::-1, :]
        path = os.path.join(cfg.out_dir, f"set_{n}.pgm")
        render_set_mask(img, path)
        paths.append(path)
    return paths


def _cmd_counting(cfg: ExperimentConfig):
    knobs = cfg.experiment
    exps = knobs.get_ints("h_exponents", tuple(range(6, 15)), lo=1)
    alpha = knobs.get_float("alpha", 0.1, lo=1e-6, hi=0.5 - 1e-9)
    rates = estimate_expansion_rates(cfg.map_spec)
    rows = []
    for k in exps:
        h = 2.0 ** -k
        n0 = propagation_times(rates, h).n0
        bound = counting_bound(n0, alpha, rates.lambda0, rates.big_lambda, h)
        rows.append((h, n0, bound.count_sparse, bound.exponent,
                     bound.envelope, bound.prefactor))
    fitted_c = max(r[5] for r in rows)
    path = os.path.join(cfg.out_dir, "counting.csv")
    notes = cfg.provenance() + (
        f"alpha {alpha!r} lambda0 {rates.lambda0!r} big_lambda {rates.big_lambda}",
        f"fitted prefactor {fitted_c!r}",)
    write_csv(path, ("h", "n0", "count_sparse", "exponent", "envelope",
                     "prefactor"), rows, notes)
    return [path]


_COMMANDS = {
    "dynamics-report": _cmd_dynamics_report,
    "porosity": _cmd_porosity,
    "fup-scan": _cmd_fup_scan,
    "egorov-scan": _cmd_egorov_scan,
    "key-estimate": _cmd_key_estimate,
    "damped-scan": _cmd_damped_scan,
    "mass-scan": _cmd_mass_scan,
    "lagrangian-check": _cmd_lagrangian_check,
    "render-sets": _cmd_render_sets,
    "counting": _cmd_counting,
}


def run(kind: str, config_path: str | None = None, out_dir: str | None = None,
        threads: int = 1, seed: int | None = None):
    """Run one experiment kind; returns the list of files written."""
    if kind not in _COMMANDS:
        raise ConfigError(f"unknown experiment kind: {kind}")
    cfg = load_config(kind, config_path, out_dir, threads, seed)
    os.makedirs(cfg.out_dir, exist_ok=True)
    return _COMMANDS[kind](cfg)


def main(argv=None) -> int:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="INI config file")
    common.add_argument("--out", help="output directory (default from config, else 'out')")
    common.add_argument("--threads", type=int, default=1,
                        help="worker pool size for pointwise scans")
    common.add_argument("--seed", type=int, default=None,
                        help="seed for randomized policies (default 0)")
    parser = argparse.ArgumentParser(
        prog="fuplab",
        description="deterministic experiment scans writing CSV and PGM artifacts")
    sub = parser.add_subparsers(dest="kind", required=True)
    for name in _COMMANDS:
        sub.add_parser(name, parents=[common])
    args = parser.parse_args(argv)
    try:
        written = run(args.kind, args.config, args.out, args.threads, args.seed)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    for path in written:
        print(path)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
