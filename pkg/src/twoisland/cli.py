"""Command-line experiments: bound verification, scaling studies, cross-checks.

Subcommands:
  verify      exact distance vs bound on a parameter grid (CSV + JSON)
  scaling     bound totals and exact distances along an asymptotic family,
              with fitted log-log slopes (CSV + JSON)
  crosscheck  Monte Carlo / quadrature / solver consistency checks (JSON)
  factors     print the derivative-bound factors for given parameters
  moments     print exact chain / diffusion / beta moments

Configs are INI files; see the README for annotated examples.  Reports are
byte-deterministic given (config, seed): records are sorted before writing
and wall-clock timings go to stderr only.

Exit codes: 0 success, 1 usage or config error, 2 an acceptance check
(dominance, slope tolerance, z-score) failed.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import math
import re
import sys
import time
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import __version__
from .beta import BetaParams, beta_moment, beta_params_from_chain
from .bounds import (
    BoundBreakdown,
    polynomial_h_norms,
    sb_beta_bound,
    sb_ti_bound,
    stein_factors,
    wf_beta_bound,
    wf_ti_bound,
)
from .chains import ChainParams, ModelKind, RngSeed, run_chain, validate_params
from .diffusion import TIParams, map_chain_to_ti, ti_stationary_moments
from .dual import (
    IntegralKind,
    UrnRates,
    simulate_dual_absorption,
    urn_integral_closed_form,
    urn_integral_quadrature,
)
from .errors import ConfigError, MTooSmallError, TwoIslandError
from .moments import MomentTable, exact_stationary_moments, moment_basis
from .regimes import ScalingRegime

try:  # configparser is stdlib; guard only to give a clean message if removed
    import configparser
except ImportError as exc:  # pragma: no cover
    raise ConfigError("configparser unavailable") from exc


TERM_COLUMNS = [
    "term_Dx_Ax", "term_Dy_Ay", "term_Dxx_Axx", "term_Dyy_Ayy", "term_Dxy_Axy",
    "term_Dxxx_Axxx", "term_Dxxy_Axxy", "term_Dxyy_Axyy", "term_Dyyy_Ayyy",
    "term_h1_A1", "term_h2_A2", "term_h21_A3",
]
_TERM_KEY_MAP = {
    "Dx*Ax": "term_Dx_Ax", "Dy*Ay": "term_Dy_Ay", "Dxx*Axx": "term_Dxx_Axx",
    "Dyy*Ayy": "term_Dyy_Ayy", "Dxy*Axy": "term_Dxy_Axy",
    "Dxxx*Axxx": "term_Dxxx_Axxx", "Dxxy*Axxy": "term_Dxxy_Axxy",
    "Dxyy*Axyy": "term_Dxyy_Axyy", "Dyyy*Ayyy": "term_Dyyy_Ayyy",
    "h1*A1": "term_h1_A1", "h2*A2": "term_h2_A2", "h21*A3": "term_h21_A3",
}

SCALING_SCHEMA = "scaling-v1"
VERIFY_SCHEMA = "verify-v1"

SCALING_COLUMNS = [
    "schema", "kind", "eps", "target", "h", "N", "M", "c",
    "exact_distance", "bound_total", "vacuous", "theory_slope",
    "config_hash", "code_version", *TERM_COLUMNS,
]
VERIFY_COLUMNS = [
    "schema", "kind", "target", "h", "N", "M", "c", "p1", "p2", "q1", "q2",
    "exact_distance", "bound_total", "dominated", "vacuous", "error",
    "config_hash", "code_version", *TERM_COLUMNS,
]


# ---------------------------------------------------------------------------
# small shared helpers
# ---------------------------------------------------------------------------

_MONOMIAL_RE = re.compile(r"^(?:x(\d*))?(?:y(\d*))?$")


def parse_monomial(token: str) -> Tuple[int, int]:
    """'x' -> (1,0), 'x2y' -> (2,1), 'y3' -> (0,3)."""
    match = _MONOMIAL_RE.match(token.strip())
    if not match or token.strip() == "":
        raise ConfigError(f"cannot parse test function {token!r}")
    n = 0 if match.group(1) is None else int(match.group(1) or 1)
    m = 0 if match.group(2) is None else int(match.group(2) or 1)
    if n + m == 0:
        raise ConfigError(f"test function {token!r} is constant")
    return n, m


def format_monomial(n: int, m: int) -> str:
    out = ""
    if n:
        out += "x" if n == 1 else f"x{n}"
    if m:
        out += "y" if m == 1 else f"y{m}"
    return out


def parse_power(token: str) -> int:
    n, m = parse_monomial(token)
    if m != 0:
        raise ConfigError(f"beta test functions are univariate, got {token!r}")
    return n


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _config_hash(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()[:12]


def _read_config(path: str) -> Tuple[configparser.ConfigParser, str]:
    p = Path(path)
    if not p.exists():
        raise ConfigError(f"config file not found: {path}")
    cfg = configparser.ConfigParser()
    cfg.read(p)
    return cfg, _config_hash(p)


def _floats(cfg, section, key, default=None) -> List[float]:
    if not cfg.has_option(section, key):
        if default is not None:
            return default
        raise ConfigError(f"missing [{section}] {key}")
    return [float(tok) for tok in cfg.get(section, key).split()]


def _ints(cfg, section, key, default=None) -> List[int]:
    return [int(round(v)) for v in _floats(cfg, section, key, default)]


def _tokens(cfg, section, key, default=None) -> List[str]:
    if not cfg.has_option(section, key):
        if default is not None:
            return default
        raise ConfigError(f"missing [{section}] {key}")
    return cfg.get(section, key).split()


def _kind(cfg, section="model") -> ModelKind:
    raw = cfg.get(section, "kind", fallback="two_island_wf").strip().lower()
    for kind in ModelKind:
        if raw in (kind.value, kind.name.lower()):
            return kind
    raise ConfigError(f"unknown model kind {raw!r}")


def _write_csv(path: str, columns: Sequence[str], rows: List[Dict[str, object]]):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_fmt(row.get(col)) for col in columns])


def _write_json(path: str, payload: dict):
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _breakdown_columns(breakdown: Optional[BoundBreakdown]) -> Dict[str, float]:
    if breakdown is None:
        return {}
    return {
        _TERM_KEY_MAP[key]: value
        for key, value in breakdown.terms.items()
        if key in _TERM_KEY_MAP
    }


def _ti_bound(params: ChainParams, n: int, m: int) -> BoundBreakdown:
    if params.kind is ModelKind.TWO_ISLAND_WF:
        return wf_ti_bound(params, n, m)
    return sb_ti_bound(params, n, m)


def _beta_bound(params: ChainParams, k: int, exy2: float) -> BoundBreakdown:
    norms = polynomial_h_norms(k)
    if params.kind is ModelKind.TWO_ISLAND_WF:
        return wf_beta_bound(params, norms, exy2)
    return sb_beta_bound(params, norms, exy2)



def dominates(distance: float, total: float) -> bool:
    """Dominance check with a double-precision allowance.

    Exactly-tight cases (both sides mathematically 0, e.g. h = x with equal
    mutation sums) otherwise fail on solver roundoff of order 1e-16.
    """
    return distance <= total * (1 + 1e-12) + 1e-13


def weighted_average_moment(params: ChainParams, table: MomentTable, k: int) -> float:
    """E[((N X + M Y)/(N+M))^k] from the joint moment table."""
    N, M = params.N, params.M
    total = 0.0
    for j in range(k + 1):
        total += math.comb(k, j) * N**j * M ** (k - j) * table[(j, k - j)]
    return total / (N + M) ** k


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def _grid_params(cfg) -> List[ChainParams]:
    kind = _kind(cfg)
    out = []
    for N in _ints(cfg, "grid", "n_values"):
        for ratio in _floats(cfg, "grid", "m_ratios", [1.0]):
            M = max(1, round(ratio * N))
            for c in _ints(cfg, "grid", "c_values"):
                for p1h in _floats(cfg, "grid", "p1_hats"):
                    for p2h in _floats(cfg, "grid", "p2_hats"):
                        if kind is ModelKind.TWO_ISLAND_WF:
                            for q1h in _floats(cfg, "grid", "q1_hats"):
                                for q2h in _floats(cfg, "grid", "q2_hats"):
                                    out.append(ChainParams(
                                        N=N, M=M, c=c, p1=p1h / N, p2=p2h / N,
                                        q1=q1h / N, q2=q2h / N, kind=kind))
                        else:
                            out.append(ChainParams(
                                N=N, M=M, c=c, p1=p1h / N, p2=p2h / N, kind=kind))
    return out


def cmd_verify(args) -> int:
    cfg, cfg_hash = _read_config(args.config)
    targets = _tokens(cfg, "targets", "targets", ["ti", "beta"])
    ti_fns = [parse_monomial(t) for t in _tokens(cfg, "test_functions", "ti", ["x", "y", "xy", "x2"])]
    beta_fns = [parse_power(t) for t in _tokens(cfg, "test_functions", "beta", ["x", "x2", "x3"])]
    rows: List[Dict[str, object]] = []
    started = time.time()
    violations = 0
    errors = 0
    for params in _grid_params(cfg):
        base = {
            "schema": VERIFY_SCHEMA, "kind": params.kind.value,
            "N": params.N, "M": params.M, "c": params.c,
            "p1": params.p1, "p2": params.p2, "q1": params.q1, "q2": params.q2,
            "config_hash": cfg_hash, "code_version": __version__,
        }
        try:
            validate_params(params)
        except TwoIslandError as exc:
            errors += 1
            rows.append({**base, "target": "-", "h": "-", "error": type(exc).__name__})
            continue
        max_deg = max(
            [n + m for n, m in ti_fns if "ti" in targets] +
            [max(beta_fns) if "beta" in targets else 0] + [2]
        )
        table = exact_stationary_moments(params, max_deg)
        if "ti" in targets:
            ti, _ = map_chain_to_ti(params)
            ti_table = ti_stationary_moments(ti, max(n + m for n, m in ti_fns))
            for (n, m) in ti_fns:
                row = {**base, "target": "ti", "h": format_monomial(n, m)}
                dist = abs(table[(n, m)] - ti_table[(n, m)])
                try:
                    bb = _ti_bound(params, n, m)
                except MTooSmallError as exc:
                    errors += 1
                    rows.append({**row, "exact_distance": dist, "error": type(exc).__name__})
                    continue
                dominated = dominates(dist, bb.total)
                violations += 0 if dominated else 1
                rows.append({**row, "exact_distance": dist, "bound_total": bb.total,
                             "dominated": dominated, "vacuous": bb.is_vacuous,
                             **_breakdown_columns(bb)})
        if "beta" in targets:
            bp = beta_params_from_chain(params)
            exy2 = table.exy2()
            for k in beta_fns:
                row = {**base, "target": "beta", "h": format_monomial(k, 0)}
                dist = abs(weighted_average_moment(params, table, k) - beta_moment(bp, k))
                bb = _beta_bound(params, k, exy2)
                dominated = dominates(dist, bb.total)
                violations += 0 if dominated else 1
                rows.append({**row, "exact_distance": dist, "bound_total": bb.total,
                             "dominated": dominated, "vacuous": bb.is_vacuous,
                             **_breakdown_columns(bb)})
    rows.sort(key=lambda r: tuple(_fmt(r.get(c)) for c in VERIFY_COLUMNS))
    _write_csv(args.csv, VERIFY_COLUMNS, rows)
    summary = {
        "schema": "verify-summary-v1",
        "config_hash": cfg_hash,
        "code_version": __version__,
        "records": len(rows),
        "dominance_violations": violations,
        "surfaced_errors": errors,
        "vacuous": sum(1 for r in rows if r.get("vacuous") is True),
    }
    _write_json(args.json, summary)
    print(f"verify: {len(rows)} records, {violations} dominance violations, "
          f"{errors} surfaced errors", file=sys.stderr)
    print(f"elapsed {time.time() - started:.2f}s", file=sys.stderr)
    return 2 if violations else 0


# ---------------------------------------------------------------------------
# scaling
# ---------------------------------------------------------------------------

def _regimes_from_config(cfg) -> Dict[float, ScalingRegime]:
    kind = _kind(cfg, "regime")
    eps_values = _floats(cfg, "regime", "eps_values")
    base_chat = float(cfg.get("regime", "c_hat", fallback="1.0"))
    chat_map = {}
    if cfg.has_option("regime", "c_hat_per_eps"):
        for tok in cfg.get("regime", "c_hat_per_eps").split():
            eps_s, chat_s = tok.split(":")
            chat_map[float(eps_s)] = float(chat_s)
    regimes = {}
    for eps in eps_values:
        kwargs = dict(
            ratio_m=float(cfg.get("regime", "m_ratio", fallback="1.0")),
            p1_hat=float(cfg.get("regime", "p1_hat")),
            p2_hat=float(cfg.get("regime", "p2_hat")),
            c_hat=chat_map.get(eps, base_chat),
            eps=eps, kind=kind,
        )
        if kind is ModelKind.TWO_ISLAND_WF:
            kwargs["q1_hat"] = float(cfg.get("regime", "q1_hat"))
            kwargs["q2_hat"] = float(cfg.get("regime", "q2_hat"))
        regimes[eps] = ScalingRegime(**kwargs)
    return regimes


def cmd_scaling(args) -> int:
    cfg, cfg_hash = _read_config(args.config)
    regimes = _regimes_from_config(cfg)
    n_values = _ints(cfg, "grid", "n_values")
    if any(b <= a for a, b in zip(n_values, n_values[1:])):
        raise ConfigError("n_values must be strictly increasing")
    exact_max = int(cfg.get("grid", "exact_max_n", fallback="2000"))
    targets = _tokens(cfg, "targets", "targets", ["ti", "beta"])
    ti_fns = [parse_monomial(t) for t in _tokens(cfg, "test_functions", "ti", ["x3"])]
    beta_fns = [parse_power(t) for t in _tokens(cfg, "test_functions", "beta", ["x2"])]
    slope_tol = float(cfg.get("acceptance", "slope_tol", fallback="nan"))
    started = time.time()
    rows: List[Dict[str, object]] = []
    violations = 0
    for eps, regime in sorted(regimes.items()):
        for N in n_values:
            params = regime.instantiate(N)
            with_exact = N <= exact_max
            chain_table = None
            ti_table = None
            if with_exact:
                deg = max([n + m for n, m in ti_fns if "ti" in targets]
                          + ([max(beta_fns)] if "beta" in targets else []) + [2])
                chain_table = exact_stationary_moments(params, deg)
            elif "beta" in targets:
                chain_table = exact_stationary_moments(params, 2)
            base = {
                "schema": SCALING_SCHEMA, "kind": params.kind.value, "eps": eps,
                "N": N, "M": params.M, "c": params.c,
                "config_hash": cfg_hash, "code_version": __version__,
            }
            if "ti" in targets:
                if with_exact:
                    ti_obj, _ = map_chain_to_ti(params)
                    ti_table = ti_stationary_moments(ti_obj, max(n + m for n, m in ti_fns))
                for (n, m) in ti_fns:
                    bb = _ti_bound(params, n, m)
                    dist = abs(chain_table[(n, m)] - ti_table[(n, m)]) if with_exact else None
                    if dist is not None and not dominates(dist, bb.total):
                        violations += 1
                    rows.append({**base, "target": "ti", "h": format_monomial(n, m),
                                 "exact_distance": dist, "bound_total": bb.total,
                                 "vacuous": bb.is_vacuous,
                                 "theory_slope": regime.ti_bound_slope(),
                                 **_breakdown_columns(bb)})
            if "beta" in targets:
                bp = beta_params_from_chain(params)
                exy2 = chain_table.exy2()
                for k in beta_fns:
                    bb = _beta_bound(params, k, exy2)
                    dist = (abs(weighted_average_moment(params, chain_table, k)
                                - beta_moment(bp, k)) if with_exact else None)
                    if dist is not None and not dominates(dist, bb.total):
                        violations += 1
                    rows.append({**base, "target": "beta", "h": format_monomial(k, 0),
                                 "exact_distance": dist, "bound_total": bb.total,
                                 "vacuous": bb.is_vacuous,
                                 "theory_slope": regime.beta_bound_slope(),
                                 **_breakdown_columns(bb)})
    rows.sort(key=lambda r: (r["kind"], r["eps"], r["target"], r["h"], r["N"]))
    _write_csv(args.csv, SCALING_COLUMNS, rows)

    slopes = []
    slope_failures = 0
    for (kind, eps, target, h), group in _group_rows(rows):
        ns = [r["N"] for r in group]
        totals = [r["bound_total"] for r in group]
        if len(ns) < 2:
            continue
        fitted = float(np.polyfit(np.log(ns), np.log(totals), 1)[0])
        theory = group[0]["theory_slope"]
        entry = {"kind": kind, "eps": eps, "target": target, "h": h,
                 "fitted_slope": fitted, "theory_slope": theory,
                 "n_points": len(ns)}
        if not math.isnan(slope_tol):
            entry["within_tol"] = abs(fitted - theory) <= slope_tol
            slope_failures += 0 if entry["within_tol"] else 1
        slopes.append(entry)
    summary = {
        "schema": "scaling-summary-v1",
        "config_hash": cfg_hash,
        "code_version": __version__,
        "slope_tol": None if math.isnan(slope_tol) else slope_tol,
        "slopes": slopes,
        "dominance_violations": violations,
        "records": len(rows),
    }
    _write_json(args.json, summary)
    print(f"scaling: {len(rows)} records, {len(slopes)} slope fits, "
          f"{slope_failures} outside tolerance, {violations} dominance violations",
          file=sys.stderr)
    print(f"elapsed {time.time() - started:.2f}s", file=sys.stderr)
    return 2 if (violations or slope_failures) else 0


def _group_rows(rows):
    grouped: Dict[tuple, list] = {}
    for r in rows:
        grouped.setdefault((r["kind"], r["eps"], r["target"], r["h"]), []).append(r)
    return sorted(grouped.items())


# ---------------------------------------------------------------------------
# crosscheck
# ---------------------------------------------------------------------------

def _random_ti(rng) -> TIParams:
    a1, a2, b1, b2, c1, c2 = rng.uniform(0.2, 2.0, 6)
    alpha, beta = rng.uniform(0.5, 2.0, 2)
    return TIParams(a1=a1, a2=a2, b1=b1, b2=b2, c1=c1, c2=c2, alpha=alpha, beta=beta)


def cmd_crosscheck(args) -> int:
    cfg, cfg_hash = _read_config(args.config)
    sec = "crosscheck"
    seed = int(cfg.get(sec, "seed", fallback="20250809"))
    reps = int(cfg.get(sec, "duality_reps", fallback="1000000"))
    if reps < 10_000:
        raise ConfigError("duality_reps must be >= 10000")
    n_params = int(cfg.get(sec, "duality_params", fallback="5"))
    quad_draws = int(cfg.get(sec, "quadrature_draws", fallback="50"))
    quad_tol = float(cfg.get(sec, "quadrature_tol", fallback="1e-8"))
    started = time.time()

    # duality Monte Carlo vs moment solver
    rng = np.random.default_rng([seed, 1])
    duality = []
    for idx in range(n_params):
        ti = _random_ti(rng)
        table = ti_stationary_moments(ti, 2)
        for (n, m) in ((1, 0), (0, 1), (1, 1), (2, 0)):
            est = simulate_dual_absorption(n, m, ti, reps, rng)
            z = (est.estimate - table[(n, m)]) / est.std_error
            duality.append({"param_set": idx, "h": format_monomial(n, m),
                            "mc": est.estimate, "solver": table[(n, m)],
                            "std_error": est.std_error, "z": z})
    max_duality_z = max(abs(d["z"]) for d in duality)

    # quadrature vs closed forms
    rng_q = np.random.default_rng([seed, 2])
    max_rel = 0.0
    for _ in range(quad_draws):
        rates = UrnRates(*rng_q.uniform(0.1, 3.0, 4))
        for kind in IntegralKind:
            closed = urn_integral_closed_form(kind, rates)
            quad = urn_integral_quadrature(kind, rates, tol=quad_tol / 10)
            max_rel = max(max_rel, abs(closed - quad) / abs(closed))

    # chain Monte Carlo vs exact stationary moments
    kind = _kind(cfg)
    params = ChainParams(
        N=int(cfg.get("model", "n", fallback="30")),
        M=int(cfg.get("model", "m", fallback="20")),
        c=int(cfg.get("model", "c", fallback="2")),
        p1=float(cfg.get("model", "p1", fallback="0.05")),
        p2=float(cfg.get("model", "p2", fallback="0.07")),
        q1=float(cfg.get("model", "q1", fallback="0.04")) if kind is ModelKind.TWO_ISLAND_WF else None,
        q2=float(cfg.get("model", "q2", fallback="0.06")) if kind is ModelKind.TWO_ISLAND_WF else None,
        kind=kind,
    )
    summary_run = run_chain(
        params,
        burn_in=int(cfg.get(sec, "chain_burn_in", fallback="20000")),
        n_samples=int(cfg.get(sec, "chain_samples", fallback="200000")),
        thin=int(cfg.get(sec, "chain_thin", fallback="5")),
        seed=RngSeed(seed, 3),
    )
    exact = exact_stationary_moments(params, 2)
    chain_checks = []
    for idx in sorted(summary_run.moments):
        if idx == (0, 0):
            continue
        se = summary_run.standard_errors[idx]
        z = (summary_run.moments[idx] - exact[idx]) / se
        chain_checks.append({"h": format_monomial(*idx), "mc": summary_run.moments[idx],
                             "exact": exact[idx], "std_error": se, "z": z})
    max_chain_z = max(abs(d["z"]) for d in chain_checks)

    # large-migration probe: island marginals vs the matched beta moments
    probe = []
    gamma = float(cfg.get(sec, "probe_gamma", fallback="2.0"))
    pa1, pa2, pb1, pb2 = (float(v) for v in cfg.get(
        sec, "probe_rates", fallback="1.0 2.0 0.5 1.5").split())
    target = BetaParams(a1=pa1 + pb1, a2=pa2 + pb2)
    for c in (10.0, 100.0, 1_000.0, 10_000.0, 100_000.0, 1_000_000.0):
        ti = TIParams(a1=pa1, a2=pa2, b1=gamma * pb1, b2=gamma * pb2,
                      c1=c, c2=gamma * c, alpha=2.0, beta=2.0 * gamma)
        table = ti_stationary_moments(ti, 4)
        gap = max(abs(table[(k, 0)] - beta_moment(target, k)) for k in range(1, 5))
        probe.append({"c": c, "max_marginal_gap_deg4": gap})

    report = {
        "schema": "crosscheck-v1",
        "config_hash": cfg_hash,
        "code_version": __version__,
        "seed": seed,
        "duality": {"reps": reps, "records": duality, "max_abs_z": max_duality_z},
        "quadrature": {"draws": quad_draws, "tol": quad_tol, "max_rel_error": max_rel},
        "chain": {"records": chain_checks, "max_abs_z": max_chain_z,
                  "n_samples": summary_run.n_samples},
        "beta_limit_probe": {"gamma": gamma, "records": probe,
                             "note": "reported only, no pass criterion"},
    }
    _write_json(args.json, report)
    ok = max_duality_z <= 3.0 and max_chain_z <= 3.0 and max_rel <= quad_tol
    print(f"crosscheck: duality max|z|={max_duality_z:.2f}, "
          f"chain max|z|={max_chain_z:.2f}, quadrature max rel={max_rel:.2e} "
          f"-> {'ok' if ok else 'FAIL'}", file=sys.stderr)
    print(f"elapsed {time.time() - started:.2f}s", file=sys.stderr)
    return 0 if ok else 2


# ---------------------------------------------------------------------------
# factors / moments
# ---------------------------------------------------------------------------

def _chain_params_from_args(args) -> Optional[ChainParams]:
    if args.N is None:
        return None
    kind = ModelKind.SEED_BANK if args.kind == "seed_bank" else ModelKind.TWO_ISLAND_WF
    return validate_params(ChainParams(
        N=args.N, M=args.M, c=args.c, p1=args.p1, p2=args.p2,
        q1=args.q1, q2=args.q2, kind=kind,
    ))


def cmd_factors(args) -> int:
    params = _chain_params_from_args(args)
    if params is not None:
        ti, lam = map_chain_to_ti(params)
        print(f"# mapped diffusion parameters (lambda={lam!r}):", file=sys.stderr)
    else:
        if None in (args.a1, args.a2, args.b1, args.b2, args.c1, args.c2):
            print("factors: give either chain parameters (--N ...) or "
                  "diffusion rates (--a1 ... --c2)", file=sys.stderr)
            return 1
        ti = TIParams(a1=args.a1, a2=args.a2, b1=args.b1, b2=args.b2,
                      c1=args.c1, c2=args.c2, alpha=args.alpha, beta=args.beta)
    factors = stein_factors(args.n, args.m, ti)
    payload = {"n": args.n, "m": args.m,
               "rates": {"a": ti.a, "b": ti.b, "c1": ti.c1, "c2": ti.c2},
               "factors": factors.as_dict()}
    print(json.dumps(payload, indent=2, sort_keys=True))
    return 0


def cmd_moments(args) -> int:
    params = _chain_params_from_args(args)
    if params is None:
        print("moments: chain parameters are required (--N --M --c --p1 --p2 ...)",
              file=sys.stderr)
        return 1
    table = exact_stationary_moments(params, args.degree)
    ti, _ = map_chain_to_ti(params)
    ti_table = ti_stationary_moments(ti, args.degree)
    bp = beta_params_from_chain(params)
    payload = {
        "params": {"N": params.N, "M": params.M, "c": params.c,
                   "p1": params.p1, "p2": params.p2,
                   "q1": params.q1, "q2": params.q2, "kind": params.kind.value},
        "chain_exact": {format_monomial(*idx): table[idx]
                        for idx in moment_basis(args.degree) if idx != (0, 0)},
        "ti": {format_monomial(*idx): ti_table[idx]
               for idx in moment_basis(args.degree) if idx != (0, 0)},
        "beta": {"a1": bp.a1, "a2": bp.a2,
                 "moments": {f"x{k}" if k > 1 else "x": beta_moment(bp, k)
                             for k in range(1, args.degree + 1)}},
        "exy2": table.exy2(),
    }
    print(json.dumps(payload, indent=2, sort_keys=True))
    return 0


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def _add_chain_flags(sub):
    sub.add_argument("--kind", choices=["two_island_wf", "seed_bank"],
                     default="two_island_wf")
    sub.add_argument("--N", type=int)
    sub.add_argument("--M", type=int)
    sub.add_argument("--c", type=int)
    sub.add_argument("--p1", type=float)
    sub.add_argument("--p2", type=float)
    sub.add_argument("--q1", type=float)
    sub.add_argument("--q2", type=float)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twoisland",
        description="stationary-moment experiments for two-island WF and seed-bank chains",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_verify = sub.add_parser("verify", help="exact distance vs bound on a grid")
    p_verify.add_argument("--config", required=True)
    p_verify.add_argument("--csv", default="verify.csv")
    p_verify.add_argument("--json", default="verify.json")
    p_verify.set_defaults(func=cmd_verify)

    p_scaling = sub.add_parser("scaling", help="bounds along an asymptotic family")
    p_scaling.add_argument("--config", required=True)
    p_scaling.add_argument("--csv", default="scaling.csv")
    p_scaling.add_argument("--json", default="scaling.json")
    p_scaling.set_defaults(func=cmd_scaling)

    p_cross = sub.add_parser("crosscheck", help="Monte Carlo and quadrature consistency")
    p_cross.add_argument("--config", required=True)
    p_cross.add_argument("--json", default="crosscheck.json")
    p_cross.set_defaults(func=cmd_crosscheck)

    p_factors = sub.add_parser("factors", help="print derivative-bound factors")
    p_factors.add_argument("--n", type=int, required=True)
    p_factors.add_argument("--m", type=int, required=True)
    for name in ("a1", "a2", "b1", "b2", "c1", "c2"):
        p_factors.add_argument(f"--{name}", type=float)
    p_factors.add_argument("--alpha", type=float, default=2.0)
    p_factors.add_argument("--beta", type=float, default=2.0)
    _add_chain_flags(p_factors)
    p_factors.set_defaults(func=cmd_factors)

    p_moments = sub.add_parser("moments", help="print exact chain/diffusion/beta moments")
    p_moments.add_argument("--degree", type=int, default=2)
    _add_chain_flags(p_moments)
    p_moments.set_defaults(func=cmd_moments)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, TwoIslandError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
