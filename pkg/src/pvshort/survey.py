"""Batch experiments over moduli, characters, and parameter grids.

Work is sharded by modulus.  Each shard is computed independently (in a
process pool when ``worker_count > 1``), stored under
``<output_dir>/.shards/<kind>-<config hash>/`` and merged in increasing q,
so the final files depend only on the configuration and seed.  A rerun
with the same output directory reuses finished shards.
"""

import configparser
import csv
import hashlib
import json
import logging
import os
from io import StringIO
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from math import floor, fsum, log, pi, sqrt
from multiprocessing import get_context
from pathlib import Path
from typing import Tuple, Union

import numpy as np

from . import triglemma
from .characters import enumerate_primitive, parity
from .charsums import prefix_sums, reconstruct_via_inversion
from .decomposition import DecompositionReport, decompose, theorem_constant
from .errors import EmptyRecordsError, OracleFailure, RangeTooShortError
from .numerics import first_argmax
from .settings import DEFAULT_EPSILON, qpow

logger = logging.getLogger(__name__)

ENV_PREFIX = "PVSHORT_"

__all__ = [
    "SurveyConfig",
    "SurveyRecord",
    "load_config",
    "select_moduli",
    "sample_characters",
    "run_theorem_survey",
    "run_lemma_survey",
    "run_decomposition_survey",
    "emit_plot_data",
    "map_ordered",
]


@dataclass(frozen=True)
class SurveyConfig:
    q_range: Tuple[int, int] = (500, 3000)
    q_filter: str = "primes_only"  # or "all"
    characters_per_modulus: Union[int, str] = 50  # or "all"
    gamma_grid: Tuple[float, ...] = (0.0, 0.1, 0.2, 0.3)
    epsilon: float = DEFAULT_EPSILON
    alpha_grid_size: int = 200
    seed: int = 0
    output_dir: str = "survey_out"
    worker_count: int = field(default_factory=lambda: os.cpu_count() or 1)

    def __post_init__(self):
        lo, hi = self.q_range
        if not 1 <= lo <= hi:
            raise ValueError(f"bad q_range {self.q_range}")
        if self.q_filter not in ("all", "primes_only"):
            raise ValueError(f"q_filter must be 'all' or 'primes_only', got {self.q_filter!r}")
        k = self.characters_per_modulus
        if not (k == "all" or (isinstance(k, int) and k > 0)):
            raise ValueError(f"characters_per_modulus must be positive or 'all', got {k!r}")
        g = list(self.gamma_grid)
        if g != sorted(g) or any(not 0 <= x <= 1 / 3 for x in g):
            raise ValueError(f"gamma_grid must be sorted within [0, 1/3], got {g}")
        if self.epsilon <= 0 or self.alpha_grid_size < 1 or self.worker_count < 1:
            raise ValueError("epsilon, alpha_grid_size and worker_count must be positive")
        if not -(2**63) <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 bits")

    def fingerprint(self):
        """Hash of every field that affects results (not paths or workers)."""
        d = asdict(self)
        d.pop("output_dir")
        d.pop("worker_count")
        return hashlib.sha256(json.dumps(d, sort_keys=True).encode()).hexdigest()[:16]


def _parse_value(name, raw):
    raw = raw.strip()
    if name == "q_range":
        lo, hi = (int(x) for x in raw.replace(":", ",").split(","))
        return (lo, hi)
    if name == "gamma_grid":
        return tuple(float(x) for x in raw.split(",") if x.strip())
    if name == "characters_per_modulus":
        return "all" if raw == "all" else int(raw)
    if name in ("alpha_grid_size", "seed", "worker_count"):
        return int(raw, 0)
    if name == "epsilon":
        return float(raw)
    if name == "q_filter":
        return {"primesonly": "primes_only"}.get(raw.lower(), raw)
    return raw


def load_config(path=None, env=None, **overrides):
    """Build a :class:`SurveyConfig` from a flat ``key = value`` file.

    Precedence: keyword overrides, then ``PVSHORT_<KEY>`` environment
    variables, then the file, then defaults.  Unknown keys are an error.
    """
    env = os.environ if env is None else env
    names = {f.name for f in fields(SurveyConfig)}
    values = {}
    if path is not None:
        cp = configparser.ConfigParser(inline_comment_prefixes=("#",))
        cp.read_string("[survey]\n" + Path(path).read_text())
        for key, raw in cp["survey"].items():
            if key not in names:
                raise ValueError(f"unknown config key {key!r}")
            values[key] = _parse_value(key, raw)
    for name in names:
        raw = env.get(ENV_PREFIX + name.upper())
        if raw is not None:
            values[name] = _parse_value(name, raw)
    values.update({k: v for k, v in overrides.items() if v is not None})
    return SurveyConfig(**values)


def _is_prime(n):
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def select_moduli(config):
    lo, hi = config.q_range
    qs = range(max(lo, 3), hi + 1)
    if config.q_filter == "primes_only":
        return [q for q in qs if _is_prime(q)]
    return list(qs)


def sample_characters(q, config):
    """Primitive characters mod q used by the survey, in label order.

    Subsets are drawn with a Philox generator keyed by (seed, q), so each
    modulus gets the same sample whatever else is in the run.
    """
    labels = enumerate_primitive(q)
    k = config.characters_per_modulus
    if k == "all" or k >= len(labels):
        return labels
    rng = np.random.Generator(np.random.Philox(key=[config.seed % 2**64, q]))
    idx = np.sort(rng.choice(len(labels), size=k, replace=False))
    return [labels[i] for i in idx]


@dataclass(frozen=True)
class SurveyRecord:
    q: int
    label: str
    parity: str
    gamma: float
    max_ratio: float
    argmax_n: int
    bound_value: float

    HEADER = ("q", "label", "parity", "gamma", "max_ratio", "argmax_n", "bound_value")

    def row(self):
        return [
            str(self.q), self.label, self.parity, repr(self.gamma),
            repr(self.max_ratio), str(self.argmax_n), repr(self.bound_value),
        ]

    @classmethod
    def from_row(cls, row):
        q, label, par, gamma, ratio, n, bound = row
        return cls(int(q), label, par, float(gamma), float(ratio), int(n), float(bound))


# ---------------------------------------------------------------------------
# sharded execution


def map_ordered(fn, items, workers):
    """Yield ``fn(x)`` for each item in order, optionally from a spawn-based pool."""
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        yield from map(fn, items)
        return
    ctx = get_context("spawn")
    with ProcessPoolExecutor(max_workers=workers, mp_context=ctx) as ex:
        yield from ex.map(fn, items)


def _write_atomic(path, text):
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, newline="")
    os.replace(tmp, path)


def _csv_text(header, rows):
    buf = StringIO()
    w = csv.writer(buf)
    if header is not None:
        w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


class _ShardTask:
    """Picklable ``q -> shard`` callable bound to a config."""

    def __init__(self, fn, config):
        self.fn = fn
        self.config = config

    def __call__(self, q):
        return self.fn(q, self.config)


def _run_sharded(kind, fn, config):
    out = Path(config.output_dir)
    shard_dir = out / ".shards" / f"{kind}-{config.fingerprint()}"
    shard_dir.mkdir(parents=True, exist_ok=True)
    qs = select_moduli(config)
    todo = [q for q in qs if not (shard_dir / f"{q}.json").exists()]
    task = _ShardTask(fn, config)
    # results come back in q order; the parent is the only writer
    for q, shard in zip(todo, map_ordered(task, todo, config.worker_count)):
        _write_atomic(shard_dir / f"{q}.json", json.dumps(shard))
    return [(q, json.loads((shard_dir / f"{q}.json").read_text())) for q in qs]


# ---------------------------------------------------------------------------
# theorem survey


def _theorem_shard(q, config):
    labels = sample_characters(q, config)
    if not labels:
        logger.info("q=%d has no primitive characters; skipped", q)
        return []
    norm = sqrt(q) * log(q)
    rows = []
    for lab in labels:
        par = parity(lab)
        mags = np.abs(prefix_sums(lab).partials)
        for gamma in config.gamma_grid:
            top = min(q - 1, floor(qpow(q, 1 - gamma)))
            window = mags[1:top + 1]
            i = first_argmax(window) + 1
            bound = theorem_constant(par) * (1 / 3 - gamma + config.epsilon)
            rows.append(SurveyRecord(q, str(lab), par, gamma, float(window.max()) / norm, i, bound).row())
    return rows


def run_theorem_survey(config):
    """Max of S(N, chi)/(sqrt(q) log q) over N <= q^(1-gamma) per (q, chi, gamma).

    Writes ``theorem_survey.csv`` and returns ``(records, path)``.  Rows are
    sorted by (q, exponent tuple, gamma).
    """
    shards = _run_sharded("theorem", _theorem_shard, config)
    rows = [r for _, shard in shards for r in shard]
    path = Path(config.output_dir) / "theorem_survey.csv"
    _write_atomic(path, _csv_text(SurveyRecord.HEADER, rows))
    return [SurveyRecord.from_row(r) for r in rows], path


def read_survey_csv(path):
    with open(path, newline="") as fh:
        r = csv.reader(fh)
        header = next(r)
        if tuple(header) != SurveyRecord.HEADER:
            raise ValueError(f"unexpected header {header}")
        return [SurveyRecord.from_row(row) for row in r]


# ---------------------------------------------------------------------------
# lemma survey

LEMMA_HEADER = ("q", "gamma", "epsilon", "alpha", "lhs", "main_term", "residual", "holds")
LEMMA_FILES = ("lemma_eq1.csv", "lemma_eq2.csv", "lemma_eq3.csv", "lemma_eq4.csv")


def alpha_grid(size):
    return [2 * pi * j / size for j in range(size)]


def _flag(ok):
    return "true" if ok else "false"


def _lemma_shard(q, config):
    eps = config.epsilon
    out = {name: [] for name in LEMMA_FILES}
    for gamma in config.gamma_grid:
        ok = triglemma.precondition_holds(q, gamma, eps)
        # eq. (4) is unconditional in (m, p), so it only needs some odd p >= 1
        try:
            sp = triglemma.split_points(q, gamma, eps, strict=False)
        except RangeTooShortError:
            sp = None
        for alpha in alpha_grid(config.alpha_grid_size):
            key = [str(q), repr(gamma), repr(eps), repr(alpha)]
            failed = key + ["", "", "", "precondition_failed"]
            if sp is None:
                out["lemma_eq4.csv"].append(failed)
            else:
                r4 = triglemma.lower_bound_eq4(sp.m_bar, sp.p_bar, alpha, q)
                out["lemma_eq4.csv"].append(key + [
                    repr(r4.value), repr(r4.bound), repr(r4.value - r4.bound), _flag(r4.holds)])
            if not ok:
                for name in LEMMA_FILES[:3]:
                    out[name].append(failed)
                continue
            r1 = triglemma.lemma_eq1(q, gamma, eps, alpha)
            r2 = triglemma.lemma_eq2(q, gamma, eps, alpha)
            r3 = triglemma.sigma_lower_bound_eq3(q, gamma, eps, alpha)
            out["lemma_eq1.csv"].append(key + [
                repr(r1.lhs), repr(r1.main_term), repr(r1.residual),
                _flag(r1.residual <= triglemma.EQ1_RESIDUAL_CEILING)])
            out["lemma_eq2.csv"].append(key + [
                repr(r2.lhs), repr(r2.main_term), repr(r2.residual),
                _flag(r2.residual <= triglemma.EQ2_RESIDUAL_CEILING)])
            out["lemma_eq3.csv"].append(key + [
                repr(r3.value), repr(r3.chain_bound), repr(r3.value - r3.chain_bound),
                _flag(r3.holds)])
    return out


def run_lemma_survey(config):
    """Eq. (1)-(4) sweeps over (q, gamma, alpha); returns the four CSV paths.

    For eq. (3) ``main_term`` carries the assembled chain floor and for
    eq. (4) the bound -5 - 1/(2q) at the split points of the cell.  Cells
    where the range precondition fails carry ``precondition_failed`` in
    eq. (1)-(3); eq. (4) is still evaluated there whenever an odd p >= 1
    fits, since it holds for every m and p.
    """
    shards = _run_sharded("lemma", _lemma_shard, config)
    paths = []
    for name in LEMMA_FILES:
        rows = [r for _, shard in shards for r in shard[name]]
        path = Path(config.output_dir) / name
        _write_atomic(path, _csv_text(LEMMA_HEADER, rows))
        paths.append(path)
    return paths


# ---------------------------------------------------------------------------
# decomposition survey


def decomposition_points(q, gamma):
    return [min(q - 1, floor(qpow(q, 1 - gamma))), 1, q // 2]


def _decomposition_shard(q, config):
    labels = sample_characters(q, config)
    if not labels:
        logger.info("q=%d has no primitive characters; skipped", q)
        return []
    reports = []
    for lab in labels:
        partials = prefix_sums(lab).partials
        for gamma in config.gamma_grid:
            for N in decomposition_points(q, gamma):
                rep = decompose(lab, N, gamma, config.epsilon, enforce_hypothesis=False)
                if not rep.partition_ok():
                    raise OracleFailure(
                        f"partition failed at q={q}, label={lab}, N={N}: "
                        f"residual {rep.partition_residual:.3g}"
                    )
                err = abs(reconstruct_via_inversion(lab, N) - partials[N])
                if err > 1e-8 * sqrt(q):
                    raise OracleFailure(
                        f"inversion identity failed at q={q}, label={lab}, N={N}: error {err:.3g}"
                    )
                reports.append(rep.to_dict())
    return reports


def run_decomposition_survey(config):
    """DecompositionReports at N = floor(q^(1-gamma)) (capped at q-1), 1 and q//2.

    Writes ``decomposition_reports.json`` and ``decomposition_summary.csv``
    and returns ``(reports, json_path, csv_path)``.  Reports for N beyond
    q^(1-gamma) are kept and marked ``hypothesis_ok = false``.
    """
    shards = _run_sharded("decomposition", _decomposition_shard, config)
    dicts = [d for _, shard in shards for d in shard]
    reports = [DecompositionReport.from_dict(d) for d in dicts]
    out = Path(config.output_dir)
    jpath = out / "decomposition_reports.json"
    _write_atomic(jpath, json.dumps(dicts, indent=1) + "\n")
    cpath = out / "decomposition_summary.csv"
    _write_atomic(cpath, _csv_text(DecompositionReport.CSV_HEADER, [r.csv_row() for r in reports]))
    return reports, jpath, cpath


# ---------------------------------------------------------------------------
# plot data

PLOT_KINDS = ("ratio_vs_gamma", "argmax_location")


def emit_plot_data(records, kind, out_dir):
    """Tidy CSV for plotting; returns the path written.

    ``ratio_vs_gamma``: one row per (gamma, parity) with mean and max of
    max_ratio and the theorem bound.  ``argmax_location``: argmax_n / q
    per record at the smallest gamma in the set.
    """
    records = list(records)
    if not records:
        raise EmptyRecordsError("no survey records to summarise")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    if kind == "ratio_vs_gamma":
        groups = {}
        for r in records:
            groups.setdefault((r.gamma, r.parity), []).append(r)
        rows = []
        for (gamma, par), rs in sorted(groups.items()):
            ratios = [r.max_ratio for r in rs]
            rows.append([
                repr(gamma), par, repr(fsum(ratios) / len(ratios)), repr(max(ratios)),
                repr(rs[0].bound_value),
            ])
        header = ("gamma", "parity", "mean_ratio", "max_ratio", "bound")
    elif kind == "argmax_location":
        g0 = min(r.gamma for r in records)
        rows = [[str(r.q), repr(r.argmax_n / r.q)] for r in records if r.gamma == g0]
        header = ("q", "argmaxN_over_q")
    else:
        raise ValueError(f"unknown plot kind {kind!r}; expected one of {PLOT_KINDS}")
    path = out / f"{kind}.csv"
    _write_atomic(path, _csv_text(header, rows))
    return path
