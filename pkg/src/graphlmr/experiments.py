"""Seeded, config-driven reconstruction experiments with CSV persistence.

A run fixes a graph and a partition, then for every trial draws a random
bandlimited signal and a noise vector, measures with each weight scheme, and
reconstructs; it logs the relative error per iteration against the noise-free
truth.  Everything is derived from one integer seed through named
SeedSequence streams, so adding trials or schemes never disturbs the draws
of the others, and rerunning a config reproduces its CSV byte for byte.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from .generators import grid_graph, path_graph, random_geometric_graph
from .graph import Graph, build_laplacian, load_edge_list
from .localsets import Partition, greedy_partition, partition_metrics, suggest_nmax
from .noise import sample_noise
from .reconstruction import ReconstructionConfig, ilmr
from .sampling import WEIGHT_SCHEMES, NoiseModel, make_weights, measure
from .spectral import SpectralBasis, eigendecompose, random_bandlimited

__all__ = [
    "ConfigError",
    "GraphConfig",
    "NoiseConfig",
    "ExperimentConfig",
    "ExperimentReport",
    "parse_config",
    "load_config",
    "run_experiment",
    "relative_error",
    "write_report_csv",
    "format_report_csv",
    "write_report_meta",
    "bootstrap_gap_quantile",
]

# SeedSequence stream tags; distinct per purpose so draws never alias.
_STREAM_GRAPH = 101
_STREAM_GROUPS = 102
_STREAM_SIGNAL = 103
_STREAM_NOISE = 104
_STREAM_WEIGHTS = 105


class ConfigError(ValueError):
    """Unusable experiment configuration."""


@dataclass(frozen=True)
class GraphConfig:
    """Where the graph comes from: a generator or an edge-list file."""

    kind: str  # "path" | "grid" | "rgg" | "edgelist"
    n: int | None = None
    rows: int | None = None
    cols: int | None = None
    radius: float | None = None
    path: str | None = None
    index_base: int = 0
    header: bool = False


@dataclass(frozen=True)
class NoiseConfig:
    """Per-vertex Gaussian noise: none, one sigma for all, or grouped sigmas.

    Grouped noise shuffles the vertices (seeded) and splits them into
    contiguous chunks sized by ``fractions`` (equal by default), assigning
    each chunk one sigma.
    """

    kind: str  # "none" | "iid" | "grouped"
    sigma: tuple[float, ...] = ()
    fractions: tuple[float, ...] | None = None


@dataclass(frozen=True)
class ExperimentConfig:
    name: str
    graph: GraphConfig
    schemes: tuple[str, ...]
    noise: NoiseConfig
    trials: int
    max_iterations: int
    seed: int
    omega: float | None = None
    band_dim: int | None = None
    n_max: int | None = None
    offband_energy: float = 0.0


@dataclass(frozen=True, eq=False)
class ExperimentReport:
    """Aggregated curves plus the resolved run parameters.

    ``mean_rel_error[scheme][k]`` averages the relative error after k
    iterations over all trials (k = 0 is the initial estimate); all curves
    share length ``max_iterations + 1``.  ``steady_errors[scheme]`` keeps the
    per-trial final errors for significance testing.
    """

    config: ExperimentConfig
    omega: float
    n_max: int
    n_sets: int
    c_max: float
    gamma: float
    gamma_warning: bool
    schemes: tuple[str, ...]
    mean_rel_error: dict[str, np.ndarray]
    std_rel_error: dict[str, np.ndarray]
    steady_state_mean: dict[str, float]
    steady_state_std: dict[str, float]
    steady_errors: dict[str, np.ndarray]


def relative_error(estimate: np.ndarray, truth: np.ndarray) -> float:
    """||estimate - truth|| / ||truth||; rejects zero truth."""
    est = np.asarray(estimate, dtype=np.float64)
    tru = np.asarray(truth, dtype=np.float64)
    if est.shape != tru.shape:
        raise ValueError(f"shape mismatch: {est.shape} vs {tru.shape}")
    denom = np.linalg.norm(tru)
    if denom == 0.0:
        raise ValueError("truth has zero norm")
    return float(np.linalg.norm(est - tru) / denom)


# ---------------------------------------------------------------------------
# Config parsing: line-oriented "key = value", '#' starts a comment.

_GRAPH_KINDS = ("path", "grid", "rgg", "edgelist")
_NOISE_KINDS = ("none", "iid", "grouped")
_KNOWN_KEYS = {
    "name",
    "graph",
    "graph.n",
    "graph.rows",
    "graph.cols",
    "graph.radius",
    "graph.path",
    "graph.index_base",
    "graph.header",
    "omega",
    "band_dim",
    "n_max",
    "schemes",
    "noise",
    "noise.sigma",
    "noise.fractions",
    "offband_energy",
    "trials",
    "max_iterations",
    "seed",
}


def _parse_scalar(raw: dict[str, str], key: str, conv, default=None):
    if key not in raw:
        return default
    try:
        return conv(raw[key])
    except ValueError:
        raise ConfigError(f"bad value for {key}: {raw[key]!r}") from None


def _parse_bool(text: str) -> bool:
    low = text.lower()
    if low in ("true", "yes", "1"):
        return True
    if low in ("false", "no", "0"):
        return False
    raise ValueError(text)


def _parse_list(text: str) -> list[str]:
    return text.replace(",", " ").split()


def parse_config(text: str) -> ExperimentConfig:
    """Parse and validate a key = value config; raises ConfigError."""
    raw: dict[str, str] = {}
    for line_no, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError(f"line {line_no}: expected 'key = value'")
        key, value = (part.strip() for part in body.split("=", 1))
        if key not in _KNOWN_KEYS:
            raise ConfigError(f"line {line_no}: unknown key {key!r}")
        if key in raw:
            raise ConfigError(f"line {line_no}: duplicate key {key!r}")
        if not value:
            raise ConfigError(f"line {line_no}: empty value for {key!r}")
        raw[key] = value

    kind = raw.get("graph")
    if kind is None:
        raise ConfigError("missing required key 'graph'")
    if kind not in _GRAPH_KINDS:
        raise ConfigError(
            f"graph must be one of {', '.join(_GRAPH_KINDS)}; got {kind!r}"
        )
    graph = GraphConfig(
        kind=kind,
        n=_parse_scalar(raw, "graph.n", int),
        rows=_parse_scalar(raw, "graph.rows", int),
        cols=_parse_scalar(raw, "graph.cols", int),
        radius=_parse_scalar(raw, "graph.radius", float),
        path=raw.get("graph.path"),
        index_base=_parse_scalar(raw, "graph.index_base", int, 0),
        header=_parse_scalar(raw, "graph.header", _parse_bool, False),
    )
    _validate_graph(graph)

    if ("omega" in raw) == ("band_dim" in raw):
        raise ConfigError("exactly one of omega / band_dim must be set")
    omega = _parse_scalar(raw, "omega", float)
    band_dim = _parse_scalar(raw, "band_dim", int)
    if omega is not None and omega <= 0:
        raise ConfigError("omega must be positive")
    if band_dim is not None and band_dim < 1:
        raise ConfigError("band_dim must be at least 1")

    if "schemes" not in raw:
        raise ConfigError("missing required key 'schemes'")
    schemes = tuple(_parse_list(raw["schemes"]))
    if not schemes:
        raise ConfigError("schemes must be nonempty")
    for s in schemes:
        if s not in WEIGHT_SCHEMES:
            raise ConfigError(
                f"unknown scheme {s!r}; valid: {', '.join(WEIGHT_SCHEMES)}"
            )
    if len(set(schemes)) != len(schemes):
        raise ConfigError("schemes must not repeat")

    noise_kind = raw.get("noise", "none")
    if noise_kind not in _NOISE_KINDS:
        raise ConfigError(
            f"noise must be one of {', '.join(_NOISE_KINDS)}; got {noise_kind!r}"
        )
    sigma: tuple[float, ...] = ()
    fractions: tuple[float, ...] | None = None
    if noise_kind == "none":
        if "noise.sigma" in raw or "noise.fractions" in raw:
            raise ConfigError("noise = none takes no sigma / fractions")
    else:
        if "noise.sigma" not in raw:
            raise ConfigError(f"noise = {noise_kind} requires noise.sigma")
        try:
            sigma = tuple(float(s) for s in _parse_list(raw["noise.sigma"]))
        except ValueError:
            raise ConfigError(
                f"bad noise.sigma: {raw['noise.sigma']!r}"
            ) from None
        if any(s < 0 for s in sigma):
            raise ConfigError("noise.sigma entries must be nonnegative")
        if noise_kind == "iid":
            if len(sigma) != 1:
                raise ConfigError("noise = iid takes exactly one sigma")
            if "noise.fractions" in raw:
                raise ConfigError("noise = iid takes no fractions")
        else:
            if len(sigma) < 1:
                raise ConfigError("noise = grouped needs at least one sigma")
            if "noise.fractions" in raw:
                try:
                    fractions = tuple(
                        float(s) for s in _parse_list(raw["noise.fractions"])
                    )
                except ValueError:
                    raise ConfigError(
                        f"bad noise.fractions: {raw['noise.fractions']!r}"
                    ) from None
                if len(fractions) != len(sigma):
                    raise ConfigError(
                        "noise.fractions must match noise.sigma in length"
                    )
                if any(f < 0 for f in fractions) or not math.isclose(
                    sum(fractions), 1.0, rel_tol=0, abs_tol=1e-6
                ):
                    raise ConfigError("noise.fractions must be >= 0 and sum to 1")
    noise = NoiseConfig(kind=noise_kind, sigma=sigma, fractions=fractions)

    needs_noise = {"optimal", "optimal_dirac"} & set(schemes)
    if needs_noise:
        if noise_kind == "none" or any(s <= 0 for s in sigma):
            raise ConfigError(
                f"schemes {sorted(needs_noise)} require noise with sigma > 0"
            )

    offband = _parse_scalar(raw, "offband_energy", float, 0.0)
    if not 0.0 <= offband < 1.0:
        raise ConfigError("offband_energy must lie in [0, 1)")
    trials = _parse_scalar(raw, "trials", int, 100)
    if trials < 1:
        raise ConfigError("trials must be at least 1")
    max_iterations = _parse_scalar(raw, "max_iterations", int, 100)
    if max_iterations < 1:
        raise ConfigError("max_iterations must be at least 1")
    n_max = _parse_scalar(raw, "n_max", int)
    if n_max is not None and n_max < 1:
        raise ConfigError("n_max must be at least 1")

    return ExperimentConfig(
        name=raw.get("name", "experiment"),
        graph=graph,
        schemes=schemes,
        noise=noise,
        trials=trials,
        max_iterations=max_iterations,
        seed=_parse_scalar(raw, "seed", int, 0),
        omega=omega,
        band_dim=band_dim,
        n_max=n_max,
        offband_energy=offband,
    )


def _validate_graph(graph: GraphConfig) -> None:
    need = {
        "path": ("n",),
        "grid": ("rows", "cols"),
        "rgg": ("n", "radius"),
        "edgelist": ("path",),
    }[graph.kind]
    allowed = set(need) | (
        {"index_base", "header"} if graph.kind == "edgelist" else set()
    )
    for f_name in need:
        if getattr(graph, f_name) is None:
            raise ConfigError(f"graph = {graph.kind} requires graph.{f_name}")
    for f_name in ("n", "rows", "cols", "radius", "path"):
        if getattr(graph, f_name) is not None and f_name not in allowed:
            raise ConfigError(
                f"graph.{f_name} does not apply to graph = {graph.kind}"
            )
    if graph.index_base not in (0, 1):
        raise ConfigError("graph.index_base must be 0 or 1")


def load_config(path: str | Path) -> ExperimentConfig:
    return parse_config(Path(path).read_text(encoding="utf-8"))


# ---------------------------------------------------------------------------
# Running


def _rng(*key: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(list(key)))


def _build_graph(cfg: ExperimentConfig) -> Graph:
    g = cfg.graph
    if g.kind == "path":
        return path_graph(g.n)
    if g.kind == "grid":
        return grid_graph(g.rows, g.cols)
    if g.kind == "rgg":
        return random_geometric_graph(
            g.n, g.radius, _rng(cfg.seed, _STREAM_GRAPH)
        )
    return load_edge_list(g.path, index_base=g.index_base, header=g.header)


def _build_noise_model(cfg: ExperimentConfig, n_vertices: int) -> NoiseModel:
    nc = cfg.noise
    if nc.kind == "none":
        return NoiseModel(sigma=np.zeros(n_vertices))
    if nc.kind == "iid":
        return NoiseModel.iid(n_vertices, nc.sigma[0])
    fractions = nc.fractions or tuple(
        1.0 / len(nc.sigma) for _ in nc.sigma
    )
    perm = _rng(cfg.seed, _STREAM_GROUPS).permutation(n_vertices)
    cuts = [round(n_vertices * c) for c in np.cumsum(fractions[:-1])]
    sigma = np.empty(n_vertices)
    for sig, chunk in zip(nc.sigma, np.split(perm, cuts)):
        sigma[chunk] = sig
    return NoiseModel(sigma=sigma)


def _resolve_omega(cfg: ExperimentConfig, basis: SpectralBasis) -> float:
    if cfg.omega is not None:
        return cfg.omega
    k = cfg.band_dim
    vals = basis.eigenvalues
    if k >= vals.size:
        return float(vals[-1])
    # midpoint between the last in-band and first out-of-band eigenvalue,
    # so the inclusive cutoff cannot sit on either
    return float(0.5 * (vals[k - 1] + vals[k]))


def run_experiment(cfg: ExperimentConfig) -> ExperimentReport:
    """Run all trials of a config; deterministic in cfg.seed."""
    graph = _build_graph(cfg)
    basis = eigendecompose(build_laplacian(graph))
    omega = _resolve_omega(cfg, basis)
    n_max = cfg.n_max if cfg.n_max is not None else suggest_nmax(omega)
    partition = greedy_partition(graph, n_max)
    metrics = partition_metrics(graph, partition)
    gamma = metrics.c_max * math.sqrt(omega)
    model = _build_noise_model(cfg, graph.n_vertices)
    recon_cfg_base = dict(
        omega=omega, max_iterations=cfg.max_iterations, stop_tolerance=0.0
    )

    n_points = cfg.max_iterations + 1
    curves = {s: np.empty((cfg.trials, n_points)) for s in cfg.schemes}
    offband = cfg.offband_energy if cfg.offband_energy > 0 else None
    for t in range(cfg.trials):
        f = random_bandlimited(
            basis, omega, _rng(cfg.seed, _STREAM_SIGNAL, t),
            norm=1.0, offband_energy=offband,
        )
        observed = f + sample_noise(model, _rng(cfg.seed, _STREAM_NOISE, t))
        truth_norm = np.linalg.norm(f)
        for j, scheme in enumerate(cfg.schemes):
            weights = make_weights(
                scheme,
                partition,
                noise=model if scheme in ("optimal", "optimal_dirac") else None,
                rng=_rng(cfg.seed, _STREAM_WEIGHTS, t, j),
            )
            run = ilmr(
                measure(observed, weights),
                partition,
                weights,
                basis,
                ReconstructionConfig(**recon_cfg_base, track_truth=f),
                c_max=metrics.c_max,
            )
            curves[scheme][t] = run.error_trace / truth_norm

    return ExperimentReport(
        config=cfg,
        omega=omega,
        n_max=n_max,
        n_sets=partition.n_sets,
        c_max=metrics.c_max,
        gamma=gamma,
        gamma_warning=gamma >= 1.0,
        schemes=cfg.schemes,
        mean_rel_error={s: curves[s].mean(axis=0) for s in cfg.schemes},
        std_rel_error={s: curves[s].std(axis=0) for s in cfg.schemes},
        steady_state_mean={s: float(curves[s][:, -1].mean()) for s in cfg.schemes},
        steady_state_std={s: float(curves[s][:, -1].std()) for s in cfg.schemes},
        steady_errors={s: curves[s][:, -1].copy() for s in cfg.schemes},
    )


# ---------------------------------------------------------------------------
# Persistence


def format_report_csv(report: ExperimentReport) -> str:
    """CSV body: scheme,iteration,mean_rel_error,std_rel_error.

    Floats are serialized with repr (shortest round-trip form), which makes
    reruns byte-identical.
    """
    lines = ["scheme,iteration,mean_rel_error,std_rel_error"]
    for scheme in report.schemes:
        mean = report.mean_rel_error[scheme]
        std = report.std_rel_error[scheme]
        for k in range(mean.size):
            lines.append(f"{scheme},{k},{float(mean[k])!r},{float(std[k])!r}")
    return "\n".join(lines) + "\n"


def write_report_csv(report: ExperimentReport, path: str | Path) -> None:
    Path(path).write_text(format_report_csv(report), encoding="utf-8")


def write_report_meta(
    report: ExperimentReport, path: str | Path, timestamp: bool = True
) -> None:
    """Sidecar JSON echoing the config and the resolved run parameters."""
    payload = {
        "name": report.config.name,
        "config": asdict(report.config),
        "resolved": {
            "omega": report.omega,
            "n_max": report.n_max,
            "n_sets": report.n_sets,
            "c_max": report.c_max,
            "gamma": report.gamma,
            "gamma_warning": report.gamma_warning,
        },
        "steady_state": {
            s: {
                "mean": report.steady_state_mean[s],
                "std": report.steady_state_std[s],
            }
            for s in report.schemes
        },
        "seed": report.config.seed,
    }
    if timestamp:
        payload["written_at"] = datetime.now(timezone.utc).isoformat()
    Path(path).write_text(
        json.dumps(payload, indent=2) + "\n", encoding="utf-8"
    )


def bootstrap_gap_quantile(
    smaller: np.ndarray,
    larger: np.ndarray,
    n_resamples: int = 4000,
    seed: int = 0,
    quantile: float = 0.05,
) -> float:
    """Lower quantile of mean(larger - smaller) under paired resampling.

    A positive return value supports "smaller beats larger" at the
    (1 - quantile) one-sided confidence level.  Pairing is by trial, which
    is valid here because all schemes in a run share each trial's signal
    and noise draw.
    """
    a = np.asarray(smaller, dtype=np.float64)
    b = np.asarray(larger, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1 or a.size == 0:
        raise ValueError("need two equally sized nonempty 1-d samples")
    diffs = b - a
    rng = np.random.default_rng(seed)
    idx = rng.integers(0, diffs.size, size=(n_resamples, diffs.size))
    means = diffs[idx].mean(axis=1)
    return float(np.quantile(means, quantile))
