"""
Experiment dispatch and result files.

``run_experiment`` resolves the register and backend, validates every
experiment parameter, runs the protocol and writes ``<experiment>.csv`` with
a YAML ``<experiment>.meta`` sidecar. Nothing is written unless the whole run
succeeds. Independent sweep points may run in worker processes (``jobs``);
every random stream is addressed by the master seed, so results do not depend
on the number of workers.
"""

import csv
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from pathlib import Path
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
import yaml

from .. import __version__
from ..chaos import KickedTopSpec, default_grid, phase_space_map, size_sweep
from ..core import Backend, Register, RegisterSpec, build_register, check_backend
from ..floquet import (
    DEFAULT_JT,
    FloquetSpec,
    dtc_error_sweep,
    dtc_series,
    power_spectrum_table,
    sample_kick_angles,
    subharmonic_analysis,
)
from ..metrology import fisher_sweep
from ..prep import (
    coherence_decompose,
    mssm_weights,
    noon_state,
    pascal_weights,
    prepare_mssm,
    stick_spectrum,
    thermal_state,
)
from ..protocols import (
    DiffusionParams,
    HbacSchedule,
    LorentzianSpectrum,
    NoiseKind,
    NoiseModel,
    ResetModel,
    RfiGrid,
    WhiteSpectrum,
    cpmg_decay,
    diffusion_decay_closed_form,
    diffusion_monte_carlo,
    diffusion_slope,
    encoding_weight,
    extract_noise_spectrum,
    gaussian_rf_distribution,
    hbac_run,
    hbac_sorting_bound,
    lopsidedness_scaling,
    rfi_map,
    total_variation,
)
from ..utils.errors import InvalidParameter, MissingRequired
from .config import ExperimentConfig, config_echo, render_config

log = logging.getLogger("starspin")

COLUMNS: Dict[str, Tuple[str, ...]] = {
    "spectrum": ("frequency_hz", "amplitude", "channel", "h"),
    "noon": ("q", "weight", "closed_form", "pascal"),
    "diffusion": ("q", "lopsidedness", "g_z", "s_closed", "s_mc", "stderr"),
    "rfi": ("omega_c", "omega_a", "input", "recovered"),
    "noise": ("q", "lopsidedness", "n_pulses", "omega", "decay_rate", "s_omega"),
    "hbac": ("n", "m_n", "bound"),
    "qfi": ("n", "epsilon_a", "theta0", "phi0", "fisher", "bound", "ratio"),
    "dtc": ("e", "window", "peak_freq", "peak_height", "decay_time", "control_peak_freq"),
    "chaos_map": ("theta", "phi", "k", "mean_entropy"),
    "chaos_sweep": ("n_ancilla", "parity", "mean_entropy", "osc_amplitude"),
}

Row = Tuple[float, ...]


@dataclass(frozen=True, eq=False)
class ExperimentResult:
    """Rectangular numeric table with the metadata needed to reproduce it.

    ``attachments`` are extra long-format tables written next to the main CSV
    as ``<experiment>_<name>.csv``.
    """

    experiment: str
    columns: Tuple[str, ...]
    rows: List[Row]
    metadata: Dict[str, Any] = field(default_factory=dict)
    attachments: Dict[str, Tuple[Tuple[str, ...], List[Row]]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        width = len(self.columns)
        for index, row in enumerate(self.rows):
            if len(row) != width:
                raise InvalidParameter(f"row {index} has {len(row)} values, expected {width}")

    def column(self, name: str) -> np.ndarray:
        index = self.columns.index(name)
        return np.array([row[index] for row in self.rows], dtype=float)


def resolve_register(config: ExperimentConfig) -> Register:
    """Register from a preset, explicit fields, or both (explicit fields win).

    Raises:
        MissingRequired: If neither a preset nor a complete set of fields is given
        InvalidSpec: If the resulting spec violates an invariant
    """
    fields = {key: value for key, value in config.register.items() if value is not None}
    preset = fields.pop("preset", None)
    if preset is not None:
        spec = RegisterSpec.from_preset(preset, **fields)
    else:
        missing = [key for key in ("n_total", "gamma_c", "gamma_a", "j_ca") if key not in fields]
        if missing:
            raise MissingRequired(f"[register] needs a preset or the keys {', '.join(missing)}")
        spec = RegisterSpec(**fields)
    return build_register(spec)


def needs_dense(config: ExperimentConfig) -> bool:
    """Experiments that break ancilla permutation symmetry."""
    params = config.params
    if config.experiment == "noise":
        return params["kind"] == NoiseKind.INDEPENDENT.value
    if config.experiment == "dtc":
        return params["disorder"] > 0
    return False


def resolve_backend(config: ExperimentConfig, register: Register) -> Backend:
    """``auto`` picks symmetric unless the experiment needs per-spin detail.

    Raises:
        BackendLimit: If the choice is dense and N > 14
    """
    if config.backend == "auto":
        choice = Backend.DENSE if needs_dense(config) else Backend.SYMMETRIC
    else:
        choice = Backend(config.backend)
    return check_backend(register, choice)


def _map(fn: Callable[[Any], List[Row]], items: Sequence[Any], jobs: int) -> List[Row]:
    """Concatenate ``fn`` over ``items`` in item order, optionally in worker processes."""
    if jobs > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=min(jobs, len(items))) as pool:
            chunks = list(pool.map(fn, items))
    else:
        chunks = [fn(item) for item in items]
    return [row for chunk in chunks for row in chunk]


def _choice(params: Dict[str, Any], key: str, options: Iterable[str]) -> str:
    options = tuple(options)
    if params[key] not in options:
        raise InvalidParameter(f"{key} must be one of {', '.join(options)}, got '{params[key]}'")
    return params[key]


# Spectrum and NOON


def _spectrum(config: ExperimentConfig, register: Register, backend: Backend) -> ExperimentResult:
    params = config.params
    source = _choice(params, "input", ("thermal", "mssm"))
    channel = _choice(params, "channel", ("central", "ancilla"))
    state = thermal_state(register, backend, exact=params["exact"])
    if source == "mssm":
        state = prepare_mssm(state)
    spectrum = stick_spectrum(register, state, channel)
    rows = [tuple(float(v) for v in row) for row in spectrum.rows()]
    return ExperimentResult("spectrum", COLUMNS["spectrum"], rows, {"larmor_hz": spectrum.larmor_hz})


def _noon(config: ExperimentConfig, register: Register, backend: Backend) -> ExperimentResult:
    source = _choice(config.params, "input", ("thermal", "ground"))
    n = register.n_total
    pascal = pascal_weights(n)
    if source == "thermal":
        state = prepare_mssm(thermal_state(register, backend))
        closed = mssm_weights(register)
    else:
        state = noon_state(register, backend)
        closed = {q: float(q == n) for q in pascal}
    decomposition = coherence_decompose(state)
    rows = [
        (float(q), decomposition.weight(q), float(closed[q]), float(pascal[q]))
        for q in sorted(pascal, reverse=True)
    ]
    return ExperimentResult("noon", COLUMNS["noon"], rows, {"p_diag": decomposition.p_diag})


# Protocols


def _diffusion_rows(register: Register, params: DiffusionParams, q: int) -> List[Row]:
    closed = diffusion_decay_closed_form(register, q, params)
    sampled = diffusion_monte_carlo(register, q, params)
    return [
        (float(q), closed.lopsidedness, float(g), float(s), float(m), float(e))
        for g, s, m, e in zip(closed.g_z, closed.signal, sampled.signal, sampled.stderr)
    ]


def _diffusion(config: ExperimentConfig, register: Register, backend: Backend) -> ExperimentResult:
    p = config.params
    params = DiffusionParams(
        d_const=p["d_const"],
        g_z=p["g_z"],
        delta_small=p["delta_small"],
        delta_big=p["delta_big"],
        trials=p["trials"],
        seed=config.seed,
    )
    params.validate()
    orders = p["orders"] or (1, register.n_total)
    rows = _map(partial(_diffusion_rows, register, params), list(orders), config.jobs)
    metadata = {}
    if params.d_const > 0 and len(params.g_z) > 1:
        reference = diffusion_decay_closed_form(register, 1, params)
        metadata["closed_form_slope_ratio"] = {
            int(q): float(diffusion_slope(diffusion_decay_closed_form(register, q, params)) / diffusion_slope(reference))
            for q in orders
        }
    return ExperimentResult("diffusion", COLUMNS["diffusion"], rows, metadata)


def _rfi(config: ExperimentConfig, register: Register, backend: Backend) -> ExperimentResult:
    p = config.params
    q = p["order"] if p["order"] is not None else register.n_total
    grid = RfiGrid(p["dt_c"], p["n_c"], p["dt_a"], p["n_a"])
    grid.validate()
    w = encoding_weight(register, q)
    dist = gaussian_rf_distribution(
        grid, p["mean_c"], p["sigma_c"], p["mean_a"], p["sigma_a"], ancilla_scale=abs(w) or 1.0
    )
    recovered = rfi_map(register, q, dist, grid)
    given, found = dist.as_dict(), recovered.as_dict()
    rows = [(c, a, given.get((c, a), 0.0), found.get((c, a), 0.0)) for c, a in sorted(set(given) | set(found))]
    metadata = {"order": int(q), "encoding_weight": w, "total_variation": total_variation(dist, recovered)}
    return ExperimentResult("rfi", COLUMNS["rfi"], rows, metadata)


def _noise_model(config: ExperimentConfig) -> NoiseModel:
    p = config.params
    kind = NoiseKind(_choice(p, "kind", [k.value for k in NoiseKind]))
    shape = _choice(p, "spectrum", ("lorentzian", "white"))
    if shape == "lorentzian":
        if p["sigma"] is None or p["tau_c"] is None:
            raise MissingRequired("[noise] a Lorentzian spectrum needs sigma and tau_c")
        spectrum = LorentzianSpectrum(p["sigma"], p["tau_c"])
    else:
        if p["s0"] is None:
            raise MissingRequired("[noise] a white spectrum needs s0")
        spectrum = WhiteSpectrum(p["s0"])
    model = NoiseModel(
        kind=kind,
        spectrum=spectrum,
        cross_correlation=p["cross_correlation"],
        seed=config.seed,
        realizations=p["realizations"],
        resolution=p["resolution"],
    )
    model.validate()
    return model


def _noise_curve(register: Register, model: NoiseModel, n_pulses: int, t_max: float, backend: Backend, point):
    q, tau = point
    return [cpmg_decay(register, q, model, n_pulses, tau, t_max, backend)]


def _noise(config: ExperimentConfig, register: Register, backend: Backend) -> ExperimentResult:
    p = config.params
    model = _noise_model(config)
    n = register.n_total
    orders = p["orders"] or tuple(q for q in (n, n - 2, n - 4) if q > -n)
    points = [(q, tau) for q in orders for tau in p["tau"]]
    worker = partial(_noise_curve, register, model, p["n_pulses"], p["t_max"], backend)
    curves = _map(worker, points, config.jobs)
    spectrum = extract_noise_spectrum(curves)
    rows = [
        (float(s.q), s.lopsidedness, float(s.n_pulses), s.omega, s.decay_rate, s.s_omega) for s in spectrum
    ]
    metadata: Dict[str, Any] = {"kind": model.kind.value}
    if len(orders) >= 2:
        slope, r_squared = lopsidedness_scaling(spectrum)
        metadata.update({"scaling_slope": slope, "scaling_r_squared": r_squared})
    return ExperimentResult("noise", COLUMNS["noise"], rows, metadata)


def _hbac(config: ExperimentConfig, register: Register, backend: Backend) -> ExperimentResult:
    p = config.params
    reset = ResetModel(_choice(p, "reset", [r.value for r in ResetModel]))
    schedule = HbacSchedule(p["iterations"], p["tau_hb"], reset)
    magnetization = hbac_run(register, schedule)
    bound = hbac_sorting_bound(register, p["iterations"])
    rows = [(float(n), float(m), float(b)) for n, (m, b) in enumerate(zip(magnetization, bound))]
    metadata = {"single_transfer_gain": abs(register.epsilon_a / register.epsilon_c)}
    return ExperimentResult("hbac", COLUMNS["hbac"], rows, metadata)


# Metrology, Floquet and chaos


def _qfi_rows(register: Register, epsilon_a: float, theta0: float, phi0: float, copies: int, backend: Backend, n: int):
    return fisher_sweep(register, [n], epsilon_a, theta0, phi0, copies, backend)


def _qfi(config: ExperimentConfig, register: Register, backend: Backend) -> ExperimentResult:
    p = config.params
    if min(p["n_values"]) < 2:
        raise InvalidParameter("QFI register sizes must be at least 2")
    epsilon_a = p["epsilon_a"] if p["epsilon_a"] is not None else register.epsilon_a
    if p["copies"] < 1:
        raise InvalidParameter(f"copies must be at least 1, got {p['copies']}")
    worker = partial(_qfi_rows, register, epsilon_a, p["theta0"], p["phi0"], p["copies"], backend)
    rows = _map(worker, list(p["n_values"]), config.jobs)
    return ExperimentResult("qfi", COLUMNS["qfi"], rows, {"fd_step": 1e-4})


def _dtc_template(config: ExperimentConfig, register: Register) -> FloquetSpec:
    p = config.params
    j_coupling = p["j_coupling"] if p["j_coupling"] is not None else DEFAULT_JT / p["period"]
    angles = None
    if p["disorder"] > 0:
        angles = sample_kick_angles(register, 0.0, p["disorder"], config.seed)
    template = FloquetSpec(
        j_coupling=j_coupling,
        period=p["period"],
        kick_angles=angles,
        n_periods=p["n_periods"],
        observable=p["observable"],
    )
    template.validate(register)
    return template


def _dtc_rows(register: Register, template: FloquetSpec, windows, taper: str, backend: Backend, thermal: bool, e: float):
    return dtc_error_sweep(register, template, [e], windows, taper, backend, thermal)


def _dtc_spectra(register: Register, template: FloquetSpec, errors, taper: str, backend: Backend, thermal: bool):
    rows = []
    for e in errors:
        spec = template.replace(
            error=e,
            kick_angles=None if template.kick_angles is None else tuple(a - e for a in template.kick_angles),
        )
        report = subharmonic_analysis(dtc_series(register, spec, backend, thermal), spec.period, taper)
        rows.extend((float(e), f, power) for f, power in power_spectrum_table(report))
    return rows


def _dtc(config: ExperimentConfig, register: Register, backend: Backend) -> ExperimentResult:
    p = config.params
    template = _dtc_template(config, register)
    taper = _choice(p, "taper", ("rect", "hann"))
    windows = p["windows"] or (None,)
    for e in p["errors"]:
        if not 0 <= e < math.pi / 2:
            raise InvalidParameter(f"pulse error must lie in [0, pi/2), got {e}")
    worker = partial(_dtc_rows, register, template, windows, taper, backend, p["thermal"])
    rows = _map(worker, list(p["errors"]), config.jobs)
    attachments = {}
    if p["spectra"]:
        spectra = _dtc_spectra(register, template, p["errors"], taper, backend, p["thermal"])
        attachments["power"] = (("e", "frequency", "power"), spectra)
    metadata = {"j_coupling_hz": template.j_coupling, "jt": template.j_coupling * template.period}
    return ExperimentResult("dtc", COLUMNS["dtc"], rows, metadata, attachments)


def _chaos_map_rows(register: Register, spec: KickedTopSpec, size: int, backend: Backend, k: float):
    thetas, phis = default_grid(size)
    return phase_space_map(register, spec.replace(chaoticity=k), thetas, phis, backend).rows()


def _chaos_sweep_rows(register: Register, spec: KickedTopSpec, backend: Backend, count: int):
    return size_sweep(register, spec, [count], backend)


def _chaos(config: ExperimentConfig, register: Register, backend: Backend) -> ExperimentResult:
    p = config.params
    mode = _choice(p, "mode", ("map", "sweep"))
    spec = KickedTopSpec(
        chaoticity=p["k"][0],
        j_ca=p["j_ca"],
        n_kicks=p["n_kicks"],
        average_window=p["average_window"],
        theta=p["theta"],
        phi=p["phi"],
    )
    for k in p["k"]:
        spec.replace(chaoticity=k).validate()
    metadata = {"entropy_units": "bits", "mode": mode}
    if mode == "map":
        if p["grid"] < 1:
            raise InvalidParameter(f"grid must have at least one cell per axis, got {p['grid']}")
        worker = partial(_chaos_map_rows, register, spec, p["grid"], backend)
        rows = _map(worker, list(p["k"]), config.jobs)
        return ExperimentResult("chaos", COLUMNS["chaos_map"], rows, metadata)
    if len(p["k"]) != 1:
        raise InvalidParameter("a size sweep takes exactly one k value")
    if min(p["ancilla_counts"]) < 1:
        raise InvalidParameter("ancilla counts must be at least 1")
    worker = partial(_chaos_sweep_rows, register, spec, backend)
    rows = _map(worker, list(p["ancilla_counts"]), config.jobs)
    return ExperimentResult("chaos", COLUMNS["chaos_sweep"], rows, metadata)


EXPERIMENT_RUNNERS: Dict[str, Callable[[ExperimentConfig, Register, Backend], ExperimentResult]] = {
    "spectrum": _spectrum,
    "noon": _noon,
    "diffusion": _diffusion,
    "rfi": _rfi,
    "noise": _noise,
    "hbac": _hbac,
    "qfi": _qfi,
    "dtc": _dtc,
    "chaos": _chaos,
}


def _plain(value: Any) -> Any:
    if isinstance(value, dict):
        return {k: _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.generic):
        return value.item()
    return value


def compute_experiment(config: ExperimentConfig) -> ExperimentResult:
    """Run ``config`` without writing anything."""
    config.validate()
    register = resolve_register(config)
    backend = resolve_backend(config, register)
    log.info(f"running {config.experiment} on N={register.n_total} ({backend.value} backend, seed {config.seed})")
    result = EXPERIMENT_RUNNERS[config.experiment](config, register, backend)
    metadata = {
        "tool": "starspin",
        "version": __version__,
        "experiment": config.experiment,
        "seed": config.seed,
        "backend": backend.value,
        "columns": list(result.columns),
        "register": {
            "n_total": register.n_total,
            "epsilon_c": register.epsilon_c,
            "epsilon_a": register.epsilon_a,
            "label": register.spec.label,
        },
        "config": config_echo(config),
        "config_text": render_config(config),
        "results": _plain(result.metadata),
    }
    return ExperimentResult(result.experiment, result.columns, result.rows, metadata, result.attachments)


def _format(value: float) -> str:
    return repr(float(value))


def _write_csv(path: Path, columns: Sequence[str], rows: Sequence[Row]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(columns)
        writer.writerows([_format(v) for v in row] for row in rows)


def write_result(result: ExperimentResult, directory: Union[str, Path], name: Optional[str] = None) -> List[Path]:
    """Write ``<name>.csv``, ``<name>.meta`` and any attachments; returns the paths written."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    name = name or result.experiment
    csv_path = directory / f"{name}.csv"
    meta_path = directory / f"{name}.meta"
    _write_csv(csv_path, result.columns, result.rows)
    with open(meta_path, "w", encoding="utf-8") as f:
        yaml.safe_dump(result.metadata, f, sort_keys=False, default_flow_style=False)
    written = [csv_path, meta_path]
    for label, (columns, rows) in sorted(result.attachments.items()):
        path = directory / f"{name}_{label}.csv"
        _write_csv(path, columns, rows)
        written.append(path)
    log.info(f"wrote {len(result.rows)} rows to {csv_path}")
    return written


def read_result(csv_path: Union[str, Path]) -> ExperimentResult:
    """Load a CSV and, when present, its ``.meta`` sidecar.

    Raises:
        InvalidParameter: If the file has no header or a row is not rectangular
    """
    csv_path = Path(csv_path)
    with open(csv_path, newline="", encoding="utf-8") as f:
        reader = csv.reader(f)
        try:
            columns = tuple(next(reader))
        except StopIteration:
            raise InvalidParameter(f"{csv_path} is empty") from None
        rows = [tuple(float(v) for v in row) for row in reader if row]
    meta_path = csv_path.with_suffix(".meta")
    metadata: Dict[str, Any] = {}
    if meta_path.exists():
        with open(meta_path, encoding="utf-8") as f:
            metadata = yaml.safe_load(f) or {}
    return ExperimentResult(metadata.get("experiment", csv_path.stem), columns, rows, metadata)


def run_experiment(config: ExperimentConfig) -> Tuple[ExperimentResult, List[Path]]:
    """Compute ``config`` and write its files into ``config.output``.

    Raises:
        ConfigError: If the configuration is invalid (nothing is written)
        SimulationError: If a protocol fails (nothing is written)
    """
    result = compute_experiment(config)
    return result, write_result(result, config.output)
