from geometry import *
from potential import *
from spectrum import *
from tunneling import *
from scattering import *
from dynamics import *
from utils import *
import argparse
import os
import sys
import numpy as np
import wandb


### GLOBAL VARIABLES ###
UNITS = "natural"  # natural (hbar = 1, m = 1/2) or physical (SI, electron)
OUT_DIR = "results"  # Folder receiving the CSV/JSON outputs and the manifest
WANDB_PROJECT = "knot-qubit"
CIRCLE_POINTS = 8192  # Samples of the built-in circle
TREFOIL_POINTS = 2048  # Samples of the built-in trefoil after arclength resampling
TREFOIL_DENSE = 20000  # Samples of the trefoil before resampling
TLS_DT_FRACTION = 0.005  # Default two-level time step, as a fraction of the shortest period
TLS_MAX_ROWS = 20000  # Rows kept in the two-level trajectory file
CN_POTENTIAL_STEP = 0.05  # Default Crank-Nicolson time step, dt * max|V| / hbar
PROFILE_NODES = 4000  # Eigensolver nodes over a curvature profile read from file

### PATHS ###
PRESETS = os.path.join(os.path.dirname(os.path.abspath(__file__)), "presets.yaml")

### DEFAULT PARAMETERS ###
DEFAULTS = {
    "geometry": {"curve": None, "segments": None, "profile": None, "builtin": None, "closed": False,
                 "n": None, "dense": TREFOIL_DENSE, "radius": 1.0, "d": 0.0, "lead": None},
    "spectrum": {"rho0": 1.0, "d": None, "D": None, "kappa": None, "l": None, "method": "both",
                 "profile": None, "n_states": 2, "nodes": None, "save_psi": False},
    "split": {"rho0": 1.0, "d": None, "D": None, "kappa": None, "method": "both", "nodes": None,
              "strict": False},
    "transmission": {"rho0": 1.0, "d": None, "D": None, "kappa": None, "qmin": 0.01, "qmax": 4.0,
                     "n": 4000, "threshold": 0.999},
    "tls": {"deltaE": 0.03, "bias0": 0.0, "amp": 0.0, "drive_freq": None, "phase": 0.0,
            "t_end": None, "dt": None, "initial": "L", "rho0": 1.0, "field": 0.0},
    "wavepacket": {"rho0": 1.0, "d": None, "D": None, "kappa": None, "periods": 3.5, "dt": None,
                   "nodes": None},
    "reference": {},
}

### EXIT CODES ###
EXIT_VALIDATION = 2
EXIT_GEOMETRY = 3
EXIT_SPECTRUM = 4
EXIT_TUNNELING = 5
EXIT_SCATTERING = 6
EXIT_DYNAMICS = 7
EXIT_INPUT_FILE = 8
COMMAND_CODES = {
    "geometry": EXIT_GEOMETRY,
    "spectrum": EXIT_SPECTRUM,
    "split": EXIT_TUNNELING,
    "transmission": EXIT_SCATTERING,
    "tls": EXIT_DYNAMICS,
    "wavepacket": EXIT_DYNAMICS,
    "reference": EXIT_SPECTRUM,
}


def exit_code(error, fallback):
    """Exit code of an exception, by its domain first and by the running stage otherwise"""
    if isinstance(error, CsvFormatError):
        return EXIT_INPUT_FILE
    if isinstance(error, CurveError):
        return EXIT_GEOMETRY
    if isinstance(error, GridResolutionError):
        return EXIT_SPECTRUM
    if isinstance(error, (NoDoubletError, DegenerateCombinationError)):
        return EXIT_TUNNELING
    if isinstance(error, (CriticalFieldError, StepSizeError)):
        return EXIT_DYNAMICS
    return fallback


### CONFIGURATION ###

def merge_parameters(key, cli, config, paper_defaults=False, presets_path=PRESETS):
    """Defaults < presets (--paper-defaults) < config file < command-line flags"""
    parameters = dict(DEFAULTS[key])
    if paper_defaults:
        parameters.update(read_config(presets_path).get(key, {}))
    block = config.get(key, {})
    if not isinstance(block, dict):
        raise ValueError(f"Invalid config block: {key}")
    unknown = set(block) - set(DEFAULTS[key])
    if unknown:
        raise ValueError(f"Invalid config keys for {key}: {sorted(unknown)}")
    parameters.update(block)
    parameters.update({name: value for name, value in cli.items()
                       if name in DEFAULTS[key] and value is not None})
    return parameters


def build_model(p, params):
    """Knot double well, with the well width and curvature optionally overridden"""
    if not p["rho0"] > 0:
        raise ValueError(f"Invalid rho0: {p['rho0']}")
    model = DoubleWellModel.knot(p["rho0"], d=p.get("d"), l=p.get("l"), params=params)
    changes = {name: p[name] for name in ("D", "kappa") if p.get(name) is not None}
    return model.with_(**changes) if changes else model


def build_grid(model, nodes):
    grid = default_grid(model)
    if nodes is None:
        return grid
    return Grid(grid.s_min, grid.s_max, int(nodes))


def _path(folder, name):
    return os.path.join(folder, name)


def _scalars(result):
    return {key: value for key, value in result.items()
            if isinstance(value, (int, float)) and not isinstance(value, bool)}


### SUBCOMMANDS ###
# Each prepare_* validates its parameters and returns the computation, run later on the
# output folder.

def prepare_geometry(p, params, verbose=False, track=False):
    sources = [name for name in ("curve", "segments", "profile", "builtin") if p[name] is not None]
    if len(sources) != 1:
        raise ValueError("Invalid geometry input: give exactly one of --curve, --segments, --profile, "
                         f"--builtin (got {sources})")
    segments, curve, profile, resample = None, None, None, p["n"]
    if p["segments"] is not None:
        segments = read_segments_csv(p["segments"])
    elif p["profile"] is not None:
        profile = read_profile_csv(p["profile"])
    elif p["curve"] is not None:
        curve = SpaceCurve(read_points_csv(p["curve"]), closed=bool(p["closed"]))
    elif p["builtin"] == "trefoil":
        curve = trefoil_curve(int(p["dense"]))
        resample = TREFOIL_POINTS if resample is None else resample
    elif p["builtin"] == "circle":
        curve = circle_curve(p["radius"], int(resample or CIRCLE_POINTS))
        resample = None
    elif p["builtin"] == "nanobar":
        segments = nanobar_segments(p["radius"], p["d"], p["lead"])
    else:
        raise ValueError(f"Invalid builtin curve: {p['builtin']}")

    def compute(folder):
        if profile is not None:
            curvature = profile
        elif segments is not None:
            curvature = compose_segments(segments)
        else:
            sampled = reparametrize_arclength(curve, int(resample)) if resample else curve
            curvature = curvature_profile(sampled)
        total = total_curvature(curvature)
        write_csv(_path(folder, "curvature.csv"), ["s", "kappa"], zip(curvature.s, curvature.kappa))
        write_potential(folder, effective_potential(curvature, params))
        result = {"total_curvature": total, "N_s": state_count_estimate(curvature, params),
                  "length": curvature.length, "closed": curvature.closed,
                  "above_4pi": bool(total >= 4.0 * np.pi)}
        write_json(_path(folder, "geometry.json"), result)
        return result
    return compute


def prepare_spectrum(p, params, verbose=False, track=False):
    if p["method"] not in ("analytic", "numeric", "both"):
        raise ValueError(f"Invalid method: {p['method']}")
    if int(p["n_states"]) < 1:
        raise ValueError(f"Invalid state count: {p['n_states']}")
    if p["profile"] is not None:
        return _profile_spectrum(p, params)
    model = build_model(p, params)

    def compute(folder):
        result = {"model": model.to_dict()}
        summary = {"U0": model.U0, "C": model.C}
        if p["method"] in ("analytic", "both"):
            levels = solve_single_well(model)
            result["single_well"] = [level.to_dict() for level in levels]
            summary["E_ground_single_well"] = levels[0].energy
            if model.l is not None:
                result["hard_wall"] = [level.to_dict() for level in solve_hard_wall(model)]
        potential = double_well_potential(model)
        if p["method"] in ("numeric", "both"):
            grid = build_grid(model, p["nodes"])
            states = numeric_spectrum(potential, grid, int(p["n_states"]), params)
            result["numeric"] = [state.to_dict() for state in states]
            summary["E_ground_double_well"] = states[0].energy
            if p["save_psi"]:
                _write_psi(folder, grid, states)
        write_potential(folder, potential)
        write_json(_path(folder, "spectrum.json"), result)
        return summary
    return compute


def _write_psi(folder, grid, states):
    columns = [grid.nodes] + [state.psi.psi for state in states]
    header = ["s"] + [f"psi_{i}" for i in range(len(states))]
    write_csv(_path(folder, "psi.csv"), header, zip(*columns))


def _profile_spectrum(p, params):
    """Numeric levels of the curvature potential of a profile file, Dirichlet at its ends"""
    if p["method"] == "analytic":
        raise ValueError("Invalid method: analytic levels need the double-well model, not --profile")
    profile = read_profile_csv(p["profile"])
    potential = effective_potential(profile, params)
    grid = Grid(float(profile.s[0]), float(profile.s[-1]), int(p["nodes"] or PROFILE_NODES))

    def compute(folder):
        states = numeric_spectrum(potential, grid, int(p["n_states"]), params)
        if p["save_psi"]:
            _write_psi(folder, grid, states)
        write_potential(folder, potential)
        write_json(_path(folder, "spectrum.json"),
                   {"profile": p["profile"], "numeric": [state.to_dict() for state in states]})
        return {"E_ground": states[0].energy, "V_min": potential.minimum()}
    return compute


def prepare_split(p, params, verbose=False, track=False):
    model = build_model(p, params)
    methods = {"wkb": [WKB], "numeric": [NUMERIC], "landau": [LANDAU],
               "both": [WKB, NUMERIC], "all": [WKB, NUMERIC, LANDAU]}
    if p["method"] not in methods:
        raise ValueError(f"Invalid method: {p['method']}")

    def compute(folder):
        results = {}
        if WKB in methods[p["method"]]:
            results[WKB] = wkb_split(model, params=params)
        if NUMERIC in methods[p["method"]]:
            grid = build_grid(model, p["nodes"])
            results[NUMERIC] = numeric_split(double_well_potential(model), grid, params, model=model,
                                             strict=bool(p["strict"]))
        if LANDAU in methods[p["method"]]:
            results[LANDAU] = landau_split(model, params)
        write_potential(folder, double_well_potential(model))
        write_json(_path(folder, "split.json"), {name: result.to_dict() for name, result in results.items()})
        return {f"deltaE_{name}": result.deltaE for name, result in results.items()}
    return compute


def prepare_transmission(p, params, verbose=False, track=False):
    model = build_model(p, params)
    potential = double_well_potential(model)
    if not 0 < p["qmin"] < p["qmax"]:
        raise ValueError(f"Invalid sweep range: [{p['qmin']}, {p['qmax']}]")
    if int(p["n"]) < 2:
        raise ValueError(f"Invalid sweep size: {p['n']}")
    if not 0 < p["threshold"] <= 1:
        raise ValueError(f"Invalid threshold: {p['threshold']}")

    def compute(folder):
        sweep = transmission_sweep(p["qmin"], p["qmax"], int(p["n"]), potential, params, verbose=verbose)
        write_csv(_path(folder, "transmission.csv"), ["q", "T"], zip(sweep.q, sweep.T))
        resonances = find_resonances(sweep, p["threshold"])
        oracle = [q for q in ramsauer_resonances(2 * model.D + model.d, model.U0, 64, params)
                  if q <= p["qmax"]]
        write_json(_path(folder, "resonances.json"),
                   {"resonances": resonances, "ramsauer_merged_well": oracle,
                    "unitarity_error": float(np.max(np.abs(sweep.T + sweep.R - 1.0)))})
        return {"n_resonances": len(resonances), "first_resonance": resonances[0] if resonances else None}
    return compute


def _initial_state(p, params):
    initial = p["initial"]
    if initial == "L":
        return TwoLevelState.left()
    if initial == "R":
        return TwoLevelState.right()
    if initial == "ground":
        return TwoLevelState.superposition(+1)
    if initial == "excited":
        return TwoLevelState.superposition(-1)
    if initial == "prepare":
        return prepare_and_release(DoubleWellModel.knot(p["rho0"], params=params), p["field"], params)
    raise ValueError(f"Invalid initial state: {initial}")


def prepare_tls(p, params, verbose=False, track=False):
    deltaE = float(p["deltaE"])
    if not deltaE > 0:
        raise ValueError(f"Invalid deltaE: {deltaE}")
    freq = p["drive_freq"]
    if freq is None:
        freq = 0.0
    elif freq == "resonant":
        freq = deltaE / params.hbar
    drive = DriveSpec(bias0=float(p["bias0"]), amp=float(p["amp"]), freq=float(freq),
                      phase=float(p["phase"]))
    initial = _initial_state(p, params)
    periods = [2.0 * np.pi * params.hbar / deltaE]
    if drive.freq > 0:
        periods.append(2.0 * np.pi / drive.freq)
    dt = p["dt"] if p["dt"] is not None else TLS_DT_FRACTION * min(periods)
    if p["t_end"] is not None:
        t_end = p["t_end"]
    elif drive.amp > 0:
        t_end = 1.2 * 2.0 * np.pi * params.hbar / drive.amp
    else:
        t_end = 3.0 * periods[0]
    record_every = max(1, int(round(t_end / dt)) // TLS_MAX_ROWS)

    def compute(folder):
        trajectory = tls_evolve(deltaE, drive, initial, t_end, dt, params, record_every, verbose,
                                logging=track)
        rows = zip(trajectory.t, trajectory.aL[:, 0].real, trajectory.aL[:, 0].imag,
                   trajectory.aR[:, 0].real, trajectory.aR[:, 0].imag)
        write_csv(_path(folder, "tls.csv"), ["t", "re_aL", "im_aL", "re_aR", "im_aR"], rows)
        result = {"dt": dt, "t_end": float(trajectory.t[-1]), "max_P_R": float(trajectory.P_R.max()),
                  "max_excited": float(trajectory.excited.max()),
                  "norm_drift": float(np.max(np.abs(trajectory.norm - initial.norm())))}
        write_json(_path(folder, "tls.json"), result)
        return result
    return compute


def prepare_wavepacket(p, params, verbose=False, track=False):
    model = build_model(p, params)
    potential = double_well_potential(model)
    grid = build_grid(model, p["nodes"])
    if not p["periods"] > 0:
        raise ValueError(f"Invalid period count: {p['periods']}")
    dt = p["dt"] if p["dt"] is not None else CN_POTENTIAL_STEP * params.hbar / potential.maximum_magnitude()

    def compute(folder):
        states = numeric_spectrum(potential, grid, 2, params)
        deltaE = states[1].energy - states[0].energy
        expected = 2.0 * np.pi * params.hbar / deltaE
        steps = int(np.ceil(p["periods"] * expected / dt))
        trajectory = cn_evolve(potential, doublet_wavepacket(states), grid, dt, steps, params,
                               verbose=verbose, logging=track)
        write_csv(_path(folder, "wavepacket.csv"), ["t", "P_L", "P_R", "norm"], trajectory.rows())
        measured = oscillation_period(trajectory.t, trajectory.P_L)
        result = {"deltaE": deltaE, "expected_period": expected, "measured_period": measured,
                  "relative_error": abs(measured - expected) / expected, "dt": dt, "steps": steps,
                  "norm_drift": float(np.max(np.abs(trajectory.norm - trajectory.norm[0])))}
        write_json(_path(folder, "wavepacket.json"), result)
        return result
    return compute


def prepare_reference(p, params, verbose=False, track=False):
    if params.units != "natural":
        raise ValueError("Invalid units: the reference numbers are computed in natural units")

    def compute(folder):
        knot = DoubleWellModel.knot(1.0, params=params)
        ground = solve_single_well(knot)[0]
        rounded_k = 1.0 / (5.0 * knot.rho0)
        trefoil = curvature_profile(reparametrize_arclength(trefoil_curve(TREFOIL_DENSE), TREFOIL_POINTS))
        circle = curvature_profile(circle_curve(1.0, CIRCLE_POINTS))
        small = DoubleWellModel.knot(0.5, params=params)
        physical = DoubleWellModel.knot(1e-9, params=PhysParams.physical())
        splits = {}
        for d in (2.0, 5.0, 10.0):
            model = knot.with_(d=d)
            numeric = numeric_split(double_well_potential(model), default_grid(model), params, model=model)
            splits[f"d={d:g}"] = {"wkb": wkb_split(model, params=params).to_dict(),
                                  "numeric": numeric.to_dict(),
                                  "landau": landau_split(model, params).to_dict()}
        table = DoubleWellModel(rho0=0.5, D=2.5, d=0.01, kappa=1.0, params=params)
        sweep = transmission_sweep(0.01, 4.0, 4000, double_well_potential(table), params, verbose=verbose)
        result = {
            "U0": knot.U0, "C": knot.C, "k1": ground.k, "E1_over_U0": ground.energy / knot.U0,
            "k1_rounded": rounded_k, "E1_over_U0_rounded": level_energy(knot, rounded_k) / knot.U0,
            "N_s_circle": state_count_estimate(circle), "N_s_trefoil": state_count_estimate(trefoil),
            "total_curvature_trefoil": total_curvature(trefoil),
            "critical_field_rho0_0.5": critical_field(small, params),
            "critical_field_bound_rho0_0.5": critical_field_bound(small, params),
            "dipole_moment": dipole_moment(knot, params),
            "max_temperature_K_rho0_1nm": max_temperature(physical),
            "splits": splits,
            "resonances": find_resonances(sweep),
            "ramsauer": ramsauer_resonances(2 * table.D + table.d, table.U0, 6, params),
        }
        write_json(_path(folder, "reference.json"), result)
        return result
    return compute


PREPARE = {
    "geometry": prepare_geometry,
    "spectrum": prepare_spectrum,
    "split": prepare_split,
    "transmission": prepare_transmission,
    "tls": prepare_tls,
    "wavepacket": prepare_wavepacket,
    "reference": prepare_reference,
}


### COMMAND LINE ###

def _drive_frequency(value):
    return value if value == "resonant" else float(value)


def build_parser():
    parser = argparse.ArgumentParser(
        description="Curvature-induced double wells of tight knots and bent nano-bars")
    parser.add_argument("--units", choices=["natural", "physical"], default=None,
                        help="Unit system (default natural: hbar = 1, m = 1/2)")
    parser.add_argument("--out-dir", default=OUT_DIR, help="Output folder")
    parser.add_argument("--config", default=None, help="YAML file with one block per subcommand")
    parser.add_argument("--wandb", action="store_true", help="Send parameters and results to wandb")
    parser.add_argument("--verbose", action="store_true", help="Show progress bars")
    commands = parser.add_subparsers(dest="command", required=True)

    def model_flags(sub):
        sub.add_argument("--rho0", type=float, help="Thread radius")
        sub.add_argument("--d", type=float, help="Barrier width (default 5 rho0)")
        sub.add_argument("--D", type=float, help="Well width (default 5 rho0)")
        sub.add_argument("--kappa", type=float, help="Well curvature (default 1/(2 rho0))")
        sub.add_argument("--paper-defaults", action="store_true", help="Load the block of presets.yaml")

    geometry = commands.add_parser("geometry", help="Curvature profile, total curvature and N_s",
                                   description="Writes curvature.csv (columns s,kappa), potential.csv/json and geometry.json")
    geometry.add_argument("--curve", help="CSV of points x,y,z")
    geometry.add_argument("--segments", help="CSV of segments kind,length,radius")
    geometry.add_argument("--profile", help="CSV of curvature samples s,kappa")
    geometry.add_argument("--builtin", choices=["trefoil", "circle", "nanobar"])
    geometry.add_argument("--closed", action="store_true", default=None, help="The curve is closed")
    geometry.add_argument("--n", type=int, help="Resample the curve to n points of equal spacing")
    geometry.add_argument("--dense", type=int, help="Trefoil samples before resampling")
    geometry.add_argument("--radius", type=float, help="Circle or nano-bar bending radius")
    geometry.add_argument("--d", type=float, help="Nano-bar central length")
    geometry.add_argument("--lead", type=float, help="Nano-bar lead length")
    geometry.add_argument("--paper-defaults", action="store_true", help="Load the block of presets.yaml")

    spectrum = commands.add_parser("spectrum", help="Bound levels",
                                   description="Writes spectrum.json (lists of k,q,energy,parity) and "
                                               "potential.csv/json and optionally psi.csv (columns s,psi_0,psi_1,...)")
    model_flags(spectrum)
    spectrum.add_argument("--l", type=float, help="Hard-wall distance from each well centre")
    spectrum.add_argument("--profile", help="CSV of curvature samples s,kappa; solves its curvature potential")
    spectrum.add_argument("--method", choices=["analytic", "numeric", "both"])
    spectrum.add_argument("--n-states", type=int)
    spectrum.add_argument("--nodes", type=int, help="Grid nodes of the eigensolver")
    spectrum.add_argument("--save-psi", action="store_true", default=None)

    split = commands.add_parser("split", help="Tunnel splitting of the ground doublet",
                                description="Writes split.json (deltaE, omega_cl, omega_res per method) and potential.csv/json")
    model_flags(split)
    split.add_argument("--method", choices=["wkb", "numeric", "landau", "both", "all"])
    split.add_argument("--nodes", type=int)
    split.add_argument("--strict", action="store_true", default=None,
                       help="Fail when the upper level of the doublet is not bound")

    transmission = commands.add_parser("transmission", help="Transmission sweep and resonances",
                                       description="Writes transmission.csv (columns q,T) and resonances.json")
    model_flags(transmission)
    transmission.add_argument("--qmin", type=float)
    transmission.add_argument("--qmax", type=float)
    transmission.add_argument("--n", type=int)
    transmission.add_argument("--threshold", type=float)

    dynamics = commands.add_parser("dynamics", help="Time evolution")
    modes = dynamics.add_subparsers(dest="mode", required=True)
    tls = modes.add_parser("tls", help="Driven two-level dynamics",
                           description="Writes tls.csv (columns t,re_aL,im_aL,re_aR,im_aR) and tls.json")
    tls.add_argument("--deltaE", type=float)
    tls.add_argument("--bias0", type=float)
    tls.add_argument("--amp", type=float)
    tls.add_argument("--drive-freq", type=_drive_frequency, help="Angular frequency or 'resonant'")
    tls.add_argument("--phase", type=float)
    tls.add_argument("--t-end", type=float)
    tls.add_argument("--dt", type=float)
    tls.add_argument("--initial", choices=["L", "R", "ground", "excited", "prepare"])
    tls.add_argument("--rho0", type=float, help="Thread radius of the prepared knot")
    tls.add_argument("--field", type=float, help="Preparation field for --initial prepare")
    tls.add_argument("--paper-defaults", action="store_true")
    wavepacket = modes.add_parser("wavepacket", help="Crank-Nicolson evolution of the doublet combination",
                                  description="Writes wavepacket.csv (columns t,P_L,P_R,norm) and wavepacket.json")
    model_flags(wavepacket)
    wavepacket.add_argument("--periods", type=float)
    wavepacket.add_argument("--dt", type=float)
    wavepacket.add_argument("--nodes", type=int)

    commands.add_parser("reference", help="Every reproducible number of the knot model in reference.json")
    return parser


def run(argv=None):
    """Parse, validate, compute and write; returns the exit code"""
    args = build_parser().parse_args(argv)
    key = args.mode if args.command == "dynamics" else args.command
    cli = {name: value for name, value in vars(args).items()
           if name not in ("command", "mode", "units", "out_dir", "config", "wandb", "verbose",
                           "paper_defaults")}

    ### VALIDATION ###
    try:
        config = read_config(args.config) if args.config else {}
        units = args.units or config.get("units", UNITS)
        params = PhysParams.from_units(units)
        parameters = merge_parameters(key, cli, config, getattr(args, "paper_defaults", False))
        compute = PREPARE[key](parameters, params, verbose=args.verbose, track=args.wandb)
    except Exception as error:
        print(f"error: {error}", file=sys.stderr)
        return exit_code(error, EXIT_VALIDATION)

    ### COMPUTATION ###
    os.makedirs(args.out_dir, exist_ok=True)
    write_manifest(args.out_dir, key, parameters, units)
    wandb.init(project=WANDB_PROJECT, config={"command": key, "units": units, **parameters},
               mode="online" if args.wandb else "disabled")
    print(f"Running {key}...")
    try:
        result = compute(args.out_dir)
    except Exception as error:
        print(f"error: {error}", file=sys.stderr)
        wandb.finish(exit_code=1)
        return exit_code(error, COMMAND_CODES[key])
    wandb.log(_scalars(result))
    wandb.finish()
    print(f"Results written to {args.out_dir}")
    return 0


if __name__ == "__main__":
    sys.exit(run())
