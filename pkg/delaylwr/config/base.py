# base.py
"""Configuration constants and settings for the delayed LWR simulator."""

# Absolute slack on the discrete estimates; the proofs are exact in reals
TOLERANCES = {
    'bound': 1e-12,
    'positivity': 1e-14,
    'vacuum': 1e-12,          # below this sup-norm the CFL falls back to safety*dx
    'cfl_collapse': 1e-12,    # adaptive dt below this fraction of dx aborts the run
    'fixed_time_steps': 1e-9,
    'continuity': 1e-6,
}

DEFAULTS = {
    'snapshot_every': 5,
    'wave_prominence': 0.05,
    't_final': 3.0,
    'safety': 1.0,
    'rho_max': 1.0,
    'v_max': 1.0,
    'feasibility': 'warn',
    'transient_steps': 50,
}

# Exit codes of the command-line interface
EXIT_CODES = {
    'completed': 0,
    'usage': 1,
    'feasibility_abort': 2,
    'cfl_collapse': 3,
}

VELOCITY_KINDS = ["greenshields", "cut"]
BOUNDARY_KINDS = ["periodic", "dirichlet"]
DT_KINDS = ["fixed", "adaptive"]
STOP_KINDS = ["steps", "time"]
FEASIBILITY_POLICIES = ["warn", "abort"]
INITIAL_KINDS = ["sinusoidal", "riemann", "perturbation", "constant"]

# CSV headers
DIAGNOSTICS_COLUMNS = [
    "step", "time", "dt", "mass", "rho_min", "rho_max", "tv_space",
    "tv_time_inc", "linf_ok", "tv_ok", "overshoot", "positive", "tv_time_ok",
]
SWEEP_COLUMNS = ["delay_steps", "final_amplitude", "wave_count", "overshoot_step", "sg_flag", "status"]
COMPARISON_COLUMNS = ["step", "time", "amplitude_delayed", "amplitude_undelayed"]

# Output file names inside a run directory
OUTPUT_FILES = {
    'density': 'density.csv',
    'diagnostics': 'diagnostics.csv',
    'manifest': 'manifest.json',
    'sweep': 'sweep.csv',
    'comparison': 'comparison.csv',
}

CSV_FLOAT_FORMAT = '.17g'

# Logging configuration
LOGGING_CONFIG = {
    'log_file': 'delaylwr.log',
    'max_bytes': 5 * 1024 * 1024,  # 5MB
    'backup_count': 3,
    'file_format': '%(asctime)s - %(name)s - %(levelname)s - %(funcName)s:%(lineno)d - %(message)s',
    'console_format': '%(levelname)s - %(name)s - %(message)s',
    'datefmt': '%Y-%m-%d %H:%M:%S',
    'console_level': 'WARNING',
    'file_level': 'DEBUG',
}

# Sweep worker pool
SWEEP_CONFIG = {
    'max_workers': 8,
}
