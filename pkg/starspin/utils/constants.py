"""
Physical constants, nuclear data and molecule presets.
"""

# Gyromagnetic ratios in rad s^-1 T^-1
GYROMAGNETIC_RATIOS = {
    "1H": 26.7522e7,
    "13C": 6.7283e7,
    "19F": 25.1815e7,
    "29Si": -5.3190e7,
    "31P": 10.8394e7,
}

DEFAULT_B0 = 11.7  # T
DEFAULT_TEMPERATURE = 298.0  # K

# Largest register the dense backend accepts (2^14 x 2^14 matrices)
DENSE_LIMIT = 14

# Star registers studied in liquid-state NMR. J couplings in Hz, T1 in s.
# T1 values only fix the central/ancilla ratio of the HBAC experiments.
MOLECULE_PRESETS = {
    "tmp": {
        "label": "trimethylphosphite",
        "n_total": 10,
        "central": "31P",
        "ancilla": "1H",
        "j_ca": 11.0,
        "t1_c": 8.0,
        "t1_a": 2.0,
    },
    "tms": {
        "label": "tetramethylsilane",
        "n_total": 13,
        "central": "29Si",
        "ancilla": "1H",
        "j_ca": 6.6,
        "t1_c": 15.0,
        "t1_a": 3.0,
    },
    "ttss": {
        "label": "tetrakis(trimethylsilyl)silane",
        "n_total": 37,
        "central": "29Si",
        "ancilla": "1H",
        "j_ca": 6.4,
        "t1_c": 34.0,
        "t1_a": 1.0,
    },
    "acetonitrile": {
        "label": "13C-acetonitrile",
        "n_total": 4,
        "central": "13C",
        "ancilla": "1H",
        "j_ca": 136.0,
        "t1_c": 10.0,
        "t1_a": 3.0,
    },
}

EXPERIMENTS = (
    "spectrum",
    "noon",
    "diffusion",
    "rfi",
    "noise",
    "hbac",
    "qfi",
    "dtc",
    "chaos",
)

BACKENDS = ("auto", "symmetric", "dense")
