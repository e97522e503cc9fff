# src/quenched_ldp/config.py
from pathlib import Path

# Raíz del repo (…/quenched_ldp)
PROJECT_ROOT = Path(__file__).resolve().parents[2]

# results/ local del repo; los artefactos de la CLI caen aquí si no se da --out
RESULTS_DIR = PROJECT_ROOT / "data" / "results"
RESULTS_DIR.mkdir(parents=True, exist_ok=True)


# ── Leyes por defecto (ρ algebraica α=2 con tope 4, ν uniforme sobre {a,b})
DEFAULT_ALPHABET = "ab"
DEFAULT_ALPHA = 2.0
DEFAULT_CAP = 4
DEFAULT_SEED = 20090417
DEFAULT_THREADS = 1


# ── Tolerancias
MASS_TOL = 1e-12          # suma de masas tras construir / truncar
STATIONARY_TOL = 1e-10    # π P = π
POWER_ITER_TOL = 1e-13    # residuo de la iteración de potencias
RNU_TOL = 1e-9            # test de pertenencia a R_ν
PREMISE_RTOL = 1e-12      # ρ(n) ≤ C_ρ n^{-α}


# ── Presupuestos (escala de escritorio)
TABLE_BUDGET = 2 ** 22            # |E|^L máximo para una tabla marginal
DP_BUDGET = 2 ** 25               # filas × estados en el DP hacia adelante
ENUM_BUDGET = 5 * 10 ** 7         # estados × posiciones en la enumeración templada
PATTERN_BUDGET = 2 ** 20          # patrones de k palabras enumerables
MAX_MARKOV_WORDS = 64
WORD_DEPTH = 4                    # profundidad (en palabras) para leyes imagen truncadas
FFT_THRESHOLD = 4096              # horizonte a partir del cual S_N usa FFT
WAITING_HORIZON_CAP = 2 ** 26     # letras máximas por ensayo de tiempo de espera
BATCH_ROWS = 64                   # filas por lote en el Monte Carlo de S_N


# Nombres de las salidas por subcomando
CSV_SEPARATOR = ","
