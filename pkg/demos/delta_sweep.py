"""Empirical failure rate of the degree-2 curve decoder as the corruption rate grows.

    python demos/delta_sweep.py [trials]
"""

import sys

from codex_lcc import bounds
from codex_lcc.config import preset_config
from codex_lcc.harness import run_trials

trials = int(sys.argv[1]) if len(sys.argv) > 1 else 2000
print(f"{'delta':>6} {'failures':>9} {'rate':>9} {'effective':>10} {'nominal':>10}")
for delta in (0.02, 0.05, 0.1, 0.15, 0.2, 0.25):
    st = run_trials(preset_config("ex4.1ii").replace(seed=1, trials=trials, delta=delta))
    try:
        nominal = f"{bounds.eps_curve(delta, 0.2, 256):10.3g}"
    except bounds.BoundError:
        nominal = f"{'n/a':>10}"
    print(f"{delta:6.2f} {st.failures:9d} {st.emp_rate:9.3g} {st.eps_effective:10.3g} {nominal}")
