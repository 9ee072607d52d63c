"""Queries spent by the multi-point decoder against repeating a single-point decoder.

    python demos/query_budget.py
"""

from codex_lcc.harness import comparison_table

for row in comparison_table():
    print(f"{row['preset']:>9}: k={row['k']}, s={row['s']}, "
          f"{row['queries_alg']} vs {row['queries_repetition']} queries (ratio {row['ratio']:.3g})")
