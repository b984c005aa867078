"""Error-versus-n scans: the jump to zero, and a special situation.

Sweeps the number of vectors for two small cases and prints the best
potential per n.  The equal-norm (2,2) case in R^4 shows an isolated
zero at n = 12 with no designs at 11 or 13 (an exceptional design);
the weighted (3,3) case in R^3 shows the monotone curve hitting zero
at n = 11 and staying there.

Writes the tables as CSV; render them with
    python plots/plot_scan.py --in demo_scan_*.csv --out fig.png --scale log10
"""

from sphdesign import SolverOptions, detect_jump, detect_special, exceptional_check, save_table, scan_n_range
from sphdesign.core import Mode

for label, t, d, mode, lo, hi in [
    ("equal-norm (2,2)-designs in R^4", 2, 4, Mode.EQUAL_NORM, 10, 13),
    ("weighted (3,3)-designs in R^3", 3, 3, Mode.WEIGHTED, 10, 13),
]:
    print(f"{label}:")
    table = scan_n_range(t, d, mode, lo, hi, restarts=20, options=SolverOptions(seed=0))
    for rec in table.records:
        marker = "  <- design" if rec.is_zero else ""
        print(f"  n={rec.n}: best f = {rec.best_f:10.3e}{marker}")
    print(f"  jump to zero at: {detect_jump(table)}")
    print(f"  isolated zeros:  {detect_special(table)}")
    if lo < 12 < hi and mode == Mode.EQUAL_NORM:
        print(f"  n=12 exceptional (no neighbours): {exceptional_check(table, 12)}")
    out = f"demo_scan_t{t}_d{d}_{mode.value}.csv"
    save_table(table, out)
    print(f"  saved {out}\n")
