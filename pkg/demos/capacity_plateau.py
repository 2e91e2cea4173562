# How capacity grows with the number of servers, and where the search closes the gap.

from pidkit import capacity_report, converse_rate
from pidkit.cli import sweep_row

for K, M, Ns in [(7, 3, range(2, 7)), (5, 4, range(1, 6))]:
    print(f"K={K} M={M}")
    for N in Ns:
        rep = capacity_report(K, M, N)
        row = sweep_row(K, M, N, budget=10**6)
        print(
            f"  N={N}: closed form [{rep.lower}, {rep.upper}] {rep.regime:15s}"
            f" -> [{row['lower']}, {row['upper']}] ({row['source']})"
        )

cert = converse_rate(7, 3, 4)
print("\nwitness for K=7 M=3 N=4:")
print("  design:", cert.best_design.to_lists())
print("  constraints:", cert.constraints)
print("  optimal loads:", [str(x) for x in cert.loads], "total", cert.lp_value)
print("  rate <=", cert.rate_bound, f"after {cert.designs_examined} designs")
