#!/usr/bin/env python3
"""A weak value of 100 from an observable whose eigenvalues are -1 and +1.

Nearly-orthogonal postselection amplifies the conditional reading far
outside the spectrum. The projective conditional, a true convex average
over eigenvalues, stays inside [-1, 1] for the same triple. The meter
only resolves the strange value once eps is small enough that eps * 100
fits under the largest meter eigenvalue; above that it saturates.
"""

from weakmeas import exact_outcome_distribution
from weakmeas.cli import preset, run_scenario


def main():
    cfg = preset("aav100")
    rows, summary = run_scenario(cfg)
    row = rows[0]
    print("postselection nearly orthogonal to preselection (delta = 2/101)")
    print(f"  traditional weak value     = {row.wv_traditional:.9f}")
    print(f"  projective conditional     = {row.projective_cond:+.6f}"
          f"   (convex: stays in [-1, 1])")
    print(f"  closed-form meter reading  = {row.wv_closed:.9f}")
    print(f"  extrapolated numeric       = {row.wv_numeric:.6f}")

    print(f"\n{'eps':>10}  {'E(B|f)/eps':>12}  {'success prob':>13}")
    setup = cfg.setup()
    for eps in (1e-2, 5e-3, 1e-3, 1e-4, 1e-5):
        table = exact_outcome_distribution(setup, eps)
        print(f"{eps:>10.0e}  {table.conditional_mean / eps:>12.4f}"
              f"  {table.total_success_prob:>13.3e}")

    print("\nat eps = 1e-2 the conditional mean saturates at the top meter")
    print("eigenvalue (0.5), so the ratio reads 50; the limit 100 emerges")
    print("only deep in the weak regime, at ever-rarer postselections.")


if __name__ == "__main__":
    main()
