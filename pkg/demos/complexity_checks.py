"""
Replaying the convergence guarantees
====================================

A finished trace can be checked against the descent inequality, the
O(1/sqrt(N)) bound on the smallest direction norm (needs f*), and on flat
problems the O(1/N) bound and the Fejer-type distance inequality (need a
point q dominating every iterate).
"""

import numpy as np

from paretodescent import AdaptiveConfig, ArmijoConfig, LipschitzConfig, SolverConfig, solve
from paretodescent import diagnostics as dg
from paretodescent.instances import Rosenbrock, RosenbrockManifold

F = Rosenbrock.bicriteria()
M = RosenbrockManifold(1)
L = F.lipschitz_constant
x0 = np.array([-1.5, 3.0])

strategies = {
    "lipschitz": LipschitzConfig(L),
    "adaptive": AdaptiveConfig(zeta=0.5, L0=1.0, eta=0.5),
    # t_min below 2 omega1 (1 - delta) / L, so no accepted step is shorter
    "armijo": ArmijoConfig(t_min=1e-4),
}

for name, s in strategies.items():
    tr = solve(F, M, x0, SolverConfig(strategy=s))
    xi = dg.strategy_xi(s, L)
    q = F.dominating_pareto_point(tr.final_point)
    f_q = F.value(q)
    rho = dg.rho_for_strategy(s, tr.values[0], f_q)
    sqrt_rep = dg.check_sqrt_complexity(tr, F.f_star(), xi, s.nu)
    rate_rep = dg.check_rate_complexity(tr, M, q, f_q, 0.0, xi, s.nu, rho)
    res, d2 = dg.check_fejer(tr, M, q, 0.0, rho, f_q)
    print(f"{name:9s} it={tr.iter_count:5d}  descent={dg.verify_descent(tr, s.nu)}  "
          f"sqrt={sqrt_rep.holds} (c={sqrt_rep.bound_constant:.3g})  "
          f"rate={rate_rep.holds} (c={rate_rep.bound_constant:.3g})  "
          f"fejer={dg.fejer_holds(res, d2)}")
