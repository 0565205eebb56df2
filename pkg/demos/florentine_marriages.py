"""The Florentine marriages worked example, end to end.

Fits nothing: the two-star model coefficients are the classical fitted
values.  Everything downstream is computed by the library: the network
statistics, the mean-field map and its fixed point, the closed-form
distance bound between the fitted model and the matching Erdos-Renyi
law, and a seeded simulation of the fitted model for comparison.
"""

import numpy as np

from gibbsbound import (
    EDGE,
    TWOSTAR,
    ChainState,
    ErgmModel,
    PhiPoly,
    bound_twostar,
    florentine_graph,
    glauber_step,
    injection_count,
    solve_fixed_points,
)
from gibbsbound.dynamics import burn_in_default
from gibbsbound.harness import florentine_demo

report = florentine_demo()
print(report)
print()

graph, names = florentine_graph()
deg = graph.degrees()
print("families by marriage degree:")
for v in np.argsort(-deg):
    if deg[v]:
        print(f"  {names[v]:<13} {int(deg[v])}")
print(f"  (isolated: {', '.join(names[v] for v in range(16) if deg[v] == 0)})")
print()

beta1, beta2 = -1.6339, 0.0098
model = ErgmModel(16, [(EDGE, beta1), (TWOSTAR, beta2)])
fp = solve_fixed_points(PhiPoly.from_model(model))[0]
print(f"mean-field fixed point a* = {fp.a_star:.6f} (phi' = {fp.phi_prime:.4f}, "
      f"{'stable' if fp.stable else 'unstable'})")
print(f"two-star bound on |E h(X) - E h(Z)| / ||Delta h||: "
      f"{bound_twostar(16, beta1, beta2, fp).value:.6f}")
print()

# simulate the fitted model and compare its edge density with a*
rng = np.random.default_rng(1415)
state = ChainState.start(model, rng=rng)
for _ in range(burn_in_default(model)):
    glauber_step(model, state)
samples = []
for _ in range(4000):
    for _ in range(model.size):
        glauber_step(model, state)
    samples.append(state.x.mean())
dens = float(np.mean(samples))
print(f"simulated edge density of the fitted model: {dens:.4f}")
print(f"Erdos-Renyi reference parameter:            {fp.a_star:.4f}")
print(f"observed network density:                   {graph.num_edges / 120:.4f}")
print()
print(f"two-star injections in the data: {injection_count(TWOSTAR, graph)} "
      "(the original analysis reports 100; the canonical data gives 94)")
