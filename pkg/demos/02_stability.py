"""
    Condition number and numerical defect constant.

    kappa: how much a unit perturbation of one sample can move the
    approximation (sup norm on [-1, 1]).
    lambda: how far the computed operator is from a projection.
    mu = (lambda/kappa)(log M/M) stays near 1e-13, whatever eta is.
"""

from fourier_extension import EvalGrid, FEConfig, diagnose

T = 2.0
grid = EvalGrid(2**12, T)

print(" eta     M     kappa       lambda      mu")
for eta in (1.0, 2.0, 4.0):
    for M in (100, 200, 400):
        rec = diagnose(FEConfig.from_eta(T, eta, M), grid=grid)
        print(f"{eta:4.1f}  {M:4d}  {rec.kappa:10.3e}  {rec.lam:10.3e}  {rec.mu:9.2e}")

# smaller eta (more modes per sample) buys accuracy at the cost of stability
