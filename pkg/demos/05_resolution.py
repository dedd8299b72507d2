"""
    Resolution power: samples needed per unit frequency.

    R(omega) is the smallest M for which exp(i pi omega x) is recovered to
    accuracy delta. R/omega tends to a constant r that is at most T*eta,
    and smaller epsilon costs resolution.
"""

from fourier_extension import EvalGrid, SolverSpec, resolution, resolution_constant, theta

T, eta = 2.0, 2.0
curve = resolution_constant(T, eta, 1e-3, [20, 40, 60, 80], error_K=2**12)
for w, R in curve.points:
    print(f"omega = {w:5.1f}   R = {R:4d}   R/omega = {R / w:.3f}")
print(f"r = {curve.fitted_r:.3f}   (T eta = {T * eta})")

# a larger epsilon discards more of the ill-conditioned directions, so the
# same budget kappa* = 10 admits more modes: eta = M / Theta(M) drops and the
# function is resolved with fewer samples
M = 400
for eps in (1e-13, 1e-6):
    solver = SolverSpec(epsilon=eps)
    eta_eps = M / theta(T, M, 10, solver, grid=EvalGrid(2**15, T))
    R = resolution(60, 1e-3, T, eta_eps, solver, error_K=2**12)
    print(f"eps = {eps:.0e}: eta = {eta_eps:.2f}, R(60) = {R}")
