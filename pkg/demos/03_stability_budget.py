"""
    Choosing N from a stability budget.

    Theta(M; kappa*) is the largest N whose condition number stays below
    kappa* log M. It grows linearly in M with a slope nu that grows with T,
    until T is so large that N = M is already stable enough (saturation).
"""

from fourier_extension import fit_nu, saturation_check, theta_curve

Ms = range(100, 401, 50)
kappa_star = 25

for T in (1.5, 2.0, 3.0, 6.0):
    c = theta_curve(T, Ms, kappa_star, grid_K=2**12)
    fit = fit_nu(c, (0, float("inf")))
    sat = saturation_check(T, kappa_star, 200)
    print(f"T = {T:3.1f}  Theta = {c.values.tolist()}  nu = {fit.slope:.3f}  saturated: {sat}")

# nu / T is roughly the same for the non-saturated values: N/T, not N,
# is what the budget fixes
