"""
    Fourier extension of a nonperiodic function from equispaced samples.

    f(x) = 1/(60 - 59x) has a pole just outside x = 1, so a plain Fourier
    series on [-1, 1] converges badly. Extending to period 2T with T = 2
    and solving a truncated-SVD least-squares problem gives fast decay
    of the error with M.
"""

import numpy as np

from fourier_extension import EvalGrid, approximation_error, fe_approximation
from fourier_extension.functions import f5

T = 2.0
grid = EvalGrid(2**12, T)

print("   M     N    sup error")
for M in (50, 100, 200, 400):
    # oversample by 2: N = M/2
    N = M // 2
    s = fe_approximation(f5, T, N, M)
    print(f"{M:4d}  {N:4d}  {approximation_error(f5, s, grid):.3e}")

# the extension lives on [-T, T]; outside [-1, 1] nothing constrains it, and
# the least-squares fit can take very large values there
s = fe_approximation(f5, T, 100, 200)
x = np.array([-2.0, -1.5, -1.0, 0.0, 1.0, 1.5, 2.0])
for xi, v in zip(x, s(x)):
    print(f"x = {xi:+.1f}   |F(x)| = {abs(v):.3e}")
