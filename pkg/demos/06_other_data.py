"""
    Other data models: jittered, logarithmic, Fourier coefficients and
    mapped Chebyshev nodes.

    For mapped Chebyshev nodes no oversampling is needed and a smaller T is
    better, in contrast to equispaced data.
"""

from fourier_extension import EvalGrid, approximation_error, fe_approximation, theta
from fourier_extension.functions import f4

T = 2.0
for kind in ("jittered", "logarithmic", "fourier"):
    N = theta(T, 200, 10, data=kind)
    s = fe_approximation(f4, T, N, 200, data=kind)
    print(f"{kind:12s} Theta(200) = {N:3d}  error = {approximation_error(f4, s, EvalGrid(2**12, T)):.3e}")

M = 200
for T in (1.25, 2.0):
    s = fe_approximation(f4, T, M, M, data="mapped-cheb")
    print(f"mapped Chebyshev, T = {T}: error = {approximation_error(f4, s, EvalGrid(2**12, T)):.3e}")
