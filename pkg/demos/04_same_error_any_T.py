"""
    With N taken from the stability budget, the error hardly depends on T.

    Larger T allows more modes for the same kappa*, but each mode covers a
    longer period; the two effects cancel. Saturated T (here 6) lose out.
"""

from fourier_extension import budgeted_error
from fourier_extension.functions import f5

M = 300
for T in (1.25, 1.5, 2.0, 3.0, 6.0):
    p = budgeted_error(f5, T, M, 25, grid_K=2**12, error_K=2**12)
    print(f"T = {T:4.2f}  N = {p.N:3d}  error = {p.error:.3e}")
