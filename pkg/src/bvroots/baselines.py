"""Frozen regression baselines for the non-constructive bound checks.

The uniform bounds certified by the library have no explicit constants, so
each check compares a measured functional against a value recorded once at a
fixed configuration.  Baselines live here so reruns and the command-line
verifier agree on them.
"""

# Jump-functional tail of the truncated disk field: max over the threshold
# ladder of fraction(T) * T for disks(16), r = 2, K = 64, spacing 1/64.
DISKS16_TAIL_MAX_PRODUCT = 0.2616

# bv_total / ||f||_{C^{2,1}}^(1/2) for f(z) = z on [-1,1]^2 at resolution 256
# with the unit-direction axis cut (K = 16 scan, candidate j = 0).
RADICAL_Z_BOUND_RATIO = 4.6756

# Weak-norm-to-driver ratio ceiling for the 1D radical checks on the builtin
# catalog (measured about 0.7071 for f(t) = t and f(t) = t^2).
GG_RATIO_CEILING = 0.75

# Tracked-root Sobolev ratio ceiling for Z^2 - t at p = 1 (measured 1.4129).
SOBOLEV_SQRT_RATIO_CEILING = 1.48
