"""Daubechies masks, cascade samples and the frequency-side hypotheses.

Run with ``python demos/filters_and_hypotheses.py``.
"""
import numpy as np

from shearcert.mra1d import (
    FrameHypothesisParams,
    cascade,
    check_decay,
    check_inf_phi,
    daubechies_filter,
    find_beta,
    fit_decay_constant,
    psi_hat,
    wavelet_from_filter,
)

for N in (1, 2, 3):
    f = daubechies_filter(N)
    print(f"N={N}: mask={np.round(f.mask, 6)}, QMF residual {f.qmf_residual():.1e}")

# The cascade values sum to one and their integer translates are orthonormal.
phi = cascade(daubechies_filter(2), 10)
print("db2 scaling function: Riemann sum", phi.riemann_sum(), "support", phi.numerical_support())

# |phi_hat|^2 stays away from zero on [-1/2, 1/2]; for Haar the minimum is (2/pi)^2.
for N in (1, 2, 3):
    ok, low = check_inf_phi(cascade(daubechies_filter(N), 10))
    print(f"N={N}: min |phi_hat|^2 on [-1/2, 1/2] = {low:.4f}")
print("closed form for Haar:", (2 / np.pi) ** 2)

beta = find_beta(wavelet_from_filter(daubechies_filter(3), 10))
print("psi_hat bounded below on beta/2 <= |xi| <= beta for beta =", beta)

# Haar decays like 1/|xi| and fails a gamma = 5 bound; db10 passes with a fitted constant.
xi = np.linspace(-64, 64, 4097)
haar = check_decay(xi, psi_hat(daubechies_filter(1), xi), FrameHypothesisParams(5.5, 5.0), "wavelet")
print("Haar decay check:", haar.ok, "first violation at xi =", haar.first_violation)
params = FrameHypothesisParams(8.5, 8.0)
vals = psi_hat(daubechies_filter(10), xi)
K1 = fit_decay_constant(xi, vals, params, "wavelet")
db10 = check_decay(xi, vals, FrameHypothesisParams(8.5, 8.0, K1=K1), "wavelet")
print(f"db10 decay check with K1={K1:.3g}:", db10.ok)
