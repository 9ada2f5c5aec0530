"""Independent reference solutions used to cross-check the library solvers.

The finite-difference oracle discretizes the single-node Hamiltonian
4 EC n^2 + V(phi) on a uniform phase grid with Dirichlet walls and solves
the tridiagonal eigenproblem directly.  It shares no code with the
plane-wave solver, so agreement between the two is a real check.
"""

import math

import numpy as np
from scipy.linalg import eigh_tridiagonal


def finite_difference_qubit_levels(ecj, ej, elfq, phix, span=8.0,
                                   n_grid=6001, k=8):
    """Lowest k levels (GHz) of the flux-qubit node on a Dirichlet grid."""
    phi = np.linspace(-span, span, n_grid)
    step = phi[1] - phi[0]
    kin = 4.0 * ecj / step**2
    potential = -ej * np.cos(phi - 2.0 * math.pi * phix) + 0.5 * elfq * phi**2
    diag = np.full(n_grid, 2.0 * kin) + potential
    off = np.full(n_grid - 1, -kin)
    vals = eigh_tridiagonal(diag, off, select="i", select_range=(0, k - 1))[0]
    return vals


def harmonic_levels(ec, el, k=10):
    """Exact levels (GHz) of 4 EC n^2 + EL phi^2 / 2."""
    nu = math.sqrt(8.0 * ec * el)
    return nu * (np.arange(k) + 0.5)


def hyperbola_levels(omega_os, delta_q, ip_na, phix, eps_per_phix):
    """Two-level doublet omega_os -+ sqrt(eps^2 + Delta_q^2) / 2 in GHz.

    eps_per_phix converts a bias offset in Phi0 units to GHz.
    """
    eps = eps_per_phix * (np.asarray(phix) - 0.5)
    split = np.sqrt(eps**2 + delta_q**2)
    return omega_os - 0.5 * split, omega_os + 0.5 * split


def origin_r_squared(x, y):
    """R^2 of the best through-origin line y = a x."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    slope = float(x @ y) / float(x @ x)
    ss_res = float(np.sum((y - slope * x) ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    return 1.0 - ss_res / ss_tot, slope
