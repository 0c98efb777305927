#!/usr/bin/env python3
"""Reference profile for the shock / entropy-wave interaction benchmark.

The 2D setup is uniform in y, so a fine 1D first-order finite-volume solve
(Rusanov flux, 10,000 cells) to t = 0.178 provides an independent reference
for the y = 0.5 density slice.  Output: data/shock_entropy_ref.csv (x, rho).
"""

import csv
import os

import numpy as np

GAMMA = 1.4
N = 10000
T_END = 0.178
CFL = 0.4


def primitive_to_conserved(rho, u, p):
    return np.array([rho, rho * u, p / (GAMMA - 1) + 0.5 * rho * u * u])


def flux(U):
    rho, mom, E = U
    u = mom / rho
    p = (GAMMA - 1) * (E - 0.5 * rho * u * u)
    return np.array([mom, mom * u + p, (E + p) * u])


def wave_speed(U):
    rho, mom, E = U
    u = mom / rho
    p = (GAMMA - 1) * (E - 0.5 * rho * u * u)
    return abs(u) + np.sqrt(GAMMA * p / rho)


def main():
    dx = 1.0 / N
    x = (np.arange(N) + 0.5) * dx
    U = np.empty((3, N))
    left = primitive_to_conserved(3.857143, 2.629369, 10.333333)
    for i in range(N):
        if x[i] < 0.125:
            U[:, i] = left
        else:
            U[:, i] = primitive_to_conserved(
                1.0 + 0.2 * np.sin(16 * np.pi * x[i]), 0.0, 1.0)

    t = 0.0
    while t < T_END:
        # ghost cells: fixed supersonic inflow, zero-gradient outflow
        Ug = np.concatenate([left[:, None], U, U[:, -1:]], axis=1)
        u_phys = Ug[1] / Ug[0]
        p_phys = (GAMMA - 1) * (Ug[2] - 0.5 * Ug[0] * u_phys**2)
        a = np.abs(u_phys) + np.sqrt(GAMMA * p_phys / Ug[0])
        dt = min(CFL * dx / a.max(), T_END - t)

        F = np.array([flux(Ug[:, i]) for i in range(N + 2)]).T
        alpha = np.maximum(a[:-1], a[1:])
        Fhat = 0.5 * (F[:, :-1] + F[:, 1:]) - 0.5 * alpha * (Ug[:, 1:] - Ug[:, :-1])
        U -= dt / dx * (Fhat[:, 1:] - Fhat[:, :-1])
        t += dt

    out = os.path.join(os.path.dirname(__file__), "..", "data",
                       "shock_entropy_ref.csv")
    os.makedirs(os.path.dirname(out), exist_ok=True)
    with open(out, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["x", "rho"])
        for i in range(N):
            w.writerow([f"{x[i]:.6f}", f"{U[0, i]:.8f}"])
    print(f"wrote {out} at t = {T_END}")


if __name__ == "__main__":
    main()
