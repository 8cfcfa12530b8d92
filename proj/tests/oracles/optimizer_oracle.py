"""Grid-scan oracle for the Ising control problem at delta = 0.1.

Scans lambda over 3001 uniform points in [0, 3] with numpy and reports the
maximum ground-state A-C concurrence and its location. The value at the
maximizer is re-evaluated in 50-digit mpmath.
"""
import numpy as np

from ising_oracle import concurrence, concurrence_mp, ising


def ground_ac(delta, lam):
    e, v = np.linalg.eigh(ising(delta, lam))
    g = v[:, 0].reshape(2, 2, 2)
    rho = np.einsum("abc,dbe->acde", g, g.conj()).reshape(4, 4)
    return concurrence(rho), e[1] - e[0]


if __name__ == "__main__":
    grid = np.linspace(0.0, 3.0, 3001)
    vals = [ground_ac(0.1, lam)[0] for lam in grid]
    k = int(np.argmax(vals))
    print(f"max {vals[k]!r} at lambda {grid[k]!r} (index {k})")
    print(f"mpmath at maximizer {float(concurrence_mp(ising(0.1, grid[k])))!r}")
    print(f"C(0) {vals[0]!r} C(1.5) {vals[1500]!r}")
