"""Independent reference implementations used to check the library.

Everything here is deliberately written from first principles (textbook
equations of motion, direct integration, trajectory sampling, brute-force
enumeration) and stays off the code paths it is checking.
"""

import numpy as np
from scipy.linalg import expm

SM = np.array([[0, 1], [0, 0]], dtype=complex)  # |g><e| in the (g, e) basis
SP = SM.conj().T


def bloch_steady_excited(rabi: float, detuning: float = 0.0, gamma: float = 1.0) -> float:
    """Excited population from the 3-variable optical Bloch steady state.

    Bloch components (x, y, z), with z the inversion and (x, y) the real
    coherence quadratures, obey
        dx/dt = -gamma/2 x + detuning y
        dy/dt = -detuning x - gamma/2 y - rabi z
        dz/dt =  rabi y - gamma (z + 1)
    for H = detuning sp sm + rabi/2 (sm + sp) and decay gamma; the excited
    population is (1 + z) / 2.
    """
    A = np.array(
        [
            [-gamma / 2.0, detuning, 0.0],
            [-detuning, -gamma / 2.0, -rabi],
            [0.0, rabi, -gamma],
        ]
    )
    b = np.array([0.0, 0.0, gamma])
    x, y, z = np.linalg.solve(A, b)
    return (1.0 + z) / 2.0


def lindblad_rhs(H: np.ndarray, collapses, rho: np.ndarray) -> np.ndarray:
    """Direct entrywise evaluation of the master-equation generator."""
    out = -1j * (H @ rho - rho @ H)
    for rate, c in collapses:
        cd = c.conj().T
        cdc = cd @ c
        out += rate * (c @ rho @ cd - 0.5 * (cdc @ rho + rho @ cdc))
    return out


def rk4_integrate(L: np.ndarray, v0: np.ndarray, taus, h: float = 1e-3) -> np.ndarray:
    """Fixed-step classical RK4 on dv/dtau = L v, sampled at ``taus``."""
    out = np.empty((len(taus), len(v0)), dtype=complex)
    v = v0.astype(complex)
    t = 0.0
    for i, target in enumerate(taus):
        span = target - t
        if span > 0:
            n = max(1, int(np.ceil(span / h)))
            step = span / n
            for _ in range(n):
                k1 = L @ v
                k2 = L @ (v + 0.5 * step * k1)
                k3 = L @ (v + 0.5 * step * k2)
                k4 = L @ (v + step * k3)
                v = v + (step / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
            t = target
        out[i] = v
    return out


def lorentzian_convolve(ext_grid, ext_values, coherent_weight, half_width, targets):
    """Numerically convolve a gridded spectrum with a Lorentzian filter.

    The elastic delta component convolves to a pure Lorentzian and is added
    analytically; everything else is trapezoid quadrature on ``ext_grid``.
    """
    kernel_norm = half_width / np.pi  # (G/2)/pi / ((w)^2 + (G/2)^2) integrates to 1
    out = np.empty(len(targets))
    for i, w in enumerate(targets):
        kern = kernel_norm / ((w - ext_grid) ** 2 + half_width**2)
        out[i] = np.trapezoid(ext_values * kern, ext_grid)
    out += coherent_weight * kernel_norm / (np.asarray(targets) ** 2 + half_width**2)
    return out


def thermal_factorial_moment(nbar: float, order: int, cutoff: int = 400) -> float:
    """<n(n-1)...(n-order+1)> for a thermal state, by direct enumeration."""
    p = nbar / (1.0 + nbar)
    ks = np.arange(cutoff)
    probs = (1.0 - p) * p**ks
    falling = np.ones(cutoff)
    for j in range(order):
        falling *= ks - j
    return float(np.sum(probs * np.clip(falling, 0.0, None)))


# ---------------------------------------------------------------------------
# batched quantum-jump Monte-Carlo estimate of
#   G(tau) = Tr[observe e^{L tau}(jump rho_ss jump^dag)]
# and the populations needed to normalize it.
# ---------------------------------------------------------------------------


def _evolve_batch(psis, U, jump_ops, rng, nsteps, observe=None):
    """March a batch of trajectories; optionally record <observe> each step."""
    record = None
    if observe is not None:
        record = np.empty((nsteps + 1, len(psis)))
        record[0] = np.einsum("ni,ij,nj->n", psis.conj(), observe, psis).real
    for k in range(nsteps):
        psis = psis @ U.T
        norms2 = np.einsum("ni,ni->n", psis.conj(), psis).real
        jumped = rng.random(len(psis)) > norms2
        if jumped.any():
            idx = np.nonzero(jumped)[0]
            weights = np.empty((len(idx), len(jump_ops)))
            for ci, c in enumerate(jump_ops):
                post = psis[idx] @ c.T
                weights[:, ci] = np.einsum("ni,ni->n", post.conj(), post).real
            weights /= weights.sum(axis=1, keepdims=True)
            choice = (rng.random(len(idx))[:, None] > np.cumsum(weights, axis=1)).sum(
                axis=1
            )
            for ci, c in enumerate(jump_ops):
                sel = idx[choice == ci]
                if len(sel):
                    psis[sel] = psis[sel] @ c.T
        norms2 = np.einsum("ni,ni->n", psis.conj(), psis).real
        psis = psis / np.sqrt(norms2)[:, None]
        if record is not None:
            record[k + 1] = np.einsum("ni,ij,nj->n", psis.conj(), observe, psis).real
    return psis, record


def mc_correlator(
    H,
    collapses,
    jump,
    observe,
    taus,
    n_traj=3000,
    t_burn=15.0,
    dt=2e-3,
    seed=1234,
):
    """Trajectory-sampling estimate of the delayed correlator.

    Returns (G, G_standard_error, <jump^dag jump>, <observe>), all estimated
    from the same steady ensemble reached by burn-in from the ground state.
    """
    d = H.shape[0]
    rng = np.random.default_rng(seed)
    Heff = H - 0.5j * sum(rate * c.conj().T @ c for rate, c in collapses)
    U = expm(-1j * Heff * dt)
    jump_ops = [np.sqrt(rate) * c for rate, c in collapses]
    psis = np.zeros((n_traj, d), dtype=complex)
    psis[:, 0] = 1.0
    psis, _ = _evolve_batch(psis, U, jump_ops, rng, int(round(t_burn / dt)))
    obs_mean = float(
        np.einsum("ni,ij,nj->n", psis.conj(), observe, psis).real.mean()
    )
    collapsed = psis @ jump.T
    p = np.einsum("ni,ni->n", collapsed.conj(), collapsed).real
    n_jump = float(p.mean())
    keep = p > 0
    collapsed = collapsed[keep] / np.sqrt(p[keep])[:, None]
    weights = p[keep]
    nsteps = int(round(max(taus) / dt))
    _, record = _evolve_batch(collapsed, U, jump_ops, rng, nsteps, observe=observe)
    idx = np.round(np.asarray(taus) / dt).astype(int)
    samples = np.zeros((len(idx), len(p)))
    samples[:, keep] = weights[None, :] * record[idx]
    G = samples.mean(axis=1)
    se = samples.std(axis=1) / np.sqrt(samples.shape[1])
    return G, se, n_jump, obs_mean
