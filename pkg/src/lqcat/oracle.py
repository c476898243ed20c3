"""Brute-force ground truth for the catalysis circuit.

Two independent routes are provided:

* the heralded circuit is simulated exactly per total-photon-number
  sector (the beam-splitter generator conserves the sector, so the only
  truncation is in the input squeezed-vacuum sum), and

* the teleportation fidelity is computed by Gauss-Laguerre quadrature of
  the characteristic-function overlap, which for twin-Fock-diagonal
  resources reduces to radial displacement matrix elements.

Neither route shares code with the published closed forms in
lqcat.formulas, so agreement is a real cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import expm
from scipy.special import eval_genlaguerre, gammaln, roots_laguerre

from .model import (
    DEFAULT_EPS_TRUNC,
    CatalysisParams,
    QuadratureError,
    SchmidtSpectrum,
    choose_truncation,
    normalize_weights,
    tail_estimate,
)

DEFAULT_QUAD_POINTS = 120
QUADRATURE_RTOL = 1e-9

SCHMIDT_DIAGONAL_TOL = 1e-12


@dataclass(frozen=True)
class SectorUnitary:
    """Beam-splitter unitary restricted to one total-photon-number sector.

    Acts on the basis {|m-j, j>} of (system, ancilla), j = 0..m.
    """

    total_photons: int
    matrix: np.ndarray

    def element(self, sys_out: int, anc_out: int, sys_in: int, anc_in: int) -> float:
        m = self.total_photons
        if sys_out + anc_out != m or sys_in + anc_in != m:
            raise ValueError("photon number not conserved within the sector")
        return float(self.matrix[anc_out, anc_in])


@lru_cache(maxsize=4096)
def bs_sector(theta: float, m: int) -> SectorUnitary:
    """Exact exp[theta (a+c - a c+)] in the m-photon sector.

    The generator is the (m+1)-dimensional antisymmetric matrix with
    entries sqrt(j (m - j + 1)) coupling ancilla occupations j-1 <-> j,
    so the exponential carries no truncation error.
    """
    if m < 0:
        raise ValueError(f"sector photon number must be >= 0, got {m}")
    gen = np.zeros((m + 1, m + 1))
    for j in range(1, m + 1):
        # a+ c couples |m-j, j> -> |m-j+1, j-1>
        amp = math.sqrt(j * (m - j + 1))
        gen[j - 1, j] = amp
        gen[j, j - 1] = -amp
    matrix = expm(theta * gen)
    matrix.setflags(write=False)
    return SectorUnitary(total_photons=m, matrix=matrix)


@dataclass(frozen=True)
class TruncatedTwoModeState:
    """Two-mode amplitudes c_mn over |m>_a |n>_b up to a cutoff."""

    amps: np.ndarray
    norm2: float

    def schmidt_spectrum(self, tail_bound: float = 0.0) -> SchmidtSpectrum:
        """Extract the twin-Fock weights, asserting Schmidt-diagonal form."""
        offdiag = self.amps - np.diag(np.diag(self.amps))
        if np.max(np.abs(offdiag), initial=0.0) > SCHMIDT_DIAGONAL_TOL:
            raise ValueError("state is not diagonal in the twin-Fock basis")
        spectrum, _ = normalize_weights(np.diag(self.amps), tail_bound)
        return spectrum


def _catalysis_factor(theta: float, n: int) -> float:
    """Amplitude <n,1|B|n,1> that mode a keeps n photons while the ancilla
    photon passes through, from the exact (n+1)-photon sector unitary."""
    return float(bs_sector(theta, n + 1).matrix[1, 1])


def catalyze_oracle(params: CatalysisParams, N: int | None = None,
                    eps: float = DEFAULT_EPS_TRUNC):
    """Simulate the heralded circuit; returns (SchmidtSpectrum, p_cd).

    Builds the unnormalized projected amplitudes
    w~_n = tanh(r)^n / cosh(r) * <n,1|B1|n,1> * <n,1|B2|n,1>
    per sector and reads p_cd off the squared norm.
    """
    if N is None:
        N = choose_truncation(params, eps)
    theta1 = math.acos(params.t1)
    theta2 = math.acos(params.t2)
    u = math.tanh(params.r)
    n = np.arange(N + 1)
    g1 = np.array([_catalysis_factor(theta1, k) for k in range(N + 1)])
    g2 = np.array([_catalysis_factor(theta2, k) for k in range(N + 1)])
    raw = u**n / math.cosh(params.r) * g1 * g2
    state = TruncatedTwoModeState(amps=np.diag(raw), norm2=float(np.sum(raw**2)))
    q = params.t1 * params.t2 * u
    spectrum = state.schmidt_spectrum()
    spectrum = SchmidtSpectrum(
        spectrum.weights, N, tail_estimate(spectrum.weights, q)
    )
    return spectrum, state.norm2


def displacement_element(m: int, n: int, s: float) -> float:
    """Radial factor R_mn(s) of the displacement matrix element at s = |z|^2.

    R_mn(s) = sqrt(min!/max!) s^(|m-n|/2) e^(-s/2) L_min^(|m-n|)(s), so that
    <m|D(z*)|n><m|D(z)|n> = R_mn(s)^2 with all phases cancelled.
    """
    if m < 0 or n < 0:
        raise ValueError("photon numbers must be >= 0")
    if s < 0:
        raise ValueError(f"s must be >= 0, got {s}")
    lo, hi = min(m, n), max(m, n)
    d = hi - lo
    if s == 0.0:
        return 1.0 if d == 0 else 0.0
    log_pref = 0.5 * (gammaln(lo + 1) - gammaln(hi + 1)) + 0.5 * d * math.log(s) - 0.5 * s
    return math.exp(log_pref) * float(eval_genlaguerre(lo, d, s))


@lru_cache(maxsize=16)
def _laguerre_rule(q: int):
    nodes, weights = roots_laguerre(q)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


@lru_cache(maxsize=32)
def _overlap_table(N: int, q: int) -> np.ndarray:
    """I[m, n] = integral_0^inf e^(-s) R_mn(s)^2 ds by q-node Gauss-Laguerre.

    R is generated by a three-term recurrence on the normalized elements
    themselves (|R| <= 1), so the table is overflow-free for any N.
    """
    s, w = _laguerre_rule(q)
    d = np.arange(N + 1, dtype=float)[:, None]
    # R for pairs (0, d): sqrt(1/d!) s^(d/2) e^(-s/2)
    log0 = -0.5 * gammaln(d + 1) + 0.5 * d * np.log(s)[None, :] - 0.5 * s[None, :]
    r_curr = np.exp(log0)
    r_prev = np.zeros_like(r_curr)
    table = np.zeros((N + 1, N + 1))
    for k in range(N + 1):
        # row k: r_curr[di] is R for the pair (k, k + di)
        contrib = (r_curr**2) @ w
        di = np.arange(N + 1 - k)
        table[k, k + di] = contrib[di]
        table[k + di, k] = contrib[di]
        if k == N:
            break
        a = (2 * k + d + 1 - s[None, :]) / np.sqrt((k + 1) * (k + d + 1))
        b = np.sqrt(k * (k + d) / ((k + 1) * (k + d + 1)))
        r_prev, r_curr = r_curr, a * r_curr - b * r_prev
    table.setflags(write=False)
    return table


def _table_for(N: int, q: int) -> np.ndarray:
    # Round the table size up so nearby truncations share a cache entry.
    size = max(64, 1 << (N - 1).bit_length())
    return _overlap_table(size, q)


def cf_fidelity_oracle(spectrum: SchmidtSpectrum,
                       quad_points: int = DEFAULT_QUAD_POINTS) -> float:
    """Teleportation fidelity by quadrature of the CF overlap.

    F = sum_{m,n} w_m w_n integral_0^inf e^(-s) R_mn(s)^2 ds, evaluated at
    quad_points Gauss-Laguerre nodes and re-evaluated at twice as many as
    a convergence check.
    """
    if quad_points < 2:
        raise ValueError(f"quad_points must be >= 2, got {quad_points}")
    w = spectrum.weights
    N = len(w) - 1
    f1 = float(w @ _table_for(N, quad_points)[: N + 1, : N + 1] @ w)
    f2 = float(w @ _table_for(N, 2 * quad_points)[: N + 1, : N + 1] @ w)
    if abs(f2 - f1) > QUADRATURE_RTOL * max(1.0, abs(f2)):
        raise QuadratureError(
            f"fidelity quadrature not converged: {f1} vs {f2} "
            f"at {quad_points}/{2 * quad_points} nodes"
        )
    return f2
