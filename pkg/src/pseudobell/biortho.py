"""Two-level pseudo-Hermitian system: eigenbases, metric, ladder operators.

The Hamiltonian family is

    H = [[ r e^{i beta},  s ],
         [ t,             r e^{-i beta} ]]

with real r, s, t, beta and s*t > 0.  Its eigenvalues
r cos(beta) +/- sqrt(st) cos(alpha) are real as long as
|r sin beta| <= sqrt(st), where the mixing angle alpha is defined by

    sin(alpha) = r sin(beta) / sqrt(st).

The right/left eigenvectors form a biorthonormal pair {|psi_k>, |phi_k>}
with <phi_i|psi_j> = delta_ij, and the metric eta = sum |phi_k><phi_k|
intertwines H^dag = eta H eta^{-1}.  For s != t the eigenvectors carry the
asymmetry ratio sqrt(t/s) in their second component; at s = t they reduce
to the familiar (e^{+i a/2}, e^{-i a/2})/sqrt(2 cos a) form.

Because all entanglement figures are parameterized by alpha alone, a basis
can also be built directly from alpha (``basis_from_alpha``), bypassing
(r, s, t, beta).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

TAU = 2.0 * math.pi

#: below this |cos alpha| the 1/sqrt(2 cos alpha) normalization blows up
DEGENERACY_TOL = 1e-10


class DegenerateSpectrum(ValueError):
    """Raised at the spectral degeneracy boundary |r sin beta| = sqrt(st)."""


class NonRealRegime(ValueError):
    """Raised when |r sin beta| > sqrt(st) (complex-conjugate eigenvalues)."""


@dataclass(frozen=True)
class SystemParams:
    """Hamiltonian parameters (r, s, t, beta); beta in radians."""

    r: float
    s: float
    t: float
    beta: float

    def __post_init__(self) -> None:
        if self.s * self.t <= 0:
            raise ValueError("require s*t > 0, otherwise alpha is undefined")


@dataclass(frozen=True)
class BiorthoBasis:
    """Biorthonormal eigenpair {psi_k, phi_k} with metric eta, eta^{-1}."""

    alpha: float
    psi0: np.ndarray
    psi1: np.ndarray
    phi0: np.ndarray
    phi1: np.ndarray
    eta: np.ndarray = field(repr=False)
    eta_inv: np.ndarray = field(repr=False)

    def vector(self, family: str, level: int) -> np.ndarray:
        if family not in ("psi", "phi"):
            raise ValueError(f"unknown family {family!r}")
        if level not in (0, 1):
            raise ValueError(f"level must be 0 or 1, got {level}")
        return getattr(self, f"{family}{level}")


def hamiltonian(p: SystemParams) -> np.ndarray:
    """The literal 2x2 matrix of the two-level family."""
    return np.array(
        [[p.r * np.exp(1j * p.beta), p.s],
         [p.t, p.r * np.exp(-1j * p.beta)]],
        dtype=complex,
    )


def _mixing_angle(p: SystemParams) -> float:
    root = math.sqrt(p.s * p.t)
    ratio = p.r * math.sin(p.beta) / root
    if abs(ratio) > 1.0:
        raise NonRealRegime(
            f"|r sin beta| = {abs(p.r * math.sin(p.beta)):.6g} exceeds "
            f"sqrt(st) = {root:.6g}; spectrum is not real")
    return math.asin(ratio)


def basis_from_alpha(alpha: float, skew: float = 1.0) -> BiorthoBasis:
    """Build the biorthonormal basis at a given mixing angle.

    Parameters
    ----------
    alpha:
        Mixing angle in radians.  Reduced modulo 2*pi internally, so
        sweeps over [0, 2*pi] and beyond stay consistent.
    skew:
        Asymmetry ratio sqrt(t/s); 1 for the symmetric (s = t) family.

    Raises
    ------
    DegenerateSpectrum
        When |cos alpha| < 1e-10 and the normalization diverges.
    """
    folded = math.remainder(alpha, TAU)
    cos_a = math.cos(folded)
    if abs(cos_a) < DEGENERACY_TOL:
        raise DegenerateSpectrum(
            f"cos(alpha) = {cos_a:.3e} at alpha = {alpha:.6g}; "
            "the biorthonormal basis is undefined at the degeneracy boundary")
    norm = 1.0 / np.sqrt(complex(2.0 * cos_a))
    half = np.exp(0.5j * folded)
    k = skew
    psi0 = norm * np.array([half, k / half], dtype=complex)
    psi1 = norm * np.array([1 / half, -k * half], dtype=complex)
    phi0 = norm * np.array([1 / half, half / k], dtype=complex)
    phi1 = norm * np.array([half, -1 / (k * half)], dtype=complex)
    eta = np.outer(phi0, phi0.conj()) + np.outer(phi1, phi1.conj())
    eta_inv = np.outer(psi0, psi0.conj()) + np.outer(psi1, psi1.conj())
    return BiorthoBasis(alpha=alpha, psi0=psi0, psi1=psi1, phi0=phi0, phi1=phi1,
                        eta=eta, eta_inv=eta_inv)


def eigenbasis(p: SystemParams) -> BiorthoBasis:
    """Biorthonormal eigenbasis of H(p) and H(p)^dag.

    alpha is the principal arcsin of r sin(beta)/sqrt(st).  Raises
    DegenerateSpectrum at the |r sin beta| = sqrt(st) boundary and
    NonRealRegime beyond it.
    """
    alpha = _mixing_angle(p)
    skew = math.sqrt(p.t / p.s) if p.s > 0 else -math.sqrt(p.t / p.s)
    return basis_from_alpha(alpha, skew=skew)


def check_pseudo_hermiticity(p: SystemParams) -> float:
    """Max-abs residual of H^dag - eta H eta^{-1} for the eigenbasis metric."""
    basis = eigenbasis(p)
    h = hamiltonian(p)
    residual = h.conj().T - basis.eta @ h @ basis.eta_inv
    return float(np.max(np.abs(residual)))


@dataclass(frozen=True)
class LadderOps:
    """Pseudo-fermionic ladder operators, truncated to the two-level sector.

    b annihilates psi0 and lowers psi1 -> psi0; b_tilde does the same in
    the phi family.  b_sharp is the eta-pseudo-adjoint eta^{-1} b^dag eta
    and b_tilde_sharp = b^dag.
    """

    b: np.ndarray
    b_sharp: np.ndarray
    b_tilde: np.ndarray
    b_tilde_sharp: np.ndarray


def ladder_ops(basis: BiorthoBasis) -> LadderOps:
    b = np.outer(basis.psi0, basis.phi1.conj())
    b_sharp = np.outer(basis.psi1, basis.phi0.conj())
    b_tilde = np.outer(basis.phi0, basis.psi1.conj())
    b_tilde_sharp = np.outer(basis.phi1, basis.psi0.conj())
    return LadderOps(b=b, b_sharp=b_sharp, b_tilde=b_tilde, b_tilde_sharp=b_tilde_sharp)


# -- key-value config files -------------------------------------------------
#
# One "key = value" pair per line, '#' starts a comment.  Site i is set
# either by alpha<i> alone or by the full quadruple r<i>, s<i>, t<i>, beta<i>.


def parse_config(text: str) -> dict[str, float]:
    """Parse a key-value config into a {key: float} mapping."""
    out: dict[str, float] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line {lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        try:
            out[key.strip()] = float(value.strip())
        except ValueError as exc:
            raise ValueError(f"config line {lineno}: bad number {value.strip()!r}") from exc
    return out


def bases_from_config(cfg: dict[str, float], n_sites: int) -> list[BiorthoBasis]:
    """Build one basis per site from a parsed config mapping."""
    bases = []
    for i in range(1, n_sites + 1):
        if f"alpha{i}" in cfg:
            bases.append(basis_from_alpha(cfg[f"alpha{i}"]))
            continue
        quad = [f"r{i}", f"s{i}", f"t{i}", f"beta{i}"]
        if all(k in cfg for k in quad):
            p = SystemParams(cfg[quad[0]], cfg[quad[1]], cfg[quad[2]], cfg[quad[3]])
            bases.append(eigenbasis(p))
            continue
        raise ValueError(
            f"site {i}: config needs either alpha{i} or all of r{i}, s{i}, t{i}, beta{i}")
    return bases
