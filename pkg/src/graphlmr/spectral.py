"""Laplacian eigenbasis, graph Fourier transform, and bandlimited signals."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "SpectralBasis",
    "eigendecompose",
    "gft",
    "igft",
    "project_bandlimited",
    "random_bandlimited",
]

# Relative slack on the band cutoff so eigenvalues that are equal to omega up
# to eigensolver round-off land inside the band.
_CUTOFF_RTOL = 1e-9


@dataclass(frozen=True, eq=False)
class SpectralBasis:
    """Eigendecomposition of a graph Laplacian.

    ``eigenvalues`` is ascending; column ``k`` of ``eigenvectors`` is the unit
    eigenvector for ``eigenvalues[k]``.  Arrays are read-only.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.eigenvalues, dtype=np.float64)
        vecs = np.asarray(self.eigenvectors, dtype=np.float64)
        if vals.ndim != 1 or vecs.ndim != 2 or vecs.shape != (vals.size, vals.size):
            raise ValueError("eigenvalues must be (n,), eigenvectors (n, n)")
        vals = vals.copy()
        vecs = vecs.copy()
        vals.flags.writeable = False
        vecs.flags.writeable = False
        object.__setattr__(self, "eigenvalues", vals)
        object.__setattr__(self, "eigenvectors", vecs)

    @property
    def n(self) -> int:
        return self.eigenvalues.size

    def band_mask(self, omega: float) -> np.ndarray:
        """Boolean mask of eigenvalues inside the band ``[0, omega]``.

        The comparison is inclusive with slack ``1e-9 * lambda_max`` so a
        cutoff placed exactly on an eigenvalue keeps it.
        """
        if omega < 0:
            raise ValueError("band cutoff must be nonnegative")
        lam_max = float(self.eigenvalues[-1]) if self.n else 0.0
        eps = _CUTOFF_RTOL * lam_max if lam_max > 0 else 0.0
        return self.eigenvalues <= omega + eps

    def band_dim(self, omega: float) -> int:
        return int(self.band_mask(omega).sum())

    def band_vectors(self, omega: float) -> np.ndarray:
        """Columns spanning the band, shape (n, band_dim)."""
        return self.eigenvectors[:, self.band_mask(omega)]


def eigendecompose(laplacian: np.ndarray) -> SpectralBasis:
    """Full symmetric eigendecomposition of a (dense) Laplacian.

    Raises ``ValueError`` for non-square or non-symmetric input; LAPACK
    convergence failures propagate as ``numpy.linalg.LinAlgError``.
    """
    lap = np.asarray(laplacian, dtype=np.float64)
    if lap.ndim != 2 or lap.shape[0] != lap.shape[1]:
        raise ValueError(f"laplacian must be square, got shape {lap.shape}")
    scale = float(np.abs(lap).max()) if lap.size else 0.0
    if not np.allclose(lap, lap.T, rtol=0.0, atol=1e-10 * max(scale, 1.0)):
        raise ValueError("laplacian must be symmetric")
    vals, vecs = np.linalg.eigh(lap)
    return SpectralBasis(eigenvalues=vals, eigenvectors=vecs)


def _check_length(x: np.ndarray, n: int, what: str) -> np.ndarray:
    arr = np.asarray(x, dtype=np.float64)
    if arr.shape != (n,):
        raise ValueError(f"{what} must have shape ({n},), got {arr.shape}")
    return arr


def gft(basis: SpectralBasis, signal: np.ndarray) -> np.ndarray:
    """Graph Fourier transform: coefficients ``<signal, u_k>``."""
    f = _check_length(signal, basis.n, "signal")
    return basis.eigenvectors.T @ f


def igft(basis: SpectralBasis, spectrum: np.ndarray) -> np.ndarray:
    """Inverse transform; exact round-trip with :func:`gft` up to float error."""
    s = _check_length(spectrum, basis.n, "spectrum")
    return basis.eigenvectors @ s


def project_bandlimited(
    basis: SpectralBasis, omega: float, signal: np.ndarray
) -> np.ndarray:
    """Orthogonal projection onto the span of eigenvectors with eigenvalue <= omega."""
    f = _check_length(signal, basis.n, "signal")
    ub = basis.band_vectors(omega)
    return ub @ (ub.T @ f)


def random_bandlimited(
    basis: SpectralBasis,
    omega: float,
    rng: np.random.Generator,
    norm: float = 1.0,
    offband_energy: float | None = None,
) -> np.ndarray:
    """Random signal with prescribed 2-norm, bandlimited to ``[0, omega]``.

    In-band coefficients are iid standard normal, then rescaled.  With
    ``offband_energy = e`` in ``[0, 1)`` the result carries energy fraction
    ``e`` in the orthogonal complement (an independent unit-energy draw),
    so ``||f||^2 = norm^2`` still holds exactly; ``e = 0`` or ``None`` means
    strictly bandlimited.
    """
    if norm < 0:
        raise ValueError("norm must be nonnegative")
    mask = basis.band_mask(omega)
    k_in = int(mask.sum())
    if k_in == 0:
        raise ValueError("band is empty; no eigenvalues at or below the cutoff")

    def _unit_draw(cols: np.ndarray) -> np.ndarray:
        # A fresh draw is all but surely nonzero; retry guards degenerate rng.
        for _ in range(16):
            coeff = rng.standard_normal(cols.shape[1])
            vec = cols @ coeff
            scale = np.linalg.norm(vec)
            if scale > 0:
                return vec / scale
        raise RuntimeError("random draw repeatedly produced the zero vector")

    inband = _unit_draw(basis.eigenvectors[:, mask])
    if offband_energy is None or offband_energy == 0.0:
        return norm * inband
    if not 0.0 <= offband_energy < 1.0:
        raise ValueError("offband_energy must lie in [0, 1)")
    if k_in == basis.n:
        raise ValueError("band spans the whole spectrum; no off-band direction")
    offband = _unit_draw(basis.eigenvectors[:, ~mask])
    f = np.sqrt(1.0 - offband_energy) * inband + np.sqrt(offband_energy) * offband
    return norm * f
