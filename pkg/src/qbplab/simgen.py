"""Synthetic biomarker data for the nine simulation designs (35 biomarkers).

Subject i, biomarker k:

    v = alpha_k + beta_k * y + eta_k * (1 + nu_k - 2 * nu_k * y) * z
    x = psi_k(v)

with z drawn jointly across biomarkers from N(0, R).  ``alpha``, ``eta`` and
``psi`` may differ by class (design 5 gives the controls a normal
distribution whose mean and variance mimic the log-normal cases).

The latent correlation matrix R used for the published results was never
released; designs default to the identity and accept a user-supplied
matrix.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from .data import Dataset

R = 35

# k: (alpha, eta) for identity, exp, and identity-star (I*) transforms
_PARAMS = np.array([
    (617.8, 509.7, 6.19, 0.65, 604.4, 439.2),
    (276.9, 296.3, 5.33, 0.87, 301.1, 322.4),
    (2.61, 14.94, -1.86, 1.53, 0.50, 1.55),
    (6.94, 4.81, 1.62, 0.95, 7.90, 9.52),
    (72.08, 16.72, 4.25, 0.23, 72.13, 17.02),
    (16.69, 17.28, 2.27, 1.21, 20.23, 36.99),
    (3.25, 1.28, 1.11, 0.38, 3.27, 1.30),
    (5.94, 2.73, 1.69, 0.42, 5.94, 2.63),
    (11.66, 13.59, 1.84, 1.22, 13.29, 24.78),
    (1.41, 0.38, 0.31, 0.26, 1.42, 0.38),
    (62.29, 20.64, 4.07, 0.37, 62.73, 23.78),
    (592.1, 1395.0, 5.90, 0.86, 526.6, 549.8),
    (103.1, 129.9, 3.88, 1.36, 121.7, 279.9),
    (177.4, 61.28, 5.13, 0.31, 177.0, 55.50),
    (53.88, 29.79, 3.87, 0.47, 53.74, 26.80),
    (8.55, 0.76, 2.14, 0.09, 8.56, 0.78),
    (12.97, 11.29, 2.30, 0.69, 12.62, 9.84),
    (0.71, 0.48, -0.47, 0.51, 0.71, 0.39),
    (0.37, 1.78, 1.47, 0.78, 5.93, 5.45),
    (0.78, 1.11, -1.54, 2.01, 1.63, 12.27),
    (33.24, 19.59, 3.37, 0.51, 33.17, 18.05),
    (0.31, 0.20, -1.30, 0.58, 0.32, 0.21),
    (0.34, 0.23, -1.29, 0.71, 0.35, 0.29),
    (0.22, 0.29, -1.87, 0.80, 0.21, 0.20),
    (0.07, 0.10, -2.82, 0.64, 0.07, 0.05),
    (3.64, 2.12, 1.04, 1.01, 4.72, 6.29),
    (66.95, 82.64, 3.37, 1.82, 153.1, 794.2),
    (4.98, 2.34, 1.39, 0.92, 6.10, 7.02),
    (21.40, 29.97, 2.64, 0.81, 19.47, 18.87),
    (13.09, 24.77, 1.71, 1.36, 14.03, 32.74),
    (14.69, 12.06, 2.39, 0.82, 15.23, 14.84),
    (7.28, 5.65, 1.77, 0.65, 7.25, 5.26),
    (15.37, 37.54, 1.67, 1.38, 13.69, 32.66),
    (0.13, 0.20, -2.64, 1.21, 0.15, 0.27),
    (22.53, 37.47, 2.62, 0.94, 21.27, 25.29),
])
_COLS = {"identity": (0, 1), "exp": (2, 3), "identity-star": (4, 5)}

# 1-based biomarker indices
_MEAN_SHIFT_2 = (6, 13, 20, 27, 34)
_MEAN_SHIFT_3 = (3, 6, 9, 13, 17, 20, 23, 27, 30, 34)
_SCALE_SHIFT = {4: -0.15, 5: -0.25, 7: 0.15, 13: 0.15, 15: -0.15, 16: 0.10,
                21: 0.20, 22: -0.20, 28: 0.10}
_SKEW_5 = (4, 6, 8, 13, 14, 23, 26, 30, 35)
_LOG_SHIFT = {4: -0.29, 7: -0.44, 9: -0.41, 10: -0.14, 26: 0.32, 29: 0.26, 31: 0.31}
_NORMAL_8 = (3, 5, 11, 16, 19, 21, 22)

_SIZES = {"a": (100, Fraction(1, 2)), "b": (400, Fraction(1, 2)), "c": (250, Fraction(1, 5))}

DESIGN_IDS = ("1", "2", "3", "4", "5", "6a", "6b", "6c", "7a", "7b", "7c", "8a", "8b", "8c")


class DesignError(ValueError):
    pass


@dataclass(frozen=True)
class SimDesign:
    """Per-biomarker, per-class generating parameters.

    ``alpha``, ``eta`` and ``transform`` have shape (2, r): row 0 for
    controls, row 1 for cases.  ``transform_label`` keeps the table's
    naming (identity-star is sampled as identity with its own parameters).
    """

    id: str
    alpha: np.ndarray
    eta: np.ndarray
    beta: np.ndarray
    nu: np.ndarray
    transform: np.ndarray
    transform_label: np.ndarray
    n: int
    phi: Fraction
    correlation: np.ndarray

    @property
    def r(self) -> int:
        return self.beta.shape[0]

    @property
    def n_cases(self) -> int:
        return int(self.phi * self.n)

    def relevance_mask(self) -> np.ndarray:
        return (
            (self.beta != 0)
            | (self.nu != 0)
            | (self.alpha[0] != self.alpha[1])
            | (self.eta[0] != self.eta[1])
            | (self.transform[0] != self.transform[1])
        )

    def with_n(self, n: int) -> "SimDesign":
        if n < 2:
            raise DesignError("n must be >= 2")
        return SimDesign(self.id, self.alpha, self.eta, self.beta, self.nu, self.transform,
                         self.transform_label, int(n), self.phi, self.correlation)


def load_correlation(path, r: int = R) -> np.ndarray:
    """Read an r x r correlation matrix from CSV (an optional header row is skipped)."""
    path = Path(path)
    text = path.read_text(encoding="utf-8").strip().splitlines()
    rows = []
    for line in text:
        cells = [c.strip() for c in line.split(",")]
        try:
            rows.append([float(c) for c in cells])
        except ValueError:
            if rows:
                raise DesignError(f"{path}: non-numeric entry in line {len(rows) + 1}") from None
            continue  # header
    mat = np.array(rows, dtype=float) if rows else np.zeros((0, 0))
    return validate_correlation(mat, r, str(path))


def validate_correlation(mat, r: int = R, source: str = "correlation") -> np.ndarray:
    mat = np.asarray(mat, dtype=float)
    if mat.shape != (r, r):
        raise DesignError(f"{source}: expected a {r}x{r} matrix, got {mat.shape}")
    if not np.allclose(mat, mat.T, atol=1e-10):
        raise DesignError(f"{source}: matrix is not symmetric")
    if not np.allclose(np.diag(mat), 1.0, atol=1e-10):
        raise DesignError(f"{source}: diagonal must be all ones")
    if np.linalg.eigvalsh(mat).min() < -1e-10:
        raise DesignError(f"{source}: matrix is not positive semidefinite")
    return mat


def build_design(design_id, correlation="identity") -> SimDesign:
    """Populate a design from the simulation table.

    ``correlation`` is ``"identity"``, a path to a CSV file, or an r x r array.
    """
    did = str(design_id).strip().lower()
    if did not in DESIGN_IDS:
        raise DesignError(f"unknown design {design_id!r}; valid ids: {', '.join(DESIGN_IDS)}")
    family, size = did[0], did[1:] or "a"
    n, phi = _SIZES[size]

    psi = np.full((2, R), "identity", dtype=object)
    beta = np.zeros(R)
    nu = np.zeros(R)
    if family in "1234":
        pass
    elif family == "5":
        psi[:] = "exp"
        for k in _SKEW_5:
            psi[0, k - 1] = "identity-star"
    elif family in "67":
        psi[:] = "exp"
    else:
        psi[:] = "exp"
        for k in _NORMAL_8:
            psi[:, k - 1] = "identity"

    alpha = np.empty((2, R))
    eta = np.empty((2, R))
    for c in (0, 1):
        for k in range(R):
            ia, ie = _COLS[psi[c, k]]
            alpha[c, k], eta[c, k] = _PARAMS[k, ia], _PARAMS[k, ie]

    if family == "2":
        for k in _MEAN_SHIFT_2:
            beta[k - 1] = eta[0, k - 1]
    elif family == "3":
        for k in _MEAN_SHIFT_3:
            beta[k - 1] = eta[0, k - 1]
    if family in ("6", "8"):
        for k, b in _LOG_SHIFT.items():
            beta[k - 1] = b
    if family in ("4", "7", "8"):
        for k, v in _SCALE_SHIFT.items():
            nu[k - 1] = v

    if isinstance(correlation, str) and correlation == "identity":
        corr = np.eye(R)
    elif isinstance(correlation, (str, Path)):
        corr = load_correlation(correlation)
    else:
        corr = validate_correlation(correlation)

    transform = np.where(psi == "exp", "exp", "identity").astype(object)
    return SimDesign(did, alpha, eta, beta, nu, transform, psi, n, phi, corr)


def sample_dataset(design: SimDesign, rng: np.random.Generator, n: int | None = None):
    """Draw one dataset; returns ``(Dataset, relevance_mask)``.

    Exactly floor(phi * n) cases.  Labels are shuffled first, then the latent
    normals are drawn, both from ``rng``.
    """
    if n is not None:
        design = design.with_n(n)
    n = design.n
    n_cases = design.n_cases
    if n_cases < 1 or n_cases >= n:
        raise DesignError(f"n={n} with phi={design.phi} gives {n_cases} cases")
    try:
        chol = np.linalg.cholesky(design.correlation)
    except np.linalg.LinAlgError:
        raise DesignError("correlation matrix is not positive definite (Cholesky failed)") from None
    y = np.r_[np.ones(n_cases, dtype=np.int64), np.zeros(n - n_cases, dtype=np.int64)]
    y = rng.permutation(y)
    z = rng.standard_normal((n, design.r)) @ chol.T
    alpha = design.alpha[y]
    eta = design.eta[y]
    yc = y[:, None]
    sigma = eta * (1 + design.nu - 2 * design.nu * yc)
    v = alpha + design.beta * yc + sigma * z
    is_exp = design.transform[y] == "exp"
    x = np.where(is_exp, np.exp(np.where(is_exp, v, 0.0)), v)
    names = tuple(f"b{k + 1}" for k in range(design.r))
    return Dataset(x, y, names), design.relevance_mask()
