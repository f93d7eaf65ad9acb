"""
Logistic regression by damped iteratively reweighted least squares.
"""
import logging
from typing import List, NamedTuple, Optional, Sequence

import numpy as np
import pandas as pd
from scipy import linalg
from scipy.special import expit

from ..errors import ModelFitError
from .encoder import DesignEncoder

logger = logging.getLogger(__name__)

PROBABILITY_CLAMP = 1e-6
# Fitted probabilities this close to 0 or 1 mean the arm is (quasi-)separated
FITTED_EPS = 10 * np.finfo(float).eps
# Relative log-likelihood drop accepted as rounding near the optimum
LL_SLACK = 1e-12


class FitOptions(NamedTuple):
    max_iter: int = 100
    tol: float = 1e-8
    divergence: float = 1e3
    drop_rank_deficient: bool = False
    rank_tol: float = 1e-10
    max_halvings: int = 50


def log_likelihood(X: np.ndarray, y: np.ndarray, beta: np.ndarray) -> float:
    """Bernoulli log-likelihood, stable for large |eta|."""
    eta = X @ beta
    return float(np.sum(y * eta - np.logaddexp(0.0, eta)))


def score(X: np.ndarray, y: np.ndarray, beta: np.ndarray) -> np.ndarray:
    return X.T @ (y - expit(X @ beta))


def _independent_columns(X: np.ndarray, tol: float) -> np.ndarray:
    """Indices of a maximal set of linearly independent columns (in order)."""
    if X.shape[1] == 0:
        return np.arange(0)
    _, r, pivots = linalg.qr(X, mode="economic", pivoting=True)
    diag = np.abs(np.diag(r))
    if diag.size == 0 or diag[0] == 0:
        return np.arange(0)
    rank = int(np.sum(diag > tol * diag[0] * max(X.shape)))
    return np.sort(pivots[:rank])


class LogisticModel:
    """
    Fitted logistic working model.

    Attributes:
        coefficients: One entry per design column, intercept first; columns
            dropped for rank deficiency hold 0
        columns: Design column names
        covariates: Covariates included in the model
        converged: False when iterations ran out or the data are separated
    """

    def __init__(
        self,
        coefficients: np.ndarray,
        columns: Sequence[str],
        covariates: Sequence[str],
        converged: bool,
        separated: bool,
        log_likelihood: float,
        n_obs: int,
        iterations: int,
        dropped: Sequence[str] = (),
        encoder: Optional[DesignEncoder] = None,
    ):
        self.coefficients = np.asarray(coefficients, dtype=float)
        self.columns = list(columns)
        self.covariates = list(covariates)
        self.converged = converged
        self.separated = separated
        self.log_likelihood = float(log_likelihood)
        self.n_obs = n_obs
        self.iterations = iterations
        self.dropped = list(dropped)
        self.encoder = encoder
        self.aic_path: List[dict] = []

    @property
    def k(self) -> int:
        """Number of estimated coefficients."""
        return len(self.columns) - len(self.dropped)

    @property
    def aic(self) -> float:
        return 2.0 * self.k - 2.0 * self.log_likelihood

    @property
    def intercept(self) -> float:
        return float(self.coefficients[0])

    def coefficient(self, column: str) -> float:
        return float(self.coefficients[self.columns.index(column)])

    def predict_matrix(self, X: np.ndarray) -> np.ndarray:
        p = expit(np.asarray(X, dtype=float) @ self.coefficients)
        if not self.converged:
            p = np.clip(p, PROBABILITY_CLAMP, 1.0 - PROBABILITY_CLAMP)
        return p

    def predict_proba(self, frame: Optional[pd.DataFrame], n: Optional[int] = None) -> np.ndarray:
        """Predictions for a covariate table; missing entries use training means."""
        if self.encoder is None:
            if len(self.columns) != 1:
                raise ModelFitError("Model was fitted on a raw matrix; use predict_matrix")
            rows = n if frame is None else len(frame)
            return self.predict_matrix(np.ones((rows, 1)))
        X = self.encoder.transform(frame, self.covariates, n=n)
        return self.predict_matrix(X)

    def to_dict(self) -> dict:
        return {
            "covariates": self.covariates,
            "coefficients": dict(zip(self.columns, self.coefficients.tolist())),
            "dropped_columns": self.dropped,
            "converged": self.converged,
            "separated": self.separated,
            "log_likelihood": self.log_likelihood,
            "aic": self.aic,
            "k": self.k,
            "n_obs": self.n_obs,
            "iterations": self.iterations,
            "aic_path": list(self.aic_path),
        }

    def __repr__(self) -> str:
        return (
            f"LogisticModel(covariates={self.covariates}, aic={self.aic:.4f}, "
            f"converged={self.converged})"
        )


def fit(
    X: np.ndarray,
    y: np.ndarray,
    options: FitOptions = FitOptions(),
    columns: Optional[Sequence[str]] = None,
) -> LogisticModel:
    """
    Maximum-likelihood logistic regression.

    Args:
        X: Design matrix, intercept column included
        y: Binary responses
        options: Iteration limits and the rank-deficiency policy
        columns: Column names (default: x0, x1, ...)

    Returns:
        LogisticModel

    Raises:
        ModelFitError: Fewer rows than columns, or rank deficiency without
            the drop option
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    n, p = X.shape
    columns = list(columns) if columns is not None else [f"x{j}" for j in range(p)]
    if n < p:
        raise ModelFitError(f"Need at least as many rows as columns ({n} < {p})")
    if not np.isin(y, (0.0, 1.0)).all():
        raise ModelFitError("Responses must be binary")
    keep = _independent_columns(X, options.rank_tol)
    dropped = [columns[j] for j in range(p) if j not in set(keep.tolist())]
    if dropped:
        if not options.drop_rank_deficient:
            raise ModelFitError(f"Design matrix is rank deficient; dependent columns: {dropped}")
        logger.info("Dropping linearly dependent columns %s", dropped)
    Xk = X[:, keep]

    beta = np.zeros(len(keep))
    ll = log_likelihood(Xk, y, beta)
    converged = separated = False
    iteration = 0
    for iteration in range(1, options.max_iter + 1):
        mu = expit(Xk @ beta)
        grad = Xk.T @ (y - mu)
        if np.max(np.abs(grad), initial=0.0) < options.tol:
            converged = True
            break
        w = mu * (1.0 - mu)
        hessian = Xk.T @ (Xk * w[:, None])
        try:
            step = linalg.solve(hessian, grad, assume_a="pos")
        except (linalg.LinAlgError, ValueError):
            step = linalg.lstsq(hessian, grad)[0]
        t = 1.0
        for _ in range(options.max_halvings):
            candidate = beta + t * step
            new_ll = log_likelihood(Xk, y, candidate)
            if new_ll >= ll - LL_SLACK * max(1.0, abs(ll)):
                break
            t *= 0.5
        else:
            logger.debug("IRLS step halving exhausted at iteration %d", iteration)
            break
        beta, ll = candidate, new_ll
        logger.debug("IRLS iteration %d: loglik %.10g, step %.3g", iteration, ll, t)
        if np.linalg.norm(beta) > options.divergence:
            separated = True
            logger.info(
                "Coefficients diverged (norm > %g): data look separated, predictions clamped",
                options.divergence,
            )
            break
    else:
        mu = expit(Xk @ beta)
        converged = np.max(np.abs(Xk.T @ (y - mu)), initial=0.0) < options.tol
    if not separated:
        fitted = expit(Xk @ beta)
        if np.any(np.minimum(fitted, 1.0 - fitted) < FITTED_EPS):
            separated = True
            logger.info("Fitted probabilities numerically 0 or 1: data look separated")
    if not converged and not separated:
        logger.info("IRLS did not converge in %d iterations", options.max_iter)

    coefficients = np.zeros(p)
    coefficients[keep] = beta
    return LogisticModel(
        coefficients=coefficients,
        columns=columns,
        covariates=[],
        converged=bool(converged and not separated),
        separated=separated,
        log_likelihood=ll,
        n_obs=n,
        iterations=iteration,
        dropped=dropped,
    )


def fit_frame(
    frame: Optional[pd.DataFrame],
    y: np.ndarray,
    covariates: Sequence[str],
    encoder: Optional[DesignEncoder] = None,
    options: FitOptions = FitOptions(),
) -> LogisticModel:
    """Fit on named covariates of a table; the model keeps the encoder for prediction."""
    y = np.asarray(y)
    if encoder is None:
        encoder = DesignEncoder().fit(frame, covariates)
    covariates = [c for c in encoder.covariates if c in covariates]
    X = encoder.transform(frame, covariates, n=len(y))
    model = fit(X, y, options, encoder.column_names(covariates))
    model.covariates = covariates
    model.encoder = encoder
    return model


def predict(model: LogisticModel, row) -> float:
    """Probability for a single covariate row (mapping or Series); missing -> training mean."""
    if isinstance(row, pd.Series):
        frame = row.to_frame().T
    elif row is None:
        frame = None
    else:
        frame = pd.DataFrame([dict(row)])
    if frame is not None:
        frame = frame.infer_objects()
    return float(model.predict_proba(frame, n=1)[0])

