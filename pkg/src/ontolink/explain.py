"""Interpretation of sparse-embedding recommendations.

Global: logistic regression over elementwise products of endpoint embedding
rows; feature importance = |t| with t = beta / SE(beta), SE from the inverse
weighted Gram matrix. Local: the per-feature contributions of one pair;
their sum equals the pair's score exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .embed.snore import SparseEmbedding, snore_score
from .evalbench import make_folds
from .graphcore import SimpleGraph


class SingularGramError(RuntimeError):
    def __init__(self, ridge: float):
        super().__init__(
            f"X^T W X is singular even with ridge={ridge}; retry with a larger ridge"
        )


class IrlsConvergenceError(RuntimeError):
    def __init__(self, grad_norm: float, iterations: int):
        super().__init__(
            f"IRLS did not converge in {iterations} iterations (|grad| = {grad_norm:.3e})"
        )
        self.grad_norm = grad_norm


@dataclass
class GlobalExplanation:
    feature_ids: np.ndarray  # column ids kept for the fit
    beta: np.ndarray
    se: np.ndarray
    t: np.ndarray
    ranking: np.ndarray  # feature ids sorted by |t| descending
    ridge: float
    feature_names: list[str] | None = None

    def top(self, k: int) -> list[dict]:
        out = []
        index = {int(f): i for i, f in enumerate(self.feature_ids)}
        for fid in self.ranking[:k]:
            i = index[int(fid)]
            out.append(
                {
                    "feature": self.feature_names[fid] if self.feature_names else int(fid),
                    "beta": float(self.beta[i]),
                    "se": float(self.se[i]),
                    "t": float(self.t[i]),
                }
            )
        return out


@dataclass
class LocalExplanation:
    u: int
    v: int
    features: np.ndarray  # sorted descending by contribution
    contributions: np.ndarray
    total: float
    support_union: int  # features in either row's support

    def to_dict(self, names: list[str] | None = None) -> dict:
        return {
            "u": self.u,
            "v": self.v,
            "total": self.total,
            "contributions": [
                {"feature": names[f] if names else int(f), "value": float(c)}
                for f, c in zip(self.features, self.contributions)
            ],
        }


def logistic_weights(X: np.ndarray, beta: np.ndarray) -> np.ndarray:
    """Diagonal of W: e^eta / (1 + e^eta)^2 per training row."""
    eta = X @ beta
    mu = 1.0 / (1.0 + np.exp(-eta))
    return mu * (1.0 - mu)


def irls_fit(
    X: np.ndarray,
    y: np.ndarray,
    ridge: float = 1e-6,
    max_iter: int = 100,
    tol: float = 1e-10,
) -> np.ndarray:
    """Logistic regression (no intercept) by iteratively reweighted least
    squares with ridge-stabilized Newton steps."""
    beta = np.zeros(X.shape[1])
    grad_norm = np.inf
    for _ in range(max_iter):
        mu = 1.0 / (1.0 + np.exp(-(X @ beta)))
        grad = X.T @ (y - mu) - ridge * beta
        grad_norm = float(np.linalg.norm(grad))
        if grad_norm < tol:
            return beta
        w = mu * (1.0 - mu)
        hess = (X.T * w) @ X + ridge * np.eye(X.shape[1])
        try:
            step = np.linalg.solve(hess, grad)
        except np.linalg.LinAlgError as exc:
            raise SingularGramError(ridge) from exc
        beta = beta + step
    raise IrlsConvergenceError(grad_norm, max_iter)


def build_training_data(
    R: SparseEmbedding,
    g: SimpleGraph,
    seed: int,
    max_features: int = 1000,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Training rows = elementwise products of endpoint rows for one fold's
    positive edges and matched non-edges. Returns (X, y, kept feature ids)."""
    plan = make_folds(g, seed)
    pairs = plan.pos_folds[0] + plan.neg_folds[0]
    y = np.concatenate(
        [np.ones(len(plan.pos_folds[0])), np.zeros(len(plan.neg_folds[0]))]
    )
    M = R.matrix
    rows_u = M[[u for u, _ in pairs]]
    rows_v = M[[v for _, v in pairs]]
    prod = rows_u.multiply(rows_v).tocsc()
    nnz_per_col = np.diff(prod.indptr)
    if len(nnz_per_col) > max_features:
        # Most frequently nonzero columns; ties keep smaller feature id.
        order = np.lexsort((np.arange(len(nnz_per_col)), -nnz_per_col))
        kept = np.sort(order[:max_features])
    else:
        kept = np.arange(len(nnz_per_col))
    X = np.asarray(prod[:, kept].todense())
    return X, y, kept


def explain_global(
    R: SparseEmbedding,
    g: SimpleGraph,
    seed: int,
    max_features: int = 1000,
    ridge: float = 1e-6,
) -> GlobalExplanation:
    X, y, kept = build_training_data(R, g, seed, max_features)
    beta = irls_fit(X, y, ridge=ridge)
    w = logistic_weights(X, beta)
    gram = (X.T * w) @ X + ridge * np.eye(X.shape[1])
    try:
        cov = np.linalg.inv(gram)
    except np.linalg.LinAlgError as exc:
        raise SingularGramError(ridge) from exc
    se = np.sqrt(np.clip(np.diag(cov), 0.0, None))
    if np.any(se <= 0):
        raise SingularGramError(ridge)
    t = beta / se
    ranking = kept[np.lexsort((kept, -np.abs(t)))]
    return GlobalExplanation(
        feature_ids=kept,
        beta=beta,
        se=se,
        t=t,
        ranking=ranking,
        ridge=ridge,
        feature_names=R.feature_names,
    )


def explain_local(R: SparseEmbedding, u: int, v: int) -> LocalExplanation:
    iu, du = R.row(u)
    iv, dv = R.row(v)
    common, a_idx, b_idx = np.intersect1d(iu, iv, assume_unique=True, return_indices=True)
    contributions = du[a_idx] * dv[b_idx]
    order = np.lexsort((common, -contributions))
    common, contributions = common[order], contributions[order]
    total = float(contributions.sum())
    assert abs(total - snore_score(R, u, v)) <= 1e-9
    return LocalExplanation(
        u=u,
        v=v,
        features=common,
        contributions=contributions,
        total=total,
        support_union=len(np.union1d(iu, iv)),
    )


def contribution_histogram(
    e: LocalExplanation, bins: int
) -> tuple[np.ndarray, np.ndarray, int]:
    """Histogram of contribution values plus the count of zero-product
    features from either support, for log-scale rendering."""
    if bins < 1:
        raise ValueError("bins must be >= 1")
    nonzero = e.contributions[e.contributions != 0]
    zero_count = e.support_union - len(nonzero)
    if len(nonzero) == 0:
        return np.zeros(bins, dtype=np.int64), np.linspace(0.0, 1.0, bins + 1), zero_count
    counts, edges = np.histogram(nonzero, bins=bins, range=(0.0, float(nonzero.max())))
    return counts, edges, zero_count
