"""scikit-learn style wrapper around the graph-vector map.

``fit`` takes a kinematic point and solves the scattering equations once;
``transform`` maps 2-regular graphs to their component vectors.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .chy import GaugeFixing, cached_solve, default_cache_dir, graph_vector
from .expand import numerical_rank
from .validation import check_graphs, check_kinematics


class GraphVectorMap(TransformerMixin, BaseEstimator):
    """Map 2-regular graphs to ``v(G)``, one complex component per solution.

    Parameters
    ----------
    tol : float
        Residual tolerance handed to the solver.
    gauge_labels : tuple of int
        Labels pinned to ``(0, 1, -1)``.
    weighted : bool
        Multiply each component by its solution weight, so that
        ``transform(X) @ transform(Y).T`` holds the pairings.
    rank_tol : float
        Relative singular-value cutoff used by :meth:`rank`.
    """

    def __init__(self, tol=1e-12, gauge_labels=(1, 2, 3), weighted=False, rank_tol=1e-9):
        self.tol = tol
        self.gauge_labels = gauge_labels
        self.weighted = weighted
        self.rank_tol = rank_tol

    def fit(self, X, y=None):
        kin = check_kinematics(X)
        self.solutions_ = cached_solve(kin, GaugeFixing(tuple(self.gauge_labels)), self.tol,
                                      cache_dir=default_cache_dir())
        self.n_ = kin.n
        self.n_features_out_ = len(self.solutions_.weights)
        return self

    def transform(self, X):
        check_is_fitted(self, "solutions_")
        graphs = check_graphs(X, self.n_)
        V = np.array([graph_vector(G, self.solutions_) for G in graphs])
        if self.weighted:
            V = V * self.solutions_.weights
        return V

    def pair(self, X, Y=None):
        """Matrix of pairings between the graphs in ``X`` and ``Y`` (``X`` by default)."""
        check_is_fitted(self, "solutions_")
        sols = self.solutions_
        A = np.array([graph_vector(G, sols) for G in check_graphs(X, self.n_)])
        B = A if Y is None else np.array([graph_vector(G, sols) for G in check_graphs(Y, self.n_)])
        return (A * sols.weights) @ B.T

    def rank(self, X):
        check_is_fitted(self, "solutions_")
        return numerical_rank(check_graphs(X, self.n_), self.solutions_, self.rank_tol).rank

    def get_feature_names_out(self, input_features=None):
        check_is_fitted(self, "solutions_")
        return np.array([f"solution{i}" for i in range(self.n_features_out_)], dtype=object)
