"""Spectral clustering back end: affinity construction, normalized-Laplacian
embedding, and a deterministic k-means."""

import numpy as np

# Degrees of isolated vertices are clamped here so D^{-1/2} stays finite.
_DEGREE_FLOOR = 1e-12


def build_affinity(Z):
    """Symmetric nonnegative affinity W = (abs(Z) + abs(Z^T)) / 2."""
    Z = np.asarray(Z, dtype=float)
    if Z.ndim != 2 or Z.shape[0] != Z.shape[1]:
        raise ValueError(f"coefficient matrix must be square, got {Z.shape}")
    A = np.abs(Z)
    return (A + A.T) / 2.0


def spectral_cluster(W, c, seed=0, restarts=20):
    """Cluster the graph given by affinity W into c groups.

    Builds the symmetric normalized Laplacian D^{-1/2} (D - W) D^{-1/2},
    embeds each vertex with the c eigenvectors of smallest eigenvalue,
    row-normalizes the embedding, and runs k-means on the rows.
    """
    W = np.asarray(W, dtype=float)
    n = W.shape[0]
    if c < 2:
        raise ValueError("need at least 2 clusters")
    if c > n:
        raise ValueError(f"cannot form {c} clusters from {n} points")
    deg = W.sum(axis=1)
    dinv = 1.0 / np.sqrt(np.maximum(deg, _DEGREE_FLOOR))
    lap = (np.diag(deg) - W) * np.outer(dinv, dinv)
    lap = (lap + lap.T) / 2.0
    _, vecs = np.linalg.eigh(lap)
    embed = vecs[:, :c]
    norms = np.linalg.norm(embed, axis=1, keepdims=True)
    embed = embed / np.where(norms > 0, norms, 1.0)
    return kmeans(embed, c, seed=seed, restarts=restarts)


def kmeans(points, k, seed=0, restarts=20, max_iter=300):
    """Lloyd's algorithm with k-means++ seeding and multiple restarts.

    Deterministic under a fixed seed: restarts draw from one sequential
    generator and ties in the final argmin go to the lowest restart index.
    Returns the label vector of the restart with the lowest within-cluster
    sum of squares.
    """
    points = np.asarray(points, dtype=float)
    n = points.shape[0]
    if k > n:
        raise ValueError(f"k={k} exceeds number of points {n}")
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    rng = np.random.default_rng(seed)
    best_cost = np.inf
    best_labels = None
    for _ in range(restarts):
        labels, cost, _ = _lloyd_once(points, k, rng, max_iter)
        if cost < best_cost:
            best_cost = cost
            best_labels = labels
    return best_labels


def _plus_plus_init(points, k, rng):
    n = points.shape[0]
    centers = np.empty((k, points.shape[1]))
    centers[0] = points[rng.integers(n)]
    d2 = np.sum((points - centers[0]) ** 2, axis=1)
    for j in range(1, k):
        total = d2.sum()
        if total <= 0:
            centers[j] = points[rng.integers(n)]
        else:
            centers[j] = points[rng.choice(n, p=d2 / total)]
        d2 = np.minimum(d2, np.sum((points - centers[j]) ** 2, axis=1))
    return centers


def _lloyd_once(points, k, rng, max_iter):
    centers = _plus_plus_init(points, k, rng)
    labels = np.zeros(points.shape[0], dtype=int)
    costs = []
    for _ in range(max_iter):
        d2 = (
            np.sum(points**2, axis=1)[:, None]
            - 2.0 * points @ centers.T
            + np.sum(centers**2, axis=1)[None, :]
        )
        new_labels = np.argmin(d2, axis=1)
        for j in range(k):
            mask = new_labels == j
            if mask.any():
                centers[j] = points[mask].mean(axis=0)
            else:
                # Re-seat an empty cluster on the farthest point.
                far = np.argmax(np.min(d2, axis=1))
                centers[j] = points[far]
                new_labels[far] = j
        costs.append(float(np.sum((points - centers[new_labels]) ** 2)))
        if np.array_equal(new_labels, labels):
            labels = new_labels
            break
        labels = new_labels
    cost = float(np.sum((points - centers[labels]) ** 2))
    return labels, cost, costs
