"""Multi-view dataset container, on-disk format, and synthetic generation.

On-disk layout: a JSON manifest plus one CSV per view (rows = features,
columns = samples, no header) and an optional labels CSV of 0-based
integers, one per line. All paths in the manifest are relative to the
manifest's directory.
"""

import csv
import json
import os
from dataclasses import dataclass

import numpy as np


class DatasetFormatError(ValueError):
    """A dataset file disagrees with its manifest or contains bad cells."""


@dataclass
class MultiViewDataset:
    """v feature matrices (d_i x n) over the same n samples."""

    views: list
    labels: np.ndarray | None = None
    name: str = "dataset"
    c: int | None = None

    def __post_init__(self):
        if not self.views:
            raise ValueError("need at least one view")
        self.views = [np.asarray(X, dtype=float) for X in self.views]
        n = self.views[0].shape[1]
        for i, X in enumerate(self.views):
            if X.ndim != 2 or X.shape[0] < 1:
                raise ValueError(f"view {i} must be a 2-D matrix with d >= 1")
            if X.shape[1] != n:
                raise ValueError(
                    f"view {i} has {X.shape[1]} samples, expected {n}"
                )
            if not np.all(np.isfinite(X)):
                raise ValueError(f"view {i} contains non-finite entries")
        if self.labels is not None:
            self.labels = np.asarray(self.labels, dtype=int)
            if self.labels.shape != (n,):
                raise ValueError("labels length must match sample count")
            if self.c is None:
                self.c = int(self.labels.max()) + 1

    @property
    def n(self):
        return self.views[0].shape[1]

    @property
    def v(self):
        return len(self.views)


@dataclass
class SynthParams:
    """Union-of-subspaces generator settings.

    c clusters of m samples each; every cluster lives in an s-dimensional
    subspace of each view's ambient space. The s x m coefficient block is
    shared across views (same cluster structure), while each view draws its
    own orthonormal basis (view-specific representation).
    """

    c: int = 4
    s: int = 4
    m: int = 30
    dims: tuple = (60, 80)
    sigma: float = 0.01
    seed: int = 0
    name: str = "synthetic"

    def validate(self):
        if self.c < 2 or self.s < 1 or self.m < 1:
            raise ValueError("c >= 2, s >= 1, m >= 1 required")
        if self.sigma < 0:
            raise ValueError("sigma must be nonnegative")
        if not self.dims:
            raise ValueError("need at least one view dimension")
        if self.s >= min(self.dims):
            raise ValueError("subspace dimension must be below every ambient dimension")


def synth_multiview(params: SynthParams) -> MultiViewDataset:
    """Generate a seeded union-of-subspaces multi-view dataset."""
    params.validate()
    rng = np.random.default_rng(params.seed)
    coeffs = [rng.standard_normal((params.s, params.m)) for _ in range(params.c)]
    views = []
    for d in params.dims:
        blocks = []
        for C in coeffs:
            basis, _ = np.linalg.qr(rng.standard_normal((d, params.s)))
            blocks.append(basis @ C)
        views.append(np.hstack(blocks))
    # Noise is drawn after all structure so two datasets with the same seed
    # and different sigma share coefficients and bases exactly.
    if params.sigma > 0:
        views = [
            X + params.sigma * rng.standard_normal(X.shape) for X in views
        ]
    labels = np.repeat(np.arange(params.c), params.m)
    return MultiViewDataset(views=views, labels=labels, name=params.name, c=params.c)


def normalize_view(X, mode="none"):
    """Column normalization. 'unit-column' rescales each column to unit
    Euclidean norm (zero columns untouched); 'none' is the identity."""
    if mode == "none":
        return np.asarray(X, dtype=float)
    if mode != "unit-column":
        raise ValueError(f"unknown normalization mode {mode!r}")
    X = np.asarray(X, dtype=float)
    norms = np.linalg.norm(X, axis=0)
    safe = np.where(norms > 0, norms, 1.0)
    return X / safe


def _read_matrix_csv(path, view_name):
    rows = []
    width = None
    with open(path, newline="") as fh:
        for r, row in enumerate(csv.reader(fh)):
            if not row:
                continue
            if width is None:
                width = len(row)
            elif len(row) != width:
                raise DatasetFormatError(
                    f"view {view_name!r}: row {r} has {len(row)} cells, expected {width}"
                )
            parsed = []
            for col, cell in enumerate(row):
                try:
                    parsed.append(float(cell))
                except ValueError:
                    raise DatasetFormatError(
                        f"view {view_name!r}: non-numeric cell at row {r}, col {col}: {cell!r}"
                    ) from None
            rows.append(parsed)
    if not rows:
        raise DatasetFormatError(f"view {view_name!r}: empty file {path}")
    return np.array(rows, dtype=float)


def load_dataset(manifest_path) -> MultiViewDataset:
    """Load a dataset from its manifest, validating every shape invariant."""
    manifest_path = os.fspath(manifest_path)
    if not os.path.exists(manifest_path):
        raise FileNotFoundError(manifest_path)
    base = os.path.dirname(os.path.abspath(manifest_path))
    with open(manifest_path) as fh:
        manifest = json.load(fh)
    n = int(manifest["n"])
    c = int(manifest["c"]) if manifest.get("c") is not None else None
    views = []
    for spec_entry in manifest["views"]:
        vname = spec_entry["name"]
        path = os.path.join(base, spec_entry["path"])
        if not os.path.exists(path):
            raise FileNotFoundError(path)
        X = _read_matrix_csv(path, vname)
        if X.shape != (int(spec_entry["d"]), n):
            raise DatasetFormatError(
                f"view {vname!r}: file shape {X.shape} disagrees with manifest "
                f"({spec_entry['d']}, {n})"
            )
        views.append(X)
    labels = None
    if manifest.get("labels"):
        lpath = os.path.join(base, manifest["labels"])
        if not os.path.exists(lpath):
            raise FileNotFoundError(lpath)
        raw = []
        with open(lpath) as fh:
            for r, line in enumerate(fh):
                line = line.strip()
                if not line:
                    continue
                try:
                    raw.append(int(line))
                except ValueError:
                    raise DatasetFormatError(
                        f"labels: non-integer value at line {r}: {line!r}"
                    ) from None
        labels = np.array(raw, dtype=int)
        if labels.shape != (n,):
            raise DatasetFormatError(
                f"labels: {labels.size} entries, manifest says n={n}"
            )
        if c is not None and (labels.min() < 0 or labels.max() >= c):
            raise DatasetFormatError(
                f"labels: values must lie in [0, {c}), got "
                f"[{labels.min()}, {labels.max()}]"
            )
    return MultiViewDataset(
        views=views, labels=labels, name=manifest.get("name", "dataset"), c=c
    )


def write_dataset(dataset: MultiViewDataset, out_dir) -> str:
    """Write manifest + per-view CSVs (+ labels) under out_dir.

    Returns the manifest path. Floats use %.17g so load_dataset round-trips
    bit-exactly.
    """
    os.makedirs(out_dir, exist_ok=True)
    entries = []
    for i, X in enumerate(dataset.views):
        fname = f"view_{i}.csv"
        np.savetxt(os.path.join(out_dir, fname), X, fmt="%.17g", delimiter=",")
        entries.append({"name": f"view_{i}", "d": int(X.shape[0]), "path": fname})
    manifest = {
        "name": dataset.name,
        "n": int(dataset.n),
        "c": int(dataset.c) if dataset.c is not None else None,
        "views": entries,
        "labels": None,
    }
    if dataset.labels is not None:
        manifest["labels"] = "labels.csv"
        with open(os.path.join(out_dir, "labels.csv"), "w") as fh:
            for lab in dataset.labels:
                fh.write(f"{int(lab)}\n")
    manifest_path = os.path.join(out_dir, "manifest.json")
    with open(manifest_path, "w") as fh:
        json.dump(manifest, fh, indent=2)
        fh.write("\n")
    return manifest_path
