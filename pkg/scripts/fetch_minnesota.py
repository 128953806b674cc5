#!/usr/bin/env python3
"""Download the Minnesota road network and write data/minnesota.edges.

The raw .mat file (2642 vertices) contains a handful of vertices cut off
from the rest of the road network; only the 2640-vertex largest connected
component is kept, reindexed to 0..2639 in original vertex order, giving
3302 undirected edges.  Needs network access plus scipy.
"""

from __future__ import annotations

import io
import sys
import urllib.request
from pathlib import Path

import numpy as np
from scipy import sparse
from scipy.io import loadmat
from scipy.sparse.csgraph import connected_components

URLS = (
    "https://raw.githubusercontent.com/dgleich/matlab-bgl/master/graphs/minnesota.mat",
    "https://github.com/epfl-lts2/pygsp/raw/master/pygsp/data/pointclouds/minnesota.mat",
)
OUT = Path(__file__).resolve().parent.parent / "data" / "minnesota.edges"


def download() -> bytes:
    lasterr: Exception | None = None
    for url in URLS:
        try:
            print(f"fetching {url} ...")
            with urllib.request.urlopen(url, timeout=60) as resp:
                return resp.read()
        except Exception as exc:  # try the mirror before giving up
            print(f"  failed: {exc}")
            lasterr = exc
    raise SystemExit(f"could not download minnesota.mat: {lasterr}")


def main() -> None:
    mat = loadmat(io.BytesIO(download()))
    a = sparse.csr_matrix(mat["A"])
    a = ((a + a.T) > 0).astype(np.int8)  # symmetrize, drop weights
    a.setdiag(0)
    a.eliminate_zeros()
    print(f"raw graph: {a.shape[0]} vertices, {a.nnz // 2} edges")

    n_comp, labels = connected_components(a, directed=False)
    keep = labels == np.bincount(labels).argmax()
    a = a[keep][:, keep]
    print(f"largest component: {a.shape[0]} vertices, {a.nnz // 2} edges "
          f"(of {n_comp} components)")
    if a.shape[0] != 2640 or a.nnz // 2 != 3302:
        sys.exit("unexpected component size; refusing to write")

    upper = sparse.triu(a, k=1).tocoo()
    order = np.lexsort((upper.col, upper.row))
    lines = [f"{u} {v}" for u, v in zip(upper.row[order], upper.col[order])]
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(
        "# minnesota road network, largest connected component (0-based)\n"
        + "\n".join(lines) + "\n",
        encoding="utf-8",
    )
    print(f"wrote {OUT} ({len(lines)} edges)")


if __name__ == "__main__":
    main()
