"""Shared fixtures: small hand graphs plus two desk-scale setups.

The grid and geometric-graph fixtures are session scoped because their
eigendecompositions dominate test runtime; tests must not mutate them.
"""

from __future__ import annotations

import math

import numpy as np
import pytest

import graphlmr as glm
from graphlmr.experiments import _STREAM_GRAPH, _rng


@pytest.fixture(scope="session")
def grid20():
    graph = glm.grid_graph(20, 20)
    basis = glm.eigendecompose(glm.build_laplacian(graph))
    return graph, basis


@pytest.fixture(scope="session")
def grid20_pairs(grid20):
    graph, _ = grid20
    partition = glm.greedy_partition(graph, 2)
    metrics = glm.partition_metrics(graph, partition)
    return partition, metrics


@pytest.fixture(scope="session")
def rgg300():
    """The geometric graph the experiment runner builds for seed 1."""
    graph = glm.random_geometric_graph(300, 0.09, _rng(1, _STREAM_GRAPH))
    basis = glm.eigendecompose(glm.build_laplacian(graph))
    return graph, basis


@pytest.fixture(scope="session")
def rgg300_sets3(rgg300):
    graph, basis = rgg300
    partition = glm.greedy_partition(graph, 3)
    metrics = glm.partition_metrics(graph, partition)
    ev = basis.eigenvalues
    omega = float(0.5 * (ev[3] + ev[4]))  # in-band dimension 4
    gamma = metrics.c_max * math.sqrt(omega)
    assert gamma < 1.0  # setup guard: the tests below rely on contraction
    return partition, metrics, omega, gamma


@pytest.fixture()
def p4():
    graph = glm.path_graph(4)
    basis = glm.eigendecompose(glm.build_laplacian(graph))
    return graph, basis
