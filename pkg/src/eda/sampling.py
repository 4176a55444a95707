"""
New solutions from a probability model: random-scan Gibbs chains
and forest-ordered ancestral sampling.
"""
import logging
from typing import List, Optional, Tuple

import networkx as nx
import numpy as np

import rng
from assembly import ProblemSpec, Solution, make_solution
from workspace import config
from .model import DependencyStats, ProbabilityModel

log = logging.getLogger(__name__)

# Gibbs steps generated per block of random numbers
BLOCK = 1024


def _cdf(probs: np.ndarray) -> np.ndarray:
    c = np.cumsum(probs, axis=-1)
    c[..., -1] = 1.0
    return c


def draw(cdf_rows: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Inverse-cdf draw, one row per sample; padding beyond the domain must be 1"""
    return (cdf_rows <= u[:, None]).sum(axis=1)


def cdf_tables(model: ProbabilityModel) -> np.ndarray:
    """
    cdf[i, r] is the cumulative p(x_i | x_neighbor = r),
    every row is the marginal for variables without a neighbor.
    """
    sizes = model.domain_sizes
    dmax = int(sizes.max())
    cdf = np.ones((model.n, dmax, dmax))
    for i in range(model.n):
        d = int(sizes[i])
        cdf[i, :, :d] = _cdf(model.marginals[i])
        if model.conditionals[i] is not None:
            rows = _cdf(model.conditionals[i])
            cdf[i, : rows.shape[0], :d] = rows
    return cdf


def gibbs_sample_batch(
    model: ProbabilityModel,
    count: int,
    gen: np.random.Generator,
    sweep_multiplier: Optional[int] = None,
) -> np.ndarray:
    """
    `count` independent chains of multiplier * n single-site updates,
    each update picks a variable uniformly and redraws it from
    p(x_i | current neighbor value) or its marginal.

    Variables that neither have nor are a neighbor don't interact with the chain,
    they end as a marginal draw if they were picked at least once.
    The rest runs as a chain over the dependent variables only,
    with the number of its steps taken from the same multinomial split.
    """
    if sweep_multiplier is None:
        sweep_multiplier = config.GIBBS_SWEEP_MULTIPLIER
    n = model.n
    sizes = model.domain_sizes
    steps = sweep_multiplier * n
    x = gen.integers(0, sizes, size=(count, n))
    picks = gen.multinomial(steps, np.full(n, 1.0 / n), size=count)
    cdf = cdf_tables(model)

    nb = model.neighbors
    dependent = sorted(set(np.flatnonzero(nb >= 0).tolist()) | set(nb[nb >= 0].tolist()))
    is_dep = np.zeros(n, dtype=bool)
    is_dep[dependent] = True

    for i in np.flatnonzero(~is_dep):
        chosen = picks[:, i] > 0
        u = gen.random(count)
        x[chosen, i] = draw(cdf[i, np.zeros(count, dtype=np.int64)], u)[chosen]

    if not dependent:
        return x
    dep = np.array(dependent, dtype=np.int64)
    parent = np.where(nb >= 0, nb, np.arange(n))
    chain_steps = picks[:, dep].sum(axis=1)
    total = int(chain_steps.max())
    rows = np.arange(count)
    t = 0
    while t < total:
        block = min(BLOCK, total - t)
        var_block = dep[gen.integers(0, len(dep), size=(block, count))]
        u_block = gen.random((block, count))
        for s in range(block):
            var = var_block[s]
            active = chain_steps > t + s
            new = draw(cdf[var, x[rows, parent[var]]], u_block[s])
            x[rows, var] = np.where(active, new, x[rows, var])
        t += block
    return x


def gibbs_sample(
    model: ProbabilityModel,
    spec: ProblemSpec,
    seed: int,
    repairer=None,
    sweep_multiplier: Optional[int] = None,
) -> Solution:
    """One solution from a Gibbs chain, repaired when a repairer is given"""
    gen = rng.generator(seed, "gibbs")
    values = gibbs_sample_batch(model, 1, gen, sweep_multiplier)[0]
    s = make_solution(spec, values)
    if repairer is not None:
        s = repairer(s, rng.derive_seed(seed, "repair")).repaired
    return s


def dependency_forest(
    model: ProbabilityModel, stats: DependencyStats, gen: Optional[np.random.Generator] = None
) -> List[Tuple[int, List[Tuple[int, int]]]]:
    """
    Maximum chi-square spanning forest over the significant pairs.
    Returns (root, parent-child edges in traversal order) per tree,
    roots are random with a generator and the lowest index without one.
    """
    graph = nx.Graph()
    graph.add_nodes_from(range(model.n))
    for i, j in stats.significant_pairs():
        graph.add_edge(i, j, weight=float(stats.chi2[i, j]))
    forest = nx.maximum_spanning_tree(graph)
    trees = []
    for comp in sorted(nx.connected_components(forest), key=min):
        nodes = sorted(comp)
        root = nodes[0] if gen is None else nodes[int(gen.integers(len(nodes)))]
        trees.append((root, list(nx.bfs_edges(forest, root, sort_neighbors=sorted))))
    return trees


def ancestral_sample_batch(
    model: ProbabilityModel,
    stats: DependencyStats,
    count: int,
    gen: np.random.Generator,
    random_roots: bool = True,
) -> np.ndarray:
    """Roots from marginals, then every child from p(child | sampled parent)"""
    x = np.zeros((count, model.n), dtype=np.int64)
    trees = dependency_forest(model, stats, gen if random_roots else None)
    for root, edges in trees:
        marginal = _cdf(model.marginals[root])
        x[:, root] = draw(np.tile(marginal, (count, 1)), gen.random(count))
        for parent, child in edges:
            cdf = _cdf(model.conditional(child, parent))
            x[:, child] = draw(cdf[x[:, parent]], gen.random(count))
    return x


def bmda_ancestral_sample(
    model: ProbabilityModel,
    stats: DependencyStats,
    seed: int,
    spec: Optional[ProblemSpec] = None,
    repairer=None,
) -> Solution:
    """One solution by ancestral sampling, repaired when a repairer is given"""
    gen = rng.generator(seed, "ancestral")
    values = ancestral_sample_batch(model, stats, 1, gen)[0]
    if spec is None:
        return Solution(tuple(int(v) for v in values), 0)
    s = make_solution(spec, values)
    if repairer is not None:
        s = repairer(s, rng.derive_seed(seed, "repair")).repaired
    return s
