"""Shared helpers: synthetic corpora with known generating processes."""

from __future__ import annotations

import random
from importlib import resources

import pytest

from chasepressure.markov import Discretizer
from chasepressure.pressure import PiSequence

FIXTURES = resources.files("chasepressure.data") / "fixtures"


def fixture_text(name: str) -> str:
    return (FIXTURES / name).read_text()


def random_kernel(k: int, states: list[int], rng: random.Random,
                  concentration: float = 0.25) -> dict:
    """A random order-k transition kernel over grid indices.

    Each context gets a sparse-ish distribution so different orders are
    statistically distinguishable.
    """
    from itertools import product

    kernel = {}
    for ctx in product(states, repeat=k):
        weights = [rng.random() ** (1 / concentration) for _ in states]
        total = sum(weights)
        kernel[ctx] = [(s, w / total) for s, w in zip(states, weights)]
    return kernel


def sample_chain(kernel, k: int, length: int, states: list[int],
                 rng: random.Random, d: Discretizer) -> list[float]:
    seq = [rng.choice(states) for _ in range(k)]
    for _ in range(length - k):
        ctx = tuple(seq[-k:])
        r = rng.random()
        cum = 0.0
        for s, p in kernel[ctx]:
            cum += p
            if r <= cum:
                seq.append(s)
                break
        else:
            seq.append(kernel[ctx][-1][0])
    return [d.value(i) for i in seq]


def markov_corpus(k: int, n_seqs: int, length: int, seed: int,
                  states: list[int] | None = None,
                  kernel: dict | None = None) -> list[PiSequence]:
    """Sequences drawn from a known order-k chain; the kernel is the oracle."""
    rng = random.Random(seed)
    states = states or [8, 9, 10, 11, 12]  # PI 0.8 .. 1.2 on the 0.1 grid
    kernel = kernel or random_kernel(k, states, rng)
    d = Discretizer(0.1)
    return [
        PiSequence(values=sample_chain(kernel, k, length, states, rng, d),
                   match_id=f"m{i}", competition="synthetic",
                   home_away="home" if i % 2 else "away", won=bool(i % 3))
        for i in range(n_seqs)
    ]


@pytest.fixture
def small_corpus():
    return markov_corpus(k=2, n_seqs=40, length=20, seed=7)
