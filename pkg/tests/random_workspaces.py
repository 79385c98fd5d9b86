"""Seeded random workspaces covering every section and value kind."""

import random
from fractions import Fraction

from hyperdist import Channel, Copower, Dist, Dists, Finite, Numeric, Predicate, Product, SubDist, Sum
from hyperdist.workspace import Workspace


def _masses(rng, k, total=Fraction(1)):
    counts = [rng.randint(0, 5) for _ in range(k)]
    if sum(counts) == 0:
        counts[rng.randrange(k)] = 1
    s = sum(counts)
    return [total * c / s for c in counts]


def _dist(rng, sp, labels=None, kind=Dist):
    labels = list(sp.labels if labels is None else labels)
    total = Fraction(rng.randint(0, 4), 4) if kind is SubDist else Fraction(1)
    return kind(sp, dict(zip(labels, _masses(rng, len(labels), total))))


def _support(rng, sp, k):
    """Up to k distinct labels of a finite space."""
    labels = list(sp.labels)
    rng.shuffle(labels)
    return labels[: rng.randint(1, min(k, len(labels)))]


def random_workspace(seed: int) -> Workspace:
    rng = random.Random(seed)
    ws = Workspace()
    spaces = []
    for j in range(rng.randint(1, 3)):
        name = "S" + str(j)
        labels = tuple(f"{chr(97 + j)}{i}" for i in range(rng.randint(1, 4)))
        sp = Finite(name, labels)
        spaces.append(sp)
        ws.spaces[name] = sp

    def some_space():
        return rng.choice(spaces)

    def composite():
        A, B = some_space(), some_space()
        return rng.choice([A, Numeric(rng.randint(1, 3)), Copower(rng.randint(1, 3), A), Product(A, B), Sum(A, B)])

    for i in range(rng.randint(0, 3)):
        ws.dists[f"d{i}"] = _dist(rng, composite())
    for i in range(rng.randint(0, 2)):
        ws.subdists[f"sd{i}"] = _dist(rng, composite(), kind=SubDist)
    if rng.random() < 0.5:
        # a distribution over distributions, finitely supported
        A = some_space()
        inner = {_dist(rng, A) for _ in range(3)}
        ws.dists["dd"] = _dist(rng, Dists(A), sorted(inner, key=str))
    for i in range(rng.randint(0, 2)):
        src, tgt = some_space(), composite()
        ws.channels[f"c{i}"] = Channel(src, tgt, {a: _dist(rng, tgt) for a in src.labels})
    for i in range(rng.randint(0, 2)):
        src, n = some_space(), rng.randint(1, 3)
        ws.tests[f"t{i}"] = Channel(src, Numeric(n), {a: _dist(rng, Numeric(n)) for a in src.labels})
    for i in range(rng.randint(0, 2)):
        sp = rng.choice([some_space(), composite()])
        ws.predicates[f"p{i}"] = Predicate(sp, {a: Fraction(rng.randint(0, 6), 6) for a in sp.labels})
    for i in range(rng.randint(0, 2)):
        A, n = some_space(), rng.randint(1, 3)
        tags = rng.sample(range(n), rng.randint(1, n))
        sp = Copower(n, Dists(A))
        points = [(t, _dist(rng, A)) for t in tags]
        ws.hyperdists[f"h{i}"] = _dist(rng, sp, points)
    if rng.random() < 0.5:
        sp = composite()
        ws.labels["x"] = (sp, rng.choice(_support(rng, sp, 4)))
    return ws
