"""Shared builders for tests: hand-built instances and randomized worlds."""

from __future__ import annotations

import numpy as np

from brex.corpus import EntityPair, Instance, Template, TypedEntity
from brex.model import RunConfig, SeedState
from brex.similarity import MEASURE_KINDS, SimilarityMeasure

DIM = 6


def vec(*components, dim=DIM):
    out = np.zeros(dim, dtype=np.float64)
    out[:len(components)] = components
    return out


def unit(v):
    norm = np.linalg.norm(v)
    return v / norm if norm > 0 else v


def axis(k, dim=DIM):
    out = np.zeros(dim, dtype=np.float64)
    out[k] = 1.0
    return out


def make_template(v_before=None, v_between=None, v_after=None,
                  types=("ORG", "ORG"), dim=DIM):
    zero = np.zeros(dim, dtype=np.float64)
    return Template(
        v_before=zero if v_before is None else np.asarray(v_before, dtype=np.float64),
        v_between=zero if v_between is None else np.asarray(v_between, dtype=np.float64),
        v_after=zero if v_after is None else np.asarray(v_after, dtype=np.float64),
        type_pair=types,
    )


_COUNTER = [0]


def make_instance(e1="A", e2="B", template=None, iid=None, types=("ORG", "ORG"),
                  sid=0, tokens_between=("ctx",)):
    if template is None:
        template = make_template(v_between=axis(0), types=types)
    if iid is None:
        _COUNTER[0] += 1
        iid = f"t{_COUNTER[0]}"
    pair = EntityPair(TypedEntity(e1, types[0]), TypedEntity(e2, types[1]))
    return Instance(id=iid, pair=pair, template=template, sentence_ref=sid,
                    tokens_between=tuple(tokens_between))


def rand_window(rng, dim=DIM, p_zero=0.3):
    if rng.random() < p_zero:
        return np.zeros(dim, dtype=np.float64)
    return unit(rng.normal(size=dim))


def rand_template(rng, types=("ORG", "ORG"), dim=DIM):
    return Template(
        v_before=rand_window(rng, dim),
        v_between=rand_window(rng, dim),
        v_after=rand_window(rng, dim),
        type_pair=types,
    )


def random_world(seed, max_instances=50):
    """A random instance set, seed state, and config for engine law tests."""
    rng = np.random.default_rng(seed)
    entity_pool = [("Acme", "ORG"), ("Bolt", "ORG"), ("Crow", "PER"),
                   ("Dune", "ORG"), ("Echo", "PER"), ("Flux", "ORG")]
    n = int(rng.integers(8, max_instances + 1))
    instances = []
    for k in range(n):
        i1, i2 = rng.choice(len(entity_pool), size=2, replace=False)
        s1, t1 = entity_pool[i1]
        s2, t2 = entity_pool[i2]
        template = rand_template(rng, types=(t1, t2))
        instances.append(
            Instance(id=f"r{k}",
                     pair=EntityPair(TypedEntity(s1, t1), TypedEntity(s2, t2)),
                     template=template, sentence_ref=k, tokens_between=("w",))
        )
    pairing = ("ordered", "biset")[int(rng.integers(2))]
    state = SeedState.empty(pairing)
    for idx in rng.choice(n, size=int(rng.integers(1, 4)), replace=False):
        state.pos_pairs.add(instances[idx].pair)
    for idx in rng.choice(n, size=int(rng.integers(0, 3)), replace=False):
        if instances[idx].pair not in state.pos_pairs:
            state.neg_pairs.add(instances[idx].pair)
    for idx in rng.choice(n, size=int(rng.integers(0, 3)), replace=False):
        state.pos_templates.add(instances[idx].template)
    if rng.random() < 0.3:
        state.neg_templates.add(rand_template(rng))
    cfg = RunConfig(
        mode=("bree", "bret", "brej")[int(rng.integers(3))],
        measure=SimilarityMeasure(kind=MEASURE_KINDS[int(rng.integers(4))]),
        tau_sim=float(rng.uniform(0.55, 0.9)),
        tau_cnf=float(rng.uniform(0.5, 0.9)),
        pairing=pairing,
    )
    return instances, state, cfg
