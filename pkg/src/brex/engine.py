"""The bootstrap loop: seed matching, threshold clustering, cluster growth,
candidate expansion, instance checking, and seed augmentation.

Each iteration over the frozen instance set:

  1. hop 1: collect instances matching the grown seeds (mode-dependent) and
     cluster them single-pass in corpus order (first cluster within tau_sim,
     else a new singleton),
  2. hop 2: assign every remaining instance within tau_sim of a hop-1 cluster
     to its single closest cluster (ties to the lowest cluster id); the grown
     clusters are the extractors,
  3. hop 3: for every instance within tau_sim of an extractor, combine the
     covering extractors' confidences and accept it when the check passes,
  4. merge the iteration's accepted items into the yield.

Extractors are rebuilt from scratch every iteration; the yield only grows.
"""

from __future__ import annotations

import logging

from .corpus import Instance
from .model import BootstrapResult, Extractor, RunConfig, SeedState
from .scoring import instance_confidence, score_extractor
from .similarity import sim_instance_cluster, sim_instance_templateset

log = logging.getLogger(__name__)


def match_channels(instance: Instance, state: SeedState,
                   cfg: RunConfig) -> tuple[bool, bool]:
    """(pair-seed hit, template-seed hit) for one instance."""
    by_pair = instance.pair in state.pos_pairs
    by_template = (
        sim_instance_templateset(instance, state.pos_templates, cfg.measure)
        >= cfg.tau_sim
    )
    return by_pair, by_template


def match_instance(instance: Instance, state: SeedState, cfg: RunConfig) -> bool:
    """Hop-1 seed match: pair membership (BREE), template similarity (BRET),
    or their disjunction (BREJ)."""
    if cfg.mode == "bree":
        return instance.pair in state.pos_pairs
    by_template = (
        sim_instance_templateset(instance, state.pos_templates, cfg.measure)
        >= cfg.tau_sim
    )
    if cfg.mode == "bret":
        return by_template
    return instance.pair in state.pos_pairs or by_template


def cluster_hop1(hits: list[Instance], cfg: RunConfig,
                 cache: dict | None = None) -> list[Extractor]:
    """Single-pass threshold clustering in corpus order."""
    clusters: list[list[Instance]] = []
    for hit in hits:
        for members in clusters:
            if sim_instance_cluster(hit, members, cfg.measure, cache) >= cfg.tau_sim:
                members.append(hit)
                break
        else:
            clusters.append([hit])
    return [Extractor(id=k, members=members) for k, members in enumerate(clusters)]


def grow_hop2(theta: list[Extractor], instances: list[Instance], cfg: RunConfig,
              cache: dict | None = None) -> list[Extractor]:
    """Add every instance within tau_sim of a hop-1 cluster to its closest one.

    Similarities are evaluated against the original hop-1 members, ties break
    toward the lowest cluster id, and hop-1 members stay where they are.
    """
    grown = [Extractor(id=ex.id, members=list(ex.members)) for ex in theta]
    hop1_ids = {m.id for ex in theta for m in ex.members}
    for instance in instances:
        if instance.id in hop1_ids:
            continue
        best_idx, best_sim = -1, 0.0
        for idx, ex in enumerate(theta):
            sim = sim_instance_cluster(instance, ex, cfg.measure, cache)
            if sim > best_sim:
                best_idx, best_sim = idx, sim
        if best_idx >= 0 and best_sim >= cfg.tau_sim:
            grown[best_idx].members.append(instance)
    return grown


def expand_hop3(extractor: Extractor, instances: list[Instance], cfg: RunConfig,
                cache: dict | None = None) -> list[Instance]:
    """All instances within tau_sim of the extractor (may overlap other extractors)."""
    return [
        i for i in instances
        if sim_instance_cluster(i, extractor, cfg.measure, cache) >= cfg.tau_sim
    ]


def check_instance(instance: Instance, extractors: list[Extractor],
                   state: SeedState, cfg: RunConfig,
                   cache: dict | None = None) -> tuple[bool, float]:
    """Confidence-check one candidate against the scored extractors.

    BREE/BRET accept when the combined confidence reaches tau_cnf; BREJ
    additionally requires template-set similarity at tau_sim. An instance
    covered by no extractor is rejected with confidence 0.
    """
    confidence = instance_confidence(instance, extractors, cfg, cache)
    accept = confidence >= cfg.tau_cnf
    if accept and cfg.mode == "brej":
        accept = (
            sim_instance_templateset(instance, state.pos_templates, cfg.measure)
            >= cfg.tau_sim
        )
    return accept, confidence


def add_to_cache(instance: Instance, cache: SeedState, cfg: RunConfig) -> None:
    """Store the accepted instance's items: its pair (BREE), template (BRET), or both."""
    if cfg.mode in ("bree", "brej"):
        cache.pos_pairs.add(instance.pair)
    if cfg.mode in ("bret", "brej"):
        cache.pos_templates.add(instance.template)


def bootstrap(instances: list[Instance], seeds: SeedState,
              cfg: RunConfig) -> BootstrapResult:
    """Run the full loop for cfg.iterations and return yield, extractors,
    accepted instances with confidences, and per-iteration statistics."""
    original = seeds.copy()
    grown = seeds.copy()
    sim_cache: dict = {}
    accepted: list[tuple[Instance, float]] = []
    accepted_index: dict[str, int] = {}
    stats: list[dict] = []
    extractors: list[Extractor] = []
    diagnostic = None

    for iteration in range(1, cfg.iterations + 1):
        cache = SeedState.empty(cfg.pairing)
        hits = []
        hits_by_pair = hits_by_template = 0
        for instance in instances:
            by_pair, by_template = match_channels(instance, grown, cfg)
            hits_by_pair += by_pair
            hits_by_template += by_template
            matched = {
                "bree": by_pair,
                "bret": by_template,
                "brej": by_pair or by_template,
            }[cfg.mode]
            if matched:
                hits.append(instance)

        if not hits:
            stats.append({
                "iteration": iteration, "hits": 0,
                "hits_by_pair": hits_by_pair, "hits_by_template": hits_by_template,
                "extractors": 0, "candidates": 0,
                "accepted_new": 0, "accepted_total": len(accepted),
                "yield": grown.sizes(),
            })
            if iteration == 1:
                diagnostic = "no instance matched the initial seeds"
            break  # the yield cannot change, later iterations are identical

        theta = cluster_hop1(hits, cfg, sim_cache)
        extractors = grow_hop2(theta, instances, cfg, sim_cache)
        scoring_state = grown if cfg.score_against == "yield" else original
        for extractor in extractors:
            score_extractor(extractor, scoring_state, cfg)

        candidates = 0
        accepted_new = 0
        for instance in instances:
            covered = any(
                sim_instance_cluster(instance, ex, cfg.measure, sim_cache)
                >= cfg.tau_sim
                for ex in extractors
            )
            if not covered:
                continue
            candidates += 1
            ok, confidence = check_instance(instance, extractors, scoring_state,
                                            cfg, sim_cache)
            if not ok:
                continue
            add_to_cache(instance, cache, cfg)
            slot = accepted_index.get(instance.id)
            if slot is None:
                accepted_index[instance.id] = len(accepted)
                accepted.append((instance, confidence))
                accepted_new += 1
            elif confidence > accepted[slot][1]:
                accepted[slot] = (instance, confidence)

        grown.merge(cache)
        stats.append({
            "iteration": iteration, "hits": len(hits),
            "hits_by_pair": hits_by_pair, "hits_by_template": hits_by_template,
            "extractors": len(extractors), "candidates": candidates,
            "accepted_new": accepted_new, "accepted_total": len(accepted),
            "yield": grown.sizes(),
        })
        log.info("iteration %d: %d hits, %d extractors, %d candidates, %d accepted",
                 iteration, len(hits), len(extractors), candidates, accepted_new)

    return BootstrapResult(
        yield_state=grown,
        extractors=extractors,
        accepted=accepted,
        per_iteration_stats=stats,
        diagnostic=diagnostic,
    )
