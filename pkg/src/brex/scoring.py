"""Extractor reliability, instance confidence, and the extractor taxonomy.

Reliability of a cluster with p positive, n negative, and u unknown matches:

    p / (p + w_neg * n + w_unk * u)        (0 when p == 0)

which is the same ratio as 1 / (1 + w_neg*n/p + w_unk*u/p) but stays exact for
small integer counts. Positive/negative counts are mode-dependent: entity-pair
membership for BREE, template-set similarity for BRET, and their sum for BREJ
(an instance matching both channels counts twice). Unknown counts are always
entity-pair based.
"""

from __future__ import annotations

import hashlib

from .corpus import Instance
from .model import Extractor, PairSet, RunConfig, SeedState, TemplateSet
from .similarity import sim_instance_cluster, sim_instance_templateset

CATEGORIES = ("NNHC", "NNLC", "NHC", "NLC")


def reliability(n_pos: float, n_neg: float, n_unknown: float,
                w_neg: float, w_unk: float) -> float:
    if n_pos <= 0:
        return 0.0
    return n_pos / (n_pos + w_neg * n_neg + w_unk * n_unknown)


def count_positives(extractor: Extractor, pairs: PairSet, templates: TemplateSet,
                    cfg: RunConfig) -> float:
    """Count members matching the given seed sets under the mode's channels."""
    pair_count = 0
    if cfg.mode in ("bree", "brej"):
        pair_count = sum(1 for m in extractor.members if m.pair in pairs)
        if cfg.mode == "bree":
            return float(pair_count)
    template_count = sum(
        1 for m in extractor.members
        if sim_instance_templateset(m, templates, cfg.measure) >= cfg.tau_sim
    )
    if cfg.mode == "bret":
        return float(template_count)
    return float(pair_count + template_count)


def count_unknown(extractor: Extractor, state: SeedState) -> int:
    """Members whose entity pair is in neither the positive nor negative pair set."""
    return sum(
        1 for m in extractor.members
        if m.pair not in state.pos_pairs and m.pair not in state.neg_pairs
    )


def extractor_confidence(extractor: Extractor, state: SeedState,
                         cfg: RunConfig) -> float:
    p = count_positives(extractor, state.pos_pairs, state.pos_templates, cfg)
    n = count_positives(extractor, state.neg_pairs, state.neg_templates, cfg)
    u = count_unknown(extractor, state)
    return reliability(p, n, u, cfg.w_neg, cfg.w_unk)


def score_extractor(extractor: Extractor, state: SeedState, cfg: RunConfig) -> None:
    """Fill the extractor's count and confidence fields in place."""
    extractor.n_pos = count_positives(extractor, state.pos_pairs,
                                      state.pos_templates, cfg)
    extractor.n_neg = count_positives(extractor, state.neg_pairs,
                                      state.neg_templates, cfg)
    extractor.n_unknown = count_unknown(extractor, state)
    extractor.confidence = reliability(extractor.n_pos, extractor.n_neg,
                                       extractor.n_unknown, cfg.w_neg, cfg.w_unk)


def soft_or(values) -> float:
    """1 - prod(1 - v): the soft maximum; empty input gives 0."""
    remainder = 1.0
    for value in values:
        remainder *= 1.0 - value
    return 1.0 - remainder


def instance_cluster_confidence(instance: Instance, extractor: Extractor,
                                cfg: RunConfig, cache: dict | None = None) -> float:
    """Scored-extractor confidence times the instance's similarity to it."""
    return extractor.confidence * sim_instance_cluster(
        instance, extractor, cfg.measure, cache
    )


def instance_confidence(instance: Instance, extractors, cfg: RunConfig,
                        cache: dict | None = None) -> float:
    """Soft-or of per-extractor confidences over the extractors covering the instance.

    An extractor covers the instance when the cluster similarity reaches
    tau_sim. With no covering extractor the confidence is 0. Extractors must
    already be scored.
    """
    parts = []
    for extractor in extractors:
        sim = sim_instance_cluster(instance, extractor, cfg.measure, cache)
        if sim >= cfg.tau_sim:
            parts.append(extractor.confidence * sim)
    return soft_or(parts)


def categorize_extractor(extractor: Extractor, noisy: bool, cfg: RunConfig) -> str:
    """Cross the human noisiness label with the tau_cnf confidence split."""
    high = extractor.confidence >= cfg.tau_cnf
    if noisy:
        return "NHC" if high else "NLC"
    return "NNHC" if high else "NNLC"


def extractor_signature(extractor: Extractor) -> str:
    """Stable content address: hash of the sorted member ids."""
    joined = ",".join(sorted(m.id for m in extractor.members))
    return hashlib.sha256(joined.encode("utf-8")).hexdigest()[:16]
