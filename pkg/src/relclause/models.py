"""Symbolic disambiguation taggers standing in for LM-backed parsers.

The neural encoder is replaced by hand-coded lexical features over a
log-linear decision layer: a frequency-derived bias reproduces the
training-data skew, grounding features reward the reading whose head noun
filled the matching slot of the prior sentence, and a lexical-block feature
forces the only plausible reading when the nouns' semantic classes cannot
be swapped.  Finetuning reweights the decision layer only; the feature
extraction itself (the simulated encoder) stays frozen.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import math
import random
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Callable, Iterable

from .clausegen import (
    Order,
    TestItem,
    relative_clause_labels,
    relative_clause_supertags,
)
from .selpref import NounEntry, ReversibilityClass, SemanticClass, SvoTriple
from .typelogic import Formula, Reading, extract_reading
from .udencoding import RelPosLabel, extract_reading_ud


class LeakageError(ValueError):
    pass


class Regime(Enum):
    NPN = "npn"
    UD = "ud"


class DecisionMode(Enum):
    ARGMAX = "argmax"
    STOCHASTIC = "stochastic"


PAD_TOKEN = "<pad>"

GROUNDING_WEIGHT = 100.0
BLOCK_WEIGHT = 100.0


@dataclass(frozen=True)
class TaggerInput:
    prior: tuple[str, ...] | None
    target: tuple[str, ...]
    context_enabled: bool
    pad_prefix: tuple[str, ...] = ()


@dataclass(frozen=True)
class TaggerOutput:
    regime: Regime
    supertags: tuple[Formula, ...] | None = None
    labels: tuple[RelPosLabel, ...] | None = None

    def __post_init__(self) -> None:
        if self.regime is Regime.NPN and (self.supertags is None or self.labels is not None):
            raise ValueError("NPN output carries supertags only")
        if self.regime is Regime.UD and (self.labels is None or self.supertags is not None):
            raise ValueError("UD output carries labels only")

    @property
    def reading(self) -> Reading:
        """Derived from the emitted analysis, never stored independently."""
        if self.regime is Regime.NPN:
            return extract_reading(self.supertags[2])
        return extract_reading_ud(list(self.labels), 2)


@dataclass(frozen=True)
class BiasProfile:
    subj_rel_count: int
    obj_rel_count: int

    def __post_init__(self) -> None:
        if self.subj_rel_count < 0 or self.obj_rel_count < 0:
            raise ValueError("profile counts must be nonnegative")
        if self.subj_rel_count + self.obj_rel_count == 0:
            raise ValueError("profile needs at least one observation")

    @property
    def log_odds(self) -> float:
        # Half-count smoothing keeps zero-count profiles finite.
        return math.log((self.subj_rel_count + 0.5) / (self.obj_rel_count + 0.5))


DEFAULT_PROFILE = BiasProfile(306, 32)


# ---------------------------------------------------------------------------
# Lexical knowledge (the frozen encoder substitute)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LexicalKnowledge:
    """Selectional knowledge distilled from the triple inventory."""

    noun_classes: dict[str, SemanticClass]
    strata: dict[tuple[str, str, str], ReversibilityClass]
    frames: dict[str, frozenset[tuple[SemanticClass, SemanticClass]]]

    @classmethod
    def from_inventory(
        cls, triples: Iterable[SvoTriple], lexicon: dict[str, NounEntry]
    ) -> "LexicalKnowledge":
        noun_classes = {lemma: entry.semantic_class for lemma, entry in lexicon.items()}
        strata: dict[tuple[str, str, str], ReversibilityClass] = {}
        frames: dict[str, set[tuple[SemanticClass, SemanticClass]]] = {}
        for triple in triples:
            strata[triple.key()] = triple.reversibility
            frames.setdefault(triple.verb, set()).add((triple.subject_class, triple.object_class))
        return cls(
            noun_classes=noun_classes,
            strata=strata,
            frames={verb: frozenset(pairs) for verb, pairs in frames.items()},
        )


EMPTY_KNOWLEDGE = LexicalKnowledge(noun_classes={}, strata={}, frames={})


@dataclass(frozen=True)
class Features:
    head_in_prior_subject: int = 0
    head_in_prior_object: int = 0
    stratum: ReversibilityClass | None = None
    order: Order | None = None
    block: int = 0
    """+1 when only the subject-relative reading is class-plausible, -1 the inverse."""


def _clean(token: str) -> str:
    return token.lower().rstrip(".")


def extract_features(input_: TaggerInput, knowledge: LexicalKnowledge) -> Features:
    """Features of a six-token relative clause, optionally grounded in its prior.

    Grounding features are zero whenever the context toggle is off, the prior
    is missing, or the clause does not match the `Det N Pron Det N V` shape.
    """
    target = [_clean(t) for t in input_.target]
    if len(target) != 6:
        return Features()
    head, embedded, verb = target[1], target[4], target[5]

    stratum = order = None
    if (head, verb, embedded) in knowledge.strata:
        stratum, order = knowledge.strata[(head, verb, embedded)], Order.S_DIE_O_V
    elif (embedded, verb, head) in knowledge.strata:
        stratum, order = knowledge.strata[(embedded, verb, head)], Order.O_DIE_S_V

    block = 0
    head_class = knowledge.noun_classes.get(head)
    embedded_class = knowledge.noun_classes.get(embedded)
    pairs = knowledge.frames.get(verb, frozenset())
    if head_class is not None and embedded_class is not None and head_class != embedded_class:
        canonical = (head_class, embedded_class) in pairs
        inverted = (embedded_class, head_class) in pairs
        if canonical and not inverted:
            block = 1
        elif inverted and not canonical:
            block = -1

    in_subject = in_object = 0
    if input_.context_enabled and input_.prior is not None:
        prior = [_clean(t) for t in input_.prior]
        if len(prior) == 5:
            if head == prior[1]:
                in_subject = 1
            if head == prior[4]:
                in_object = 1
    return Features(in_subject, in_object, stratum, order, block)


# ---------------------------------------------------------------------------
# Decision layer
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DecisionWeights:
    """Log-linear weights; positive scores favour the subject-relative reading."""

    bias: float
    head_in_prior_subject: float = 0.0
    head_in_prior_object: float = 0.0
    stratum: dict[ReversibilityClass, float] = field(default_factory=dict)
    order: dict[Order, float] = field(default_factory=dict)
    lexical_block: float = BLOCK_WEIGHT

    def score(self, features: Features) -> float:
        total = self.bias
        total += self.head_in_prior_subject * features.head_in_prior_subject
        total += self.head_in_prior_object * features.head_in_prior_object
        if features.stratum is not None:
            total += self.stratum.get(features.stratum, 0.0)
        if features.order is not None:
            total += self.order.get(features.order, 0.0)
        total += self.lexical_block * features.block
        return total


def _decision_draw(seed: int, target: tuple[str, ...]) -> float:
    """Uniform draw that depends only on the tagger seed and the target clause."""
    digest = hashlib.sha256(f"{seed}|{' '.join(target)}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") / 2**64


@dataclass(frozen=True)
class FeatureTagger:
    """Immutable tagger: a feature extractor plus decision weights."""

    kind: str
    regime: Regime
    mode: DecisionMode
    seed: int
    profile: BiasProfile
    knowledge: LexicalKnowledge
    weights: DecisionWeights

    def decide(self, input_: TaggerInput) -> Reading:
        features = extract_features(input_, self.knowledge)
        score = self.weights.score(features)
        if self.mode is DecisionMode.ARGMAX:
            return Reading.SUBJ_REL if score >= 0 else Reading.OBJ_REL
        draw = _decision_draw(self.seed, input_.target)
        probability = 1.0 / (1.0 + math.exp(-score))
        return Reading.SUBJ_REL if draw < probability else Reading.OBJ_REL

    def tag(self, input_: TaggerInput) -> TaggerOutput:
        reading = self.decide(input_)
        if self.regime is Regime.NPN:
            return TaggerOutput(regime=self.regime, supertags=relative_clause_supertags(reading))
        return TaggerOutput(regime=self.regime, labels=relative_clause_labels(reading))

    def with_weights(self, weights: DecisionWeights) -> "FeatureTagger":
        return dataclasses.replace(self, weights=weights)


def biased_baseline(
    profile: BiasProfile = DEFAULT_PROFILE,
    knowledge: LexicalKnowledge = EMPTY_KNOWLEDGE,
    regime: Regime = Regime.NPN,
    mode: DecisionMode = DecisionMode.ARGMAX,
    seed: int = 0,
) -> FeatureTagger:
    """Tagger reproducing the training-data skew; the prior sentence is ignored.

    Reversible clauses get the subject-relative reading with the profile's
    frequency (always, in argmax mode); clauses whose noun classes admit only
    one reading get that reading regardless.
    """
    weights = DecisionWeights(bias=profile.log_odds)
    return FeatureTagger("baseline", regime, mode, seed, profile, knowledge, weights)


def grounding_tagger(
    knowledge: LexicalKnowledge,
    profile: BiasProfile = DEFAULT_PROFILE,
    regime: Regime = Regime.NPN,
    mode: DecisionMode = DecisionMode.ARGMAX,
    seed: int = 0,
) -> FeatureTagger:
    """Tagger that reads the head noun's grammatical slot off the prior sentence.

    With context disabled, or the head noun absent from the prior, the
    grounding features vanish and the decision reduces to the baseline's.
    """
    weights = DecisionWeights(
        bias=profile.log_odds,
        head_in_prior_subject=GROUNDING_WEIGHT,
        head_in_prior_object=-GROUNDING_WEIGHT,
    )
    return FeatureTagger("grounding", regime, mode, seed, profile, knowledge, weights)


TaggerFactory = Callable[..., FeatureTagger]

TAGGER_FACTORIES: dict[str, TaggerFactory] = {}
"""Plugin hook: external taggers may register a factory under a new name."""


def register_tagger(name: str, factory: TaggerFactory) -> None:
    if name in TAGGER_FACTORIES:
        raise ValueError(f"tagger {name!r} already registered")
    TAGGER_FACTORIES[name] = factory


register_tagger("baseline", biased_baseline)
register_tagger("grounding", grounding_tagger)


# ---------------------------------------------------------------------------
# Finetuning
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LearningConfig:
    learning_rate: float = 1.0
    weight_cap: float = 10.0
    seed: int = 0


def tagger_input_from_item(
    item: TestItem, context_enabled: bool, pad_prefix: tuple[str, ...] = ()
) -> TaggerInput:
    prior = tuple(item.prior.split()) if item.prior is not None else None
    return TaggerInput(
        prior=prior,
        target=tuple(item.target.split()),
        context_enabled=context_enabled,
        pad_prefix=pad_prefix,
    )


def finetune(
    tagger: FeatureTagger,
    train_items: list[TestItem],
    epochs: int,
    config: LearningConfig = LearningConfig(),
    eval_items: list[TestItem] | None = None,
) -> FeatureTagger:
    """Perceptron-style reweighting of the decision layer on grounded items.

    Only the grounding, stratum and order weights move, each capped at
    +/- weight_cap from its initial value; the bias, the lexical block and
    the feature extraction stay frozen.  Returns a new tagger.  Passing the
    evaluation items enables the verb-leakage guard.
    """
    if eval_items is not None:
        train_verbs = {item.triple.verb for item in train_items}
        eval_verbs = {item.triple.verb for item in eval_items}
        shared = train_verbs & eval_verbs
        if shared:
            raise LeakageError(f"train and eval share verbs: {sorted(shared)}")

    initial = tagger.weights
    adjust: dict[str, float] = {"subj": 0.0, "obj": 0.0}
    adjust.update({f"stratum:{s.value}": 0.0 for s in ReversibilityClass})
    adjust.update({f"order:{o.value}": 0.0 for o in Order})

    def clip(value: float) -> float:
        return max(-config.weight_cap, min(config.weight_cap, value))

    def current() -> DecisionWeights:
        return DecisionWeights(
            bias=initial.bias,
            head_in_prior_subject=initial.head_in_prior_subject + adjust["subj"],
            head_in_prior_object=initial.head_in_prior_object + adjust["obj"],
            stratum={s: initial.stratum.get(s, 0.0) + adjust[f"stratum:{s.value}"]
                     for s in ReversibilityClass},
            order={o: initial.order.get(o, 0.0) + adjust[f"order:{o.value}"]
                   for o in Order},
            lexical_block=initial.lexical_block,
        )

    rng = random.Random(config.seed)
    indices = list(range(len(train_items)))
    for _ in range(epochs):
        rng.shuffle(indices)
        for index in indices:
            item = train_items[index]
            features = extract_features(
                tagger_input_from_item(item, context_enabled=True), tagger.knowledge
            )
            score = current().score(features)
            predicted = 1 if score >= 0 else -1
            gold = 1 if item.expected is Reading.SUBJ_REL else -1
            if predicted == gold:
                continue
            step = config.learning_rate * gold
            if features.head_in_prior_subject:
                adjust["subj"] = clip(adjust["subj"] + step)
            if features.head_in_prior_object:
                adjust["obj"] = clip(adjust["obj"] + step)
            if features.stratum is not None:
                key = f"stratum:{features.stratum.value}"
                adjust[key] = clip(adjust[key] + step)
            if features.order is not None:
                key = f"order:{features.order.value}"
                adjust[key] = clip(adjust[key] + step)
    return tagger.with_weights(current())


# ---------------------------------------------------------------------------
# Position-shift augmentation
# ---------------------------------------------------------------------------

def pad_shift(
    input_: TaggerInput, min_pad: int, max_pad: int, seed: int = 0
) -> TaggerInput:
    """Prepend a seeded-random number of unattended padding tokens."""
    if not 0 <= min_pad <= max_pad:
        raise ValueError("need 0 <= min_pad <= max_pad")
    k = random.Random(seed).randint(min_pad, max_pad)
    return dataclasses.replace(input_, pad_prefix=(PAD_TOKEN,) * k + input_.pad_prefix)


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

def tagger_to_dict(tagger: FeatureTagger) -> dict:
    return {
        "kind": tagger.kind,
        "regime": tagger.regime.value,
        "mode": tagger.mode.value,
        "seed": tagger.seed,
        "profile": [tagger.profile.subj_rel_count, tagger.profile.obj_rel_count],
        "weights": {
            "bias": tagger.weights.bias,
            "head_in_prior_subject": tagger.weights.head_in_prior_subject,
            "head_in_prior_object": tagger.weights.head_in_prior_object,
            "stratum": {s.value: w for s, w in sorted(tagger.weights.stratum.items(), key=lambda kv: kv[0].value)},
            "order": {o.value: w for o, w in sorted(tagger.weights.order.items(), key=lambda kv: kv[0].value)},
            "lexical_block": tagger.weights.lexical_block,
        },
        "knowledge": {
            "noun_classes": {k: v.value for k, v in sorted(tagger.knowledge.noun_classes.items())},
            "strata": [[s, v, o, r.value] for (s, v, o), r in sorted(tagger.knowledge.strata.items())],
            "frames": {
                verb: sorted([a.value, b.value] for a, b in pairs)
                for verb, pairs in sorted(tagger.knowledge.frames.items())
            },
        },
    }


def tagger_from_dict(data: dict) -> FeatureTagger:
    weights = DecisionWeights(
        bias=data["weights"]["bias"],
        head_in_prior_subject=data["weights"]["head_in_prior_subject"],
        head_in_prior_object=data["weights"]["head_in_prior_object"],
        stratum={ReversibilityClass(k): v for k, v in data["weights"]["stratum"].items()},
        order={Order(k): v for k, v in data["weights"]["order"].items()},
        lexical_block=data["weights"]["lexical_block"],
    )
    knowledge = LexicalKnowledge(
        noun_classes={k: SemanticClass(v) for k, v in data["knowledge"]["noun_classes"].items()},
        strata={(s, v, o): ReversibilityClass(r) for s, v, o, r in data["knowledge"]["strata"]},
        frames={
            verb: frozenset((SemanticClass(a), SemanticClass(b)) for a, b in pairs)
            for verb, pairs in data["knowledge"]["frames"].items()
        },
    )
    return FeatureTagger(
        kind=data["kind"],
        regime=Regime(data["regime"]),
        mode=DecisionMode(data["mode"]),
        seed=data["seed"],
        profile=BiasProfile(*data["profile"]),
        knowledge=knowledge,
        weights=weights,
    )


def save_tagger(tagger: FeatureTagger, path: str | Path) -> None:
    Path(path).write_text(json.dumps(tagger_to_dict(tagger), indent=2) + "\n", encoding="utf-8")


def load_tagger(path: str | Path) -> FeatureTagger:
    return tagger_from_dict(json.loads(Path(path).read_text(encoding="utf-8")))
