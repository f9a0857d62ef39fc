"""Generation of the relative-clause disambiguation test set.

Every triple yields targets in both head orders, paired with grounding
prior sentences whose argument order fixes the expected reading.  Triples
whose arguments cannot be swapped only receive the canonical prior, since
the inverted prior would describe an implausible event.  Items carry gold
analyses for both parse-encoding regimes, and the train/dev/test split
keeps verb lemmas disjoint.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Iterable

from .selpref import NounEntry, ReversibilityClass, SvoTriple, triple_from_dict, triple_to_dict
from .typelogic import Formula, Reading, extract_reading, format_formula, parse_formula
from .udencoding import DepTree, RelPosLabel, ROOT_LABEL, extract_reading_ud


class MissingGender(KeyError):
    pass


class SchemaError(ValueError):
    """Bad test-item record; `line` is the 1-based line number."""

    def __init__(self, message: str, line: int) -> None:
        super().__init__(f"line {line}: {message}")
        self.line = line


class Order(Enum):
    S_DIE_O_V = "SdieOV"
    O_DIE_S_V = "OdieSV"


class PriorOrder(Enum):
    SVO = "SVO"
    OVS = "OVS"


def expected_reading(order: Order, prior_order: PriorOrder) -> Reading:
    """The reading forced by presenting `order` after a prior in `prior_order`."""
    if prior_order is PriorOrder.SVO:
        return Reading.SUBJ_REL if order is Order.S_DIE_O_V else Reading.OBJ_REL
    return Reading.OBJ_REL if order is Order.S_DIE_O_V else Reading.SUBJ_REL


# ---------------------------------------------------------------------------
# Gold analyses for the six-token relative clause
# ---------------------------------------------------------------------------

TARGET_POS: tuple[str, ...] = ("DET", "N", "PRON", "DET", "N", "V")

_DET = parse_formula("box(det, N -> NP)")
_NOUN = parse_formula("N")
_VERB = parse_formula("dia(obj1, NP) -> dia(su, VNW) -> S")
_PRON = {
    Reading.SUBJ_REL: parse_formula("dia(relcl, dia(su, VNW) -> S) -> box(mod, NP -> NP)"),
    Reading.OBJ_REL: parse_formula("dia(relcl, dia(obj1, VNW) -> S) -> box(mod, NP -> NP)"),
}


def relative_clause_supertags(reading: Reading) -> tuple[Formula, ...]:
    """Supertags of `Det N Pron Det N V` under the given reading."""
    return (_DET, _NOUN, _PRON[reading], _DET, _NOUN, _VERB)


def relative_clause_labels(reading: Reading) -> tuple[RelPosLabel, ...]:
    """Relative-PoS labels of `Det N Pron Det N V` under the given reading."""
    pron_rel, noun_rel = ("nsubj", "obj") if reading is Reading.SUBJ_REL else ("obj", "nsubj")
    return (
        RelPosLabel(1, "N", "det"),
        ROOT_LABEL,
        RelPosLabel(1, "V", pron_rel),
        RelPosLabel(1, "N", "det"),
        RelPosLabel(1, "V", noun_rel),
        RelPosLabel(-2, "N", "acl:relcl"),
    )


def relative_clause_tree(reading: Reading, forms: tuple[str, ...]) -> DepTree:
    """Gold dependency tree of the six-token relative clause."""
    pron_rel, noun_rel = ("nsubj", "obj") if reading is Reading.SUBJ_REL else ("obj", "nsubj")
    return DepTree(
        tokens=tuple(zip(forms, TARGET_POS)),
        heads=(2, 0, 6, 5, 6, 2),
        deprels=("det", "root", pron_rel, "det", noun_rel, "acl:relcl"),
    )


# ---------------------------------------------------------------------------
# Test items
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TestItem:
    prior: str | None
    target: str
    expected: Reading
    stratum: ReversibilityClass
    order: Order
    prior_order: PriorOrder | None
    triple: SvoTriple
    gold_supertags: tuple[Formula, ...]
    gold_labels: tuple[RelPosLabel, ...]

    def __post_init__(self) -> None:
        if self.stratum is ReversibilityClass.IRREVERSIBLE and self.prior_order is PriorOrder.OVS:
            raise ValueError("irreversible triples admit no inverted prior")
        if self.prior_order is not None and expected_reading(self.order, self.prior_order) != self.expected:
            raise ValueError("expected reading contradicts the order/prior combination")
        supertag_reading = extract_reading(self.gold_supertags[2])
        label_reading = extract_reading_ud(list(self.gold_labels), 2)
        if supertag_reading != self.expected or label_reading != self.expected:
            raise ValueError("gold analyses disagree with the expected reading")


def _determiner(entry: NounEntry, capitalized: bool = False) -> str:
    det = "de" if entry.gender == "de" else "het"
    return det.capitalize() if capitalized else det


def _pronoun(head: NounEntry) -> str:
    return "die" if head.gender == "de" else "dat"


def _require(lexicon: dict[str, NounEntry], lemma: str) -> NounEntry:
    entry = lexicon.get(lemma)
    if entry is None:
        raise MissingGender(lemma)
    return entry


def _prior_sentence(first: NounEntry, verb: str, second: NounEntry) -> str:
    return f"{_determiner(first, True)} {first.lemma} {verb} {_determiner(second)} {second.lemma}."


def _target_phrase(head: NounEntry, verb: str, embedded: NounEntry) -> str:
    return (
        f"{_determiner(head, True)} {head.lemma} {_pronoun(head)} "
        f"{_determiner(embedded)} {embedded.lemma} {verb}"
    )


def generate_items(triples: Iterable[SvoTriple], lexicon: dict[str, NounEntry]) -> list[TestItem]:
    """Emit test items per triple: two for irreversible, four for reversible.

    Raises MissingGender when a triple's noun has no lexicon entry.
    """
    items: list[TestItem] = []
    for triple in triples:
        subject = _require(lexicon, triple.subject)
        obj = _require(lexicon, triple.object)
        if triple.reversibility is ReversibilityClass.IRREVERSIBLE:
            prior_orders = (PriorOrder.SVO,)
        else:
            prior_orders = (PriorOrder.SVO, PriorOrder.OVS)
        for prior_order in prior_orders:
            if prior_order is PriorOrder.SVO:
                prior = _prior_sentence(subject, triple.verb, obj)
            else:
                prior = _prior_sentence(obj, triple.verb, subject)
            for order in (Order.S_DIE_O_V, Order.O_DIE_S_V):
                head, embedded = (subject, obj) if order is Order.S_DIE_O_V else (obj, subject)
                reading = expected_reading(order, prior_order)
                items.append(
                    TestItem(
                        prior=prior,
                        target=_target_phrase(head, triple.verb, embedded),
                        expected=reading,
                        stratum=triple.reversibility,
                        order=order,
                        prior_order=prior_order,
                        triple=triple,
                        gold_supertags=relative_clause_supertags(reading),
                        gold_labels=relative_clause_labels(reading),
                    )
                )
    return items


# ---------------------------------------------------------------------------
# Verb-disjoint splits
# ---------------------------------------------------------------------------

class TooFewVerbs(ValueError):
    pass


DEFAULT_RATIOS = (0.21, 0.35, 0.44)


@dataclass(frozen=True)
class SplitSpec:
    train: tuple[TestItem, ...]
    dev: tuple[TestItem, ...]
    test: tuple[TestItem, ...]
    seed: int

    def __post_init__(self) -> None:
        verb_sets = [
            {item.triple.verb for item in part} for part in (self.train, self.dev, self.test)
        ]
        for i in range(3):
            for j in range(i + 1, 3):
                if verb_sets[i] & verb_sets[j]:
                    raise ValueError("splits share verb lemmas")


def split_by_verb(
    items: list[TestItem],
    ratios: tuple[float, float, float] = DEFAULT_RATIOS,
    seed: int = 0,
) -> SplitSpec:
    """Partition items into verb-disjoint train/dev/test approximating `ratios`.

    Verbs are shuffled with the seeded RNG and assigned greedily to the
    split with the largest remaining item deficit; deterministic per seed.
    """
    if any(r <= 0 for r in ratios) or abs(sum(ratios) - 1.0) > 1e-9:
        raise ValueError("ratios must be positive and sum to 1")
    by_verb: dict[str, list[TestItem]] = {}
    for item in items:
        by_verb.setdefault(item.triple.verb, []).append(item)
    if len(by_verb) < 3:
        raise TooFewVerbs(f"need at least 3 distinct verbs, got {len(by_verb)}")

    verbs = sorted(by_verb)
    random.Random(seed).shuffle(verbs)
    targets = [r * len(items) for r in ratios]
    assigned: list[list[TestItem]] = [[], [], []]
    for verb in verbs:
        deficits = [targets[i] - len(assigned[i]) for i in range(3)]
        best = max(range(3), key=lambda i: (deficits[i], -i))
        assigned[best].extend(by_verb[verb])
    return SplitSpec(
        train=tuple(assigned[0]), dev=tuple(assigned[1]), test=tuple(assigned[2]), seed=seed
    )


# ---------------------------------------------------------------------------
# Item files
# ---------------------------------------------------------------------------

def item_to_dict(item: TestItem) -> dict:
    return {
        "prior": item.prior,
        "target": item.target,
        "expected": item.expected.value,
        "stratum": item.stratum.value,
        "order": item.order.value,
        "prior_order": item.prior_order.value if item.prior_order is not None else None,
        "triple": triple_to_dict(item.triple),
        "gold_supertags": [format_formula(f) for f in item.gold_supertags],
        "gold_labels": [[l.offset, l.head_pos, l.deprel] for l in item.gold_labels],
    }


_ITEM_FIELDS = (
    "prior", "target", "expected", "stratum", "order", "prior_order",
    "triple", "gold_supertags", "gold_labels",
)


def item_from_dict(data: dict) -> TestItem:
    missing = [field for field in _ITEM_FIELDS if field not in data]
    if missing:
        raise KeyError(f"missing fields {missing}")
    return TestItem(
        prior=data["prior"],
        target=data["target"],
        expected=Reading(data["expected"]),
        stratum=ReversibilityClass(data["stratum"]),
        order=Order(data["order"]),
        prior_order=PriorOrder(data["prior_order"]) if data["prior_order"] is not None else None,
        triple=triple_from_dict(data["triple"]),
        gold_supertags=tuple(parse_formula(s) for s in data["gold_supertags"]),
        gold_labels=tuple(RelPosLabel(o, p, d) for o, p, d in data["gold_labels"]),
    )


def write_items(items: Iterable[TestItem], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for item in items:
            handle.write(json.dumps(item_to_dict(item), ensure_ascii=False) + "\n")


def read_items(path: str | Path) -> list[TestItem]:
    items: list[TestItem] = []
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        if not raw.strip():
            continue
        try:
            items.append(item_from_dict(json.loads(raw)))
        except (KeyError, ValueError, TypeError) as exc:
            raise SchemaError(str(exc), lineno) from None
    return items
