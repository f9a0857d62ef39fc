"""Experiment matrix, metrics and report rendering.

Taggers run over the generated items in three scenarios: without context,
grounded against the prior sentence, and grounded after finetuning.  Per
cell of (regime, stratum, order, prior order, scenario) the harness tracks
disambiguation accuracy with its item count; separate helpers compute
supertagging and attachment metrics and compare a tagger against its
finetuned version on a held-out corpus of gold-annotated clauses.
"""

from __future__ import annotations

import datetime
import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Sequence

from .clausegen import Order, PriorOrder, TestItem
from .models import FeatureTagger, Regime, tagger_input_from_item, TaggerInput
from .selpref import ReversibilityClass
from .typelogic import Formula, format_formula, parse_formula
from .udencoding import DepTree, LengthMismatch, decode, read_conll, uas_las


class EmptyItemSet(ValueError):
    pass


class Scenario(Enum):
    NO_CONTEXT = "no_context"
    GROUNDED = "grounded"
    FINETUNED_GROUNDED = "finetuned_grounded"


# ---------------------------------------------------------------------------
# Metrics
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MetricSet:
    tagging_accuracy: float | None = None
    frame_accuracy: float | None = None
    uas: float | None = None
    las: float | None = None

    def __post_init__(self) -> None:
        for name in ("tagging_accuracy", "frame_accuracy", "uas", "las"):
            value = getattr(self, name)
            if value is not None and not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {value}")
        if self.tagging_accuracy is not None and self.frame_accuracy is not None:
            if self.frame_accuracy > self.tagging_accuracy + 1e-12:
                raise ValueError("frame accuracy cannot exceed tagging accuracy")
        if self.uas is not None and self.las is not None:
            if self.las > self.uas + 1e-12:
                raise ValueError("labelled score cannot exceed unlabelled score")

    def as_dict(self) -> dict[str, float]:
        return {
            name: value
            for name in ("tagging_accuracy", "frame_accuracy", "uas", "las")
            if (value := getattr(self, name)) is not None
        }


def compute_metrics(gold, predicted, regime: Regime) -> MetricSet:
    """Supertag metrics (NPN) or attachment scores (UD) over aligned corpora.

    For NPN, gold and predicted are per-sentence supertag sequences; for UD
    they are dependency trees.  Scores are micro-averaged over tokens.
    """
    if len(gold) != len(predicted):
        raise LengthMismatch(f"{len(gold)} gold sentences vs {len(predicted)} predicted")
    if regime is Regime.NPN:
        tokens = correct = perfect = 0
        for gold_tags, predicted_tags in zip(gold, predicted):
            if len(gold_tags) != len(predicted_tags):
                raise LengthMismatch("sentence lengths differ")
            hits = sum(1 for g, p in zip(gold_tags, predicted_tags) if g == p)
            tokens += len(gold_tags)
            correct += hits
            perfect += hits == len(gold_tags)
        return MetricSet(
            tagging_accuracy=correct / tokens,
            frame_accuracy=perfect / len(gold),
        )
    head_hits = label_hits = tokens = 0
    for gold_tree, predicted_tree in zip(gold, predicted):
        sentence_uas, sentence_las = uas_las(gold_tree, predicted_tree)
        n = len(gold_tree)
        tokens += n
        head_hits += round(sentence_uas * n)
        label_hits += round(sentence_las * n)
    return MetricSet(uas=head_hits / tokens, las=label_hits / tokens)


# ---------------------------------------------------------------------------
# Experiment grid
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CellKey:
    regime: Regime
    stratum: ReversibilityClass
    order: Order
    prior_order: PriorOrder | None
    scenario: Scenario


@dataclass
class CellStats:
    correct: int = 0
    count: int = 0

    @property
    def accuracy(self) -> float:
        return self.correct / self.count


@dataclass
class ExperimentReport:
    grid: dict[CellKey, CellStats] = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)

    def total_count(self, scenario: Scenario) -> int:
        return sum(stats.count for key, stats in self.grid.items() if key.scenario is scenario)

    def accuracy(
        self,
        regime: Regime,
        stratum: ReversibilityClass,
        order: Order,
        prior_order: PriorOrder | None,
        scenario: Scenario,
    ) -> float:
        return self.grid[CellKey(regime, stratum, order, prior_order, scenario)].accuracy


def run_scenario(
    tagger: FeatureTagger, items: Sequence[TestItem], scenario: Scenario
) -> ExperimentReport:
    """Tag every item and aggregate reading accuracy per grid cell."""
    if not items:
        raise EmptyItemSet("no items to evaluate")
    context_enabled = scenario is not Scenario.NO_CONTEXT
    report = ExperimentReport(
        metadata={
            "scenario": scenario.value,
            "tagger": tagger.kind,
            "regime": tagger.regime.value,
            "mode": tagger.mode.value,
            "seed": tagger.seed,
            "profile": [tagger.profile.subj_rel_count, tagger.profile.obj_rel_count],
            "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        }
    )
    for item in items:
        output = tagger.tag(tagger_input_from_item(item, context_enabled))
        key = CellKey(tagger.regime, item.stratum, item.order, item.prior_order, scenario)
        stats = report.grid.setdefault(key, CellStats())
        stats.count += 1
        stats.correct += output.reading == item.expected
    return report


def merge_reports(reports: Iterable[ExperimentReport]) -> ExperimentReport:
    """Associative union of report grids, summing stats on shared cells."""
    merged = ExperimentReport(metadata={"merged_from": []})
    for report in reports:
        merged.metadata["merged_from"].append(
            {k: v for k, v in report.metadata.items() if k != "timestamp"}
        )
        for key, stats in report.grid.items():
            into = merged.grid.setdefault(key, CellStats())
            into.correct += stats.correct
            into.count += stats.count
    return merged


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------

_STRATUM_ORDER = (
    ReversibilityClass.IRREVERSIBLE,
    ReversibilityClass.REVERSIBLE_STRONG,
    ReversibilityClass.REVERSIBLE_WEAK,
)
_ORDER_ORDER = (Order.S_DIE_O_V, Order.O_DIE_S_V)
_PRIOR_ORDER = (PriorOrder.SVO, PriorOrder.OVS)
_SCENARIO_ORDER = (Scenario.NO_CONTEXT, Scenario.GROUNDED, Scenario.FINETUNED_GROUNDED)


def render_report(report: ExperimentReport, fmt: str = "tsv") -> str:
    """Render the grid with a fixed row and column order; timestamps excluded.

    Cells show accuracy to two decimals with the item count; combinations
    that cannot occur (or were not evaluated) render as N/A.
    """
    if fmt not in ("tsv", "markdown"):
        raise ValueError(f"unknown format {fmt!r}")
    regimes = sorted({key.regime for key in report.grid}, key=lambda r: r.value)
    scenarios = [s for s in _SCENARIO_ORDER if any(k.scenario is s for k in report.grid)]
    header = ["regime", "stratum", "order", "prior"] + [s.value for s in scenarios]
    rows = [header]
    for regime in regimes:
        for stratum in _STRATUM_ORDER:
            for order in _ORDER_ORDER:
                for prior_order in _PRIOR_ORDER:
                    row = [regime.value, stratum.value, order.value, prior_order.value]
                    for scenario in scenarios:
                        stats = report.grid.get(
                            CellKey(regime, stratum, order, prior_order, scenario)
                        )
                        if stats is None:
                            row.append("N/A")
                        else:
                            row.append(f"{stats.accuracy:.2f} (n={stats.count})")
                    rows.append(row)
    if fmt == "tsv":
        return "\n".join("\t".join(row) for row in rows) + "\n"
    lines = ["| " + " | ".join(rows[0]) + " |", "|" + "---|" * len(rows[0])]
    lines.extend("| " + " | ".join(row) + " |" for row in rows[1:])
    return "\n".join(lines) + "\n"


def report_to_dict(report: ExperimentReport) -> dict:
    return {
        "metadata": report.metadata,
        "cells": [
            {
                "regime": key.regime.value,
                "stratum": key.stratum.value,
                "order": key.order.value,
                "prior_order": key.prior_order.value if key.prior_order is not None else None,
                "scenario": key.scenario.value,
                "correct": stats.correct,
                "count": stats.count,
            }
            for key, stats in sorted(
                report.grid.items(),
                key=lambda kv: (
                    kv[0].regime.value,
                    kv[0].stratum.value,
                    kv[0].order.value,
                    kv[0].prior_order.value if kv[0].prior_order else "",
                    kv[0].scenario.value,
                ),
            )
        ],
    }


def report_from_dict(data: dict) -> ExperimentReport:
    report = ExperimentReport(metadata=data.get("metadata", {}))
    for cell in data["cells"]:
        key = CellKey(
            regime=Regime(cell["regime"]),
            stratum=ReversibilityClass(cell["stratum"]),
            order=Order(cell["order"]),
            prior_order=PriorOrder(cell["prior_order"]) if cell["prior_order"] else None,
            scenario=Scenario(cell["scenario"]),
        )
        report.grid[key] = CellStats(correct=cell["correct"], count=cell["count"])
    return report


def save_report(report: ExperimentReport, path: str | Path) -> None:
    Path(path).write_text(
        json.dumps(report_to_dict(report), indent=2) + "\n", encoding="utf-8"
    )


def load_report(path: str | Path) -> ExperimentReport:
    return report_from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


# ---------------------------------------------------------------------------
# Held-out regression check
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HeldoutSentence:
    tree: DepTree
    supertags: tuple[Formula, ...]

    @property
    def forms(self) -> tuple[str, ...]:
        return self.tree.forms


def load_heldout_corpus(
    conll_path: str | Path, supertags_path: str | Path
) -> list[HeldoutSentence]:
    """Pair a CoNLL-like treebank with its parallel gold supertag file."""
    trees = list(read_conll(conll_path))
    tag_sentences: list[list[tuple[str, Formula]]] = [[]]
    for raw in Path(supertags_path).read_text(encoding="utf-8").splitlines():
        if not raw.strip():
            if tag_sentences[-1]:
                tag_sentences.append([])
            continue
        word, notation = raw.split("\t")
        tag_sentences[-1].append((word, parse_formula(notation)))
    if not tag_sentences[-1]:
        tag_sentences.pop()
    if len(trees) != len(tag_sentences):
        raise LengthMismatch(
            f"{len(trees)} trees vs {len(tag_sentences)} supertag sentences"
        )
    sentences = []
    for tree, tagged in zip(trees, tag_sentences):
        if tree.forms != tuple(word for word, _ in tagged):
            raise ValueError("treebank and supertag forms disagree")
        sentences.append(HeldoutSentence(tree, tuple(f for _, f in tagged)))
    return sentences


@dataclass(frozen=True)
class RegressionReport:
    regime: Regime
    before: MetricSet
    after: MetricSet
    threshold: float
    deltas: dict[str, float]
    flagged: bool


def _heldout_metrics(tagger: FeatureTagger, corpus: Sequence[HeldoutSentence]) -> MetricSet:
    inputs = [
        TaggerInput(prior=None, target=sentence.forms, context_enabled=False)
        for sentence in corpus
    ]
    outputs = [tagger.tag(input_) for input_ in inputs]
    if tagger.regime is Regime.NPN:
        gold = [sentence.supertags for sentence in corpus]
        predicted = [output.supertags for output in outputs]
        return compute_metrics(gold, predicted, Regime.NPN)
    gold_trees = [sentence.tree for sentence in corpus]
    predicted_trees = [
        decode(list(output.labels), list(sentence.tree.pos)).tree
        for output, sentence in zip(outputs, corpus)
    ]
    return compute_metrics(gold_trees, predicted_trees, Regime.UD)


def regression_check(
    tagger_before: FeatureTagger,
    tagger_after: FeatureTagger,
    heldout: Sequence[HeldoutSentence],
    threshold: float = 0.05,
) -> RegressionReport:
    """Compare parsing metrics before and after finetuning on held-out clauses.

    Flags the report when any metric degrades by strictly more than
    `threshold` (absolute).  Both taggers must share a regime.
    """
    if tagger_before.regime is not tagger_after.regime:
        raise ValueError("taggers must share a regime")
    before = _heldout_metrics(tagger_before, heldout)
    after = _heldout_metrics(tagger_after, heldout)
    deltas = {
        name: after.as_dict()[name] - value for name, value in before.as_dict().items()
    }
    flagged = any(-delta > threshold for delta in deltas.values())
    return RegressionReport(
        regime=tagger_before.regime,
        before=before,
        after=after,
        threshold=threshold,
        deltas=deltas,
        flagged=flagged,
    )


def render_regression(report: RegressionReport) -> str:
    lines = [f"regime\t{report.regime.value}", f"threshold\t{report.threshold}"]
    for name, delta in report.deltas.items():
        before = report.before.as_dict()[name]
        after = report.after.as_dict()[name]
        lines.append(f"{name}\t{before:.4f}\t{after:.4f}\t{delta:+.4f}")
    lines.append(f"flagged\t{str(report.flagged).lower()}")
    return "\n".join(lines) + "\n"
