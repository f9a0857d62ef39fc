"""Selectional-preference acquisition from a parsed corpus.

Transitive subject-verb-object triples are counted, ranked by posterior
probability within their verb, classified by the semantic class of their
nouns, and typed by reversibility: triples whose nouns belong to different
classes cannot be inverted, while same-class triples are split into strong
and weak preferences by the frequency ratio against the inverted triple.
"""

from __future__ import annotations

import dataclasses
import json
import warnings
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Iterable

from .udencoding import DepTree


class UnknownTriple(KeyError):
    pass


class UnknownOverrideTarget(ValueError):
    pass


class SemanticClass(Enum):
    PERSON = "person"
    ANIMAL = "animal"
    PLANT = "plant"
    SUBSTANCE = "substance"
    OBJECT = "object"
    ABSTRACT = "abstract"
    MASS_NOUN = "mass_noun"


class ReversibilityClass(Enum):
    IRREVERSIBLE = "irreversible"
    REVERSIBLE_STRONG = "strong"
    REVERSIBLE_WEAK = "weak"


GENDERS = ("de", "het")


@dataclass(frozen=True)
class NounEntry:
    lemma: str
    semantic_class: SemanticClass
    gender: str

    def __post_init__(self) -> None:
        if not self.lemma:
            raise ValueError("empty lemma")
        if self.gender not in GENDERS:
            raise ValueError(f"gender must be de or het, got {self.gender!r}")


def load_noun_lexicon(path: str | Path) -> dict[str, NounEntry]:
    """Load a noun lexicon: TSV `lemma semantic_class gender`, one entry per lemma."""
    lexicon: dict[str, NounEntry] = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        if not raw.strip() or raw.startswith("#"):
            continue
        parts = raw.split("\t")
        if len(parts) != 3:
            raise ValueError(f"{path}:{lineno}: expected `lemma<TAB>class<TAB>gender`")
        lemma, class_name, gender = parts
        if lemma in lexicon:
            raise ValueError(f"{path}:{lineno}: duplicate lemma {lemma!r}")
        lexicon[lemma] = NounEntry(lemma, SemanticClass(class_name), gender)
    return lexicon


def load_stopwords(path: str | Path) -> frozenset[str]:
    words = {
        line.strip()
        for line in Path(path).read_text(encoding="utf-8").splitlines()
        if line.strip() and not line.startswith("#")
    }
    return frozenset(words)


# ---------------------------------------------------------------------------
# Triple counts
# ---------------------------------------------------------------------------

@dataclass
class TripleCounts:
    """Occurrence counts per (subject, verb, object) with cached verb totals."""

    counts: dict[tuple[str, str, str], int] = dataclasses.field(default_factory=dict)
    verb_totals: dict[str, int] = dataclasses.field(default_factory=dict)

    def add(self, subject: str, verb: str, obj: str, n: int = 1) -> None:
        key = (subject, verb, obj)
        self.counts[key] = self.counts.get(key, 0) + n
        self.verb_totals[verb] = self.verb_totals.get(verb, 0) + n

    def get(self, subject: str, verb: str, obj: str) -> int:
        return self.counts.get((subject, verb, obj), 0)

    def merge(self, other: "TripleCounts") -> "TripleCounts":
        """Associative merge, so corpus shards can be counted independently."""
        merged = TripleCounts(dict(self.counts), dict(self.verb_totals))
        for (s, v, o), n in other.counts.items():
            merged.add(s, v, o, n)
        return merged

    def verbs(self) -> list[str]:
        return sorted(self.verb_totals)

    def __len__(self) -> int:
        return len(self.counts)


def extract_triples(
    corpus: Iterable[DepTree], stopwords: frozenset[str] = frozenset()
) -> TripleCounts:
    """Count (subject, verb, object) lemma triples over the corpus.

    A triple is recorded for every V-tagged token with both an nsubj and an
    obj dependent tagged N; lemmas are lowercased forms, and a triple any of
    whose lemmas is a stopword is skipped.
    """
    counts = TripleCounts()
    for tree in corpus:
        pos = tree.pos
        forms = tree.forms
        for i in range(len(tree)):
            if pos[i] != "V":
                continue
            subject = obj = None
            for j in range(len(tree)):
                if tree.heads[j] != i + 1 or pos[j] != "N":
                    continue
                if tree.deprels[j] == "nsubj" and subject is None:
                    subject = forms[j].lower()
                elif tree.deprels[j] == "obj" and obj is None:
                    obj = forms[j].lower()
            verb = forms[i].lower()
            if subject is None or obj is None:
                continue
            if {subject, verb, obj} & stopwords:
                continue
            counts.add(subject, verb, obj)
    return counts


def posterior(counts: TripleCounts, subject: str, verb: str, obj: str) -> float:
    """Probability of the triple among all triples of its verb."""
    key = (subject, verb, obj)
    if key not in counts.counts:
        raise UnknownTriple(f"no occurrences of {key}")
    return counts.counts[key] / counts.verb_totals[verb]


# ---------------------------------------------------------------------------
# Classification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SvoTriple:
    subject: str
    verb: str
    object: str
    subject_class: SemanticClass
    object_class: SemanticClass
    posterior: float
    reversibility: ReversibilityClass

    def key(self) -> tuple[str, str, str]:
        return (self.subject, self.verb, self.object)


def classify_triples(
    counts: TripleCounts,
    lexicon: dict[str, NounEntry],
    strong_ratio: float = 10.0,
    posterior_cutoff: float = 1e-4,
) -> list[SvoTriple]:
    """Resolve noun classes and estimate reversibility for every counted triple.

    Triples with an out-of-lexicon noun, with identical subject and object,
    or below the posterior cutoff are dropped.  Distinct noun classes make a
    triple irreversible; otherwise the frequency ratio against the inverted
    triple decides strong (>= strong_ratio, ties included) versus weak.
    """
    triples: list[SvoTriple] = []
    for (s, v, o) in sorted(counts.counts):
        if s not in lexicon or o not in lexicon or s == o:
            continue
        p = posterior(counts, s, v, o)
        if p < posterior_cutoff:
            continue
        s_class = lexicon[s].semantic_class
        o_class = lexicon[o].semantic_class
        if s_class != o_class:
            reversibility = ReversibilityClass.IRREVERSIBLE
        else:
            ratio = counts.get(s, v, o) / max(counts.get(o, v, s), 1)
            if ratio >= strong_ratio:
                reversibility = ReversibilityClass.REVERSIBLE_STRONG
            else:
                reversibility = ReversibilityClass.REVERSIBLE_WEAK
        triples.append(SvoTriple(s, v, o, s_class, o_class, p, reversibility))
    return triples


DROP = "DROP"


def load_annotations(path: str | Path) -> dict[tuple[str, str, str], str]:
    """Load manual overrides: TSV `s v o {irreversible|strong|weak|DROP}`."""
    overrides: dict[tuple[str, str, str], str] = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        if not raw.strip() or raw.startswith("#"):
            continue
        parts = raw.split("\t")
        if len(parts) != 4:
            raise ValueError(f"{path}:{lineno}: expected `s<TAB>v<TAB>o<TAB>decision`")
        s, v, o, decision = parts
        if decision != DROP:
            ReversibilityClass(decision)  # validates the decision token
        overrides[(s, v, o)] = decision
    return overrides


def apply_annotations(
    triples: list[SvoTriple],
    overrides: dict[tuple[str, str, str], str],
    strict: bool = True,
) -> list[SvoTriple]:
    """Reclassify or drop the listed triples, leaving the rest untouched.

    Unknown override targets raise UnknownOverrideTarget, or are warned
    about and skipped when strict is false.  Idempotent.
    """
    known = {triple.key() for triple in triples}
    missing = sorted(set(overrides) - known)
    if missing:
        if strict:
            raise UnknownOverrideTarget(f"overrides target absent triples: {missing}")
        warnings.warn(f"skipping overrides for absent triples: {missing}", stacklevel=2)

    result: list[SvoTriple] = []
    for triple in triples:
        decision = overrides.get(triple.key())
        if decision is None:
            result.append(triple)
        elif decision == DROP:
            continue
        else:
            result.append(dataclasses.replace(triple, reversibility=ReversibilityClass(decision)))
    return result


# ---------------------------------------------------------------------------
# Triple files
# ---------------------------------------------------------------------------

def triple_to_dict(triple: SvoTriple) -> dict:
    return {
        "subject": triple.subject,
        "verb": triple.verb,
        "object": triple.object,
        "subject_class": triple.subject_class.value,
        "object_class": triple.object_class.value,
        "posterior": triple.posterior,
        "reversibility": triple.reversibility.value,
    }


def triple_from_dict(data: dict) -> SvoTriple:
    return SvoTriple(
        subject=data["subject"],
        verb=data["verb"],
        object=data["object"],
        subject_class=SemanticClass(data["subject_class"]),
        object_class=SemanticClass(data["object_class"]),
        posterior=float(data["posterior"]),
        reversibility=ReversibilityClass(data["reversibility"]),
    )


def write_triples(triples: Iterable[SvoTriple], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for triple in triples:
            handle.write(json.dumps(triple_to_dict(triple), ensure_ascii=False) + "\n")


def read_triples(path: str | Path) -> list[SvoTriple]:
    triples: list[SvoTriple] = []
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        if not raw.strip():
            continue
        try:
            triples.append(triple_from_dict(json.loads(raw)))
        except (KeyError, ValueError) as exc:
            raise ValueError(f"{path}:{lineno}: bad triple record: {exc}") from None
    return triples
