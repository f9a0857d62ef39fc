"""Bundled desk-scale resources: parsed toy corpus, noun lexicon, stopwords,
grammar inventories, manual annotations and a held-out evaluation corpus."""

from importlib import resources
from pathlib import Path

from ..selpref import NounEntry, load_noun_lexicon, load_stopwords
from ..typelogic import GrammarConfig, load_grammar_config


def bundled_path(name: str) -> Path:
    return Path(str(resources.files(__package__).joinpath(name)))


def toy_corpus_path() -> Path:
    return bundled_path("toy_corpus.conllu")


def heldout_corpus_path() -> Path:
    return bundled_path("heldout_corpus.conllu")


def heldout_supertags_path() -> Path:
    return bundled_path("heldout_supertags.tsv")


def lexicon_path() -> Path:
    return bundled_path("lexicon.tsv")


def stopwords_path() -> Path:
    return bundled_path("stopwords_nl.txt")


def grammar_path() -> Path:
    return bundled_path("grammar.cfg")


def annotations_path() -> Path:
    return bundled_path("annotations.tsv")


def default_lexicon() -> dict[str, NounEntry]:
    return load_noun_lexicon(lexicon_path())


def default_stopwords() -> frozenset[str]:
    return load_stopwords(stopwords_path())


def default_grammar() -> GrammarConfig:
    return load_grammar_config(grammar_path())
