"""Dependency parsing as sequence labelling via relative part-of-speech labels.

Every token gets a triple (offset, head pos, relation): its head is the
|offset|-th token carrying that part-of-speech tag to the right (positive)
or left (negative); the root token is marked (-1, ROOT, root).  Encoding a
valid tree is lossless; decoding arbitrary label sequences applies a
deterministic repair policy and flags the repaired tokens.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, TextIO

from .typelogic import Reading

ROOT = "ROOT"

DEFAULT_POS_TAGS = frozenset({"DET", "N", "PRON", "V"})


class EmptyInput(ValueError):
    pass


class LengthMismatch(ValueError):
    pass


class UnknownPronounRelation(ValueError):
    pass


class MalformedCorpusLine(ValueError):
    """Bad corpus line; `line` is the 1-based line number."""

    def __init__(self, message: str, line: int) -> None:
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class RelPosLabel:
    offset: int
    head_pos: str
    deprel: str

    def __post_init__(self) -> None:
        if self.offset == 0:
            raise ValueError("label offset must be nonzero")


ROOT_LABEL = RelPosLabel(-1, ROOT, "root")


@dataclass(frozen=True)
class DepTree:
    """Single-rooted dependency tree over (form, pos) tokens.

    Heads are 1-based token indices with 0 for the artificial root; the
    unique 0-headed token carries the relation `root`.
    """

    tokens: tuple[tuple[str, str], ...]
    heads: tuple[int, ...]
    deprels: tuple[str, ...]

    def __post_init__(self) -> None:
        n = len(self.tokens)
        if n == 0:
            raise ValueError("tree must have at least one token")
        if len(self.heads) != n or len(self.deprels) != n:
            raise ValueError("tokens, heads and deprels must have equal length")
        roots = [i for i, h in enumerate(self.heads) if h == 0]
        if len(roots) != 1:
            raise ValueError(f"expected exactly one root, found {len(roots)}")
        if self.deprels[roots[0]] != "root":
            raise ValueError("the root token must carry the relation `root`")
        for i, h in enumerate(self.heads):
            if not 0 <= h <= n:
                raise ValueError(f"head index {h} out of range at token {i + 1}")
            if h == i + 1:
                raise ValueError(f"token {i + 1} is its own head")
        for i in range(n):
            seen = set()
            j = i
            while self.heads[j] != 0:
                if j in seen:
                    raise ValueError("head relation contains a cycle")
                seen.add(j)
                j = self.heads[j] - 1

    @property
    def forms(self) -> tuple[str, ...]:
        return tuple(form for form, _ in self.tokens)

    @property
    def pos(self) -> tuple[str, ...]:
        return tuple(pos for _, pos in self.tokens)

    def __len__(self) -> int:
        return len(self.tokens)


def encode(tree: DepTree) -> list[RelPosLabel]:
    """Encode a tree into per-token relative-PoS labels (always possible)."""
    labels: list[RelPosLabel] = []
    pos = tree.pos
    for i, head in enumerate(tree.heads):
        if head == 0:
            labels.append(RelPosLabel(-1, ROOT, tree.deprels[i]))
            continue
        h = head - 1
        target = pos[h]
        if h > i:
            rank = sum(1 for j in range(i + 1, h + 1) if pos[j] == target)
            labels.append(RelPosLabel(rank, target, tree.deprels[i]))
        else:
            rank = sum(1 for j in range(h, i) if pos[j] == target)
            labels.append(RelPosLabel(-rank, target, tree.deprels[i]))
    return labels


@dataclass(frozen=True)
class DecodeResult:
    tree: DepTree
    repaired: frozenset[int]
    """0-based indices of tokens whose attachment was repaired."""


def _resolve(label: RelPosLabel, index: int, pos: list[str]) -> int | None:
    """1-based head index for a non-root label, or None when unresolvable."""
    remaining = abs(label.offset)
    positions = range(index + 1, len(pos)) if label.offset > 0 else range(index - 1, -1, -1)
    for j in positions:
        if pos[j] == label.head_pos:
            remaining -= 1
            if remaining == 0:
                return j + 1
    return None


def decode(labels: list[RelPosLabel], pos: list[str]) -> DecodeResult:
    """Invert encode, repairing unresolvable or tree-violating labels.

    Repair policy: unresolvable labels attach to the root token with the
    relation `dep`; with no root label the first token becomes root; extra
    roots re-attach to the first; cycles are broken by re-attaching their
    smallest member to the root.  Repaired tokens are flagged.
    """
    if not labels:
        raise EmptyInput("no labels to decode")
    if len(labels) != len(pos):
        raise LengthMismatch(f"{len(labels)} labels vs {len(pos)} pos tags")

    n = len(labels)
    heads: list[int | None] = [None] * n
    deprels = [label.deprel for label in labels]
    repaired: set[int] = set()

    for i, label in enumerate(labels):
        if label.head_pos == ROOT:
            heads[i] = 0
            if label.offset != -1 or label.deprel != "root":
                repaired.add(i)
            deprels[i] = "root"
        else:
            heads[i] = _resolve(label, i, pos)

    roots = [i for i in range(n) if heads[i] == 0]
    if not roots:
        heads[0] = 0
        deprels[0] = "root"
        repaired.add(0)
        roots = [0]
    root = roots[0]
    for extra in roots[1:]:
        heads[extra] = root + 1
        deprels[extra] = "dep"
        repaired.add(extra)

    for i in range(n):
        if heads[i] is None:
            heads[i] = root + 1
            deprels[i] = "dep"
            repaired.add(i)

    # Offsets can resolve into a loop; re-attach each loop's smallest member.
    while True:
        state = [0] * n  # 0 unvisited, 1 on current path, 2 reaches root
        cycle: list[int] | None = None
        for start in range(n):
            if state[start]:
                continue
            path = []
            j = start
            while state[j] == 0 and heads[j] != 0:
                state[j] = 1
                path.append(j)
                j = heads[j] - 1
            if state[j] == 1:
                at = path.index(j)
                cycle = path[at:]
            for k in path:
                state[k] = 2
            if cycle is not None:
                break
        if cycle is None:
            break
        member = min(cycle)
        heads[member] = root + 1
        deprels[member] = "dep"
        repaired.add(member)

    tree = DepTree(
        tokens=tuple((f"w{i + 1}", pos[i]) for i in range(n)),
        heads=tuple(heads),  # type: ignore[arg-type]
        deprels=tuple(deprels),
    )
    return DecodeResult(tree=tree, repaired=frozenset(repaired))


def extract_reading_ud(labels: list[RelPosLabel], pronoun_index: int) -> Reading:
    """Reading implied by the relative pronoun's dependency relation."""
    deprel = labels[pronoun_index].deprel
    if deprel == "nsubj":
        return Reading.SUBJ_REL
    if deprel == "obj":
        return Reading.OBJ_REL
    raise UnknownPronounRelation(f"pronoun relation {deprel!r} implies no reading")


def uas_las(gold: DepTree, predicted: DepTree) -> tuple[float, float]:
    """Unlabelled and labelled attachment score of `predicted` against `gold`."""
    if len(gold) != len(predicted):
        raise LengthMismatch(f"{len(gold)} gold tokens vs {len(predicted)} predicted")
    heads_ok = sum(1 for g, p in zip(gold.heads, predicted.heads) if g == p)
    both_ok = sum(
        1
        for g, p, gr, pr in zip(gold.heads, predicted.heads, gold.deprels, predicted.deprels)
        if g == p and gr == pr
    )
    n = len(gold)
    return heads_ok / n, both_ok / n


# ---------------------------------------------------------------------------
# CoNLL-like corpus and label files
# ---------------------------------------------------------------------------

def _open_lines(source: str | Path | TextIO) -> Iterator[str]:
    if isinstance(source, (str, Path)):
        with open(source, encoding="utf-8") as handle:
            yield from handle
    else:
        yield from source


def read_conll(source: str | Path | TextIO) -> Iterator[DepTree]:
    """Stream trees from a CoNLL-like file: index, form, pos, head, deprel."""
    rows: list[tuple[str, str, int, str]] = []
    first_line = 0
    for lineno, raw in enumerate(_open_lines(source), start=1):
        line = raw.rstrip("\n")
        if not line.strip():
            if rows:
                yield _flush_sentence(rows, first_line)
                rows = []
            continue
        parts = line.split("\t")
        if len(parts) != 5:
            raise MalformedCorpusLine(f"expected 5 tab-separated columns, got {len(parts)}", lineno)
        index_str, form, pos, head_str, deprel = parts
        try:
            index, head = int(index_str), int(head_str)
        except ValueError:
            raise MalformedCorpusLine("index and head must be integers", lineno) from None
        if not rows:
            first_line = lineno
        if index != len(rows) + 1:
            raise MalformedCorpusLine(f"expected index {len(rows) + 1}, got {index}", lineno)
        rows.append((form, pos, head, deprel))
    if rows:
        yield _flush_sentence(rows, first_line)


def _flush_sentence(rows: list[tuple[str, str, int, str]], first_line: int) -> DepTree:
    try:
        return DepTree(
            tokens=tuple((form, pos) for form, pos, _, _ in rows),
            heads=tuple(head for _, _, head, _ in rows),
            deprels=tuple(deprel for _, _, _, deprel in rows),
        )
    except ValueError as exc:
        raise MalformedCorpusLine(str(exc), first_line) from None


def write_conll(trees: Iterable[DepTree], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for tree in trees:
            for i, ((form, pos), head, deprel) in enumerate(
                zip(tree.tokens, tree.heads, tree.deprels)
            ):
                handle.write(f"{i + 1}\t{form}\t{pos}\t{head}\t{deprel}\n")
            handle.write("\n")


def write_label_file(
    sentences: Iterable[tuple[tuple[str, ...], list[RelPosLabel]]], path: str | Path
) -> None:
    """Write labelled sentences as TSV rows `form i p d`, blank-line separated."""
    with open(path, "w", encoding="utf-8") as handle:
        for forms, labels in sentences:
            for form, label in zip(forms, labels):
                handle.write(f"{form}\t{label.offset:+d}\t{label.head_pos}\t{label.deprel}\n")
            handle.write("\n")


def read_label_file(path: str | Path) -> list[tuple[tuple[str, ...], list[RelPosLabel]]]:
    sentences: list[tuple[tuple[str, ...], list[RelPosLabel]]] = []
    forms: list[str] = []
    labels: list[RelPosLabel] = []
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        if not raw.strip():
            if forms:
                sentences.append((tuple(forms), labels))
                forms, labels = [], []
            continue
        parts = raw.split("\t")
        if len(parts) != 4:
            raise MalformedCorpusLine(f"expected 4 tab-separated columns, got {len(parts)}", lineno)
        form, offset_str, head_pos, deprel = parts
        try:
            offset = int(offset_str)
        except ValueError:
            raise MalformedCorpusLine("offset must be an integer", lineno) from None
        forms.append(form)
        labels.append(RelPosLabel(offset, head_pos, deprel))
    if forms:
        sentences.append((tuple(forms), labels))
    return sentences
