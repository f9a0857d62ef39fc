"""Multimodal type-logical formulas and symbolic proof-net search.

Formulas combine atoms, linear implication and dependency-decorated unary
modalities.  Sentences are parsed by unfolding each word's formula into
polarized atomic occurrences and linking occurrences of opposite polarity;
a linking is accepted when the induced structure is acyclic and connected
under every switching of its par nodes.  The reading of a relative clause
is recovered from the formula assigned to the relative pronoun.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from pathlib import Path


class FormulaSyntaxError(ValueError):
    """Malformed formula notation; `position` is a character offset."""

    def __init__(self, message: str, position: int) -> None:
        super().__init__(f"{message} (at position {position})")
        self.position = position


class UnknownAtom(ValueError):
    pass


class UnknownRole(ValueError):
    pass


class CountMismatch(ValueError):
    pass


class NotARelativePronounType(ValueError):
    pass


class UnknownGapRole(ValueError):
    pass


# ---------------------------------------------------------------------------
# Grammar inventories
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GrammarConfig:
    """Closed inventories of atomic types and dependency roles."""

    atoms: frozenset[str]
    roles: frozenset[str]

    def __post_init__(self) -> None:
        missing = {"su", "obj1"} - self.roles
        if missing:
            raise ValueError(f"role inventory must contain su and obj1, missing {sorted(missing)}")


DEFAULT_GRAMMAR = GrammarConfig(
    atoms=frozenset({"N", "NP", "S", "VNW"}),
    roles=frozenset({"det", "mod", "relcl", "su", "obj1"}),
)


def load_grammar_config(path: str | Path) -> GrammarConfig:
    """Read a grammar config: identifiers one per line under [atoms] / [roles]."""
    atoms: set[str] = set()
    roles: set[str] = set()
    section: set[str] | None = None
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line == "[atoms]":
            section = atoms
        elif line == "[roles]":
            section = roles
        elif section is None:
            raise ValueError(f"{path}:{lineno}: identifier before any section header")
        else:
            section.add(line)
    return GrammarConfig(atoms=frozenset(atoms), roles=frozenset(roles))


# ---------------------------------------------------------------------------
# Formula syntax
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Atomic:
    name: str


@dataclass(frozen=True)
class Implication:
    argument: "Formula"
    result: "Formula"


@dataclass(frozen=True)
class Diamond:
    role: str
    body: "Formula"


@dataclass(frozen=True)
class Box:
    role: str
    body: "Formula"


Formula = Atomic | Implication | Diamond | Box


def format_formula(formula: Formula) -> str:
    """Render a formula in the canonical notation accepted by parse_formula."""
    match formula:
        case Atomic(name):
            return name
        case Implication(argument, result):
            left = format_formula(argument)
            if isinstance(argument, Implication):
                left = f"({left})"
            return f"{left} -> {format_formula(result)}"
        case Diamond(role, body):
            return f"dia({role}, {format_formula(body)})"
        case Box(role, body):
            return f"box({role}, {format_formula(body)})"
    raise TypeError(f"not a formula: {formula!r}")


_PUNCT = {"(", ")", ",", "->"}


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens: list[tuple[str, int]] = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif text.startswith("->", i):
            tokens.append(("->", i))
            i += 2
        elif ch in "(),":
            tokens.append((ch, i))
            i += 1
        elif ch.isalpha() or ch == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] in "_'"):
                j += 1
            tokens.append((text[i:j], i))
            i = j
        else:
            raise FormulaSyntaxError(f"unexpected character {ch!r}", i)
    return tokens


class _Parser:
    def __init__(self, text: str, grammar: GrammarConfig) -> None:
        self.text = text
        self.grammar = grammar
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self) -> tuple[str, int] | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def advance(self) -> tuple[str, int]:
        tok = self.peek()
        if tok is None:
            raise FormulaSyntaxError("unexpected end of input", len(self.text))
        self.pos += 1
        return tok

    def expect(self, value: str) -> None:
        tok = self.peek()
        if tok is None or tok[0] != value:
            at = tok[1] if tok is not None else len(self.text)
            raise FormulaSyntaxError(f"expected {value!r}", at)
        self.pos += 1

    def implication(self) -> Formula:
        left = self.operand()
        tok = self.peek()
        if tok is not None and tok[0] == "->":
            self.pos += 1
            return Implication(left, self.implication())
        return left

    def operand(self) -> Formula:
        value, at = self.advance()
        if value == "(":
            inner = self.implication()
            self.expect(")")
            return inner
        if value in _PUNCT:
            raise FormulaSyntaxError(f"unexpected {value!r}", at)
        if value in ("dia", "box") and (nxt := self.peek()) is not None and nxt[0] == "(":
            self.pos += 1
            role, role_at = self.advance()
            if role in _PUNCT:
                raise FormulaSyntaxError("expected a role name", role_at)
            if role not in self.grammar.roles:
                raise UnknownRole(f"unknown dependency role {role!r}")
            self.expect(",")
            body = self.implication()
            self.expect(")")
            return Diamond(role, body) if value == "dia" else Box(role, body)
        if value not in self.grammar.atoms:
            raise UnknownAtom(f"unknown atom {value!r}")
        return Atomic(value)


def parse_formula(text: str, grammar: GrammarConfig = DEFAULT_GRAMMAR) -> Formula:
    """Parse formula notation: bare atoms, right-associative `->`, dia/box modalities.

    Raises FormulaSyntaxError for malformed input, UnknownAtom / UnknownRole
    for identifiers outside the grammar inventories.
    """
    parser = _Parser(text, grammar)
    formula = parser.implication()
    tok = parser.peek()
    if tok is not None:
        raise FormulaSyntaxError(f"trailing input {tok[0]!r}", tok[1])
    return formula


def load_supertag_lexicon(
    path: str | Path, grammar: GrammarConfig = DEFAULT_GRAMMAR
) -> dict[str, list[Formula]]:
    """Load a supertag lexicon: TSV `word <TAB> formula`, multiple rows per word."""
    lexicon: dict[str, list[Formula]] = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        if not raw.strip():
            continue
        parts = raw.split("\t")
        if len(parts) != 2:
            raise ValueError(f"{path}:{lineno}: expected `word<TAB>formula`")
        word, notation = parts
        lexicon.setdefault(word, []).append(parse_formula(notation, grammar))
    return lexicon


# ---------------------------------------------------------------------------
# Polarity unfolding
# ---------------------------------------------------------------------------

class Polarity(Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"

    @property
    def flipped(self) -> "Polarity":
        return Polarity.NEGATIVE if self is Polarity.POSITIVE else Polarity.POSITIVE


@dataclass(frozen=True)
class PolarizedAtom:
    atom: str
    polarity: Polarity
    source_index: int
    occurrence_id: int


def unfold(
    formula: Formula, polarity: Polarity, source_index: int = 0, start_id: int = 0
) -> list[PolarizedAtom]:
    """List the atomic occurrences of `formula` left to right.

    An implication's argument flips polarity relative to its result; the
    modalities preserve it.  Occurrence ids are consecutive from `start_id`.
    """
    out: list[PolarizedAtom] = []

    def walk(node: Formula, pol: Polarity) -> None:
        match node:
            case Atomic(name):
                out.append(PolarizedAtom(name, pol, source_index, start_id + len(out)))
            case Implication(argument, result):
                walk(argument, pol.flipped)
                walk(result, pol)
            case Diamond(_, body) | Box(_, body):
                walk(body, pol)

    walk(formula, polarity)
    return out


def unfold_sequent(supertags: list[Formula], goal: Formula) -> list[PolarizedAtom]:
    """Unfold a sequent: supertags negatively, then the goal positively.

    The goal's source_index is len(supertags); occurrence ids are unique
    across the whole sequent, assigned left to right.
    """
    occurrences: list[PolarizedAtom] = []
    for index, supertag in enumerate(supertags):
        occurrences.extend(unfold(supertag, Polarity.NEGATIVE, index, len(occurrences)))
    occurrences.extend(unfold(goal, Polarity.POSITIVE, len(supertags), len(occurrences)))
    return occurrences


def count_check(supertags: list[Formula], goal: Formula) -> bool:
    """Necessary condition for a proof: balanced polarity counts per atom."""
    if not supertags:
        raise ValueError("empty supertag list")
    balance: dict[str, int] = {}
    for occ in unfold_sequent(supertags, goal):
        delta = 1 if occ.polarity is Polarity.POSITIVE else -1
        balance[occ.atom] = balance.get(occ.atom, 0) + delta
    return all(v == 0 for v in balance.values())


# ---------------------------------------------------------------------------
# Axiom linkings
# ---------------------------------------------------------------------------

AxiomLinking = frozenset[tuple[int, int]]
"""A set of (positive occurrence_id, negative occurrence_id) pairs."""


class _Node:
    """Subformula occurrence in the sequent forest."""

    __slots__ = ("kind", "children", "leaf_id")

    def __init__(self, kind: str, children: list[int], leaf_id: int | None = None) -> None:
        self.kind = kind  # par | tensor | wire | leaf
        self.children = children
        self.leaf_id = leaf_id


def _build_forest(supertags: list[Formula], goal: Formula) -> list[_Node]:
    """Decompose the sequent into connective nodes.

    A negative implication behaves multiplicatively (tensor: both subtrees
    stay attached); a positive one is a par node whose switchings must each
    leave the structure a tree.  Modal decorations are unary wires.  Leaf
    numbering matches unfold_sequent.
    """
    nodes: list[_Node] = []
    counter = itertools.count()

    def walk(formula: Formula, pol: Polarity) -> int:
        match formula:
            case Atomic(_):
                nodes.append(_Node("leaf", [], next(counter)))
            case Implication(argument, result):
                left = walk(argument, pol.flipped)
                right = walk(result, pol)
                kind = "par" if pol is Polarity.POSITIVE else "tensor"
                nodes.append(_Node(kind, [left, right]))
            case Diamond(_, body) | Box(_, body):
                child = walk(body, pol)
                nodes.append(_Node("wire", [child]))
        return len(nodes) - 1

    for supertag in supertags:
        walk(supertag, Polarity.NEGATIVE)
    walk(goal, Polarity.POSITIVE)
    return nodes


def validate_linking(linking: AxiomLinking, supertags: list[Formula], goal: Formula) -> bool:
    """Check a linking under every par switching: acyclic and connected.

    The linking must already be a perfect matching pairing positive with
    negative occurrences of the same atom (ValueError otherwise).
    """
    occurrences = unfold_sequent(supertags, goal)
    by_id = {occ.occurrence_id: occ for occ in occurrences}
    seen: set[int] = set()
    for pos_id, neg_id in linking:
        pos, neg = by_id.get(pos_id), by_id.get(neg_id)
        if pos is None or neg is None:
            raise ValueError(f"link ({pos_id}, {neg_id}) references unknown occurrences")
        if pos.polarity is not Polarity.POSITIVE or neg.polarity is not Polarity.NEGATIVE:
            raise ValueError(f"link ({pos_id}, {neg_id}) has wrong polarities")
        if pos.atom != neg.atom:
            raise ValueError(f"link ({pos_id}, {neg_id}) pairs distinct atoms")
        seen.update((pos_id, neg_id))
    if seen != set(by_id):
        raise ValueError("linking is not a perfect matching over the sequent")

    nodes = _build_forest(supertags, goal)
    leaf_node = {node.leaf_id: i for i, node in enumerate(nodes) if node.kind == "leaf"}
    fixed_edges: list[tuple[int, int]] = [
        (leaf_node[p], leaf_node[n]) for p, n in linking
    ]
    par_ids: list[int] = []
    for i, node in enumerate(nodes):
        if node.kind == "par":
            par_ids.append(i)
        else:
            fixed_edges.extend((i, child) for child in node.children)

    total = len(nodes)
    for choice in itertools.product((0, 1), repeat=len(par_ids)):
        edges = list(fixed_edges)
        edges.extend((pid, nodes[pid].children[side]) for pid, side in zip(par_ids, choice))
        if len(edges) != total - 1:
            return False
        adjacency: dict[int, list[int]] = {i: [] for i in range(total)}
        for a, b in edges:
            adjacency[a].append(b)
            adjacency[b].append(a)
        reached = {0}
        stack = [0]
        while stack:
            for neighbour in adjacency[stack.pop()]:
                if neighbour not in reached:
                    reached.add(neighbour)
                    stack.append(neighbour)
        if len(reached) != total:
            return False
    return True


def enumerate_linkings(supertags: list[Formula], goal: Formula) -> list[AxiomLinking]:
    """Enumerate all valid axiom linkings of the sequent, in lexicographic order.

    Raises CountMismatch when the polarity counts are unbalanced.
    """
    if not count_check(supertags, goal):
        raise CountMismatch("positive/negative atom counts differ")
    occurrences = unfold_sequent(supertags, goal)
    positives: dict[str, list[int]] = {}
    negatives: dict[str, list[int]] = {}
    for occ in occurrences:
        side = positives if occ.polarity is Polarity.POSITIVE else negatives
        side.setdefault(occ.atom, []).append(occ.occurrence_id)

    per_atom: list[list[tuple[tuple[int, int], ...]]] = []
    for atom in sorted(positives):
        pos_ids = positives[atom]
        matchings = [
            tuple(zip(pos_ids, perm)) for perm in itertools.permutations(negatives[atom])
        ]
        per_atom.append(matchings)

    valid: list[AxiomLinking] = []
    for combination in itertools.product(*per_atom):
        linking: AxiomLinking = frozenset(itertools.chain.from_iterable(combination))
        if validate_linking(linking, supertags, goal):
            valid.append(linking)
    return sorted(valid, key=lambda l: tuple(sorted(l)))


# ---------------------------------------------------------------------------
# Readings
# ---------------------------------------------------------------------------

class Reading(Enum):
    SUBJ_REL = "subj_rel"
    OBJ_REL = "obj_rel"


def extract_reading(pronoun_supertag: Formula) -> Reading:
    """Read the relative-clause interpretation off the pronoun's formula.

    The pronoun abstracts over a gap inside the clause body and modifies a
    noun phrase; the dependency role on the gap decides the reading.
    """
    match pronoun_supertag:
        case Implication(
            argument=Diamond(
                role="relcl",
                body=Implication(
                    argument=Diamond(role=gap, body=Atomic("VNW")),
                    result=Atomic("S"),
                ),
            ),
            result=Box(
                role="mod",
                body=Implication(argument=Atomic("NP"), result=Atomic("NP")),
            ),
        ):
            if gap == "su":
                return Reading.SUBJ_REL
            if gap == "obj1":
                return Reading.OBJ_REL
            raise UnknownGapRole(f"gap role {gap!r} is neither su nor obj1")
    raise NotARelativePronounType(
        f"not a relative pronoun formula: {format_formula(pronoun_supertag)}"
    )
