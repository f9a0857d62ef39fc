#!/usr/bin/env python3
"""Regenerate the bundled data files under src/relclause/data/.

The toy corpus stands in for a large automatically parsed treebank: a few
thousand transitive clauses whose subject/verb/object frequencies realize
the designed mix of irreversible, strongly preferring and weakly preferring
triples, plus intransitive and stopword-argument noise.  The held-out
corpus is a skewed sample of gold-annotated relative clauses used by the
finetuning regression check.  Deterministic for the fixed seed.
"""

from __future__ import annotations

import random
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from relclause.clausegen import TARGET_POS, relative_clause_supertags, relative_clause_tree
from relclause.typelogic import Reading, format_formula
from relclause.udencoding import DepTree, write_conll

SEED = 20240601
DATA = Path(__file__).resolve().parent.parent / "src" / "relclause" / "data"

# lemma -> (semantic class, gender)
NOUNS = {
    # person
    "man": ("person", "de"), "vrouw": ("person", "de"), "dokter": ("person", "de"),
    "patient": ("person", "de"), "leraar": ("person", "de"), "leerling": ("person", "de"),
    "agent": ("person", "de"), "dief": ("person", "de"), "toerist": ("person", "de"),
    "reiziger": ("person", "de"), "bakker": ("person", "de"), "klant": ("person", "de"),
    "buurman": ("person", "de"), "soldaat": ("person", "de"), "koning": ("person", "de"),
    "schrijver": ("person", "de"), "lezer": ("person", "de"), "zanger": ("person", "de"),
    "acteur": ("person", "de"), "student": ("person", "de"), "professor": ("person", "de"),
    "verpleger": ("person", "de"), "bewoner": ("person", "de"), "gast": ("person", "de"),
    "kok": ("person", "de"), "ober": ("person", "de"), "rechter": ("person", "de"),
    "advocaat": ("person", "de"), "getuige": ("person", "de"), "speler": ("person", "de"),
    "trainer": ("person", "de"), "jager": ("person", "de"), "visser": ("person", "de"),
    "boer": ("person", "de"), "piloot": ("person", "de"), "passagier": ("person", "de"),
    "kapper": ("person", "de"), "schilder": ("person", "de"), "dichter": ("person", "de"),
    "kind": ("person", "het"), "meisje": ("person", "het"),
    # animal
    "hond": ("animal", "de"), "kat": ("animal", "de"), "koe": ("animal", "de"),
    "vogel": ("animal", "de"), "vis": ("animal", "de"), "muis": ("animal", "de"),
    "leeuw": ("animal", "de"), "wolf": ("animal", "de"), "kip": ("animal", "de"),
    "eend": ("animal", "de"), "beer": ("animal", "de"), "vos": ("animal", "de"),
    "geit": ("animal", "de"), "ezel": ("animal", "de"),
    "paard": ("animal", "het"), "schaap": ("animal", "het"), "konijn": ("animal", "het"),
    "varken": ("animal", "het"), "hert": ("animal", "het"),
    # plant
    "boom": ("plant", "de"), "bloem": ("plant", "de"), "roos": ("plant", "de"),
    "struik": ("plant", "de"), "tulp": ("plant", "de"), "eik": ("plant", "de"),
    "gras": ("plant", "het"), "onkruid": ("plant", "het"),
    # substance
    "melk": ("substance", "de"), "wijn": ("substance", "de"), "olie": ("substance", "de"),
    "verf": ("substance", "de"), "inkt": ("substance", "de"), "zeep": ("substance", "de"),
    "water": ("substance", "het"), "bier": ("substance", "het"), "zand": ("substance", "het"),
    "goud": ("substance", "het"), "ijzer": ("substance", "het"), "hout": ("substance", "het"),
    # object
    "boterham": ("object", "de"), "appel": ("object", "de"), "auto": ("object", "de"),
    "fiets": ("object", "de"), "tafel": ("object", "de"), "stoel": ("object", "de"),
    "bal": ("object", "de"), "lepel": ("object", "de"), "vork": ("object", "de"),
    "krant": ("object", "de"), "brief": ("object", "de"), "taart": ("object", "de"),
    "jas": ("object", "de"), "schoen": ("object", "de"), "hamer": ("object", "de"),
    "spijker": ("object", "de"), "muur": ("object", "de"), "deur": ("object", "de"),
    "brug": ("object", "de"), "toren": ("object", "de"), "sleutel": ("object", "de"),
    "brood": ("object", "het"), "boek": ("object", "het"), "huis": ("object", "het"),
    "mes": ("object", "het"), "bord": ("object", "het"), "cadeau": ("object", "het"),
    "schilderij": ("object", "het"), "raam": ("object", "het"), "dak": ("object", "het"),
    "hek": ("object", "het"),
    # abstract
    "droom": ("abstract", "de"), "vraag": ("abstract", "de"), "les": ("abstract", "de"),
    "waarheid": ("abstract", "de"), "leugen": ("abstract", "de"), "grap": ("abstract", "de"),
    "wet": ("abstract", "de"), "regel": ("abstract", "de"), "taak": ("abstract", "de"),
    "fout": ("abstract", "de"),
    "verhaal": ("abstract", "het"), "idee": ("abstract", "het"), "plan": ("abstract", "het"),
    "antwoord": ("abstract", "het"), "lied": ("abstract", "het"), "gedicht": ("abstract", "het"),
    "besluit": ("abstract", "het"),
    # mass noun
    "rijst": ("mass_noun", "de"), "suiker": ("mass_noun", "de"), "soep": ("mass_noun", "de"),
    "pap": ("mass_noun", "de"), "honing": ("mass_noun", "de"), "jam": ("mass_noun", "de"),
    "meel": ("mass_noun", "het"), "graan": ("mass_noun", "het"), "deeg": ("mass_noun", "het"),
}

# Irreversible designs: verb -> list of (subjects, objects); every subject/object
# pair appears with a small random count.  Classes always differ within a pair.
IRREVERSIBLE = {
    "eet": [(["man", "vrouw", "kind", "gast"], ["boterham", "appel", "brood", "taart"]),
            (["koe", "geit", "schaap"], ["gras"]),
            (["paard", "ezel"], ["appel"]),
            (["student", "soldaat"], ["rijst", "pap"])],
    "drinkt": [(["man", "vrouw", "boer", "ober"], ["melk", "wijn", "bier", "water"])],
    "leest": [(["man", "lezer", "student", "professor"], ["boek", "krant", "brief", "verhaal", "gedicht"])],
    "schrijft": [(["schrijver", "dichter", "student"], ["boek", "brief", "verhaal", "gedicht"])],
    "koopt": [(["klant", "man", "vrouw", "toerist"], ["auto", "fiets", "huis", "boek", "taart"])],
    "verkoopt": [(["bakker", "boer", "visser"], ["brood", "taart", "vis"])],
    "bouwt": [(["man", "boer", "soldaat"], ["huis", "muur", "toren", "brug"])],
    "breekt": [(["kind", "gast", "hond"], ["bord", "raam", "stoel"])],
    "opent": [(["man", "vrouw", "gast"], ["deur", "raam", "brief"])],
    "sluit": [(["man", "bewoner"], ["deur", "raam"])],
    "draagt": [(["man", "vrouw", "meisje"], ["jas", "schoen", "tafel"])],
    "wast": [(["man", "vrouw"], ["auto", "hond", "jas"])],
    "zoekt": [(["man", "kind", "jager"], ["boek", "schoen", "hond", "sleutel"])],
    "vindt": [(["man", "kind", "visser"], ["boek", "brief", "bal"])],
    "verliest": [(["speler", "kind"], ["bal", "schoen"])],
    "vangt": [(["visser", "jager"], ["vis", "bal"]),
              (["kat", "vos"], ["muis", "vogel", "kip"])],
    "gooit": [(["speler", "kind"], ["bal", "spijker"])],
    "maakt": [(["kok", "man", "kapper"], ["taart", "stoel", "plan"])],
    "bakt": [(["bakker", "kok", "vrouw"], ["brood", "taart"])],
    "kookt": [(["kok", "man", "vrouw"], ["soep", "rijst", "pap"])],
    "proeft": [(["kok", "gast"], ["soep", "wijn", "honing"])],
    "ruikt": [(["hond", "man"], ["bloem", "soep"])],
    "plukt": [(["meisje", "vrouw", "boer"], ["bloem", "roos", "appel"])],
    "snijdt": [(["kok", "bakker"], ["brood", "taart"])],
    "repareert": [(["man", "boer"], ["auto", "fiets", "dak", "hek"])],
    "verft": [(["schilder", "man"], ["muur", "deur", "hek"])],
    "poetst": [(["soldaat", "man"], ["schoen", "fiets"])],
    "zingt": [(["zanger", "kind", "vogel"], ["lied"])],
    "vertelt": [(["man", "leraar", "schrijver"], ["verhaal", "grap", "leugen"])],
    "begrijpt": [(["student", "leerling"], ["vraag", "les", "verhaal", "wet"])],
    "beantwoordt": [(["leraar", "professor"], ["vraag", "brief"])],
    "stelt": [(["student", "rechter", "klant"], ["vraag"])],
    "leert": [(["leerling", "student", "kind"], ["les", "gedicht", "regel"])],
    "onthoudt": [(["leerling", "acteur"], ["verhaal", "les", "regel"])],
    "tekent": [(["kind", "schilder"], ["boom", "huis", "kat"])],
    "melkt": [(["boer", "meisje"], ["koe", "geit"])],
    "voert": [(["boer", "kind", "meisje"], ["hond", "kip", "eend", "paard"])],
    "aait": [(["kind", "vrouw", "meisje"], ["hond", "kat", "konijn"])],
    "borstelt": [(["meisje", "boer"], ["paard", "hond"])],
    "temt": [(["jager", "boer"], ["leeuw", "wolf", "paard"])],
    "smeert": [(["bakker", "kind"], ["jam", "honing", "zeep"])],
    "mengt": [(["bakker", "kok", "schilder"], ["meel", "suiker", "verf"])],
    "weegt": [(["bakker", "boer"], ["meel", "graan", "goud"])],
    "slijpt": [(["kok", "jager"], ["mes"])],
    "hakt": [(["boer", "man"], ["hout", "boom"])],
    "zaagt": [(["man", "boer"], ["hout", "boom"])],
    "kneedt": [(["bakker", "kok"], ["deeg"])],
}

# Reversible designs: (subject, verb, object, canonical count, inverted count).
# A strong preference needs canonical/max(inverted, 1) >= 10.
REVERSIBLE = [
    ("dokter", "geneest", "patient", 15, 0),
    ("leraar", "onderwijst", "leerling", 14, 1),
    ("agent", "verhoort", "dief", 12, 0),
    ("agent", "arresteert", "dief", 16, 1),
    ("ober", "bedient", "gast", 12, 1),
    ("verpleger", "verzorgt", "patient", 13, 1),
    ("advocaat", "verdedigt", "klant", 11, 0),
    ("rechter", "ondervraagt", "getuige", 12, 1),
    ("trainer", "traint", "speler", 14, 1),
    ("kapper", "knipt", "klant", 12, 1),
    ("soldaat", "redt", "bewoner", 11, 1),
    ("toerist", "herkent", "reiziger", 4, 3),
    ("buurman", "groet", "bakker", 3, 2),
    ("student", "ontmoet", "professor", 4, 2),
    ("man", "ziet", "vrouw", 5, 3),
    ("zanger", "hoort", "acteur", 3, 2),
    ("hond", "volgt", "kat", 4, 3),
    ("schrijver", "kent", "lezer", 4, 2),
    ("buurman", "helpt", "boer", 3, 2),
    ("gast", "bezoekt", "bewoner", 3, 2),
    ("dichter", "prijst", "schilder", 3, 1),
    ("leerling", "bewondert", "leraar", 4, 1),
    ("klant", "vertrouwt", "bakker", 3, 1),
    ("kat", "achtervolgt", "muis", 8, 1),
    ("speler", "duwt", "trainer", 2, 2),
    ("vrouw", "omhelst", "man", 3, 2),
    ("leraar", "begrijpt", "student", 3, 2),
]

INTRANSITIVE = ["slaapt", "lacht", "huilt", "wacht", "vertrekt", "zwemt", "danst"]
INTRANSITIVE_SUBJECTS = ["man", "vrouw", "kind", "hond", "kat", "gast", "student", "boer"]

# Arguments on the stopword list; the extracted triple must be skipped.
STOPWORD_ARGUMENT_VERBS = ["ziet", "hoort", "kent", "zoekt", "helpt"]
STOPWORD_ARGUMENTS = ["iemand", "iets", "niemand", "alles"]

# In the corpus but deliberately absent from the lexicon.
UNLISTED_NOUNS = {"burgemeester": "de", "wethouder": "de"}

STOPWORDS = """de het een die dat deze dit er hier daar ik jij je hij zij ze wij we
jullie u men mij me jou hem haar ons hen hun iemand niemand iets niets alles wie
wat welke en of maar want dus als dan toen nu niet wel ook nog al heel zeer te
naar van tot met zonder voor achter onder boven in uit op aan bij over door om
zich""".split()


def determiner(lemma: str) -> str:
    if lemma in UNLISTED_NOUNS:
        return UNLISTED_NOUNS[lemma]
    if lemma in STOPWORD_ARGUMENTS:
        return ""
    return NOUNS[lemma][1]


def transitive_tree(subject: str, verb: str, obj: str) -> DepTree:
    tokens: list[tuple[str, str]] = []
    heads: list[int] = []
    deprels: list[str] = []

    def noun_phrase(lemma: str, head_of_noun: int, relation: str) -> None:
        det = determiner(lemma)
        if det:
            tokens.append((det, "DET"))
            heads.append(len(tokens) + 1)
            deprels.append("det")
        tokens.append((lemma, "N"))
        heads.append(head_of_noun)
        deprels.append(relation)

    det_s = 1 if determiner(subject) else 0
    det_o = 1 if determiner(obj) else 0
    verb_index = det_s + 2
    noun_phrase(subject, verb_index, "nsubj")
    tokens.append((verb, "V"))
    heads.append(0)
    deprels.append("root")
    obj_index = verb_index + det_o + 1
    noun_phrase(obj, obj_index if det_o else verb_index, "obj")
    heads[-1] = verb_index
    if det_o:
        heads[-2] = obj_index
    return DepTree(tokens=tuple(tokens), heads=tuple(heads), deprels=tuple(deprels))


def intransitive_tree(subject: str, verb: str) -> DepTree:
    return DepTree(
        tokens=((determiner(subject), "DET"), (subject, "N"), (verb, "V")),
        heads=(2, 3, 0),
        deprels=("det", "nsubj", "root"),
    )


def build_corpus(rng: random.Random) -> list[DepTree]:
    trees: list[DepTree] = []
    for verb, frames in IRREVERSIBLE.items():
        for subjects, objects in frames:
            for subject in subjects:
                for obj in objects:
                    for _ in range(rng.randint(2, 6)):
                        trees.append(transitive_tree(subject, verb, obj))
    for subject, verb, obj, canonical, inverted in REVERSIBLE:
        trees.extend(transitive_tree(subject, verb, obj) for _ in range(canonical))
        trees.extend(transitive_tree(obj, verb, subject) for _ in range(inverted))
    for _ in range(120):
        trees.append(intransitive_tree(rng.choice(INTRANSITIVE_SUBJECTS), rng.choice(INTRANSITIVE)))
    for _ in range(60):
        subject = rng.choice(INTRANSITIVE_SUBJECTS)
        verb = rng.choice(STOPWORD_ARGUMENT_VERBS)
        trees.append(transitive_tree(subject, verb, rng.choice(STOPWORD_ARGUMENTS)))
    for _ in range(30):
        unlisted = rng.choice(sorted(UNLISTED_NOUNS))
        trees.append(transitive_tree(unlisted, "groet", rng.choice(["man", "vrouw", "gast"])))
    rng.shuffle(trees)
    return trees


# Held-out relative clauses: mostly canonical subject relatives, mirroring the
# skew of the taggers' simulated training data.
HELDOUT = [
    # (head noun, verb, embedded noun, reading)
    *[(s, v, o, "subj") for s, v, o, c, i in REVERSIBLE[:20]],
    *[(s, v, o, "subj") for s, v, o in [
        ("dokter", "geneest", "patient"), ("leraar", "onderwijst", "leerling"),
        ("agent", "arresteert", "dief"), ("ober", "bedient", "gast"),
        ("trainer", "traint", "speler"), ("toerist", "herkent", "reiziger"),
        ("man", "ziet", "vrouw"), ("hond", "volgt", "kat"),
        ("buurman", "helpt", "boer"), ("schrijver", "kent", "lezer"),
        ("student", "ontmoet", "professor"), ("soldaat", "redt", "bewoner"),
        ("kapper", "knipt", "klant"), ("advocaat", "verdedigt", "klant"),
        ("verpleger", "verzorgt", "patient"), ("rechter", "ondervraagt", "getuige"),
        ("leerling", "bewondert", "leraar"), ("dichter", "prijst", "schilder"),
        ("kat", "achtervolgt", "muis"), ("vrouw", "omhelst", "man"),
    ]],
    *[(o, v, s, "obj") for s, v, o in [
        ("dokter", "geneest", "patient"), ("agent", "verhoort", "dief"),
        ("trainer", "traint", "speler"), ("toerist", "herkent", "reiziger"),
        ("man", "ziet", "vrouw"), ("leraar", "begrijpt", "student"),
    ]],
    *[(s, v, o, "subj") for s, v, o in [
        ("man", "eet", "boterham"), ("vrouw", "drinkt", "wijn"),
        ("student", "leest", "boek"), ("bakker", "bakt", "brood"),
        ("kok", "kookt", "soep"), ("boer", "melkt", "koe"),
        ("schilder", "verft", "muur"), ("kind", "aait", "hond"),
    ]],
    *[(o, v, s, "obj") for s, v, o in [
        ("man", "eet", "boterham"), ("student", "leest", "boek"),
        ("bakker", "bakt", "brood"), ("kind", "aait", "hond"),
        ("boer", "melkt", "koe"), ("kok", "kookt", "soep"),
    ]],
]


def heldout_clause(head: str, verb: str, embedded: str, reading: Reading):
    head_det = NOUNS[head][1]
    pron = "die" if head_det == "de" else "dat"
    forms = (
        head_det.capitalize(), head, pron,
        NOUNS[embedded][1], embedded, verb,
    )
    tree = relative_clause_tree(reading, forms)
    supertags = relative_clause_supertags(reading)
    return tree, supertags


def write_heldout() -> None:
    trees = []
    tag_lines: list[str] = []
    for head, verb, embedded, reading_name in HELDOUT:
        reading = Reading.SUBJ_REL if reading_name == "subj" else Reading.OBJ_REL
        tree, supertags = heldout_clause(head, verb, embedded, reading)
        trees.append(tree)
        for form, formula in zip(tree.forms, supertags):
            tag_lines.append(f"{form}\t{format_formula(formula)}")
        tag_lines.append("")
    write_conll(trees, DATA / "heldout_corpus.conllu")
    (DATA / "heldout_supertags.tsv").write_text("\n".join(tag_lines) + "\n", encoding="utf-8")


def main() -> None:
    rng = random.Random(SEED)
    DATA.mkdir(parents=True, exist_ok=True)

    corpus = build_corpus(rng)
    write_conll(corpus, DATA / "toy_corpus.conllu")

    lexicon_lines = [f"{lemma}\t{cls}\t{gender}" for lemma, (cls, gender) in sorted(NOUNS.items())]
    (DATA / "lexicon.tsv").write_text("\n".join(lexicon_lines) + "\n", encoding="utf-8")

    (DATA / "stopwords_nl.txt").write_text("\n".join(sorted(set(STOPWORDS))) + "\n", encoding="utf-8")

    grammar = ["[atoms]", "N", "NP", "S", "VNW", "", "[roles]", "det", "mod", "relcl", "su", "obj1"]
    (DATA / "grammar.cfg").write_text("\n".join(grammar) + "\n", encoding="utf-8")

    annotations = [
        "kat\tachtervolgt\tmuis\tstrong",
        "muis\tachtervolgt\tkat\tDROP",
    ]
    (DATA / "annotations.tsv").write_text("\n".join(annotations) + "\n", encoding="utf-8")

    write_heldout()

    verbs = set(IRREVERSIBLE) | {verb for _, verb, _, _, _ in REVERSIBLE}
    print(f"{len(corpus)} corpus sentences, {len(verbs)} transitive verbs, "
          f"{len(HELDOUT)} held-out clauses")
    assert len(verbs) >= 50, "acceptance needs at least 50 verbs"


if __name__ == "__main__":
    main()
