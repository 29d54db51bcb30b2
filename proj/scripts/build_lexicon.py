#!/usr/bin/env python3
"""Regenerates the curated lexicon under data/lexicon/.

The word lists, selectional annotations and semantic clusters below are the
hand-curated source of truth. This script turns them into the tab-separated
files read by the C++ loader, together with:

  frequency.txt     lemma frequency ranking (wordfreq forms folded onto lemmas)
  associations.tsv  cue/target association strengths
  embeddings.txt    dense vectors built from the semantic clusters

Requires: wordfreq, pronouncing (only used to double-check a/an choices).
Output is deterministic.
"""

import argparse
import collections
import hashlib
import math
import os
import random
import sys

FREQ_CUTOFF = 5000
FREQ_KEEP = 8000
EMBED_DIM = 64

# ----------------------------------------------------------------------------
# Nouns: lemma -> (categories, clusters[, countable])

PERSON = "person"
GROUP = "social_group"
CONTROL = "social_control"
INST = "institution"
PHYS = "physical_entity"
OBJ = "object_nonedible"
FOOD = "object_edible"
DRINK = "object_drinkable"
CLOTH = "clothing"
DEVICE = "device"
CONT = "container"
COUNTRY = "country"

NOUNS = {}


def nouns(cats, cluster, words, countable=True):
    for w in words.split():
        NOUNS[w] = (cats, [cluster], countable)


nouns([PERSON], "family", "mother father son daughter brother sister cousin wife husband baby bride")
nouns([PERSON], "royalty", "king queen prince bishop priest")
nouns([PERSON], "medical", "doctor nurse physician patient")
nouns([PERSON], "military", "soldier colonel captain officer guard hero")
nouns([PERSON], "government", "attorney lawyer mayor minister president secretary")
nouns([PERSON], "arts", "actor actress singer dancer poet author writer")
nouns([PERSON], "education", "student teacher professor coach")
nouns([PERSON], "labour", "worker farmer driver pilot manager boss leader chief chef")
nouns([PERSON], "people", "man woman boy girl child adult lady guest friend stranger")
nouns([PERSON], "sport", "player athlete")
nouns([GROUP], "collective", "band team crew family club committee jury audience crowd gang")
nouns([CONTROL], "authority", "army government council court")
nouns([INST], "institution", "school church hospital bank company business agency university museum library college")
nouns([OBJ], "kitchenware", "pot knife glass bottle plate")
nouns([OBJ], "reading", "book newspaper letter magazine")
nouns([OBJ], "tools", "iron hammer key rope pen")
nouns([OBJ], "furnishing", "chair lamp mirror clock blanket candle")
nouns([OBJ], "valuables", "ring coin ticket gift")
nouns([OBJ], "recreation", "ball toy guitar piano")
nouns([OBJ, PHYS], "machinery", "computer engine")
nouns([PHYS], "vehicle", "car truck boat bicycle")
nouns([PHYS], "landmark", "statue")
nouns([FOOD], "meat", "chicken steak burger sausage")
nouns([FOOD], "baked", "pie cake cookie sandwich pizza")
nouns([FOOD], "produce", "apple banana potato lemon onion tomato peach")
nouns([FOOD], "dish", "salad egg")
nouns([FOOD], "staple", "bread cheese rice", countable=False)
nouns([DRINK], "alcohol", "beer wine cocktail vodka")
nouns([DRINK], "hotdrink", "tea coffee")
nouns([DRINK], "softdrink", "juice soda")
nouns([DRINK], "plain", "water milk", countable=False)
nouns([CLOTH], "clothing", "hat jacket coat shirt dress suit boot shoe cap helmet uniform glove scarf sweater belt mask skirt robe")
nouns([DEVICE], "electronics", "phone camera radio laptop tablet microphone")
nouns([DEVICE], "accessory", "umbrella")
nouns([CONT], "carrier", "bag box basket bucket jar backpack wallet purse envelope suitcase sack cup bowl tray")
nouns([COUNTRY], "europe", "france germany italy spain ireland greece norway sweden poland england")
nouns([COUNTRY], "americas", "canada mexico brazil cuba chile peru argentina")
nouns([COUNTRY], "asia", "china japan india russia korea")
nouns([COUNTRY], "africa", "egypt kenya nigeria")

# ----------------------------------------------------------------------------
# Verbs

P, G, C, I = PERSON, GROUP, CONTROL, INST
O, E, D, Y = OBJ, FOOD, DRINK, PHYS

TRANSITIVE = [
    # lemma, past, participle, third, agents, patients, cluster
    ("judge", "judged", "judged", "judges", [P, C], [P, G], "evaluation"),
    ("forget", "forgot", "forgotten", "forgets", [P], [P, O], "memory"),
    ("follow", "followed", "followed", "follows", [P, G, C], [P, G], "pursuit"),
    ("chase", "chased", "chased", "chases", [P, G, C], [P], "pursuit"),
    ("help", "helped", "helped", "helps", [P, G, I, C], [P, G, I], "support"),
    ("protect", "protected", "protected", "protects", [P, G, C], [P, G, I], "support"),
    ("save", "saved", "saved", "saves", [P, C], [P, G], "support"),
    ("support", "supported", "supported", "supports", [P, G, I], [P, G, I], "support"),
    ("embrace", "embraced", "embraced", "embraces", [P, G, I], [P, G, I], "affection"),
    ("hug", "hugged", "hugged", "hugs", [P], [P], "affection"),
    ("kiss", "kissed", "kissed", "kisses", [P], [P], "affection"),
    ("love", "loved", "loved", "loves", [P], [P, G, E, D], "affection"),
    ("marry", "married", "married", "marries", [P], [P], "affection"),
    ("beat", "beat", "beaten", "beats", [P, G], [P, G], "violence"),
    ("strike", "struck", "struck", "strikes", [P], [P, O], "violence"),
    ("hit", "hit", "hit", "hits", [P], [P, O, Y], "violence"),
    ("kick", "kicked", "kicked", "kicks", [P], [P, O], "violence"),
    ("attack", "attacked", "attacked", "attacks", [P, G, C], [P, G, I], "violence"),
    ("kill", "killed", "killed", "kills", [P, G], [P], "violence"),
    ("wash", "washed", "washed", "washes", [P], [P, O, Y, E], "care"),
    ("fix", "fixed", "fixed", "fixes", [P], [O, Y], "care"),
    ("break", "broke", "broken", "breaks", [P], [O, Y], "damage"),
    ("destroy", "destroyed", "destroyed", "destroys", [P, G, C], [O, Y, I], "damage"),
    ("wrap", "wrapped", "wrapped", "wraps", [P], [O, E], "handling"),
    ("carry", "carried", "carried", "carries", [P], [P, O, E, D], "handling"),
    ("grab", "grabbed", "grabbed", "grabs", [P], [O, E, D], "handling"),
    ("hold", "held", "held", "holds", [P], [P, O, E, D], "handling"),
    ("remove", "removed", "removed", "removes", [P], [O, Y], "handling"),
    ("use", "used", "used", "uses", [P, I], [O, Y], "handling"),
    ("push", "pushed", "pushed", "pushes", [P], [P, O, Y], "motion"),
    ("pull", "pulled", "pulled", "pulls", [P], [P, O, Y], "motion"),
    ("drop", "dropped", "dropped", "drops", [P], [O, E, D], "motion"),
    ("raise", "raised", "raised", "raises", [P], [O], "motion"),
    ("purchase", "purchased", "purchased", "purchases", [P, I, G], [O, E, D, Y], "acquisition"),
    ("steal", "stole", "stolen", "steals", [P], [O, E, D, Y], "acquisition"),
    ("want", "wanted", "wanted", "wants", [P, I, G], [O, E, D, Y], "acquisition"),
    ("choose", "chose", "chosen", "chooses", [P, G, C], [P, O, E, D], "acquisition"),
    ("drink", "drank", "drunk", "drinks", [P], [D], "consumption"),
    ("eat", "ate", "eaten", "eats", [P], [E], "consumption"),
    ("smell", "smelled", "smelled", "smells", [P], [E, D, O], "senses"),
    ("prepare", "prepared", "prepared", "prepares", [P], [E, D], "consumption"),
    ("watch", "watched", "watched", "watches", [P], [P, G], "senses"),
    ("visit", "visited", "visited", "visits", [P, G], [P, I], "social"),
    ("call", "called", "called", "calls", [P, I], [P, I], "social"),
    ("trust", "trusted", "trusted", "trusts", [P, G], [P, G, I], "attitude"),
    ("admire", "admired", "admired", "admires", [P, G], [P, G], "attitude"),
    ("hate", "hated", "hated", "hates", [P, G], [P, G, I, E], "attitude"),
    ("warn", "warned", "warned", "warns", [P, C], [P, G], "evaluation"),
]

DITRANSITIVE = [
    # lemma, past, participle, third, prep, agents, recipients, patients, cluster
    ("give", "gave", "given", "gives", "to", [P, G, I], [P, G, I], [O, E, D, Y], "transfer"),
    ("send", "sent", "sent", "sends", "to", [P, G, I], [P, G, I], [O, E, D], "transfer"),
    ("hand", "handed", "handed", "hands", "to", [P], [P], [O, E, D], "transfer"),
    ("offer", "offered", "offered", "offers", "to", [P, G, I], [P, G], [O, E, D], "transfer"),
    ("pass", "passed", "passed", "passes", "to", [P], [P], [O, E, D], "transfer"),
    ("lend", "lent", "lent", "lends", "to", [P, I], [P, G], [O, Y], "transfer"),
    ("sell", "sold", "sold", "sells", "to", [P, I], [P, G, I], [O, E, D, Y], "commerce"),
    ("throw", "threw", "thrown", "throws", "to", [P], [P], [O, E], "motion"),
    ("show", "showed", "shown", "shows", "to", [P, G], [P, G], [O, Y], "display"),
    ("bring", "brought", "brought", "brings", "to", [P], [P, G], [O, E, D], "transfer"),
    ("buy", "bought", "bought", "buys", "for", [P, I], [P, G], [O, E, D, Y], "commerce"),
    ("cook", "cooked", "cooked", "cooks", "for", [P], [P, G], [E], "cooking"),
    ("bake", "baked", "baked", "bakes", "for", [P], [P, G], [E], "cooking"),
    ("make", "made", "made", "makes", "for", [P], [P, G], [E, D, O], "creation"),
    ("build", "built", "built", "builds", "for", [P, G, I], [P, G, I], [O, Y], "creation"),
    ("pour", "poured", "poured", "pours", "for", [P], [P], [D], "cooking"),
    ("find", "found", "found", "finds", "for", [P], [P], [O], "acquisition"),
]

PADDING_VERBS = {
    "come": "arrival", "arrive": "arrival", "appear": "arrival", "return": "arrival",
    "remain": "stasis", "stay": "stasis", "wait": "stasis", "sit": "stasis", "rest": "stasis",
    "leave": "departure", "disappear": "departure",
    "sleep": "rest", "relax": "rest",
    "laugh": "mood", "smile": "mood", "cry": "mood", "complain": "mood",
    "agree": "speech", "listen": "speech",
    "run": "activity", "swim": "activity", "dance": "activity", "travel": "activity",
}

PRONOUNS = "i you he she we they".split()
AUXILIARIES = "might did should could would will can may must".split()

# ----------------------------------------------------------------------------
# Adjectives: cluster -> (categories, words)

HUMAN = [P]
SOCIAL = [G, C, I]
THING = [O, Y, CLOTH, DEVICE, CONT]
EDIBLE = [E]
DRINKABLE = [D]

ADJ_GROUPS = [
    ("emotion", HUMAN, "happy sad angry nervous proud lonely calm anxious upset excited bored worried sleepy jealous cheerful scared confused surprised grateful desperate"),
    ("personality", HUMAN, "kind brave honest friendly polite rude shy wise clever smart lazy loyal generous gentle careful foolish silly stupid funny serious curious evil innocent guilty mean cruel decent humble responsible"),
    ("bodily", HUMAN, "tall young elderly hungry thirsty sick healthy tired fat thin skinny blind strong weak pregnant injured naked"),
    ("looks", HUMAN + THING, "beautiful handsome pretty ugly cute lovely"),
    ("status", HUMAN + SOCIAL, "rich poor wealthy famous popular powerful successful talented brilliant important dangerous mysterious professional"),
    ("scope", SOCIAL, "local national public private international independent religious military royal federal foreign global political official corrupt major"),
    ("age", HUMAN + SOCIAL + THING, "old new modern ancient"),
    ("quality", HUMAN + THING + EDIBLE + DRINKABLE, "good bad nice awful terrible perfect strange ordinary special"),
    ("colour", THING, "red blue green yellow black white brown pink purple orange grey golden silver dark bright"),
    ("size", SOCIAL + THING, "small large big huge tiny giant"),
    ("shape", THING, "round square sharp flat long short wide narrow thick deep tight"),
    ("texture", THING + EDIBLE, "soft hard smooth rough"),
    ("condition", THING, "dirty shiny wet dry damaged rusty dusty empty full heavy fragile useful useless complete missing unusual original clear"),
    ("material", THING, "wooden plastic metal"),
    ("value", THING + EDIBLE + DRINKABLE, "cheap expensive rare valuable precious fancy simple plain favorite basic premium fine pure cool"),
    ("temperature", EDIBLE + DRINKABLE, "hot cold warm frozen iced"),
    ("flavour", EDIBLE + DRINKABLE, "fresh sweet sour bitter delicious tasty spicy salty juicy crispy stale rotten raw organic homemade natural dry"),
]

ADJECTIVES = {}
for cluster, cats, words in ADJ_GROUPS:
    for w in words.split():
        if w in ADJECTIVES:
            ADJECTIVES[w][0].update(cats)
        else:
            ADJECTIVES[w] = (set(cats), cluster)

# Cross-cluster associations, in the spirit of free-association norms.
EXTRA_ASSOCIATIONS = [
    ("doctor", "hospital", 0.31), ("nurse", "hospital", 0.22), ("patient", "hospital", 0.18),
    ("teacher", "school", 0.35), ("student", "school", 0.41), ("professor", "university", 0.30),
    ("student", "college", 0.24), ("priest", "church", 0.39), ("bishop", "church", 0.33),
    ("soldier", "army", 0.52), ("colonel", "army", 0.21), ("judge", "court", 0.27),
    ("lawyer", "court", 0.25), ("attorney", "court", 0.12), ("jury", "court", 0.30),
    ("mayor", "government", 0.11), ("president", "government", 0.20), ("minister", "church", 0.15),
    ("drink", "beer", 0.21), ("drink", "wine", 0.12), ("drink", "juice", 0.09), ("drink", "water", 0.38),
    ("drink", "soda", 0.07), ("drink", "tea", 0.03), ("drink", "coffee", 0.04),
    ("eat", "pie", 0.02), ("eat", "cake", 0.03), ("eat", "apple", 0.02), ("eat", "food", 0.4),
    ("cook", "chicken", 0.03), ("cook", "chef", 0.29), ("bake", "cake", 0.35), ("bake", "pie", 0.14),
    ("bake", "cookie", 0.19), ("bake", "bread", 0.2), ("pour", "wine", 0.05), ("pour", "water", 0.18),
    ("throw", "ball", 0.43), ("kick", "ball", 0.32), ("marry", "bride", 0.11), ("marry", "wife", 0.09),
    ("kiss", "lady", 0.02), ("wash", "dirty", 0.21), ("paint", "artist", 0.16), ("steal", "wallet", 0.05),
    ("drive", "car", 0.3), ("driver", "car", 0.35), ("driver", "truck", 0.12), ("pilot", "boat", 0.04),
    ("read", "book", 0.3), ("writer", "book", 0.08), ("author", "book", 0.26), ("poet", "book", 0.03),
    ("singer", "band", 0.14), ("musician", "band", 0.19), ("musician", "guitar", 0.1), ("player", "team", 0.22),
    ("coach", "team", 0.31), ("player", "ball", 0.05), ("king", "army", 0.02), ("queen", "king", 0.64),
    ("bank", "coin", 0.05), ("wallet", "coin", 0.06), ("key", "car", 0.05), ("key", "lock", 0.6),
    ("hat", "head", 0.4), ("coat", "jacket", 0.29), ("phone", "call", 0.38), ("camera", "picture", 0.5),
    ("chef", "kitchen", 0.3), ("bread", "cheese", 0.06), ("milk", "cookie", 0.12), ("cheese", "pizza", 0.07),
    ("italy", "pizza", 0.05), ("france", "wine", 0.05), ("china", "rice", 0.08), ("mexico", "chile", 0.02),
    ("england", "tea", 0.04), ("ireland", "beer", 0.03), ("russia", "vodka", 0.14), ("japan", "camera", 0.01),
    ("hot", "coffee", 0.09), ("cold", "beer", 0.04), ("sweet", "cake", 0.05), ("sour", "lemon", 0.3),
    ("red", "apple", 0.06), ("yellow", "banana", 0.1), ("orange", "juice", 0.06), ("sharp", "knife", 0.38),
    ("royal", "king", 0.2), ("royal", "queen", 0.14), ("military", "army", 0.3), ("religious", "church", 0.33),
    ("sick", "doctor", 0.08), ("sick", "hospital", 0.05), ("hungry", "eat", 0.3), ("thirsty", "drink", 0.5),
    ("rich", "bank", 0.04), ("famous", "actor", 0.05), ("famous", "singer", 0.02), ("brave", "hero", 0.18),
    ("guilty", "court", 0.04), ("innocent", "baby", 0.09), ("wooden", "chair", 0.04), ("metal", "iron", 0.07),
    ("glass", "mirror", 0.11), ("lamp", "candle", 0.09), ("umbrella", "coat", 0.04),
    # Zero-strength rows appear in raw norms exports and are ignored by the loader.
    ("clock", "egg", 0.0), ("rope", "tea", 0.0),
]

# ----------------------------------------------------------------------------
# a/an exceptions mirrored from the C++ implementation.

AN_EXCEPTIONS = {"hour", "honest", "honor", "heir", "herb", "honour", "hourly"}
A_EXCEPTIONS = {"one", "once", "unit", "union", "unique", "uniform", "university", "user", "useful", "useless",
                "usual", "utensil", "euro", "european", "ewe", "unicorn", "universe", "utility", "ukulele"}


def article(word):
    if word in AN_EXCEPTIONS:
        return "an"
    if word in A_EXCEPTIONS:
        return "a"
    return "an" if word[0] in "aeiou" else "a"


def stable_hash(*parts):
    h = hashlib.sha256("\x1f".join(parts).encode()).digest()
    return int.from_bytes(h[:8], "little")


def frequency_list():
    import wordfreq
    forms = wordfreq.top_n_list("en", 60000)
    idx = {w: i for i, w in enumerate(forms)}

    def lemma(w):
        for suf, rep in (("ies", "y"), ("es", ""), ("s", ""), ("ed", ""), ("ed", "e"), ("ing", ""), ("ing", "e")):
            if w.endswith(suf) and len(w) > len(suf) + 2:
                base = w[: -len(suf)] + rep
                if base in idx and idx[base] < idx[w]:
                    return base
        return w

    freq = collections.Counter()
    for w in forms:
        if w.isalpha():
            freq[lemma(w)] += wordfreq.word_frequency(w, "en")
    ranked = sorted(freq.items(), key=lambda kv: (-kv[1], kv[0]))
    return [w for w, _ in ranked[:FREQ_KEEP]]


def unit_vector(rng, dim):
    v = [rng.gauss(0.0, 1.0) for _ in range(dim)]
    n = math.sqrt(sum(x * x for x in v))
    return [x / n for x in v]


def build_embeddings(words):
    """words: lemma -> (coarse group, [clusters]). Cluster and group directions
    are random unit vectors; each lemma adds its own noise direction."""
    basis = {}

    def direction(name):
        if name not in basis:
            basis[name] = unit_vector(random.Random(stable_hash("basis", name)), EMBED_DIM)
        return basis[name]

    out = {}
    for lemma in sorted(words):
        coarse, clusters = words[lemma]
        v = [0.0] * EMBED_DIM
        for c in clusters:
            v = [a + 1.0 * b for a, b in zip(v, direction("cluster:" + c))]
        v = [a + 0.72 * b for a, b in zip(v, direction("coarse:" + coarse))]
        noise = unit_vector(random.Random(stable_hash("lemma", lemma)), EMBED_DIM)
        v = [a + 0.62 * b for a, b in zip(v, noise)]
        out[lemma] = v
    return out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=os.path.join(os.path.dirname(__file__), "..", "data", "lexicon"))
    args = ap.parse_args()
    os.makedirs(args.out, exist_ok=True)

    ranked = frequency_list()
    rank = {w: i + 1 for i, w in enumerate(ranked)}

    def frequent(w):
        return rank.get(w, FREQ_KEEP + 1) <= FREQ_CUTOFF

    report = []
    # Nouns past the cutoff stay in the file so association lookups keep working;
    # the loader excludes them from sampling.
    for w in NOUNS:
        if not frequent(w):
            report.append(f"noun over cutoff (kept, unsampled): {w} rank={rank.get(w)}")
    transitive = [v for v in TRANSITIVE if frequent(v[0])]
    ditransitive = [v for v in DITRANSITIVE if frequent(v[0])]
    for v in TRANSITIVE + DITRANSITIVE:
        if not frequent(v[0]):
            report.append(f"verb dropped (over cutoff): {v[0]} rank={rank.get(v[0])}")
    adjectives = {w: a for w, a in ADJECTIVES.items() if frequent(w)}
    for w in ADJECTIVES:
        if w not in adjectives:
            report.append(f"adjective dropped (over cutoff): {w} rank={rank.get(w)}")
    padding = {w: c for w, c in PADDING_VERBS.items() if frequent(w)}

    # Homograph guard: a lemma may belong to one word class only.
    classes = collections.defaultdict(list)
    for w in NOUNS:
        classes[w].append("noun")
    for v in transitive + ditransitive:
        classes[v[0]].append("verb")
    for w in padding:
        classes[w].append("padding")
    for w in adjectives:
        classes[w].append("adjective")
    clashes = {w: c for w, c in classes.items() if len(c) > 1}
    if clashes:
        sys.exit(f"lemma appears in several word classes: {clashes}")

    # a/an check against CMUdict.
    try:
        import pronouncing
        for w in list(NOUNS) + list(adjectives):
            phones = pronouncing.phones_for_word(w)
            if not phones:
                continue
            vowel = phones[0].split()[0][0] in "AEIOU"
            if (article(w) == "an") != vowel:
                report.append(f"a/an mismatch: {w} -> {article(w)} ({phones[0]})")
    except ImportError:
        report.append("pronouncing not installed; a/an check skipped")

    with open(os.path.join(args.out, "nouns.tsv"), "w") as f:
        f.write("# lemma\tclass\tcategories=...\tcountable=yes|no\n")
        for w in sorted(NOUNS):
            cats, _, countable = NOUNS[w]
            f.write(f"{w}\tnoun\tcategories={';'.join(cats)}\tcountable={'yes' if countable else 'no'}\n")

    with open(os.path.join(args.out, "verbs.tsv"), "w") as f:
        f.write("# lemma\tclass\tkey=value annotations (lists are ';'-separated)\n")
        for lemma, past, part, third, ag, pa, _ in sorted(transitive):
            f.write(f"{lemma}\ttransitive\tpast={past}\tparticiple={part}\tthird={third}"
                    f"\tagent={';'.join(ag)}\tpatient={';'.join(pa)}\n")
        for lemma, past, part, third, prep, ag, rc, pa, _ in sorted(ditransitive):
            f.write(f"{lemma}\tditransitive\tpast={past}\tparticiple={part}\tthird={third}\tprep={prep}"
                    f"\tagent={';'.join(ag)}\trecipient={';'.join(rc)}\tpatient={';'.join(pa)}\n")
        for lemma in sorted(padding):
            f.write(f"{lemma}\tintransitive_padding\n")

    with open(os.path.join(args.out, "adjectives.tsv"), "w") as f:
        f.write("# lemma\tclass\tcompatible=...\n")
        order = [PERSON, GROUP, CONTROL, INST, PHYS, OBJ, FOOD, DRINK, CLOTH, DEVICE, CONT, COUNTRY]
        for w in sorted(adjectives):
            cats = sorted(adjectives[w][0], key=order.index)
            f.write(f"{w}\tadjective\tcompatible={';'.join(cats)}\n")

    with open(os.path.join(args.out, "padding.tsv"), "w") as f:
        f.write("# closed classes for padding sentences: class\tword\n")
        for p in PRONOUNS:
            f.write(f"pronoun\t{p}\n")
        for a in AUXILIARIES:
            f.write(f"auxiliary\t{a}\n")

    with open(os.path.join(args.out, "frequency.txt"), "w") as f:
        f.write("\n".join(ranked) + "\n")

    # Embedding inputs: coarse group + clusters.
    emb_words = {}
    coarse_of = {PERSON: "human", GROUP: "group", CONTROL: "group", INST: "group", OBJ: "artifact", PHYS: "artifact",
                 FOOD: "food", DRINK: "drink", CLOTH: "artifact", DEVICE: "artifact", CONT: "artifact",
                 COUNTRY: "place"}
    for w, (cats, clusters, _) in NOUNS.items():
        emb_words[w] = (coarse_of[cats[0]], clusters)
    for v in transitive:
        emb_words[v[0]] = ("verb", [v[6]])
    for v in ditransitive:
        emb_words[v[0]] = ("verb", [v[8]])
    for w, c in padding.items():
        emb_words[w] = ("intransitive", [c])
    for w, (_, c) in adjectives.items():
        emb_words[w] = ("adjective", [c])
    vectors = build_embeddings(emb_words)
    with open(os.path.join(args.out, "embeddings.txt"), "w") as f:
        f.write(f"{len(vectors)} {EMBED_DIM}\n")
        for w in sorted(vectors):
            f.write(w + " " + " ".join(f"{x:.6f}" for x in vectors[w]) + "\n")

    # Associations: most same-cluster pairs plus the curated cross-cluster list.
    members = collections.defaultdict(list)
    for w, (_, clusters) in emb_words.items():
        for c in clusters:
            members[c].append(w)
    assoc = {}
    for c, ws in members.items():
        ws = sorted(ws)
        for i, a in enumerate(ws):
            for b in ws[i + 1:]:
                h = stable_hash("assoc", a, b)
                if h % 10 >= 7:
                    continue
                s = round(0.01 + (h >> 8) % 60 / 100.0, 2)
                if (h >> 20) % 3 == 0:
                    assoc[(a, b)] = s
                elif (h >> 20) % 3 == 1:
                    assoc[(b, a)] = s
                else:
                    assoc[(a, b)] = s
                    assoc[(b, a)] = round(max(0.01, s * 0.6), 2)
    for a, b, s in EXTRA_ASSOCIATIONS:
        assoc[(a, b)] = s
    with open(os.path.join(args.out, "associations.tsv"), "w") as f:
        f.write("# cue\ttarget\tstrength\n")
        for (a, b) in sorted(assoc):
            f.write(f"{a}\t{b}\t{assoc[(a, b)]:.2f}\n")

    n_core_nouns = sum(1 for w, (c, _, cnt) in NOUNS.items()
                       if cnt and frequent(w) and not set(c) & {CLOTH, DEVICE, CONT, COUNTRY})
    n_with = sum(1 for w, (c, _, cnt) in NOUNS.items() if frequent(w) and set(c) <= {CLOTH, DEVICE, CONT})
    n_country = sum(1 for w, (c, _, _) in NOUNS.items() if frequent(w) and c == [COUNTRY])
    print(f"transitive={len(transitive)} ditransitive={len(ditransitive)} core_nouns={n_core_nouns} "
          f"with_nouns={n_with} countries={n_country} adjectives={len(adjectives)} padding={len(padding)} "
          f"associations={len(assoc)}")
    for line in report:
        print("  " + line)


if __name__ == "__main__":
    main()
