#!/usr/bin/env python3
"""Generate data/stimuli.tsv, the bundled 120-item stimulus inventory.

Frames are authored fixture data: five matched contexts per verb built from
small role pools (subject, theme, recipient/goal, adjunct). donate and give
carry their published example frames verbatim. Running this script is
deterministic; the TSV it writes is committed.
"""
import pathlib
import sys

OUT = pathlib.Path(__file__).resolve().parent.parent / "data" / "stimuli.tsv"

DATIVE = {
    "Strong": "donate explain whisper mutter announce confess demonstrate describe dictate illustrate mention "
              "murmur narrate portray proclaim propose recite recommend recount relay report return say shout "
              "suggest transfer yell".split(),
    "Weak": "carry deliver drive ferry fly hand haul kick lend mail move pass pull push read rent serve ship "
            "slide take throw toss wire write cable telegraph".split(),
    "None": "bring feed give grant leave loan offer owe pay promise sell send show teach tell wish award deal "
            "flip forward guarantee pitch quote refund repay trade float".split(),
}
CAUSATIVE = {
    "Strong": "disappear vanish die faint blush cry laugh sneeze sleep arrive".split(),
    "None": "melt bounce open close break grow change turn roll slide".split(),
}
LOCATIVE = {
    "Strong": "pour drip dump dribble drizzle squeeze scatter sprinkle splash squirt".split(),
    "None": "spray load pack stuff wrap smear spread stock cram fill".split(),
}

IRREGULAR = {
    "bring": "brought", "break": "broke", "deal": "dealt", "drive": "drove", "feed": "fed", "fly": "flew",
    "give": "gave", "grow": "grew", "leave": "left", "lend": "lent", "pay": "paid", "read": "read",
    "repay": "repaid", "say": "said", "sell": "sold", "send": "sent", "show": "showed", "sleep": "slept",
    "slide": "slid", "spread": "spread", "take": "took", "teach": "taught", "tell": "told", "throw": "threw",
    "write": "wrote",
}
DOUBLING = {"ship", "drip", "flip", "wrap", "cram", "transfer"}


def past(lemma):
    if lemma in IRREGULAR:
        return IRREGULAR[lemma]
    if lemma in DOUBLING:
        return lemma + lemma[-1] + "ed"
    if lemma.endswith("e"):
        return lemma + "d"
    if lemma.endswith("y") and lemma[-2] not in "aeiou":
        return lemma[:-1] + "ied"
    return lemma + "ed"


SUBJECTS = ["She", "The professor", "My neighbor", "The company", "His family"]

# Published frames (conventional PD, unconventional DOD).
PUBLISHED = {
    "donate": [
        ("She donated the paintings to the museum.", "She donated the museum the paintings."),
        ("The professor donated his collection to the university.",
         "The professor donated the university his collection."),
        ("My neighbor donated her old clothes to the shelter.", "My neighbor donated the shelter her old clothes."),
        ("The company donated computers to the school.", "The company donated the school computers."),
        ("His family donated their savings to the foundation.", "His family donated the foundation their savings."),
    ],
    "give": [
        ("She gave the flowers to the teacher.", "She gave the teacher the flowers."),
        ("The professor gave his notes to the student.", "The professor gave the student his notes."),
        ("My neighbor gave her keys to the friend.", "My neighbor gave the friend her keys."),
        ("The company gave a bonus to the employee.", "The company gave the employee a bonus."),
        ("His family gave the money to the charity.", "His family gave the charity the money."),
    ],
}

# (theme, recipient, adjunct) pools per semantic class.
COMM = [
    ("the story", "the police", "yesterday"),
    ("the new plan", "the nervous students", ""),
    ("the answer", "her younger brother", "again"),
    ("the results", "the board", ""),
    ("the good news", "their grandmother", "today"),
    ("the old poem", "the young children", ""),
    ("a message", "the nurses", "quietly"),
    ("the main idea", "the new manager", ""),
]
GOODS = [
    ("the old books", "the local library", ""),
    ("a new laptop", "her cousin", "today"),
    ("the spare tickets", "their neighbors", ""),
    ("the bicycle", "the boy", "yesterday"),
    ("the chairs", "the school", "again"),
    ("fresh bread", "the hungry guests", ""),
    ("the package", "the front desk", ""),
    ("some warm blankets", "the old couple", ""),
]
MOTION = [
    ("the heavy boxes", "the new office", ""),
    ("the letters", "her grandmother", "today"),
    ("the small parcel", "the old farmer", ""),
    ("the supplies", "the village", "quickly"),
    ("the red ball", "the little girl", ""),
    ("the lamp", "the repair shop", ""),
    ("the fish", "the market", "early"),
    ("the spare keys", "his roommate", ""),
]
COMM_VERBS = set("explain whisper mutter announce confess demonstrate describe dictate illustrate mention murmur "
                 "narrate portray proclaim propose recite recommend recount relay report say shout suggest yell "
                 "read write promise teach tell wish quote show guarantee".split())
MOTION_VERBS = set("carry deliver drive ferry fly haul kick mail move pull push ship slide take throw toss wire "
                   "cable telegraph bring send flip forward pitch float".split())


def dative_frames(lemma, idx):
    if lemma in PUBLISHED:
        return PUBLISHED[lemma]
    pool = COMM if lemma in COMM_VERBS else MOTION if lemma in MOTION_VERBS else GOODS
    v = past(lemma)
    frames = []
    for i in range(5):
        theme, recip, adj = pool[(idx + i) % len(pool)]
        subj = SUBJECTS[i]
        conv = " ".join(x for x in (subj, v, theme, "to", recip, adj) if x) + "."
        unconv = " ".join(x for x in (subj, v, recip, theme, adj) if x) + "."
        frames.append((conv, unconv))
    return frames


ANIMATE_THEMES = [("the old man", "in the kitchen"), ("the little boy", "during the show"),
                  ("the shy student", "at the party"), ("the tired baby", "at home"),
                  ("the young actor", "on stage"), ("the old dog", "in the yard")]
OBJECT_THEMES = [("the old window", "last night"), ("the glass door", "with a crash"),
                 ("the metal box", "in the garage"), ("the small boat", "in the lake"),
                 ("the plastic toy", "on the floor"), ("the ice cream", "in the sun")]
CAUSERS = ["The magician", "Her brother", "The teacher", "The coach", "The clown"]
ANIMATE_CAUSATIVE = set("disappear vanish die faint blush cry laugh sneeze sleep arrive".split())


def causative_frames(lemma, idx):
    v = past(lemma)
    pool = ANIMATE_THEMES if lemma in ANIMATE_CAUSATIVE else OBJECT_THEMES
    frames = []
    for i in range(5):
        theme, adj = pool[(idx + i) % len(pool)]
        intrans = f"{theme[0].upper()}{theme[1:]} {v} {adj}."
        trans = f"{CAUSERS[i]} {v} {theme} {adj}."
        frames.append((intrans, trans))
    return frames


LIQUID = [("cold water", "into", "the glass", ""),
          ("red paint", "onto", "the wall", ""),
          ("warm sauce", "onto", "the pasta", ""),
          ("olive oil", "into", "the pan", ""),
          ("fresh juice", "into", "the cup", ""),
          ("melted butter", "onto", "the bread", "")]
SOLID = [("the old books", "into", "the box", ""),
         ("the seeds", "onto", "the garden", ""),
         ("the clothes", "into", "the suitcase", ""),
         ("fresh sand", "onto", "the icy path", ""),
         ("the apples", "into", "the crate", ""),
         ("the cushions", "onto", "the new sofa", "")]
LIQUID_VERBS = set("pour drip dribble drizzle squeeze splash squirt spray smear".split())


def locative_frames(lemma, idx):
    v = past(lemma)
    pool = LIQUID if lemma in LIQUID_VERBS else SOLID
    frames = []
    for i in range(5):
        theme, prep, goal, adj = pool[(idx + i) % len(pool)]
        subj = SUBJECTS[i]
        content = " ".join(x for x in (subj, v, theme, prep, goal, adj) if x) + "."
        container = " ".join(x for x in (subj, v, goal, "with", theme, adj) if x) + "."
        frames.append((content, container))
    return frames


def main():
    rows = []
    plus = DATIVE["Strong"][:20]
    minus = DATIVE["None"][:20]
    idx = 0
    for cat in ("Strong", "Weak", "None"):
        for lemma in DATIVE[cat]:
            comp = "PlusCompeting" if lemma in plus else "MinusCompeting" if lemma in minus else "Unassigned"
            for f, (conv, unconv) in enumerate(dative_frames(lemma, idx)):
                rows.append((lemma, "Dative", cat, comp, "A", f, conv, unconv))
            idx += 1
    for cat, verbs in CAUSATIVE.items():
        for lemma in verbs:
            for f, (intrans, trans) in enumerate(causative_frames(lemma, idx)):
                # conventional = intransitive (variant A) for both categories
                rows.append((lemma, "Causative", cat, "Unassigned", "A", f, intrans, trans))
            idx += 1
    for cat, verbs in LOCATIVE.items():
        for lemma in verbs:
            for f, (content, container) in enumerate(locative_frames(lemma, idx)):
                rows.append((lemma, "Locative", cat, "Unassigned", "A", f, content, container))
            idx += 1

    lengths = []
    for r in rows:
        a, b = len(r[6].split()), len(r[7].split())
        assert abs(a - b) <= 2, r
        lengths += [a, b]
    mean = sum(lengths) / len(lengths)
    sd = (sum((x - mean) ** 2 for x in lengths) / (len(lengths) - 1)) ** 0.5
    print(f"{len(rows)} rows, mean length {mean:.2f}, sd {sd:.2f}", file=sys.stderr)

    with OUT.open("w") as fh:
        fh.write("lemma\tconstruction\tcategory\tcompeting\tconventional_variant\tframe_index\t"
                 "conventional_text\tunconventional_text\n")
        for r in rows:
            fh.write("\t".join(str(x) for x in r) + "\n")


if __name__ == "__main__":
    main()
