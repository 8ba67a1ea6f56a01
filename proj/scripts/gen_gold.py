#!/usr/bin/env python3
"""Write the hand-annotated gold mini-corpus used to validate the miner.

Each sentence carries its dependency analysis (spaCy-style or UD-style
labels), the target verb and construction, and an annotator label in
`# gold = conv|unconv|reject`, plus `# gold_reason` for rejects. Labels
follow the construction templates, not the classifier's output. The
expected per-verb counts are tallied from the gold labels alone.

Outputs data/gold/gold40.conllu and data/gold/gold40_counts.csv.
"""
import collections
import pathlib

ROOT = pathlib.Path(__file__).resolve().parent.parent
OUT_CONLLU = ROOT / "data" / "gold" / "gold40.conllu"
OUT_COUNTS = ROOT / "data" / "gold" / "gold40_counts.csv"

REASONS = ["too_short", "too_long", "boilerplate", "pos_mismatch", "low_confidence",
           "no_pattern_match", "single_argument", "periphrastic"]

# (sent_id, verb, construction, gold, reason, extra comments, tokens)
# tokens: "form lemma UPOS head deprel" joined by " | "
SENTENCES = [
    # worked examples
    ("g2-pd", "donate", "Dative", "conv", "", {},
     "She she PRON 2 nsubj | donated donate VERB 0 ROOT | the the DET 4 det | books book NOUN 2 dobj | "
     "to to ADP 2 prep | the the DET 7 det | library library NOUN 5 pobj | . . PUNCT 2 punct"),
    ("g2-dod", "give", "Dative", "unconv", "", {},
     "She she PRON 2 nsubj | gave give VERB 0 ROOT | the the DET 4 det | library library NOUN 2 dative | "
     "the the DET 6 det | books book NOUN 2 dobj | . . PUNCT 2 punct"),
    ("g2-transitive", "break", "Causative", "unconv", "", {},
     "The the DET 2 det | wind wind NOUN 3 nsubj | broke break VERB 0 ROOT | the the DET 5 det | "
     "window window NOUN 3 dobj | . . PUNCT 3 punct"),
    ("g2-intransitive", "break", "Causative", "conv", "", {},
     "The the DET 2 det | window window NOUN 3 nsubj | broke break VERB 0 ROOT | . . PUNCT 3 punct"),
    ("g2-periphrastic", "break", "Causative", "reject", "periphrastic", {},
     "The the DET 2 det | storm storm NOUN 3 nsubj | made make VERB 0 ROOT | the the DET 5 det | "
     "window window NOUN 6 nsubj | break break VERB 3 ccomp | . . PUNCT 3 punct"),
    ("g2-content", "pour", "Locative", "conv", "", {},
     "She she PRON 2 nsubj | poured pour VERB 0 ROOT | water water NOUN 2 dobj | into into ADP 2 prep | "
     "the the DET 6 det | glass glass NOUN 4 pobj | . . PUNCT 2 punct"),
    ("g2-container", "fill", "Locative", "unconv", "", {},
     "She she PRON 2 nsubj | filled fill VERB 0 ROOT | the the DET 4 det | glass glass NOUN 2 dobj | "
     "with with ADP 2 prep | water water NOUN 5 pobj | . . PUNCT 2 punct"),
    ("g2-single-argument", "pour", "Locative", "reject", "single_argument", {},
     "She she PRON 2 nsubj | poured pour VERB 0 ROOT | water water NOUN 2 dobj | . . PUNCT 2 punct"),
    # dative
    ("dat-01", "send", "Dative", "conv", "", {},
     "The the DET 2 det | teacher teacher NOUN 3 nsubj | sent send VERB 0 root | a a DET 5 det | "
     "letter letter NOUN 3 obj | to to ADP 8 case | the the DET 8 det | parents parent NOUN 3 obl | "
     ". . PUNCT 3 punct"),
    ("dat-02", "send", "Dative", "unconv", "", {},
     "The the DET 2 det | teacher teacher NOUN 3 nsubj | sent send VERB 0 root | the the DET 5 det | "
     "parents parent NOUN 3 iobj | a a DET 7 det | letter letter NOUN 3 obj | . . PUNCT 3 punct"),
    ("dat-03", "hand", "Dative", "unconv", "", {},
     "He he PRON 2 nsubj | handed hand VERB 0 ROOT | the the DET 4 det | boy boy NOUN 2 dobj | "
     "a a DET 6 det | book book NOUN 2 npadvmod | . . PUNCT 2 punct"),
    ("dat-04", "read", "Dative", "conv", "", {},
     "She she PRON 2 nsubj | read read VERB 0 ROOT | a a DET 4 det | story story NOUN 2 dobj | "
     "to to ADP 2 prep | the the DET 7 det | children child NOUN 5 pobj | . . PUNCT 2 punct"),
    ("dat-05", "read", "Dative", "unconv", "", {},
     "She she PRON 2 nsubj | read read VERB 0 ROOT | the the DET 4 det | children child NOUN 2 dative | "
     "a a DET 6 det | story story NOUN 2 dobj | . . PUNCT 2 punct"),
    ("dat-06", "donate", "Dative", "reject", "no_pattern_match", {},
     "The the DET 2 det | company company NOUN 3 nsubj | donated donate VERB 0 ROOT | money money NOUN 3 dobj | "
     "last last ADJ 6 amod | year year NOUN 3 npadvmod | . . PUNCT 3 punct"),
    ("dat-07", "throw", "Dative", "reject", "no_pattern_match", {},
     "He he PRON 2 nsubj | threw throw VERB 0 ROOT | the the DET 4 det | ball ball NOUN 2 dobj | "
     "at at ADP 2 prep | the the DET 7 det | wall wall NOUN 5 pobj | . . PUNCT 2 punct"),
    ("dat-08", "drive", "Dative", "reject", "pos_mismatch", {},
     "The the DET 2 det | drive drive NOUN 3 nsubj | was be AUX 0 ROOT | long long ADJ 3 acomp | "
     "and and CCONJ 4 cc | tiring tiring ADJ 4 conj | . . PUNCT 3 punct"),
    ("dat-09", "send", "Dative", "reject", "boilerplate", {"boilerplate": "true"},
     "Click click VERB 0 ROOT | here here ADV 1 advmod | to to PART 4 aux | send send VERB 1 xcomp | "
     "us we PRON 4 dative | your your PRON 7 poss | feedback feedback NOUN 4 dobj | . . PUNCT 1 punct"),
    ("dat-10", "give", "Dative", "reject", "too_short", {},
     "Give give VERB 0 ROOT | it it PRON 1 dobj | . . PUNCT 1 punct"),
    ("dat-11", "give", "Dative", "reject", "low_confidence", {"confidence": "0.6"},
     "She she PRON 2 nsubj | gave give VERB 0 ROOT | the the DET 4 det | book book NOUN 2 dobj | "
     "to to ADP 2 prep | her her PRON 7 poss | brother brother NOUN 5 pobj | . . PUNCT 2 punct"),
    ("dat-12", "give", "Dative", "conv", "", {},
     "They they PRON 2 nsubj | gave give VERB 0 ROOT | the the DET 4 det | prize prize NOUN 2 dobj | "
     "to to ADP 2 prep | the the DET 7 det | winner winner NOUN 5 pobj | . . PUNCT 2 punct"),
    ("dat-13", "explain", "Dative", "unconv", "", {},
     "He he PRON 2 nsubj | explained explain VERB 0 ROOT | me I PRON 2 dative | the the DET 5 det | "
     "rules rule NOUN 2 dobj | . . PUNCT 2 punct"),
    ("dat-14", "explain", "Dative", "conv", "", {},
     "He he PRON 2 nsubj | explained explain VERB 0 ROOT | the the DET 4 det | rules rule NOUN 2 dobj | "
     "to to ADP 2 prep | the the DET 7 det | students student NOUN 5 pobj | . . PUNCT 2 punct"),
    ("dat-15", "write", "Dative", "conv", "", {},
     "She she PRON 2 nsubj | wrote write VERB 0 ROOT | a a DET 4 det | poem poem NOUN 2 dobj | "
     "for for ADP 2 prep | her her PRON 7 poss | mother mother NOUN 5 pobj | . . PUNCT 2 punct"),
    ("dat-16", "write", "Dative", "unconv", "", {},
     "She she PRON 2 nsubj | wrote write VERB 0 ROOT | her her PRON 4 poss | mother mother NOUN 2 dative | "
     "a a DET 6 det | poem poem NOUN 2 dobj | . . PUNCT 2 punct"),
    ("dat-17", "give", "Dative", "reject", "no_pattern_match", {},
     "The the DET 2 det | books book NOUN 4 nsubjpass | were be AUX 4 auxpass | given give VERB 0 ROOT | "
     "to to ADP 4 prep | the the DET 7 det | library library NOUN 5 pobj | . . PUNCT 4 punct"),
    # causative
    ("cau-01", "melt", "Causative", "conv", "", {},
     "The the DET 2 det | ice ice NOUN 3 nsubj | melted melt VERB 0 ROOT | in in ADP 3 prep | "
     "the the DET 6 det | sun sun NOUN 4 pobj | . . PUNCT 3 punct"),
    ("cau-02", "melt", "Causative", "unconv", "", {},
     "The the DET 2 det | heat heat NOUN 3 nsubj | melted melt VERB 0 ROOT | the the DET 5 det | "
     "ice ice NOUN 3 dobj | . . PUNCT 3 punct"),
    ("cau-03", "laugh", "Causative", "conv", "", {},
     "The the DET 2 det | children child NOUN 3 nsubj | laughed laugh VERB 0 ROOT | loudly loudly ADV 3 advmod | "
     ". . PUNCT 3 punct"),
    ("cau-04", "laugh", "Causative", "unconv", "", {},
     "The the DET 2 det | clown clown NOUN 3 nsubj | laughed laugh VERB 0 ROOT | the the DET 5 det | "
     "boy boy NOUN 3 dobj | . . PUNCT 3 punct"),
    ("cau-05", "break", "Causative", "reject", "no_pattern_match", {},
     "The the DET 2 det | vase vase NOUN 4 nsubj:pass | was be AUX 4 aux:pass | broken break VERB 0 root | "
     "by by ADP 7 case | the the DET 7 det | cat cat NOUN 4 obl:agent | . . PUNCT 4 punct"),
    ("cau-06", "open", "Causative", "conv", "", {},
     "The the DET 2 det | door door NOUN 3 nsubj | opened open VERB 0 root | slowly slowly ADV 3 advmod | "
     ". . PUNCT 3 punct"),
    ("cau-07", "open", "Causative", "unconv", "", {},
     "She she PRON 2 nsubj | opened open VERB 0 root | the the DET 4 det | door door NOUN 2 obj | "
     ". . PUNCT 2 punct"),
    ("cau-08", "slide", "Causative", "conv", "", {},
     "The the DET 2 det | box box NOUN 3 nsubj | slid slide VERB 0 ROOT | across across ADP 3 prep | "
     "the the DET 6 det | floor floor NOUN 4 pobj | . . PUNCT 3 punct"),
    ("cau-09", "cry", "Causative", "reject", "periphrastic", {},
     "The the DET 2 det | teacher teacher NOUN 3 nsubj | made make VERB 0 ROOT | the the DET 5 det | "
     "student student NOUN 6 nsubj | cry cry VERB 3 xcomp | . . PUNCT 3 punct"),
    ("cau-10", "break", "Causative", "reject", "low_confidence", {"confidence": "0.5"},
     "The the DET 2 det | glass glass NOUN 3 nsubj | broke break VERB 0 ROOT | into into ADP 3 prep | "
     "pieces piece NOUN 4 pobj | . . PUNCT 3 punct"),
    # locative
    ("loc-01", "spray", "Locative", "conv", "", {},
     "He he PRON 2 nsubj | sprayed spray VERB 0 root | paint paint NOUN 2 obj | onto onto ADP 6 case | "
     "the the DET 6 det | wall wall NOUN 2 obl | . . PUNCT 2 punct"),
    ("loc-02", "spray", "Locative", "unconv", "", {},
     "He he PRON 2 nsubj | sprayed spray VERB 0 root | the the DET 4 det | wall wall NOUN 2 obj | "
     "with with ADP 6 case | paint paint NOUN 2 obl | . . PUNCT 2 punct"),
    ("loc-03", "load", "Locative", "conv", "", {},
     "They they PRON 2 nsubj | loaded load VERB 0 ROOT | hay hay NOUN 2 dobj | onto onto ADP 2 prep | "
     "the the DET 6 det | truck truck NOUN 4 pobj | . . PUNCT 2 punct"),
    ("loc-04", "pour", "Locative", "unconv", "", {},
     "She she PRON 2 nsubj | poured pour VERB 0 ROOT | the the DET 4 det | glass glass NOUN 2 dobj | "
     "with with ADP 2 prep | water water NOUN 5 pobj | . . PUNCT 2 punct"),
    ("loc-05", "drip", "Locative", "reject", "no_pattern_match", {},
     "The the DET 2 det | water water NOUN 3 nsubj | dripped drip VERB 0 ROOT | slowly slowly ADV 3 advmod | "
     ". . PUNCT 3 punct"),
]


def conllu_block(sid, verb, cx, gold, reason, extra, spec):
    toks = [t.split() for t in spec.split(" | ")]
    lines = [f"# sent_id = {sid}", f"# text = {' '.join(t[0] for t in toks)}"]
    for k, v in extra.items():
        lines.append(f"# {k} = {v}")
    lines += [f"# verb = {verb}", f"# construction = {cx}", f"# gold = {gold}"]
    if reason:
        lines.append(f"# gold_reason = {reason}")
    for i, (form, lemma, upos, head, dep) in enumerate(toks, 1):
        lines.append("\t".join([str(i), form, lemma, upos, "_", "_", head, dep, "_", "_"]))
    return "\n".join(lines) + "\n"


def main():
    assert len(SENTENCES) == 40, len(SENTENCES)
    assert len({s[0] for s in SENTENCES}) == 40
    OUT_CONLLU.parent.mkdir(parents=True, exist_ok=True)
    OUT_CONLLU.write_text("\n".join(conllu_block(*s) for s in SENTENCES))
    counts = collections.defaultdict(lambda: [0, 0] + [0] * len(REASONS))
    for _, verb, cx, gold, reason, _, _ in SENTENCES:
        cell = counts[(verb, cx)]
        if gold == "conv":
            cell[0] += 1
        elif gold == "unconv":
            cell[1] += 1
        else:
            cell[2 + REASONS.index(reason)] += 1
    with OUT_COUNTS.open("w") as f:
        f.write("lemma,construction,f_conv,f_unconv," + ",".join("reject_" + r for r in REASONS) + "\n")
        for (verb, cx), cell in sorted(counts.items()):
            f.write(f"{verb},{cx}," + ",".join(map(str, cell)) + "\n")


if __name__ == "__main__":
    main()
