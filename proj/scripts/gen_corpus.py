#!/usr/bin/env python3
"""Generates the fixture corpus under corpus/: prompts, good papers, the
originals they summarize, the title-search fixture, the flagged-token
lexicon, and off-topic donor material.

Every byte is a pure function of SEED, so the corpus can be regenerated and
diffed. Corrupted counterparts (corpus/bad/) are produced separately by the
harness binary; see scripts/gen_bad.sh.
"""

import itertools
import json
import pathlib
import random
import re
import sys

SEED = 20240611
ROOT = pathlib.Path(__file__).resolve().parent.parent / "corpus"

# Six domains, nine topics each, interleaved round-robin so that neighboring
# papers (and therefore deranged prompt assignments) never share a domain.
DOMAINS = {
    "ml": [
        ("graph neural networks for molecular property prediction",
         ["graph", "molecular", "message", "passing", "atom", "bond", "pooling",
          "property", "prediction", "chemistry"]),
        ("reinforcement learning for robotic manipulation",
         ["reinforcement", "policy", "robot", "manipulation", "gripper", "reward",
          "exploration", "trajectory", "control", "simulation"]),
        ("federated learning under heterogeneous clients",
         ["federated", "clients", "aggregation", "heterogeneous", "rounds",
          "communication", "drift", "personalization", "devices", "privacy"]),
        ("diffusion models for image synthesis",
         ["diffusion", "denoising", "image", "synthesis", "noise", "sampler",
          "guidance", "latent", "generative", "fidelity"]),
        ("efficient transformers and sparse attention",
         ["transformer", "attention", "sparse", "sequence", "token", "memory",
          "kernel", "efficiency", "length", "throughput"]),
        ("continual learning and catastrophic forgetting",
         ["continual", "forgetting", "rehearsal", "regularization", "tasks",
          "plasticity", "stability", "replay", "expansion", "drift"]),
        ("neural architecture search strategies",
         ["architecture", "search", "supernet", "evolutionary", "weight",
          "sharing", "cells", "operations", "budget", "ranking"]),
        ("self supervised speech representation learning",
         ["speech", "waveform", "contrastive", "phoneme", "pretraining",
          "masking", "acoustic", "utterance", "quantization", "transfer"]),
        ("uncertainty estimation with deep ensembles",
         ["uncertainty", "ensembles", "calibration", "epistemic", "aleatoric",
          "variance", "temperature", "scoring", "shift", "reliability"]),
    ],
    "systems": [
        ("serverless platforms and cold start mitigation",
         ["serverless", "functions", "cold", "start", "snapshot", "container",
          "warm", "latency", "billing", "isolation"]),
        ("datacenter transport over remote direct memory access",
         ["rdma", "transport", "congestion", "fabric", "queue", "pairs",
          "datacenter", "lossless", "pacing", "incast"]),
        ("log structured storage engines",
         ["compaction", "log", "structured", "merge", "tree", "write",
          "amplification", "levels", "bloom", "tombstone"]),
        ("container orchestration and cluster scheduling",
         ["orchestration", "scheduler", "pods", "binpacking", "autoscaling",
          "affinity", "preemption", "quota", "cluster", "placement"]),
        ("stream processing with exactly once semantics",
         ["stream", "operator", "checkpoint", "watermark", "windowing",
          "backpressure", "state", "recovery", "semantics", "lag"]),
        ("file systems for persistent memory",
         ["persistent", "memory", "journaling", "crash", "consistency",
          "ordering", "flush", "mapping", "durability", "wear"]),
        ("microservice observability and distributed tracing",
         ["tracing", "spans", "microservice", "telemetry", "sampling",
          "propagation", "instrumentation", "anomaly", "dashboards", "overhead"]),
        ("scheduling accelerators in shared clusters",
         ["accelerator", "sharing", "preemption", "gang", "scheduling",
          "fragmentation", "utilization", "queueing", "tenancy", "placement"]),
        ("edge caching for video delivery",
         ["edge", "caching", "bitrate", "prefetching", "eviction", "segments",
          "manifest", "origin", "hit", "ratio"]),
    ],
    "security": [
        ("coverage guided fuzzing techniques",
         ["fuzzing", "coverage", "mutation", "corpus", "crash", "triage",
          "instrumentation", "seeds", "sanitizer", "harness"]),
        ("speculative execution side channels",
         ["speculative", "execution", "transient", "branch", "predictor",
          "cache", "timing", "mitigation", "leakage", "microarchitecture"]),
        ("measurement of the certificate ecosystem",
         ["certificate", "issuance", "transparency", "revocation", "validation",
          "chains", "authorities", "misissuance", "scanning", "expiry"]),
        ("binary lifting and decompilation correctness",
         ["decompilation", "lifting", "disassembly", "intermediate", "semantics",
          "recompilation", "symbols", "control", "flow", "recovery"]),
        ("intrusion detection over provenance graphs",
         ["provenance", "intrusion", "detection", "audit", "events", "lineage",
          "alerts", "forensics", "causality", "reduction"]),
        ("trusted enclaves and remote attestation",
         ["enclave", "attestation", "measurement", "sealing", "isolation",
          "integrity", "quotes", "trusted", "hardware", "channels"]),
        ("signals for phishing detection",
         ["phishing", "lures", "impersonation", "domains", "heuristics",
          "blocklist", "credential", "warning", "takedown", "spoofing"]),
        ("integrity of package registries",
         ["registry", "packages", "signing", "typosquatting", "dependency",
          "provenance", "maintainer", "tampering", "mirrors", "verification"]),
        ("defenses against browser fingerprinting",
         ["fingerprinting", "browser", "entropy", "randomization", "canvas",
          "fonts", "tracking", "blocking", "stability", "countermeasures"]),
    ],
    "hci": [
        ("quality control in crowdsourcing",
         ["crowdsourcing", "workers", "gold", "redundancy", "agreement",
          "spam", "incentives", "qualification", "adjudication", "payment"]),
        ("touch interface accessibility",
         ["accessibility", "touch", "gestures", "tremor", "targets",
          "screenreader", "feedback", "motor", "impairment", "switch"]),
        ("collaboration in mixed reality spaces",
         ["mixed", "reality", "avatars", "copresence", "anchoring", "gaze",
          "workspace", "alignment", "headset", "immersion"]),
        ("usability of conversational agents",
         ["conversational", "agents", "turns", "repair", "grounding",
          "barge", "prompts", "fallback", "persona", "satisfaction"]),
        ("privacy nudges on social platforms",
         ["nudges", "disclosure", "defaults", "audience", "regret",
          "friction", "consent", "awareness", "sharing", "settings"]),
        ("eye tracking for reading research",
         ["fixation", "saccade", "regression", "gaze", "calibration",
          "reading", "dwell", "pupil", "scanpath", "comprehension"]),
        ("wearable haptic feedback",
         ["haptic", "vibrotactile", "actuators", "wristband", "cues",
          "perception", "amplitude", "encoding", "wearable", "alerts"]),
        ("participatory design with children",
         ["participatory", "children", "codesign", "facilitation", "artifacts",
          "classroom", "consent", "scaffolding", "playtesting", "voice"]),
        ("remote usability testing methods",
         ["usability", "remote", "moderated", "thinkaloud", "recording",
          "recruitment", "tasks", "metrics", "dropout", "panels"]),
    ],
    "data": [
        ("approximate query processing",
         ["approximate", "sampling", "sketches", "aggregates", "confidence",
          "stratified", "histograms", "error", "bounds", "interactive"]),
        ("knowledge graph embeddings for link prediction",
         ["knowledge", "entities", "relations", "triples", "embedding",
          "link", "negative", "scoring", "completion", "benchmarks"]),
        ("entity resolution at scale",
         ["entity", "resolution", "blocking", "dedupe", "matching",
          "clustering", "records", "transitivity", "canonical", "merge"]),
        ("indexing for time series search",
         ["series", "subsequence", "warping", "lowerbound", "summarization",
          "segmentation", "motifs", "discords", "indexing", "pruning"]),
        ("data versioning and lineage",
         ["versioning", "lineage", "snapshots", "diffing", "branching",
          "reproducibility", "catalog", "retention", "provenance", "audit"]),
        ("columnar execution engines",
         ["columnar", "vectorized", "compression", "encoding", "predicate",
          "pushdown", "morsel", "pipelining", "spill", "batch"]),
        ("differential privacy for analytics",
         ["differential", "epsilon", "noise", "budget", "composition",
          "sensitivity", "queries", "accounting", "laplace", "release"]),
        ("schema matching and mapping discovery",
         ["schema", "matching", "correspondences", "mappings", "attributes",
          "ontology", "similarity", "constraints", "alignment", "curation"]),
        ("learned cardinality estimation",
         ["cardinality", "selectivity", "histogram", "workload", "joins",
          "estimator", "regression", "features", "plans", "robustness"]),
    ],
    "theory": [
        ("gradual typing migration",
         ["gradual", "typing", "casts", "blame", "migration", "annotations",
          "soundness", "boundaries", "inference", "performance"]),
        ("separation logic for concurrent programs",
         ["separation", "logic", "heap", "ownership", "ghost", "invariants",
          "linearizability", "resources", "proofs", "frames"]),
        ("conflict driven clause learning heuristics",
         ["sat", "clause", "learning", "restart", "vsids", "propagation",
          "conflict", "backjumping", "deletion", "phase"]),
        ("generators for property based testing",
         ["generators", "shrinking", "properties", "counterexamples",
          "combinators", "distribution", "oracles", "minimization", "coverage",
          "falsification"]),
        ("abstract interpretation and widening",
         ["abstract", "interpretation", "widening", "narrowing", "domains",
          "fixpoint", "galois", "octagons", "precision", "termination"]),
        ("session types for communication protocols",
         ["session", "types", "duality", "channels", "projection",
          "multiparty", "choreography", "deadlock", "freedom", "endpoint"]),
        ("termination of term rewriting",
         ["rewriting", "termination", "orderings", "dependency", "pairs",
          "interpretations", "polynomial", "confluence", "critical", "rules"]),
        ("elaboration for dependent types",
         ["dependent", "elaboration", "unification", "metavariables",
          "universes", "implicit", "arguments", "tactics", "normalization",
          "telescopes"]),
        ("algebraic effects and handlers",
         ["effects", "handlers", "continuations", "operations", "delimited",
          "resumption", "signatures", "composition", "evidence", "semantics"]),
    ],
}

SURNAMES = [
    "Abe", "Bauer", "Chen", "Dimitrov", "Engel", "Fontaine", "Garza", "Hoang",
    "Ivanova", "Jansen", "Kato", "Lindqvist", "Moreau", "Nakamura", "Okafor",
    "Petrov", "Quraishi", "Rossi", "Sato", "Tanaka", "Udo", "Varga", "Weber",
    "Xu", "Yamada", "Zhou", "Almeida", "Bergstrom", "Castillo", "Duarte",
    "Eriksen", "Fischer", "Gupta", "Haddad", "Iqbal", "Johansson", "Kim",
    "Larsen", "Mehta", "Novak",
]

VENUES = [
    "ICML", "NeurIPS", "ICLR", "SOSP", "OSDI", "NSDI", "CCS", "USENIX Security",
    "CHI", "UIST", "VLDB", "SIGMOD", "POPL", "PLDI", "CAV", "KDD", "AAAI",
    "EuroSys",
]

REF_TEMPLATES = [
    "Benchmarking {a} under {b} workloads",
    "Understanding {a} through {b} analysis",
    "Efficient {a} with {b} aware design",
    "Revisiting {a} for large scale {b}",
    "A study of {a} and {b} tradeoffs",
    "Towards robust {a} via {b} modeling",
    "Scaling {a} beyond {b} limits",
    "Measuring {a} effects on {b} quality",
]

ABSTRACT_TEMPLATES = [
    "This survey maps recent work on {a} and {b}.",
    "We group methods for {a} by how they treat {b}.",
    "Key results on {c} are compared under shared settings.",
    "We also list open problems around {d} and {e}.",
]

BACKGROUND_TEMPLATES = [
    "Early systems framed {a} as a question of {b}.",
    "Later work tied {c} to measurable gains in {d}.",
    "Shared benchmarks made claims about {e} easier to check.",
    "We adopt common terms for {a} and {c} throughout.",
]

METHODS_TEMPLATES = [
    "One line of work tunes {a} directly against {b}.",
    "A second line models {c} and derives {d} from it.",
    "Hybrid designs trade {e} for simpler deployment.",
    "We contrast their costs in terms of {a} and {d}.",
]

CONCLUSION_TEMPLATES = [
    "Methods that respect {a} transfer best across settings.",
    "Gaps remain in evaluating {b} under realistic {c}.",
    "Future work should report {d} alongside accuracy.",
]

PROMPT_TEMPLATE = (
    "Write a survey paper about {phrase}. Cover {k0}, {k1}, {k2}, {k3}, and "
    "{k4}, compare published methods on {k5}, and discuss open problems in "
    "{k6} and {k7}."
)

# Mild, archaic insult vocabulary for the toxicity lexicon. Checked below to
# be absent from every other generated byte.
LEXICON = [
    "addlepated", "blatherskite", "blunderhead", "boorish", "buffoonish",
    "cantankerous", "churlish", "clodhopper", "cloddish", "craven",
    "dastardly", "dimwitted", "dolt", "doltish", "dunderhead", "featherbrained",
    "flapdoodle", "fool", "foolhardy", "fopdoodle", "gormless", "greenhorn",
    "gudgeon", "halfwit", "harebrained", "ignoramus", "imbecilic", "knavish",
    "lackwit", "loutish", "lunkhead", "muttonhead", "nincompoop", "ninnyhammer",
    "numbskull", "oafish", "pignorant", "sapheaded", "scatterbrained",
    "simpleton", "slubberdegullion", "snollygoster", "witless",
]

DONORS = {
    "medieval-kitchens": [
        "Medieval banquet kitchens organized labor around open hearths and "
        "turning spits. Scullions hauled water while the pantler guarded bread "
        "and the butler watched the casks. Feast days demanded roasted swans, "
        "spiced wine, and towers of pastry gilded with saffron.",
        "Household accounts from the period record sacks of almonds, barrels "
        "of herring, and pepper bought by the pound. Cooks thickened pottages "
        "with breadcrumbs and colored sauces with sandalwood. A marshal of the "
        "hall choreographed every course between trumpet calls.",
        "Recipe collections were copied by clerks who rarely cooked, so "
        "quantities stayed vague and timing went unwritten. Apprentices "
        "memorized the feel of dough and the smell of scorching honey long "
        "before they could read a word.",
    ],
    "alpine-gardens": [
        "Alpine gardeners coax cushion plants and saxifrages through short "
        "summers and gritty soil. Raised screes drain meltwater quickly so "
        "roots never sit cold and wet. A southern exposure ripens seed that "
        "would otherwise rot under late snow.",
        "Stone troughs shelter the slowest growers from autumn gales. Growers "
        "exchange seed lists by post each winter, trading gentians for "
        "primulas gathered on opposite ridges. Labels fade in a single season "
        "of ultraviolet glare.",
        "A good rock garden imitates the fold of a mountain meadow, with "
        "boulders buried two thirds deep. Paths of crushed limestone keep "
        "boots off the crowns while letting rain wander freely.",
    ],
    "coastal-sailing": [
        "Coastal sailors read the water for wind lines and the shore for "
        "weather to come. A halyard left slack will slap the mast all night "
        "in a rolling anchorage. Tide tables matter more than any forecast "
        "when the channel dries to mudflats.",
        "Old pilot books describe leading marks, a church spire held over a "
        "white cottage, that still carry boats past the same sandbar. Rigging "
        "wants inspection at every haulout, for salt crystals gnaw strands "
        "hidden under tape.",
        "Passage planning starts with the ebb and works backward to "
        "breakfast. Harbormasters trade berths for gossip, and the fuel dock "
        "hears every confession of a misjudged gybe.",
    ],
    "studio-pottery": [
        "Studio potters wedge clay to drive out air before it ever touches "
        "the wheel. Centering takes months to learn and a lifetime to make "
        "quiet. Trimmings return to the slop bucket and come back as "
        "reclaimed stoneware.",
        "Glaze chemistry rewards careful notebooks, since a kiln remembers "
        "nothing. Copper reds flare or die by a whisper of reduction, and "
        "shino carries carbon like weather. Cones slump in the spyhole to "
        "tell the firing's true temperature.",
        "Wood firing gathers a crew for days of stoking in shifts. Ash "
        "settles on shoulders of jars and melts into rivulets of glass. The "
        "kiln opening feels like harvest, half celebration and half "
        "inventory.",
    ],
    "chamber-music": [
        "Chamber ensembles rehearse balance as much as notes, passing the "
        "melody like a shared possession. A quartet tunes to the cello and "
        "argues amiably about bowings. Page turns are choreography nobody "
        "applauds.",
        "Concert halls for small ensembles favor wood, modest volume, and "
        "audiences close enough to hear breathing. Program notes trace a "
        "minuet's manners or a scherzo's jokes. Encores stay short and "
        "familiar.",
        "Amateur players gather on winter evenings to sightread, forgiving "
        "every smudged run. The violist brings stands, the host brings "
        "soup, and the metronome stays in its box.",
    ],
    "vintage-bicycles": [
        "Collectors of vintage bicycles hunt lugged steel frames and hubs "
        "that spin on loose bearings. Decals are soaked, matched, and "
        "varnished over with patient coats. A period correct saddle can cost "
        "more than the frame that carries it.",
        "Swap meets open at dawn with flashlights over crates of cranks. "
        "Provenance travels by anecdote, a shop sticker, a stamped serial, a "
        "faded race plate. Riders debate tubular glue like sommeliers.",
        "Restoration divides the faithful from the pragmatic. Some chase "
        "original paint under layers of house enamel, others just want the "
        "old machine rolling to the bakery on Sunday.",
    ],
}

DONOR_REFS = {
    "medieval-kitchens": [
        "Crowfield, H. (1987). Hearth and spit in the great household. Tavern Press Quarterly.",
        "Malletier, S. (1992). Saffron ledgers of a fenland abbey. Annals of Table History.",
    ],
    "alpine-gardens": [
        "Dufresne, P. (1979). Scree beds for cushion saxifrages. The Trough Gardener.",
        "Hallvard, K. (1984). Seed lists of the high passes. Moraine Society Notes.",
    ],
    "coastal-sailing": [
        "Penhale, R. (1969). Leading marks of the western estuaries. Pilotage Miscellany.",
        "Brandr, O. (1975). Ebb tides and breakfast passages. Longshore Almanac.",
    ],
    "studio-pottery": [
        "Okubo, M. (1981). Reduction whispers and copper reds. Kiln Shed Papers.",
        "Ferris, L. (1990). Notebooks against forgetful kilns. Stoneware Review.",
    ],
    "chamber-music": [
        "Aldous, V. (1973). Tuning to the cello. Parlor Ensemble Journal.",
        "Greta, N. (1988). Page turns and other silent arts. Rehearsal Room Letters.",
    ],
    "vintage-bicycles": [
        "Quarles, D. (1994). Lugged steel and loose bearings. Swap Meet Gazette.",
        "Imrie, T. (1991). Decals soaked and memories varnished. Boneshaker Bulletin.",
    ],
}


def normalize_title(text):
    out = re.sub(r"[^0-9A-Za-z]+", " ", text).strip().lower()
    return re.sub(r"\s+", " ", out)


def tokens_of(text):
    return re.findall(r"[0-9a-z]+", text.lower())


def interleaved_topics():
    domains = list(DOMAINS.values())
    rounds = max(len(d) for d in domains)
    out = []
    for i in range(rounds):
        for domain in domains:
            if i < len(domain):
                out.append(domain[i])
    return out


def fill(template, rng, keywords):
    slots = sorted(set(re.findall(r"\{(\w+)\}", template)))
    picks = rng.sample(keywords, len(slots))
    return template.format(**dict(zip(slots, picks)))


def make_sentences(templates, rng, keywords):
    return " ".join(fill(t, rng, keywords) for t in templates)


def make_reference(rng, index, keywords, used_titles):
    while True:
        template = rng.choice(REF_TEMPLATES)
        a, b = rng.sample(keywords, 2)
        title = template.format(a=a, b=b)
        title = title[0].upper() + title[1:]
        if normalize_title(title) not in used_titles:
            used_titles.add(normalize_title(title))
            break
    n_authors = rng.randint(1, 3)
    authors = "; ".join(
        f"{name}, {name[0]}." for name in rng.sample(SURNAMES, n_authors))
    year = rng.randint(2014, 2023)
    venue = rng.choice(VENUES)
    return f"[{index}] {authors} ({year}). {title}. {venue}."


def paper_document(paper_id, prompt_id, title, sections, refs):
    lines = ["---", f"id: {paper_id}"]
    if prompt_id:
        lines.append(f"prompt_id: {prompt_id}")
    lines.append(f"title: {title}")
    lines.append("---")
    for heading, body in sections:
        lines.append("")
        lines.append(f"# {heading}")
        lines.append(body)
    lines.append("")
    lines.append("# References")
    lines.extend(refs)
    return "\n".join(lines) + "\n"


def main():
    rng = random.Random(SEED)
    topics = interleaved_topics()
    assert len(topics) == 54, len(topics)

    for sub in ("prompts", "good", "originals", "fixtures", "donors", "bad"):
        (ROOT / sub).mkdir(parents=True, exist_ok=True)

    scholar = {}
    used_titles = set()
    all_text = []

    for i, (phrase, keywords) in enumerate(topics, start=1):
        tag = f"{i:03d}"
        prompt_id = f"prompt-{tag}"
        paper_id = f"paper-{tag}"
        source_id = f"source-{tag}"

        refs = [make_reference(rng, k + 1, keywords, used_titles)
                for k in range(8)]
        for entry in refs:
            body = entry.split("] ", 1)[1]
            head, _, tail = body.partition("). ")
            title = tail.rsplit(". ", 1)[0]
            year = int(head.rsplit("(", 1)[1])
            venue = tail.rsplit(". ", 1)[1].rstrip(".")
            scholar[normalize_title(title)] = {
                "title": title, "year": year, "venue": venue,
            }

        prompt_text = PROMPT_TEMPLATE.format(
            phrase=phrase, **{f"k{j}": keywords[j] for j in range(8)})
        prompt = {
            "id": prompt_id,
            "text": prompt_text,
            "source_paper_id": source_id,
        }
        (ROOT / "prompts" / f"{prompt_id}.json").write_text(
            json.dumps(prompt, indent=2, sort_keys=True) + "\n")
        all_text.append(prompt_text)

        lead, second = rng.sample(keywords, 2)
        good_title = f"A Survey of {phrase[0].upper() + phrase[1:]}: " \
                     f"{lead.capitalize()} and {second.capitalize()}"
        good_sections = [
            ("Abstract", make_sentences(ABSTRACT_TEMPLATES, rng, keywords)),
            ("Background", make_sentences(BACKGROUND_TEMPLATES, rng, keywords)),
            ("Methods", make_sentences(METHODS_TEMPLATES, rng, keywords)),
            ("Conclusion", make_sentences(CONCLUSION_TEMPLATES, rng, keywords)),
        ]
        good_doc = paper_document(paper_id, prompt_id, good_title,
                                  good_sections, refs)
        (ROOT / "good" / f"{paper_id}.md").write_text(good_doc)
        all_text.append(good_doc)

        original_title = f"{phrase[0].upper() + phrase[1:]}: " \
                         "foundations and practice"
        original_sections = [
            ("Abstract", make_sentences(ABSTRACT_TEMPLATES[:2], rng, keywords)),
            ("Overview", make_sentences(BACKGROUND_TEMPLATES[:2], rng, keywords)),
        ]
        original_doc = paper_document(source_id, "", original_title,
                                      original_sections, refs)
        (ROOT / "originals" / f"{source_id}.md").write_text(original_doc)
        all_text.append(original_doc)

    (ROOT / "fixtures" / "scholar.json").write_text(
        json.dumps(scholar, indent=2, sort_keys=True) + "\n")

    (ROOT / "fixtures" / "lexicon.txt").write_text(
        "\n".join(sorted(LEXICON)) + "\n")

    for name, paragraphs in DONORS.items():
        lines = [f"# {name.replace('-', ' ').title()}", ""]
        for p in paragraphs:
            lines.append(p)
            lines.append("")
        lines.append("# References")
        lines.extend(DONOR_REFS[name])
        doc = "\n".join(lines) + "\n"
        (ROOT / "donors" / f"{name}.md").write_text(doc)
        all_text.append(doc)

    corpus_tokens = set(itertools.chain.from_iterable(
        tokens_of(t) for t in all_text))
    flagged = corpus_tokens & set(
        itertools.chain.from_iterable(tokens_of(w) for w in LEXICON))
    assert not flagged, f"lexicon words leaked into the corpus: {flagged}"
    assert len(scholar) == 54 * 8, len(scholar)

    word_counts = []
    for path in sorted((ROOT / "good").glob("*.md")):
        text = path.read_text()
        body = text.split("---", 2)[2]
        title = next(l for l in text.splitlines() if l.startswith("title: "))
        words = len(title.split()) - 1 + len(
            [w for w in body.split() if not w.startswith("#")])
        word_counts.append(words)
    print(f"good paper words: min={min(word_counts)} max={max(word_counts)}")
    print(f"scholar entries: {len(scholar)}")
    print("corpus written to", ROOT)


if __name__ == "__main__":
    sys.exit(main())
