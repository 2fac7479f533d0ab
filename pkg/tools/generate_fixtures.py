#!/usr/bin/env python3
"""Generate the bundled synthetic corpora and vocabulary.

Deterministic (fixed seeds).  Asserts every planted property the test
suite and the acceptance criteria rely on before writing, so regenerated
fixtures can never silently drift:

* vocabulary: 40 terms, DAG, default clinical roots resolvable;
* paper corpus: 60 documents in 4 citation groups; greedy clustering
  recovers the groups; the outbreak group has the strictly highest mean
  clinical rate and "quarantine" among its distinctive words;
* patent corpus: 102 families; fraction 0.2 selects exactly 21 with no
  boundary tie and citation share 146/188; the selected network has 16
  connected families in four components plus 5 isolates, and the planted
  4-clique is the top dense region led by one assignee.
"""

from __future__ import annotations

import itertools
import json
import os
import random
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from frontmap.annotate import annotate_all, mean_clinical_rate
from frontmap.cluster import greedy_modularity_clustering
from frontmap.corpus import (
    Author,
    Corpus,
    DocumentRecord,
    Vocabulary,
    VocabularyTerm,
    save_corpus,
)
from frontmap.dense import find_dense_regions, leading_assignees, vertex_weights
from frontmap.netbuild import build_citation_network, select_top_cited
from frontmap.textmine import build_contingency, default_stopwords, distinctive_words, tokenize

DATA_DIR = os.path.join(os.path.dirname(__file__), "..", "src", "frontmap", "data")


# --- vocabulary --------------------------------------------------------------

def vocabulary_terms() -> list[dict]:
    def t(term_id, label, parents=(), synonyms=(), kind="mesh_like"):
        return {
            "term_id": term_id,
            "label": label,
            "parents": list(parents),
            "synonyms": list(synonyms),
            "kind": kind,
        }

    return [
        # roots: the six default clinical categories
        t("diagnosis", "Diagnosis"),
        t("therapeutics", "Therapeutics"),
        t("surgical-procedures", "Surgical Procedures, Operative"),
        t("named-groups", "Named Groups"),
        t("persons", "Persons"),
        t("health-care", "Health Care"),
        # roots: non-clinical categories
        t("organisms", "Organisms"),
        t("chemicals-drugs", "Chemicals and Drugs"),
        t("phenomena", "Phenomena and Processes"),
        t("epidemiologic-phenomena", "Epidemiologic Phenomena"),
        t("diseases", "Diseases"),
        # organisms
        t("viruses", "Viruses", ["organisms"], ["virus"]),
        t("ebolavirus", "Ebolavirus", ["viruses"], ["ebola virus", "ebolaviruses"]),
        t("animals", "Animals", ["organisms"], ["animal"]),
        t("humans", "Humans", ["organisms"], ["human"]),
        t("mice", "Mice", ["animals"], ["mouse", "murine"]),
        t("primates", "Primates", ["animals"], ["macaque", "macaques", "monkey", "monkeys"]),
        # chemicals and proteins
        t("proteins", "Proteins", ["chemicals-drugs"], ["protein"]),
        t("glycoproteins", "Glycoproteins", ["proteins"], ["glycoprotein", "gp"]),
        t("viral-proteins", "Viral Proteins", ["proteins"], ["viral protein"]),
        t("vp40", "Matrix Protein VP40", ["viral-proteins"], ["vp40"], kind="go_like"),
        t("vp35", "Polymerase Cofactor VP35", ["viral-proteins"], ["vp35"], kind="go_like"),
        t("interferons", "Interferons", ["proteins"], ["interferon", "ifn"]),
        t("antibodies", "Antibodies", ["proteins"], ["antibody"]),
        t("antibodies-viral", "Antibodies, Viral", ["antibodies"], ["viral antibodies"]),
        t("rna", "RNA", ["chemicals-drugs"], ["ribonucleic acid"]),
        # therapeutics branch (clinical)
        t("vaccines", "Vaccines", ["therapeutics"], ["vaccine"]),
        t("immunization", "Immunization", ["therapeutics", "phenomena"], ["immunisation", "immunotherapy"]),
        t("vaccination", "Vaccination", ["immunization"], ["vaccinations"]),
        t("drug-therapy", "Drug Therapy", ["therapeutics"], ["antiviral treatment"]),
        # diagnosis / persons / health care branches (clinical)
        t("diagnostic-techniques", "Diagnostic Techniques", ["diagnosis"], ["diagnostic assay", "diagnostic assays"]),
        t("patients", "Patients", ["persons"], ["patient"]),
        t("health-personnel", "Health Personnel", ["persons", "health-care"], ["healthcare workers", "health workers"]),
        t("quarantine", "Quarantine", ["health-care"], ["quarantine measures"]),
        t("hospitals", "Hospitals", ["health-care"], ["hospital"]),
        # epidemiology and disease (non-clinical)
        t("disease-outbreaks", "Disease Outbreaks", ["epidemiologic-phenomena"], ["outbreak", "outbreaks", "epidemic"]),
        t("ebola-hf", "Hemorrhagic Fever, Ebola", ["diseases"], ["ebola hemorrhagic fever", "ebola disease"]),
        # processes (GO-like, non-clinical)
        t("virus-replication", "Virus Replication", ["phenomena"], ["viral replication"], kind="go_like"),
        t("virus-assembly", "Virus Assembly", ["phenomena"], ["viral budding", "virion assembly"], kind="go_like"),
        t("apoptosis", "Apoptosis", ["phenomena"], ["programmed cell death"], kind="go_like"),
    ]


# --- paper corpus -------------------------------------------------------------

_JOURNALS = [
    "Journal of Viral Research",
    "Archives of Tropical Medicine",
    "Molecular Pathogens",
    "Vaccine Science",
    "Field Epidemiology Reports",
    "Cellular Microbiology Letters",
]

_SURNAMES = [
    "Alvarez", "Brandt", "Chen", "Diallo", "Egede", "Fischer", "Garcia",
    "Hoffmann", "Ito", "Jansen", "Kamara", "Lindqvist", "Moreau", "Ndiaye",
    "Okafor", "Petrov", "Quinn", "Rossi", "Sato", "Traore",
]

# Group writing templates.  Required words pin the vocabulary matches that
# drive the clinical rates apart; optional words add contingency variety.
_PAPER_GROUPS = [
    {
        "name": "glycoprotein",
        "size": 18,
        "title": "Structural analysis of the Ebola virus glycoprotein {i}",
        "required": "The Ebola virus surface glycoprotein GP mediates entry and fusion.",
        "optional": [
            "Receptor binding of the envelope spike was mapped in cell culture.",
            "Cleavage of the glycan cap exposes the fusion loop at the membrane.",
            "Pseudotyped particles reproduce entry kinetics of the native virion.",
            "Mutations in the receptor binding site reduce infectivity markedly.",
            "Crystal structures reveal the chalice shaped trimer architecture.",
        ],
    },
    {
        "name": "vaccine",
        "size": 16,
        "title": "Protective vaccine candidate {i} against lethal Ebola virus challenge",
        "required": "A candidate vaccine protected animals against lethal Ebola virus challenge.",
        "optional": [
            "Antibody titers correlated with survival after the lethal challenge.",
            "A mouse model was used to screen protective antigen doses.",
            "Macaques receiving the prime boost regimen survived infection.",
            "Protection lasted beyond one year in the rodent cohorts.",
            "Adjuvant selection changed the antibody response profile.",
        ],
    },
    {
        "name": "outbreak",
        "size": 14,
        "title": "Clinical management of Ebola outbreak {i}",
        # Content words are kept few and distinct so the planted marker
        # "quarantine" stays inside the top-10 Jaccard ties.
        "required": (
            "Ebola virus outbreak quarantine: each patient isolated in the "
            "hospital while healthcare workers used a bedside diagnostic assay."
        ),
        "optional": [
            "Contact tracing shortened the epidemic tail in rural districts.",
            "Case fatality declined after supportive treatment was standardized.",
            "Transmission clusters formed around funerals and home visits.",
            "Triage protocols reduced nosocomial spread between wards.",
            "Community engagement improved reporting of suspected infections.",
        ],
    },
    {
        "name": "vp40",
        "size": 12,
        "title": "Matrix protein VP40 particle assembly study {i}",
        "required": "The Ebola virus matrix protein VP40 drives virion assembly and viral budding.",
        "optional": [
            "Late domain motifs recruit the host sorting machinery.",
            "Oligomerization at the plasma membrane precedes particle release.",
            "Lipid binding of the matrix layer was quantified in vitro.",
            "Virus like particles form when the matrix protein is expressed alone.",
            "Electron tomography resolved filament budding intermediates.",
        ],
    },
]

_COUNTRY_POOL = ["US", "US", "US", "US", "GB", "DE", "FR", "JP", "CD", None]


def build_paper_corpus(seed: int = 20150419) -> Corpus:
    rng = random.Random(seed)
    docs = []
    groups: list[list[str]] = []
    doc_no = 0
    for group in _PAPER_GROUPS:
        ids = []
        for _ in range(group["size"]):
            doc_no += 1
            ids.append(f"P{doc_no:03d}")
        groups.append(ids)
    group_of = {
        doc_id: gi for gi, ids in enumerate(groups) for doc_id in ids
    }
    # citation counts: strictly decreasing Zipf-ish, no ties anywhere
    all_ids = [d for ids in groups for d in ids]
    ranked = sorted(all_ids, key=lambda d: (group_of[d], d))
    rng.shuffle(ranked)
    cited = {d: max(0, round(420 / (rank + 1)) - rank % 3) for rank, d in enumerate(ranked)}
    doc_no = 0
    for gi, group in enumerate(_PAPER_GROUPS):
        ids = groups[gi]
        for local_i, doc_id in enumerate(ids):
            doc_no += 1
            optional = rng.sample(group["optional"], 3)
            abstract = " ".join([group["required"], *optional])
            same = [d for d in ids if d != doc_id]
            refs = rng.sample(same, min(5, len(same)))
            # light cross-group flow: vaccines cite glycoprotein work,
            # outbreak papers cite vp40 work occasionally
            if gi == 1 and local_i % 3 == 0:
                refs.append(rng.choice(groups[0]))
            if gi == 2 and local_i % 4 == 0:
                refs.append(rng.choice(groups[3]))
            refs.append(f"EXT-{rng.randint(1, 40):03d}")  # outside the corpus
            n_authors = rng.randint(1, 4)
            authors = tuple(
                Author(
                    name=f"{rng.choice(_SURNAMES)} {chr(65 + rng.randrange(26))}.",
                    country=rng.choice(_COUNTRY_POOL),
                )
                for _ in range(n_authors)
            )
            docs.append(
                DocumentRecord(
                    id=doc_id,
                    kind="paper",
                    title=group["title"].format(i=local_i + 1),
                    abstract=abstract,
                    year=1995 + (doc_no % 20),
                    authors=authors,
                    venue=rng.choice(_JOURNALS),
                    times_cited_global=cited[doc_id],
                    references=tuple(dict.fromkeys(refs)),
                )
            )
    return Corpus(documents=tuple(docs), kind="paper", provenance="bundled synthetic paper corpus")


# --- patent corpus ------------------------------------------------------------

_ASSIGNEE_POOL = [
    "Meridian Biosciences",
    "Helix Therapeutics",
    "Northbrook Institute",
    "Atlantic Vaccine Works",
    "Grove Diagnostics",
]

_PATENT_WORDS = [
    "The invention provides an immunogenic composition against Ebola virus infection.",
    "Recombinant vectors express the viral antigen for vaccination of a host.",
    "Monoclonal antibody preparations neutralize the virus in cell assays.",
    "Nucleic acid constructs encode protective epitopes of the glycoprotein.",
    "Expression systems produce the antigen at industrial scale.",
    "Formulations stabilize the vaccine during cold chain transport.",
    "Diagnostic primers detect viral RNA in clinical specimens.",
    "Delivery particles carry the construct into presenting cells.",
]

# top-21 citation counts: sum 146 of a 188 total (no tie at the boundary)
_TOP_COUNTS = [20, 16, 13, 11, 10, 9, 8, 7, 6, 6, 5, 5, 4, 4, 4, 3, 3, 3, 3, 3, 3]

# internal citation components among the selected families: one 4-clique
# with a hanging chain, a 4-path, a 3-path, one pair; F017..F021 isolated
_CLIQUE = ["F001", "F002", "F004", "F007"]
_EXTRA_COMPONENTS = [
    ["F010", "F013", "F016"],          # chain attached to the clique
    ["F003", "F008", "F011", "F014"],  # path
    ["F005", "F009", "F015"],          # path
    ["F006", "F012"],                  # pair
]


def build_patent_corpus(seed: int = 20141000) -> Corpus:
    rng = random.Random(seed)
    counts = dict(zip((f"F{i:03d}" for i in range(1, 22)), _TOP_COUNTS))
    rest_counts = [2] * 10 + [1] * 22 + [0] * 49
    for i, count in enumerate(rest_counts, start=22):
        counts[f"F{i:03d}"] = count
    assert sum(counts.values()) == 188 and sum(_TOP_COUNTS) == 146

    refs: dict[str, set[str]] = {f: set() for f in counts}

    def link(a: str, b: str) -> None:
        if rng.random() < 0.5:
            refs[a].add(b)
        else:
            refs[b].add(a)

    for a, b in itertools.combinations(_CLIQUE, 2):
        link(a, b)
    chain = _EXTRA_COMPONENTS[0]
    link(_CLIQUE[0], chain[0])
    for a, b in zip(chain, chain[1:]):
        link(a, b)
    for component in _EXTRA_COMPONENTS[1:]:
        for a, b in zip(component, component[1:]):
            link(a, b)
    # non-selected families cite selected ones (dropped by the internal rule)
    for i in range(22, 60):
        refs[f"F{i:03d}"].add(f"F{rng.randint(1, 21):03d}")

    assignees = {f: (rng.choice(_ASSIGNEE_POOL),) for f in counts}
    for family in ("F001", "F002", "F004"):
        assignees[family] = ("Federal Defense Research Institute",)
    assignees["F007"] = ("Coastal State University",)
    assignees["F050"] = ()  # exercises the (unknown) tally
    assignees["F033"] = ("Meridian Biosciences", "Helix Therapeutics")

    docs = []
    for i, (family, count) in enumerate(sorted(counts.items())):
        sentences = rng.sample(_PATENT_WORDS, 4)
        if family in _CLIQUE:
            sentences.insert(0, "Vaccines and vaccination methods target the Ebola virus glycoprotein.")
        docs.append(
            DocumentRecord(
                id=family,
                kind="patent_family",
                title=f"Anti-Ebola virus composition {i + 1}",
                abstract=" ".join(sentences),
                year=1996 + (i % 18),
                authors=(Author(name=f"{rng.choice(_SURNAMES)} {chr(65 + i % 26)}."),),
                assignees=tuple(assignees[family]),
                venue=None,
                times_cited_global=count,
                references=tuple(sorted(refs[family])),
            )
        )
    return Corpus(documents=tuple(docs), kind="patent_family", provenance="bundled synthetic patent corpus")


# --- planted-property checks --------------------------------------------------

def check_papers(corpus: Corpus, vocab: Vocabulary) -> None:
    groups = {}
    for doc in corpus.documents:
        prefix = int(doc.id[1:])
        gi = 0 if prefix <= 18 else 1 if prefix <= 34 else 2 if prefix <= 48 else 3
        groups.setdefault(gi, set()).add(doc.id)
    graph = build_citation_network(corpus, corpus.ids)
    partition = greedy_modularity_clustering(graph)
    recovered = {frozenset(c) for c in partition.clusters}
    planted = {frozenset(g) for g in groups.values()}
    assert recovered == planted, (
        f"clustering does not recover planted groups: {len(recovered)} clusters"
    )
    annotations = annotate_all(corpus.documents, vocab)
    by_doc = {a.doc_id: a for a in annotations}
    rates = [
        mean_clinical_rate([by_doc[d] for d in members])
        for members in partition.clusters
    ]
    outbreak_cluster = next(
        i for i, members in enumerate(partition.clusters)
        if frozenset(members) == frozenset(groups[2])
    )
    top = rates[outbreak_cluster]
    assert all(top > r for i, r in enumerate(rates) if i != outbreak_cluster), rates
    stopwords = default_stopwords()
    tokenized = [tokenize(doc, stopwords) for doc in corpus.documents]
    table = build_contingency(tokenized, partition.assignment)
    markers = [w for w, _ in distinctive_words(table, outbreak_cluster)]
    assert "quarantine" in markers, markers
    print(f"papers: 4 clusters recovered, rates {[round(r, 3) for r in rates]}, "
          f"outbreak cluster {outbreak_cluster} markers {markers[:4]}")


def check_patents(corpus: Corpus) -> None:
    ids, report = select_top_cited(corpus, 0.2)
    assert report.n_selected == 21, report
    assert report.citations_selected == 146 and report.citations_total == 188
    graph = build_citation_network(corpus, ids)
    assert len(graph.isolates()) == 5, graph.isolates()
    assert graph.n_nodes - len(graph.isolates()) == 16
    weights = vertex_weights(graph)
    assert all(weights[f] == 3.0 for f in _CLIQUE)
    regions = find_dense_regions(graph, weights=weights)
    assert regions and regions[0].members == tuple(sorted(_CLIQUE)), regions
    leaders = leading_assignees(corpus, regions[0])
    assert leaders[0] == ("Federal Defense Research Institute", 3), leaders
    print(f"patents: 21 selected (share {report.share:.4f}), "
          f"top region {regions[0].members}, leading assignee {leaders[0][0]}")


def main() -> None:
    os.makedirs(DATA_DIR, exist_ok=True)
    vocab_doc = {"terms": vocabulary_terms(), "clinical_roots": sorted(
        ["Diagnosis", "Therapeutics", "Surgical Procedures, Operative",
         "Named Groups", "Persons", "Health Care"])}
    assert len(vocab_doc["terms"]) == 40, len(vocab_doc["terms"])
    vocab = Vocabulary(
        terms=tuple(
            VocabularyTerm(
                term_id=t["term_id"], label=t["label"],
                synonyms=tuple(t["synonyms"]), parents=tuple(t["parents"]),
                kind=t["kind"],
            )
            for t in vocab_doc["terms"]
        )
    )
    papers = build_paper_corpus()
    patents = build_patent_corpus()
    assert len(papers) == 60 and len(patents) == 102
    check_papers(papers, vocab)
    check_patents(patents)

    with open(os.path.join(DATA_DIR, "vocabulary_ebola.json"), "w", encoding="utf-8") as fh:
        json.dump(vocab_doc, fh, indent=2, sort_keys=True)
        fh.write("\n")
    save_corpus(papers, os.path.join(DATA_DIR, "corpus_papers_60.jsonl"))
    save_corpus(patents, os.path.join(DATA_DIR, "corpus_patents_102.jsonl"))
    print(f"wrote fixtures to {os.path.abspath(DATA_DIR)}")


if __name__ == "__main__":
    main()
