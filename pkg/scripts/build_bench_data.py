#!/usr/bin/env python3
"""Author the bundled bench data: replay fixtures, label files, corpora,
mini-ontologies, and KG seeds for the completion, extraction, construction,
and fact-check scenarios.

Run from the repo root after an editable install:

    python3 scripts/build_bench_data.py

Everything is generated through the real prompt generator so fixture request
ids always match what the pipeline computes. The script verifies its own
output (counts, grounding, duplicate clusters) before writing the manifests;
rerun it after any template change.
"""

import json
import shutil
import sys

from ontoforge import promptgen, validate
from ontoforge.datafiles import DATA_DIR
from ontoforge.kgstore import Entity, KnowledgeGraph, Triple, find_gaps, save_kg
from ontoforge.modelclient import request_id_for
from ontoforge.ontology import ConceptDef, Ontology, RelationDef, serialize_ontology
from ontoforge.tripleparse import parse_triples

BENCH_DIR = DATA_DIR / "bench"
MODEL_NAME = "gpt-3.5-turbo"
RECORDED_AT = "2023-05-01T00:00:00Z"
PROVENANCE = (
    "authored transcription consistent with the reported per-request counts; "
    "not a live model capture"
)

# --- Table 2: completion requests (entity, relation, response lines) -------
#
# reject_lines: curation labels reject these line numbers (factual errors or
# redundancy-cluster members beyond the first).
# clusters: expected duplicate clusters at threshold 0.5, as line-number sets.

T2_ROWS = [
    {
        "id": "r1_01",
        "title": "COVID-19 vaccine (Q87719492) / manufacturer (P176)",
        "entity": "COVID-19 vaccine",
        "entity_external_id": "Q87719492",
        "domain_concept": "Vaccine",
        "range_concept": "Organization",
        "relation": "manufacturer",
        "relation_id": "P176",
        "max_triples": 20,
        "pairs": [
            ("Comirnaty", "Pfizer-BioNTech"),
            ("Spikevax", "Moderna"),
            ("Vaxzevria", "Oxford-AstraZeneca"),
            ("Ad26.COV2.S", "Janssen Pharmaceuticals"),
            ("Sputnik V", "Gamaleya Research Institute"),
            ("CoronaVac", "Sinovac Biotech"),
            ("BBIBP-CorV", "Sinopharm"),
            ("Covaxin", "Bharat Biotech"),
            ("Nuvaxovid", "Novavax"),
            ("ZF2001", "Novavax"),
            ("Convidecia", "CanSino Biologics"),
            ("EpiVacCorona", "Vector Institute"),
            ("CoviVac", "Chumakov Centre"),
            ("Abdala", "Center for Genetic Engineering and Biotechnology"),
            ("Soberana 02", "Finlay Institute"),
            ("COVAX-19", "Vaxine"),
            ("Corbevax", "Biological E"),
            ("Sputnik Light", "Gamaleya Research Institute"),
            ("Covovax", "Serum Institute of India"),
            ("Sinopharm WIBP", "Sinopharm"),
        ],
        "reject_lines": {10},
        "clusters": [],
    },
    {
        "id": "r1_02",
        "title": "vaccine hesitancy (Q56641686) / has contributing factor (P1479)",
        "entity": "vaccine hesitancy",
        "entity_external_id": "Q56641686",
        "domain_concept": "SocialPhenomenon",
        "range_concept": "ContributingFactor",
        "relation": "has contributing factor",
        "relation_id": "P1479",
        "max_triples": 15,
        "objects": [
            "misinformation on social media",
            "distrust of government institutions",
            "fear of needles",
            "religious objections",
            "lack of access to reliable information",
            "complacency about disease risk",
            "concerns about vaccine safety",
            "worries over rapid development timelines",
            "belief in conspiracy theories",
            "negative past healthcare experiences",
            "low perceived severity of infection",
            "peer and family influence",
            "skepticism toward pharmaceutical companies",
            "inconsistent public health messaging",
            "structural barriers to vaccination access",
        ],
        "reject_lines": set(),
        "clusters": [],
    },
    {
        "id": "r1_03",
        "title": "Prevention of SARS-CoV-2/COVID-19 (Q102056722) / has part(s) (P527)",
        "entity": "Prevention of SARS-CoV-2/COVID-19",
        "entity_external_id": "Q102056722",
        "domain_concept": "PreventionTopic",
        "range_concept": "PreventiveMeasure",
        "relation": "has part(s)",
        "relation_id": "P527",
        "max_triples": 26,
        "objects": [
            "hand washing",
            "wearing face masks",
            "physical distancing",
            "avoiding crowded indoor spaces",
            "improving ventilation",
            "surface disinfection",
            "respiratory etiquette",
            "quarantine of exposed individuals",
            "isolation of confirmed cases",
            "contact tracing",
            "travel restrictions",
            "border screening",
            "remote working arrangements",
            "school closures",
            "vaccination campaigns",
            "booster doses",
            "use of hand sanitizer",
            "avoiding touching the face",
            "testing of symptomatic individuals",
            "mass screening programs",
            "protective eyewear",
            "glove use in clinical settings",
            "cohorting of patients",
            "airborne infection isolation rooms",
            "public health messaging campaigns",
            "limits on gathering sizes",
        ],
        "reject_lines": set(),
        "clusters": [],
    },
    {
        "id": "r1_04",
        "title": "variant of SARS-CoV-2 (Q104450895) / instance of (P31)",
        "entity": "variant of SARS-CoV-2",
        "entity_external_id": "Q104450895",
        "domain_concept": "VariantClass",
        "range_concept": "Variant",
        "relation": "instance of",
        "relation_id": "P31",
        "max_triples": 15,
        "pairs_object_fixed": [
            "Alpha variant",
            "Beta variant",
            "Gamma variant",
            "Delta variant",
            "Omicron variant",
            "Lambda variant",
            "Mu variant",
            "Epsilon variant",
            "Eta variant",
            "Iota variant",
            "Kappa variant",
            "MERS-CoV",
            "Theta variant",
            "Influenza A virus",
            "Zeta variant",
        ],
        "reject_lines": {12, 14},
        "clusters": [],
    },
    {
        "id": "r1_05",
        "title": "COVID-19 PPE During the Pandemic (Q100433360) / instance of (P31)",
        "entity": "COVID-19 Personal Protective Equipment During the Pandemic",
        "entity_external_id": "Q100433360",
        "domain_concept": "EquipmentTopic",
        "range_concept": "EquipmentKind",
        "relation": "instance of",
        "relation_id": "P31",
        "max_triples": 4,
        "objects": ["face shields", "N95 respirators", "surgical gowns", "nitrile gloves"],
        "reject_lines": set(),
        "clusters": [],
    },
    {
        "id": "r1_06",
        "title": "long COVID (Q100732653) / symptoms and signs (P780)",
        "entity": "long COVID",
        "entity_external_id": "Q100732653",
        "domain_concept": "Disease",
        "range_concept": "Symptom",
        "relation": "symptoms and signs",
        "relation_id": "P780",
        "max_triples": 13,
        "objects": [
            "fatigue",
            "shortness of breath",
            "cognitive dysfunction",
            "chest pain",
            "joint pain",
            "heart palpitations",
            "loss of smell",
            "altered taste perception",
            "sleep disturbances",
            "persistent cough",
            "muscle aches",
            "depression and anxiety",
            "post-exertional malaise",
        ],
        "reject_lines": set(),
        "clusters": [],
    },
    {
        "id": "r1_07",
        "title": "Covid-19 impact on pregnant women (Q117032167) / symptoms and signs (P780)",
        "entity": "Covid-19 impact on pregnant women",
        "entity_external_id": "Q117032167",
        "domain_concept": "Condition",
        "range_concept": "Symptom",
        "relation": "symptoms and signs",
        "relation_id": "P780",
        "max_triples": 6,
        "objects": [
            "fever",
            "persistent cough",
            "shortness of breath",
            "fatigue",
            "loss of appetite",
            "muscle pain",
        ],
        "reject_lines": set(),
        "clusters": [],
    },
    {
        "id": "r1_08",
        "title": "COVID-19 misinformation (Q85173778) / instance of (P31)",
        "entity": "COVID-19 misinformation",
        "entity_external_id": "Q85173778",
        "domain_concept": "MisinformationTopic",
        "range_concept": "MisinformationKind",
        "relation": "instance of",
        "relation_id": "P31",
        "max_triples": 6,
        "objects": [
            "conspiracy theory about virus origins",
            "false cure claims",
            "anti-vaccination propaganda",
            "misleading statistics about mortality",
            "fake prevention remedies",
            "denial of the pandemic",
        ],
        "reject_lines": set(),
        "clusters": [],
    },
    {
        "id": "r1_09",
        "title": "COVID-19 pandemic impact on tourism (Q90840989) / instance of (P31)",
        "entity": "COVID-19 pandemic impact on tourism",
        "entity_external_id": "Q90840989",
        "domain_concept": "ImpactTopic",
        "range_concept": "ImpactKind",
        "relation": "instance of",
        "relation_id": "P31",
        "max_triples": 26,
        "objects": [
            "Decline in international tourist arrivals",
            "Cancellation of major cultural festivals",
            "Reduction in tourism spending",
            "Job losses in the hospitality sector",
            "Loss in revenue for airlines",
            "Closure of travel agencies",
            "Suspension of cruise ship operations",
            "Decline in hotel bookings",
            "Grounding of commercial flights",
            "Rise of domestic tourism",
            "Decrease in tourism spending",
            "Growth of virtual tourism experiences",
            "Closure of tourist attractions",
            "Decrease in airline revenue",
            "Collapse of tour operator businesses",
            "Introduction of travel corridors",
            "Quarantine requirements for travelers",
            "Loss of seasonal tourism employment",
            "Drop in hotel bookings",
            "Reduced capacity at tourist sites",
            "Shift toward outdoor recreation",
            "Closure of tourist sites",
            "Decline in business travel",
            "Increased use of travel insurance",
            "Delayed infrastructure investment in tourism",
            "Marketing campaigns for local travel",
        ],
        # 11/19/22 are redundancy-cluster members beyond the first; 14 is the
        # airline redundancy judged by hand (token overlap is below 0.5).
        "reject_lines": {11, 14, 19, 22},
        "clusters": [{3, 11}, {8, 19}, {13, 22}],
    },
    {
        "id": "r1_10",
        "title": "impact of the COVID-19 pandemic on the environment (Q90085156) / instance of (P31)",
        "entity": "impact of the COVID-19 pandemic on the environment",
        "entity_external_id": "Q90085156",
        "domain_concept": "ImpactTopic",
        "range_concept": "ImpactKind",
        "relation": "instance of",
        "relation_id": "P31",
        "max_triples": 20,
        "objects": [
            "Temporary reduction in global carbon emissions",
            "Improved urban air quality during lockdowns",
            "Decline in industrial pollution",
            "Increase in medical waste",
            "Growth in single-use plastic consumption",
            "Reduced noise pollution in cities",
            "Recovery of wildlife in urban areas",
            "Decrease in water pollution from tourism",
            "Disruption of environmental monitoring programs",
            "Postponement of climate conferences",
            "Expansion of online environmental activism",
            "Reduction in air travel emissions",
            "Cleaner waterways in tourist regions",
            "Increased illegal logging during enforcement gaps",
            "Decline in public transport ridership",
            "Surge in residential energy consumption",
            "Accumulation of discarded protective equipment",
            "Slowdown of renewable energy projects",
            "Rebound of emissions after reopening",
            "Deferred investment in conservation programs",
        ],
        "reject_lines": set(),
        "clusters": [],
    },
]

# --- Table 3: extraction requests -------------------------------------------

T3_ROWS = [
    {
        "id": "r2_01",
        "title": "COVID-19 (Q84263196) / symptoms and signs (P780)",
        "entity": "COVID-19",
        "domain_concept": "Disease",
        "range_concept": "Symptom",
        "relation": "symptoms and signs",
        "relation_id": "P780",
        "corpus": (
            "Common symptoms and signs of COVID-19 include fever, dry cough, and fatigue. "
            "Some patients report sore throat, headache, muscle pain, and diarrhea. "
            "Loss of taste and a reduced sense of smell are frequently described. "
            "In severe cases, shortness of breath and chest pressure can develop."
        ),
        "demonstrator": ("COVID-19", "fever"),
        "gold": 11,
        "objects": [
            "fever",
            "dry cough",
            "fatigue",
            "sore throat",
            "headache",
            "muscle pain",
            "diarrhea",
            "loss of taste",
            "reduced sense of smell",
            "shortness of breath",
            "chest pressure",
        ],
        "reject_lines": set(),
    },
    {
        "id": "r2_02",
        "title": "COVID-19 (Q84263196) / treatment (Q179661)",
        "entity": "COVID-19",
        "domain_concept": "Disease",
        "range_concept": "Drug",
        "relation": "treatment",
        "relation_id": "Q179661",
        "corpus": (
            "Several treatment options exist for COVID-19. "
            "Antiviral drugs such as remdesivir and molnupiravir can shorten the course of illness. "
            "The oral combination nirmatrelvir-ritonavir is recommended for high-risk patients. "
            "Dexamethasone reduces mortality in patients requiring supplemental oxygen. "
            "Monoclonal antibodies were authorized for early treatment. "
            "Other corticosteroids, such as prednisone, methylprednisolone or hydrocortisone, "
            "may be used if dexamethasone isn't available."
        ),
        "demonstrator": ("COVID-19", "remdesivir"),
        "gold": 8,
        "objects": [
            "remdesivir",
            "molnupiravir",
            "nirmatrelvir-ritonavir",
            "dexamethasone",
            "monoclonal antibodies",
        ],
        "reject_lines": set(),
    },
    {
        "id": "r2_03",
        "title": "Long-term Effects of COVID-19 (Q113939303) / symptoms and signs (P780)",
        "entity": "Long-term Effects of COVID-19",
        "domain_concept": "Condition",
        "range_concept": "Symptom",
        "relation": "symptoms and signs",
        "relation_id": "P780",
        "corpus": (
            "Published studies describe many long-term effects of COVID-19. "
            "The symptoms and signs most often reported include fatigue, shortness of breath, "
            "chest pain, joint pain, memory problems, sleep disturbance, palpitations, dizziness, "
            "depression, anxiety, persistent cough, recurring headache, and hair loss. "
            "Other symptoms were reported, which were not included in the publications, "
            "including brain fog and neuropathy."
        ),
        "demonstrator": ("Long-term Effects of COVID-19", "fatigue"),
        "gold": 15,
        "objects": [
            "fatigue",
            "shortness of breath",
            "chest pain",
            "joint pain",
            "memory problems",
            "sleep disturbance",
            "palpitations",
            "dizziness",
            "depression",
            "anxiety",
            "persistent cough",
            "recurring headache",
            "hair loss",
        ],
        "reject_lines": set(),
    },
    {
        "id": "r2_04",
        "title": "COVID-19 vaccine (Q87719492) / side effect (P1909)",
        "entity": "COVID-19 vaccine",
        "domain_concept": "Vaccine",
        "range_concept": "SideEffect",
        "relation": "side effect",
        "relation_id": "P1909",
        "corpus": (
            "Reported side effects of the COVID-19 vaccine are generally mild. "
            "The most frequent are soreness at the injection site, mild fever, headache, "
            "and temporary fatigue."
        ),
        "demonstrator": ("COVID-19 vaccine", "headache"),
        "gold": 4,
        "objects": [
            "soreness at the injection site",
            "mild fever",
            "headache",
            "temporary fatigue",
        ],
        "reject_lines": set(),
    },
    {
        "id": "r2_05",
        "title": "Covid-19 in children (Q97189089) / symptoms and signs (P780)",
        "entity": "Covid-19 in children",
        "domain_concept": "Disease",
        "range_concept": "Symptom",
        "relation": "symptoms and signs",
        "relation_id": "P780",
        "corpus": (
            "Covid-19 in children usually runs a mild course. "
            "Typical symptoms and signs are fever, runny nose, cough, sore throat, stomach ache, "
            "vomiting, diarrhea, skin rash, irritability, and poor feeding."
        ),
        "demonstrator": ("Covid-19 in children", "fever"),
        "gold": 10,
        "objects": [
            "fever",
            "runny nose",
            "cough",
            "sore throat",
            "stomach ache",
            "vomiting",
            "diarrhea",
            "skin rash",
            "irritability",
            "poor feeding",
        ],
        "reject_lines": set(),
    },
    {
        "id": "r2_06",
        "title": "Economic impact of the COVID-19 pandemic (Q96175652) / instance of (P31)",
        "entity": "Economic impact of the COVID-19 pandemic",
        "domain_concept": "ImpactKind",
        "range_concept": "ImpactTopic",
        "relation": "instance of",
        "relation_id": "P31",
        "corpus": (
            "The economic impact of the COVID-19 pandemic took many forms. "
            "Analysts documented a global recession, widespread unemployment, supply chain "
            "disruption, stock market volatility, small business closures, reduced consumer "
            "spending, growth of remote work, debt accumulation by governments, inflationary "
            "pressure, labor shortages, decline in oil demand, expansion of e-commerce, reduced "
            "foreign direct investment, contraction of the aviation industry, rent arrears, food "
            "insecurity, widening income inequality, delayed capital projects, increased "
            "automation, restructuring of global trade, and a boom in digital services."
        ),
        "demonstrator_subject": ("global recession",),
        "gold": 21,
        "subjects": [
            "global recession",
            "widespread unemployment",
            "supply chain disruption",
            "stock market volatility",
            "small business closures",
            "reduced consumer spending",
            "growth of remote work",
            "debt accumulation by governments",
            "inflationary pressure",
            "labor shortages",
            "decline in oil demand",
            "expansion of e-commerce",
            "reduced foreign direct investment",
            "contraction of the aviation industry",
            "rent arrears",
            "food insecurity",
            "widening income inequality",
            "delayed capital projects",
            "increased automation",
            "restructuring of global trade",
            "boom in digital services",
        ],
        "reject_lines": set(),
    },
    {
        "id": "r2_07",
        "title": "impact of the COVID-19 pandemic on religion (Q87898060) / instance of (P31)",
        "entity": "impact of the COVID-19 pandemic on religion",
        "domain_concept": "ImpactKind",
        "range_concept": "ImpactTopic",
        "relation": "instance of",
        "relation_id": "P31",
        "corpus": (
            "The impact of the COVID-19 pandemic on religion was substantial. "
            "Documented instances include suspension of communal worship, cancellation of "
            "pilgrimages, growth of online religious services, postponement of religious "
            "festivals, restrictions on funeral gatherings, and closure of sacred sites."
        ),
        "demonstrator_subject": ("suspension of communal worship",),
        "gold": 6,
        "subjects": [
            "suspension of communal worship",
            "cancellation of pilgrimages",
            "growth of online religious services",
            "postponement of religious festivals",
            "restrictions on funeral gatherings",
            "closure of sacred sites",
        ],
        "reject_lines": set(),
    },
    {
        "id": "r2_08",
        "title": "COVID-19 related shortage (Q88429117) / instance of (P31)",
        "entity": "COVID-19 related shortage",
        "domain_concept": "ShortageKind",
        "range_concept": "ShortageTopic",
        "relation": "instance of",
        "relation_id": "P31",
        "corpus": (
            "The pandemic produced many kinds of COVID-19 related shortage. "
            "Hospitals reported shortages of face masks, ventilators, hospital beds, and oxygen "
            "supplies. Consumers faced shortages of hand sanitizer, toilet paper, and "
            "semiconductor chips. In some cases, governmental decision making created shortages, "
            "such as when CDC prohibited the use of any diagnostic test other than the one it "
            "created."
        ),
        "demonstrator_subject": ("face masks",),
        "gold": 8,
        "subjects": [
            "face masks",
            "ventilators",
            "hospital beds",
            "oxygen supplies",
            "hand sanitizer",
            "toilet paper",
            "semiconductor chips",
            "diagnostic test other than the one it created",
        ],
        "reject_lines": {8},
    },
    {
        "id": "r2_09",
        "title": "COVID-19 disease in pregnancy (Q88058672) / effect (Q926230)",
        "entity": "COVID-19 disease in pregnancy",
        "domain_concept": "Disease",
        "range_concept": "Effect",
        "relation": "effect",
        "relation_id": "Q926230",
        "corpus": (
            "Studies of COVID-19 disease in pregnancy report several effects. "
            "Documented effects include preterm birth, preeclampsia, gestational hypertension, "
            "emergency caesarean delivery, low birth weight, admission of the newborn to neonatal "
            "care, maternal intensive care admission, and the need for mechanical ventilation. "
            "A review in 2022 suggests that pregnant women are at increased risk of severe "
            "COVID-19 disease, with an increased rate of being hospitalized to the intensive care "
            "unit and requiring ventilation, but was not associated with a statistically "
            "significant increase in mortality."
        ),
        "demonstrator": ("COVID-19 disease in pregnancy", "preterm birth"),
        "gold": 9,
        "objects": [
            "preterm birth",
            "preeclampsia",
            "gestational hypertension",
            "emergency caesarean delivery",
            "low birth weight",
            "admission of the newborn to neonatal care",
            "maternal intensive care admission",
            "need for mechanical ventilation",
            "mortality",
        ],
        "reject_lines": {9},
        "expect_negation_lines": {9},
    },
    {
        "id": "r2_10",
        "title": "long COVID (Q100732653) / symptoms and signs (P780)",
        "entity": "long COVID",
        "domain_concept": "Disease",
        "range_concept": "Symptom",
        "relation": "symptoms and signs",
        "relation_id": "P780",
        "corpus": (
            "Clinical follow-up of long COVID describes a broad picture. "
            "The symptoms and signs reported by patients include exhaustion, breathlessness, "
            "brain fog, chest tightness, heart palpitations, joint stiffness, tinnitus, "
            "dizziness, low-grade fever, night sweats, loss of appetite, and mood swings."
        ),
        "demonstrator": ("long COVID", "brain fog"),
        "gold": 12,
        "objects": [
            "exhaustion",
            "breathlessness",
            "brain fog",
            "chest tightness",
            "heart palpitations",
            "joint stiffness",
            "tinnitus",
            "dizziness",
            "low-grade fever",
            "night sweats",
            "loss of appetite",
            "mood swings",
        ],
        "reject_lines": set(),
    },
]

# --- Construction scenario ---------------------------------------------------

CONSTRUCT_SEED_ENTITIES = [
    ("influenza", "Disease"),
    ("migraine", "Disease"),
    ("covid-19", "Disease"),
    ("asthma", "Disease"),
    ("tuberculosis", "Disease"),
    ("fever", "Symptom"),
    ("persistent cough", "Symptom"),
]

CONSTRUCT_LINES = [
    ("influenza", "hasSymptom", "fever"),
    ("influenza", "hasSymptom", "chills"),
    ("influenza", "affectsOrgan", "lungs"),
    ("influenza", "treatedBy", "oseltamivir"),
    ("covid-19", "hasSymptom", "persistent cough"),
    ("covid-19", "affectsOrgan", "lungs"),
    ("covid-19", "hasRiskFactor", "advanced age"),
    ("covid-19", "treatedBy", "remdesivir"),
    ("migraine", "hasSymptom", "throbbing headache"),
    ("influenza", "hasAnatomicalLocation", "respiratory tract"),
    ("migraine", "hasRiskFactor", "chronic stress"),
    ("asthma", "hasSymptom", "wheezing"),
    ("asthma", "affectsOrgan", "airways"),
    ("asthma", "hasTreatment", "inhaled corticosteroids"),
    ("tuberculosis", "hasSymptom", "night sweats"),
    ("tuberculosis", "affectsOrgan", "lungs"),
    ("migraine", "hasAnatomicalLocation", "head"),
    ("tuberculosis", "treatedBy", "isoniazid"),
]
CONSTRUCT_DEVIATION_LINES = {10, 17}
CONSTRUCT_TOPIC = "diseases"

# --- Fact-check scenario ------------------------------------------------------

FACTCHECK_TRIPLES = [
    ("diabetes", "has symptom", "increased thirst"),
    ("diabetes", "has symptom", "blurred vision"),
    ("diabetes", "has symptom", "fatigue"),
    ("diabetes", "has symptom", "Are very hungry"),
    ("diabetes", "has symptom", "urinating a lot"),
    ("diabetes", "has symptom", "slow-healing sores"),
]
FACTCHECK_FLAGGED_LINE = "1. (diabetes, has symptom, Are very hungry)"


def row_ontology(row):
    concepts = [ConceptDef(row["domain_concept"])]
    if row["range_concept"] != row["domain_concept"]:
        concepts.append(ConceptDef(row["range_concept"]))
    relation = RelationDef(
        name=row["relation"],
        domain=row["domain_concept"],
        range=row["range_concept"],
        external_id=row.get("relation_id"),
    )
    return Ontology(concepts=tuple(concepts), relations=(relation,))


def t2_lines(row):
    relation = row["relation"]
    if "pairs" in row:
        return [(s, relation, o) for s, o in row["pairs"]]
    if "pairs_object_fixed" in row:
        return [(s, relation, row["entity"]) for s in row["pairs_object_fixed"]]
    return [(row["entity"], relation, o) for o in row["objects"]]


def t3_lines(row):
    relation = row["relation"]
    if "subjects" in row:
        return [(s, relation, row["entity"]) for s in row["subjects"]]
    return [(row["entity"], relation, o) for o in row["objects"]]


def response_text(lines):
    return "\n".join(f"{i}. ({s}, {r}, {o})" for i, (s, r, o) in enumerate(lines, start=1)) + "\n"


def write(path, text):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def write_fixture(fixtures_dir, rid, prompt_text, body):
    fixture = {
        "request_id": rid,
        "prompt_text": prompt_text,
        "response_text": body,
        "model_name": MODEL_NAME,
        "recorded_at": RECORDED_AT,
        "provenance": PROVENANCE,
    }
    write(fixtures_dir / f"{rid}.json", json.dumps(fixture, ensure_ascii=False, indent=2) + "\n")


def write_labels(path, rid, line_count, reject_lines):
    records = []
    for line_number in range(1, line_count + 1):
        decision = "reject" if line_number in reject_lines else "accept"
        records.append(
            json.dumps(
                {"transcript_id": rid, "line_number": line_number, "decision": decision},
                ensure_ascii=False,
            )
        )
    write(path, "\n".join(records) + "\n")


def check_clusters(row, lines, expected):
    report = parse_triples(response_text(lines), "check")
    clusters = validate.find_duplicates(report.triples, 0.5)
    got = [set(line for _, line in members) for members in clusters]
    if sorted(map(sorted, got)) != sorted(map(sorted, [set(c) for c in expected])):
        raise SystemExit(
            f"{row['id']}: duplicate clusters {got} do not match intended {expected}; "
            "adjust the authored lines"
        )


def build_table2(fixtures_dir, rows_dir):
    manifest = []
    for row in T2_ROWS:
        ontology = row_ontology(row)
        kg = KnowledgeGraph(namespace=ontology.namespace)
        kg.add_entity(
            Entity(
                label=row["entity"],
                concept=row["domain_concept"],
                external_id=row.get("entity_external_id"),
            )
        )
        slots = find_gaps(kg, ontology)
        assert len(slots) == 1, f"{row['id']}: expected exactly one gap slot, got {slots}"
        prompt = promptgen.gen_gapfill_prompt(slots[0], ontology, row["max_triples"])
        rid = request_id_for(prompt.mode, prompt.prompt_text, MODEL_NAME)

        lines = t2_lines(row)
        assert len(lines) == row["max_triples"], f"{row['id']}: line count mismatch"
        body = response_text(lines)
        parsed = parse_triples(body, rid)
        assert len(parsed.triples) == len(lines), f"{row['id']}: parse count mismatch"
        assert not parsed.skipped_lines, f"{row['id']}: unexpected skips {parsed.skipped_lines}"
        check_clusters(row, lines, row["clusters"])

        row_dir = rows_dir / row["id"]
        write(row_dir / "ontology.onto", serialize_ontology(ontology))
        write(row_dir / "kg.kgl", save_kg(kg))
        write_labels(row_dir / "labels.jsonl", rid, len(lines), row["reject_lines"])
        write_fixture(fixtures_dir, rid, prompt.prompt_text, body)
        manifest.append(
            {
                "id": row["id"],
                "title": row["title"],
                "entity": row["entity"],
                "relation": row["relation"],
                "max_triples": row["max_triples"],
                "ontology": f"bench/rows/{row['id']}/ontology.onto",
                "kg": f"bench/rows/{row['id']}/kg.kgl",
                "labels": f"bench/rows/{row['id']}/labels.jsonl",
                "request_id": rid,
            }
        )
    return manifest


def build_table3(fixtures_dir, rows_dir):
    from ontoforge.promptgen import gen_extraction_prompt

    manifest = []
    for row in T3_ROWS:
        ontology = row_ontology(row)
        relation = ontology.relations[0]
        lines = t3_lines(row)
        if "demonstrator" in row:
            demo_subject, demo_object = row["demonstrator"]
        else:
            (demo_subject,) = row["demonstrator_subject"]
            demo_object = row["entity"]
        demonstrator = Triple(subject=demo_subject, relation=relation.name, object=demo_object)
        # The prompt must be built from the exact bytes the pipeline will read
        # back from the corpus file, or the fixture request id will not match.
        corpus_text = row["corpus"] + "\n"
        prompt = gen_extraction_prompt(corpus_text, row["entity"], relation, [demonstrator])
        rid = request_id_for(prompt.mode, prompt.prompt_text, MODEL_NAME)

        body = response_text(lines)
        parsed = parse_triples(body, rid, "provided_text")
        assert len(parsed.triples) == len(lines), f"{row['id']}: parse count mismatch"
        accepted = len(lines) - len(row["reject_lines"])
        assert accepted <= row["gold"], f"{row['id']}: accepted {accepted} exceeds gold"
        check_clusters(row, lines, [])
        warn_lines = {
            w.line_number for w in validate.negation_warnings(parsed.triples, corpus_text)
        }
        expected_warn = row.get("expect_negation_lines", set())
        assert warn_lines == expected_warn, (
            f"{row['id']}: negation warning lines {warn_lines} != expected {expected_warn}"
        )

        row_dir = rows_dir / row["id"]
        write(row_dir / "ontology.onto", serialize_ontology(ontology))
        write(row_dir / "corpus.txt", corpus_text)
        write_labels(row_dir / "labels.jsonl", rid, len(lines), row["reject_lines"])
        write_fixture(fixtures_dir, rid, prompt.prompt_text, body)
        manifest.append(
            {
                "id": row["id"],
                "title": row["title"],
                "entity": row["entity"],
                "relation": row["relation"],
                "gold": row["gold"],
                "demonstrator": [demonstrator.subject, demonstrator.relation, demonstrator.object],
                "ontology": f"bench/rows/{row['id']}/ontology.onto",
                "corpus": f"bench/rows/{row['id']}/corpus.txt",
                "labels": f"bench/rows/{row['id']}/labels.jsonl",
                "request_id": rid,
            }
        )
    return manifest


def build_construct(fixtures_dir, construct_dir):
    from ontoforge.ontology import parse_ontology

    ontology = parse_ontology((DATA_DIR / "ontology" / "disease.onto").read_text(encoding="utf-8"))
    kg = KnowledgeGraph(namespace=ontology.namespace)
    for label, concept in CONSTRUCT_SEED_ENTITIES:
        kg.add_entity(Entity(label=label, concept=concept))
    prompts = promptgen.gen_construction_prompt(ontology, CONSTRUCT_TOPIC)
    assert len(prompts) == 1, "construct scenario expects a single chunk"
    rid = request_id_for(prompts[0].mode, prompts[0].prompt_text, MODEL_NAME)

    body = response_text(CONSTRUCT_LINES)
    parsed = parse_triples(body, rid)
    violations = validate.check_conformance(parsed.triples, ontology, kg)
    deviation_lines = {v.line_number for v in violations if v.kind == "domain_mismatch"}
    assert deviation_lines == CONSTRUCT_DEVIATION_LINES, (
        f"construct deviations at {deviation_lines}, expected {CONSTRUCT_DEVIATION_LINES}"
    )
    assert all(v.kind == "domain_mismatch" for v in violations), violations

    write(construct_dir / "seed.kgl", save_kg(kg))
    write_labels(construct_dir / "labels.jsonl", rid, len(CONSTRUCT_LINES), set())
    write_fixture(fixtures_dir, rid, prompts[0].prompt_text, body)
    return {
        "topic": CONSTRUCT_TOPIC,
        "ontology": "ontology/disease.onto",
        "kg": "bench/construct/seed.kgl",
        "labels": "bench/construct/labels.jsonl",
        "request_id": rid,
        "line_count": len(CONSTRUCT_LINES),
        "deviation_lines": sorted(CONSTRUCT_DEVIATION_LINES),
    }


def build_factcheck(fixtures_dir, factcheck_dir):
    concepts = (ConceptDef("Disease"), ConceptDef("Symptom"))
    relation = RelationDef(name="has symptom", domain="Disease", range="Symptom")
    ontology = Ontology(concepts=concepts, relations=(relation,))
    kg = KnowledgeGraph(namespace=ontology.namespace)
    kg.add_entity(Entity(label="diabetes", concept="Disease"))
    for s, r, o in FACTCHECK_TRIPLES:
        kg.add_triple(Triple(subject=s, relation=r, object=o))
    prompt = promptgen.gen_factcheck_prompt(kg.triples)
    rid = request_id_for(prompt.mode, prompt.prompt_text, MODEL_NAME)

    body = FACTCHECK_FLAGGED_LINE + "\n"
    flagged = parse_triples(body, rid, "existing_kg")
    verdicts = validate.fact_check(kg.triples, flagged)
    contradicted = [v for v in verdicts if v.verdict == "contradicted"]
    assert len(contradicted) == 1 and "Are very hungry" in contradicted[0].evidence
    unconfirmed = {v.kg_triple[2] for v in verdicts if v.verdict == "unconfirmed"}
    assert "urinating a lot" in unconfirmed

    write(factcheck_dir / "diabetes.onto", serialize_ontology(ontology))
    write(factcheck_dir / "diabetes.kgl", save_kg(kg))
    write_fixture(fixtures_dir, rid, prompt.prompt_text, body)
    return {
        "ontology": "bench/factcheck/diabetes.onto",
        "kg": "bench/factcheck/diabetes.kgl",
        "request_id": rid,
        "triple_count": len(FACTCHECK_TRIPLES),
    }


def main():
    if BENCH_DIR.exists():
        shutil.rmtree(BENCH_DIR)
    fixtures_dir = BENCH_DIR / "fixtures"
    rows_dir = BENCH_DIR / "rows"

    table2 = build_table2(fixtures_dir, rows_dir)
    table3 = build_table3(fixtures_dir, rows_dir)
    construct = build_construct(fixtures_dir, BENCH_DIR / "construct")
    factcheck = build_factcheck(fixtures_dir, BENCH_DIR / "factcheck")

    write(BENCH_DIR / "table2.json", json.dumps({"rows": table2}, indent=2) + "\n")
    write(BENCH_DIR / "table3.json", json.dumps({"rows": table3}, indent=2) + "\n")
    write(
        BENCH_DIR / "scenarios.json",
        json.dumps({"construct": construct, "factcheck": factcheck}, indent=2) + "\n",
    )
    fixture_count = len(list(fixtures_dir.glob("*.json")))
    print(f"wrote {fixture_count} fixtures, {len(table2)} completion rows, {len(table3)} extraction rows")


if __name__ == "__main__":
    sys.exit(main())
