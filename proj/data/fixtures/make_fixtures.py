#!/usr/bin/env python3
"""Writes the small synthetic source corpus used by the test suite.

The files share the schemas of the real exports (Wikitext frequencies, tagged
noun table, CEFR lexicon, CMU dictionary, Wiktionary pairs, GLUE/BIG-bench
exports) but are tiny and partly templated. Re-running this script is
idempotent; the manifest digests are refreshed at the end.
"""

import hashlib
import json
import os

HERE = os.path.dirname(os.path.abspath(__file__))


def write(name, text):
    with open(os.path.join(HERE, name), "w", encoding="utf-8", newline="\n") as f:
        f.write(text)


def write_jsonl(name, rows):
    write(name, "".join(json.dumps(r, ensure_ascii=False, sort_keys=True) + "\n" for r in rows))


# ---------------------------------------------------------------- nouns / freq

# (singular, plural or None for mass nouns, plural count or None when absent)
CEN_NOUNS = [
    ("cat", "cats", 820), ("dog", "dogs", 790), ("box", "boxes", 410),
    ("city", "cities", 900), ("life", "lives", 650), ("wife", "wives", 210),
    ("knife", "knives", 95), ("leaf", "leaves", 330), ("wolf", "wolves", 120),
    ("church", "churches", 560), ("bus", "buses", 140), ("glass", "glasses", 160),
    ("dish", "dishes", 88), ("baby", "babies", 170), ("party", "parties", 610),
    ("story", "stories", 540), ("day", "days", 980), ("key", "keys", 230),
    ("boy", "boys", 480), ("hero", "heroes", 150), ("potato", "potatoes", None),
    ("tomato", "tomatoes", 55), ("photo", "photos", 99), ("piano", "pianos", 61),
    ("man", "men", 970), ("woman", "women", 940), ("child", "children", 960),
    ("foot", "feet", 700), ("tooth", "teeth", 130), ("mouse", "mice", 72),
    ("goose", "geese", 30), ("person", "people", 990), ("sheep", "sheep", None),
    ("fish", "fish", None), ("deer", "deer", None), ("series", "series", None),
    ("crisis", "crises", 115), ("analysis", "analyses", 90), ("thesis", "theses", 12),
    ("game", "games", 880), ("house", "houses", 520), ("car", "cars", 450),
    ("book", "books", 720), ("world", "worlds", 260), ("school", "schools", 600),
    ("family", "families", 440), ("year", "years", 995), ("army", "armies", 310),
    ("roof", "roofs", 66), ("chief", "chiefs", 180), ("fireman", "firemen", 45),
    ("echo", "echoes", 60),
    ("water", None, None), ("music", None, None), ("information", None, None),
    ("money", None, None), ("equipment", None, None),
]

MASS_NOUNS = ["water", "music", "information", "money", "equipment", "advice",
              "furniture", "luggage", "rice", "milk"]

SHORT_NOUNS = [("ox", "ox", "NN"), ("pc", "pc", "NN"), ("tv", "tv", "NN")]
LEMMA_DIFFERS = [("data", "datum", "NN"), ("media", "medium", "NN"),
                 ("criteria", "criterion", "NN")]
PROPER = [("london", "london", "NNP"), ("paris", "paris", "NNP")]
VERBS = [("run", "run", "VB"), ("played", "play", "VBD")]

FUNCTION_WORDS = """the of and in to a was is for on as with by he it at from his an were
are which this also be has had first one their its new after but who not they have her
she two been other when there all during into more time only over most some such
would can later about him up out than many then three both between under while
where these so may before however through could made each did well since because
any them those being used against though what around known you very we our same
including early several often took became although until later""".split()


def build_freq_and_nouns():
    freq = {}
    nouns = []
    # Function words dominate the head of the distribution.
    fw = []
    for w in FUNCTION_WORDS:
        if w not in fw:
            fw.append(w)
    fw = fw[:86]
    for i, w in enumerate(fw):
        freq[w] = 200000 - i * 1500
    freq["run"] = 2400
    freq["played"] = 2300
    for i, (sg, pl, plc) in enumerate(CEN_NOUNS):
        freq[sg] = 2000 - i * 17
        nouns.append((sg, sg, "NN"))
        if pl and pl != sg:
            nouns.append((pl, sg, "NNS"))
            if plc is not None:
                freq[pl] = plc
    for i, (w, lemma, tag) in enumerate(SHORT_NOUNS + LEMMA_DIFFERS + PROPER):
        freq[w] = 1500 - i * 40
        nouns.append((w, lemma, tag))
    nouns.extend(VERBS)
    # In the noun table but absent from the frequency table.
    nouns.append(("zebra", "zebra", "NN"))
    assert len(freq) == 200, len(freq)
    rows = sorted(freq.items(), key=lambda kv: (-kv[1], kv[0]))
    write("wikitext_freq.tsv",
          "# word\tcount (fixture excerpt)\n" + "".join(f"{w}\t{c}\n" for w, c in rows))
    lines = ["# word\tlemma\ttag\tfrequency\n"]
    for w, lemma, tag in nouns:
        lines.append(f"{w}\t{lemma}\t{tag}\t{freq.get(w, 0)}\n")
    write("nouns.tsv", "".join(lines))
    write("mass_nouns.txt", "# uncountable nouns, one per line\n" + "".join(m + "\n" for m in MASS_NOUNS))


# Hand-checked English inflections; pluralize() must agree with every row.
INFLECTIONS = [
    ("cat", "cats"), ("dog", "dogs"), ("box", "boxes"), ("city", "cities"),
    ("life", "lives"), ("wife", "wives"), ("knife", "knives"), ("leaf", "leaves"),
    ("wolf", "wolves"), ("church", "churches"), ("bus", "buses"), ("glass", "glasses"),
    ("dish", "dishes"), ("baby", "babies"), ("party", "parties"), ("story", "stories"),
    ("day", "days"), ("key", "keys"), ("boy", "boys"), ("hero", "heroes"),
    ("potato", "potatoes"), ("tomato", "tomatoes"), ("photo", "photos"), ("piano", "pianos"),
    ("man", "men"), ("woman", "women"), ("child", "children"), ("foot", "feet"),
    ("tooth", "teeth"), ("mouse", "mice"), ("goose", "geese"), ("person", "people"),
    ("sheep", "sheep"), ("fish", "fish"), ("deer", "deer"), ("series", "series"),
    ("crisis", "crises"), ("analysis", "analyses"), ("thesis", "theses"), ("game", "games"),
    ("house", "houses"), ("car", "cars"), ("book", "books"), ("world", "worlds"),
    ("school", "schools"), ("family", "families"), ("year", "years"), ("army", "armies"),
    ("roof", "roofs"), ("chief", "chiefs"), ("fireman", "firemen"), ("echo", "echoes"),
    ("half", "halves"), ("shelf", "shelves"), ("thief", "thieves"), ("loaf", "loaves"),
    ("calf", "calves"), ("self", "selves"), ("belief", "beliefs"), ("cliff", "cliffs"),
    ("chef", "chefs"), ("proof", "proofs"), ("safe", "safes"), ("giraffe", "giraffes"),
    ("kiss", "kisses"), ("fox", "foxes"), ("buzz", "buzzes"), ("quiz", "quizzes"),
    ("watch", "watches"), ("bush", "bushes"), ("stomach", "stomachs"), ("monarch", "monarchs"),
    ("lady", "ladies"), ("toy", "toys"), ("monkey", "monkeys"), ("valley", "valleys"),
    ("guy", "guys"), ("radio", "radios"), ("zoo", "zoos"), ("video", "videos"),
    ("veto", "vetoes"), ("volcano", "volcanoes"), ("louse", "lice"), ("ox", "oxen"),
    ("basis", "bases"), ("hypothesis", "hypotheses"), ("oasis", "oases"), ("axis", "axes"),
    ("cactus", "cacti"), ("fungus", "fungi"), ("nucleus", "nuclei"), ("radius", "radii"),
    ("stimulus", "stimuli"), ("phenomenon", "phenomena"), ("criterion", "criteria"),
    ("species", "species"), ("aircraft", "aircraft"), ("salmon", "salmon"),
    ("policeman", "policemen"), ("chairman", "chairmen"), ("human", "humans"),
    ("german", "germans"), ("roman", "romans"), ("bag", "bags"), ("idea", "ideas"),
    ("dress", "dresses"), ("virus", "viruses"), ("campus", "campuses"), ("bonus", "bonuses"),
]


# ---------------------------------------------------------------- lexicon

LEXICON = []


def lex(category, level, words):
    for w in words.split():
        LEXICON.append((w, level, category))


lex("animals", "A1", "cat dog horse cow pig sheep goat duck chicken rabbit mouse lion tiger")
lex("animals", "A2", "elephant monkey bear wolf fox frog snake whale bird fish rat bee")
lex("clothing", "A1", "shirt dress coat hat shoe sock skirt jacket")
lex("clothing", "A2", "scarf glove belt boot")
lex("colors", "A1", "red blue green yellow white black brown pink")
lex("colors", "A2", "purple orange gray gold")
lex("food", "A1", "bread cake rice apple egg cheese soup pizza")
lex("food", "A2", "meat banana milk salad")
lex("vehicles", "A1", "car bus train bike truck boat plane taxi")
lex("vehicles", "A2", "ship van tram scooter")
lex("professions", "A1", "doctor teacher nurse cook farmer pilot")
lex("professions", "A2", "driver dentist lawyer baker waiter artist")
lex("none", "A1", "sing ring king thing day way play say light night right head bed")
lex("none", "A2", "bring bat kite two zoo lake make moon spoon dish")
lex("none", "B1", "wish")
lex("none", "B2", "fling")
lex("none", "C1", "sting")

PRON = """;;; fixture excerpt in cmudict format
SING  S IH1 NG
RING  R IH1 NG
KING  K IH1 NG
THING  TH IH1 NG
BRING  B R IH1 NG
STING  S T IH1 NG
FLING  F L IH1 NG
CAT  K AE1 T
HAT  HH AE1 T
BAT  B AE1 T
RAT  R AE1 T
DAY  D EY1
WAY  W EY1
PLAY  P L EY1
SAY  S EY1
GRAY  G R EY1
LIGHT  L AY1 T
NIGHT  N AY1 T
RIGHT  R AY1 T
WHITE  W AY1 T
WHITE(2)  HH W AY1 T
KITE  K AY1 T
BLUE  B L UW1
SHOE  SH UW1
TWO  T UW1
ZOO  Z UW1
RED  R EH1 D
BED  B EH1 D
BREAD  B R EH1 D
HEAD  HH EH1 D
CAKE  K EY1 K
LAKE  L EY1 K
MAKE  M EY1 K
SNAKE  S N EY1 K
MOON  M UW1 N
SPOON  S P UW1 N
DISH  D IH1 SH
WISH  W IH1 SH
FISH  F IH1 SH
ORANGE  AO1 R AH0 N JH
TIGER  T AY1 G ER0
DOCTOR  D AA1 K T ER0
BANANA  B AH0 N AE1 N AH0
"""

# ---------------------------------------------------------------- translations

TRANSLATIONS = {
    "de": {
        "cat": ["Katze"], "dog": ["Hund"], "house": ["Haus"], "car": ["Auto", "Wagen"],
        "book": ["Buch"], "water": ["Wasser"], "game": ["Spiel"], "day": ["Tag"],
        "year": ["Jahr"], "man": ["Mann"], "woman": ["Frau"], "child": ["Kind"],
        "world": ["Welt"], "city": ["Stadt"], "school": ["Schule"], "family": ["Familie"],
        "music": ["Musik"], "money": ["Geld"], "fish": ["Fisch"], "glass": ["Glas"],
        "key": ["Schlüssel"], "life": ["Leben"], "knife": ["Messer"], "church": ["Kirche"],
        "baby": ["Baby"], "story": ["Geschichte"], "boy": ["Junge"], "army": ["Armee", "Heer"],
        "tooth": ["Zahn"], "mouse": ["Maus"], "foot": ["Fuß"], "run": ["laufen"],
    },
    "es": {
        "cat": ["gato"], "dog": ["perro"], "house": ["casa"], "car": ["coche", "carro"],
        "book": ["libro"], "water": ["agua"], "game": ["juego", "partido"], "day": ["día"],
        "year": ["año"], "man": ["hombre"], "woman": ["mujer"], "child": ["niño", "niña"],
        "world": ["mundo"], "city": ["ciudad"], "school": ["escuela"], "family": ["familia"],
        "music": ["música"], "money": ["dinero"], "fish": ["pez", "pescado"],
        "glass": ["vaso", "vidrio"], "key": ["llave"], "life": ["vida"], "knife": ["cuchillo"],
        "church": ["iglesia"], "baby": ["bebé"], "story": ["historia", "cuento"],
        "boy": ["chico", "niño"], "army": ["ejército"], "tooth": ["diente"],
        "mouse": ["ratón"], "foot": ["pie"],
    },
    "fr": {
        "cat": ["chat"], "dog": ["chien"], "house": ["maison"], "car": ["voiture"],
        "book": ["livre"], "water": ["eau"], "game": ["jeu", "partie"], "day": ["jour"],
        "year": ["an", "année"], "man": ["homme"], "woman": ["femme"], "child": ["enfant"],
        "world": ["monde"], "city": ["ville"], "school": ["école"], "family": ["famille"],
        "music": ["musique"], "money": ["argent"], "fish": ["poisson"], "glass": ["verre"],
        "key": ["clé", "clef"], "life": ["vie"], "knife": ["couteau"], "church": ["église"],
        "baby": ["bébé"], "story": ["histoire"], "boy": ["garçon"], "army": ["armée"],
        "tooth": ["dent"], "mouse": ["souris"], "foot": ["pied"],
    },
}

# ---------------------------------------------------------------- sentence corpora

def cola_rows():
    subjects = ["The man", "My sister", "A dog", "The teacher", "Every student",
                "John", "Mary", "The committee", "Some birds", "Her friend"]
    verbs = ["sued", "liked", "saw", "visited", "praised", "ignored", "met", "thanked"]
    objects = ["me", "the book", "a car", "the house", "his neighbor", "the proposal",
               "my mother", "the small cat"]
    tails = ["last week", "yesterday", "in the morning", "again", "twice"]
    rows = []
    n = 0
    for i, s in enumerate(subjects):
        for j, v in enumerate(verbs):
            o = objects[(i + j) % len(objects)]
            t = tails[(i * 3 + j) % len(tails)]
            n += 1
            rows.append({"sentence": f"{s} {v} {o} {t}.", "split": "train"})
    rows = rows[:60]
    rows.append({"sentence": "The man whose car I hit last week sued me.", "split": "train"})
    ood_subjects = ["The sailor", "A pilot", "Our neighbor", "The old baker", "Tom"]
    ood_verbs = ["painted", "fixed", "carried", "sold"]
    ood_objects = ["the fence", "a boat", "the bread", "several boxes"]
    for i, s in enumerate(subjects[:5]):
        for j, v in enumerate(["wanted", "found", "borrowed", "described"]):
            rows.append({"sentence": f"{s} {v} {objects[(i + 2 * j) % len(objects)]}.",
                         "split": "in_domain_dev"})
    for i, s in enumerate(ood_subjects):
        for j, v in enumerate(ood_verbs):
            rows.append({"sentence": f"{s} {v} {ood_objects[(i + j) % 4]} quickly.",
                         "split": "out_of_domain_dev"})
    return rows


def hans_pairs():
    people = ["artist", "scientist", "doctor", "lawyer", "author", "student",
              "president", "manager", "banker", "tourist", "judge", "actor"]
    verbs = [("introduced", "introduced"), ("supported", "supported"), ("saw", "seen"),
             ("helped", "helped"), ("called", "called"), ("recommended", "recommended"),
             ("avoided", "avoided"), ("thanked", "thanked")]
    out = []
    k = 0
    for v, pp in verbs:
        for i, a in enumerate(people):
            b = people[(i + 1 + k % 11) % len(people)]
            if a == b:
                continue
            k += 1
            out.append((f"The {a} {v} the {b}.", f"The {b} was {pp} by the {a}."))
    return out[:90]


def lama_rows():
    rows = []
    facts = [("Time", "finite"), ("Water", "wet"), ("Ice", "cold"), ("Fire", "hot"),
             ("The sun", "bright"), ("Glass", "fragile"), ("Gold", "valuable"),
             ("Lead", "heavy"), ("Sugar", "sweet"), ("Lemon juice", "sour"),
             ("The desert", "dry"), ("Steel", "strong"), ("Snow", "white"),
             ("Coal", "black"), ("The ocean", "deep"), ("Honey", "sticky")]
    for s, p in facts:
        rows.append({"subset": "squad", "input": f"{s} is {p}.", "output": f"{s} is not {p}."})
    uses = [("knife", "cutting"), ("pen", "writing"), ("bed", "sleeping"),
            ("car", "driving"), ("oven", "baking"), ("broom", "sweeping"),
            ("ladder", "climbing"), ("spoon", "eating"), ("towel", "drying"),
            ("map", "navigation"), ("lamp", "lighting"), ("phone", "calling")]
    for o, u in uses:
        rows.append({"subset": "conceptnet", "input": f"A {o} is used for {u}.",
                     "output": f"A {o} is not used for {u}."})
    caps = [("Paris", "France"), ("Rome", "Italy"), ("Madrid", "Spain"),
            ("Berlin", "Germany"), ("Lisbon", "Portugal"), ("Vienna", "Austria"),
            ("Oslo", "Norway"), ("Athens", "Greece")]
    for c, n in caps:
        rows.append({"subset": "trex", "input": f"{c} is the capital of {n}.",
                     "output": f"{c} is not the capital of {n}."})
    people = [("Alan Turing", "London"), ("Marie Curie", "Warsaw"), ("Ada Lovelace", "London"),
              ("Niels Bohr", "Copenhagen"), ("Enrico Fermi", "Rome"), ("Kurt Godel", "Brno")]
    for p, c in people:
        rows.append({"subset": "googlere_birth", "input": f"{p} was born in {c}.",
                     "output": f"{p} was not born in {c}."})
    deaths = [("Alan Turing", "Wilmslow"), ("Marie Curie", "Passy"), ("Niels Bohr", "Copenhagen"),
              ("Enrico Fermi", "Chicago"), ("Kurt Godel", "Princeton")]
    for p, c in deaths:
        rows.append({"subset": "googlere_death", "input": f"{p} died in {c}.",
                     "output": f"{p} did not die in {c}."})
    return rows


ANTONYMS = [
    ("won", "lost"), ("hot", "cold"), ("big", "small"), ("up", "down"), ("open", "closed"),
    ("happy", "sad"), ("early", "late"), ("light", "dark"), ("fast", "slow"), ("rich", "poor"),
    ("strong", "weak"), ("young", "old"), ("heavy", "light"), ("long", "short"),
    ("wet", "dry"), ("full", "empty"), ("hard", "soft"), ("high", "low"), ("near", "far"),
    ("thick", "thin"), ("wide", "narrow"), ("clean", "dirty"), ("true", "false"),
    ("good", "bad"), ("inside", "outside"), ("push", "pull"), ("buy", "sell"),
    ("give", "take"), ("win", "lose"), ("before", "after"), ("above", "below"),
    ("add", "subtract"), ("accept", "reject"), ("arrive", "depart"), ("begin", "end"),
    ("borrow", "lend"), ("cheap", "expensive"), ("deep", "shallow"), ("enter", "exit"),
    ("friend", "enemy"), ("increase", "decrease"), ("inhale", "exhale"), ("major", "minor"),
    ("maximum", "minimum"), ("north", "south"), ("east", "west"), ("public", "private"),
    ("quiet", "loud"), ("safe", "dangerous"), ("single", "married"), ("smooth", "rough"),
    ("sweet", "sour"), ("tall", "short"), ("wild", "tame"), ("ancient", "modern"),
    ("happy", "angry"), ("calm", "busy"), ("brave", "shy"), ("warm", "wet"), ("loud", "dark"),
]
NOT_IN_WORDNET = {("happy", "angry"), ("calm", "busy"), ("brave", "shy"), ("warm", "wet"),
                  ("loud", "dark")}

SYNONYMS = [
    ("alleged", "supposed"), ("alleged", "assumed"), ("big", "large"), ("small", "little"),
    ("quick", "fast"), ("begin", "start"), ("end", "finish"), ("happy", "glad"),
    ("sad", "unhappy"), ("smart", "clever"), ("smart", "intelligent"), ("angry", "mad"),
    ("buy", "purchase"), ("help", "assist"), ("rich", "wealthy"), ("shut", "close"),
    ("quiet", "silent"), ("tired", "sleepy"), ("easy", "simple"), ("hard", "difficult"),
    ("choose", "select"), ("show", "display"), ("try", "attempt"), ("gift", "present"),
    ("car", "automobile"), ("home", "house"), ("kid", "child"), ("job", "occupation"),
    ("answer", "reply"), ("cry", "weep"), ("fix", "repair"), ("hide", "conceal"),
    ("keep", "retain"), ("near", "close"), ("old", "aged"), ("old", "elderly"),
    ("rude", "impolite"), ("scared", "afraid"), ("shy", "timid"), ("strange", "odd"),
    ("strange", "weird"), ("thin", "slim"), ("wrong", "incorrect"), ("brave", "courageous"),
    ("build", "construct"), ("cold", "chilly"), ("huge", "enormous"), ("mistake", "error"),
]

ANIMAL_SIZES = ["ant", "bee", "fly", "snail", "spider", "mouse", "frog", "hamster",
                "sparrow", "squirrel", "rat", "rabbit", "chicken", "cat", "duck", "koala",
                "fox", "raccoon", "beaver", "dog", "goat", "sheep", "wolf", "pig",
                "deer", "kangaroo", "lion", "tiger", "gorilla", "bear", "horse", "cow",
                "camel", "moose", "buffalo", "rhino", "hippo", "giraffe", "elephant", "whale"]

CAUSES = [
    ("The bottle was left open.", "The soda went flat."),
    ("It rained all night.", "The streets were flooded."),
    ("I forgot to set my alarm.", "I overslept."),
    ("The power went out.", "The room became dark."),
    ("She studied every day.", "She passed the exam."),
    ("The ice melted.", "The drink became watery."),
    ("He dropped the glass.", "The glass shattered."),
    ("The wind blew hard.", "The tree fell over."),
    ("I skipped breakfast.", "I was hungry by noon."),
    ("The road was icy.", "The car slid off the road."),
    ("The baby was tired.", "The baby fell asleep."),
    ("The milk was left out.", "The milk went sour."),
    ("He ran a marathon.", "His legs were sore."),
    ("The oven was too hot.", "The bread burned."),
    ("The team practiced hard.", "The team won the game."),
    ("I watered the plants.", "The plants grew."),
    ("The dog barked loudly.", "The neighbors woke up."),
    ("She left the door open.", "The cat escaped."),
    ("The battery died.", "The phone turned off."),
    ("He told a joke.", "Everyone laughed."),
    ("The river overflowed.", "The village was evacuated."),
    ("The price dropped.", "Sales increased."),
    ("The sun came out.", "The snow melted."),
    ("I spilled coffee on my shirt.", "My shirt was stained."),
    ("The bridge collapsed.", "Traffic was rerouted."),
    ("The tire was punctured.", "The tire went flat."),
    ("She lost her keys.", "She was locked out."),
    ("The store was closed.", "We went home empty-handed."),
    ("The child touched the stove.", "The child burned his hand."),
    ("The movie was boring.", "The audience left early."),
    ("He forgot his umbrella.", "He got wet in the rain."),
    ("The pipe burst.", "The basement flooded."),
    ("The soup was too salty.", "Nobody finished the soup."),
    ("The bus was late.", "I missed my meeting."),
    ("The fridge broke.", "The food spoiled."),
    ("She exercised daily.", "She became stronger."),
    ("The volcano erupted.", "Ash covered the town."),
    ("I turned on the heater.", "The room warmed up."),
    ("The paint was wet.", "My hand got paint on it."),
    ("The computer overheated.", "The computer shut down."),
    ("He ate spoiled fish.", "He got sick."),
    ("The crowd cheered.", "The singer smiled."),
    ("The kite string snapped.", "The kite flew away."),
    ("The candle was lit.", "The wax melted."),
    ("The shoes were too small.", "My feet hurt."),
    ("The speaker was too loud.", "My ears rang."),
    ("It snowed heavily.", "School was canceled."),
    ("The glass was full.", "The water spilled over."),
    ("The car ran out of gas.", "The car stopped."),
    ("The lights were turned off.", "The stars became visible."),
]

CONCEPTS = [
    ("guitars, pendulums, neutrinos", "They all involve oscillations."),
    ("a bee, a hummingbird, a helicopter", "They all can hover."),
    ("a clock, a compass, a sundial", "They all have dials."),
    ("ice, glass, diamonds", "They all are transparent."),
    ("a piano, a typewriter, a computer", "They all have keys."),
    ("a chef, a scientist, a pharmacist", "They all mix ingredients."),
    ("the moon, a ball, an orange", "They all are round."),
    ("a bat, a dolphin, a submarine", "They all use sonar."),
    ("a snake, a lobster, a tarantula", "They all shed their skin."),
    ("a dam, a battery, a spring", "They all store energy."),
    ("a cactus, a camel, a seed", "They all store water."),
    ("a map, a painting, a photograph", "They all are flat representations."),
    ("a violin, a bow, an archer", "They all involve strings."),
    ("bread, beer, yogurt", "They all are made by fermentation."),
    ("a lighthouse, a firefly, a screen", "They all emit light."),
    ("a tree, a person, a river", "They all have trunks or branches."),
    ("a spider, a fisherman, a goalkeeper", "They all use nets."),
    ("a crab, a tank, a turtle", "They all have armor."),
    ("a bell, a drum, a gong", "They all are struck to make sound."),
    ("a chess player, a general, a coach", "They all plan strategies."),
    ("a magnet, the earth, a compass needle", "They all have magnetic poles."),
    ("a feather, a leaf, a parachute", "They all fall slowly."),
    ("a sponge, a towel, paper", "They all absorb water."),
    ("a mirror, a lake, a window", "They all reflect images."),
    ("a key, a password, a fingerprint", "They all grant access."),
    ("a kangaroo, a frog, a flea", "They all jump."),
    ("a ship, a whale, an iceberg", "They all float in the sea."),
    ("a bridge, a tunnel, a ferry", "They all help cross obstacles."),
    ("a volcano, a kettle, a geyser", "They all release steam."),
    ("a diary, a blog, a memoir", "They all record personal experiences."),
    ("a seed, an egg, a bud", "They all can grow into something new."),
    ("a ladder, an elevator, a staircase", "They all help you go up."),
]

FORMALITY = [
    ("Please call once you get there", "Please call upon your arrival."),
    ("Thanks for the help", "Thank you for your assistance."),
    ("I gotta go now", "I must leave now."),
    ("Can you send me the file?", "Could you please send me the file?"),
    ("We wanna know what you think", "We would like to know your opinion."),
    ("The meeting got pushed back", "The meeting has been postponed."),
    ("Sorry for the late reply", "I apologize for the delayed response."),
    ("Let me know if you need anything", "Please inform me should you require anything."),
    ("I'm gonna check it out", "I will examine it."),
    ("He's kinda upset", "He is somewhat upset."),
    ("Tell me what's up", "Please inform me of the situation."),
    ("We got your email", "We have received your email."),
    ("It's a big deal", "It is a significant matter."),
    ("I don't get it", "I do not understand."),
    ("Give me a sec", "Please allow me a moment."),
    ("She's super smart", "She is highly intelligent."),
    ("Lots of people came", "Many people attended."),
    ("They're figuring it out", "They are determining a solution."),
    ("That's not okay", "That is unacceptable."),
    ("We need to talk about the money", "We need to discuss the finances."),
    ("Hit me up later", "Please contact me later."),
    ("The test was really hard", "The examination was very difficult."),
    ("I can't make it tomorrow", "I will be unable to attend tomorrow."),
    ("He got fired", "He was dismissed from his position."),
    ("Check out the attached stuff", "Please review the attached documents."),
    ("We messed up the order", "We made an error with the order."),
    ("Don't forget to bring your ID", "Please remember to bring your identification."),
    ("Things are looking up", "The situation is improving."),
    ("I'll get back to you", "I will respond to you shortly."),
    ("Just wanted to say hi", "I wanted to extend my greetings."),
]


def sst_rows():
    pos = ["wonderful", "moving", "charming", "brilliant", "delightful", "gripping",
           "beautiful", "funny", "smart", "touching"]
    neg = ["dull", "boring", "clumsy", "tedious", "awful", "lifeless", "messy",
           "forgettable", "shallow", "tiresome"]
    subjects = ["The film", "This movie", "The story", "The script"]
    rows = []
    for split, subs in (("train", subjects), ("dev", ["The plot", "Its ending"])):
        for i, s in enumerate(subs):
            for j, (p, n) in enumerate(zip(pos, neg)):
                rows.append({"sentence": f"{s} is {p}.", "label": 1, "split": split,
                             "full_sentence": True})
                rows.append({"sentence": f"{s} is {n}.", "label": 0, "split": split,
                             "full_sentence": True})
        # Long sentences and constituents are filtered out by the generator.
        rows.append({"sentence": "The film is small in scope , yet perfectly formed and "
                                 "remarkably satisfying to watch from start to end .",
                     "label": 1, "split": split, "full_sentence": True})
        rows.append({"sentence": "perfectly formed", "label": 1, "split": split,
                     "full_sentence": False})
    return rows


def stsb_rows():
    subj = ["A man", "A woman", "A child", "A dog", "The cat", "Two boys", "A girl", "An old man"]
    acts = ["is smoking", "is skating", "is cooking", "is running", "is reading a book",
            "is playing guitar", "is swimming", "is sleeping"]
    rows = []
    for split, rng in (("train", range(0, 6)), ("dev", range(6, 8))):
        for i in rng:
            s = subj[i]
            for j in range(len(acts)):
                a, b = acts[j], acts[(j + 1) % len(acts)]
                rows.append({"sentence1": f"{s} {a}.", "sentence2": f"{s} {a}.",
                             "score": 5.0, "split": split})
                rows.append({"sentence1": f"{s} {a}.", "sentence2": f"{subj[(i + 3) % 8]} {b}.",
                             "score": 0.2, "split": split})
                mid = [1.4, 2.5, 3.6, 4.4][(i + j) % 4]
                rows.append({"sentence1": f"{s} {a}.", "sentence2": f"{s} {b}.",
                             "score": mid, "split": split})
        rows.append({"sentence1": "A man is smoking a very long cigar outside the old "
                                  "train station tonight.", "sentence2": "A man is smoking.",
                     "score": 3.2, "split": split})
    return rows


def wic_rows():
    items = [
        ("approach", "Approach a task.", "To approach the city.", False),
        ("bank", "She sat on the river bank.", "The bank of the stream was muddy.", True),
        ("bank", "He deposited cash at the bank.", "The river bank flooded.", False),
        ("bark", "The dog began to bark.", "The tree bark was rough.", False),
        ("light", "Turn on the light.", "The light from the lamp was dim.", True),
        ("light", "The bag is light.", "Turn off the light.", False),
        ("run", "I run every morning.", "She runs in the park.", True),
        ("run", "He will run the company.", "They run along the beach.", False),
        ("play", "The children play outside.", "We play in the garden.", True),
        ("play", "We saw a play.", "Kids play football.", False),
        ("cold", "I caught a cold.", "She has a bad cold.", True),
        ("cold", "The water is cold.", "He caught a cold.", False),
        ("pitch", "He threw a fast pitch.", "The pitch was a curveball.", True),
        ("pitch", "The singer hit a high pitch.", "The pitcher made a pitch.", False),
        ("book", "Book a table for two.", "I will book a flight.", True),
        ("book", "Read the book.", "Book a room.", False),
        ("fair", "The judge was fair.", "That seems fair to me.", True),
        ("fair", "We went to the fair.", "It was a fair decision.", False),
        ("match", "Light a match.", "He struck a match.", True),
        ("match", "The match ended in a draw.", "Strike the match.", False),
        ("watch", "Watch the movie.", "We watch the birds.", True),
        ("watch", "My watch stopped.", "Watch your step.", False),
        ("ring", "She wore a gold ring.", "The ring was on her finger.", True),
        ("ring", "Ring the bell.", "Her ring was stolen.", False),
    ]
    rows = []
    for k, (w, a, b, same) in enumerate(items):
        rows.append({"word": w, "sentence1": a, "sentence2": b, "label": same,
                     "split": "train"})
    # Dev items reuse words with new contexts.
    dev = [
        ("spring", "Flowers bloom in spring.", "Spring is my favorite season.", True),
        ("spring", "The spring in the mattress broke.", "We met in the spring.", False),
        ("date", "We set a date for the wedding.", "The date is fixed.", True),
        ("date", "I ate a sweet date.", "What is the date today?", False),
        ("bat", "He swung the bat.", "The bat hit the ball.", True),
        ("bat", "A bat flew out of the cave.", "He lost his baseball bat.", False),
        ("seal", "Seal the envelope.", "Please seal the box.", True),
        ("seal", "A seal swam by.", "Seal the jar.", False),
    ]
    for w, a, b, same in dev:
        rows.append({"word": w, "sentence1": a, "sentence2": b, "label": same, "split": "dev"})
    rows.append({"word": "bank", "sentence1": "The small bank on the corner of the main street "
                 "was closed all week.", "sentence2": "The bank was closed.", "label": True,
                 "split": "train"})
    return rows


def sha256(path):
    h = hashlib.sha256()
    with open(path, "rb") as f:
        h.update(f.read())
    return h.hexdigest()


def main():
    build_freq_and_nouns()
    write("inflections.tsv", "# singular\tplural reference list\n" +
          "".join(f"{s}\t{p}\n" for s, p in INFLECTIONS))
    write("cefr_lexicon.tsv", "# word\tcefr\tcategory\n" +
          "".join(f"{w}\t{l}\t{c}\n" for w, l, c in LEXICON))
    write("cmudict.txt", PRON)
    for lang, table in TRANSLATIONS.items():
        lines = [f"# english\t{lang}\n"]
        for en, trs in table.items():
            lines.extend(f"{en}\t{t}\n" for t in trs)
        write(f"wiktionary_{lang}.tsv", "".join(lines))
    write_jsonl("cola.jsonl", cola_rows())
    write("hans_passive.tsv", "# active\tpassive\n" +
          "".join(f"{a}\t{p}\n" for a, p in hans_pairs()))
    write_jsonl("negated_lama.jsonl", lama_rows())
    write("olmpics_antonyms.tsv", "".join(f"{a}\t{b}\n" for a, b in ANTONYMS))
    write("wordnet_antonyms.tsv",
          "".join(f"{a}\t{b}\n" for a, b in ANTONYMS if (a, b) not in NOT_IN_WORDNET))
    write("olmpics_synonyms.tsv", "".join(f"{a}\t{b}\n" for a, b in SYNONYMS))
    comp = []
    for i, a in enumerate(ANIMAL_SIZES):
        for j, b in enumerate(ANIMAL_SIZES):
            if i < j:
                first, second = (a, b) if (i + j) % 2 else (b, a)
                comp.append({"a": first, "b": second, "larger": b})
    write_jsonl("olmpics_comparison.jsonl", comp)
    write_jsonl("bigbench_cause_effect.jsonl", [{"cause": c, "effect": e} for c, e in CAUSES])
    write_jsonl("bigbench_novel_concepts.jsonl",
                [{"input": i, "target": t} for i, t in CONCEPTS])
    write("formality.tsv", "# informal\tformal\n" +
          "".join(f"{a}\t{b}\n" for a, b in FORMALITY))
    write_jsonl("sst.jsonl", sst_rows())
    write_jsonl("stsb.jsonl", stsb_rows())
    write_jsonl("wic.jsonl", wic_rows())

    sources = {
        "wikitext_freq": ("wikitext_freq.tsv", "freq-table"),
        "nouns": ("nouns.tsv", "tsv-lexicon"),
        "mass_nouns": ("mass_nouns.txt", "tsv-lexicon"),
        "cefr_lexicon": ("cefr_lexicon.tsv", "tsv-lexicon"),
        "cmudict": ("cmudict.txt", "pron-dict"),
        "wiktionary_de": ("wiktionary_de.tsv", "pair-tsv"),
        "wiktionary_es": ("wiktionary_es.tsv", "pair-tsv"),
        "wiktionary_fr": ("wiktionary_fr.tsv", "pair-tsv"),
        "cola": ("cola.jsonl", "labeled-jsonl"),
        "hans_passive": ("hans_passive.tsv", "pair-tsv"),
        "negated_lama": ("negated_lama.jsonl", "labeled-jsonl"),
        "olmpics_antonyms": ("olmpics_antonyms.tsv", "pair-tsv"),
        "wordnet_antonyms": ("wordnet_antonyms.tsv", "pair-tsv"),
        "olmpics_synonyms": ("olmpics_synonyms.tsv", "pair-tsv"),
        "olmpics_comparison": ("olmpics_comparison.jsonl", "labeled-jsonl"),
        "bigbench_cause_effect": ("bigbench_cause_effect.jsonl", "labeled-jsonl"),
        "bigbench_novel_concepts": ("bigbench_novel_concepts.jsonl", "labeled-jsonl"),
        "formality": ("formality.tsv", "pair-tsv"),
        "sst": ("sst.jsonl", "labeled-jsonl"),
        "stsb": ("stsb.jsonl", "labeled-jsonl"),
        "wic": ("wic.jsonl", "labeled-jsonl"),
    }
    manifest = {"entries": {}}
    for sid, (path, fmt) in sorted(sources.items()):
        manifest["entries"][sid] = {"path": path, "format": fmt,
                                    "sha256": sha256(os.path.join(HERE, path))}
    write("manifest.json", json.dumps(manifest, indent=2, sort_keys=True) + "\n")


if __name__ == "__main__":
    main()
