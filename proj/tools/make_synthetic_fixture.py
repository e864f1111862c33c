#!/usr/bin/env python3
# Copyright 2026 The bitext-mine Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Builds the synthetic bilingual wiki fixture used by the end-to-end tests.

Twenty pseudo-Polish articles, each with an English counterpart, share a
known subset of translated sentences. Everything else is noise. Output:

  pl/<Title>.html, en/<Title>.html   pages served as fixture://<lang>/<Title>
  lexicon.tsv                         pl -> en gloss dictionary (incomplete)
  synonyms.en.tsv                     English synonym pairs used in the text
  ground_truth.tsv                    planted pairs, pl<TAB>en, as segmented
  counts.json                         per-article sentence and pair counts
  pipeline.json                       pipeline config for this fixture
"""

import argparse
import html
import json
import random
import shutil
from pathlib import Path

EN_WORDS = """
river mountain valley city village castle church bridge road forest lake
island coast harbour market square tower wall gate garden field farm mill
king queen prince bishop army soldier war battle peace treaty law court
council parliament election party leader government state province region
border trade merchant ship sailor fisherman bread grain wheat salt iron
coal gold silver copper stone wood brick glass paper book letter song poem
painter music theatre school student teacher university library museum
doctor hospital disease winter summer spring autumn rain snow wind storm
flood fire harvest north south east west morning evening century year
family father mother brother sister child wife husband friend enemy
horse cattle sheep wolf bear eagle fish bird tree flower grass river
railway station train engine factory worker industry company bank money
price tax coin road path journey traveller pilgrim monk abbey chapel
monument statue grave cemetery ruin fortress siege victory defeat
history language dialect name title crown throne palace hall kitchen
big large start begin show display use employ buy purchase help assist
fast quick old new small long short high low early late famous ancient
northern southern eastern western royal local public private rich poor
built founded destroyed rebuilt crossed ruled defended attacked sold
bought painted wrote sang opened closed moved named described
""".split()

# Function words and their Polish counterparts in the gloss lexicon.
FUNCTION_WORDS = [
    ("the", "ten"), ("of", "od"), ("and", "oraz"), ("in", "w"), ("on", "na"),
    ("with", "z"), ("to", "do"), ("for", "dla"), ("was", "był"), ("by", "przez"),
    ("near", "przy"), ("after", "po"),
]

SYNONYM_PAIRS = [
    ("big", "large"), ("start", "begin"), ("show", "display"), ("use", "employ"),
    ("buy", "purchase"), ("help", "assist"), ("fast", "quick"),
    ("old", "ancient"), ("built", "constructed"), ("famous", "renowned"),
    ("river", "stream"), ("city", "town"), ("war", "conflict"),
    ("road", "route"), ("king", "monarch"), ("village", "hamlet"),
]

SUFFIXES = ["", "a", "y", "ów", "ami", "ę", "ą"]
ONSETS = ["b", "c", "cz", "d", "g", "k", "l", "ł", "m", "n", "p", "pr", "r",
          "s", "sz", "st", "t", "w", "wr", "z", "ż", "dź", "ś", "ch", "gr", "kr"]
VOWELS = ["a", "e", "i", "o", "u", "y", "ó", "ę", "ą"]
CODAS = ["", "", "n", "k", "sk", "ń", "ć", "r", "ł", "w", "st"]

# (planted pairs, pl noise, en noise) per article, uneven on purpose: a few
# close translations, many articles that barely overlap.
LAYOUT = [
    (14, 10, 6), (2, 18, 22), (12, 3, 3), (3, 15, 9), (4, 8, 16),
    (1, 16, 20), (5, 20, 8), (2, 14, 6), (10, 6, 6), (14, 9, 12),
    (3, 18, 8), (2, 14, 8), (12, 16, 14), (3, 8, 9), (3, 15, 7),
    (13, 7, 6), (4, 6, 5), (2, 14, 6), (6, 12, 9), (2, 30, 9),
]


class Vocab:
    def __init__(self, rng):
        self.rng = rng
        self.en = sorted(set(EN_WORDS) | {s for _, s in SYNONYM_PAIRS})
        self.pl = {}
        used = {pl for _, pl in FUNCTION_WORDS}
        for word in self.en:
            lemma = self._lemma(len(word))
            while lemma in used:
                lemma = self._lemma(len(word))
            used.add(lemma)
            self.pl[word] = lemma
        self.fn_pl = dict(FUNCTION_WORDS)
        # Inflected forms the gloss dictionary does not know.
        self.missing = set()
        for word in self.en:
            for suf in SUFFIXES[1:]:
                if rng.random() < 0.12:
                    self.missing.add(self.pl[word] + suf)

    def _lemma(self, target_len):
        out = ""
        while len(out) < max(3, target_len - 1):
            out += (self.rng.choice(ONSETS) + self.rng.choice(VOWELS)
                    + self.rng.choice(CODAS))
        return out

    def pl_form(self, en_word):
        if en_word in self.fn_pl:
            return self.fn_pl[en_word]
        return self.pl[en_word] + self.rng.choice(SUFFIXES)

    def lexicon_lines(self):
        rows = []
        for en, pl in self.fn_pl.items():
            rows.append((pl, en))
        for en in self.en:
            for suf in SUFFIXES:
                form = self.pl[en] + suf
                if form not in self.missing:
                    rows.append((form, en))
        rows.sort()
        return [f"{pl}\t{en}\t1.000000" for pl, en in rows]


def capitalize(s):
    return s[:1].upper() + s[1:]


def en_sentence(rng, vocab, n_content):
    content = [rng.choice(vocab.en) for _ in range(n_content)]
    words = []
    for i, w in enumerate(content):
        if i > 0 and rng.random() < 0.3:
            words.append(rng.choice(FUNCTION_WORDS)[0])
        words.append(w)
    return words


def planted_pair(rng, vocab, synonyms):
    words = en_sentence(rng, vocab, rng.randint(5, 13))
    pl = [vocab.pl_form(w) for w in words]
    en = list(words)
    # Word order differs a little between the languages.
    if rng.random() < 0.4 and len(pl) > 3:
        k = rng.randrange(len(pl) - 1)
        pl[k], pl[k + 1] = pl[k + 1], pl[k]
    # The English side words one content word differently.
    if rng.random() < 0.35:
        slots = [i for i, w in enumerate(en) if w in synonyms]
        if slots:
            i = rng.choice(slots)
            en[i] = synonyms[en[i]]
    return capitalize(" ".join(pl)) + ".", capitalize(" ".join(en)) + "."


def noise_pair(rng, vocab):
    pl = [vocab.pl_form(w) for w in en_sentence(rng, vocab, rng.randint(4, 13))]
    en = en_sentence(rng, vocab, rng.randint(4, 13))
    return capitalize(" ".join(pl)) + ".", capitalize(" ".join(en)) + "."


def near_miss(rng, vocab, pl_words_en):
    # Comparable-corpus filler: an English sentence that reuses under half
    # of a Polish noise sentence's content.
    keep = [w for w in pl_words_en if rng.random() < 0.35]
    extra = en_sentence(rng, vocab, max(3, len(pl_words_en) - len(keep)))
    words = keep + extra
    rng.shuffle(words)
    return capitalize(" ".join(words)) + "."


def interleave(rng, planted, noise):
    out = list(planted)
    for item in noise:
        out.insert(rng.randint(0, len(out)), item)
    return out


def paragraphs(rng, sentences):
    paras, i = [], 0
    while i < len(sentences):
        n = rng.randint(2, 5)
        paras.append(sentences[i:i + n])
        i += n
    return paras


def page(lang, title, paras, links, other_lang, other_title, rng):
    heading = "Przypisy" if lang == "pl" else "References"
    nav = "".join(
        f'<li><a href="fixture://{lang}/{t}">{html.escape(t)}</a></li>'
        for t in ("Strona_główna" if lang == "pl" else "Main_Page", "Losuj" if lang == "pl" else "Random")
    )
    body = []
    link_iter = iter(links)
    for k, para in enumerate(paras):
        parts = []
        for j, sent in enumerate(para):
            text = html.escape(sent, quote=False)
            link = next(link_iter, None)
            if link:
                # Wrap the sentence's first word in an in-body link.
                first, _, rest = text.partition(" ")
                text = f'<a href="fixture://{lang}/{link}">{first}</a> {rest}'
            if rng.random() < 0.2:
                text += f'<sup class="reference"><a href="#cite-{k}-{j}">[{k + 1}]</a></sup>'
            parts.append(text)
        body.append("<p>" + " ".join(parts) + "</p>")
        if k == 1:
            body.append(f"<p>https://example.org/{lang}/{k}</p>")
    infobox = (
        '<table class="infobox"><tr><th>Region</th><td>Północ 12 km²</td></tr>'
        '<tr><th>Rok</th><td>1410</td></tr></table>'
    )
    return f"""<!DOCTYPE html>
<html lang="{lang}">
<head><meta charset="utf-8"><title>{html.escape(title)} - Wiki</title></head>
<body>
<div id="mw-navigation"><nav><ul>{nav}</ul></nav></div>
<h1 id="firstHeading">{html.escape(title.replace("_", " "))}</h1>
<div id="mw-content-text">
{infobox}
{chr(10).join(body)}
<h2>{heading}</h2>
<ol class="references"><li>Kowalski J. (1999). Dzieje. Warszawa.</li></ol>
<p>Bibliografia uzupełniająca, której nie należy włączać do korpusu.</p>
</div>
<div id="p-lang"><ul><li class="interlanguage-link"><a hreflang="{other_lang}" href="fixture://{other_lang}/{other_title}">{other_lang}</a></li></ul></div>
</body>
</html>
"""


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="tests/fixtures/synthetic")
    ap.add_argument("--seed", type=int, default=20140601)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    vocab = Vocab(rng)
    synonyms = {a: b for a, b in SYNONYM_PAIRS}

    out = Path(args.out)
    for sub in ("pl", "en"):
        if (out / sub).exists():
            shutil.rmtree(out / sub)
        (out / sub).mkdir(parents=True)

    titles = []
    used = set()
    while len(titles) < len(LAYOUT):
        en_t = capitalize(rng.choice(vocab.en)) + "_" + rng.choice(vocab.en)
        pl_t = capitalize(vocab.pl[en_t.split("_")[0].lower()]) + "_" + vocab.pl[en_t.split("_")[1]]
        if pl_t in used or en_t in used:
            continue
        used.update((pl_t, en_t))
        titles.append((pl_t, en_t))

    truth = []
    counts = {"articles": [], "totals": {}}
    for idx, ((n_planted, n_pl_noise, n_en_noise), (pl_t, en_t)) in enumerate(zip(LAYOUT, titles)):
        planted = [planted_pair(rng, vocab, synonyms) for _ in range(n_planted)]
        pl_noise, en_noise = [], []
        for _ in range(n_pl_noise):
            words = en_sentence(rng, vocab, rng.randint(4, 13))
            pl_noise.append(capitalize(" ".join(vocab.pl_form(w) for w in words)) + ".")
            if len(en_noise) < n_en_noise and rng.random() < 0.3:
                en_noise.append(near_miss(rng, vocab, words))
        while len(en_noise) < n_en_noise:
            en_noise.append(noise_pair(rng, vocab)[1])

        pl_side = [p for p, _ in planted]
        en_side = [e for _, e in planted]
        # A few adjacent planted translations appear in swapped order.
        for k in range(len(en_side) - 1):
            if rng.random() < 0.15:
                en_side[k], en_side[k + 1] = en_side[k + 1], en_side[k]
        pl_all = interleave(rng, pl_side, pl_noise)
        en_all = interleave(rng, en_side, en_noise)
        assert len(set(pl_all)) == len(pl_all) and len(set(en_all)) == len(en_all)

        # The seed links to every other article, and to one page without an
        # English counterpart and one page that does not exist.
        if idx == 0:
            links = [t for t, _ in titles[1:]] + ["Bez_odpowiednika", "Brak_strony"]
        else:
            links = [titles[(idx + 1) % len(titles)][0]]
        assert len(pl_all) >= len(links)
        pl_paras = paragraphs(rng, pl_all)
        en_paras = paragraphs(rng, en_all)
        (out / "pl" / f"{pl_t}.html").write_text(
            page("pl", pl_t, pl_paras, links, "en", en_t, rng), encoding="utf-8")
        (out / "en" / f"{en_t}.html").write_text(
            page("en", en_t, en_paras, [], "pl", pl_t, rng), encoding="utf-8")

        truth.extend(planted)
        counts["articles"].append({
            "pl_title": pl_t.replace("_", " "),
            "en_title": en_t.replace("_", " "),
            "src_sents": len(pl_all),
            "tgt_sents": len(en_all),
            "planted": n_planted,
        })

    orphan = page("pl", "Bez_odpowiednika",
                  [["Ten artykuł nie ma odpowiednika."]], [], "de", "Ohne", rng)
    (out / "pl" / "Bez_odpowiednika.html").write_text(orphan, encoding="utf-8")

    for key in ("src_sents", "tgt_sents", "planted"):
        counts["totals"][key] = sum(a[key] for a in counts["articles"])

    (out / "lexicon.tsv").write_text("\n".join(vocab.lexicon_lines()) + "\n", encoding="utf-8")
    syn_lines = []
    for a, b in SYNONYM_PAIRS:
        syn_lines += [f"{a}\t{b}", f"{b}\t{a}"]
    (out / "synonyms.en.tsv").write_text("\n".join(sorted(syn_lines)) + "\n", encoding="utf-8")
    (out / "ground_truth.tsv").write_text(
        "".join(f"{p}\t{e}\n" for p, e in truth), encoding="utf-8")
    (out / "counts.json").write_text(json.dumps(counts, indent=2, ensure_ascii=False) + "\n",
                                     encoding="utf-8")

    config = {
        "source_lang": "pl",
        "target_lang": "en",
        "paths": {"out_dir": "out", "fixtures_dir": "."},
        "crawl": {"seed": f"fixture://pl/{titles[0][0]}", "max_articles": len(LAYOUT)},
        "textproc": {
            "abbreviations_source": "../../../data/abbreviations.pl",
            "abbreviations_target": "../../../data/abbreviations.en",
            "stopwords_target": "../../../data/stopwords.en",
            "synonyms_target": "synonyms.en.tsv",
        },
        "aligner": {"lexicon": "lexicon.tsv"},
        "translator": {"engine": "gloss", "lexicon": "lexicon.tsv"},
        "filter": {"tiers_file": "../../../data/tiers.txt", "window": "auto"},
        "random_seed": 1,
    }
    (out / "pipeline.json").write_text(json.dumps(config, indent=2) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()
