#!/usr/bin/env python3
"""Regenerates the frozen fixtures under tests/data.

Needs faker, babel and transformers. Outputs are deterministic for a given
set of package versions; the tests only read the files this writes.
"""

import argparse
import os
import pathlib
import random
import sys
import unicodedata

import faker
from babel import Locale
from transformers import BertTokenizerLegacy

LOCALES = [
    "en_US", "en_GB", "de_DE", "fr_FR", "es_ES", "es_MX", "it_IT", "pt_BR", "nl_NL", "sv_SE",
    "da_DK", "no_NO", "fi_FI", "pl_PL", "cs_CZ", "sk_SK", "hu_HU", "ro_RO", "hr_HR", "sl_SI",
    "lt_LT", "lv_LV", "et_EE", "tr_TR", "el_GR", "ru_RU", "uk_UA", "bg_BG", "ka_GE", "hy_AM",
    "he_IL", "ar_EG", "fa_IR", "hi_IN", "bn_BD", "ta_IN", "ne_NP", "th_TH", "vi_VN", "id_ID",
    "zh_CN", "zh_TW", "ja_JP", "ko_KR", "az_AZ", "is_IS", "ga_IE", "mt_MT", "fil_PH", "sw",
]

# Inputs that stress cleanup, normalization and segmentation.
EDGE_CASES = [
    "",
    "   ",
    "Hello, world!",
    "state-of-the-art",
    "unaffable",
    "Café CAFÉ café CAFÉ",
    "ΣΑΣ σας ΟΔΥΣΣΕΥΣ Σ. ΣΣ",
    "İstanbul ıi İI",
    "straße STRASSE ß ẞ",
    "ﬁne ﬂour ﬀ",
    "Ǆemal ǅ ǆ",
    "ÅNGSTRÖM Ω Å K",
    "한국어 텍스트 가나다",
    "각 한",
    "東京都 北京市 你好世界",
    "𠀀𠀁 𪜀 𫝀 𬺰",
    "ＡＢＣ　ｆｕｌｌｗｉｄｔｈ！",
    "tab\there\tand nbsp\u00a0em\u2003ideographic\u3000space",
    "zero\u200bwidth\u200cjoin\u200dners\ufeffbom",
    "soft\u00adhyphen and line\u2028para\u2029sep",
    "ctrl\x01\x02\x7fchars\x85next\x1f\x0bvt\x0cff",
    "bad\ufffdreplacement \u0000 nul",
    "emoji 😀👍🏽 🇪🇸 ❤️ ✓",
    "math ∑∫√∞ ≤≥ ± × ÷ ‰ € £ ¥ ₹",
    "quotes “double” ‘single’ «guillemets» „low“",
    "dashes \u2013 \u2014 \u2015 \u2010 \u2011 \u2012",
    "ellipsis\u2026 bullet \u2022 section \u00a7 pilcrow \u00b6",
    "¿Qué tal? ¡Muy bien!",
    "Ελληνικά: ά έ ή ί ό ύ ώ ΐ ΰ",
    "Русский текст: ёжик Йошкар-Ола",
    "हिन्दी भाषा क्षत्रिय",
    "বাংলা ভাষা",
    "தமிழ் மொழி",
    "ภาษาไทย สวัสดี",
    "עִבְרִית",
    "العَرَبِيَّة مرحباً",
    "Tiếng Việt có dấu",
    "a̐éö̲ combining stack ẹ́̂",
    "x" * 100,
    "y" * 101,
    "z" * 250,
    "antidisestablishmentarianism pneumonoultramicroscopicsilicovolcanoconiosis",
    "foo[CLS]bar a [SEP] b [MASK]ed [cls] [Mask] [PAD][UNK]",
    "[[MASK]] [MASḰ]",
    "email@example.com https://example.org/path?q=1&r=2#frag",
    "C++ C# F# .NET node.js 3.14159 1,000,000 42%",
    "don't won't it's O'Neill",
    "ALL CAPS SENTENCE WITH NUMBERS 123 AND SYMBOLS $%^&*",
    "mixed日本語and English混在",
    "𝐁𝐨𝐥𝐝 𝑰𝒕𝒂𝒍𝒊𝒄 ℌ𝔢𝔩𝔩𝔬",
    "Ⅻ ⅻ ① ⑳ ²³ ½",
    "İ̇ İ",
    "ΑΣ ΑΣΑ ΑΣ. Α.Σ ΑΣ'Α",
    "Ő Ű ő ű Ł ł Đ đ Ø ø Æ æ Œ œ Þ þ",
]


def build_corpus(rng: random.Random, lines: int) -> list[str]:
    out = list(EDGE_CASES)
    fakers = {}
    for loc in LOCALES:
        try:
            f = faker.Faker(loc)
        except AttributeError:
            continue
        f.seed_instance(rng.randrange(1 << 30))
        fakers[loc] = f
    kinds = ["sentence", "name", "address", "company", "city", "job", "text"]
    locs = sorted(fakers)
    while len(out) < lines:
        f = fakers[locs[len(out) % len(locs)]]
        kind = kinds[rng.randrange(len(kinds))]
        try:
            value = f.text(160) if kind == "text" else str(getattr(f, kind)())
        except AttributeError:
            value = f.sentence()
        value = value.replace("\r", " ").replace("\n", " ")
        out.append(value)
    # CLDR display names give a spread of scripts not all covered above.
    for code in ["am", "km", "lo", "my", "si", "bo", "dz", "ml", "kn", "te", "gu", "pa", "or", "mn", "ug"]:
        loc = Locale.parse(code)
        names = [n for n in list(loc.languages.values())[:40] if n]
        out.append(" ".join(names).replace("\n", " "))
    return out


# Curated English-Spanish pairs; some deliberately collide (one-to-many,
# existing English tokens, accent variants).
HAND_LEXICON = """\
house casa
home casa
dog perro
cat gato
big grande
large grande
small pequeño
little pequeño
water agua
day día
night noche
world mundo
city ciudad
country país
people gente
man hombre
woman mujer
child niño
mother madre
father padre
daughter hija
son hijo
friend amigo
work trabajo
job trabajo
time tiempo
year año
week semana
month mes
book libro
word palabra
language idioma
street calle
school escuela
doctor doctor
community comunidad
old viejo
new nuevo
necessary necesario
important importantes
main principal
before antes
more más
ground suelo
article artículo
decision decisión
visit visita
expression expresión
personal personal
public público
to be ser
hot dog perrito
ice cream helado
good morning buenos
is está
this esta
thank you gracias
please|por favor
because porque
between entre
always siempre
never nunca
nothing nada
something algo
everything todo
also también
very muy
much mucho
many muchos
good bueno
bad malo
beautiful hermoso
pretty bonita
question pregunta
answer respuesta
history historia
government gobierno
company empresa
system sistema
problem problema
program programa
group grupo
number número
part parte
place lugar
case caso
point punto
form forma
life vida
hand mano
eye ojo
head cabeza
heart corazón
side lado
door puerta
window ventana
table mesa
chair silla
bed cama
food comida
bread pan
wine vino
money dinero
car coche
train tren
road camino
river río
sea mar
mountain montaña
tree árbol
flower flor
sun sol
moon luna
star estrella
sky cielo
rain lluvia
snow nieve
wind viento
fire fuego
earth tierra
light luz
color color
red rojo
blue azul
green verde
white blanco
black negro
again|otra vez
"""


def build_lexicon() -> list[tuple[str, str]]:
    pairs = []
    for line in HAND_LEXICON.splitlines():
        if "|" in line:  # multiword target, kept to exercise the skip path
            src, dst = line.split("|")
        else:
            src, _, dst = line.rpartition(" ")
        pairs.append((src, dst))
    en, es = Locale("en"), Locale("es")
    for table in ("months", "days"):
        src = getattr(en, table)["format"]["wide"]
        dst = getattr(es, table)["format"]["wide"]
        for key in src:
            pairs.append((src[key], dst[key]))
    for code, name in sorted(en.languages.items()):
        target = es.languages.get(code)
        if target and " " not in target and " " not in name and name.isalpha():
            pairs.append((name, target))
    for code, name in sorted(en.territories.items()):
        target = es.territories.get(code)
        if target and " " not in target and code.isalpha() and name.replace(" ", "").isalpha():
            pairs.append((name, target))
    return pairs


def hexs(text: str) -> str:
    return " ".join(f"{ord(c):X}" for c in text)


def unicode_cases(rng: random.Random) -> list[str]:
    """NFC, NFD and lower() for every code point they change, plus random
    mixed strings that exercise reordering, composition and final sigma."""
    rows = []
    interesting = []
    for cp in range(0x110000):
        if 0xD800 <= cp <= 0xDFFF:
            continue
        c = chr(cp)
        if unicodedata.normalize("NFD", c) != c or c.lower() != c or unicodedata.combining(c):
            interesting.append(c)
            rows.append(c)
    pool = interesting + list("aeiouAEIOUΣσς '.-") + ["\u1100", "\u1161", "\u11a8", "\uac00"]
    for _ in range(3000):
        rows.append("".join(rng.choice(pool) for _ in range(rng.randint(2, 8))))
    out = [f"# python {sys.version.split()[0]} unicodedata {unicodedata.unidata_version}"]
    for text in rows:
        out.append("\t".join([hexs(text), hexs(unicodedata.normalize("NFC", text)),
                              hexs(unicodedata.normalize("NFD", text)), hexs(text.lower())]))
    return out


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=str(pathlib.Path(__file__).resolve().parent.parent / "tests" / "data"))
    ap.add_argument("--lines", type=int, default=1200)
    args = ap.parse_args()
    out = pathlib.Path(args.out)
    rng = random.Random(20240611)

    vocab_path = out / "bert-base-uncased-vocab.txt"
    tok = BertTokenizerLegacy(str(vocab_path), do_lower_case=True)

    corpus = build_corpus(rng, args.lines)
    for line in corpus:
        assert "\n" not in line and "\r" not in line
    with open(out / "multilingual_corpus.txt", "w", encoding="utf-8", newline="\n") as f:
        f.write("".join(line + "\n" for line in corpus))
    with open(out / "multilingual_corpus.tokens", "w", encoding="utf-8", newline="\n") as ft, \
            open(out / "multilingual_corpus.ids", "w", encoding="utf-8", newline="\n") as fi:
        for line in corpus:
            tokens = tok.tokenize(line)
            ft.write(" ".join(tokens) + "\n")
            fi.write(" ".join(str(i) for i in tok.convert_tokens_to_ids(tokens)) + "\n")

    with open(out / "unicode_cases.tsv", "w", encoding="utf-8", newline="\n") as f:
        f.write("".join(row + "\n" for row in unicode_cases(rng)))

    es = faker.Faker("es_ES")
    es.seed_instance(7)
    spanish = [es.text(300).replace("\n", " ") for _ in range(400)]
    with open(out / "spanish_corpus.txt", "w", encoding="utf-8", newline="\n") as f:
        f.write("".join(line + "\n" for line in spanish))

    with open(out / "en_es_sample.tsv", "w", encoding="utf-8", newline="\n") as f:
        f.write("# English-Spanish sample lexicon: curated pairs plus CLDR month, day,\n")
        f.write("# language and territory names.\n")
        for src, dst in build_lexicon():
            f.write(f"{src}\t{dst}\n")


if __name__ == "__main__":
    # Some faker providers iterate sets, so pin string hashing.
    if os.environ.get("PYTHONHASHSEED") != "0":
        os.execve(sys.executable, [sys.executable, *sys.argv], {**os.environ, "PYTHONHASHSEED": "0"})
    main()
