"""Writes sample_10k.txt: 10,000 synthetic tokenized sentences.

Words are built from a small syllable inventory with shared suffixes and
drawn from a Zipf-like distribution, so BPE has real structure to find.
"""
import random

rng = random.Random(20161114)
onsets = ["", "b", "d", "g", "k", "l", "m", "n", "p", "r", "s", "t", "v", "ch", "sh", "th", "pr", "st", "tr"]
vowels = ["a", "e", "i", "o", "u", "ai", "ou", "ee"]
codas = ["", "", "", "n", "r", "s", "t", "l", "m", "nd", "st"]
suffixes = ["", "", "", "s", "ed", "ing", "er", "ly", "ness", "ion", "able"]


def syllable():
    return rng.choice(onsets) + rng.choice(vowels) + rng.choice(codas)


stems = sorted({"".join(syllable() for _ in range(rng.choice([1, 1, 2, 2, 3]))) for _ in range(2500)})
rng.shuffle(stems)
weights = [1.0 / (rank + 1) ** 1.1 for rank in range(len(stems))]

with open("sample_10k.txt", "w", encoding="utf-8") as out:
    for _ in range(10_000):
        n = rng.randint(3, 18)
        words = [w + rng.choice(suffixes) for w in rng.choices(stems, weights, k=n)]
        if n > 8 and rng.random() < 0.4:
            words.insert(rng.randint(2, n - 2), ",")
        if rng.random() < 0.15:
            words[0] = words[0].capitalize()
        words.append(rng.choice([".", ".", ".", "?", "!"]))
        out.write(" ".join(words) + "\n")
