"""Regenerates the case-study distribution files in this directory.

Only the three leading probabilities of each prompt are observed values; the
tail is synthetic. It is shaped so that Min-p (alpha = 0.05) keeps the observed
number of tokens, the top-5 mass roughly matches the observed Top-k renormalization,
and Top-p (p = 0.9) crosses 0.9 near the observed support size.
"""
import json
import math
import pathlib

HERE = pathlib.Path(__file__).parent


def segment(count, total, hi, lo, flatness=0.8):
    """`count` strictly decreasing values in (lo, hi] summing to `total`."""
    if count == 0:
        return []
    mean = total / count
    assert lo < mean < hi, (count, total, hi, lo)
    spread = flatness * min(hi - mean, mean - lo)
    if count == 1:
        return [mean]
    top, bottom = mean + spread, mean - spread
    return [top - (top - bottom) * i / (count - 1) for i in range(count)]


def build(head, next2, mid_mass, minp_count, topp_count, vocab):
    p_max = head[0]
    floor = 0.05 * p_max
    probs = list(head)
    probs += next2
    mid = minp_count - 5
    if mid > 0:
        probs += segment(mid, mid_mass, probs[-1], floor)
    low = topp_count - len(probs)
    if low > 0:
        need = 0.9 - sum(probs)
        probs += segment(low, need + 0.2 * min(floor, probs[-1]) / low, min(floor, probs[-1]), 0.0, 0.3)
    remaining = 1.0 - sum(probs)
    tail = max(vocab - len(probs), math.ceil(remaining / (0.5 * probs[-1])))
    probs += segment(tail, remaining, probs[-1], 0.0, 0.9)
    probs = [round(p, 7) for p in probs]
    probs[-1] = round(probs[-1] + (1.0 - sum(probs)), 7)
    return probs


CASES = [
    ("arithmetic", "2+2=", [" 4", " 5", " \n"], [0.3975, 0.1550, 0.0781], [0.0500, 0.0448], 0.128, 9, 14),
    ("rainbow",
     "A rainbow is an optically brilliant meteorological event resulting from refraction, "
     "reflection, and dispersion of",
     [" light", " sunlight", " the"], [0.5950, 0.2188, 0.1325], [0.0090, 0.0075], 0.0, 3, 3),
    ("battle",
     "You will pay for what you have done, she hissed, her blade flashing in the moonlight. "
     "The battle that ensued",
     [" was", " left", " between"], [0.4600, 0.0625, 0.0553], [0.0400, 0.0211], 0.0, 4, 44),
    ("email",
     "If you could help me write an email to my friends inviting them to dinner on Friday, "
     "it would be greatly appreciated.",
     [" \n", " I", " \n\n"], [0.2388, 0.1125, 0.0994], [0.0650, 0.0597], 0.195, 14, 43),
    ("describe", "Describe a time when you had to make a difficult decision.",
     [" \n", " You", " \n\n"], [0.3450, 0.2700, 0.0875], [0.0600, 0.0508], 0.0175, 6, 25),
]

VOCAB = 96

for name, prompt, head_tokens, head, next2, mid_mass, minp, topp in CASES:
    probs = build(head, next2, mid_mass, minp, topp, VOCAB)
    assert all(a >= b for a, b in zip(probs, probs[1:])), name
    assert probs[:3] == head, name
    tokens = head_tokens + [f"<t{i:03d}>" for i in range(3, len(probs))]
    doc = {
        "metadata": {"prompt": prompt},
        "probs": [{"token": t, "prob": p} for t, p in zip(tokens, probs)],
    }
    (HERE / f"{name}.json").write_text(json.dumps(doc, indent=1, ensure_ascii=False) + "\n")
    h = -sum(p * math.log(p) for p in probs if p > 0)
    print(f"{name:10s} n={len(probs)} sum={sum(probs):.9f} H/Hmax={h / math.log(len(probs)):.4f} "
          f"minp={sum(p >= 0.05 * probs[0] for p in probs)}")
