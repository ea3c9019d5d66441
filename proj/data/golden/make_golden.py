"""Builds the golden fixtures: case-study distributions plus the support each
strategy must select, computed here by direct per-token scans (no shared code
with the C++ library)."""
import json
import math
import pathlib

HERE = pathlib.Path(__file__).parent
CASES = HERE.parent / "cases"


def rank(p):
    return sorted(range(len(p)), key=lambda i: (-p[i], i))


def entropy(p):
    return -sum(x * math.log(x) for x in p if x > 0)


def by_threshold(p, thr):
    keep = [i for i in rank(p) if p[i] > 0 and p[i] >= thr]
    return keep or [rank(p)[0]]


def support(p, s):
    name = s["name"]
    if name == "top-b":
        hn = entropy(p) / math.log(len(p)) if len(p) > 1 else 0.0
        bw = min(s["base_bandwidth"] * (1 + hn), 1.0)
        return by_threshold(p, (1 - bw) * max(p))
    if name == "min-p":
        return by_threshold(p, s["alpha"] * max(p))
    if name == "epsilon":
        return by_threshold(p, s["epsilon"])
    if name == "eta":
        return by_threshold(p, min(s["eta"], math.sqrt(s["eta"]) * math.exp(-entropy(p))))
    if name == "top-k":
        return [i for i in rank(p) if p[i] > 0][: s["k"]]
    if name == "top-p":
        out, cum = [], 0.0
        for i in rank(p):
            if p[i] <= 0:
                break
            out.append(i)
            cum += p[i]
            if cum >= s["p"]:
                break
        return out
    if name == "temperature":
        return [i for i in rank(p) if p[i] > 0]
    raise ValueError(name)


STRATEGIES = [
    {"name": "top-b", "base_bandwidth": 0.37},
    {"name": "top-b", "base_bandwidth": 0.3},
    {"name": "top-p", "p": 0.9},
    {"name": "top-k", "k": 5},
    {"name": "min-p", "alpha": 0.05},
    {"name": "epsilon", "epsilon": 0.01},
    {"name": "eta", "eta": 0.002},
    {"name": "temperature"},
]


def emit(name, doc, probs):
    total = sum(probs)
    probs = [x / total for x in probs]
    doc = dict(doc)
    doc["expected"] = [
        {"strategy": dict(s, temperature=1.0), "support": support(probs, s)} for s in STRATEGIES
    ]
    (HERE / f"{name}.json").write_text(json.dumps(doc, indent=1, ensure_ascii=False) + "\n")


for path in sorted(CASES.glob("*.json")):
    doc = json.loads(path.read_text())
    emit(path.stem, doc, [e["prob"] for e in doc["probs"]])

one_hot = {"metadata": {"prompt": "one-hot"},
           "probs": [{"token": t, "prob": p} for t, p in zip("abcd", [0.0, 1.0, 0.0, 0.0])]}
emit("one_hot", one_hot, [0.0, 1.0, 0.0, 0.0])

logits = [2.0, 1.5, 0.25, -1.0, -3.0, 0.0]
lse = math.log(sum(math.exp(x) for x in logits))
logit_doc = {"metadata": {"prompt": "logit input"},
             "logits": [{"token": f"w{i}", "logit": x} for i, x in enumerate(logits)]}
emit("logits_small", logit_doc, [math.exp(x - lse) for x in logits])
