#!/usr/bin/env python3
"""Hand-annotated token-reduction oracle for the bundled mini corpus.

Each trace carries a hand-checked verdict on its final answer and the text
that closes its earliest correct answering node (None when the trace has no
correct Conclusion node). Selection and token counts are recomputed here
with plain prefix sums over whitespace tokens.
"""
import json
import re
import sys
from collections import OrderedDict

# trace id -> (final answer correct, end of the earliest correct conclusion)
ANNOTATION = {
    "t01": (True, "The answer is \\boxed{56}."),
    "t02a": (True, "Final Answer: 7"),
    "t02b": (True, "So r = 7, and the answer is \\boxed{7}.\n"),
    "t02c": (False, None),
    "t03": (True, "Therefore the sum is \\boxed{55}.\n"),
    "t04": (True, "\n</think>\n\\boxed{4}"),
    "t05a": (True, "Therefore the result is \\boxed{12}.\n"),
    "t05b": (True, "so the answer is 12.0.\n</think>\n"),
    "t06": (True, "Therefore, the sum is \\boxed{\\frac{7}{8}}.\n"),
    "t07a": (True, "Therefore there are \\boxed{8} primes.\n"),
    "t07b": (True, "Therefore, \\boxed{8}.\n</think>\n"),
    "t07c": (False, None),
    "t08": (True, None),
    "t09": (True, "Final Answer: \\boxed{80}"),
    "t10a": (True, "Therefore 2^10 = \\boxed{1024}.\n"),
    "t10b": (True, "So the answer is 1024.\n</think>\n"),
    "t11": (True, "Therefore the answer is \\boxed{9}.\n"),
    "t12": (True, "Therefore, the perimeter is \\boxed{24}.\n</think>\n"),
    "t13": (True, "Therefore the answer is \\boxed{\\frac{5}{6}}.\n"),
    "t14": (True, "Therefore the answer is \\boxed{98}.\n"),
}
K = 4


def token_prefix_sums(text):
    ends = [m.end() for m in re.finditer(r"\S+", text)]
    return ends


def tokens_through(text, cut):
    pos = text.index(cut) + len(cut)
    ends = token_prefix_sums(text)
    return sum(1 for e in ends if e <= pos), len(ends)


def main(corpus_dir):
    traces = [json.loads(l) for l in open(f"{corpus_dir}/traces.jsonl") if l.strip()]
    groups = OrderedDict()
    for t in traces:
        groups.setdefault(t["problem_id"], []).append(t)

    rows = []
    for pid, cands in groups.items():
        correct = [t for t in cands[:K] if ANNOTATION[t["id"]][0]]
        if not correct:
            continue
        correct.sort(key=lambda t: (len(t["text"].split()), len(t["text"]), t["id"]))
        chosen = correct[(len(correct) - 1) // 2]
        cut = ANNOTATION[chosen["id"]][1]
        if cut is None:
            continue
        pruned, original = tokens_through(chosen["text"], cut)
        rows.append((chosen["id"], original, pruned))

    n = len(rows)
    summary = OrderedDict(
        count=n,
        mean_original_tokens=sum(r[1] for r in rows) / n,
        mean_pruned_tokens=sum(r[2] for r in rows) / n,
        mean_reduction_pct=sum(100.0 * (1 - r[2] / r[1]) for r in rows) / n,
        token_scheme="whitespace",
    )
    summary["selected"] = [r[0] for r in sorted(rows)]
    json.dump(summary, sys.stdout, indent=2)
    sys.stdout.write("\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "data/mini_corpus")
