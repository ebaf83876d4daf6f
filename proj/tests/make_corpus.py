#!/usr/bin/env python3
"""Assemble deterministic English-text benchmark corpora.

The benchmark environment has no network access, so the corpora are built
from prose already on the machine: docstrings harvested from the installed
Python packages. Raw docstring dumps are dominated by boilerplate phrases
and compress far better than natural running text, so the harvest is cut
into sentences, exact duplicates are dropped, and the survivors are
shuffled with a fixed seed. That keeps real English word statistics while
removing the pathological phrase-level repetition, and the output is
wrapped in a light XML-ish page structure to resemble markup-heavy
natural language dumps.

Usage: make_corpus.py OUTPUT_DIR [SITE_PACKAGES_DIR ...]
Writes corpus_10mb.txt (10,000,000 bytes) and corpus_50mb.txt (50,000,000).
"""
import ast
import io
import random
import re
import sys
import sysconfig
from pathlib import Path

SIZES = {"corpus_10mb.txt": 10_000_000, "corpus_50mb.txt": 50_000_000}
VOCAB_TRAIN = ("vocab_train_10mb.txt", 10_000_000)
SENTENCE_SPLIT = re.compile(r"(?<=[.!?:])\s+|\n{2,}")
WS = re.compile(r"\s+")


def iter_docstrings(root: Path):
    for path in sorted(root.rglob("*.py")):
        try:
            tree = ast.parse(path.read_text(encoding="utf-8", errors="ignore"))
        except (SyntaxError, ValueError, OSError):
            continue
        for node in ast.walk(tree):
            if isinstance(
                node,
                (ast.Module, ast.ClassDef, ast.FunctionDef, ast.AsyncFunctionDef),
            ):
                doc = ast.get_docstring(node)
                if doc and len(doc) >= 40:
                    yield doc


def harvest_sentences(roots):
    seen = set()
    sentences = []
    for root in roots:
        for doc in iter_docstrings(root):
            for raw in SENTENCE_SPLIT.split(doc):
                s = WS.sub(" ", raw).strip()
                if len(s) < 30 or len(s) > 600:
                    continue
                # Drop table/signature-ish lines; keep prose.
                letters = sum(c.isalpha() or c == " " for c in s)
                if letters < 0.75 * len(s):
                    continue
                if s in seen:
                    continue
                seen.add(s)
                sentences.append(s)
    return sentences


def build(out_path: Path, target: int, sentences):
    rng = random.Random(20260826)
    order = list(range(len(sentences)))
    rng.shuffle(order)
    buf = io.StringIO()
    page = 0
    i = 0
    while buf.tell() < target + 4096:
        page += 1
        buf.write(f'<page id="{page}">\n<text>\n')
        per_page = 8 + rng.randrange(8)
        for _ in range(per_page):
            buf.write(sentences[order[i % len(order)]])
            buf.write("\n")
            i += 1
        buf.write("</text>\n</page>\n")
        if i > 2 * len(order):
            raise SystemExit("not enough sentence text harvested")
    out_path.write_bytes(buf.getvalue().encode("utf-8")[:target])


def build_vocab_corpus(out_path: Path, target: int, sentences):
    """Word-shuffled text for vocabulary training.

    A vocabulary trained on the evaluation text itself memorizes whole
    phrases, which makes every token rare and hides the frequency-rank
    structure the pipeline exploits. Shuffling at word granularity keeps
    natural word frequencies but removes phrase bigrams, so merges stop
    near word boundaries - the same regime as a general-purpose tokenizer
    trained on a much larger, unrelated corpus.
    """
    rng = random.Random(987654321)
    words = []
    for s in sentences:
        words.extend(s.split(" "))
    rng.shuffle(words)
    buf = io.StringIO()
    i = 0
    while buf.tell() < target + 4096:
        buf.write(words[i % len(words)])
        buf.write("\n" if i % 16 == 15 else " ")
        i += 1
    out_path.write_bytes(buf.getvalue().encode("utf-8")[:target])


def main():
    if len(sys.argv) < 2:
        raise SystemExit(__doc__)
    out_dir = Path(sys.argv[1])
    out_dir.mkdir(parents=True, exist_ok=True)
    roots = [Path(p) for p in sys.argv[2:]]
    if not roots:
        roots = [Path(sysconfig.get_paths()["purelib"])]

    big_name = "corpus_50mb.txt"
    big = out_dir / big_name
    vocab_out = out_dir / VOCAB_TRAIN[0]
    if not (big.exists() and big.stat().st_size == SIZES[big_name]
            and vocab_out.exists()
            and vocab_out.stat().st_size == VOCAB_TRAIN[1]):
        sentences = harvest_sentences(roots)
        print(f"harvested {len(sentences)} unique sentences")
        build(big, SIZES[big_name], sentences)
        build_vocab_corpus(vocab_out, VOCAB_TRAIN[1], sentences)
    data = big.read_bytes()
    for name, size in SIZES.items():
        if name == big_name:
            continue
        out = out_dir / name
        if not (out.exists() and out.stat().st_size == size):
            out.write_bytes(data[:size])
    print(f"corpora ready in {out_dir}")


if __name__ == "__main__":
    main()
