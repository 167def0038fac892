"""Hypernym taxonomies over (lemma, part-of-speech) words.

Two on-disk formats are supported:

* WordNet database files (``data.noun``, ``data.verb``, ``index.noun``,
  ``index.verb`` in the standard 3.x space-delimited layout).  Hypernym
  (``@``) and instance-hypernym (``@i``) pointers become edges.
* A flat TSV of ``child<TAB>parent<TAB>pos`` lines, used for fixtures and
  small domain taxonomies.  Each lemma+pos gets a single implicit sense.

A loaded taxonomy is immutable and safe for concurrent reads.  Words are
grouped into senses (synsets); hypernym edges connect senses of the same
part of speech.  Word-level queries take the union over all senses of a
lemma and report minimum distances, so results do not depend on any sense
disambiguation.
"""

from __future__ import annotations

import os
from collections import deque
from pathlib import Path
from typing import Iterable, Optional

from .errors import TaxonomyError
from .words import Pos, Word

# A sense is (pos-short-code, synset-offset-or-lemma).
SenseId = tuple[str, object]

_WORDNET_FILES = ("data.noun", "data.verb", "index.noun", "index.verb")
_HYPERNYM_SYMBOLS = ("@", "@i")


class Taxonomy:
    """Immutable hypernym graph with path, depth, and hyponymy queries."""

    def __init__(
        self,
        sense_lemmas: dict[SenseId, tuple[str, ...]],
        sense_parents: dict[SenseId, tuple[SenseId, ...]],
        word_senses: dict[tuple[str, Pos], tuple[SenseId, ...]],
        source: str,
    ):
        self._sense_lemmas = sense_lemmas
        self._sense_parents = sense_parents
        self._word_senses = word_senses
        self.source = source
        self._depth_cache: dict[tuple[Word, Word], Optional[int]] = {}
        self._ancestor_cache: dict[tuple[Word, int], dict[Word, int]] = {}

    def __contains__(self, word: Word) -> bool:
        return (word.lemma, word.pos) in self._word_senses

    def sense_count(self, pos: Pos) -> int:
        code = pos.short
        return sum(1 for (p, _) in self._sense_lemmas if p == code)

    def _senses(self, word: Word) -> tuple[SenseId, ...]:
        return self._word_senses.get((word.lemma, word.pos), ())

    def hypernym_paths(self, word: Word) -> list[list[Word]]:
        """All ascending root-reaching paths starting at ``word``.

        Ancestor senses are rendered by their first lemma.  A word absent
        from the taxonomy yields the single trivial path ``[word]``.
        Output order is lexicographic, independent of load order.
        """
        senses = self._senses(word)
        if not senses:
            return [[word]]
        rendered: set[tuple[Word, ...]] = set()
        for sense in senses:
            for sense_path in self._ascending_sense_paths(sense):
                path = [word] + [
                    Word(self._sense_lemmas[s][0], word.pos) for s in sense_path
                ]
                rendered.add(tuple(path))
        return sorted(
            (list(path) for path in rendered),
            key=lambda path: [w.sort_key for w in path],
        )

    def _ascending_sense_paths(self, sense: SenseId) -> list[list[SenseId]]:
        """Paths of strict ancestors (excluding ``sense``), root-reaching."""
        parents = self._sense_parents.get(sense, ())
        if not parents:
            return [[]]
        paths = []
        for parent in parents:
            for tail in self._ascending_sense_paths_from(parent, {sense}):
                paths.append(tail)
        return paths

    def _ascending_sense_paths_from(
        self, sense: SenseId, on_path: set[SenseId]
    ) -> list[list[SenseId]]:
        if sense in on_path:
            # Defensive: real WordNet data is acyclic per pos, but never
            # loop forever on a broken file.
            return [[sense]]
        parents = self._sense_parents.get(sense, ())
        if not parents:
            return [[sense]]
        results = []
        on_path = on_path | {sense}
        for parent in parents:
            for tail in self._ascending_sense_paths_from(parent, on_path):
                results.append([sense] + tail)
        return results

    def ancestors(self, word: Word, max_depth: int) -> dict[Word, int]:
        """Distinct ancestor words within ``max_depth`` edges, mapped to
        their minimum depth.  Every lemma of an ancestor sense counts as an
        ancestor word; the word's own lemma is excluded."""
        key = (word, max_depth)
        cached = self._ancestor_cache.get(key)
        if cached is not None:
            return cached
        found: dict[Word, int] = {}
        frontier = set(self._senses(word))
        seen = set(frontier)
        for level in range(1, max_depth + 1):
            next_frontier: set[SenseId] = set()
            for sense in frontier:
                for parent in self._sense_parents.get(sense, ()):
                    if parent not in seen:
                        seen.add(parent)
                        next_frontier.add(parent)
            for sense in next_frontier:
                for lemma in self._sense_lemmas[sense]:
                    ancestor = Word(lemma, word.pos)
                    if ancestor != word and ancestor not in found:
                        found[ancestor] = level
            frontier = next_frontier
            if not frontier:
                break
        result = dict(sorted(found.items(), key=lambda kv: kv[0].sort_key))
        self._ancestor_cache[key] = result
        return result

    def depth(self, word: Word, ancestor: Word) -> Optional[int]:
        """Minimum number of hypernym edges from ``word`` up to ``ancestor``
        over all senses and paths; 0 iff the words are equal; ``None`` if
        the ancestor is unreachable."""
        if word == ancestor:
            return 0
        if word.pos != ancestor.pos:
            return None
        key = (word, ancestor)
        if key in self._depth_cache:
            return self._depth_cache[key]
        result = self._bfs_depth(word, ancestor)
        self._depth_cache[key] = result
        return result

    def _bfs_depth(self, word: Word, ancestor: Word) -> Optional[int]:
        frontier = set(self._senses(word))
        seen = set(frontier)
        level = 0
        while frontier:
            level += 1
            next_frontier: set[SenseId] = set()
            for sense in frontier:
                for parent in self._sense_parents.get(sense, ()):
                    if parent not in seen:
                        seen.add(parent)
                        next_frontier.add(parent)
            for sense in next_frontier:
                if ancestor.lemma in self._sense_lemmas[sense]:
                    return level
            frontier = next_frontier
        return None

    def is_hyponym(self, a: Word, b: Word) -> bool:
        """True iff ``a`` lies strictly below ``b`` (at least one edge)."""
        d = self.depth(a, b)
        return d is not None and d >= 1


def load_tsv(path: str | os.PathLike) -> Taxonomy:
    """Load a ``child<TAB>parent<TAB>pos`` taxonomy file.

    Rejects lines with the wrong field count and rejects cycles within a
    part of speech, naming the offending line / nodes.
    """
    path = Path(path)
    if not path.is_file():
        raise TaxonomyError(f"missing taxonomy files: {path} does not exist")
    edges: dict[tuple[str, Pos], list[str]] = {}
    nodes: set[tuple[str, Pos]] = set()
    with open(path, encoding="utf-8") as handle:
        for line_no, raw in enumerate(handle, 1):
            line = raw.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            fields = line.split("\t")
            if len(fields) != 3:
                raise TaxonomyError(
                    f"{path}:{line_no}: expected 3 tab-separated fields "
                    f"(child, parent, pos), got {len(fields)}"
                )
            child_raw, parent_raw, pos_raw = fields
            try:
                pos = Pos.parse(pos_raw)
                child = Word.make(child_raw, pos)
                parent = Word.make(parent_raw, pos)
            except Exception as exc:
                raise TaxonomyError(f"{path}:{line_no}: {exc}") from exc
            nodes.add((child.lemma, pos))
            nodes.add((parent.lemma, pos))
            parents = edges.setdefault((child.lemma, pos), [])
            if parent.lemma not in parents:
                parents.append(parent.lemma)

    _reject_cycles(path, nodes, edges)

    sense_lemmas: dict[SenseId, tuple[str, ...]] = {}
    sense_parents: dict[SenseId, tuple[SenseId, ...]] = {}
    word_senses: dict[tuple[str, Pos], tuple[SenseId, ...]] = {}
    # Pos is not orderable; the same lemma may appear under several pos
    for lemma, pos in sorted(nodes, key=lambda item: (item[0], item[1].value)):
        sense: SenseId = (pos.short, lemma)
        sense_lemmas[sense] = (lemma,)
        sense_parents[sense] = tuple(
            (pos.short, parent) for parent in edges.get((lemma, pos), [])
        )
        word_senses[(lemma, pos)] = (sense,)
    return Taxonomy(sense_lemmas, sense_parents, word_senses, f"tsv:{path}")


def _reject_cycles(
    path: Path,
    nodes: set[tuple[str, Pos]],
    edges: dict[tuple[str, Pos], list[str]],
) -> None:
    # Kahn's algorithm per pos; leftover nodes participate in a cycle.
    for pos in (Pos.NOUN, Pos.VERB, Pos.OTHER):
        pos_nodes = {lemma for (lemma, p) in nodes if p == pos}
        if not pos_nodes:
            continue
        out_degree = {lemma: 0 for lemma in pos_nodes}
        dependants: dict[str, list[str]] = {lemma: [] for lemma in pos_nodes}
        for lemma in pos_nodes:
            for parent in edges.get((lemma, pos), []):
                out_degree[lemma] += 1
                dependants[parent].append(lemma)
        queue = deque(lemma for lemma, deg in out_degree.items() if deg == 0)
        visited = 0
        while queue:
            lemma = queue.popleft()
            visited += 1
            for child in dependants[lemma]:
                out_degree[child] -= 1
                if out_degree[child] == 0:
                    queue.append(child)
        if visited != len(pos_nodes):
            cyclic = sorted(
                lemma for lemma, deg in out_degree.items() if deg > 0
            )
            raise TaxonomyError(
                f"{path}: cycle detected among {pos.value} nodes: {cyclic}"
            )


def load_wordnet(directory: str | os.PathLike) -> Taxonomy:
    """Load hypernym structure from WordNet database files.

    Reads ``data.noun`` / ``data.verb`` for synsets and their ``@`` /
    ``@i`` pointers, and ``index.noun`` / ``index.verb`` for the
    lemma-to-synset sense lists.  Lemmas are lowercased; all senses of a
    lemma are kept.
    """
    directory = Path(directory)
    missing = [
        name for name in _WORDNET_FILES if not (directory / name).is_file()
    ]
    if missing:
        raise TaxonomyError(
            f"missing taxonomy files in {directory}: {', '.join(missing)}"
        )

    sense_lemmas: dict[SenseId, tuple[str, ...]] = {}
    sense_parents: dict[SenseId, tuple[SenseId, ...]] = {}
    word_senses: dict[tuple[str, Pos], tuple[SenseId, ...]] = {}

    for pos, code in ((Pos.NOUN, "n"), (Pos.VERB, "v")):
        data_path = directory / f"data.{pos.value}"
        for offset, lemmas, parents in _parse_wordnet_data(data_path, code):
            sense: SenseId = (code, offset)
            sense_lemmas[sense] = lemmas
            sense_parents[sense] = tuple((code, p) for p in parents)

    for pos, code in ((Pos.NOUN, "n"), (Pos.VERB, "v")):
        index_path = directory / f"index.{pos.value}"
        for lemma, offsets in _parse_wordnet_index(index_path, code):
            senses = []
            for offset in offsets:
                sense = (code, offset)
                if sense not in sense_lemmas:
                    raise TaxonomyError(
                        f"{index_path}: lemma {lemma!r} references synset "
                        f"{offset:08d} absent from data.{pos.value}"
                    )
                senses.append(sense)
            word_senses[(lemma, pos)] = tuple(senses)

    return Taxonomy(sense_lemmas, sense_parents, word_senses, f"wordnet:{directory}")


def _parse_wordnet_data(path: Path, code: str):
    """Yield (offset, lemmas, hypernym-offsets) from a data.* file."""
    byte_offset = 0
    with open(path, "rb") as handle:
        for line_no, raw in enumerate(handle, 1):
            line_start = byte_offset
            byte_offset += len(raw)
            line = raw.decode("latin-1").rstrip("\n")
            if not line or line.startswith("  "):
                continue  # license header
            tokens = line.split(" ")
            try:
                offset = int(tokens[0])
                word_count = int(tokens[3], 16)
                lemmas = tuple(
                    tokens[4 + 2 * i].lower() for i in range(word_count)
                )
                pointer_base = 4 + 2 * word_count
                pointer_count = int(tokens[pointer_base])
                parents = []
                for i in range(pointer_count):
                    symbol = tokens[pointer_base + 1 + 4 * i]
                    target = tokens[pointer_base + 2 + 4 * i]
                    target_pos = tokens[pointer_base + 3 + 4 * i]
                    if symbol in _HYPERNYM_SYMBOLS and target_pos == code:
                        parents.append(int(target))
            except (IndexError, ValueError) as exc:
                raise TaxonomyError(
                    f"{path}:{line_no} (byte offset {line_start}): "
                    f"malformed synset record: {exc}"
                ) from exc
            if not lemmas:
                raise TaxonomyError(
                    f"{path}:{line_no} (byte offset {line_start}): "
                    "synset record lists no words"
                )
            yield offset, lemmas, parents


def _parse_wordnet_index(path: Path, code: str):
    """Yield (lemma, synset-offsets) from an index.* file."""
    byte_offset = 0
    with open(path, "rb") as handle:
        for line_no, raw in enumerate(handle, 1):
            line_start = byte_offset
            byte_offset += len(raw)
            line = raw.decode("latin-1").strip()
            if not line or raw.startswith(b"  "):
                continue
            tokens = line.split()
            try:
                lemma = tokens[0].lower()
                synset_count = int(tokens[2])
                offsets = [int(t) for t in tokens[-synset_count:]]
            except (IndexError, ValueError) as exc:
                raise TaxonomyError(
                    f"{path}:{line_no} (byte offset {line_start}): "
                    f"malformed index record: {exc}"
                ) from exc
            yield lemma, offsets


def load_taxonomy(spec: str) -> Taxonomy:
    """Resolve a ``wordnet:<dir>`` or ``tsv:<file>`` taxonomy spec."""
    kind, sep, location = spec.partition(":")
    if not sep or not location:
        raise TaxonomyError(
            f"taxonomy spec {spec!r} must look like 'wordnet:<dir>' or 'tsv:<file>'"
        )
    if kind == "wordnet":
        return load_wordnet(location)
    if kind == "tsv":
        return load_tsv(location)
    raise TaxonomyError(f"unknown taxonomy kind {kind!r} in spec {spec!r}")
