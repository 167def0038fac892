"""Process-graph data model and corpus ingestion.

A process is a predicate verb plus an argument noun ("buy+house").  A
process graph is its temporally ordered list of sub-events, each a
verb-rooted dependency tree over lemmatized words.  The corpus file is
JSON-lines, one process graph per line:

    {"id": "...", "predicate": "buy", "argument": "house",
     "steps": [{"nodes": [[0, "search", "v"], [1, "house", "n"]],
                "edges": [[0, 1, "dobj"]],
                "root": 0}, ...]}

Graphs are validated to be single-rooted trees at ingest.  Equality of
events across graphs is by ``canonical_key``, a serialization invariant
under node-id relabeling and edge reordering.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional

from .errors import CorpusError, InputError
from .words import Pos, Word


@dataclass(frozen=True)
class EventGraph:
    """A verb-rooted dependency tree; one sub-event."""

    nodes: tuple[tuple[int, Word], ...]
    edges: tuple[tuple[int, int, str], ...]
    root: int
    canonical_key: str = field(compare=False)

    @classmethod
    def build(
        cls,
        nodes: Iterable[tuple[int, Word]],
        edges: Iterable[tuple[int, int, str]],
        root: int,
    ) -> "EventGraph":
        # key on the id alone: Word is not orderable, and duplicate ids
        # must reach _validate as a CorpusError rather than a TypeError
        node_list = sorted(nodes, key=lambda item: item[0])
        edge_list = sorted(edges)
        _validate(node_list, edge_list, root)
        key = _canonical_key(dict(node_list), _children_map(edge_list), root)
        return cls(tuple(node_list), tuple(edge_list), root, key)

    @property
    def words(self) -> tuple[Word, ...]:
        return tuple(word for _, word in self.nodes)

    @property
    def root_word(self) -> Word:
        return dict(self.nodes)[self.root]

    def word_at(self, node_id: int) -> Word:
        return dict(self.nodes)[node_id]

    def children(self, node_id: int) -> list[tuple[str, int]]:
        return sorted(
            (label, dep) for head, dep, label in self.edges if head == node_id
        )

    def replace_words(self, replacements: dict[int, Word]) -> "EventGraph":
        """Same tree with some node words substituted."""
        nodes = tuple(
            (nid, replacements.get(nid, word)) for nid, word in self.nodes
        )
        return EventGraph.build(nodes, self.edges, self.root)

    def project_to_verb(self) -> "EventGraph":
        """Single-node graph keeping only the root verb."""
        return EventGraph.build([(self.root, self.root_word)], [], self.root)

    def to_json(self) -> dict:
        return {
            "nodes": [[nid, w.lemma, w.pos.short] for nid, w in self.nodes],
            "edges": [list(edge) for edge in self.edges],
            "root": self.root,
        }

    @classmethod
    def from_json(cls, obj: object, where: str = "step") -> "EventGraph":
        if not isinstance(obj, dict):
            raise CorpusError(f"{where}: expected an object, got {type(obj).__name__}")
        for key in ("nodes", "edges", "root"):
            if key not in obj:
                raise CorpusError(f"{where}: missing key {key!r}")
        nodes = []
        for entry in obj["nodes"]:
            if not isinstance(entry, (list, tuple)) or len(entry) != 3:
                raise CorpusError(f"{where}: node entries must be [id, lemma, pos]")
            nid, lemma, pos = entry
            if not isinstance(nid, int):
                raise CorpusError(f"{where}: node id {nid!r} is not an integer")
            try:
                nodes.append((nid, Word.make(str(lemma), Pos.parse(str(pos)))))
            except InputError as exc:
                raise CorpusError(f"{where}: {exc}") from exc
        edges = []
        for entry in obj["edges"]:
            if not isinstance(entry, (list, tuple)) or len(entry) != 3:
                raise CorpusError(f"{where}: edge entries must be [head, dep, label]")
            head, dep, label = entry
            if not isinstance(head, int) or not isinstance(dep, int):
                raise CorpusError(f"{where}: edge endpoints must be integers")
            edges.append((head, dep, str(label)))
        if not isinstance(obj["root"], int):
            raise CorpusError(f"{where}: root must be an integer node id")
        try:
            return cls.build(nodes, edges, obj["root"])
        except CorpusError as exc:
            raise CorpusError(f"{where}: {exc}") from exc

    def __str__(self) -> str:
        return self.canonical_key


def _validate(
    nodes: list[tuple[int, Word]],
    edges: list[tuple[int, int, str]],
    root: int,
) -> None:
    if not nodes:
        raise CorpusError("event has no nodes")
    ids = [nid for nid, _ in nodes]
    if len(set(ids)) != len(ids):
        dupes = sorted({nid for nid in ids if ids.count(nid) > 1})
        raise CorpusError(f"duplicate node ids {dupes}")
    id_set = set(ids)
    if root not in id_set:
        raise CorpusError(f"root id {root} is not a node")
    heads: dict[int, int] = {}
    for head, dep, label in edges:
        if head not in id_set or dep not in id_set:
            raise CorpusError(
                f"edge ({head}, {dep}, {label!r}) references an unknown node id"
            )
        if head == dep:
            raise CorpusError(f"self-loop edge at node {head}")
        if dep in heads:
            raise CorpusError(f"node {dep} has multiple heads")
        heads[dep] = head
    if root in heads:
        raise CorpusError(f"root node {root} has an incoming edge")
    headless = sorted(id_set - set(heads) - {root})
    if headless:
        raise CorpusError(
            f"multiple roots: nodes {headless} have no head besides root {root}"
        )
    # Every non-root node has exactly one head and only the root is
    # head-free, so any node BFS cannot reach sits on a cycle.
    reached = {root}
    frontier = [root]
    children = _children_map(edges)
    while frontier:
        nid = frontier.pop()
        for _, child in children.get(nid, []):
            if child not in reached:
                reached.add(child)
                frontier.append(child)
    unreached = sorted(id_set - reached)
    if unreached:
        raise CorpusError(f"cycle among nodes {unreached}")
    root_word = dict(nodes)[root]
    if root_word.pos is not Pos.VERB:
        raise CorpusError(
            f"root word {root_word} must be a verb, got {root_word.pos.value}"
        )


def _children_map(
    edges: Iterable[tuple[int, int, str]]
) -> dict[int, list[tuple[str, int]]]:
    children: dict[int, list[tuple[str, int]]] = {}
    for head, dep, label in edges:
        children.setdefault(head, []).append((label, dep))
    return children


def _canonical_key(
    words: dict[int, Word],
    children: dict[int, list[tuple[str, int]]],
    node_id: int,
) -> str:
    word = words[node_id]
    parts = sorted(
        (label, _canonical_key(words, children, child))
        for label, child in children.get(node_id, [])
    )
    rendered = "".join(f",[{label}]{part}" for label, part in parts)
    return f"({word.lemma}|{word.pos.short}{rendered})"


def aligned_words(a: EventGraph, b: EventGraph) -> Optional[list[tuple[Word, Word]]]:
    """Position-wise word pairs under the canonical alignment.

    Both trees are traversed with children sorted by (label, subtree
    canonical key); positions align iff the sorted label sequences agree
    at every level.  Returns None when the shapes differ.
    """
    words_a, children_a = dict(a.nodes), _children_map(a.edges)
    words_b, children_b = dict(b.nodes), _children_map(b.edges)
    pairs: list[tuple[Word, Word]] = []

    def ordered(words, children, node_id):
        return sorted(
            (label, _canonical_key(words, children, child), child)
            for label, child in children.get(node_id, [])
        )

    def walk(na: int, nb: int) -> bool:
        pairs.append((words_a[na], words_b[nb]))
        ca = ordered(words_a, children_a, na)
        cb = ordered(words_b, children_b, nb)
        if len(ca) != len(cb):
            return False
        for (label_a, _, child_a), (label_b, _, child_b) in zip(ca, cb):
            if label_a != label_b:
                return False
            if not walk(child_a, child_b):
                return False
        return True

    if walk(a.root, b.root):
        return pairs
    return None


@dataclass(frozen=True)
class Process:
    predicate: Word
    argument: Word

    def __post_init__(self):
        if self.predicate.pos is not Pos.VERB:
            raise CorpusError(f"process predicate {self.predicate} must be a verb")
        if self.argument.pos is not Pos.NOUN:
            raise CorpusError(f"process argument {self.argument} must be a noun")

    @classmethod
    def parse(cls, name: str) -> "Process":
        """Parse a "predicate+argument" process name."""
        parts = name.split("+")
        if len(parts) != 2 or not all(p.strip() for p in parts):
            raise InputError(
                f"process name {name!r} must look like 'predicate+argument'"
            )
        return cls(
            Word.make(parts[0].strip(), Pos.VERB),
            Word.make(parts[1].strip(), Pos.NOUN),
        )

    @property
    def name(self) -> str:
        return f"{self.predicate.lemma}+{self.argument.lemma}"

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class ProcessGraph:
    process: Process
    steps: tuple[EventGraph, ...]
    source_id: str

    def __post_init__(self):
        if not self.steps:
            raise CorpusError(f"process graph {self.source_id!r} has no steps")


def parse_corpus(lines: Iterable[str], source: str = "<corpus>") -> list[ProcessGraph]:
    """Parse JSON-lines into validated ProcessGraphs.

    Errors carry the source name and 1-based line number plus the violated
    invariant.  Duplicate ids are rejected.
    """
    graphs: list[ProcessGraph] = []
    seen_ids: set[str] = set()
    for line_no, raw in enumerate(lines, 1):
        line = raw.strip()
        if not line:
            continue
        where = f"{source}:{line_no}"
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise CorpusError(f"{where}: malformed JSON: {exc}") from exc
        if not isinstance(obj, dict):
            raise CorpusError(f"{where}: expected a JSON object")
        for key in ("id", "predicate", "argument", "steps"):
            if key not in obj:
                raise CorpusError(f"{where}: missing key {key!r}")
        source_id = str(obj["id"])
        if not source_id:
            raise CorpusError(f"{where}: empty id")
        if source_id in seen_ids:
            raise CorpusError(f"{where}: duplicate id {source_id!r}")
        seen_ids.add(source_id)
        try:
            process = Process(
                Word.make(str(obj["predicate"]), Pos.VERB),
                Word.make(str(obj["argument"]), Pos.NOUN),
            )
        except (CorpusError, InputError) as exc:
            raise CorpusError(f"{where}: {exc}") from exc
        steps_obj = obj["steps"]
        if not isinstance(steps_obj, list) or not steps_obj:
            raise CorpusError(f"{where}: steps must be a non-empty list")
        steps = tuple(
            EventGraph.from_json(step, where=f"{where}: step {i}")
            for i, step in enumerate(steps_obj)
        )
        graphs.append(ProcessGraph(process, steps, source_id))
    return graphs


def load_corpus(path: str) -> list[ProcessGraph]:
    try:
        with open(path, encoding="utf-8") as handle:
            return parse_corpus(handle, source=str(path))
    except OSError as exc:
        raise CorpusError(f"cannot read corpus {path}: {exc}") from exc


def load_corpus_with_k(path: str) -> tuple[list[ProcessGraph], dict[str, int]]:
    """Load a corpus plus any per-line requested sequence lengths, given
    as an optional integer "k" key on corpus lines."""
    graphs = load_corpus(path)
    per_line_k: dict[str, int] = {}
    with open(path, encoding="utf-8") as handle:
        for line_no, raw in enumerate(handle, 1):
            line = raw.strip()
            if not line:
                continue
            obj = json.loads(line)
            if "k" not in obj:
                continue
            k = obj["k"]
            if not isinstance(k, int) or k < 1:
                raise CorpusError(
                    f"{path}:{line_no}: k must be a positive integer, got {k!r}"
                )
            per_line_k[str(obj["id"])] = k
    return graphs, per_line_k


def dump_process_graph(graph: ProcessGraph) -> str:
    obj = {
        "id": graph.source_id,
        "predicate": graph.process.predicate.lemma,
        "argument": graph.process.argument.lemma,
        "steps": [step.to_json() for step in graph.steps],
    }
    return json.dumps(obj, sort_keys=False)


def decompose(
    process: Process, corpus: list[ProcessGraph]
) -> tuple[list[ProcessGraph], list[ProcessGraph]]:
    """Split the corpus into the predicate-matching and argument-matching
    groups; a graph matching both appears in both."""
    g_p = [g for g in corpus if g.process.predicate.lemma == process.predicate.lemma]
    g_a = [g for g in corpus if g.process.argument.lemma == process.argument.lemma]
    return g_p, g_a


def iter_instances(
    group: list[ProcessGraph],
) -> Iterator[tuple[str, int, EventGraph]]:
    """All (graph-id, step-index, event) sub-event instances of a group."""
    for graph in group:
        for index, step in enumerate(graph.steps):
            yield graph.source_id, index, step
