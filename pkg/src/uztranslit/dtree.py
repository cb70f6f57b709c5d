"""From-scratch decision tree over categorical character features.

Nodes test equality of one window position against one symbol; the
split chosen at each node is the one with the greatest Gini impurity
decrease, evaluated exhaustively over every (position, symbol) pair
present in the node's data. Growth is unbounded: a node stops only when
pure, smaller than two samples, or indivisible because all its feature
vectors are identical. An impure node whose best split decreases
impurity by zero is still split (XOR-shaped label patterns need this;
it is also what an unlimited-depth CART does), which is what guarantees
a pure fit on conflict-free data. Ties are broken by lowest position,
then lowest symbol, so training is fully deterministic given the sample
order.

Unlike a numeric-threshold tree over some arbitrary character encoding,
equality tests do not depend on a character ordering; the learning task
is unchanged.
"""

from __future__ import annotations

import json
import sys
from dataclasses import dataclass

from .alphabets import Direction
from .featurizer import Sample, WindowSpec

FORMAT_VERSION = 1


class EmptyTrainingSetError(ValueError):
    pass


class InconsistentFeatureWidthError(ValueError):
    pass


class WidthMismatchError(ValueError):
    pass


class EmptyCountsError(ValueError):
    pass


class ModelFormatError(ValueError):
    """Model file is structurally corrupt."""


class ModelVersionError(ModelFormatError):
    """Model file was written by an unknown format version."""


@dataclass
class Leaf:
    class_counts: dict[str, int]
    prediction: str


@dataclass
class Internal:
    feature_index: int
    test_symbol: str
    eq: "TreeNode"
    ne: "TreeNode"


TreeNode = Leaf | Internal


@dataclass
class TranslitModel:
    root: TreeNode
    window: WindowSpec
    direction: Direction
    table_fingerprint: str = ""
    format_version: int = FORMAT_VERSION


def gini(class_counts: dict[str, int]) -> float:
    """Gini impurity 1 - sum(p_c^2) of a label histogram."""
    total = sum(class_counts.values())
    if total <= 0:
        raise EmptyCountsError("gini of empty counts")
    sq = sum(c * c for c in class_counts.values())
    return 1.0 - sq / (total * total)


def _majority_label(class_counts: dict[str, int]) -> str:
    best_count = max(class_counts.values())
    return min(label for label, count in class_counts.items() if count == best_count)


def _best_split(feats, labs, indices, counts, width):
    """Exhaustively score every (position, symbol) equality split.

    Returns (position, symbol, eq_indices, ne_indices), or None when
    every sample carries the same feature vector and no split can
    separate anything. A zero impurity decrease does not stop growth;
    the split decrease is never negative, so any valid split is taken
    when nothing better exists. Candidates are scanned position
    ascending, symbol ascending, and only a strictly better decrease
    replaces the incumbent, which implements the tie-break.
    """
    n = len(indices)
    parent_gini = gini(counts)
    # stats[p][symbol] -> label histogram of samples whose p-th feature is symbol
    stats: list[dict] = [{} for _ in range(width)]
    for i in indices:
        features = feats[i]
        label = labs[i]
        for p in range(width):
            per_symbol = stats[p]
            hist = per_symbol.get(features[p])
            if hist is None:
                per_symbol[features[p]] = hist = {}
            hist[label] = hist.get(label, 0) + 1

    best_decrease = -1.0
    best = None
    for p in range(width):
        per_symbol = stats[p]
        for symbol in sorted(per_symbol):
            hist = per_symbol[symbol]
            n_eq = sum(hist.values())
            if n_eq == n:
                continue  # equality side would swallow the node
            n_ne = n - n_eq
            sq_eq = sum(c * c for c in hist.values())
            sq_ne = sum(
                (counts[label] - hist.get(label, 0)) ** 2 for label in counts
            )
            weighted = (n_eq - sq_eq / n_eq + n_ne - sq_ne / n_ne) / n
            decrease = parent_gini - weighted
            if decrease > best_decrease:
                best_decrease = decrease
                best = (p, symbol)
    if best is None:
        return None
    p, symbol = best
    eq_idx = [i for i in indices if feats[i][p] == symbol]
    ne_idx = [i for i in indices if feats[i][p] != symbol]
    return p, symbol, eq_idx, ne_idx


def _grow(feats, labs, width) -> TreeNode:
    # Iterative with an explicit stack; equality-split chains get deep
    # enough to threaten the interpreter recursion limit.
    placeholder = Leaf({}, "")
    root_box: list[TreeNode] = [placeholder]

    def attach(parent, side, node):
        if parent is None:
            root_box[0] = node
        elif side == "eq":
            parent.eq = node
        else:
            parent.ne = node

    stack = [(None, "", list(range(len(labs))))]
    while stack:
        parent, side, indices = stack.pop()
        counts: dict[str, int] = {}
        for i in indices:
            label = labs[i]
            counts[label] = counts.get(label, 0) + 1
        if len(counts) == 1 or len(indices) < 2:
            attach(parent, side, Leaf(counts, _majority_label(counts)))
            continue
        split = _best_split(feats, labs, indices, counts, width)
        if split is None:
            attach(parent, side, Leaf(counts, _majority_label(counts)))
            continue
        p, symbol, eq_idx, ne_idx = split
        node = Internal(p, symbol, placeholder, placeholder)
        attach(parent, side, node)
        stack.append((node, "ne", ne_idx))
        stack.append((node, "eq", eq_idx))
    return root_box[0]


def train(
    samples: list[Sample],
    window: WindowSpec,
    direction: Direction = ("", ""),
    table_fingerprint: str = "",
) -> TranslitModel:
    """Grow an unbounded-depth tree on ``samples``; deterministic given
    identical input order."""
    if not samples:
        raise EmptyTrainingSetError("cannot train on an empty sample list")
    width = window.width
    for sample in samples:
        if len(sample.features) != width:
            raise InconsistentFeatureWidthError(
                f"sample width {len(sample.features)} != window width {width}"
            )
    feats = [s.features for s in samples]
    labs = [s.label for s in samples]
    root = _grow(feats, labs, width)
    return TranslitModel(
        root=root,
        window=window,
        direction=direction,
        table_fingerprint=table_fingerprint,
    )


def predict(model: TranslitModel, features) -> str:
    """Route ``features`` to a leaf. Symbols never seen in training fail
    every equality test and follow the false branch."""
    if len(features) != model.window.width:
        raise WidthMismatchError(
            f"feature width {len(features)} != model width {model.window.width}"
        )
    node = model.root
    while isinstance(node, Internal):
        node = node.eq if features[node.feature_index] == node.test_symbol else node.ne
    return node.prediction


def tree_depth(root: TreeNode) -> int:
    depth = 0
    stack = [(root, 1)]
    while stack:
        node, d = stack.pop()
        depth = max(depth, d)
        if isinstance(node, Internal):
            stack.append((node.eq, d + 1))
            stack.append((node.ne, d + 1))
    return depth


def _node_to_obj(root: TreeNode):
    done: dict[int, dict] = {}
    stack: list[tuple[TreeNode, bool]] = [(root, False)]
    while stack:
        node, ready = stack.pop()
        if isinstance(node, Leaf):
            done[id(node)] = {
                "leaf": node.prediction,
                "counts": dict(sorted(node.class_counts.items())),
            }
        elif not ready:
            stack.append((node, True))
            stack.append((node.eq, False))
            stack.append((node.ne, False))
        else:
            done[id(node)] = {
                "f": node.feature_index,
                "s": node.test_symbol,
                "t": done[id(node.eq)],
                "e": done[id(node.ne)],
            }
    return done[id(root)]


def _obj_to_node(obj) -> TreeNode:
    if not isinstance(obj, dict):
        raise ModelFormatError("node is not an object")
    # Iterative conversion, mirroring _node_to_obj.
    done: dict[int, TreeNode] = {}
    stack: list[tuple[dict, bool]] = [(obj, False)]
    while stack:
        node_obj, ready = stack.pop()
        if "leaf" in node_obj:
            counts = node_obj.get("counts")
            if not isinstance(node_obj["leaf"], str) or not isinstance(counts, dict):
                raise ModelFormatError("malformed leaf node")
            done[id(node_obj)] = Leaf(dict(counts), node_obj["leaf"])
        elif not ready:
            for key in ("f", "s", "t", "e"):
                if key not in node_obj:
                    raise ModelFormatError(f"internal node missing field {key!r}")
            stack.append((node_obj, True))
            stack.append((node_obj["t"], False))
            stack.append((node_obj["e"], False))
        else:
            if not isinstance(node_obj["f"], int) or not isinstance(node_obj["s"], str):
                raise ModelFormatError("malformed internal node")
            done[id(node_obj)] = Internal(
                node_obj["f"],
                node_obj["s"],
                done[id(node_obj["t"])],
                done[id(node_obj["e"])],
            )
    return done[id(obj)]


class _recursion_headroom:
    """json both encodes and decodes recursively; deep tree chains need a
    temporarily raised interpreter limit."""

    def __init__(self, depth: int):
        self.wanted = depth * 4 + 1000

    def __enter__(self):
        self.saved = sys.getrecursionlimit()
        if self.wanted > self.saved:
            sys.setrecursionlimit(self.wanted)

    def __exit__(self, *exc):
        sys.setrecursionlimit(self.saved)


def serialize(model: TranslitModel) -> bytes:
    """Versioned JSON; PAD appears as the literal string "∅-PAD"."""
    obj = {
        "format_version": model.format_version,
        "direction": list(model.direction),
        "window": {"x": model.window.x, "y": model.window.y},
        "table_fingerprint": model.table_fingerprint,
        "root": _node_to_obj(model.root),
    }
    with _recursion_headroom(tree_depth(model.root)):
        text = json.dumps(obj, ensure_ascii=False, sort_keys=True, separators=(",", ":"))
    return text.encode("utf-8")


def deserialize(data: bytes) -> TranslitModel:
    with _recursion_headroom(data.count(b'"f"')):
        try:
            obj = json.loads(data.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as err:
            raise ModelFormatError(f"model file is not valid JSON: {err}") from err
    if not isinstance(obj, dict):
        raise ModelFormatError("model file is not a JSON object")
    version = obj.get("format_version")
    if not isinstance(version, int) or version != FORMAT_VERSION:
        raise ModelVersionError(
            f"unsupported model format_version {version!r}; this build reads {FORMAT_VERSION}"
        )
    try:
        window = WindowSpec(x=obj["window"]["x"], y=obj["window"]["y"])
        direction = tuple(obj["direction"])
        fingerprint = obj["table_fingerprint"]
        root = _obj_to_node(obj["root"])
    except (KeyError, TypeError) as err:
        raise ModelFormatError(f"model file missing fields: {err}") from err
    if len(direction) != 2 or not isinstance(fingerprint, str):
        raise ModelFormatError("malformed direction or fingerprint")
    return TranslitModel(
        root=root,
        window=window,
        direction=direction,  # type: ignore[arg-type]
        table_fingerprint=fingerprint,
        format_version=version,
    )


def save_model(model: TranslitModel, path) -> None:
    with open(path, "wb") as handle:
        handle.write(serialize(model))


def load_model(path) -> TranslitModel:
    with open(path, "rb") as handle:
        return deserialize(handle.read())
