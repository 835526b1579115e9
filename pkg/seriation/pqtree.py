"""
PQ-trees: a compact encoding of a family of permutations.

A P-node lets its children appear in any order, a Q-node only in the stored
order or its exact reverse. Reading the leaves left to right gives a frontier;
the frontier set is everything reachable by those reorderings.
"""

import json
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from itertools import chain, permutations, product
from typing import Dict, FrozenSet, List, Literal, Optional, Sequence, Tuple, Union

import graphviz
from pydantic import BaseModel, ConfigDict, StrictInt, StrictStr, ValidationError, model_validator

from seriation.errors import CapacityError, DomainError, TreeFormatError

logger = logging.getLogger(__name__)

Label = Union[int, str]
Permutation = Tuple[Label, ...]

DEFAULT_ENUMERATION_CAP = 10 ** 6
EQUIVALENCE_ENUMERATION_LIMIT = 10 ** 4


class NodeKind(str, Enum):
    """Kinds of PQ-tree nodes, valued as in the JSON interchange format."""
    LEAF = "leaf"
    P = "p"
    Q = "q"


class TreeFormat(str, Enum):
    JSON = "json"
    DOT = "dot"
    ASCII = "ascii"


def label_key(label: Label) -> tuple:
    """Sort key putting integer labels first, in numeric order, then strings."""
    if isinstance(label, int):
        return (0, label, "")
    return (1, 0, str(label))


@dataclass(frozen=True, repr=False)
class PQNode:
    """
    A leaf (label only) or an internal P/Q node (ordered children only).

    Construction accepts single-child internal nodes; canonicalize() splices
    them out.
    """

    kind: NodeKind
    label: Optional[Label] = None
    children: Tuple["PQNode", ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "kind", NodeKind(self.kind))
        object.__setattr__(self, "children", tuple(self.children))
        if self.kind is NodeKind.LEAF:
            if self.label is None:
                raise DomainError("leaf node needs a label")
            if self.children:
                raise DomainError(f"leaf {self.label!r} cannot have children")
        else:
            if self.label is not None:
                raise DomainError(f"{self.kind.value}-node cannot carry a label")
            if not self.children:
                raise DomainError(f"{self.kind.value}-node needs at least one child")

    @property
    def is_leaf(self) -> bool:
        return self.kind is NodeKind.LEAF

    def __repr__(self) -> str:
        if self.is_leaf:
            return str(self.label)
        return f"{self.kind.value.upper()}({','.join(repr(c) for c in self.children)})"


def _as_node(item: Union[PQNode, Label]) -> PQNode:
    return item if isinstance(item, PQNode) else leaf(item)


def leaf(label: Label) -> PQNode:
    return PQNode(NodeKind.LEAF, label)


def p_node(*children: Union[PQNode, Label]) -> PQNode:
    """P-node over the given children; bare labels become leaves."""
    return PQNode(NodeKind.P, None, tuple(_as_node(c) for c in children))


def q_node(*children: Union[PQNode, Label]) -> PQNode:
    """Q-node over the given children; bare labels become leaves."""
    return PQNode(NodeKind.Q, None, tuple(_as_node(c) for c in children))


def leaf_labels(node: PQNode) -> List[Label]:
    """Leaf labels below a node, left to right."""
    labels = []
    stack = [node]
    while stack:
        current = stack.pop()
        if current.is_leaf:
            labels.append(current.label)
        else:
            stack.extend(reversed(current.children))
    return labels


@dataclass(frozen=True)
class PQTree:
    """A PQ-tree over the universe of its leaf labels; each label appears once."""

    root: PQNode
    universe: FrozenSet[Label] = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        labels = leaf_labels(self.root)
        universe = frozenset(labels)
        if len(universe) != len(labels):
            seen = set()
            dupes = sorted({x for x in labels if x in seen or seen.add(x)}, key=label_key)
            raise DomainError(f"leaf labels must be distinct; repeated: {dupes}")
        object.__setattr__(self, "universe", universe)

    def __len__(self) -> int:
        return len(self.universe)

    def __repr__(self) -> str:
        return f"PQTree({self.root!r})"


def frontier(tree: PQTree) -> Permutation:
    """Leaf labels in their current left-to-right order."""
    return tuple(leaf_labels(tree.root))


def _node_count(node: PQNode) -> int:
    if node.is_leaf:
        return 1
    k = len(node.children)
    factor = math.factorial(k) if node.kind is NodeKind.P else (2 if k >= 2 else 1)
    return factor * math.prod(_node_count(c) for c in node.children)


def count_frontiers(tree: PQTree) -> int:
    """
    Number of admissible frontiers, as an exact integer.

    Each P-node with k children contributes k!, each Q-node with at least two
    children a factor 2.
    """
    return _node_count(tree.root)


def _node_frontiers(node: PQNode) -> List[Permutation]:
    if node.is_leaf:
        return [(node.label,)]
    child_sets = [_node_frontiers(c) for c in node.children]
    k = len(child_sets)
    if node.kind is NodeKind.P:
        orders = permutations(range(k))
    elif k >= 2:
        orders = [tuple(range(k)), tuple(reversed(range(k)))]
    else:
        orders = [(0,)]
    result = []
    for order in orders:
        for combo in product(*(child_sets[i] for i in order)):
            result.append(tuple(chain.from_iterable(combo)))
    return result


def enumerate_frontiers(tree: PQTree, cap: int = DEFAULT_ENUMERATION_CAP) -> List[Permutation]:
    """
    Every admissible frontier exactly once, in lexicographic label order.

    Raises:
        CapacityError: The frontier count exceeds cap; nothing is enumerated.
    """
    count = count_frontiers(tree)
    if count > cap:
        raise CapacityError(count, cap)
    result = _node_frontiers(tree.root)
    result.sort(key=lambda perm: tuple(label_key(x) for x in perm))
    return result


def _admissible(node: PQNode, segment: Sequence[Label]) -> bool:
    if node.is_leaf:
        return True
    owner: Dict[Label, int] = {}
    for i, child in enumerate(node.children):
        for label in leaf_labels(child):
            owner[label] = i
    runs: List[int] = []
    starts: List[int] = []
    for pos, label in enumerate(segment):
        i = owner[label]
        if not runs or runs[-1] != i:
            runs.append(i)
            starts.append(pos)
    k = len(node.children)
    # every child occurs, so k runs means each child is one contiguous block
    if len(runs) != k:
        return False
    if node.kind is NodeKind.Q and runs != list(range(k)) and runs != list(reversed(range(k))):
        return False
    starts.append(len(segment))
    return all(
        _admissible(node.children[child], segment[starts[j]:starts[j + 1]])
        for j, child in enumerate(runs)
    )


def contains(tree: PQTree, perm: Sequence[Label]) -> bool:
    """
    Membership of a permutation in the frontier set, decided structurally.

    Raises:
        DomainError: perm is not a permutation of the tree's leaf labels.
    """
    perm = tuple(perm)
    if len(perm) != len(tree.universe) or set(perm) != tree.universe:
        raise DomainError(f"{list(perm)} is not a permutation of the tree's {len(tree.universe)} leaf labels")
    return _admissible(tree.root, perm)


def _min_key(node: PQNode) -> tuple:
    return min(label_key(x) for x in leaf_labels(node))


def _canonical(node: PQNode) -> PQNode:
    if node.is_leaf:
        return node
    children = [_canonical(c) for c in node.children]
    if len(children) == 1:
        return children[0]
    kind = node.kind
    if kind is NodeKind.Q and len(children) == 2:
        kind = NodeKind.P
    if kind is NodeKind.P:
        children.sort(key=_min_key)
    return PQNode(kind, None, tuple(children))


def canonicalize(tree: PQTree) -> PQTree:
    """
    Canonical form with the same frontier set.

    Single-child internal nodes are spliced out, 2-child Q-nodes become
    P-nodes and P-node children are sorted by their smallest leaf label.
    """
    return PQTree(_canonical(tree.root))


def _oriented(node: PQNode) -> PQNode:
    if node.is_leaf:
        return node
    children = [_oriented(c) for c in node.children]
    if node.kind is NodeKind.Q and _min_key(children[0]) > _min_key(children[-1]):
        children.reverse()
    return PQNode(node.kind, None, tuple(children))


def equivalent(first: PQTree, second: PQTree,
               enumeration_limit: int = EQUIVALENCE_ENUMERATION_LIMIT) -> bool:
    """True iff both trees encode the same frontier set."""
    if first.universe != second.universe:
        return False
    count = count_frontiers(first)
    if count != count_frontiers(second):
        return False
    if _oriented(canonicalize(first).root) == _oriented(canonicalize(second).root):
        return True
    if count <= enumeration_limit:
        logger.debug("canonical forms differ, comparing %d frontiers", count)
        return set(enumerate_frontiers(first, cap=count)) == set(enumerate_frontiers(second, cap=count))
    return False


def _node_to_dict(node: PQNode) -> dict:
    if node.is_leaf:
        return {"kind": NodeKind.LEAF.value, "label": node.label}
    return {"kind": node.kind.value, "children": [_node_to_dict(c) for c in node.children]}


def tree_to_dict(tree: PQTree) -> dict:
    return _node_to_dict(tree.root)


def _to_dot(tree: PQTree) -> str:
    dot = graphviz.Digraph("PQTree", graph_attr={"ordering": "out"})
    counter = 0

    def visit(node: PQNode) -> str:
        nonlocal counter
        name = f"n{counter}"
        counter += 1
        if node.is_leaf:
            dot.node(name, label=str(node.label), shape="triangle")
            return name
        if node.kind is NodeKind.P:
            dot.node(name, label="P", shape="circle")
        else:
            dot.node(name, label="Q", shape="box")
        for child in node.children:
            dot.edge(name, visit(child))
        return name

    visit(tree.root)
    return dot.source


def _to_ascii(tree: PQTree) -> str:
    def title(node: PQNode) -> str:
        return str(node.label) if node.is_leaf else node.kind.value.upper()

    lines = [title(tree.root)]

    def visit(node: PQNode, prefix: str):
        for i, child in enumerate(node.children):
            last = i == len(node.children) - 1
            lines.append(f"{prefix}{'└── ' if last else '├── '}{title(child)}")
            if not child.is_leaf:
                visit(child, prefix + ("    " if last else "│   "))

    visit(tree.root, "")
    return "\n".join(lines)


def to_text(tree: PQTree, fmt: Union[TreeFormat, str] = TreeFormat.JSON, indent: Optional[int] = None) -> str:
    """
    Render a tree as json, dot or an ascii outline.

    Args:
        tree: The tree to render.
        fmt: One of json, dot, ascii.
        indent: JSON indentation; None gives the compact form.
    """
    fmt = TreeFormat(fmt)
    if fmt is TreeFormat.JSON:
        separators = (",", ":") if indent is None else (",", ": ")
        return json.dumps(tree_to_dict(tree), indent=indent, separators=separators)
    if fmt is TreeFormat.DOT:
        return _to_dot(tree)
    return _to_ascii(tree)


class _NodeDocument(BaseModel):
    """JSON schema of a serialized node."""

    model_config = ConfigDict(extra="forbid")

    kind: Literal["leaf", "p", "q"]
    label: Optional[Union[StrictInt, StrictStr]] = None
    children: Optional[List["_NodeDocument"]] = None

    @model_validator(mode="after")
    def _check_shape(self):
        if self.kind == "leaf":
            if self.label is None:
                raise ValueError("leaf node needs a label")
            if self.children:
                raise ValueError("leaf node cannot have children")
        else:
            if self.label is not None:
                raise ValueError(f"{self.kind}-node cannot carry a label")
            if not self.children:
                raise ValueError(f"{self.kind}-node needs at least one child")
        return self

    def to_node(self) -> PQNode:
        if self.kind == "leaf":
            return leaf(self.label)
        return PQNode(NodeKind(self.kind), None, tuple(c.to_node() for c in self.children))


_NodeDocument.model_rebuild()


def _error_path(loc: tuple) -> str:
    path = "$"
    for part in loc:
        path += f"[{part}]" if isinstance(part, int) else f".{part}"
    return path


def from_dict(document: dict) -> PQTree:
    """Build a tree from a decoded JSON node object."""
    try:
        parsed = _NodeDocument.model_validate(document)
    except ValidationError as e:
        first = e.errors()[0]
        raise TreeFormatError(first["msg"], _error_path(first["loc"])) from e
    try:
        return PQTree(parsed.to_node())
    except DomainError as e:
        raise TreeFormatError(str(e)) from e


def from_text(text: str) -> PQTree:
    """
    Read a tree written by to_text(tree, "json").

    Raises:
        TreeFormatError: Malformed JSON or schema violation; carries a JSON path.
    """
    try:
        document = json.loads(text)
    except json.JSONDecodeError as e:
        raise TreeFormatError(f"invalid JSON: {e.msg} at line {e.lineno} column {e.colno}") from e
    return from_dict(document)
