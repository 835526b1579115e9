"""
Spectral seriation.

Builds the unit similarity S = B B^T of a binary matrix, splits it into
connected components and orders every component by the Fiedler vector of its
Laplacian, recursing on blocks of tied entries. The result is a PQ-tree whose
frontiers are the orderings the data cannot tell apart.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.linalg
from pydantic import BaseModel, ConfigDict, PositiveFloat, PositiveInt
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components as _csgraph_components

from seriation.errors import ContractError, DomainError, NumericError
from seriation.matrixio import AbundanceMatrix, BinaryMatrix, Label, binarize
from seriation.pqtree import (
    PQNode,
    PQTree,
    canonicalize,
    count_frontiers,
    frontier,
    leaf,
    p_node,
    q_node,
    tree_to_dict,
)

logger = logging.getLogger(__name__)


class Tolerances(BaseModel):
    """
    Numeric thresholds of the algorithm.

    eig_tol bounds eigenpair residuals relative to max(1, ||L||_inf), mult_tol is
    the relative gap under which two eigenvalues count as equal and tie_tol the
    gap, relative to ||v||_inf, under which Fiedler entries count as repeated.
    n_eigs is how many of the smallest eigenvalues are reported per component.
    """

    model_config = ConfigDict(frozen=True)

    eig_tol: PositiveFloat = 1e-8
    mult_tol: PositiveFloat = 1e-8
    tie_tol: PositiveFloat = 1e-8
    n_eigs: PositiveInt = 3


class IllPosedPolicy(str, Enum):
    """What to emit for a component whose Fiedler value is multiple or whose vector is constant."""
    P_COLLAPSE = "p-collapse"
    FIRST_VECTOR = "first-vector"


def _as_square(entries, what: str) -> np.ndarray:
    entries = np.asarray(entries)
    if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
        raise DomainError(f"{what} must be square, got shape {entries.shape}")
    if entries.dtype.kind in "biu":
        entries = np.array(entries, dtype=np.int64)
    elif entries.dtype.kind == "f":
        entries = np.array(entries, dtype=np.float64)
    else:
        raise DomainError(f"{what} entries must be numeric, got dtype {entries.dtype}")
    entries.setflags(write=False)
    return entries


def _labels_for(labels: Sequence[Label], order: int) -> Tuple[Label, ...]:
    labels = tuple(labels) if labels else tuple(range(1, order + 1))
    if len(labels) != order:
        raise DomainError(f"{len(labels)} labels for a matrix of order {order}")
    return labels


def _is_symmetric(entries: np.ndarray) -> bool:
    if entries.dtype.kind == "f":
        return np.allclose(entries, entries.T, rtol=0.0, atol=1e-12 * max(1.0, float(np.abs(entries).max(initial=0))))
    return np.array_equal(entries, entries.T)


@dataclass(frozen=True, eq=False)
class SimilarityMatrix:
    """Symmetric non-negative unit x unit similarity; integer for binary data."""

    entries: np.ndarray
    labels: Tuple[Label, ...] = field(default=())

    def __post_init__(self):
        entries = _as_square(self.entries, "similarity matrix")
        if entries.size and entries.min() < 0:
            raise DomainError("similarity entries must be non-negative")
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "labels", _labels_for(self.labels, entries.shape[0]))

    @property
    def order(self) -> int:
        return self.entries.shape[0]

    def submatrix(self, indices: Sequence[int]) -> "SimilarityMatrix":
        """Principal submatrix on the given 0-based indices."""
        indices = list(indices)
        return SimilarityMatrix(self.entries[np.ix_(indices, indices)], tuple(self.labels[i] for i in indices))

    def __eq__(self, other) -> bool:
        if not isinstance(other, SimilarityMatrix):
            return NotImplemented
        return np.array_equal(self.entries, other.entries) and self.labels == other.labels

    __hash__ = None


@dataclass(frozen=True, eq=False)
class LaplacianMatrix:
    """L = diag(S 1) - S. Integer when S is."""

    entries: np.ndarray
    labels: Tuple[Label, ...] = field(default=())

    def __post_init__(self):
        entries = _as_square(self.entries, "Laplacian")
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "labels", _labels_for(self.labels, entries.shape[0]))

    @property
    def order(self) -> int:
        return self.entries.shape[0]

    @property
    def norm_inf(self) -> float:
        return float(np.abs(self.entries).sum(axis=1).max(initial=0))


@dataclass(frozen=True, eq=False)
class FiedlerInfo:
    """
    Second-smallest Laplacian eigenpair of a connected component.

    basis holds the whole Fiedler eigenspace as columns; vector is its first
    column with a deterministic sign. eigengap is None when the eigenspace runs
    up to the largest eigenvalue.
    """

    value: float
    multiplicity: int
    vector: np.ndarray
    eigengap: Optional[float]
    basis: np.ndarray
    eigenvalues: Tuple[float, ...]

    @property
    def simple(self) -> bool:
        return self.multiplicity == 1

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "multiplicity": self.multiplicity,
            "eigengap": self.eigengap,
            "eigenvalues": list(self.eigenvalues),
            "vector": self.vector.tolist(),
        }


class NoticeKind(str, Enum):
    BINARIZED = "binarized"
    ILL_POSED = "ill-posed"


@dataclass(frozen=True)
class Notice:
    """A structured warning attached to a seriation result."""

    kind: NoticeKind
    message: str
    units: Tuple[Label, ...] = ()
    basis: Optional[Tuple[Tuple[float, ...], ...]] = None

    def __str__(self) -> str:
        return f"{self.kind.value}: {self.message}"

    def to_dict(self) -> dict:
        result = {"kind": self.kind.value, "message": self.message, "units": list(self.units)}
        if self.basis is not None:
            result["basis"] = [list(column) for column in self.basis]
        return result


@dataclass
class ComponentReport:
    """Diagnostics of one recursion step: a connected component or a tie block below it."""

    units: Tuple[Label, ...]
    fiedler: Optional[FiedlerInfo] = None
    ill_posed: bool = False
    children: List["ComponentReport"] = field(default_factory=list)

    @property
    def size(self) -> int:
        return len(self.units)

    @property
    def trivial(self) -> bool:
        return self.size <= 2

    def to_dict(self) -> dict:
        return {
            "units": list(self.units),
            "size": self.size,
            "trivial": self.trivial,
            "ill_posed": self.ill_posed,
            "fiedler": self.fiedler.to_dict() if self.fiedler is not None else None,
            "children": [c.to_dict() for c in self.children],
        }


@dataclass
class SeriationResult:
    tree: PQTree
    components: List[ComponentReport]
    warnings: List[Notice]
    tolerances: Tolerances = field(default_factory=Tolerances)
    policy: IllPosedPolicy = IllPosedPolicy.P_COLLAPSE

    @property
    def ill_posed(self) -> bool:
        return any(w.kind is NoticeKind.ILL_POSED for w in self.warnings)

    @property
    def count(self) -> int:
        return count_frontiers(self.tree)

    def report(self) -> dict:
        """JSON-ready diagnostics; the frontier count is a decimal string."""
        return {
            "tree": tree_to_dict(self.tree),
            "frontier": list(frontier(self.tree)),
            "count": str(self.count),
            "policy": self.policy.value,
            "tolerances": self.tolerances.model_dump(),
            "components": [c.to_dict() for c in self.components],
            "warnings": [w.to_dict() for w in self.warnings],
        }


def similarity(matrix: AbundanceMatrix) -> SimilarityMatrix:
    """
    S = B B^T for a binary matrix B.

    Raises:
        DomainError: B has entries other than 0 and 1; binarize it first.
    """
    if not matrix.is_binary:
        raise DomainError("similarity needs a binary matrix; binarize the abundance data first")
    b = matrix.entries
    return SimilarityMatrix(b @ b.T, matrix.row_labels)


def permute_square(matrix: SimilarityMatrix, order: Sequence[Label]) -> SimilarityMatrix:
    """Reorder rows and columns of a similarity matrix by a sequence of labels."""
    order = list(order)
    if len(order) != matrix.order or set(order) != set(matrix.labels):
        raise DomainError(f"{order} is not a permutation of the matrix labels")
    position = {label: i for i, label in enumerate(matrix.labels)}
    return matrix.submatrix([position[label] for label in order])


def laplacian(matrix: SimilarityMatrix) -> LaplacianMatrix:
    """
    Combinatorial Laplacian D - S with D the diagonal of row sums.

    The diagonal of S cancels, so only cross-unit similarity matters.

    Raises:
        DomainError: S is not symmetric.
    """
    s = matrix.entries
    if not _is_symmetric(s):
        raise DomainError("Laplacian needs a symmetric similarity matrix")
    off = s.copy()
    np.fill_diagonal(off, 0)
    return LaplacianMatrix(np.diag(off.sum(axis=1)) - off, matrix.labels)


def _components(entries: np.ndarray) -> List[Tuple[int, ...]]:
    n = entries.shape[0]
    if n == 0:
        return []
    adjacency = entries > 0
    np.fill_diagonal(adjacency, False)
    count, membership = _csgraph_components(csr_matrix(adjacency), directed=False)
    groups = [tuple(int(i) for i in np.flatnonzero(membership == c)) for c in range(count)]
    return sorted(groups, key=lambda group: group[0])


def connected_components(matrix: SimilarityMatrix) -> List[Tuple[int, ...]]:
    """
    Connected components of the graph of positive off-diagonal similarities.

    Returns:
        0-based index tuples ordered by their smallest member. Units without
        any shared feature come out as singletons.
    """
    return _components(matrix.entries)


def smallest_eigenpairs(matrix: LaplacianMatrix, k: int,
                        tol: Optional[Tolerances] = None) -> Tuple[np.ndarray, np.ndarray]:
    """
    The k smallest eigenpairs of a symmetric Laplacian.

    Returns:
        (values, vectors): ascending eigenvalues and orthonormal eigenvectors
        as the columns of an n x k array.

    Raises:
        DomainError: k is not in 1..n.
        NumericError: The solver failed or a residual exceeds
            eig_tol * max(1, ||L||_inf).
    """
    tol = tol or Tolerances()
    n = matrix.order
    if k < 1 or k > n:
        raise DomainError(f"cannot compute {k} eigenpairs of a matrix of order {n}")
    a = matrix.entries.astype(np.float64)
    try:
        values, vectors = scipy.linalg.eigh(a, subset_by_index=[0, k - 1])
    except (np.linalg.LinAlgError, ValueError) as e:
        raise NumericError(f"eigensolver failed: {e}") from e

    bound = tol.eig_tol * max(1.0, matrix.norm_inf)
    residual = float(np.abs(a @ vectors - vectors * values).max(initial=0))
    if not np.isfinite(residual) or residual > bound:
        raise NumericError(f"eigenpair residual {residual:.3e} exceeds {bound:.3e}")
    logger.debug("order %d: %d smallest eigenvalues %s (residual %.2e)", n, k, values, residual)
    return values, vectors


def _fix_sign(vector: np.ndarray, tie_tol: float) -> np.ndarray:
    scale = float(np.abs(vector).max(initial=0))
    significant = np.flatnonzero(np.abs(vector) > tie_tol * scale)
    if significant.size and vector[significant[0]] < 0:
        return -vector
    return vector


def fiedler_info(matrix: LaplacianMatrix, tol: Optional[Tolerances] = None) -> FiedlerInfo:
    """
    Fiedler value, its multiplicity and a representative vector.

    More eigenpairs than the default three are requested while the eigenvalues
    seen so far all equal the Fiedler value.

    Raises:
        DomainError: Fewer than three units.
        ContractError: A second zero eigenvalue, i.e. the graph is disconnected.
    """
    tol = tol or Tolerances()
    n = matrix.order
    if n < 3:
        raise DomainError(f"Fiedler analysis needs at least 3 units, got {n}")
    zero = tol.eig_tol * max(1.0, matrix.norm_inf)
    k = min(n, max(3, tol.n_eigs))
    while True:
        values, vectors = smallest_eigenpairs(matrix, k, tol)
        if values[1] <= zero:
            raise ContractError(
                "Laplacian has more than one zero eigenvalue; "
                "split the similarity matrix into connected components first"
            )
        value = float(values[1])
        threshold = tol.mult_tol * max(1.0, abs(value))
        end = 2
        while end < k and abs(values[end] - value) <= threshold:
            end += 1
        if end == k and k < n:
            k = min(n, 2 * k)
            continue
        break

    multiplicity = end - 1
    basis = np.column_stack([_fix_sign(vectors[:, j], tol.tie_tol) for j in range(1, end)])
    eigengap = float(values[end] - value) if end < k else None
    return FiedlerInfo(
        value=value,
        multiplicity=multiplicity,
        vector=basis[:, 0].copy(),
        eigengap=eigengap,
        basis=basis,
        eigenvalues=tuple(float(x) for x in values),
    )


def tie_blocks(vector: np.ndarray, tie_tol: float) -> List[List[int]]:
    """
    Indices sorted by vector entry and grouped into blocks of repeated values.

    Consecutive sorted entries closer than tie_tol * ||v||_inf share a block.
    """
    vector = np.asarray(vector, dtype=np.float64)
    order = np.argsort(vector, kind="stable")
    threshold = tie_tol * float(np.abs(vector).max(initial=0))
    blocks: List[List[int]] = []
    for pos, i in enumerate(order):
        if pos and vector[i] - vector[order[pos - 1]] <= threshold:
            blocks[-1].append(int(i))
        else:
            blocks.append([int(i)])
    return blocks


def _seriate_component(entries: np.ndarray, labels: Tuple[Label, ...], tol: Tolerances,
                       policy: IllPosedPolicy, notices: List[Notice]) -> Tuple[PQNode, ComponentReport]:
    n = len(labels)
    if n == 1:
        return leaf(labels[0]), ComponentReport(labels)
    if n == 2:
        return p_node(*labels), ComponentReport(labels)

    try:
        info = fiedler_info(laplacian(SimilarityMatrix(entries, labels)), tol)
    except NumericError as e:
        if e.component is not None:
            raise
        raise NumericError(str(e), component=labels) from e

    blocks = tie_blocks(info.vector, tol.tie_tol)
    report = ComponentReport(labels, info)
    if info.multiplicity > 1 or len(blocks) == 1:
        report.ill_posed = True
        reason = (f"Fiedler value {info.value:.6g} has multiplicity {info.multiplicity}"
                  if info.multiplicity > 1 else "Fiedler vector is constant")
        notice = Notice(
            NoticeKind.ILL_POSED,
            f"component {list(labels)}: {reason}",
            units=labels,
            basis=tuple(tuple(float(x) for x in column) for column in info.basis.T),
        )
        notices.append(notice)
        logger.warning("%s", notice)
        if policy is IllPosedPolicy.P_COLLAPSE or len(blocks) == 1:
            return p_node(*labels), report

    children = []
    for block in blocks:
        if len(block) == 1:
            children.append(leaf(labels[block[0]]))
            continue
        node, sub_reports = _seriate(entries[np.ix_(block, block)], tuple(labels[i] for i in block),
                                     tol, policy, notices)
        children.append(node)
        report.children.extend(sub_reports)
    return q_node(*children), report


def _seriate(entries: np.ndarray, labels: Tuple[Label, ...], tol: Tolerances, policy: IllPosedPolicy,
             notices: List[Notice]) -> Tuple[PQNode, List[ComponentReport]]:
    nodes, reports = [], []
    for component in _components(entries):
        node, report = _seriate_component(entries[np.ix_(component, component)],
                                          tuple(labels[i] for i in component), tol, policy, notices)
        nodes.append(node)
        reports.append(report)
    if len(nodes) == 1:
        return nodes[0], reports
    return p_node(*nodes), reports


def seriate_similarity(matrix: SimilarityMatrix, tol: Optional[Tolerances] = None,
                       policy: Union[IllPosedPolicy, str] = IllPosedPolicy.P_COLLAPSE,
                       workers: int = 1) -> SeriationResult:
    """
    Run the recursive spectral algorithm on a similarity matrix.

    Args:
        matrix: Symmetric similarity; any non-negative reals are accepted.
        tol: Numeric thresholds, defaults when None.
        policy: Handling of ill-posed components.
        workers: Threads for the top-level components. Results are merged in
            component order, so the output does not depend on it.

    Raises:
        DomainError: Empty or asymmetric matrix.
        NumericError: Eigensolver failure, naming the component.
    """
    tol = tol or Tolerances()
    policy = IllPosedPolicy(policy)
    if matrix.order == 0:
        raise DomainError("cannot seriate an empty matrix")
    if not _is_symmetric(matrix.entries):
        raise DomainError("similarity matrix must be symmetric")

    entries, labels = matrix.entries, matrix.labels
    components = _components(entries)

    def run(component: Tuple[int, ...]):
        local: List[Notice] = []
        node, report = _seriate_component(entries[np.ix_(component, component)],
                                          tuple(labels[i] for i in component), tol, policy, local)
        return node, report, local

    if workers > 1 and len(components) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(run, components))
    else:
        outcomes = [run(c) for c in components]

    nodes = [node for node, _, _ in outcomes]
    root = nodes[0] if len(nodes) == 1 else p_node(*nodes)
    tree = canonicalize(PQTree(root))
    logger.info("seriated %d units in %d component(s)", matrix.order, len(components))
    return SeriationResult(
        tree=tree,
        components=[report for _, report, _ in outcomes],
        warnings=[notice for _, _, local in outcomes for notice in local],
        tolerances=tol,
        policy=policy,
    )


def spectral_seriation(matrix: AbundanceMatrix, tol: Optional[Tolerances] = None,
                       policy: Union[IllPosedPolicy, str] = IllPosedPolicy.P_COLLAPSE,
                       workers: int = 1) -> SeriationResult:
    """
    Seriate the rows of an abundance or binary matrix.

    Abundance data is binarized first and a 'binarized' notice is recorded.

    Raises:
        DomainError: The matrix has no rows.
        NumericError: Eigensolver failure, naming the component.
    """
    if matrix.rows == 0:
        raise DomainError("cannot seriate an empty matrix")
    notices: List[Notice] = []
    if not matrix.is_binary:
        notice = Notice(NoticeKind.BINARIZED, "abundance data binarized before seriation")
        notices.append(notice)
        logger.warning("%s", notice)
    binary = matrix if isinstance(matrix, BinaryMatrix) else binarize(matrix)
    result = seriate_similarity(similarity(binary), tol, policy, workers)
    result.warnings[:0] = notices
    return result


def _rows_unimodal(a: np.ndarray) -> bool:
    return not any(
        np.any(np.diff(a[i, i:]) > 0) or np.any(np.diff(a[i, :i + 1][::-1]) > 0)
        for i in range(a.shape[0])
    )


def robinson_check(matrix: Union[SimilarityMatrix, np.ndarray]) -> bool:
    """True iff entries never increase moving away from the diagonal, along rows and columns."""
    a = matrix.entries if isinstance(matrix, SimilarityMatrix) else np.asarray(matrix)
    return _rows_unimodal(a) and _rows_unimodal(a.T)
