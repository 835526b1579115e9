"""Spectral seriation of unit x feature data, with PQ-trees for the admissible orderings."""

from seriation.errors import (
    CapacityError,
    ContractError,
    DomainError,
    FixtureNotFoundError,
    MatrixParseError,
    MatrixShapeError,
    NumericError,
    SeriationError,
    TreeFormatError,
)
from seriation.matrixio import (
    AbundanceMatrix,
    BinaryMatrix,
    binarize,
    bipartite_block,
    fixture,
    fixture_names,
    parse_matrix,
    permutation_table,
    permute_matrix,
    read_matrix,
    serialize_matrix,
)
from seriation.pqtree import (
    NodeKind,
    PQNode,
    PQTree,
    canonicalize,
    contains,
    count_frontiers,
    enumerate_frontiers,
    equivalent,
    from_text,
    frontier,
    leaf,
    p_node,
    q_node,
    to_text,
)
from seriation.spectral import (
    FiedlerInfo,
    IllPosedPolicy,
    LaplacianMatrix,
    SeriationResult,
    SimilarityMatrix,
    Tolerances,
    connected_components,
    fiedler_info,
    laplacian,
    robinson_check,
    seriate_similarity,
    similarity,
    smallest_eigenpairs,
    spectral_seriation,
)
