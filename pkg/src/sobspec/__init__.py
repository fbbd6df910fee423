"""Moment matrices, matrix Sobolev inner products, and boundedness diagnostics.

Library layout:

    scalars       exact Gaussian-rational and float complex scalars
    matrices      dense Hermitian truncations in either scalar mode
    kernels       compiled/pure hot kernels (Jacobi, Hessenberg QR, Cholesky)
    exact_linalg  factorizations, pencil reduction, companion roots
    measures      catalog of planar measures with closed-form moments
    sources       matrix sources feeding the diagnostics at any size
    sobolev       derivative operators and assembled inner products
    orthopoly     monic/orthonormal families, zeros, zero bounds
    diagnostics   eigenvalue sequences, ratio/norm/domination criteria
    matrixfile    file formats and run manifests
    cache         on-disk truncation cache
    cli           command-line interface (``sobspec`` entry point)
"""

from sobspec.matrices import EXACT, FLOAT, HermitianTruncation
from sobspec.measures import (
    Circle,
    UnitCircleLebesgue,
    UnitDiskArea,
    WeightedCircle,
    WeightedSum,
    hull,
    moment,
    moment_matrix,
    parse_measure,
    quadrature_moment_oracle,
)
from sobspec.scalars import RationalComplex, rational
from sobspec.sobolev import (
    Polynomial,
    SobolevSource,
    SobolevSpec,
    derivative_operator,
    inner_product,
    sobolev_inner_product_direct,
    sobolev_matrix,
)
from sobspec.sources import (
    FixedMatrixSource,
    IdentitySource,
    MeasureSource,
    SumSource,
)

__version__ = "0.1.0"

__all__ = [
    "EXACT",
    "FLOAT",
    "HermitianTruncation",
    "RationalComplex",
    "rational",
    "Circle",
    "UnitCircleLebesgue",
    "UnitDiskArea",
    "WeightedCircle",
    "WeightedSum",
    "hull",
    "moment",
    "moment_matrix",
    "parse_measure",
    "quadrature_moment_oracle",
    "Polynomial",
    "SobolevSpec",
    "SobolevSource",
    "derivative_operator",
    "inner_product",
    "sobolev_inner_product_direct",
    "sobolev_matrix",
    "MeasureSource",
    "IdentitySource",
    "FixedMatrixSource",
    "SumSource",
    "__version__",
]
