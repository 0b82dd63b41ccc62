"""dqlab: exact computational homological algebra at desk scale.

Computes cohomology and products of derived quotients of finite-dimensional
algebras by idempotents, contraction algebras from quiver presentations,
stable Ext over hypersurface singularities via matrix factorizations, and
Milnor/Tjurina invariants, with two independent pipelines that can be
cross-checked degree by degree.
"""

from dqlab.exactlin import QQ, PrimeField, Mat, Subspace, rref, kernel_basis, quotient_dim

__all__ = [
    "QQ",
    "PrimeField",
    "Mat",
    "Subspace",
    "rref",
    "kernel_basis",
    "quotient_dim",
]

__version__ = "0.1.0"
