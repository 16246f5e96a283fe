"""Stoichiometric matrix extraction."""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import null_space

from .document import ModelDocument
from .validation import require_valid


@dataclass(frozen=True, eq=False)
class StoichiometricMatrix:
    """Species x reactions matrix of net coefficients (products positive)."""

    species: tuple[str, ...]
    reactions: tuple[str, ...]
    values: np.ndarray

    def entry(self, species_id: str, reaction_id: str) -> float:
        i = self.species.index(species_id)
        return float(self.values[i, self.reactions.index(reaction_id)])

    def column(self, reaction_id: str) -> dict[str, float]:
        """Nonzero coefficients of one reaction keyed by species id."""
        j = self.reactions.index(reaction_id)
        return {
            s: float(self.values[i, j]) for i, s in enumerate(self.species) if self.values[i, j]
        }

    def cycles(self, tol: float = 1e-10) -> np.ndarray:
        """Orthonormal basis of the right null space (one column per cycle)."""
        if not self.reactions:
            return np.zeros((0, 0))
        if not self.species:
            return np.eye(len(self.reactions))
        return null_space(self.values, rcond=tol)

    def rank(self) -> int:
        if self.values.size == 0:
            return 0
        return int(np.linalg.matrix_rank(self.values))


def stoichiometric_matrix(doc: ModelDocument) -> StoichiometricMatrix:
    """Build N with n_ri = product stoichiometry - reactant stoichiometry.

    Raises:
        InvalidModel: the document has validation errors
    """
    require_valid(doc)
    species = tuple(s.id for s in doc.species)
    reactions = tuple(r.id for r in doc.reactions)
    row = {species_id: i for i, species_id in enumerate(species)}
    values = np.zeros((len(species), len(reactions)))
    for j, reaction in enumerate(doc.reactions):
        for reference in reaction.reactants:
            values[row[reference.species], j] -= reference.stoichiometry
        for reference in reaction.products:
            values[row[reference.species], j] += reference.stoichiometry
    return StoichiometricMatrix(species, reactions, values)
