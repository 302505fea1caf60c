"""Disordered dynamic-automorphism color codes.

Exact color-code anyon and automorphism algebra, compilation and
classification of anyon-condensation measurement schedules under
missing-measurement disorder, a bit-packed stabilizer Monte Carlo
engine, and an independent bond-percolation criticality oracle.
"""

from .anyons import (ALL_ANYONS, BOSONS, FERMIONS_F, FERMIONS_FPRIME, VACUUM,
                     anyon_name, braid, fermion_group, fuse, parse_anyon,
                     spin, theta)
from .automorphisms import (Automorphism, CONJUGACY_CLASSES,
                            all_automorphisms, invariant_anyons,
                            invariant_mutual_semion_pairs, lemma1_check,
                            localized_anyons, transition_map)
from .engine import MeasurementOutcomeStream, Tableau
from .fetgraph import (adjacent, classify_m_component, distance, fet_graph,
                       logically_connected, protected_algebra, witness_model)
from .lattice import (HoneycombTorus, LogicalRepresentative, PauliOperator,
                      build_lattice, logical_representative,
                      standard_logicals)
from .naive_engine import NaiveTableau
from .sequences import (CondensedBoson, DisorderModel, IrrP,
                        MeasurementSequence, SequenceError, Stage,
                        check_reversible, compute_automorphism, concatenate,
                        measured_anyon, synthesize_sequence)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
