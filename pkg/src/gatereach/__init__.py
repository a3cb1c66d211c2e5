"""gatereach: reachability, minimum time and pulse synthesis for two-qubit
gates driven by a time-varying coupling plus fast local controls."""

from .canonical import (HamiltonianCanonicalForm, UnitaryCanonicalForm,
                        canon_hamiltonian, canon_unitary,
                        equivalent_gate_vectors, phi_to_theta, s_reorder,
                        theta_to_phi, weyl_reduce)
from .majorization import (BirkhoffDecomposition, birkhoff, majorizes,
                           phi_major_equiv_check, s_majorizes,
                           schur_horn_rotation, transfer_matrix)
from .profiles import (ConstantProfile, CouplingProfile, MasDipolarProfile,
                       PiecewiseConstantProfile, SampledProfile, ThetaIntegral,
                       emit_profile_csv, profile_from_json, profile_to_json)
from .reachability import MinTimeResult, condition_report, min_time, reachable
from .simulator import (PropagationResult, PropagationSettings,
                        local_equiv_distance, propagate,
                        random_schedule_sampler)
from .su4 import (PauliCoefficients, from_magic, is_hermitian, is_special,
                  is_unitary, nonlocal_part, pauli_compose, pauli_decompose,
                  to_magic)
from .synthesis import (PulseSchedule, Segment, permutation_to_local,
                        schedule_target_phi, synthesize)

__version__ = "0.1.0"

__all__ = [
    "BirkhoffDecomposition", "ConstantProfile", "CouplingProfile",
    "HamiltonianCanonicalForm", "MasDipolarProfile", "MinTimeResult",
    "PauliCoefficients", "PiecewiseConstantProfile", "PropagationResult",
    "PropagationSettings", "PulseSchedule", "SampledProfile", "Segment",
    "ThetaIntegral", "UnitaryCanonicalForm", "birkhoff", "canon_hamiltonian",
    "canon_unitary", "condition_report", "emit_profile_csv",
    "equivalent_gate_vectors", "from_magic", "is_hermitian", "is_special",
    "is_unitary", "local_equiv_distance", "majorizes", "min_time",
    "nonlocal_part", "pauli_compose", "pauli_decompose",
    "permutation_to_local", "phi_major_equiv_check", "phi_to_theta",
    "profile_from_json", "profile_to_json", "propagate",
    "random_schedule_sampler", "reachable", "s_majorizes", "s_reorder",
    "schedule_target_phi", "schur_horn_rotation", "synthesize", "theta_to_phi",
    "to_magic", "transfer_matrix", "weyl_reduce",
]
