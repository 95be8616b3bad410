"""Random key graphs under on/off channels: sampling, exact link probabilities,
k-connectivity algorithms and seeded Monte Carlo checks of the zero-one laws."""

__version__ = "0.1.0"

from .errors import (BudgetExceededError, InfeasibleError, InvalidArgumentError,
                     InvariantViolation, KeygraphError, ParseError)
from .graph import (Graph, brute_force_vertex_connectivity, count_disjoint_paths,
                    is_connected, is_k_connected, min_degree, read_edgelist,
                    survives_removal, vertex_connectivity, write_edgelist)
from .model import (KeyRingAssignment, ModelParams, degree_pmf_exact, induce_random_key_graph,
                    p_e_exact, p_s_approx, p_s_exact, sample_coupled_er_pair, sample_er_graph,
                    sample_key_rings, sample_onoff_graph, shared_key_distribution)
from .montecarlo import (ExperimentConfig, SweepResult, TrialOutcome, connected_subgraph_probability,
                         empirical_degree_counts, estimate, run_trials, sweep_alpha,
                         wilson_interval)
from .scaling import (RegimeReport, ScalingPoint, alpha_from_params, beta_from_params,
                      consensus_tolerance, expected_degree_count, p_required, validate_regime)
