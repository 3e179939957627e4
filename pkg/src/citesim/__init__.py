"""citesim: seedable agent-based simulation of gender-biased citation dynamics."""

__version__ = "0.1.0"

from .errors import (CitesimError, ConfigurationError, IngestionError,
                     StateError, StatsError)
from .graph import (CoauthorGraph, Estimate, Gender, gender_fraction,
                    generate_synthetic, load_edge_list, save_graph)
from .walks import (DiffusionParams, biased_step, citation_walk,
                    diffusive_walk, sample_step_size, step_size_pmf)
from .agents import (Agent, AgentParams, GenderParamDist, ParamDistributions,
                     default_param_distributions, history_overlap,
                     init_estimate, population_from_json, population_to_json,
                     sample_params, seed_history)
from .learning import (LearnReport, TransitionEstimate, apply_learning,
                       learned_transition_estimate, select_central_authors,
                       true_transition_matrix)
from .simulation import (CdsParams, SimConfig, Simulator, YearRecord,
                         config_fingerprint, expected_woman_fraction,
                         growth_schedule, run_simulation,
                         sim_config_from_json, sim_config_to_json,
                         write_year_csvs)
from .experiments import (CdsScenarioResult, ExperimentResult, ExperimentRow,
                          GraphSpec, SweepSpec, cds_full_adoption_config,
                          run_baseline, run_cds_scenario, run_sweep,
                          sweep_spec_from_json, write_summary_csv,
                          zero_crossing)
from .stats import (CdsBenchmark, OvercitationRecord, TestResult,
                    cds_overcitation, log_gamma, ols_trend,
                    one_sample_t_test, overcitation,
                    per_agent_mean_overcitation, per_year_mean_overcitation,
                    regularized_incomplete_beta, student_t_two_sided_p,
                    yearly_overcitation)

__all__ = [name for name in dir() if not name.startswith("_")]
