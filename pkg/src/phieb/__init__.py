"""Count-based exploration in feature space for linear SARSA(lambda) agents."""

from .agent import (
    AgentConfig,
    AgentState,
    ConstantEpsilon,
    EpisodeRecord,
    default_epsilon,
    LinearEpsilon,
    epsilon_at,
    greedy_episode,
    new_agent,
    run_episode,
    select_boltzmann,
    select_egreedy,
    train_step,
)
from .bonus import BonusConfig, NonincreasingDensity, PseudoCountResult, exploration_bonus, pseudo_count
from .density import FactorTable, kt_estimate
from .envs import DenseGrid, KeyedRooms, SparseChain, make_env
from .features import FeatureMapSpec, FeatureVector, intersect, validate
from .harness import ConfigError, ExperimentConfig, InvariantBreach, beta_sweep, read_trial_csv, run_experiment
from .value import LinearQ, TdStep, td_error

__version__ = "0.1.0"
