"""Exact solvers for a propositional model of campaign statements and voters."""

from .errors import (CampaignError, EmptyPopulation, InconsistentTheory, MissingThreshold, NotCNF, ParseError,
                     PopulationLimitExceeded, UnknownVariable, UnsatisfiableSource, VariableLimitExceeded)
from .evaluation import (UtilityResult, meets_threshold, total_utility, utility, utility_expected,
                         utility_optimistic, utility_pessimistic)
from .formula import (And, Const, Formula, Iff, Implies, Not, Or, Theory, Var, VarUniverse, evaluate,
                      free_variables, models_theory, parse_formula, parse_theory, to_string)
from .strategy import (StrategyResult, TurnoutInstance, TurnoutResult, brute_force_best_theory, mixed_turnout,
                       optimal_completion, optimal_complete_theory, optimistic_turnout, pessimistic_turnout,
                       turnout)
from .voters import (Kind, Voter, aggregate_preferences, best_possible_utility, loads_voters, dumps_voters,
                     world_utility)
from .worlds import ModelCount, SolverConfig, World, count_models, enumerate_models, is_satisfiable

__version__ = "0.1.0"
