"""Exact frequency entailment over itemsets.

Given an antimonotonic family of itemsets with rational frequencies, decide
consistency, compute the tight interval of frequencies a query itemset can
take, and compute its maximum entropy estimate. Instances that encode CNF
satisfiability can be generated for testing hard cases.
"""

from .errors import (FreqQueryError, InconsistentError, MalformedInputError, ModeError,
                     PreconditionError, ResourceLimitError, UnknownItemsetError)
from .lp import (ConsistencyResult, QueryInterval, WitnessCheck, check_consistent,
                 decide_max_query, max_frequency, query_bounds, verify_witness)
from .maxent import Decision, MaxEntResult, decide_entr_query, entropy, fit_maxent
from .model import (FrequencyAssignment, Itemset, ItemsetFamily, JointDistribution,
                    downward_closure, event_probability, is_antimonotonic, satisfies)
from .projection import marginal_table, project, project_status
from .reduction import (CnfFormula, ReductionInstance, construction_distribution,
                        reduce_consistent, reduce_max_query)

__version__ = "0.1.0"

__all__ = [
    "CnfFormula", "ConsistencyResult", "Decision", "FreqQueryError", "FrequencyAssignment",
    "InconsistentError", "Itemset", "ItemsetFamily", "JointDistribution",
    "MalformedInputError", "MaxEntResult", "ModeError", "PreconditionError", "QueryInterval",
    "ReductionInstance", "ResourceLimitError", "UnknownItemsetError", "WitnessCheck",
    "check_consistent", "construction_distribution", "decide_entr_query", "decide_max_query",
    "downward_closure", "entropy", "event_probability", "fit_maxent", "is_antimonotonic",
    "marginal_table", "max_frequency", "project", "project_status", "query_bounds",
    "reduce_consistent", "reduce_max_query", "satisfies", "verify_witness",
]
