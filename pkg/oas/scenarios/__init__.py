from __future__ import absolute_import

from .continuous import (  # NOQA
    ACTION_NAMES,
    ContinuousScenario,
    ProjectionAbstraction,
    PursuitPolicy,
    ScenarioConfigError,
    build_continuous_scenario,
    observe_state_continuous,
    projection_abstractions,
    pursuit_policy,
    step_continuous,
)
from .discrete import (  # NOQA
    DiscreteScenario,
    ScenarioConsistencyError,
    build_discrete_scenario,
    observe_state_discrete,
)
