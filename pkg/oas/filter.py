from __future__ import unicode_literals
from __future__ import absolute_import
import logging

import numpy as np

from .const import DEFAULT_EPSILON, PROB_TOL

log = logging.getLogger(__name__)

REWARD_MATCH_TOL = 1e-9


class DimensionError(ValueError):
    pass


class DegenerateUpdate(ArithmeticError):
    def __init__(self, likelihoods):
        self.likelihoods = likelihoods
        super(DegenerateUpdate, self).__init__(
            "every abstraction has zero likelihood (%s) for this observation"
            % ", ".join('%g' % l for l in likelihoods))


class BeliefState(object):
    """
    p(phi_t^i | r_{1:t}, a_{1:t}, s_t) over the abstraction catalog.
    """
    def __init__(self, probs, t=0):
        probs = np.array(probs, dtype=float)
        if probs.ndim != 1 or len(probs) == 0:
            raise DimensionError("a belief is a non-empty probability vector")
        if np.any(probs < 0) or abs(probs.sum() - 1.0) > PROB_TOL:
            raise ValueError("belief %s is not a probability vector" % probs.tolist())
        probs.setflags(write=False)
        self.probs = probs
        self.t = t

    @classmethod
    def uniform(cls, n):
        return cls(np.full(n, 1.0 / n))

    def __len__(self):
        return len(self.probs)

    def __repr__(self):
        return '<BeliefState t=%d %s>' % (self.t, np.round(self.probs, 6).tolist())


def make_prior(prior, n):
    if prior is None or prior == 'uniform':
        return BeliefState.uniform(n)
    belief = BeliefState(prior)
    if len(belief) != n:
        raise DimensionError("prior has %d entries, catalog has %d" % (len(belief), n))
    return belief


class AbstractionTransitionModel(object):
    """
    T[i, j] = p(phi_t^i | phi_{t-1}^j); every column sums to one.
    """
    def __init__(self, matrix):
        matrix = np.array(matrix, dtype=float)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise DimensionError("transition model must be square, got shape %s" % (matrix.shape,))
        if np.any(matrix < 0) or np.any(matrix > 1):
            raise ValueError("transition model entries must lie in [0, 1]")
        sums = matrix.sum(axis=0)
        if np.any(np.abs(sums - 1.0) > PROB_TOL):
            raise ValueError("transition model columns sum to %s, not 1" % sums.tolist())
        matrix.setflags(write=False)
        self.matrix = matrix

    @property
    def n(self):
        return self.matrix.shape[0]


def stay_transition_model(n, stay):
    """
    Keep the current abstraction with probability `stay`, otherwise move to
    one of the others uniformly.
    """
    if not 0.0 <= stay <= 1.0:
        raise ValueError("stay probability must lie in [0, 1], got %r" % stay)
    if n == 1:
        return AbstractionTransitionModel([[1.0]])
    matrix = np.full((n, n), (1.0 - stay) / (n - 1))
    np.fill_diagonal(matrix, stay)
    return AbstractionTransitionModel(matrix)


class DetectionModel(object):
    """
    p(r | phi^i, s): whether the observed reward matches the reward the
    abstraction predicts at the observed state, smoothed by epsilon.

    An abstraction may decline to predict (predicted_reward returns None);
    the whole measurement is then uninformative and every likelihood is 1.
    """
    def __init__(self, abstractions, epsilon=DEFAULT_EPSILON):
        if not 0.0 <= epsilon < 1.0:
            raise ValueError("epsilon must lie in [0, 1), got %r" % epsilon)
        self.abstractions = list(abstractions)
        self.epsilon = epsilon

    @property
    def n(self):
        return len(self.abstractions)

    def match(self, r, predicted):
        if predicted is None:
            return 1.0
        if abs(predicted - r) <= REWARD_MATCH_TOL:
            return 1.0 - self.epsilon
        return self.epsilon

    def likelihood(self, r, i, s, a=None):
        return self.match(r, self.abstractions[i].predicted_reward(s, a))

    def likelihoods(self, r, s, a=None):
        predictions = [ab.predicted_reward(s, a) for ab in self.abstractions]
        if any(p is None for p in predictions):
            return np.ones(self.n)
        return np.array([self.match(r, p) for p in predictions])


def dynamics_update(b, model):
    if model.n != len(b):
        raise DimensionError("transition model is %dx%d, belief has %d entries"
                             % (model.n, model.n, len(b)))
    probs = model.matrix.dot(b.probs)
    return BeliefState(probs, b.t)


def bayes_update(probs, likelihoods):
    likelihoods = np.asarray(likelihoods, dtype=float)
    if likelihoods.shape != np.shape(probs):
        raise DimensionError("%d likelihoods for %d abstractions"
                             % (len(likelihoods), len(probs)))
    joint = likelihoods * probs
    evidence = joint.sum()
    if evidence <= 0.0:
        raise DegenerateUpdate(likelihoods)
    return joint / evidence


def measurement_update(b, detection, r, s, a=None):
    if detection.n != len(b):
        raise DimensionError("detection model covers %d abstractions, belief has %d"
                             % (detection.n, len(b)))
    return BeliefState(bayes_update(b.probs, detection.likelihoods(r, s, a)), b.t)


def ml_abstraction(b):
    return int(np.argmax(b.probs))


def oas_step(b, model, detection, r, s, a=None):
    predicted = dynamics_update(b, model)
    posterior = measurement_update(predicted, detection, r, s, a)
    posterior = BeliefState(posterior.probs, b.t + 1)
    return posterior, ml_abstraction(posterior)


class OasFilter(object):
    """
    One trial's filter: the belief plus its models. A step whose observation
    every abstraction rules out keeps the dynamics-updated prior.
    """
    def __init__(self, model, detection, prior=None):
        if model.n != detection.n:
            raise DimensionError("transition model covers %d abstractions, detection model %d"
                                 % (model.n, detection.n))
        self.model = model
        self.detection = detection
        self.belief = make_prior(prior, model.n)
        self.ml = ml_abstraction(self.belief)
        self.degenerate_steps = []

    def step(self, r, s, a=None):
        try:
            self.belief, self.ml = oas_step(self.belief, self.model, self.detection, r, s, a)
        except DegenerateUpdate as e:
            predicted = dynamics_update(self.belief, self.model)
            self.belief = BeliefState(predicted.probs, self.belief.t + 1)
            self.ml = ml_abstraction(self.belief)
            self.degenerate_steps.append(self.belief.t)
            log.warning("step %d: %s; keeping the predicted belief", self.belief.t, e)
        return self.belief, self.ml
