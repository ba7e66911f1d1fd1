from __future__ import unicode_literals
from __future__ import absolute_import
import logging

import numpy as np

from .const import EQUIV_TOL
from .mdp import Mdp, check_mdp

log = logging.getLogger(__name__)


class NotABisimulation(ValueError):
    def __init__(self, block, pair, action, reason):
        self.block = block
        self.pair = pair
        self.action = action
        self.reason = reason
        super(NotABisimulation, self).__init__(
            "states %d and %d share block %d but differ under action %d: %s"
            % (pair[0], pair[1], block, action, reason))


class Partition(object):
    """
    A partition of {0..n-1} into blocks with dense ids, numbered in order of
    each block's smallest state.
    """
    def __init__(self, block_of):
        renumber = {}
        for b in block_of:
            renumber.setdefault(b, len(renumber))
        self.block_of = tuple(renumber[b] for b in block_of)
        blocks = [[] for _ in renumber]
        for s, b in enumerate(self.block_of):
            blocks[b].append(s)
        self.blocks = tuple(tuple(block) for block in blocks)

    @classmethod
    def from_blocks(cls, blocks, n_states=None):
        if n_states is None:
            n_states = sum(len(b) for b in blocks)
        block_of = [None] * n_states
        for z, block in enumerate(blocks):
            for s in block:
                if block_of[s] is not None:
                    raise ValueError("state %d appears in more than one block" % s)
                block_of[s] = z
        if None in block_of:
            raise ValueError("blocks do not cover state %d" % block_of.index(None))
        return cls(block_of)

    @classmethod
    def identity(cls, n_states):
        return cls(range(n_states))

    @property
    def n_blocks(self):
        return len(self.blocks)

    def indicator(self):
        """
        The (n_states, n_blocks) 0/1 membership matrix.
        """
        member = np.zeros((len(self.block_of), self.n_blocks))
        member[np.arange(len(self.block_of)), self.block_of] = 1.0
        return member

    def merged(self, z1, z2):
        return Partition([z1 if b == z2 else b for b in self.block_of])

    def as_sets(self):
        return set(frozenset(block) for block in self.blocks)

    def __eq__(self, other):
        return isinstance(other, Partition) and self.block_of == other.block_of

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash(self.block_of)

    def __repr__(self):
        return 'Partition(%s)' % (list(list(b) for b in self.blocks),)


def _group(members, keys, tol):
    groups = []
    for s in members:
        for group in groups:
            if np.max(np.abs(keys[s] - keys[group[0]]), initial=0.0) <= tol:
                group.append(s)
                break
        else:
            groups.append([s])
    return groups


def aggregated_transitions(m, partition):
    """
    P(z'|s, a) = sum over s' in z' of P(s'|s, a), shape (n_actions, n_states, n_blocks).
    """
    return np.matmul(m.transitions, partition.indicator())


def coarsest_bisimulation(m, tol=EQUIV_TOL):
    """
    Refine the reward partition until every block is stable under the
    block-aggregated transition signatures of all actions.
    """
    check_mdp(m)

    groups = _group(range(m.n_states), m.rewards, tol)
    block_of = [None] * m.n_states
    for z, group in enumerate(groups):
        for s in group:
            block_of[s] = z
    partition = Partition(block_of)

    rounds = 0
    while True:
        rounds += 1
        aggregated = aggregated_transitions(m, partition)
        signatures = aggregated.transpose(1, 0, 2).reshape(m.n_states, -1)

        block_of = list(partition.block_of)
        next_id = partition.n_blocks
        for block in partition.blocks:
            pieces = _group(block, signatures, tol)
            for piece in pieces[1:]:
                for s in piece:
                    block_of[s] = next_id
                next_id += 1

        if next_id == partition.n_blocks:
            break
        partition = Partition(block_of)

    log.debug("bisimulation of %r: %d blocks after %d rounds",
              m, partition.n_blocks, rounds)
    return partition


def check_bisimulation(m, partition, tol=EQUIV_TOL):
    """
    Raise NotABisimulation for the first pair of block-mates that differ in
    reward or in aggregated transition probability.
    """
    if len(partition.block_of) != m.n_states:
        raise ValueError("partition covers %d states, MDP has %d"
                         % (len(partition.block_of), m.n_states))

    aggregated = aggregated_transitions(m, partition)
    for z, block in enumerate(partition.blocks):
        rep = block[0]
        for s in block[1:]:
            for a in range(m.n_actions):
                if abs(m.rewards[s, a] - m.rewards[rep, a]) > tol:
                    raise NotABisimulation(z, (rep, s), a, "rewards %r != %r" % (
                        m.rewards[rep, a], m.rewards[s, a]))
                diff = np.abs(aggregated[a, s] - aggregated[a, rep])
                if diff.max() > tol:
                    target = int(diff.argmax())
                    raise NotABisimulation(z, (rep, s), a, "P(block %d) %r != %r" % (
                        target, aggregated[a, rep, target], aggregated[a, s, target]))


def is_bisimulation(m, partition, tol=EQUIV_TOL):
    try:
        check_bisimulation(m, partition, tol)
    except NotABisimulation:
        return False
    return True


class Abstraction(object):
    """
    The quotient of one context under a bisimulation partition: abstract
    states are blocks, and map_state sends a concrete state to its block.
    """
    def __init__(self, source, partition, quotient, index):
        self.source = source
        self.partition = partition
        self.quotient = quotient
        self.index = index

    @property
    def n_abstract_states(self):
        return self.quotient.n_states

    def predicted_reward(self, s, a):
        return self.quotient.rewards[map_state(self, s), a]

    def __repr__(self):
        return '<Abstraction %d: %d -> %d states>' % (
            self.index, self.source.n_states, self.quotient.n_states)


def build_abstraction(m, partition, index=0, tol=EQUIV_TOL):
    check_bisimulation(m, partition, tol)

    reps = [block[0] for block in partition.blocks]
    aggregated = aggregated_transitions(m, partition)
    transitions = aggregated[:, reps, :]
    rewards = m.rewards[reps, :]

    labels = ['{%s}' % ','.join(m.state_label(s) for s in block)
              for block in partition.blocks]
    quotient = Mdp(transitions, rewards,
                   state_labels=labels,
                   action_labels=m.action_labels,
                   name='%s/bisim' % (m.name or 'context%d' % index))
    return Abstraction(m, partition, quotient, index)


def abstract(m, index=0, tol=EQUIV_TOL):
    return build_abstraction(m, coarsest_bisimulation(m, tol), index, tol)


def map_state(ab, s):
    if not 0 <= s < len(ab.partition.block_of):
        raise IndexError("state %r out of range [0, %d)" % (s, len(ab.partition.block_of)))
    return ab.partition.block_of[s]
