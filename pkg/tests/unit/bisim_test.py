from __future__ import unicode_literals
from __future__ import absolute_import
import itertools

import numpy as np
from hypothesis import given, settings, strategies as st

from .. import unittest
from oas.bisim import (
    NotABisimulation,
    Partition,
    abstract,
    build_abstraction,
    check_bisimulation,
    coarsest_bisimulation,
    is_bisimulation,
    map_state,
)
from oas.mdp import Mdp

REWARD_VALUES = [0.0, 0.5, 1.0]
TOL = 1e-9


def planted_mdp(seed, max_states=8):
    """
    A random MDP built over a random block structure, so that interesting
    bisimulations exist; a third of the draws are perturbed to break it.
    """
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, max_states + 1))
    n_actions = int(rng.integers(1, 4))
    k = int(rng.integers(1, n + 1))
    block_of = np.concatenate([np.arange(k), rng.integers(0, k, size=n - k)])
    rng.shuffle(block_of)

    block_rewards = rng.choice(REWARD_VALUES, size=(k, n_actions))
    block_moves = rng.integers(0, 4, size=(n_actions, k, k)).astype(float)
    block_moves[:, np.arange(k), np.arange(k)] += 1.0
    block_moves /= block_moves.sum(axis=2, keepdims=True)

    transitions = np.zeros((n_actions, n, n))
    for a in range(n_actions):
        for s in range(n):
            for z in range(k):
                members = np.flatnonzero(block_of == z)
                weights = rng.integers(1, 4, size=len(members)).astype(float)
                transitions[a, s, members] = block_moves[a, block_of[s], z] * weights / weights.sum()
    transitions /= transitions.sum(axis=2, keepdims=True)

    if rng.random() < 1.0 / 3 and n > 1:
        a, s = int(rng.integers(0, n_actions)), int(rng.integers(0, n))
        transitions[a, s] = rng.dirichlet(np.ones(n))

    rewards = block_rewards[block_of]
    return Mdp(transitions, rewards, name='planted-%d' % seed)


def is_bisimulation_oracle(m, block_of):
    """
    Definition-level check with plain loops.
    """
    n = m.n_states
    transitions, rewards = m.transitions.tolist(), m.rewards.tolist()
    for s in range(n):
        for t in range(s + 1, n):
            if block_of[s] != block_of[t]:
                continue
            for a in range(m.n_actions):
                if abs(rewards[s][a] - rewards[t][a]) > TOL:
                    return False
                for z in set(block_of):
                    p_s = sum(transitions[a][s][u] for u in range(n) if block_of[u] == z)
                    p_t = sum(transitions[a][t][u] for u in range(n) if block_of[u] == z)
                    if abs(p_s - p_t) > TOL:
                        return False
    return True


def set_partitions(n):
    if n == 0:
        yield []
        return
    for smaller in set_partitions(n - 1):
        for z in range(max(smaller, default=-1) + 2):
            yield smaller + [z]


def coarsest_oracle(m):
    candidates = [p for p in set_partitions(m.n_states) if is_bisimulation_oracle(m, p)]
    return min(candidates, key=lambda p: len(set(p)))


def context(transitions, rewards):
    return Mdp(transitions, rewards, state_labels=['s1', 's2', 's3'])


DASH = [
    [[1.0, 0.0, 0.0], [0.6, 0.4, 0.0], [0.6, 0.4, 0.0]],
    [[0.0, 0.4, 0.6], [0.0, 0.4, 0.6], [0.0, 0.0, 1.0]],
]


class PartitionTest(unittest.TestCase):
    def test_canonical_numbering(self):
        self.assertEqual(Partition([5, 5, 2, 5]).block_of, (0, 0, 1, 0))
        self.assertEqual(Partition([5, 5, 2]), Partition([0, 0, 1]))

    def test_from_blocks(self):
        p = Partition.from_blocks([[2], [0, 1]])
        self.assertEqual(p.block_of, (0, 0, 1))
        self.assertEqual(p.as_sets(), set([frozenset([0, 1]), frozenset([2])]))

    def test_from_blocks_rejects_overlap(self):
        with self.assertRaises(ValueError):
            Partition.from_blocks([[0, 1], [1]])

    def test_indicator(self):
        member = Partition([0, 1, 0]).indicator()
        self.assertEqual(member.tolist(), [[1, 0], [0, 1], [1, 0]])

    def test_merged(self):
        self.assertEqual(Partition([0, 1, 2]).merged(0, 2).n_blocks, 2)


class CoarsestBisimulationTest(unittest.TestCase):
    def test_object_at_s3(self):
        m = context(DASH, [[0, 0], [0, 0], [1, 1]])
        self.assertEqual(coarsest_bisimulation(m).as_sets(),
                         set([frozenset([0, 1]), frozenset([2])]))

    def test_object_at_s1(self):
        m = context(DASH, [[1, 1], [0, 0], [0, 0]])
        self.assertEqual(coarsest_bisimulation(m).as_sets(),
                         set([frozenset([0]), frozenset([1, 2])]))

    def test_constant_reward_uniform_moves_collapse(self):
        m = Mdp([[[1.0 / 3] * 3] * 3], [[1.0]] * 3)
        self.assertEqual(coarsest_bisimulation(m).n_blocks, 1)

    def test_reward_split_without_transition_split(self):
        m = Mdp([[[0.5, 0.5], [0.5, 0.5]]], [[0.0], [1.0]])
        self.assertEqual(coarsest_bisimulation(m).n_blocks, 2)

    def test_clamped_walk_separates_everything(self):
        clamped = [
            [[1, 0, 0], [1, 0, 0], [0, 1, 0]],
            [[0, 1, 0], [0, 0, 1], [0, 0, 1]],
        ]
        m = context(clamped, [[0, 0], [0, 0], [1, 1]])
        self.assertEqual(coarsest_bisimulation(m), Partition.identity(3))

    @settings(max_examples=500, deadline=None)
    @given(st.integers(min_value=0, max_value=2 ** 32 - 1))
    def test_matches_brute_force(self, seed):
        m = planted_mdp(seed, max_states=6)
        expected = Partition(coarsest_oracle(m))
        self.assertEqual(coarsest_bisimulation(m, TOL), expected)

    @settings(max_examples=500, deadline=None)
    @given(st.integers(min_value=0, max_value=2 ** 32 - 1))
    def test_sound_and_coarsest(self, seed):
        m = planted_mdp(seed)
        partition = coarsest_bisimulation(m, TOL)
        self.assertTrue(is_bisimulation_oracle(m, partition.block_of))
        for z1, z2 in itertools.combinations(range(partition.n_blocks), 2):
            self.assertFalse(is_bisimulation_oracle(m, partition.merged(z1, z2).block_of))

    @settings(max_examples=200, deadline=None)
    @given(st.integers(min_value=0, max_value=2 ** 32 - 1), st.integers(min_value=0, max_value=7))
    def test_duplicated_state_is_never_split(self, seed, pick):
        m = planted_mdp(seed, max_states=7)
        s, n = pick % m.n_states, m.n_states
        # Add state n as a copy of s; s and n share s's incoming mass.
        transitions = np.zeros((m.n_actions, n + 1, n + 1))
        transitions[:, :n, :n] = m.transitions
        transitions[:, :n, s] /= 2.0
        transitions[:, :n, n] = transitions[:, :n, s]
        transitions[:, n] = transitions[:, s]
        rewards = np.vstack([m.rewards, m.rewards[s]])
        partition = coarsest_bisimulation(Mdp(transitions, rewards), TOL)

        self.assertEqual(partition.block_of[s], partition.block_of[n])
        self.assertEqual(Partition(partition.block_of[:n]), coarsest_bisimulation(m, TOL))


class CheckBisimulationTest(unittest.TestCase):
    def test_names_the_violation(self):
        m = context(DASH, [[0, 0], [0, 0], [1, 1]])
        with self.assertRaises(NotABisimulation) as ctx:
            check_bisimulation(m, Partition([0, 0, 0]))
        self.assertEqual(ctx.exception.block, 0)
        self.assertEqual(ctx.exception.pair, (0, 2))

    def test_identity_is_always_a_bisimulation(self):
        m = context(DASH, [[0, 0], [0, 0], [1, 1]])
        self.assertTrue(is_bisimulation(m, Partition.identity(3)))

    def test_partition_size_must_match(self):
        m = context(DASH, [[0, 0], [0, 0], [1, 1]])
        with self.assertRaises(ValueError):
            check_bisimulation(m, Partition([0, 0]))


class AbstractionTest(unittest.TestCase):
    def setUp(self):
        self.m = context(DASH, [[0, 0], [0, 0], [1, 1]])
        self.ab = abstract(self.m, index=0)

    def test_quotient(self):
        q = self.ab.quotient
        self.assertEqual(q.n_states, 2)
        self.assertEqual(q.state_labels, ('{s1,s2}', '{s3}'))
        self.assertTrue(np.allclose(q.transitions[1, 0], [0.4, 0.6]))
        self.assertTrue(np.allclose(q.transitions[0, 1], [1.0, 0.0]))
        self.assertEqual(q.rewards.tolist(), [[0.0, 0.0], [1.0, 1.0]])

    def test_quotient_rows_are_distributions(self):
        self.assertTrue(np.allclose(self.ab.quotient.transitions.sum(axis=2), 1.0))

    def test_map_state(self):
        self.assertEqual([map_state(self.ab, s) for s in range(3)], [0, 0, 1])
        with self.assertRaises(IndexError):
            map_state(self.ab, 3)

    def test_predicted_reward(self):
        self.assertEqual(self.ab.predicted_reward(2, 0), 1.0)
        self.assertEqual(self.ab.predicted_reward(1, 1), 0.0)

    def test_identity_partition_reproduces_source(self):
        ab = build_abstraction(self.m, Partition.identity(3))
        self.assertTrue(np.array_equal(ab.quotient.transitions, self.m.transitions))
        self.assertTrue(np.array_equal(ab.quotient.rewards, self.m.rewards))

    def test_total_aggregation(self):
        m = Mdp([[[0.5, 0.5], [0.5, 0.5]]], [[1.0], [1.0]])
        ab = build_abstraction(m, Partition([0, 0]))
        self.assertEqual(ab.quotient.transitions.tolist(), [[[1.0]]])

    def test_build_rejects_non_bisimulation(self):
        with self.assertRaises(NotABisimulation):
            build_abstraction(self.m, Partition([0, 1, 1]))
