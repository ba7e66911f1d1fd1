from __future__ import unicode_literals
from __future__ import absolute_import
from collections import namedtuple
import logging
import math

import numpy as np

from ..bisim import Partition
from ..const import (
    CONTROL_PERIOD,
    DEFAULT_DEPTH_NOISE,
    DEFAULT_REWARD_RADIUS,
    STOP_FRACTION,
)
from ..mdp import Mdp

log = logging.getLogger(__name__)


# (forward, turn) multipliers of the robot's speed and turn rate.
ACTIONS = [
    ('left', 0, 1),
    ('right', 0, -1),
    ('straight', 1, 0),
    ('right+straight', 1, -1),
    ('left+straight', 1, 1),
    ('stop', 0, 0),
]
ACTION_NAMES = [name for name, _, _ in ACTIONS]
STOP = ACTION_NAMES.index('stop')

# Two people walking down a hallway; the second zig-zags on the far side.
DEFAULT_HALLWAY = {
    'reward_radius': DEFAULT_REWARD_RADIUS,
    'robot': {'x': 0.0, 'y': 0.0, 'heading': 0.0, 'speed': 1.0, 'turn_rate': math.pi / 2},
    'humans': [
        {'speed': 0.4, 'waypoints': [[0.7, 0.6], [40.7, 0.6]]},
        {'speed': 0.4, 'waypoints': [
            [0.7, -1.2], [4.7, -1.6], [8.7, -1.0], [12.7, -1.6],
            [16.7, -1.0], [20.7, -1.6], [24.7, -1.2], [40.7, -1.2]]},
    ],
}

SCENARIO_KEYS = ['reward_radius', 'robot', 'humans']
ROBOT_KEYS = ['x', 'y', 'heading', 'speed', 'turn_rate']


class ScenarioConfigError(ValueError):
    pass


RobotPose = namedtuple('RobotPose', 'x y heading')


class HumanTrack(object):
    """
    A scripted walk along waypoints at constant speed; the walker stays at
    the last waypoint once it is reached.
    """
    def __init__(self, waypoints, speed):
        self.waypoints = np.array(waypoints, dtype=float)
        if self.waypoints.ndim != 2 or self.waypoints.shape[1] != 2 or len(self.waypoints) < 1:
            raise ScenarioConfigError("waypoints must be a non-empty list of [x, y] pairs")
        if speed < 0:
            raise ScenarioConfigError("human speed must be non-negative, got %r" % speed)
        self.speed = float(speed)
        self.lengths = np.hypot(*np.diff(self.waypoints, axis=0).T) if len(self.waypoints) > 1 else np.zeros(0)

    def position(self, time):
        remaining = self.speed * time
        for start, end, length in zip(self.waypoints[:-1], self.waypoints[1:], self.lengths):
            if remaining <= length:
                if length == 0:
                    return start.copy()
                return start + (end - start) * (remaining / length)
            remaining -= length
        return self.waypoints[-1].copy()


class ContinuousScenario(object):
    """
    Robot pose, the humans' tracks and the treat holder schedule at control
    step t. step_continuous returns a new scenario rather than mutating.
    """
    def __init__(self, robot, humans, holders=None, reward_radius=DEFAULT_REWARD_RADIUS,
                 speed=1.0, turn_rate=math.pi / 2, depth_noise=None, t=0):
        if reward_radius <= 0:
            raise ScenarioConfigError("reward_radius must be positive, got %r" % reward_radius)
        depth_noise = dict(depth_noise or DEFAULT_DEPTH_NOISE)
        if depth_noise['a'] < 0 or depth_noise['b'] < 0:
            raise ScenarioConfigError("depth noise parameters must be non-negative, got %r" % depth_noise)
        self.robot = RobotPose(*robot)
        self.humans = list(humans)
        self.holders = holders
        self.reward_radius = float(reward_radius)
        self.speed = float(speed)
        self.turn_rate = float(turn_rate)
        self.depth_noise = depth_noise
        self.period = CONTROL_PERIOD
        self.t = t

    @property
    def time(self):
        return self.t * self.period

    def advanced(self, robot):
        return ContinuousScenario(
            robot, self.humans, self.holders, self.reward_radius,
            self.speed, self.turn_rate, self.depth_noise, self.t + 1)

    def human_positions(self):
        return [track.position(self.time) for track in self.humans]

    def true_state(self):
        """
        [x1, y1, x2, y2]: each human's position in the robot frame (x ahead,
        y to the left).
        """
        cos_h, sin_h = math.cos(self.robot.heading), math.sin(self.robot.heading)
        state = []
        for position in self.human_positions():
            dx, dy = position[0] - self.robot.x, position[1] - self.robot.y
            state.extend([cos_h * dx + sin_h * dy, -sin_h * dx + cos_h * dy])
        return np.array(state)

    def holder(self, t=None):
        return self.holders.active(self.t if t is None else t)

    def reward(self, holder):
        position = self.human_positions()[holder]
        distance = math.hypot(position[0] - self.robot.x, position[1] - self.robot.y)
        return 1.0 if distance <= self.reward_radius else 0.0


def build_continuous_scenario(config=None, holders=None, depth_noise=None):
    config = dict(config or DEFAULT_HALLWAY)

    for key in config:
        if key not in SCENARIO_KEYS:
            raise ScenarioConfigError("unsupported continuous scenario option '%s'" % key)
    robot = dict(DEFAULT_HALLWAY['robot'])
    for key, value in (config.get('robot') or {}).items():
        if key not in ROBOT_KEYS:
            raise ScenarioConfigError("unsupported robot option '%s'" % key)
        robot[key] = value

    humans = config.get('humans', DEFAULT_HALLWAY['humans'])
    if len(humans) != 2:
        raise ScenarioConfigError("the tracking scenario has two humans, got %d" % len(humans))

    return ContinuousScenario(
        (robot['x'], robot['y'], robot['heading']),
        [HumanTrack(h['waypoints'], h['speed']) for h in humans],
        holders=holders,
        reward_radius=config.get('reward_radius', DEFAULT_REWARD_RADIUS),
        speed=robot['speed'],
        turn_rate=robot['turn_rate'],
        depth_noise=depth_noise)


def step_continuous(sc, action, holder=None):
    """
    Advance one control tick under a constant-velocity command. Returns the
    new scenario, the true state and the reward for the treat holder active
    at the tick being executed.
    """
    if not 0 <= action < len(ACTIONS):
        raise IndexError("action %r out of range [0, %d)" % (action, len(ACTIONS)))
    if holder is None:
        holder = sc.holder()

    _, forward, turn = ACTIONS[action]
    v, w, dt = forward * sc.speed, turn * sc.turn_rate, sc.period
    x, y, heading = sc.robot
    mid = heading + w * dt / 2.0
    robot = RobotPose(x + v * dt * math.cos(mid), y + v * dt * math.sin(mid), heading + w * dt)

    new = sc.advanced(robot)
    return new, new.true_state(), new.reward(holder)


def observe_state_continuous(state, noise, rng):
    """
    Add zero-mean Gaussian noise to each human's coordinates with standard
    deviation a + b * distance. Always draws four normals.
    """
    state = np.asarray(state, dtype=float)
    draws = rng.standard_normal(len(state))
    distances = np.hypot(state[0::2], state[1::2])
    stds = np.repeat(noise['a'] + noise['b'] * distances, 2)
    return state + stds * draws


class ProjectionAbstraction(object):
    """
    Attend to one human: keep its coordinate pair, drop the other's.

    With a depth noise model and a positive margin, a projection whose
    observed distance lies within `margin` noise standard deviations of the
    reward radius makes no reward prediction (predicted_reward is None).
    """
    def __init__(self, index, kept, reward_radius=DEFAULT_REWARD_RADIUS, depth_noise=None, margin=0.0):
        if kept not in (0, 1):
            raise ScenarioConfigError("a projection keeps human 0 or human 1, got %r" % kept)
        if margin < 0:
            raise ScenarioConfigError("boundary margin must be non-negative, got %r" % margin)
        self.index = index
        self.kept = kept
        self.reward_radius = reward_radius
        self.depth_noise = dict(depth_noise or {'a': 0.0, 'b': 0.0})
        self.margin = float(margin)

    def undecided(self, distance):
        std = self.depth_noise['a'] + self.depth_noise['b'] * distance
        return abs(distance - self.reward_radius) < self.margin * std

    @property
    def mask(self):
        return [k // 2 == self.kept for k in range(4)]

    def project(self, observed):
        return observed[2 * self.kept], observed[2 * self.kept + 1]

    def predicted_reward(self, observed, a=None):
        distance = math.hypot(*self.project(observed))
        if self.undecided(distance):
            return None
        return 1.0 if distance <= self.reward_radius else 0.0

    def __repr__(self):
        return '<ProjectionAbstraction %d: human%d>' % (self.index, self.kept + 1)


def projection_abstractions(reward_radius=DEFAULT_REWARD_RADIUS, depth_noise=None, margin=0.0):
    return [ProjectionAbstraction(i, i, reward_radius, depth_noise, margin) for i in range(2)]


class PursuitPolicy(object):
    """
    Stop inside STOP_FRACTION of the reward radius, otherwise pick the
    command whose one-tick displacement gets closest to the kept human
    (lowest index on ties).
    """
    def __init__(self, ab, speed=1.0, turn_rate=math.pi / 2, period=CONTROL_PERIOD):
        self.ab = ab
        self.displacements = []
        for _, forward, turn in ACTIONS:
            half_turn = turn * turn_rate * period / 2.0
            step = forward * speed * period
            self.displacements.append((step * math.cos(half_turn), step * math.sin(half_turn)))

    def action(self, observed):
        x, y = self.ab.project(observed)
        if math.hypot(x, y) <= STOP_FRACTION * self.ab.reward_radius:
            return STOP
        distances = [math.hypot(x - dx, y - dy) for dx, dy in self.displacements]
        best = min(distances)
        return next(a for a, d in enumerate(distances) if d <= best + 1e-12)


def pursuit_policy(ab, observed, speed=1.0, turn_rate=math.pi / 2, period=CONTROL_PERIOD):
    return PursuitPolicy(ab, speed, turn_rate, period).action(observed)


def grid_projection_mdp(n_cells, holder):
    """
    A finite stand-in for the tracking problem: each human sits in one of
    n_cells cells relative to the robot and drifts by -1/0/+1; the robot's
    move shifts both. Reward 1 when the holder shares the robot's cell.
    """
    if n_cells < 1 or n_cells % 2 == 0:
        raise ValueError("n_cells must be a positive odd number, got %r" % n_cells)
    half = n_cells // 2
    moves = [-1, 0, 1]

    per_human = []
    for move in moves:
        matrix = np.zeros((n_cells, n_cells))
        for c in range(n_cells):
            for drift in (-1, 0, 1):
                target = min(max(c + drift - move, 0), n_cells - 1)
                matrix[c, target] += 1.0 / 3
        per_human.append(matrix)

    transitions = [np.kron(matrix, matrix) for matrix in per_human]
    holder_cell = [divmod(s, n_cells)[holder] for s in range(n_cells * n_cells)]
    rewards = [1.0 if c == half else 0.0 for c in holder_cell]

    return Mdp(transitions, np.repeat(np.array(rewards)[:, np.newaxis], len(moves), axis=1),
               action_labels=['back', 'hold', 'ahead'],
               name='grid%d-human%d' % (n_cells, holder + 1))


def projection_partition(n_cells, holder):
    return Partition([divmod(s, n_cells)[holder] for s in range(n_cells * n_cells)])
