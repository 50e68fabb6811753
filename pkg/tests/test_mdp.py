import numpy as np
import pytest

from sonsim.faults import FaultKind, FaultRates
from sonsim.mdp import (ACTION_CLEARS, CLEAR_ACTION_FOR, EpisodeConfig,
                        MdpAction, MdpState, RewardSchedule, SonEnv,
                        alarm_reward, encode_state, transition)
from sonsim.radio import ClusterConfig


def reward_oracle(prev, cur, r=(-1.0, 0.0, 1.0, 5.0)):
    # independent transcription of the reward cases; the all-clear
    # objective case takes priority, and a fresh increase from zero counts
    # as worsened
    worsened, unchanged, improved, cleared = r
    if cur == 0:
        return cleared
    if cur < prev:
        return improved
    if cur == prev:
        return unchanged
    return worsened


SMALL = ClusterConfig(num_sites=1, sectors_per_site=3, ues_per_cell=2)


class TestReward:
    def test_exhaustive_against_oracle(self):
        sched = RewardSchedule()
        for prev in range(6):
            for cur in range(6):
                assert alarm_reward(prev, cur, sched) == reward_oracle(prev, cur)

    @pytest.mark.parametrize("prev,cur,expected", [
        (1, 0, 5.0),
        (2, 2, 0.0),
        (1, 2, -1.0),
        (3, 2, 1.0),
        (0, 0, 5.0),
        (0, 1, -1.0),
    ])
    def test_known_cases(self, prev, cur, expected):
        assert alarm_reward(prev, cur, RewardSchedule()) == expected

    def test_negative_counts_rejected(self):
        with pytest.raises(ValueError):
            alarm_reward(-1, 0, RewardSchedule())


class TestTransition:
    @pytest.mark.parametrize("state,prev,cur,expected", [
        (MdpState.TRANSIENT, 0, 1, MdpState.INCREASED),
        (MdpState.DECREASED, 2, 1, MdpState.DECREASED),
        (MdpState.INCREASED, 1, 1, MdpState.INCREASED),
        (MdpState.INCREASED, 2, 1, MdpState.DECREASED),
        (MdpState.TRANSIENT, 0, 0, MdpState.TRANSIENT),
    ])
    def test_cases(self, state, prev, cur, expected):
        assert transition(state, prev, cur) == expected


class TestEncode:
    def test_one_hot(self):
        assert np.array_equal(encode_state(MdpState.TRANSIENT), [1.0, 0.0, 0.0])
        assert np.array_equal(encode_state(MdpState.DECREASED), [0.0, 0.0, 1.0])

    def test_orthonormal(self):
        mat = np.stack([encode_state(MdpState(s)) for s in range(3)])
        assert np.array_equal(mat @ mat.T, np.eye(3))


class TestEpisodeConfig:
    def test_defaults(self):
        cfg = EpisodeConfig()
        assert cfg.ttis_per_episode == 20
        assert cfg.num_episodes == 50
        assert cfg.gamma == 0.95

    def test_validation(self):
        with pytest.raises(ValueError):
            EpisodeConfig(ttis_per_episode=0)
        with pytest.raises(ValueError):
            EpisodeConfig(gamma=1.0)


class TestActionAlarmPairing:
    def test_maps_are_inverse(self):
        for action, alarm in ACTION_CLEARS.items():
            assert CLEAR_ACTION_FOR[alarm] == action
        assert ACTION_CLEARS[MdpAction.RESTORE_NEIGHBOR] == FaultKind.NEIGHBOR_DOWN
        assert ACTION_CLEARS[MdpAction.ENABLE_DIVERSITY] == FaultKind.DIVERSITY_LOST
        assert ACTION_CLEARS[MdpAction.RECOVER_POWER] == FaultKind.FEEDER_FAULT
        assert ACTION_CLEARS[MdpAction.RESET_AZIMUTH] == FaultKind.AZIMUTH_DRIFT


class TestEnv:
    def test_clear_last_alarm_terminates_with_objective_reward(self):
        env = SonEnv(SMALL, rates=FaultRates((1.0, 0, 0, 0, 0)), seed=1)
        env.reset(0)
        env.register.increment(FaultKind.FEEDER_FAULT)
        env.cells[0].tx_power_delta = -3.0
        state, reward, terminal, obs = env.step(MdpAction.RECOVER_POWER)
        assert reward == 5.0
        assert terminal
        assert env.cells[0].tx_power_delta == 0.0
        assert obs["alarm_count"] == 0

    def test_no_faults_terminates_first_tti(self):
        env = SonEnv(SMALL, rates=FaultRates((1.0, 0, 0, 0, 0)), seed=1)
        env.reset(0)
        state, reward, terminal, obs = env.step(MdpAction.NO_ACTION)
        assert terminal
        assert env.t == 1
        assert reward == 5.0

    def test_timeout_terminates_without_objective_reward(self):
        # azimuth fault every TTI, agent never acts
        env = SonEnv(SMALL, rates=FaultRates((0, 1.0, 0, 0, 0)), seed=1)
        env.reset(0)
        rewards = []
        while not env.terminal:
            _, r, _, _ = env.step(MdpAction.NO_ACTION)
            rewards.append(r)
        assert env.t == env.episode_config.ttis_per_episode
        assert rewards[0] == -1.0          # first fault raises the count
        assert all(r == 0.0 for r in rewards[1:])  # same-type repeats
        assert env.alarm_count == 1

    def test_step_after_terminal_raises(self):
        env = SonEnv(SMALL, rates=FaultRates((1.0, 0, 0, 0, 0)), seed=1)
        env.reset(0)
        env.step(MdpAction.NO_ACTION)
        with pytest.raises(RuntimeError):
            env.step(MdpAction.NO_ACTION)

    def test_tti_budget_respected(self):
        env = SonEnv(SMALL, seed=9)
        for ep in range(5):
            env.reset(ep)
            steps = 0
            while not env.terminal:
                env.step(MdpAction.NO_ACTION)
                steps += 1
            assert steps <= env.episode_config.ttis_per_episode

    def test_terminal_iff_cleared_or_budget(self):
        env = SonEnv(SMALL, seed=13)
        rng = np.random.default_rng(0)
        for ep in range(10):
            env.reset(ep)
            while not env.terminal:
                env.step(MdpAction(int(rng.integers(5))))
                budget = env.episode_config.ttis_per_episode
                assert env.terminal == (env.alarm_count == 0 or env.t >= budget)

    def test_deterministic_given_seed_and_actions(self):
        def run(seed):
            env = SonEnv(ClusterConfig(ues_per_cell=2), seed=seed)
            out = []
            for ep in range(4):
                env.reset(ep)
                k = 0
                while not env.terminal:
                    action = MdpAction((k + ep) % 5)
                    state, r, term, obs = env.step(action)
                    out.append((int(state), r, term,
                                obs["sinr_db"].tobytes(),
                                obs["ue_mbps"].tobytes()))
                    k += 1
            return out

        a, b = run(11), run(11)
        assert a == b
        assert a != run(12)

    def test_reset_heals_everything(self):
        env = SonEnv(SMALL, rates=FaultRates((0, 0.25, 0.25, 0.25, 0.25)), seed=4)
        env.reset(0)
        while not env.terminal:
            env.step(MdpAction.NO_ACTION)
        assert env.alarm_count > 0
        env.reset(1)
        assert env.alarm_count == 0
        assert all(c.is_up and c.diversity_enabled and c.tx_power_delta == 0.0
                   and c.azimuth_offset == 0.0 for c in env.cells)

    def test_shadowing_redrawn_per_episode(self):
        env = SonEnv(SMALL, seed=4)
        env.reset(0)
        first = env.ues[0].shadow_map.copy()
        env.reset(1)
        assert not np.array_equal(env.ues[0].shadow_map, first)
        env.reset(0)
        assert np.array_equal(env.ues[0].shadow_map, first)
