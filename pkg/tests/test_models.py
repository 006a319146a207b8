"""Tests for the built-in generative models."""

import math

import numpy as np
import pytest

from bell_lab import (
    ANIMAL_ACTS_CELLS,
    ANIMAL_ACTS_SOLO_A,
    AnimalActsData,
    CatsModel,
    IncompleteData,
    JointDistribution,
    Scenario,
    Setting,
    Side,
    SingleDistribution,
    SingletModel,
    VesselsModel,
    build_model,
    chsh,
    marginal_law_holds,
    run_trials,
)

ALL_SETTINGS = (Setting.AB, Setting.ABp, Setting.ApB, Setting.ApBp)


class TestVesselsModel:
    def test_exact_tables(self):
        m = VesselsModel()
        assert m.exact_distribution(Setting.AB) == JointDistribution(0, 0.5, 0.5, 0)
        for s in (Setting.ABp, Setting.ApB, Setting.ApBp):
            assert m.exact_distribution(s) == JointDistribution(1, 0, 0, 0)

    def test_scenario_reaches_chsh_4_and_breaks_marginal_law(self):
        scen = VesselsModel().scenario()
        assert chsh(scen).s_value == 4.0
        assert not marginal_law_holds(scen)

    def test_double_siphon_samples_are_anticorrelated(self):
        m = VesselsModel()
        for i in range(50):
            assert m.sample(Setting.AB, seed=42, index=i) in ("12", "21")

    def test_primed_samples_always_11(self):
        m = VesselsModel()
        for setting in (Setting.ABp, Setting.ApB, Setting.ApBp):
            for i in range(20):
                assert m.sample(setting, seed=9, index=i) == "11"

    def test_latent_volume_bookkeeping(self):
        # Both collected volumes always add up to the full 20 liters.
        m = VesselsModel()
        u = np.random.default_rng(1).random(10_000)
        left, right = m.siphon_split(u)
        assert np.all(left + right == m.total_volume)

    def test_threshold_tie_counts_as_outcome_2(self):
        m = VesselsModel()
        codes = m.outcomes_from_uniforms(Setting.AB, np.array([[0.5]]))
        assert codes[0] == 2  # "21": left collected exactly 10 liters


class TestCatsModel:
    def test_exact_tables(self):
        m = CatsModel()
        assert m.exact_distribution(Setting.AB) == JointDistribution(0, 0.5, 0.5, 0)
        for s in (Setting.ABp, Setting.ApB, Setting.ApBp):
            assert m.exact_distribution(s) == JointDistribution(0.5, 0, 0, 0.5)

    def test_nonlocal_box(self):
        scen = CatsModel().scenario()
        assert chsh(scen).s_value == 4.0
        assert marginal_law_holds(scen, epsilon=1e-12)

    def test_double_context_anticorrelated(self):
        m = CatsModel()
        for i in range(50):
            assert m.sample(Setting.AB, seed=8, index=i) in ("12", "21")

    def test_primed_outcomes_depend_only_on_bell(self):
        # The shared bell latent is the first uniform of the trial; flipping
        # any other draw leaves every primed outcome unchanged.
        m = CatsModel()
        rng = np.random.default_rng(4)
        u = rng.random((500, 1))
        for setting in (Setting.ABp, Setting.ApB, Setting.ApBp):
            codes = m.outcomes_from_uniforms(setting, u)
            assert set(np.unique(codes)) <= {0, 3}  # outcomes 11 or 22 only
            expected = np.where(u[:, 0] < m.bell_probability, 0, 3)
            assert np.array_equal(codes, expected)

    def test_all_contexts_share_the_bell_latent(self):
        m = CatsModel()
        rng = np.random.default_rng(12)
        bell = rng.random((200, 1))
        primed = {
            s: m.outcomes_from_uniforms(s, bell)
            for s in (Setting.ABp, Setting.ApB, Setting.ApBp)
        }
        for codes in primed.values():
            assert np.array_equal(codes, primed[Setting.ABp])


class TestSingletModel:
    def test_effective_angle_is_pairwise_sum(self):
        m = SingletModel(0.1, 0.2, 0.3, 0.4)
        assert m.effective_angle(Setting.AB) == pytest.approx(0.4)
        assert m.effective_angle(Setting.ABp) == pytest.approx(0.5)
        assert m.effective_angle(Setting.ApB) == pytest.approx(0.5)
        assert m.effective_angle(Setting.ApBp) == pytest.approx(0.6)

    def test_zero_angles_give_perfect_anticorrelation(self):
        m = SingletModel(0, 0, 0, 0)
        assert m.exact_distribution(Setting.AB) == JointDistribution(0, 0.5, 0.5, 0)

    def test_expectation_matches_cosine_for_random_angles(self):
        from bell_lab import expectation

        rng = np.random.default_rng(77)
        for _ in range(100):
            angles = rng.uniform(-math.pi, math.pi, size=4)
            m = SingletModel(*angles)
            for setting in ALL_SETTINGS:
                theta = m.effective_angle(setting)
                e = expectation(m.exact_distribution(setting))
                assert e == pytest.approx(-math.cos(theta), abs=1e-12)

    def test_demo_angles_reach_tsirelson(self):
        scen = SingletModel().scenario()
        assert chsh(scen).s_value == pytest.approx(2 * math.sqrt(2), abs=1e-12)

    def test_sampler_matches_exact_table(self):
        m = SingletModel()
        n = 100_000
        counts = run_trials(m, Setting.AB, n, seed=5)
        exact = m.exact_distribution(Setting.AB)
        for k, p in zip(counts.cells, exact.cells):
            assert abs(k / n - p) < 0.01


class TestEmpiricalConvergence:
    @pytest.mark.parametrize("model", [VesselsModel(), CatsModel(), SingletModel()])
    def test_frequencies_converge_to_exact_tables(self, model):
        n = 100_000
        for setting in ALL_SETTINGS:
            counts = run_trials(model, setting, n, seed=13)
            exact = model.exact_distribution(setting)
            for k, p in zip(counts.cells, exact.cells):
                assert abs(k / n - p) < 0.01


class TestAnimalActsData:
    def test_shipped_values_are_verbatim(self):
        assert ANIMAL_ACTS_SOLO_A == (0.531, 0.469)
        assert ANIMAL_ACTS_CELLS[(Setting.AB, "11")] == 0.049
        assert ANIMAL_ACTS_CELLS[(Setting.AB, "12")] == 0.630
        assert ANIMAL_ACTS_CELLS[(Setting.ABp, "11")] == 0.593
        assert ANIMAL_ACTS_CELLS[(Setting.ABp, "12")] == 0.025

    def test_horse_marginals(self):
        m = AnimalActsData()
        assert m.known_marginal(Setting.AB) == pytest.approx(0.679, abs=1e-9)
        assert m.known_marginal(Setting.ABp) == pytest.approx(0.618, abs=1e-9)

    def test_horse_marginal_report(self):
        report = AnimalActsData().horse_marginal_report(epsilon=0.01)
        assert [v for _, v in report.values] == [
            pytest.approx(0.679, abs=1e-9),
            pytest.approx(0.618, abs=1e-9),
        ]
        assert report.max_discrepancy == pytest.approx(0.061, abs=1e-9)
        assert not report.holds

    def test_horse_marginal_report_with_solo(self):
        report = AnimalActsData().horse_marginal_report(include_solo=True)
        assert report.values[0] == ("solo", 0.531)
        assert len(report.values) == 3

    def test_exact_distribution_requires_loaded_tables(self):
        with pytest.raises(IncompleteData):
            AnimalActsData().exact_distribution(Setting.AB)
        with pytest.raises(IncompleteData):
            AnimalActsData().scenario()

    def test_unknown_setting_marginal_raises(self):
        with pytest.raises(IncompleteData):
            AnimalActsData().known_marginal(Setting.ApBp)

    def test_full_table_ingestion(self):
        # Synthetic full tables consistent with the shipped horse-row cells.
        tables = Scenario(
            ab=JointDistribution(0.049, 0.630, 0.2, 0.121),
            abp=JointDistribution(0.593, 0.025, 0.3, 0.082),
            apb=JointDistribution(0.25, 0.25, 0.25, 0.25),
            apbp=JointDistribution(0.4, 0.1, 0.1, 0.4),
        )
        m = AnimalActsData.with_tables(tables.to_json_dict())
        assert m.exact_distribution(Setting.AB).p11 == pytest.approx(0.049)
        scen = m.scenario()
        # The shipped solo distribution rides along.
        assert scen.solo_a == SingleDistribution(0.531, 0.469)
        from bell_lab import marginal_check

        report = marginal_check(scen, Side.A, 1, epsilon=0.01, include_solo=True)
        assert [v for _, v in report.values] == [
            pytest.approx(0.531),
            pytest.approx(0.679),
            pytest.approx(0.618),
        ]

    def test_loaded_solo_takes_precedence(self):
        tables = Scenario(
            ab=JointDistribution(0.049, 0.630, 0.2, 0.121),
            abp=JointDistribution(0.593, 0.025, 0.3, 0.082),
            apb=JointDistribution(0.25, 0.25, 0.25, 0.25),
            apbp=JointDistribution(0.4, 0.1, 0.1, 0.4),
            solo_a=SingleDistribution(0.6, 0.4),
        )
        m = AnimalActsData.with_tables(tables)
        assert m.solo_distribution(Side.A) == SingleDistribution(0.6, 0.4)

    def test_sampling_from_loaded_tables(self):
        tables = Scenario(
            ab=JointDistribution(0.049, 0.630, 0.2, 0.121),
            abp=JointDistribution(0.593, 0.025, 0.3, 0.082),
            apb=JointDistribution(0.25, 0.25, 0.25, 0.25),
            apbp=JointDistribution(0.4, 0.1, 0.1, 0.4),
        )
        m = AnimalActsData.with_tables(tables)
        counts = run_trials(m, Setting.AB, 50_000, seed=2)
        for k, p in zip(counts.cells, tables.ab.cells):
            assert abs(k / counts.n_total - p) < 0.01


class TestBuildModel:
    def test_names(self):
        assert build_model("vessels").name == "vessels"
        assert build_model("cats").name == "cats"
        assert build_model("animal-acts").name == "animal-acts"

    def test_singlet_angles_passthrough(self):
        m = build_model("singlet", angles=(0.0, 1.0, 2.0, 3.0))
        assert (m.angle_a, m.angle_ap, m.angle_b, m.angle_bp) == (0.0, 1.0, 2.0, 3.0)

    def test_unknown_name(self):
        with pytest.raises(KeyError):
            build_model("teapot")
