"""Skill-vs-difficulty model: ordering properties and their witnesses."""

import numpy as np
import pytest

from profilekit.theory.skill import (
    SkillModel,
    check_accuracy_monotonicity,
    check_universality,
    normal_cdf,
    random_skill_model,
    skill_accuracy,
)

CROSSING_TABLE = np.array([[0.9, 0.1], [0.2, 0.8]])


def universality_oracle(table):
    """All-pairs check: every learner pair must agree on every point pair."""
    num_skills, num_points = table.shape
    for i in range(num_points):
        for j in range(i + 1, num_points):
            diffs = table[:, j] - table[:, i]
            if not (np.all(diffs > 0) or np.all(diffs < 0) or np.all(diffs == 0)):
                return False
    return True


class TestNormalCdf:
    def test_zero_gap_is_a_coin_flip(self):
        assert normal_cdf(0.0) == 0.5

    def test_large_gap_saturates(self):
        assert normal_cdf(6.0) > 1.0 - 1e-8
        assert normal_cdf(-6.0) < 1e-8

    def test_complement_symmetry(self):
        rng = np.random.default_rng(70)
        x = rng.normal(scale=3.0, size=100)
        np.testing.assert_allclose(normal_cdf(x) + normal_cdf(-x), 1.0, atol=1e-15)

    def test_strictly_increasing(self):
        x = np.linspace(-4.0, 4.0, 200)
        assert np.all(np.diff(normal_cdf(x)) > 0)


class TestSkillModel:
    def test_table_matches_pointwise_accuracy(self):
        model = SkillModel(
            skills=np.array([-1.0, 0.5]), difficulties=np.array([0.0, 0.5, 2.0])
        )
        table = model.accuracy_table()
        assert table.shape == (2, 3)
        for a in range(2):
            for z in range(3):
                assert table[a, z] == skill_accuracy(model, a, z)
        assert table[1, 1] == 0.5  # skill equals difficulty

    def test_table_values_are_probabilities(self):
        rng = np.random.default_rng(71)
        model = random_skill_model(rng, num_skills=20, num_points=30)
        table = model.accuracy_table()
        assert np.all(table > 0.0) and np.all(table < 1.0)

    def test_bad_shapes_rejected(self):
        with pytest.raises(ValueError, match="skills"):
            SkillModel(skills=np.zeros((2, 2)), difficulties=np.zeros(3))
        with pytest.raises(ValueError, match="non-empty"):
            SkillModel(skills=np.array([]), difficulties=np.zeros(3))
        with pytest.raises(ValueError, match="non-finite"):
            SkillModel(skills=np.array([0.0, np.nan]), difficulties=np.zeros(3))


class TestUniversality:
    def test_random_models_always_pass(self):
        rng = np.random.default_rng(72)
        for _ in range(25):
            model = random_skill_model(rng, num_skills=12, num_points=25)
            assert check_universality(model).passed

    def test_crossing_table_fails_with_a_real_disagreement(self):
        report = check_universality(CROSSING_TABLE)
        assert not report.passed
        p1, p2 = report.witness["points"]
        a, b = report.witness["skills"]
        assert CROSSING_TABLE[a, p2] <= CROSSING_TABLE[a, p1]
        assert CROSSING_TABLE[b, p2] > CROSSING_TABLE[b, p1]

    def test_tie_under_one_learner_only_fails(self):
        table = np.array([[0.5, 0.5], [0.3, 0.7]])
        report = check_universality(table)
        assert not report.passed

    def test_duplicate_points_pass(self):
        table = np.array([[0.2, 0.2, 0.6], [0.4, 0.4, 0.9]])
        assert check_universality(table).passed

    def test_single_row_or_column_is_vacuous(self):
        assert check_universality(np.array([[0.3, 0.9, 0.1]])).passed
        assert check_universality(np.array([[0.3], [0.9], [0.1]])).passed

    def test_agrees_with_all_pairs_oracle_on_discretized_tables(self):
        rng = np.random.default_rng(73)
        levels = np.array([0.0, 0.25, 0.5, 0.75, 1.0])
        for _ in range(300):
            shape = (rng.integers(2, 5), rng.integers(2, 6))
            table = levels[rng.integers(0, levels.size, size=shape)]
            report = check_universality(table)
            assert report.passed == universality_oracle(table)
            if not report.passed:
                p1, p2 = report.witness["points"]
                a, b = report.witness["skills"]
                assert table[a, p2] <= table[a, p1]
                assert table[b, p2] > table[b, p1]

    def test_rejects_higher_rank_input(self):
        with pytest.raises(ValueError, match="2-d"):
            check_universality(np.zeros((2, 2, 2)))


class TestAccuracyMonotonicity:
    def test_skill_sorted_models_pass(self):
        rng = np.random.default_rng(74)
        for _ in range(25):
            model = random_skill_model(rng, num_skills=12, num_points=25)
            order = np.argsort(model.skills)
            assert check_accuracy_monotonicity(model, resource_order=order).passed

    def test_unsorted_rows_report_the_first_drop(self):
        report = check_accuracy_monotonicity(CROSSING_TABLE)
        assert not report.passed
        assert report.witness == {"point": 0, "step": 0}

    def test_witness_points_at_an_actual_decrease(self):
        rng = np.random.default_rng(75)
        for _ in range(50):
            table = rng.random((5, 8))
            report = check_accuracy_monotonicity(table)
            drops = np.diff(table, axis=0) < 0
            assert report.passed == (not drops.any())
            if not report.passed:
                k, z = report.witness["step"], report.witness["point"]
                assert table[k + 1, z] < table[k, z]

    def test_resource_order_reorders_rows(self):
        table = np.array([[0.9, 0.8], [0.1, 0.2], [0.5, 0.5]])
        assert not check_accuracy_monotonicity(table).passed
        assert check_accuracy_monotonicity(table, resource_order=[1, 2, 0]).passed

    def test_single_learner_is_vacuous(self):
        assert check_accuracy_monotonicity(np.array([[0.4, 0.9]])).passed

    def test_bad_resource_order_rejected(self):
        table = np.array([[0.1, 0.2], [0.3, 0.4]])
        with pytest.raises(ValueError, match="permute"):
            check_accuracy_monotonicity(table, resource_order=[0, 0])


class TestReportShape:
    def test_reports_serialize_for_the_cli(self):
        report = check_universality(CROSSING_TABLE)
        payload = report.to_dict()
        assert payload["property"] == "universality"
        assert payload["pass"] is False
        assert set(payload["witness"]) == {"points", "skills"}
