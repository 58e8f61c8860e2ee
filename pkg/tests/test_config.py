import pytest

from pathsteer.config import PlannerSettings, dump_settings, parse_settings


class TestParseSettings:
    def test_defaults_match_published_parameters(self):
        s = PlannerSettings()
        assert s.gains.k_rho == 5.0
        assert s.gains.k_alpha == 15.0
        assert s.gains.k_beta == -5.0
        assert s.steer.dt == 0.1
        assert s.steer.max_steps == 300
        assert s.robot.v_max == 2.0
        assert s.robot.a_max == 0.4
        assert s.robot.wheelbase == 2.0
        assert s.phase1.eta0 == 1.0
        assert s.phase1.discount == 0.8
        assert s.phase1.move_rounds == 5
        assert s.phase1.insert_rounds == 1
        assert s.phase1.d_min == 1.0
        assert s.prune.max_rounds == 50
        assert s.prune_hs.sample_step == 1.0
        assert s.prune_hs.max_offset == 5.0
        assert s.cell_size == 0.2
        assert s.min_clearance == 20.0

    def test_overrides_and_comments(self):
        text = """
        # tighter controller
        k_rho = 6.5
        max_steps = 200
        extra_mode = heading-average
        cell_size = 0.1
        """
        s = parse_settings(text)
        assert s.gains.k_rho == 6.5
        assert s.steer.max_steps == 200
        assert s.prune_hs.extra_mode == "heading-average"
        assert s.cell_size == 0.1
        # untouched sections keep their defaults
        assert s.robot.v_max == 2.0

    def test_unknown_key_rejected(self):
        with pytest.raises(ValueError, match="unknown key"):
            parse_settings("warp_speed = 9\n")

    def test_bad_line_rejected(self):
        with pytest.raises(ValueError, match="line 1"):
            parse_settings("k_rho 5\n")

    def test_invalid_values_hit_dataclass_validation(self):
        with pytest.raises(ValueError):
            parse_settings("k_beta = 1.0\n")

    def test_dump_parses_back(self):
        s = parse_settings("k_alpha = 16\nhorizon = 7\n")
        again = parse_settings(dump_settings(s))
        assert again == s

    def test_every_documented_parameter_is_exposed(self):
        dumped = dump_settings(PlannerSettings())
        for key in (
            "k_rho",
            "k_alpha",
            "k_beta",
            "dt",
            "max_steps",
            "v_max",
            "a_max",
            "wheelbase",
            "gamma_max",
            "radius",
            "pos_tol",
            "ang_tol",
            "eta0",
            "discount",
            "move_rounds",
            "insert_rounds",
            "d_min",
            "max_prune_rounds",
            "horizon",
            "sample_step",
            "max_offset",
            "extra_mode",
            "cell_size",
            "min_clearance",
        ):
            assert f"{key} = " in dumped
