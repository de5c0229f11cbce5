import pytest

from rado_localization.config import Config
from rado_localization.exceptions import ConfigError


class TestConfig:
    def test_default_values(self):
        """Verify the default values in the Config class."""
        config = Config()
        assert config.depth == 4
        assert config.search_bound == 1 << 18
        assert config.split_window == 4
        assert config.materialize_ceiling == 3
        assert config.copy_check_depth == 3
        assert config.name_model == "encode"
        assert config.seed == 0
        assert config.jobs == 1

    def test_modified_values(self):
        config = Config(
            depth=2,
            search_bound=100,
            split_window=2,
            materialize_ceiling=1,
            copy_check_depth=0,
            name_model="constant:7",
            seed=5,
            jobs=3,
        )
        assert config.depth == 2
        assert config.search_bound == 100
        assert config.split_window == 2
        assert config.materialize_ceiling == 1
        assert config.copy_check_depth == 0
        assert config.name_model == "constant:7"
        assert config.seed == 5
        assert config.jobs == 3

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"depth": -1},
            {"search_bound": 0},
            {"split_window": 0},
            {"materialize_ceiling": 4},
            {"materialize_ceiling": -1},
            {"copy_check_depth": -1},
            {"name_model": "random"},
            {"name_model": "constant"},
            {"jobs": 0},
        ],
    )
    def test_invalid_values(self, kwargs):
        with pytest.raises(ConfigError):
            Config(**kwargs)

    def test_dict_round_trip(self):
        config = Config(depth=3, name_model="file:names.csv", seed=2)
        assert Config(**config.to_dict()).to_dict() == config.to_dict()
        assert "jobs" not in config.to_dict()
