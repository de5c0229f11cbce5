from .exceptions import ConfigError

NAME_MODEL_KINDS = ("encode", "constant", "file")


class Config:
    def __init__(
        self,
        depth=4,
        search_bound=1 << 18,
        split_window=4,
        materialize_ceiling=3,
        copy_check_depth=3,
        name_model="encode",
        seed=0,
        jobs=1,
    ):
        """Settings for this run of the localization pipeline"""
        if depth < 0:
            raise ConfigError("Specified invalid depth %d, expected depth >= 0" % depth)
        self.depth = depth

        # Copy members a single level sweep may examine before giving up
        if search_bound <= 0:
            raise ConfigError("Search bound must be positive, got %d" % search_bound)
        self.search_bound = search_bound

        # find_split tries n1 = n+1 .. n+split_window
        if split_window <= 0:
            raise ConfigError("Split window must be positive, got %d" % split_window)
        self.split_window = split_window

        # |L_4| = 2^2059, so nothing above level 3 is ever enumerated
        if not 0 <= materialize_ceiling <= 3:
            raise ConfigError(
                "Materialize ceiling must be between 0 and 3, got %d"
                % materialize_ceiling
            )
        self.materialize_ceiling = materialize_ceiling

        if copy_check_depth < 0:
            raise ConfigError(
                "Copy check depth must be non-negative, got %d" % copy_check_depth
            )
        self.copy_check_depth = copy_check_depth

        kind = name_model.split(":", 1)[0]
        if kind not in NAME_MODEL_KINDS:
            raise ConfigError(
                "Specified invalid name model '%s', expected encode, constant:<v> or file:<path>"
                % name_model
            )
        if kind != "encode" and ":" not in name_model:
            raise ConfigError("Name model '%s' is missing its argument" % name_model)
        self.name_model = name_model

        self.seed = seed

        if jobs < 1:
            raise ConfigError("Worker count must be at least 1, got %d" % jobs)
        self.jobs = jobs

    def to_dict(self):
        return {
            "depth": self.depth,
            "search_bound": self.search_bound,
            "split_window": self.split_window,
            "materialize_ceiling": self.materialize_ceiling,
            "copy_check_depth": self.copy_check_depth,
            "name_model": self.name_model,
            "seed": self.seed,
        }
