"""Exception types shared across the package."""


class UnharvestableError(Exception):
    """A population cannot accumulate its required GDUs within the horizon."""

    def __init__(self, message, population_id=None, plant_day=None, required_gdu=None, index=None):
        super().__init__(message)
        self.population_id = population_id
        self.plant_day = plant_day
        self.required_gdu = required_gdu
        self.index = index


class NoHarvestError(Exception):
    """No week has a positive harvest, so the weekly criteria are undefined."""


class GduDataError(ValueError):
    """GDU history is missing days needed to build a forecast."""


class SchemaError(ValueError):
    """An input file does not match its documented schema."""


class ConfigError(ValueError):
    """A synthetic-instance configuration cannot produce a valid instance."""
