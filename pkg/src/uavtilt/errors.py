"""Exception types raised across the package."""


class InvalidParameterError(ValueError):
    """A numeric parameter is outside its admissible range."""


class InvalidAngleError(InvalidParameterError):
    """An elevation angle lies outside [-90, 90] degrees."""


class InvalidGeometryError(ValueError):
    """A link has zero length, so received power is undefined."""


class ConfigError(ValueError):
    """A configuration document is malformed or holds an out-of-range value.

    ``key_path`` is the dotted path to the offending key, e.g. ``radio.alpha0``.
    """

    def __init__(self, key_path: str, message: str):
        self.key_path = key_path
        super().__init__(f"{key_path}: {message}" if key_path else message)
