"""Exception types raised by the public API."""


class InvalidMeasure(ValueError):
    """Atom list or weight data does not describe a valid measure."""


class NotNormalized(InvalidMeasure):
    """Probability-density input whose total mass is not 1."""


class GridMismatch(ValueError):
    """Two densities on different grids were combined."""


class InvalidArgument(ValueError):
    """Parameter outside its documented domain."""


class Unsupported(ValueError):
    """Operation defined only for a restricted input class."""


class NoChannelSolution(ValueError):
    """No channel parameter reproduces the requested fixed point."""
