"""Exception types shared across the package."""


class MinimaxDesignError(Exception):
    """Base class for errors raised by this package."""


class NumericFailure(MinimaxDesignError):
    """An objective or iterate became non-finite or otherwise unusable.

    The CLI maps this to its numeric-failure exit code.
    """
