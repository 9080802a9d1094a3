class ConsistencyError(RuntimeError):
    """A closed-form result disagreed with a direct computation.

    Raised only when an internal cross-check fails; it indicates a bug, not
    bad input.
    """
