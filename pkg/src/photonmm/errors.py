"""Exception types shared across the package."""


class ConfigurationError(ValueError):
    """A physical parameter or run configuration violates its contract."""


class EmptyLedgerError(ConfigurationError):
    """An analysis was asked to estimate rates from a ledger with zero trials."""


class DataInconsistencyError(RuntimeError):
    """Observed counts are impossible under every hypothesis being compared."""
