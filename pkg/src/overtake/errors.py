"""Refusals: outcomes that are reported with a reason instead of a value."""


class Refusal(Exception):
    """An operation declined to produce a value; ``str(err)`` is the reason."""

    kind = "refused"


class GrowthOverflow(Refusal):
    kind = "overflow"


class Unresolved(Refusal):
    kind = "unresolved"


class TableBudgetExceeded(Refusal):
    kind = "table_budget"


class StateLimitExceeded(Refusal):
    kind = "state_limit"


class CertificateViolation(RuntimeError):
    """A certified machine ran outside its claimed polynomial bound."""


class RegistryError(KeyError):
    pass
