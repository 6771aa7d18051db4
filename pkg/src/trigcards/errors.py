"""Engine error hierarchy.

Every rejection the engine can produce is a subclass of EngineError.  The
class name doubles as the machine-readable code surfaced over the API and in
scenario expectation files, so renaming a class is a wire-format change.
"""


class EngineError(Exception):
    """Base class for every validation failure the engine can raise."""

    @property
    def code(self) -> str:
        return type(self).__name__


# card algebra / codec
class ExponentOutOfRange(EngineError):
    pass


class NotEncodable(EngineError):
    pass


class MalformedCode(EngineError):
    pass


# ledger core
class SequenceGap(EngineError):
    pass


class CorruptLog(EngineError):
    def __init__(self, seq: int, reason: str = ""):
        super().__init__(f"corrupt log at seq {seq}: {reason}" if reason else f"corrupt log at seq {seq}")
        self.seq = seq


class InvalidAccountId(EngineError):
    pass


class AccountExists(EngineError):
    pass


class UnknownAccount(EngineError):
    pass


class UnknownToken(EngineError):
    pass


class NotOwner(EngineError):
    pass


class NotAdmin(EngineError):
    pass


class InvalidAmount(EngineError):
    pass


class UnknownKind(EngineError):
    pass


class MalformedPayload(EngineError):
    pass


# contracts
class SameToken(EngineError):
    pass


class TokenEscrowed(EngineError):
    pass


class InsufficientFunds(EngineError):
    pass


class InsufficientXp(EngineError):
    pass


class AlreadyMaxRarity(EngineError):
    pass


class InvalidPrice(EngineError):
    pass


class NotSeller(EngineError):
    pass


class ListingNotActive(EngineError):
    pass


class SelfPurchase(EngineError):
    pass


class InvalidParams(EngineError):
    pass


class VersionSkew(EngineError):
    pass


# trivia
class ParseError(EngineError):
    pass


class DuplicateQid(EngineError):
    pass


class BadAnswerIndex(EngineError):
    pass


class UnknownQuestion(EngineError):
    pass


class BadChoice(EngineError):
    pass


class EmptyBank(EngineError):
    pass
