"""Exception hierarchy shared by every module of the package."""


class RSLError(Exception):
    """Base class for all errors raised by rslcheck."""


class UnknownStateError(RSLError, KeyError):
    def __init__(self, state):
        self.state = state
        super().__init__(f"unknown state {state!r}")

    def __str__(self):
        return self.args[0]


class UnknownActionError(RSLError, KeyError):
    def __init__(self, action):
        self.action = action
        super().__init__(f"unknown action {action!r} (not in the model's alphabet)")

    def __str__(self):
        return self.args[0]


class IncompleteStrategyError(RSLError):
    def __init__(self, state, player):
        self.state = state
        self.player = player
        super().__init__(f"strategy for player {player} is undefined at own state {state!r}")


class EmptyComponentError(RSLError):
    pass


class ModelError(RSLError):
    """A game tree violates its well-formedness invariants."""

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(str(d) for d in self.diagnostics))


class SpecError(RSLError):
    """Malformed strategy specification or formula (wrong constructor, player mismatch)."""


class ParseError(RSLError):
    def __init__(self, message, line=None, column=None):
        self.message = message
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)


class CapacityError(RSLError):
    pass


class SolverError(RSLError):
    pass


class DeadEndError(SolverError):
    def __init__(self, state):
        self.state = state
        super().__init__(f"restrictions leave no legal move at state {state!r}")


class TranslationError(RSLError):
    pass


class ReductionError(RSLError):
    pass
