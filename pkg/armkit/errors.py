from typing import Optional


class ArmError(Exception):
    """Root of every error raised by armkit."""


# ---------- automata ----------

class AlphabetError(ArmError, ValueError):
    pass


class MalformedConvolutionError(ArmError, ValueError):
    pass


class ArityError(ArmError, ValueError):
    pass


class UnboundedCompositionError(ArmError, ValueError):
    pass


class UncertifiedFunctionError(ArmError):
    pass


class FanoutOverflowError(ArmError):
    def __init__(self, cap: int, message: Optional[str] = None):
        self.cap = cap
        super().__init__(message or f"more than {cap} outputs")


class OnePassSpecError(ArmError, ValueError):
    pass


class AutomatonFormatError(ArmError, ValueError):
    def __init__(self, message: str, line_no: Optional[int] = None):
        self.line_no = line_no
        prefix = f"line {line_no}: " if line_no is not None else ""
        super().__init__(prefix + message)


class ResourceLimitError(ArmError):
    pass


# ---------- machine ----------

class ParseError(ArmError, ValueError):
    def __init__(self, message: str, line_no: Optional[int] = None):
        self.line_no = line_no
        prefix = f"line {line_no}: " if line_no is not None else ""
        super().__init__(prefix + message)


class CompileError(ArmError):
    pass


class BoundViolationError(ArmError):
    """An operation changed a register length by more than its declared bound."""


class MachineKindError(ArmError, ValueError):
    """Program run in a mode its machine kind does not support."""


# ---------- programs ----------

class GenerationError(ArmError, ValueError):
    pass


class EncodingError(ArmError, ValueError):
    pass


class NiceFormatError(EncodingError):
    """3SAT instance does not use exactly the variables 1..k."""


class CodingError(EncodingError):
    """QBF instance violates the variable naming constraints."""


# ---------- cli / profiling ----------

class FitError(ArmError, ValueError):
    pass


class ProfilingError(ArmError):
    def __init__(self, size: Optional[int], message: str):
        self.size = size
        super().__init__(message if size is None else f"n={size}: {message}")
