"""
Exception hierarchy shared by every module.

Each class carries the process exit code the CLI maps it to, so the
command layer never has to know which module raised.
"""
from typing import Optional


class SemtagError(Exception):
    exit_code = 1

    def __init__(self, message: str, line_no: Optional[int] = None):
        self.message = message
        self.line_no = line_no
        super().__init__(str(self))

    def __str__(self) -> str:
        if self.line_no is not None:
            return f"line {self.line_no}: {self.message}"
        return self.message


# --- data / format errors ---

class UnknownTag(SemtagError, KeyError):
    exit_code = 3

    def __init__(self, code: str, line_no: Optional[int] = None):
        self.code = code
        super().__init__(f"unknown sem-tag {code!r}", line_no)

    # KeyError.__str__ would repr() the message
    __str__ = SemtagError.__str__


class FormatError(SemtagError):
    exit_code = 3


class EmptySentence(SemtagError):
    exit_code = 3


# --- training errors ---

class EmptyCorpus(SemtagError):
    exit_code = 4


class DegenerateCounts(SemtagError):
    exit_code = 4


class ModelFormatError(SemtagError):
    exit_code = 5


# --- evaluation errors ---

class AlignmentError(SemtagError):
    exit_code = 6

    def __init__(self, message: str, sentence_index: Optional[int] = None):
        self.sentence_index = sentence_index
        super().__init__(message)

    def __str__(self) -> str:
        if self.sentence_index is not None:
            return f"sentence {self.sentence_index}: {self.message}"
        return self.message


class IncomparableReports(SemtagError):
    exit_code = 6


# --- semantics errors ---

class CategoryError(SemtagError):
    exit_code = 7


class TermError(SemtagError):
    exit_code = 7


class UnregisteredPair(SemtagError):
    exit_code = 7


class ArityMismatch(SemtagError):
    exit_code = 7


class NonTerminating(SemtagError):
    exit_code = 7


# --- bootstrap / config ---

class EmptySeed(SemtagError):
    exit_code = 8


class ConfigError(SemtagError):
    exit_code = 2


USAGE_EXIT_CODE = 2
MISSING_INPUT_EXIT_CODE = 9
