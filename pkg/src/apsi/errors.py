"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: input problems exit 2, a process with
no analogous observations exits 3, anything unexpected exits 4.
"""


class ApsiError(Exception):
    """Base class for all errors raised by this package."""


class InputError(ApsiError):
    """Malformed or missing user-supplied input (files, flags, records)."""


class TaxonomyError(InputError):
    """Taxonomy files are missing, malformed, or cyclic."""


class CorpusError(InputError):
    """A corpus / prediction / reference file violates its schema."""


class NoAnalogousProcessesError(ApsiError):
    """Neither the predicate group nor the argument group has any graphs."""

    def __init__(self, predicate: str, argument: str):
        self.predicate = predicate
        self.argument = argument
        super().__init__(
            f"no analogous processes for '{predicate}+{argument}': "
            "both the predicate group and the argument group are empty"
        )
