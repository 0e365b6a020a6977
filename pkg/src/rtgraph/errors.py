"""Exception hierarchy shared by all pipeline stages.

The CLI maps these onto process exit codes: ConfigError -> 2,
DataError (and subclasses) -> 3, anything else -> 4.
"""

from __future__ import annotations


class PipelineError(Exception):
    """Base class for errors raised by pipeline stages."""


class ConfigError(PipelineError):
    """Bad or missing configuration: absent input files, malformed
    gazetteer rows, label maps referencing unknown communities."""


class DataError(PipelineError):
    """Input data violates a stage's contract."""


class CorpusFormatError(DataError):
    """More than half of a record file failed to parse."""


class TrainingError(DataError):
    """Training data unusable (e.g. only one class present)."""


class MissingScoresError(DataError):
    """An external score file lacks entries for tweets being scored."""

    def __init__(self, missing_ids):
        self.missing_ids = sorted(missing_ids)
        shown = ", ".join(str(i) for i in self.missing_ids[:20])
        more = "" if len(self.missing_ids) <= 20 else f" (+{len(self.missing_ids) - 20} more)"
        super().__init__(f"score file missing {len(self.missing_ids)} tweet ids: {shown}{more}")


class NoValidKError(DataError):
    """No k produced a core whose communities all meet the size floor.

    ``per_k`` maps each k tried to a dict with the core size and the
    smallest community produced at that k.
    """

    def __init__(self, per_k):
        self.per_k = dict(per_k)
        super().__init__(
            "no k yields communities of the required minimum size; "
            f"tried k = {sorted(self.per_k, reverse=True)}"
        )
