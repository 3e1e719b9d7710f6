"""Exception hierarchy shared by every rankfuse module."""

from __future__ import annotations


class RankFuseError(Exception):
    """Base class for all errors raised by rankfuse."""


class DuplicateLabel(RankFuseError, ValueError):
    def __init__(self, label: str, query_id: str | None = None):
        self.label = label
        self.query_id = query_id
        where = f" in query {query_id!r}" if query_id is not None else ""
        super().__init__(f"duplicate label {label!r}{where}")


class NonFiniteScore(RankFuseError, ValueError):
    def __init__(self, label: str, score: float):
        self.label = label
        self.score = score
        super().__init__(f"label {label!r} has non-finite score {score!r}")


class UnsortedEntries(RankFuseError, ValueError):
    """Entries handed to the raw constructor are not in descending score order."""


class EmptyList(RankFuseError, ValueError):
    """A normalizer received a ranked list with no entries."""


class NoLists(RankFuseError, ValueError):
    """A fusion method received no input lists."""


class EmptyLabelSpace(RankFuseError, ValueError):
    pass


class EmptyGold(RankFuseError, ValueError):
    """nDCG is undefined when the gold set is empty."""


class NoEvaluableQueries(RankFuseError, ValueError):
    """Every query's (partition-restricted) gold set is empty."""


class TooFewFolds(RankFuseError, ValueError):
    pass


class LengthMismatch(RankFuseError, ValueError):
    pass


class TooFewPairs(RankFuseError, ValueError):
    pass


class EmptyReport(RankFuseError, ValueError):
    pass


class MalformedLine(RankFuseError, ValueError):
    def __init__(self, line_no: int, reason: str = "", line: str | None = None):
        self.line_no = line_no
        self.reason = reason
        self.line = line
        msg = f"malformed line {line_no}"
        if reason:
            msg += f": {reason}"
        super().__init__(msg)


class MixedSystemTags(RankFuseError, ValueError):
    def __init__(self, tags):
        self.tags = tuple(sorted(tags))
        super().__init__(f"run file mixes system tags: {', '.join(self.tags)}")


class DuplicateJudgment(RankFuseError, ValueError):
    def __init__(self, query_id: str, label: str, line_no: int | None = None):
        self.query_id = query_id
        self.label = label
        self.line_no = line_no
        super().__init__(f"duplicate judgment for ({query_id!r}, {label!r})"
                         + (f" at line {line_no}" if line_no is not None else ""))


class NegativeCount(RankFuseError, ValueError):
    def __init__(self, label: str, count: int, line_no: int | None = None):
        self.label = label
        self.count = count
        self.line_no = line_no
        super().__init__(f"label {label!r} has negative count {count}")


class IoFailure(RankFuseError, OSError):
    pass
