"""Exception hierarchy.

Every error raised on purpose by the package derives from :class:`CaseGraphError`
so the CLI can map domain failures to exit status 1.
"""


class CaseGraphError(Exception):
    """Base class for all domain errors."""


# graph model ---------------------------------------------------------------


class GraphError(CaseGraphError):
    pass


class DuplicateNodeId(GraphError):
    pass


class SelfLoop(GraphError):
    pass


class DuplicateEdge(GraphError):
    pass


class DanglingEdgeEndpoint(GraphError):
    pass


class EmptyLabel(GraphError):
    pass


class MalformedDocument(GraphError):
    pass


class SchemaViolation(GraphError):
    pass


# transcripts ---------------------------------------------------------------


class TranscriptError(CaseGraphError):
    pass


class NoTurnsFound(TranscriptError):
    pass


class UnknownSpeakerLabel(TranscriptError):
    def __init__(self, label: str, line: int):
        super().__init__(f"unknown speaker label {label!r} at line {line}")
        self.label = label
        self.line = line


class EmptyUtterance(TranscriptError):
    pass


class EmptyCorpus(TranscriptError):
    pass


# generation pipeline -------------------------------------------------------


class PipelineError(CaseGraphError):
    pass


class NoParsablePayload(PipelineError):
    pass


class WrongPayloadShape(PipelineError):
    pass


class UnparsableVerdict(PipelineError):
    pass


class BackendError(PipelineError):
    """A single backend call failed (transport level); may be retried."""


class BackendUnavailable(PipelineError):
    pass


class ExtractionFailed(PipelineError):
    pass


class ConfigError(CaseGraphError):
    pass


# metrics -------------------------------------------------------------------


class MetricError(CaseGraphError):
    pass


class EmptyGraph(MetricError):
    pass


class EdgelessGraph(MetricError):
    pass


class UnknownNode(MetricError):
    pass


class UnknownEdge(MetricError):
    pass


class LengthMismatch(MetricError):
    pass


class ZeroMeanVector(MetricError):
    pass


class TooFewNodes(MetricError):
    pass


class NoEdges(MetricError):
    pass


class ZeroVariance(MetricError):
    pass


class PartitionMismatch(MetricError):
    pass


# agreement -----------------------------------------------------------------


class AgreementError(CaseGraphError):
    pass


class InvalidMatrix(AgreementError):
    pass


class DegenerateExpectedAgreement(AgreementError):
    pass


class MissingRating(AgreementError):
    pass


class EmptyScores(AgreementError):
    pass


class EmptyInput(CaseGraphError):
    pass
