"""Exception hierarchy for the pipeline.

Every recoverable pipeline failure raises a named subclass of
:class:`PipelineError`; the CLI maps these to exit code 2 and prints
``error.name`` on stderr.
"""


class PipelineError(Exception):
    """Base class for all named pipeline failures."""

    @property
    def name(self) -> str:
        return type(self).__name__


class NoBimodality(PipelineError):
    """Otsu thresholding on a single-valued (zero variance) image."""


class NoHandFound(PipelineError):
    """Segmentation produced an empty foreground mask."""


class InsufficientValleys(PipelineError):
    """Fewer than four in-between-finger candidates were detected."""


class AmbiguousValleys(PipelineError):
    """Exact distance ties prevent unique valley labelling."""


class DegenerateValleys(PipelineError):
    """Collinear valley points; handedness/pose constructions undefined."""


class FingertipCountMismatch(PipelineError):
    def __init__(self, count: int):
        super().__init__(f"expected 5 fingertip candidates, found {count}")
        self.count = count


class FingerCropFailure(PipelineError):
    def __init__(self, label: str):
        super().__init__(f"finger blob split during crop: {label}")
        self.label = label


class PalmFitFailure(PipelineError):
    """Fewer than 6 points available for the palm circle fit."""


class DegenerateShape(PipelineError):
    """ICP gallery point set is collinear."""


class EmptyShape(PipelineError):
    """Hausdorff distance on an empty point set."""


class RankDeficient(PipelineError):
    def __init__(self, effective_rank: int):
        super().__init__(f"requested dimension exceeds effective rank {effective_rank}")
        self.effective_rank = effective_rank


class ShapeMismatch(PipelineError):
    """Input dimensions do not match the model or partner vector."""


class ZeroVector(PipelineError):
    """Cosine/correlation of a zero vector is undefined."""


class FlatImage(PipelineError):
    """Intensity normalization of a zero-variance image."""


class PalmTooSmall(PipelineError):
    """Palm frame smaller than a single texture block."""


class MissingScore(PipelineError):
    """A fusion input channel is absent; no silent imputation."""


class UnknownSubject(PipelineError):
    """Verification claim against a subject that is not enrolled."""


class DegenerateTrials(PipelineError):
    """ROC computation needs at least one genuine and one impostor trial."""


class PopulationTooSmall(PipelineError):
    """Requested subsample size exceeds the dataset population."""


class CorruptLibrary(PipelineError):
    """Bad magic, truncated data, or unsupported major version."""


class SchemaMismatch(PipelineError):
    """Library record dimensions disagree with the library header."""


class InvalidSpec(PipelineError):
    """Synthetic hand specification produces self-intersecting geometry."""
