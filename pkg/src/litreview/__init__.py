"""Literature-review generation and evaluation toolkit."""

__version__ = "0.1.0"

from .models import PaperMetadata, SummaryRequest, SummaryResult

__all__ = ["PaperMetadata", "SummaryRequest", "SummaryResult", "__version__"]
