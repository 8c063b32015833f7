"""Label histogram graphic."""

import logging
import threading
from collections.abc import Sequence
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "wardChain"
import matplotlib.pyplot as plt  # noqa: E402

from ..core.exceptions import OutputError  # noqa: E402

logger = logging.getLogger(__name__)

# pyplot keeps global figure state
_PYPLOT_LOCK = threading.Lock()


def _widths(lefts: list[float]) -> list[float]:
    if len(lefts) < 2:
        return [1e-3] * len(lefts)
    widths = [b - a for a, b in zip(lefts, lefts[1:], strict=False)]
    widths.append(widths[-1])
    return widths


def write_histogram_svg(
    histogram: Sequence[tuple[float, int]],
    seed_label: float,
    path: Path,
    title: str | None = None,
) -> None:
    """
    SVG bar chart of sampled trajectory labels with the seed label marked.

    The file carries no creation date, so identical input renders identical bytes.
    """
    lefts = [float(left) for left, _ in histogram]
    counts = [int(count) for _, count in histogram]

    with _PYPLOT_LOCK:
        fig, ax = plt.subplots(figsize=(6.4, 3.8))
        try:
            ax.bar(lefts, counts, width=_widths(lefts), align="edge", color="C0", alpha=0.8)
            ax.axvline(seed_label, color="C3", lw=2.0, label="seed plan")
            ax.set(xlabel="efficiency gap", ylabel="count", title=title or "Trajectory labels")
            ax.grid(alpha=0.25, linestyle=":")
            ax.legend(loc="best", frameon=False)
            fig.tight_layout()
            path.parent.mkdir(parents=True, exist_ok=True)
            fig.savefig(path, format="svg", metadata={"Date": None})
        except OSError as exc:
            raise OutputError(f"Failed to write histogram graphic: {exc}", path=str(path)) from exc
        finally:
            plt.close(fig)
    logger.debug(f"Wrote histogram graphic {path}", extra={"event_type": "histogram_written"})
