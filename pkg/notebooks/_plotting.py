"""Optional figure output for the narrative scripts.

Figures are written next to the scripts when matplotlib is installed
(``pip install -e .[notebooks]``); otherwise the scripts only print.
"""

from pathlib import Path

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:  # pragma: no cover
    plt = None

HERE = Path(__file__).resolve().parent


def save(fig, name):
    path = HERE / name
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    print(f"wrote {path.name}")
