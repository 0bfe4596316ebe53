"""Figure rendering for simulator output files.

Four figure kinds, one render() entry point.  Output format follows the
output path's extension (.svg or .png); SVG output is byte-deterministic
(fixed hash salt, no embedded date), so re-rendering identical inputs
yields identical files.
"""

from dataclasses import dataclass
from pathlib import Path

import matplotlib
import numpy as np

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .schemas import (  # noqa: E402
    SchemaError,
    caption_text,
    load_metadata,
    load_series,
    load_spectrum,
    load_sweep,
)

KINDS = ("timeseries", "spectrum-pair", "eps-sweep", "remote-pair")

# inputs per kind: series/spectrum/sweep CSVs as documented by the simulator
_INPUT_COUNT = {"timeseries": 1, "spectrum-pair": 2, "eps-sweep": 1,
                "remote-pair": 2}

_FORMATS = (".svg", ".png")

plt.rcParams["svg.hashsalt"] = "dtcplots"


@dataclass(frozen=True)
class FigureRequest:
    """One figure to render: kind, input data files, output image path.

    metadata optionally points at the run's metadata.json; its resolved
    config is embedded as caption text under the figure.
    """

    kind: str
    inputs: tuple[str, ...]
    output: str
    metadata: str | None = None
    title: str | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise SchemaError(f"figure kind must be one of {KINDS}, "
                              f"got {self.kind!r}")
        object.__setattr__(self, "inputs", tuple(str(p) for p in self.inputs))
        expected = _INPUT_COUNT[self.kind]
        if len(self.inputs) != expected:
            raise SchemaError(
                f"figure kind '{self.kind}' needs exactly {expected} input "
                f"file(s), got {len(self.inputs)}"
            )
        if Path(self.output).suffix not in _FORMATS:
            raise SchemaError(
                f"output must end in one of {_FORMATS}, got {self.output!r}"
            )


def _finish(fig, request: FigureRequest) -> Path:
    if request.metadata is not None:
        caption = caption_text(load_metadata(request.metadata))
        fig.text(0.02, 0.02, caption, fontsize=6, family="monospace",
                 wrap=True)
        fig.subplots_adjust(bottom=0.18)
    out = Path(request.output)
    out.parent.mkdir(parents=True, exist_ok=True)
    # "Date: None" strips the only nondeterministic SVG field
    fig.savefig(out, metadata={"Date": None} if out.suffix == ".svg" else None)
    plt.close(fig)
    return out


def _render_timeseries(request: FigureRequest):
    periods, mag = load_series(request.inputs[0])
    fig, ax = plt.subplots(figsize=(7, 3.2))
    shown = slice(0, min(len(periods), 64))  # tail is visually redundant
    ax.plot(periods[shown], mag[shown], drawstyle="steps-post", lw=1.0)
    ax.set_xlabel("period index")
    ax.set_ylabel("normalized magnetization")
    ax.set_ylim(-1.1, 1.1)
    ax.axhline(0.0, color="0.8", lw=0.6, zorder=0)
    ax.set_title(request.title or "stroboscopic readout")
    return fig


def _render_spectrum_pair(request: FigureRequest):
    fig, axes = plt.subplots(1, 2, figsize=(8, 3.2), sharey=True)
    for ax, path in zip(axes, request.inputs):
        nu, power = load_spectrum(path)
        ax.plot(nu, power, lw=1.0)
        ax.axvline(0.5, color="crimson", ls="--", lw=0.8,
                   label=r"$\nu = 1/2$")
        ax.set_xlim(0.35, 0.65)
        ax.set_xlabel(r"$\nu$ (cycles / period)")
        ax.set_title(Path(path).parent.name or Path(path).stem, fontsize=9)
    axes[0].set_ylabel("normalized power")
    axes[0].legend(loc="upper left", fontsize=7)
    if request.title:
        fig.suptitle(request.title)
    return fig


def _render_eps_sweep(request: FigureRequest):
    table = load_sweep(request.inputs[0])
    ok = ~np.isnan(table["height_at_half"])
    fig, ax = plt.subplots(figsize=(5.5, 3.4))
    ax.plot(table["epsilon"][ok], table["height_at_half"][ok],
            marker="o", ms=3.5, lw=1.0)
    ax.set_xlabel(r"rotation error $\epsilon$")
    ax.set_ylabel(r"power at $\nu = 1/2$")
    ax.set_ylim(0.0, 1.05)
    ax.set_title(request.title or "subharmonic peak height vs rotation error")
    failed = int((~ok).sum())
    if failed:
        ax.text(0.98, 0.95, f"{failed} failed grid point(s) omitted",
                transform=ax.transAxes, ha="right", fontsize=7, color="0.4")
    return fig


def _render_remote_pair(request: FigureRequest):
    fig, ax = plt.subplots(figsize=(7, 3.2))
    labels = ("bath 1", "bath 2")
    for path, label, style in zip(request.inputs, labels, ("-", "--")):
        periods, mag = load_series(path)
        shown = slice(0, min(len(periods), 48))
        ax.plot(periods[shown], mag[shown], style, lw=1.0, label=label)
    ax.set_xlabel("period index")
    ax.set_ylabel("normalized magnetization")
    ax.set_ylim(-1.15, 1.15)
    ax.legend(loc="upper right", fontsize=8)
    ax.set_title(request.title or "two-bath readout")
    return fig


_RENDERERS = {
    "timeseries": _render_timeseries,
    "spectrum-pair": _render_spectrum_pair,
    "eps-sweep": _render_eps_sweep,
    "remote-pair": _render_remote_pair,
}


def render(request: FigureRequest) -> Path:
    """Validate the request's inputs and write the image file."""
    fig = _RENDERERS[request.kind](request)
    return _finish(fig, request)
