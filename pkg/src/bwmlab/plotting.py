"""Figures for entropy / L1-norm scans."""
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

rc_params = {
    "figure.figsize": [8, 4.5],
    "axes.grid": True,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "axes.labelsize": 13,
    "legend.frameon": False,
    "legend.fontsize": 10,
    "savefig.dpi": 150,
}


def plot_scan(result, path, title=None):
    """S(theta), 2 log2 f(theta) and f(theta) with located extrema marked."""
    theta = result.column("theta")
    s = result.column("entropy")
    f = result.column("l1")
    rep = result.report
    with plt.rc_context(rc_params):
        fig, (ax1, ax2) = plt.subplots(1, 2, sharex=True)
        ax1.plot(theta, s, label=r"$S(\rho_a)$")
        ax1.plot(theta, 2 * np.log2(f), "--", label=r"$2\log_2 f$")
        ax2.plot(theta, f, color="C2", label=r"$f$")
        for e in rep.entropy_extrema:
            ax1.axvline(e["theta"], color="0.8", lw=0.8, zorder=0)
        for e in rep.l1_extrema:
            ax2.axvline(e["theta"], color="0.8", lw=0.8, zorder=0)
        for ax in (ax1, ax2):
            ax.set_xlabel(r"$\theta$")
            ax.set_xticks([0, np.pi / 2, np.pi])
            ax.set_xticklabels(["0", r"$\pi/2$", r"$\pi$"])
            ax.legend()
        fig.suptitle(title or f"j={rep.j}, m={rep.m}")
        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)
    return path
