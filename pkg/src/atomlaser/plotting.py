"""Figure rendering for the report path of the CLI.

One figure per experiment, written next to the delimited output.  Matplotlib
is imported lazily with the Agg backend so the library core stays
plot-free.
"""

from __future__ import annotations


def _pyplot():
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    return plt


def render_figure(experiment: str, table: dict, summary: dict, path):
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    if experiment == "rabi":
        ax.plot(table["t"], table["n1_exact"], label="trapped")
        ax.plot(table["t"], table["n2_exact"], label="untrapped")
        ax.plot(table["t"], table["n2_bogoliubov"], "--", label="untrapped (driven osc.)")
        ax.set_xlabel("t")
        ax.set_ylabel("population")
        ax.legend()
    elif experiment == "bogoliubov-compare":
        ax.loglog(table["n_c"], table["max_error"], "o-")
        ax.set_xlabel("condensate size N")
        ax.set_ylabel("normalized max population gap")
    elif experiment == "lz-scaling":
        ax.loglog(table["rate"], table["mag2"], "o", label="quadrature")
        c = summary.get("c_mean")
        if c is not None:
            rates = table["rate"]
            ax.loglog(rates, [c / r for r in rates], "-",
                      label=f"C/rate, C={c:.3f}")
        ax.set_xlabel("sweep rate")
        ax.set_ylabel("|amplitude|^2")
        ax.legend()
    elif experiment == "oracle-fidelity":
        ax.plot(table["t"], table["n2_oracle"], "o", label="oracle")
        ax.plot(table["t"], table["n2_exact"], "-", label="closed form")
        ax.set_xlabel("t")
        ax.set_ylabel("untrapped population")
        ax.legend()
        ax2 = ax.twinx()
        ax2.semilogy(table["t"], [max(1.0 - f, 1e-17) for f in table["fidelity"]],
                     "r:", label="1 - fidelity")
        ax2.set_ylabel("1 - fidelity")
    elif experiment == "entanglement":
        ax.plot(table["t"], table["purity_fock_mode1"], label="number input, mode 1")
        ax.plot(table["t"], table["purity_fock_mode2"], "--", label="number input, mode 2")
        ax.plot(table["t"], table["purity_coherent_mode1"], label="coherent input, mode 1")
        ax.set_xlabel("t")
        ax.set_ylabel("reduced purity")
        ax.legend()
    elif experiment == "kerr-breakdown":
        ax.plot(table["kappa"], table["best_fidelity"], "o-")
        ax.set_xlabel("interaction strength kappa")
        ax.set_ylabel("best product fidelity")
    elif experiment == "field-profile":
        ax.plot(table["x"], table["field"])
        ax.set_xlabel("x")
        ax.set_ylabel("mean field")
    else:
        raise ValueError(f"no figure defined for experiment {experiment!r}")
    ax.set_title(experiment)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
