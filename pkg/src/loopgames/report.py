"""Rendering of exhaustive check reports: summaries, delimited rows, figures.

Each report can be printed as a short text summary, dumped as one TSV row
per checked item (stable across runs, suitable for golden-file diffing),
and drawn as a small PNG figure next to the TSV.
"""

from __future__ import annotations

from pathlib import Path

from .zeroone import TheoremReport


def _b(value: bool) -> str:
    return "true" if value else "false"


def theorem_summary(report: TheoremReport) -> str:
    bounds = report.bounds
    lines = [
        f"theorem01: prefix<={bounds['max_prefix']} period<={bounds['max_period']} "
        f"words={report.total} counterexamples={len(report.counterexamples)}"
    ]
    for row in report.counterexamples:
        lines.append(
            f"  disagree {row.word}: spe={_b(row.spe)} sacbes={_b(row.sacbes)} "
            f"sbcaes={_b(row.sbcaes)} oracle_sacbes={_b(row.oracle_sacbes)} "
            f"oracle_sbcaes={_b(row.oracle_sbcaes)}"
        )
    return "\n".join(lines)


def theorem_tsv(report: TheoremReport) -> str:
    lines = ["word\tspe\tsacbes\tsbcaes\toracle_sacbes\toracle_sbcaes\tagree"]
    for row in report.rows:
        lines.append(
            "\t".join(
                (
                    str(row.word),
                    _b(row.spe),
                    _b(row.sacbes),
                    _b(row.sbcaes),
                    _b(row.oracle_sacbes),
                    _b(row.oracle_sbcaes),
                    _b(row.agree),
                )
            )
        )
    return "\n".join(lines) + "\n"


def appendix_summary(report: TheoremReport) -> str:
    bounds = report.bounds
    divergence = report.notes.get("pattern_divergence", False)
    lines = [
        f"appendix: n<={bounds['n_max']} profiles={report.total} "
        f"counterexamples={len(report.counterexamples)} pattern-divergence={_b(divergence)}"
    ]
    for row in report.rows:
        lines.append(
            f"  {row.family} n={row.n} profiles={row.profiles} "
            f"mismatches={row.mismatches} bi={row.bi_count}"
        )
    for bad in report.counterexamples:
        lines.append(
            f"  disagree {bad.family} n={bad.n} word={bad.word}: "
            f"shape={_b(bad.shape)} bi={_b(bad.bi)}"
        )
    return "\n".join(lines)


def appendix_tsv(report: TheoremReport) -> str:
    lines = ["family\tn\tprofiles\tmismatches\tbi_count\tbi_words"]
    for row in report.rows:
        lines.append(
            "\t".join(
                (
                    row.family,
                    str(row.n),
                    str(row.profiles),
                    str(row.mismatches),
                    str(row.bi_count),
                    " ".join(row.bi_words),
                )
            )
        )
    return "\n".join(lines) + "\n"


def _theorem_figure(report: TheoremReport):
    from matplotlib.figure import Figure

    by_length: dict[int, list[int]] = {}
    for row in report.rows:
        length = len(row.word.prefix) + len(row.word.period)
        total, good = by_length.setdefault(length, [0, 0])
        by_length[length][0] = total + 1
        by_length[length][1] = good + (1 if row.spe else 0)
    lengths = sorted(by_length)
    totals = [by_length[k][0] for k in lengths]
    goods = [by_length[k][1] for k in lengths]

    fig = Figure(figsize=(6.4, 4.0))
    ax = fig.subplots()
    width = 0.4
    ax.bar([k - width / 2 for k in lengths], totals, width=width, label="words", color="#b0c4de")
    ax.bar([k + width / 2 for k in lengths], goods, width=width, label="subgame-perfect", color="#2f6f4f")
    ax.set_xlabel("prefix + period length")
    ax.set_ylabel("count")
    ax.set_xticks(lengths)
    bounds = report.bounds
    ax.set_title(
        f"loop-game words up to prefix {bounds['max_prefix']}, period {bounds['max_period']} "
        f"({len(report.counterexamples)} disagreements)"
    )
    ax.legend()
    fig.tight_layout()
    return fig


def _appendix_figure(report: TheoremReport):
    from matplotlib.figure import Figure

    ns = sorted({row.n for row in report.rows})
    fam_counts = {
        fam: [next(r.bi_count for r in report.rows if r.family == fam and r.n == n) for n in ns]
        for fam in ("F", "K")
    }
    fig = Figure(figsize=(6.4, 4.0))
    ax = fig.subplots()
    width = 0.4
    ax.bar([n - width / 2 for n in ns], fam_counts["F"], width=width, label="cut after B (F)", color="#8f5fb0")
    ax.bar([n + width / 2 for n in ns], fam_counts["K"], width=width, label="cut after A (K)", color="#d2b048")
    ax.set_xlabel("n")
    ax.set_ylabel("backward-induction equilibria")
    ax.set_xticks(ns)
    ax.set_title(f"finite approximations up to n={report.bounds['n_max']}")
    ax.legend()
    fig.tight_layout()
    return fig


def write_report(report: TheoremReport, outdir) -> list[Path]:
    """Write the delimited rows and the figure for a report; returns the paths."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    tsv_path = outdir / f"{report.name}.tsv"
    png_path = outdir / f"{report.name}.png"
    if report.name == "theorem01":
        tsv_path.write_text(theorem_tsv(report))
        fig = _theorem_figure(report)
    else:
        tsv_path.write_text(appendix_tsv(report))
        fig = _appendix_figure(report)
    fig.savefig(png_path, dpi=130)
    return [tsv_path, png_path]
