"""End-to-end runs of the command-line interface."""

import pytest

from conftest import GAMES
from loopgames import bisimilar, parse
from loopgames.cli import main

GG = str(GAMES / "gg.gg")
ZO = str(GAMES / "zero_one.gg")
ESC = str(GAMES / "escalation.gg")


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestCheck:
    def test_spe_true(self, capsys):
        code, out, _ = run(capsys, "check", "--pred", "spe", GG, "s1")
        assert code == 0
        assert out == "spe s1 = true\n"

    def test_spe_false(self, capsys):
        code, out, _ = run(capsys, "check", "--pred", "spe", GG, "s3")
        assert code == 1
        assert out == "spe s3 = false\n"

    def test_convergence_pair(self, capsys):
        code, out, _ = run(capsys, "check", "--pred", "conv", ZO, "sdBoxR")
        assert (code, out) == (0, "conv sdBoxR = true\n")
        code, out, _ = run(capsys, "check", "--pred", "sconv", ZO, "sdBoxR")
        assert (code, out) == (1, "sconv sdBoxR = false\n")

    def test_zero_one_disciplines(self, capsys):
        for pred, expected in (("s0", 0), ("acbes", 0), ("sacbes", 0), ("bcaes", 1)):
            code, out, _ = run(capsys, "check", "--pred", pred, ZO, "s10a")
            assert code == expected
            assert out.endswith("= true\n" if expected == 0 else "= false\n")

    def test_unknown_predicate_rejected(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["check", "--pred", "zeta", GG, "s1"])
        assert exc.value.code == 2


class TestPayoff:
    def test_defined(self, capsys):
        code, out, _ = run(capsys, "payoff", GG, "s1")
        assert code == 0
        assert out == "payoff s1 = {A:3, B:2}\n"

    def test_undefined_reports_cycle(self, capsys):
        code, out, _ = run(capsys, "payoff", ZO, "sBoxR")
        assert code == 1
        assert out == "payoff sBoxR = undefined (cycle: a b)\n"


class TestBisim:
    def test_equal_up_to_unfolding(self, capsys, tmp_path):
        # the same infinite behaviour written with loops of length 2 and 4
        src = tmp_path / "loops.gg"
        src.write_text(
            "profile p1 { p1 = A -> r ? x | p1b; p1b = B -> r ? y | p1;"
            " x = leaf(A: 0, B: 1); y = leaf(A: 1, B: 0); }\n"
            "profile p2 { p2 = A -> r ? x | q1; q1 = B -> r ? y | q2;"
            " q2 = A -> r ? x | q3; q3 = B -> r ? y | p2;"
            " x = leaf(A: 0, B: 1); y = leaf(A: 1, B: 0); }\n"
        )
        code, out, _ = run(capsys, "bisim", str(src), "p1", "p2")
        assert (code, out) == (0, "bisim p1 p2 = true\n")

    def test_shifted_roots_differ(self, capsys):
        code, out, _ = run(capsys, "bisim", ZO, "s10a", "s10b")
        assert (code, out) == (1, "bisim s10a s10b = false\n")

    def test_distinct(self, capsys):
        code, out, _ = run(capsys, "bisim", ZO, "s10a", "s01a")
        assert (code, out) == (1, "bisim s10a s01a = false\n")


class TestSum:
    def test_writes_the_combined_profile(self, capsys, tmp_path):
        out_path = tmp_path / "mix.gg"
        code, out, _ = run(capsys, "sum", ESC, "stA", "stB",
                           "--out", str(out_path), "--name", "mix")
        assert code == 0
        assert out == f"wrote profile mix (4 nodes) to {out_path}\n"
        blocks = {name: g for name, g, _of in parse(out_path.read_text())}
        esc = {name: g for name, g, _of in parse((GAMES / "escalation.gg").read_text())}
        got = blocks["mix"]
        assert bisimilar(got, got.root, esc["sAinf"], esc["sAinf"].root)

    def test_no_consistent_assignment(self, capsys, tmp_path):
        code, _, err = run(capsys, "sum", ESC, "stA", "stA",
                           "--out", str(tmp_path / "x.gg"))
        assert code == 2
        assert err.startswith("error: inconsistent strategies")


class TestNash:
    def test_exact(self, capsys):
        code, out, _ = run(capsys, "nash", GG, "s1", "--depth", "5")
        assert (code, out) == (0, "nash s1 = nash\n")

    def test_refuted(self, capsys):
        code, out, _ = run(capsys, "nash", GG, "s3", "--depth", "5")
        assert code == 1
        assert out == "nash s3 = refuted(agent=A, gain=2->4)\n"

    def test_bounded_on_a_cyclic_profile(self, capsys):
        code, out, _ = run(capsys, "nash", ZO, "s01a", "--depth", "2")
        assert (code, out) == (0, "nash s01a = no-improving-deviation(depth=2)\n")


class TestReports:
    def test_theorem_summary(self, capsys):
        code, out, _ = run(capsys, "theorem01", "--prefix", "2", "--period", "2")
        assert code == 0
        assert out == "theorem01: prefix<=2 period<=2 words=42 counterexamples=0\n"

    def test_theorem_report_dir(self, capsys, tmp_path):
        code, out, _ = run(capsys, "theorem01", "--prefix", "1", "--period", "2",
                           "--report-dir", str(tmp_path))
        assert code == 0
        tsv = tmp_path / "theorem01.tsv"
        png = tmp_path / "theorem01.png"
        assert tsv.exists() and png.exists()
        assert f"wrote {tsv}\n" in out and f"wrote {png}\n" in out
        header = tsv.read_text().splitlines()[0]
        assert header == "word\tspe\tsacbes\tsbcaes\toracle_sacbes\toracle_sbcaes\tagree"
        assert png.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"

    def test_appendix_summary(self, capsys):
        code, out, _ = run(capsys, "appendix", "--n", "2")
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "appendix: n<=2 profiles=30 counterexamples=0 pattern-divergence=true"
        assert "  F n=1 profiles=4 mismatches=0 bi=2" in lines
        assert "  K n=2 profiles=8 mismatches=0 bi=2" in lines

    def test_appendix_report_dir(self, capsys, tmp_path):
        code, out, _ = run(capsys, "appendix", "--n", "1", "--report-dir", str(tmp_path))
        assert code == 0
        tsv = tmp_path / "appendix.tsv"
        assert tsv.exists() and (tmp_path / "appendix.png").exists()
        header = tsv.read_text().splitlines()[0]
        assert header == "family\tn\tprofiles\tmismatches\tbi_count\tbi_words"


class TestEscalate:
    def test_all_statements_hold(self, capsys):
        code, out, _ = run(capsys, "escalate")
        assert code == 0
        lines = out.splitlines()
        assert len(lines) == 7
        assert all(line.endswith("= true") for line in lines)
        assert lines[-1] == "payoffs bounded while play escalates = true"


class TestUnfold:
    def test_tree_rendering(self, capsys):
        code, out, _ = run(capsys, "unfold", ZO, "g01", "--depth", "2")
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "A"
        assert "  d: leaf(A: 0, B: 1)" in lines
        assert "  r: B" in lines
        assert any(line.strip() == "r: ..." for line in lines)

    def test_profile_labels(self, capsys):
        code, out, _ = run(capsys, "unfold", ZO, "sBoxR", "--depth", "1")
        assert code == 0
        assert out.splitlines()[0] == "A -> r"


class TestErrors:
    def test_unknown_block(self, capsys):
        code, out, err = run(capsys, "check", "--pred", "spe", GG, "zzz")
        assert code == 2
        assert out == ""
        assert err == "error: no block named 'zzz' in the file\n"

    def test_missing_file(self, capsys):
        code, _, err = run(capsys, "payoff", "/nonexistent/path.gg", "x")
        assert code == 2
        assert err.startswith("error:")

    def test_parse_error(self, capsys, tmp_path):
        bad = tmp_path / "bad.gg"
        bad.write_text("game g { g = A ? x | ; }")
        code, _, err = run(capsys, "check", "--pred", "spe", str(bad), "g")
        assert code == 2
        assert err.startswith("error: line 1")

    def test_version_flag(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["--version"])
        assert exc.value.code == 0
        assert capsys.readouterr().out.startswith("loopgames ")
