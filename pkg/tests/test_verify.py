import re

from uawb.corpus import builtin_corpus
from uawb.verify import CHECKS, Context, format_report, run_check, run_suite

EXPECTED = {"lemma21", "lemma22", "thm23", "cor24", "rem32a", "prop34", "prop35", "lemma36",
            "lemma37", "lemma38", "thm33", "thm41", "thm42", "thm43", "thm44", "propA1", "propA2",
            "fact1", "fact2", "fact3", "fact4", "fact5", "fact6"}


def test_every_result_has_exactly_one_check():
    assert set(CHECKS) == EXPECTED


def test_small_corpus_slice_passes():
    out = run_suite(["lemma22", "thm23", "cor24", "fact5", "thm44"], ["z2", "z3", "z4", "chain3"])
    assert [o.name for o in out] == sorted(["lemma22", "thm23", "cor24", "fact5", "thm44"])
    assert all(o.status == "pass" for o in out), format_report(out)


def test_empty_slice_is_skipped():
    [o] = run_suite(["thm23"], ["set3"])
    assert o.status == "skipped" and o.reason


def test_fact6_reports_per_algebra_wording():
    [o] = run_suite(["fact6"], ["d4", "z6"])
    assert o.status == "pass"
    assert "d4: (C1) fails on this algebra" in o.details
    assert "z6: (C1) holds on this algebra" in o.details


def test_pipeline_checks_share_cache():
    ctx = Context([e for e in builtin_corpus() if e.name in ("z2", "z3", "klein")])
    a = run_check("prop34", ctx)
    assert "pipeline" in ctx.cache
    b = run_check("thm33", ctx)
    assert a.status == b.status == "pass"


def test_report_has_machine_section_and_no_timings():
    text = format_report(run_suite(["cor24"], ["z4"]))
    assert "--- machine-readable ---" in text
    assert not re.search(r"\d+\.\d+ ?s\b", text)
