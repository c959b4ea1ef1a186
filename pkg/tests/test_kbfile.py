"""Knowledge-base file grammar: happy paths and line-tagged diagnostics."""

from fractions import Fraction

import pytest

from cohprob.kbfile import KBFileError, load_kb, parse_kb

F = Fraction

TWEETY = """\
# taxonomy
prop tweety penguin bird fly
axiom tweety -> penguin
axiom penguin -> bird
assess "bird | penguin" = 1
assess "penguin | tweety" = 1
assess "~fly | penguin" = 1   # the one usual rule
query "fly | tweety"
"""


def test_parse_full_file():
    kb = parse_kb(TWEETY)
    assert kb.universe.props == ["tweety", "penguin", "bird", "fly"]
    assert len(kb.universe.axioms) == 2
    assert [str(e.event) for e in kb.assessment.entries] == [
        "bird | penguin", "penguin | tweety", "~fly | penguin",
    ]
    assert all(e.value == 1 for e in kb.assessment.entries)
    assert [str(r) for r in kb.default_kb.rules] == [
        "penguin => bird", "tweety => penguin", "penguin => ~fly",
    ]
    assert kb.default_kb.extra == ()
    assert [str(q) for q in kb.queries] == ["fly | tweety"]
    assert kb.alpha_used is False


def test_default_line_is_sugar_for_value_one():
    kb = parse_kb('prop a b\ndefault "a => ~b"\n')
    entry = kb.assessment.entries[0]
    assert str(entry.event) == "~b | a" and entry.value == 1
    assert str(kb.default_kb.rules[0]) == "a => ~b"


def test_alpha_resolution_and_errors():
    text = 'prop h\nassess "h | true" = alpha\n'
    kb = parse_kb(text, alpha=F(1, 3))
    assert kb.assessment.entries[0].value == F(1, 3)
    assert kb.alpha_used
    with pytest.raises(KBFileError, match="line 2.*alpha"):
        parse_kb(text)
    with pytest.raises(KBFileError, match="never uses"):
        parse_kb('prop h\nassess "h | true" = 1\n', alpha=F(1, 2))
    with pytest.raises(KBFileError, match=r"\[0, 1\]"):
        parse_kb(text, alpha=F(3, 2))


def test_value_validation():
    with pytest.raises(KBFileError, match="line 2.*not a rational"):
        parse_kb('prop a\nassess "a | true" = x\n')
    with pytest.raises(KBFileError, match="not a rational"):
        parse_kb('prop a\nassess "a | true" = 1/0\n')
    with pytest.raises(KBFileError, match=r"lie in \[0, 1\]"):
        parse_kb('prop a\nassess "a | true" = 3/2\n')
    with pytest.raises(KBFileError, match=r"lie in \[0, 1\]"):
        parse_kb('prop a\nassess "a | true" = -1/2\n')


def test_duplicate_assessments():
    same = 'prop a b\nassess "b | a" = 1/2\nassess "b | a" = 1/2\n'
    assert len(parse_kb(same).assessment.entries) == 1
    clash = 'prop a b\nassess "b | a" = 1/2\nassess "b | a" = 1/3\n'
    with pytest.raises(KBFileError, match="line 3.*already assessed.*line 2"):
        parse_kb(clash)


def test_impossible_conditioning_reported_with_line():
    with pytest.raises(KBFileError, match="line 2.*impossible"):
        parse_kb('prop a\nassess "a | false" = 1\n')
    # an axiom after the assessment can be what makes it impossible
    late = 'prop a b\nassess "b | a" = 1\naxiom ~a\n'
    with pytest.raises(KBFileError, match="line 2.*impossible"):
        parse_kb(late)
    with pytest.raises(KBFileError, match="line 2.*impossible"):
        parse_kb('prop a\nquery "a | a & ~a"\n')


def test_syntax_diagnostics():
    with pytest.raises(KBFileError, match="line 1.*unknown keyword"):
        parse_kb("assert x\n")
    with pytest.raises(KBFileError, match="line 2.*expected: assess"):
        parse_kb("prop a\nassess a | true = 1\n")
    with pytest.raises(KBFileError, match="line 2.*expected: default"):
        parse_kb('prop a\ndefault a => a\n')
    with pytest.raises(KBFileError, match="line 1.*reserved"):
        parse_kb("prop v\n")
    with pytest.raises(KBFileError, match="line 2.*offset"):
        parse_kb("prop a\naxiom a &\n")
    with pytest.raises(KBFileError, match=r"line 2.*needs a '\|'"):
        parse_kb('prop a\nquery "a"\n')
    with pytest.raises(KBFileError, match="line 1.*at least one name"):
        parse_kb("prop\n")


def test_comments_and_blank_lines():
    text = "\n# full line\nprop a   # trailing\n\nassess \"a | true\" = 1\n"
    kb = parse_kb(text)
    assert kb.universe.props == ["a"]
    assert len(kb.assessment.entries) == 1


def test_proposition_bound():
    names = " ".join(f"p{i}" for i in range(5))
    with pytest.raises(KBFileError, match="line 1"):
        parse_kb(f"prop {names}\n", max_props=4)
    kb = parse_kb(f"prop {names}\n", max_props=5)
    assert len(kb.universe.props) == 5


def test_load_kb_reads_files(tmp_path):
    path = tmp_path / "toy.kb"
    path.write_text('prop a\nassess "a | true" = 2/5\nquery "a | true"\n')
    kb = load_kb(str(path))
    assert kb.assessment.entries[0].value == F(2, 5)
    assert kb.default_kb.rules == ()
    assert len(kb.default_kb.extra) == 1
