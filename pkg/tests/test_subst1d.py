from fractions import Fraction

import pytest

from tilehull.errors import NotPrimitiveError, RationalSlopeError, SeedError
from tilehull.subst1d import (
    SturmianLanguage,
    SturmianSpec,
    Substitution,
    SubstitutionLanguage,
    all_legal_words,
    check_primitive,
    collar,
    fixed_point_prefix,
    fixed_point_seed,
    floor_surd,
    language_text,
    legal_words,
    periodicity_screen,
    sturmian_prefix,
)

GOLDEN = SturmianSpec(5, -1, 1, 2, name="golden")


def test_substitution_validation():
    with pytest.raises(ValueError):
        Substitution.from_rule({"a": "ac", "b": "a"})
    with pytest.raises(ValueError):
        Substitution.from_rule({"a": "", "b": "a"})
    with pytest.raises(ValueError):
        Substitution.from_rule({"a": "ab"}, alphabet=["a", "b"])


def test_apply_and_power(fib):
    assert fib.apply("ab") == "aba"
    assert fib.power(3).image("a") == "abaab"
    assert fib.abelianization.to_rows() == [[1, 1], [1, 0]]


def test_primitivity(tm):
    assert check_primitive(tm)
    assert not check_primitive(Substitution.from_rule({"a": "ab", "b": "b"}))


def test_fixed_point_prefixes(tm, fib):
    assert fixed_point_prefix(tm, "a", 16) == "abbabaabbaababba"
    assert fixed_point_prefix(fib, "a", 8) == "abaababa"


def test_seed_must_extend(fib):
    with pytest.raises(SeedError) as exc:
        fixed_point_prefix(fib, "b", 8)
    assert exc.value.seed == "b"


def test_fixed_point_seed_follows_first_letters():
    s = Substitution.from_rule({"a": "ba", "b": "ab"})
    seed, k = fixed_point_seed(s)
    assert k == 2
    assert s.power(k).image(seed).startswith(seed)


def test_language_text_is_legal(tm):
    text = language_text(tm, 200)
    assert len(text) == 200
    assert {text[i:i + 4] for i in range(197)} <= legal_words(tm, 4)


def test_legal_words(tm, fib):
    five = legal_words(tm, 5)
    assert "ababa" not in five and "babab" not in five
    three = legal_words(tm, 3)
    assert "aaa" not in three and "bbb" not in three
    assert legal_words(fib, 2) == {"aa", "ab", "ba"}


def test_legal_words_need_primitivity():
    with pytest.raises(NotPrimitiveError):
        legal_words(Substitution.from_rule({"a": "ab", "b": "b"}), 2)


def test_rules_that_never_grow_are_refused():
    still = Substitution.from_rule({"a": "a"})
    assert check_primitive(still)
    with pytest.raises(NotPrimitiveError, match="does not grow"):
        legal_words(still, 3)


@pytest.mark.parametrize("n", range(1, 7))
def test_legal_words_are_factors_of_longer_words(tem, n):
    shorter = {w[:n] for w in legal_words(tem, n + 1)} | {w[1:] for w in legal_words(tem, n + 1)}
    assert shorter == legal_words(tem, n)


def test_collar_thue_morse(tm):
    c = collar(tm, 1)
    assert {x.label for x in c.letters} == {"(a)a(b)", "(b)a(a)", "(b)a(b)", "(b)b(a)", "(a)b(b)", "(a)b(a)"}


def test_collar_three_e_morse(tem):
    c = collar(tem, 1)
    labels = {x.label for x in c.letters}
    assert len(labels) == 8
    assert {"(a)a(a)", "(b)b(b)"} <= labels


def test_collar_radius_zero_is_identity(fib):
    c = collar(fib, 0)
    assert c.substitution is fib
    assert c.codes == fib.alphabet


@pytest.mark.parametrize("radius", [1, 2])
def test_forget_compatibility(tm, tem, radius):
    for s in (tm, tem):
        c = collar(s, radius)
        for x in c.letters:
            assert c.forget_word(c.collared_rule(x.code)) == s.image(x.core)


def test_collar_text_matches_language(tm):
    c = collar(tm, 1)
    coded = c.collar_text(language_text(tm, 64))
    assert len(coded) == 62
    assert set(coded) <= set(c.codes)


@pytest.mark.parametrize("k", range(1, 7))
def test_letter_counts_follow_abelianization(tem, k):
    word = fixed_point_prefix(tem, "a", 3 ** k)
    predicted = tem.abelianization.power(k).apply([1, 0])
    assert tem.abelian_vector(word) == tuple(int(x) for x in predicted)


def test_all_legal_words_order(fib):
    words = all_legal_words(fib, 3)
    assert words[:2] == ["a", "b"]
    assert [len(w) for w in words] == sorted(len(w) for w in words)


def test_floor_surd():
    assert floor_surd(0, 1, 2, 1) == 1
    assert floor_surd(0, -1, 2, 1) == -2
    assert floor_surd(-1, 1, 5, 2) == 0
    assert floor_surd(10, 0, 3, -3) == -4


def test_sturmian_slope_checks():
    with pytest.raises(RationalSlopeError):
        SturmianSpec(4, 0, 1, 4)  # sqrt(4)/4 = 1/2
    with pytest.raises(RationalSlopeError):
        SturmianSpec(5, 0, 1, 1)  # sqrt(5) > 1


def test_sturmian_golden_matches_fibonacci_factors(fib):
    lang = SturmianLanguage(GOLDEN)
    swapped = str.maketrans("ab", "ba")
    for n in range(1, 7):
        assert {w.translate(swapped) for w in lang.factors(n)} == legal_words(fib, n)


def test_sturmian_b_count():
    spec = SturmianSpec(2, -1, 1, 1)
    w = sturmian_prefix(spec, 10)
    assert w.count("b") == spec.floor_at(10) - spec.floor_at(0)
    assert w.count("b") in (4, 5)


def test_sturmian_is_balanced():
    text = SturmianLanguage(GOLDEN).prefix(400)
    for n in (3, 7, 12):
        counts = {text[i:i + n].count("b") for i in range(len(text) - n)}
        assert max(counts) - min(counts) <= 1


def test_sturmian_intercept():
    spec = SturmianSpec(5, -1, 1, 2, rho=Fraction(1, 3))
    assert spec.floor_at(0) == 0
    assert len(sturmian_prefix(spec, 20)) == 20


def test_periodicity_screen(tm):
    assert periodicity_screen("abababab", 4) == 2
    assert periodicity_screen("aaaa", 1) == 1
    assert periodicity_screen(fixed_point_prefix(tm, "a", 64), 32) is None


def test_languages_share_the_port(tm):
    sl = SubstitutionLanguage(tm)
    assert sl.is_legal("abba") and not sl.is_legal("aaa")
    golden = SturmianLanguage(GOLDEN)
    assert golden.is_legal("bab") and golden.is_legal("bb") and not golden.is_legal("aa")
