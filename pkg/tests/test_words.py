import pytest

from apsi import InputError, Pos, Word


def test_pos_parse_accepts_short_and_long_tags():
    assert Pos.parse("n") is Pos.NOUN
    assert Pos.parse("noun") is Pos.NOUN
    assert Pos.parse("V") is Pos.VERB
    assert Pos.parse(" verb ") is Pos.VERB
    assert Pos.parse("o") is Pos.OTHER
    assert Pos.parse("other") is Pos.OTHER


def test_pos_parse_rejects_unknown_tags():
    with pytest.raises(InputError, match="adj"):
        Pos.parse("adj")


def test_pos_short_codes():
    assert Pos.NOUN.short == "n"
    assert Pos.VERB.short == "v"
    assert Pos.OTHER.short == "o"


def test_word_make_lowercases_and_parses_pos():
    word = Word.make("House", "n")
    assert word.lemma == "house"
    assert word.pos is Pos.NOUN


def test_word_rejects_empty_lemma():
    with pytest.raises(InputError, match="non-empty"):
        Word("", Pos.NOUN)


def test_word_rejects_whitespace_lemma():
    with pytest.raises(InputError, match="underscores"):
        Word("real estate", Pos.NOUN)


def test_word_allows_underscore_lemma():
    assert Word("real_estate", Pos.NOUN).lemma == "real_estate"


def test_word_sort_key_orders_by_lemma_then_pos():
    words = [Word("b", Pos.NOUN), Word("a", Pos.VERB), Word("a", Pos.NOUN)]
    ordered = sorted(words, key=lambda w: w.sort_key)
    assert ordered == [Word("a", Pos.NOUN), Word("a", Pos.VERB), Word("b", Pos.NOUN)]


def test_word_str_uses_short_pos():
    assert str(Word("buy", Pos.VERB)) == "buy/v"


def test_word_equality_and_hash():
    assert Word("buy", Pos.VERB) == Word("buy", Pos.VERB)
    assert Word("buy", Pos.VERB) != Word("buy", Pos.NOUN)
    assert len({Word("buy", Pos.VERB), Word("buy", Pos.VERB)}) == 1
