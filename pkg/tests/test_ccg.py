import pytest

from ccg import WILDCARD, Atomic, Functor, parse_category
from errors import CategoryError


class TestCategories:
    def test_atomic(self):
        assert parse_category("N") == Atomic("N")
        assert parse_category("*") == WILDCARD

    def test_transitive_verb_with_roles(self):
        cat = parse_category("(S\\NP:R1)/NP:R2")
        assert cat == Functor(Functor(Atomic("S"), "\\", Atomic("NP"), "R1"), "/", Atomic("NP"), "R2")
        assert cat.roles() == ["R1", "R2"]
        assert str(cat) == "(S\\NP:R1)/NP:R2"
        assert str(cat.strip_roles()) == "(S\\NP)/NP"

    def test_slashes_associate_left(self):
        assert parse_category("S\\NP/NP") == parse_category("(S\\NP)/NP")
        assert parse_category("(N\\N)/NP") != parse_category("N\\(N/NP)")

    def test_roles_do_not_affect_the_key(self):
        assert parse_category("S\\NP:R1").strip_roles() == parse_category("S\\NP")

    @pytest.mark.parametrize("text", ["", "S\\", "(S", "S)", ":R1", "*/N", "S\\NP:", "s\\np"])
    def test_malformed(self, text):
        with pytest.raises(CategoryError):
            parse_category(text)
