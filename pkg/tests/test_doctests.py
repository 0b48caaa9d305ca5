import doctest
import importlib

import pytest

MODULES = ["pyramid", "crystal", "kl", "bases", "characters", "classify", "yangian2"]


@pytest.mark.parametrize("name", MODULES)
def test_module_examples(name):
    module = importlib.import_module(f"wchar.{name}")
    result = doctest.testmod(module, optionflags=doctest.ELLIPSIS)
    assert result.failed == 0
