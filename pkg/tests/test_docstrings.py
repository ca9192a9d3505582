import re

import pytest
import pytest_examples
from pytest_examples import CodeExample
from pytest_examples import EvalExample
from pytest_examples import find_examples

# Change examples print prefix to be ruff lint compatible
comment_prefix = "# > "
pytest_examples.run_code.comment_prefix = comment_prefix
pytest_examples.run_code.comment_prefix_re = re.compile(
    f"^ *{re.escape(comment_prefix)}", re.MULTILINE
)


def _check(example: CodeExample, eval_example: EvalExample):
    if eval_example.update_examples:
        eval_example.format_ruff(example)
        if "tag:skip-run" not in example.prefix_tags():
            eval_example.run_print_update(example)
    else:
        eval_example.lint_ruff(example)
        if "tag:skip-run" not in example.prefix_tags():
            eval_example.run_print_check(example)


# --------------------------------------------------------------------------- #
# Spatial                                                                     #
# --------------------------------------------------------------------------- #


@pytest.mark.parametrize("example", find_examples("./dexassist/spatial.py"), ids=str)
def test_docstrings_spatial(example: CodeExample, eval_example: EvalExample):
    _check(example, eval_example)


# --------------------------------------------------------------------------- #
# Models                                                                      #
# --------------------------------------------------------------------------- #


@pytest.mark.parametrize("example", find_examples("./dexassist/models/"), ids=str)
def test_docstrings_models(example: CodeExample, eval_example: EvalExample):
    _check(example, eval_example)


# --------------------------------------------------------------------------- #
# Retarget                                                                    #
# --------------------------------------------------------------------------- #


@pytest.mark.parametrize("example", find_examples("./dexassist/retarget/"), ids=str)
def test_docstrings_retarget(example: CodeExample, eval_example: EvalExample):
    _check(example, eval_example)


# --------------------------------------------------------------------------- #
# Intervene                                                                   #
# --------------------------------------------------------------------------- #


@pytest.mark.parametrize("example", find_examples("./dexassist/intervene/"), ids=str)
def test_docstrings_intervene(example: CodeExample, eval_example: EvalExample):
    _check(example, eval_example)


# --------------------------------------------------------------------------- #
# Sim                                                                         #
# --------------------------------------------------------------------------- #


@pytest.mark.parametrize("example", find_examples("./dexassist/sim/"), ids=str)
def test_docstrings_sim(example: CodeExample, eval_example: EvalExample):
    _check(example, eval_example)
