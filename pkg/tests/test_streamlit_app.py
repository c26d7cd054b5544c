import os

import pytest

AppTest = pytest.importorskip("streamlit.testing.v1").AppTest

APP = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "streamlit_app.py")


def test_page_renders_without_uploads():
    at = AppTest.from_file(APP, default_timeout=60).run()
    assert not at.exception
    assert "Evaluate" in [h.value for h in at.subheader]
    assert any("gold and predicted" in c.value for c in at.caption)
    # the default sem-tag/category pair in the semantics panel
    assert at.text_input[0].value == "N"
