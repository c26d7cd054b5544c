# streamlit_app.py

import io
import logging
import traceback

import pandas as pd
import plotly.express as px
import streamlit as st

from corpus import Corpus, read_plain, read_tagged, validate_tagged, write_tagged
from drs import show, to_fol
from errors import SemtagError
from evaluation import compare, confusion_frame, evaluate, most_confused, report_frame
from model_io import dumps_model, loads_model
from schemas import default_registry, interpret
from tagset import default_tagset
from taggers import TAGGERS

LOGGER = logging.getLogger(__name__)


# =========================
# Helpers
# =========================
def run_once_per_session(key: str) -> bool:
    if key not in st.session_state:
        st.session_state[key] = True
        return True
    return False


def uploaded_text(upload) -> str:
    return upload.getvalue().decode("utf-8")


def load_tagged_upload(upload) -> Corpus:
    return read_tagged(io.StringIO(uploaded_text(upload)))


def tag_distribution(corpus: Corpus) -> pd.DataFrame:
    rows = [{"tag": t.code, "meta": t.meta} for s in corpus.sentences for t in s.tags]
    if not rows:
        return pd.DataFrame(columns=["tag", "meta", "count"])
    df = pd.DataFrame(rows)
    return df.groupby(["tag", "meta"], sort=False).size().reset_index(name="count").sort_values("count", ascending=False)


def show_error(e: Exception):
    LOGGER.warning("%s: %s", type(e).__name__, e)
    st.error(f"{type(e).__name__}: {e}")
    with st.expander("Traceback"):
        st.text(traceback.format_exc())


# =========================
# UI
# =========================
st.set_page_config(page_title="Semantic Tagging Explorer", layout="wide")
st.title("Semantic Tagging Explorer")

if run_once_per_session("__logging__"):
    logging.basicConfig(level=logging.INFO)

with st.sidebar:
    st.header("Controls")
    st.caption("Upload a tagged corpus (token TAB tag, blank line between sentences) "
               "to train a tagger, or a trained model file to tag plain text.")
    train_upload = st.file_uploader("Tagged training corpus", type=["tsv", "txt"], key="train")
    model_upload = st.file_uploader("Trained model", type=["txt"], key="model")
    beam = st.number_input("Beam width (0 = exact)", min_value=0, max_value=500, value=20, step=5)
    preview_rows = st.number_input("Preview rows to show", 10, 2000, 100, step=10)

# =========================
# Tagset
# =========================
st.subheader("Tagset")
ts = default_tagset()
st.caption(f"Version {ts.version}: {len(ts)} sem-tags in {len(ts.meta_tags())} meta-tags; "
           f"{len(ts.new_tags())} marked as new.")
with st.expander("Show tag table"):
    st.dataframe(ts.frame(), use_container_width=True)

st.divider()

# =========================
# Training corpus
# =========================
st.subheader("Training corpus")
model = None
if train_upload is None and model_upload is None:
    st.info("Upload a tagged corpus or a model in the sidebar to begin.")

if train_upload is not None:
    problems, n_sentences = validate_tagged(io.StringIO(uploaded_text(train_upload)))
    if problems:
        st.warning(f"{len(problems)} problem(s) in the uploaded corpus")
        st.dataframe(pd.DataFrame({"problem": [str(p) for p in problems[:int(preview_rows)]]}))
    else:
        corpus = load_tagged_upload(train_upload)
        st.write(f"**Sentences:** {len(corpus):,} | **Tokens:** {corpus.token_total:,}")
        dist = tag_distribution(corpus)
        if not dist.empty:
            fig = px.bar(dist, x="tag", y="count", color="meta", title="Tag distribution")
            st.plotly_chart(fig, use_container_width=True)
        train, _ = TAGGERS["trigram"]
        try:
            with st.spinner("Training trigram tagger…"):
                model = train(corpus)
            st.success(f"Trained on {corpus.token_total:,} tokens.")
            st.download_button("Download model", dumps_model(model).encode("utf-8"),
                               file_name="semtag-model.txt", mime="text/plain")
        except SemtagError as e:
            show_error(e)

if model is None and model_upload is not None:
    try:
        model = loads_model(uploaded_text(model_upload))
        st.success("Model loaded.")
    except SemtagError as e:
        show_error(e)

if model is not None and int(beam) != model.beam_width:
    model = model.with_config(beam_width=int(beam))

st.divider()

# =========================
# Tag text
# =========================
st.subheader("Tag text")
text = st.text_area("One sentence per line, tokens separated by spaces (use ~ inside multiword units)",
                    value="Every man walks .")
if model is None:
    st.caption("No model yet.")
elif text.strip():
    try:
        _, tag_corpus = TAGGERS["trigram"]
        tagged = tag_corpus(model, read_plain(io.StringIO(text)))
        rows = [{"sentence": i, "token": item.surface, "tag": item.tag.code,
                 "meta": item.tag.meta, "gloss": item.tag.gloss}
                for i, s in enumerate(tagged.sentences) for item in s.items]
        st.dataframe(pd.DataFrame(rows).head(int(preview_rows)), use_container_width=True)
        st.download_button("Download tagged", write_tagged(tagged).encode("utf-8"),
                           file_name="tagged.tsv", mime="text/tab-separated-values")
    except SemtagError as e:
        show_error(e)

st.divider()

# =========================
# Evaluation
# =========================
st.subheader("Evaluate")
st.caption("Upload gold and predicted tagged files to score them, or gold alone to score the current model.")
ec1, ec2 = st.columns(2)
with ec1:
    gold_upload = st.file_uploader("Gold tagged corpus", type=["tsv", "txt"], key="gold")
with ec2:
    predicted_upload = st.file_uploader("Predicted tagged corpus", type=["tsv", "txt"], key="predicted")
if gold_upload is not None and (predicted_upload is not None or model is not None):
    try:
        gold = load_tagged_upload(gold_upload)
        if predicted_upload is not None:
            predicted = load_tagged_upload(predicted_upload)
            scored = "uploaded predictions"
        else:
            _, tag_corpus = TAGGERS["trigram"]
            predicted = tag_corpus(model, gold.strip_tags())
            scored = "trigram model"
        report = evaluate(gold, predicted)
        st.caption(f"Scoring the {scored} against {gold.token_total:,} gold tokens.")
        col1, col2 = st.columns(2)
        with col1:
            st.metric("Accuracy", f"{report.accuracy:.4f}")
        with col2:
            st.metric("Meta-tag accuracy", f"{report.meta_accuracy:.4f}")

        if train_upload is not None:
            train_baseline, tag_baseline = TAGGERS["baseline"]
            baseline = train_baseline(load_tagged_upload(train_upload))
            summary = compare(report, evaluate(gold, tag_baseline(baseline, gold.strip_tags())))
            st.write(f"**Against the most-frequent-tag baseline:** accuracy "
                     f"{summary.accuracy_b:.4f}, delta {summary.accuracy_delta:+.4f}; "
                     f"only {scored} right {summary.only_a}, only baseline right {summary.only_b}")

        st.dataframe(report_frame(report), use_container_width=True)

        cm = confusion_frame(report)
        if not cm.empty:
            fig = px.imshow(cm, labels=dict(x="predicted", y="gold", color="tokens"),
                            title="Confusion matrix", aspect="auto")
            st.plotly_chart(fig, use_container_width=True)
        top = most_confused(report, 10)
        if top:
            st.write("**Most confused**")
            st.dataframe(pd.DataFrame([(g.code, p.code, n) for g, p, n in top],
                                      columns=["gold", "predicted", "count"]))
    except SemtagError as e:
        show_error(e)
elif gold_upload is not None:
    st.warning("Upload predictions, or load or train a model first.")

st.divider()

# =========================
# Semantics
# =========================
st.subheader("Lexical semantics")
registry = default_registry()
with st.expander("Registered schemas"):
    st.dataframe(registry.frame(), use_container_width=True)

c1, c2, c3, c4 = st.columns(4)
with c1:
    sem_tag = st.selectbox("Sem-tag", [t.code for t in registry.tags()])
with c2:
    category = st.text_input("Category", value="N")
with c3:
    symbol = st.text_input("Symbol", value="man")
with c4:
    roles = st.text_input("Roles (space separated)", value="")
try:
    term = interpret(sem_tag, category, symbol, roles.split())
    st.code(show(term))
    st.caption("First-order reading")
    st.code(show(to_fol(term)))
except SemtagError as e:
    st.warning(str(e))
