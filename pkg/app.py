import streamlit as st
import os
import logging
from dataclasses import asdict

import pandas as pd

from config import Config
from frontend.diagnostics import SourceFile
from graphs.dot_export import sdg_to_dot
from services.pipeline import ExitCode, Pipeline, PipelineOptions
from services.session_store import SessionStore
from syntax.printer import show_path, show_program, show_type
from typecheck.checker import build_contexts
from typecheck.errors import TypeCheckFailure

# --- Logging ---
if not os.path.exists(Config.LOG_DIR):
    os.makedirs(Config.LOG_DIR)

logging.basicConfig(level=logging.INFO,
                    format='%(asctime)s - %(levelname)s - %(message)s',
                    handlers=[
                        logging.FileHandler(Config.LOG_FILE),
                        logging.StreamHandler()
                    ])
logger = logging.getLogger(__name__)

PASTE = "(write your own)"


def corpus_programs() -> list[str]:
    if not os.path.isdir(Config.CORPUS_DIR):
        return []
    return sorted(f for f in os.listdir(Config.CORPUS_DIR) if f.endswith(Config.SOURCE_SUFFIX))


def load_program(name: str) -> str:
    if name == PASTE:
        return ""
    with open(os.path.join(Config.CORPUS_DIR, name), encoding="utf-8") as f:
        return f.read()


def show_result(result) -> None:
    """Diagnostics, main type and assert outcomes of one pipeline run."""
    if result.exit_code is ExitCode.OK:
        st.success(f"main : {show_type(result.main_type)}")
    elif result.main_type is not None:
        st.info(f"main : {show_type(result.main_type)}")

    for outcome in result.asserts:
        relation = "<:" if outcome.directive.expected else "</:"
        text = f"assert {show_type(outcome.directive.lhs)} {relation} {show_type(outcome.directive.rhs)}"
        if outcome.passed:
            st.write(f"✅ `{text}`")
        else:
            st.write(f"❌ `{text}`")

    for diag in result.diagnostics:
        message = f"**{diag.code}** line {diag.span.line if diag.span else 1}: {diag.message}"
        if diag.expected is not None:
            message += f"\n\nexpected `{diag.expected}`, found `{diag.actual}`"
        st.error(message)
        if diag.notes:
            st.code("\n".join(diag.notes), language="text")

    if result.program is not None:
        with st.expander("Desugared program"):
            st.code(show_program(result.program), language="text")


def show_graph(result) -> None:
    if result.sdg is None:
        st.write("The dependency graph is built once the program parses.")
        return
    try:
        delta, _ = build_contexts(result.program)
    except TypeCheckFailure:
        delta = None
    st.graphviz_chart(sdg_to_dot(result.sdg, delta))


# --- Streamlit UI ---
def main():
    st.set_page_config(page_title="Nominal Wyvern Playground", layout="wide")
    st.title("Nominal Wyvern Playground")

    # --- Sidebar for options ---
    st.sidebar.header("⚙️ Checker Options")
    choice = st.sidebar.selectbox("Program:", [PASTE] + corpus_programs())
    use_expansion = st.sidebar.checkbox("Use expansion", value=True)
    use_prelude = st.sidebar.checkbox("Prepend prelude", value=choice == "set_objects.nwyv")
    avoid_fuel = st.sidebar.number_input("Avoidance fuel:", min_value=0, value=Config.AVOID_FUEL)
    trace = st.sidebar.checkbox("Record derivation traces", value=False)

    options = PipelineOptions(use_expansion=use_expansion, avoid_fuel=int(avoid_fuel), trace=trace,
                              prelude_path=Config.PRELUDE_FILE if use_prelude else None)
    pipeline = Pipeline(options)

    # --- Program section ---
    source_text = st.text_area("Program:", value=load_program(choice), height=360, key=f"source_{choice}")
    label = choice if choice != PASTE else "<playground>"

    col1, col2 = st.columns(2)
    with col1:
        check_clicked = st.button("Check Program", key="check_button", use_container_width=True)
    with col2:
        fuel = st.slider("Evaluation fuel:", min_value=0, max_value=Config.PLAYGROUND_EVAL_FUEL,
                         value=Config.DEFAULT_EVAL_FUEL)
        run_clicked = st.button("Evaluate", key="run_button", use_container_width=True)

    if check_clicked or run_clicked:
        if not source_text.strip():
            st.warning("Please enter a program before checking.")
        else:
            with st.spinner("Checking..."):
                src = SourceFile(label, source_text)
                result = pipeline.run_source(src, fuel) if run_clicked else pipeline.check_source(src)
                SessionStore.record(label, result)
            show_result(result)
            if result.outcome is not None and not result.outcome.stuck:
                entry = result.outcome.heap.get(result.outcome.result)
                st.success(f"Evaluated to {show_path(result.outcome.result)} "
                           f"with {len(result.outcome.heap)} object(s) on the heap")
                st.caption(f"Members: {', '.join(entry.labels) or '(none)'}")

            st.subheader("Subtype Dependency Graph")
            show_graph(result)

    # --- History ---
    st.subheader("Checked Programs")
    history = SessionStore.entries()
    if not history:
        st.write("Check a program to see its results here!")
    else:
        st.dataframe(pd.DataFrame([asdict(e) for e in history]), use_container_width=True)
        if st.button("Clear History", key="clear_button"):
            SessionStore.clear()

    st.caption("Developed with Streamlit")


if __name__ == "__main__":
    main()
