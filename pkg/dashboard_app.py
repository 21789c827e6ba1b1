import streamlit as st
import os
import re
import logging
import pandas as pd
import plotly.express as px
from config import Config # Import Config to get log file path

# --- Logging ---
if not os.path.exists(Config.LOG_DIR):
    os.makedirs(Config.LOG_DIR)

logging.basicConfig(level=logging.INFO,
                    format='%(asctime)s - %(levelname)s - %(message)s',
                    handlers=[
                        logging.FileHandler(Config.LOG_FILE),
                        logging.StreamHandler()
                    ])

# --- Dashboard Configuration ---
# User will manually refresh the dashboard.

FUZZ_RECORD = re.compile(
    r"^(?P<timestamp>\S+ \S+) - INFO - Fuzz case seed=(?P<seed>-?\d+) queries=(?P<queries>\d+) "
    r"agree=(?P<agree>\d+) disagree=(?P<disagree>\d+) unknown=(?P<unknown>\d+) "
    r"max_steps=(?P<max_steps>\d+) elapsed_ms=(?P<elapsed_ms>[\d.]+)"
)
COUNT_COLUMNS = ["seed", "queries", "agree", "disagree", "unknown", "max_steps"]


# --- Log Parsing Logic ---
def parse_fuzz_log(log_file_path: str) -> pd.DataFrame:
    """
    Reads every fuzz case record from the log file into one row per case.
    Lines that are not fuzz records are skipped.
    """
    rows = []
    try:
        if not os.path.exists(log_file_path):
            st.warning(f"Log file not found at: {log_file_path}. No data to display.")
            return pd.DataFrame(columns=["timestamp"] + COUNT_COLUMNS + ["elapsed_ms"])

        with open(log_file_path, "r") as f:
            for line in f:
                match = FUZZ_RECORD.search(line.strip())
                if match:
                    rows.append(match.groupdict())
    except Exception as e:
        st.error(f"Error parsing log file: {e}. Please ensure the log file is accessible and not corrupted.")

    df = pd.DataFrame(rows, columns=["timestamp"] + COUNT_COLUMNS + ["elapsed_ms"])
    df[COUNT_COLUMNS] = df[COUNT_COLUMNS].astype(int)
    df["elapsed_ms"] = df["elapsed_ms"].astype(float)
    df["timestamp"] = pd.to_datetime(df["timestamp"], format="%Y-%m-%d %H:%M:%S,%f", errors="coerce")
    return df


def summarize(df: pd.DataFrame) -> dict:
    queries = int(df["queries"].sum())
    decided = int(df["agree"].sum() + df["disagree"].sum())
    return {
        "cases": len(df),
        "queries": queries,
        "agreement_rate": df["agree"].sum() / decided * 100 if decided else 0.0,
        "unknown_rate": df["unknown"].sum() / queries * 100 if queries else 0.0,
        "disagreements": int(df["disagree"].sum()),
        "max_steps": int(df["max_steps"].max()) if len(df) else 0,
    }


# --- Streamlit UI for Dashboard ---
def main():
    st.set_page_config(page_title="Subtyping Fuzz Dashboard", layout="wide")
    st.title("📊 Subtyping Fuzz Dashboard")
    st.markdown("""
        Agreement between the subtype engine and the brute-force oracle, read from the
        `nomwyv fuzz` records in the log file.
    """)
    st.markdown("---")

    # Manual Refresh Button
    if st.button("Refresh Dashboard Data", key="refresh_dashboard_button", use_container_width=True):
        st.rerun()

    st.empty().write(f"Last updated: {pd.to_datetime('now').strftime('%Y-%m-%d %H:%M:%S')}")

    df = parse_fuzz_log(Config.LOG_FILE)
    if df.empty:
        st.info("No fuzz records yet. Run `python nomwyv.py fuzz --seed 0 --cases 50` to produce some.")
        return
    stats = summarize(df)

    # --- Metrics Cards ---
    st.header("Key Metrics")
    col1, col2, col3 = st.columns(3)
    with col1:
        st.metric(label="Fuzz Cases", value=stats["cases"])
    with col2:
        st.metric(label="Agreement Rate (decided queries)", value=f"{stats['agreement_rate']:.1f}%")
    with col3:
        st.metric(label="Oracle Unknown Rate", value=f"{stats['unknown_rate']:.1f}%")

    col4, col5, col6 = st.columns(3)
    with col4:
        st.metric(label="Queries", value=stats["queries"])
    with col5:
        st.metric(label="Disagreements", value=stats["disagreements"])
    with col6:
        st.metric(label="Max Engine Steps", value=stats["max_steps"])

    st.markdown("---")

    # --- Over time ---
    st.header("Cases Over Time")
    timeline = df.melt(id_vars=["timestamp"], value_vars=["agree", "disagree", "unknown"],
                       var_name="Outcome", value_name="Queries")
    fig_timeline = px.scatter(timeline, x="timestamp", y="Queries", color="Outcome",
                              title="Query outcomes per fuzz case",
                              color_discrete_map={"agree": "green", "disagree": "red", "unknown": "gray"})
    st.plotly_chart(fig_timeline, use_container_width=True)

    fig_elapsed = px.line(df.sort_values("timestamp"), x="timestamp", y="elapsed_ms",
                          title="Time per fuzz case (ms)")
    st.plotly_chart(fig_elapsed, use_container_width=True)

    # --- Step counts ---
    st.header("Engine Step Counts")
    fig_steps = px.histogram(df, x="max_steps", nbins=30, title="Largest step count per case")
    st.plotly_chart(fig_steps, use_container_width=True)

    st.markdown("---")

    # --- Records ---
    st.header("Fuzz Records")
    only_disagreements = st.checkbox("Only cases with disagreements", value=False)
    min_seed, max_seed = int(df["seed"].min()), int(df["seed"].max())
    seeds = st.slider("Seed range:", min_value=min_seed, max_value=max(max_seed, min_seed + 1),
                      value=(min_seed, max(max_seed, min_seed + 1)))
    view = df[(df["seed"] >= seeds[0]) & (df["seed"] <= seeds[1])]
    if only_disagreements:
        view = view[view["disagree"] > 0]
    st.dataframe(view, use_container_width=True)

    st.markdown("---")
    st.caption("Dashboard powered by Streamlit and Plotly")

if __name__ == "__main__":
    main()
