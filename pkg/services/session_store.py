import logging
from dataclasses import dataclass
from datetime import datetime

import streamlit as st

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class HistoryEntry:
    checked_at: str
    label: str
    exit_code: int
    main_type: str
    diagnostics: int


class SessionStore:
    """
    Keeps the playground's history of checked programs in Streamlit's session_state,
    so every browser tab sees its own list across reruns.
    """
    KEY = "nomwyv_history"

    @staticmethod
    def _history() -> list:
        if SessionStore.KEY not in st.session_state:
            st.session_state[SessionStore.KEY] = []
            logger.info("Initialized playground history in session_state.")
        return st.session_state[SessionStore.KEY]

    @staticmethod
    def record(label: str, result) -> HistoryEntry:
        """Stores one pipeline result; newest entries come first."""
        entry = HistoryEntry(
            checked_at=datetime.now().strftime("%H:%M:%S"),
            label=label,
            exit_code=int(result.exit_code),
            main_type=str(result.to_json()["main_type"] or "-"),
            diagnostics=len(result.diagnostics),
        )
        SessionStore._history().insert(0, entry)
        logger.info(f"Recorded playground check of {label}: exit {entry.exit_code}")
        return entry

    @staticmethod
    def entries() -> list:
        return list(SessionStore._history())

    @staticmethod
    def clear() -> None:
        st.session_state[SessionStore.KEY] = []
